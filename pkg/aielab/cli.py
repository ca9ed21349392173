"""Командная строка ``aielab``.

Коды возврата: 0 успех, 2 ошибка конфигурации, 3 ошибка выполнения.
"""

from __future__ import annotations

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import TYPE_CHECKING

from .agents.agent import Agent
from .enums.training import PlotKind
from .enums.variant import AgentVariant
from .exceptions.config import ConfigError
from .harness.config import load_config, preset_names
from .harness.evaluate import evaluate_policy, resolve_environment
from .harness.export import export_run
from .harness.plots import emit_plots
from .harness.records import load_run_records
from .harness.replay import replay_to_jsonl
from .harness.runner import run_experiment

if TYPE_CHECKING:
    from collections.abc import Sequence

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

logger = logging.getLogger("cli")


def _cmd_train(args: argparse.Namespace) -> int:
    config = load_config(args.config).with_overrides(
        seed=args.seed,
        episodes=args.episodes,
        output_dir=args.out,
        variant=args.variant,
    )
    records = asyncio.run(run_experiment(config))
    print(config.run_dir)
    return EXIT_RUNTIME if any(r.failed for r in records) else EXIT_OK


def _cmd_eval(args: argparse.Namespace) -> int:
    agent = Agent.resume(args.checkpoint)
    env = resolve_environment(args.scenario)
    summary = evaluate_policy(
        agent,
        env,
        args.episodes or 10,
        seed=args.seed or 0,
        greedy=args.greedy,
    )
    print(summary.model_dump_json(indent=2))
    return EXIT_OK


def _cmd_plot(args: argparse.Namespace) -> int:
    records = load_run_records(args.run_dir)
    out = Path(args.out) if args.out else Path(args.run_dir) / "plots"
    kinds = list(PlotKind) if args.kind == "all" else [PlotKind(args.kind)]
    for path in emit_plots(records, kinds, out):
        print(path)
    return EXIT_OK


def _cmd_export(args: argparse.Namespace) -> int:
    for path in asyncio.run(export_run(args.run_dir, args.out)):
        print(path)
    return EXIT_OK


def _cmd_replay(args: argparse.Namespace) -> int:
    text = replay_to_jsonl(args.action_log)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--episodes", type=int, default=None)
    common.add_argument("--out", default=None)
    common.add_argument(
        "--variant",
        choices=[str(v) for v in AgentVariant],
        default=None,
    )
    common.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
    )

    parser = argparse.ArgumentParser(
        prog="aielab",
        description="Эксперименты с исследованием среды через RND и SIL",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", parents=[common], help="обучение")
    train.add_argument(
        "config",
        help=f"путь к TOML или пресет: {', '.join(preset_names())}",
    )
    train.set_defaults(handler=_cmd_train)

    evaluate = sub.add_parser(
        "eval", parents=[common], help="оценка чекпоинта"
    )
    evaluate.add_argument("checkpoint")
    evaluate.add_argument("scenario")
    evaluate.add_argument("--greedy", action="store_true")
    evaluate.set_defaults(handler=_cmd_eval)

    plot = sub.add_parser("plot", parents=[common], help="графики SVG")
    plot.add_argument("run_dir")
    plot.add_argument("kind", choices=[*(str(k) for k in PlotKind), "all"])
    plot.set_defaults(handler=_cmd_plot)

    export = sub.add_parser(
        "export", parents=[common], help="сводные CSV"
    )
    export.add_argument("run_dir")
    export.set_defaults(handler=_cmd_export)

    replay = sub.add_parser(
        "replay", parents=[common], help="траектория по журналу действий"
    )
    replay.add_argument("action_log")
    replay.set_defaults(handler=_cmd_replay)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except ConfigError as e:
        logger.error("Ошибка конфигурации: %s", e)
        return EXIT_CONFIG
    except Exception:
        logger.exception("Ошибка выполнения")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
