from __future__ import annotations

import asyncio
import time
from concurrent.futures import ProcessPoolExecutor
from typing import TYPE_CHECKING

import aiofiles
import aiofiles.os

from ..agents.agent import Agent
from ..envs.grid import GridWorld
from ..envs.ucav.env import UcavEnvironment, trajectory_to_jsonl
from ..exceptions.harness import RunFailed
from ..loggers import logger_harness
from .metrics import VisitCounter, predictor_loss_map
from .records import (
    ACTION_DIR,
    CHECKPOINT_DIR,
    COVERAGE_FILE,
    ERROR_FILE,
    LOSS_MAP_DIR,
    METRICS_FILE,
    RUN_FILE,
    TRAJECTORY_DIR,
    VISITS_FILE,
    ErrorManifest,
    RunRecord,
    episode_file,
    grid_csv,
    metrics_csv,
    seed_dir_name,
)
from .replay import ActionLog

if TYPE_CHECKING:
    from pathlib import Path

    from .config import ExperimentConfig


def _snapshot_due(config: ExperimentConfig, episode: int) -> bool:
    return (
        episode % config.metrics.map_every == 0 or episode == config.episodes
    )


def run_seed(config: ExperimentConfig, seed: int) -> RunRecord:
    """
    Обучение на одном seed.

    Функция самодостаточна и не разделяет состояние с другими
    seed, поэтому может выполняться в отдельном процессе.
    Исключение в середине прогона не пробрасывается: возвращается
    частичная запись с ``error``.
    """

    seed_dir = config.run_dir / seed_dir_name(seed)
    env = config.environment.build()
    agent = Agent.for_env(config.agent, env, seed=seed)

    record = RunRecord(
        seed=seed,
        variant=config.agent.variant,
        environment=config.environment.kind,
        episodes_planned=config.episodes,
    )
    counter: VisitCounter | None = None
    if isinstance(env, GridWorld):
        counter = VisitCounter(
            env.config.width,
            env.config.height,
            window=config.metrics.coverage_episodes,
        )
        record.grid_start = env.config.start_cell

    started = time.perf_counter()
    episode = 0
    try:
        for episode in range(1, config.episodes + 1):
            record.episodes.append(
                agent.train_episode(env, episode, observer=counter)
            )

            if _snapshot_due(config, episode):
                if isinstance(env, GridWorld) and agent.rnd is not None:
                    record.loss_maps[episode] = predictor_loss_map(
                        agent.rnd, env
                    )
                if isinstance(env, UcavEnvironment):
                    record.trajectories[episode] = list(env.trajectory)
                    record.action_logs[episode] = list(env.action_log)

            every = config.metrics.checkpoint_every
            if every is not None and episode % every == 0:
                name = episode_file(episode, "")
                agent.save(seed_dir / "checkpoints" / name)

            if episode % config.metrics.log_every == 0:
                recent = record.episodes[-config.metrics.log_every :]
                logger_harness.info(
                    "seed %d: эпизод %d/%d, средний возврат %.3f",
                    seed,
                    episode,
                    config.episodes,
                    sum(r.extrinsic_return for r in recent) / len(recent),
                )

        record.checkpoint = agent.save(seed_dir / CHECKPOINT_DIR)
    except Exception as e:
        failure = RunFailed(seed=seed, episode=episode, cause=e)
        logger_harness.exception("Прогон прерван: %s", failure)
        record.error = ErrorManifest(
            seed=seed,
            episode=episode,
            error_type=type(e).__name__,
            message=str(e),
        )

    if counter is not None:
        record.visit_counts = counter.counts
        record.coverage_counts = counter.window_counts
    record.wall_clock_seconds = time.perf_counter() - started
    return record


async def _write_text(path: Path, text: str) -> None:
    await aiofiles.os.makedirs(path.parent, exist_ok=True)
    async with aiofiles.open(path, "w", encoding="utf-8") as f:
        await f.write(text)


async def write_run_record(
    record: RunRecord, config: ExperimentConfig
) -> Path:
    """Записывает артефакты прогона в каталог seed."""
    seed_dir = config.run_dir / seed_dir_name(record.seed)
    await aiofiles.os.makedirs(seed_dir, exist_ok=True)

    await _write_text(seed_dir / METRICS_FILE, metrics_csv(record.episodes))
    if record.visit_counts is not None:
        await _write_text(
            seed_dir / VISITS_FILE, grid_csv(record.visit_counts, "count")
        )
    if record.coverage_counts is not None:
        await _write_text(
            seed_dir / COVERAGE_FILE,
            grid_csv(record.coverage_counts, "count"),
        )
    for episode, loss_map in record.loss_maps.items():
        await _write_text(
            seed_dir / LOSS_MAP_DIR / episode_file(episode, ".csv"),
            grid_csv(loss_map, "loss"),
        )
    for episode, trajectory in record.trajectories.items():
        await _write_text(
            seed_dir / TRAJECTORY_DIR / episode_file(episode, ".jsonl"),
            trajectory_to_jsonl(trajectory),
        )
    if config.environment.kind == "ucav" and record.action_logs:
        scenario = config.environment.load_scenario()
        for episode, actions in record.action_logs.items():
            log = ActionLog(
                seed=record.seed,
                episode=episode,
                scenario=scenario,
                actions=actions,
            )
            await _write_text(
                seed_dir / ACTION_DIR / episode_file(episode, ".json"),
                log.model_dump_json(indent=2),
            )

    await _write_text(
        seed_dir / RUN_FILE, record.meta().model_dump_json(indent=2)
    )
    if record.error is not None:
        await _write_text(
            seed_dir / ERROR_FILE, record.error.model_dump_json(indent=2)
        )
        logger_harness.warning(
            "seed %d: сохранены частичные результаты (%d эпизодов)",
            record.seed,
            len(record.episodes),
        )
    return seed_dir


async def run_experiment(config: ExperimentConfig) -> list[RunRecord]:
    """
    Запускает обучение для всех seed конфигурации.

    При ``workers > 1`` seed распределяются по пулу процессов,
    иначе выполняются последовательно в отдельном потоке.
    Артефакты пишутся после завершения каждого прогона.

    Returns:
        list[RunRecord]: По записи на seed в порядке ``config.seeds``.
    """

    await aiofiles.os.makedirs(config.run_dir, exist_ok=True)
    await _write_text(
        config.run_dir / "config.json", config.model_dump_json(indent=2)
    )
    logger_harness.info(
        "Эксперимент %s: %s, %d эпизодов, seeds %s",
        config.name,
        config.agent.variant,
        config.episodes,
        list(config.seeds),
    )

    records: list[RunRecord] = []
    if config.workers > 1:
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [
                loop.run_in_executor(pool, run_seed, config, seed)
                for seed in config.seeds
            ]
            records = list(await asyncio.gather(*futures))
        for record in records:
            await write_run_record(record, config)
    else:
        for seed in config.seeds:
            record = await asyncio.to_thread(run_seed, config, seed)
            await write_run_record(record, config)
            records.append(record)

    failed = [r.seed for r in records if r.failed]
    if failed:
        logger_harness.error("Прогоны с ошибкой: seeds %s", failed)
    else:
        logger_harness.info("Эксперимент %s завершён", config.name)
    return records
