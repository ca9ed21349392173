"""Графики в SVG.

Все графики строятся только по ``RunRecord``: повторный вызов
не обращается к средам и сетям. Вывод детерминирован, в SVG
не пишется дата, идентификаторы элементов строятся от
фиксированной соли.
"""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING

import matplotlib as mpl
import numpy as np
from matplotlib.figure import Figure

from ..enums.training import PlotKind
from ..exceptions.usage import MissingSeries, UsageError
from ..loggers import logger_harness
from .metrics import learning_curve, shotdown_curve

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from .records import RunRecord

SVG_SALT = "aielab"
PER_SEED_KINDS = frozenset(
    {PlotKind.HEATMAP, PlotKind.LOSS_MAP, PlotKind.TRAJECTORY_PROJECTION}
)

MEAN_COLOR = "tab:blue"
WORST_COLOR = "lightsteelblue"


def _learning_curve(fig: Figure, records: Sequence[RunRecord]) -> None:
    if not any(r.episodes for r in records):
        raise MissingSeries("episodes", PlotKind.LEARNING_CURVE)
    curve = learning_curve([r.returns for r in records if r.episodes])
    ax = fig.add_subplot()
    x = curve.episodes
    if curve.worst is not None:
        ax.fill_between(
            x, curve.worst, curve.mean, color=WORST_COLOR, alpha=0.5
        )
        ax.plot(x, curve.worst, color=WORST_COLOR, linewidth=0.8)
    ax.plot(x, curve.mean, color=MEAN_COLOR, linewidth=1.2)
    ax.set_xlabel("episode")
    ax.set_ylabel("extrinsic return")
    ax.grid(visible=True, alpha=0.25)


def _shotdown(fig: Figure, records: Sequence[RunRecord]) -> None:
    ucav = [r for r in records if r.environment == "ucav" and r.episodes]
    if not ucav:
        raise MissingSeries("ucav causes", PlotKind.SHOTDOWN)
    ax = fig.add_subplot()
    for record in ucav:
        curve = shotdown_curve(record.causes)
        ax.plot(
            np.arange(1, curve.size + 1),
            curve,
            linewidth=1.0,
            label=f"seed {record.seed}",
        )
    ax.set_ylim(-0.05, 1.05)
    ax.set_xlabel("episode")
    ax.set_ylabel("P(shot down)")
    ax.legend(loc="upper right", frameon=False)
    ax.grid(visible=True, alpha=0.25)


def _heatmap(fig: Figure, record: RunRecord) -> None:
    if record.visit_counts is None:
        raise MissingSeries("visit_counts", PlotKind.HEATMAP)
    counts = record.visit_counts
    ax = fig.add_subplot()
    image = ax.imshow(
        counts,
        origin="lower",
        cmap="viridis",
        vmin=float(counts.min()),
        vmax=float(counts.max()),
        interpolation="nearest",
    )
    fig.colorbar(image, ax=ax, label="visits")
    ax.set_title(f"seed {record.seed}")
    ax.set_xlabel("x")
    ax.set_ylabel("y")


def _loss_map(fig: Figure, record: RunRecord) -> None:
    if not record.loss_maps:
        raise MissingSeries("loss_maps", PlotKind.LOSS_MAP)
    episode = max(record.loss_maps)
    values = record.loss_maps[episode]
    ax = fig.add_subplot()
    image = ax.imshow(
        values, origin="lower", cmap="magma", interpolation="nearest"
    )
    fig.colorbar(image, ax=ax, label="predictor loss")
    ax.set_title(f"seed {record.seed}, episode {episode}")
    ax.set_xlabel("x")
    ax.set_ylabel("y")


def _trajectory(fig: Figure, record: RunRecord) -> None:
    if not record.trajectories:
        raise MissingSeries("trajectories", PlotKind.TRAJECTORY_PROJECTION)
    episode = max(record.trajectories)
    points = record.trajectories[episode]
    x = np.array([p.x for p in points])
    y = np.array([p.y for p in points])
    z = np.array([p.z for p in points])

    top, side = fig.subplots(1, 2)
    top.plot(x, y, color=MEAN_COLOR, linewidth=1.0)
    top.plot(x[:1], y[:1], "o", color="tab:green")
    top.plot(x[-1:], y[-1:], "x", color="tab:red")
    top.set_xlabel("x, km")
    top.set_ylabel("y, km")
    top.set_aspect("equal", adjustable="datalim")

    ground = np.concatenate(
        [[0.0], np.cumsum(np.hypot(np.diff(x), np.diff(y)))]
    )
    side.plot(ground, z, color=MEAN_COLOR, linewidth=1.0)
    side.set_xlabel("ground track, km")
    side.set_ylabel("z, km")

    fig.suptitle(f"seed {record.seed}, episode {episode}: {points[-1].cause}")


def build_figure(records: Sequence[RunRecord], kind: PlotKind) -> Figure:
    """
    Строит фигуру графика.

    Для карт и траекторий используется первая запись.

    Raises:
        MissingSeries: В записях нет нужного ряда.
        UsageError: Передан пустой список записей.
    """

    if not records:
        raise UsageError("Нет записей для построения графика")
    fig = Figure(figsize=(6.4, 4.8), layout="constrained")
    match kind:
        case PlotKind.LEARNING_CURVE:
            _learning_curve(fig, records)
        case PlotKind.SHOTDOWN:
            _shotdown(fig, records)
        case PlotKind.HEATMAP:
            _heatmap(fig, records[0])
        case PlotKind.LOSS_MAP:
            _loss_map(fig, records[0])
        case PlotKind.TRAJECTORY_PROJECTION:
            fig.set_size_inches(10.0, 4.8)
            _trajectory(fig, records[0])
    return fig


def save_svg(fig: Figure, path: Path) -> Path:
    with mpl.rc_context({"svg.hashsalt": SVG_SALT, "svg.fonttype": "path"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path


def emit_plots(
    records: Sequence[RunRecord],
    kinds: Iterable[PlotKind],
    out_dir: str | Path,
) -> list[Path]:
    """
    Сохраняет графики в ``out_dir``.

    Сводные графики пишутся в ``<kind>.svg``, карты и траектории
    по одному файлу на seed: ``<kind>-seed-<seed>.svg``.

    Raises:
        MissingSeries: В записях нет нужного ряда.
    """

    target = Path(out_dir)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for kind in kinds:
        if kind in PER_SEED_KINDS:
            for record in records:
                fig = build_figure([record], kind)
                name = f"{kind}-seed-{record.seed}.svg"
                written.append(save_svg(fig, target / name))
        else:
            fig = build_figure(records, kind)
            written.append(save_svg(fig, target / f"{kind}.svg"))
    logger_harness.info("Сохранено графиков: %d в %s", len(written), target)
    return written
