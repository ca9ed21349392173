"""Записи прогона и их файловое представление.

Каталог одного seed::

    metrics.csv                 по строке на эпизод
    visits.csv                  row,col,count (сетка)
    coverage.csv                посещения окна покрытия (сетка)
    loss_maps/episode-N.csv     row,col,loss (сетка с RND)
    trajectories/episode-N.jsonl
    actions/episode-N.json      журнал действий для replay (UCAV)
    checkpoint/                 финальный чекпоинт агента
    run.json                    метаданные, включая время работы
    error.json                  только для прерванного прогона

Время работы пишется только в ``run.json``, поэтому ``metrics.csv``
побайтно воспроизводим для фиксированных конфигурации и seed.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from ..agents.agent import EpisodeRecord
from ..enums.terminal_cause import TerminalCause
from ..enums.variant import AgentVariant
from ..envs.ucav.env import TrajectoryRecord
from ..exceptions.usage import UsageError
from ..loggers import logger_harness
from .metrics import exploration_score

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from .metrics import ExplorationScore

METRICS_FIELDS = (
    "episode",
    "length",
    "extrinsic_return",
    "intrinsic_sum",
    "penalty_count",
    "sil_updated_fraction",
    "predictor_loss",
    "a2c_loss",
    "cause",
    "final_position",
)

METRICS_FILE = "metrics.csv"
VISITS_FILE = "visits.csv"
COVERAGE_FILE = "coverage.csv"
RUN_FILE = "run.json"
ERROR_FILE = "error.json"
LOSS_MAP_DIR = "loss_maps"
TRAJECTORY_DIR = "trajectories"
ACTION_DIR = "actions"
CHECKPOINT_DIR = "checkpoint"


def seed_dir_name(seed: int) -> str:
    return f"seed-{seed}"


def episode_file(episode: int, suffix: str) -> str:
    return f"episode-{episode}{suffix}"


class RunMeta(BaseModel):
    """Содержимое ``run.json``."""

    model_config = ConfigDict(extra="forbid")

    seed: int
    variant: AgentVariant
    environment: Literal["grid", "ucav"]
    episodes_planned: int
    episodes_completed: int
    wall_clock_seconds: float
    grid_start: tuple[int, int] | None = None
    checkpoint: str | None = None


class ErrorManifest(BaseModel):
    """Содержимое ``error.json`` прерванного прогона."""

    model_config = ConfigDict(extra="forbid")

    seed: int
    episode: int
    error_type: str
    message: str


@dataclass(slots=True)
class RunRecord:
    """
    Результат обучения на одном seed.

    Эпизоды нумеруются подряд с 1. Все графики и сводки
    строятся только по этим данным.
    """

    seed: int
    variant: AgentVariant
    environment: Literal["grid", "ucav"]
    episodes_planned: int
    episodes: list[EpisodeRecord] = field(default_factory=list)
    visit_counts: NDArray[np.int64] | None = None
    coverage_counts: NDArray[np.int64] | None = None
    grid_start: tuple[int, int] | None = None
    loss_maps: dict[int, NDArray[np.float64]] = field(default_factory=dict)
    trajectories: dict[int, list[TrajectoryRecord]] = field(
        default_factory=dict
    )
    action_logs: dict[int, list[int]] = field(default_factory=dict)
    checkpoint: Path | None = None
    wall_clock_seconds: float = 0.0
    error: ErrorManifest | None = None

    def __post_init__(self) -> None:
        self.check_contiguous()

    def check_contiguous(self) -> None:
        for expected, record in enumerate(self.episodes, start=1):
            if record.episode != expected:
                raise UsageError(
                    f"seed {self.seed}: эпизод {record.episode} "
                    f"на позиции {expected}"
                )

    @property
    def failed(self) -> bool:
        return self.error is not None

    @property
    def returns(self) -> NDArray[np.float64]:
        return np.array([r.extrinsic_return for r in self.episodes])

    @property
    def causes(self) -> list[TerminalCause]:
        return [r.cause for r in self.episodes]

    def exploration(self) -> ExplorationScore | None:
        """
        Оценка исследования сетки.

        Считается по окну покрытия ``coverage_counts``, если оно
        задано, иначе по всем посещениям. Для UCAV ``None``.
        """

        counts = self.coverage_counts
        if counts is None:
            counts = self.visit_counts
        if counts is None or self.grid_start is None:
            return None
        return exploration_score(counts, self.grid_start)

    def meta(self) -> RunMeta:
        return RunMeta(
            seed=self.seed,
            variant=self.variant,
            environment=self.environment,
            episodes_planned=self.episodes_planned,
            episodes_completed=len(self.episodes),
            wall_clock_seconds=self.wall_clock_seconds,
            grid_start=self.grid_start,
            checkpoint=(
                None if self.checkpoint is None else self.checkpoint.name
            ),
        )


def _format_float(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def _csv_text(fieldnames: tuple[str, ...], rows: list[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def metrics_csv(episodes: list[EpisodeRecord]) -> str:
    rows = [
        {
            "episode": r.episode,
            "length": r.length,
            "extrinsic_return": _format_float(r.extrinsic_return),
            "intrinsic_sum": _format_float(r.intrinsic_sum),
            "penalty_count": r.penalty_count,
            "sil_updated_fraction": _format_float(r.sil_updated_fraction),
            "predictor_loss": _format_float(r.predictor_loss),
            "a2c_loss": _format_float(r.a2c_loss),
            "cause": str(r.cause),
            "final_position": ";".join(
                _format_float(c) for c in r.final_position
            ),
        }
        for r in episodes
    ]
    return _csv_text(METRICS_FIELDS, rows)


def grid_csv(values: NDArray, column: str) -> str:
    """Матрица ``[row, col]`` в длинном формате ``row,col,<column>``."""
    integral = np.issubdtype(values.dtype, np.integer)
    rows = [
        {
            "row": row,
            "col": col,
            column: (
                int(values[row, col])
                if integral
                else _format_float(values[row, col])
            ),
        }
        for row in range(values.shape[0])
        for col in range(values.shape[1])
    ]
    return _csv_text(("row", "col", column), rows)


def parse_metrics_csv(text: str) -> list[EpisodeRecord]:
    records = []
    for row in csv.DictReader(io.StringIO(text)):
        position = row["final_position"]
        records.append(
            EpisodeRecord(
                episode=int(row["episode"]),
                length=int(row["length"]),
                extrinsic_return=float(row["extrinsic_return"]),
                intrinsic_sum=float(row["intrinsic_sum"]),
                penalty_count=int(row["penalty_count"]),
                sil_updated_fraction=float(row["sil_updated_fraction"]),
                predictor_loss=(
                    float(row["predictor_loss"])
                    if row["predictor_loss"]
                    else None
                ),
                a2c_loss=float(row["a2c_loss"]),
                cause=TerminalCause(row["cause"]),
                final_position=tuple(
                    float(c) for c in position.split(";") if c
                ),
            )
        )
    return records


def parse_grid_csv(text: str, dtype: type = np.float64) -> NDArray:
    rows = list(csv.reader(io.StringIO(text)))[1:]
    if not rows:
        return np.zeros((0, 0), dtype=dtype)
    n_rows = max(int(r[0]) for r in rows) + 1
    n_cols = max(int(r[1]) for r in rows) + 1
    grid = np.zeros((n_rows, n_cols), dtype=dtype)
    for row, col, value in rows:
        grid[int(row), int(col)] = dtype(value)
    return grid


def _episode_index(path: Path) -> int:
    return int(path.name.split(".")[0].removeprefix("episode-"))


def load_run_record(seed_dir: str | Path) -> RunRecord:
    """
    Читает каталог одного seed обратно в ``RunRecord``.

    Raises:
        UsageError: Каталог не содержит ``run.json`` или он повреждён.
    """

    path = Path(seed_dir)
    try:
        meta = RunMeta.model_validate_json(
            (path / RUN_FILE).read_text(encoding="utf-8")
        )
    except (OSError, ValidationError) as e:
        raise UsageError(f"{path} не является каталогом прогона: {e}") from e

    record = RunRecord(
        seed=meta.seed,
        variant=meta.variant,
        environment=meta.environment,
        episodes_planned=meta.episodes_planned,
        grid_start=meta.grid_start,
        wall_clock_seconds=meta.wall_clock_seconds,
        checkpoint=(
            None if meta.checkpoint is None else path / meta.checkpoint
        ),
    )

    metrics = path / METRICS_FILE
    if metrics.exists():
        record.episodes = parse_metrics_csv(metrics.read_text("utf-8"))
        record.check_contiguous()
    visits = path / VISITS_FILE
    if visits.exists():
        record.visit_counts = parse_grid_csv(
            visits.read_text("utf-8"), np.int64
        )
    coverage = path / COVERAGE_FILE
    if coverage.exists():
        record.coverage_counts = parse_grid_csv(
            coverage.read_text("utf-8"), np.int64
        )
    for file in sorted((path / LOSS_MAP_DIR).glob("episode-*.csv")):
        record.loss_maps[_episode_index(file)] = parse_grid_csv(
            file.read_text("utf-8")
        )
    for file in sorted((path / TRAJECTORY_DIR).glob("episode-*.jsonl")):
        record.trajectories[_episode_index(file)] = [
            TrajectoryRecord.model_validate_json(line)
            for line in file.read_text("utf-8").splitlines()
            if line
        ]
    error = path / ERROR_FILE
    if error.exists():
        record.error = ErrorManifest.model_validate_json(
            error.read_text("utf-8")
        )
    return record


def load_run_records(run_dir: str | Path) -> list[RunRecord]:
    """Все seed каталога эксперимента в порядке возрастания seed."""
    path = Path(run_dir)
    records = [
        load_run_record(child)
        for child in path.glob("seed-*")
        if (child / RUN_FILE).exists()
    ]
    if not records:
        raise UsageError(f"В {path} нет результатов прогонов")
    records.sort(key=lambda r: r.seed)
    logger_harness.debug("Загружено %d прогонов из %s", len(records), path)
    return records
