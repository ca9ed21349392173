from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import TYPE_CHECKING

import aiofiles
import aiofiles.os

from ..loggers import logger_harness
from .metrics import learning_curve, shotdown_curve
from .records import load_run_records

if TYPE_CHECKING:
    from .records import RunRecord

LEARNING_CURVE_FILE = "learning_curve.csv"
SHOTDOWN_FILE = "shotdown.csv"
EXPLORATION_FILE = "exploration.csv"


def _rows_to_csv(header: list[str], rows: list[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def learning_curve_csv(records: list[RunRecord]) -> str:
    curve = learning_curve([r.returns for r in records])
    rows = [
        [
            int(episode),
            repr(float(curve.mean[k])),
            "" if curve.worst is None else repr(float(curve.worst[k])),
        ]
        for k, episode in enumerate(curve.episodes)
    ]
    return _rows_to_csv(["episode", "mean_return", "worst_return"], rows)


def shotdown_csv(records: list[RunRecord]) -> str:
    """Накопленная вероятность поражения: по столбцу на seed и среднее."""
    curves = [shotdown_curve(r.causes) for r in records]
    length = min(c.size for c in curves)
    rows = []
    for k in range(length):
        values = [float(c[k]) for c in curves]
        mean = sum(values) / len(values)
        rows.append([k + 1, *(repr(v) for v in values), repr(mean)])
    header = ["episode", *(f"seed_{r.seed}" for r in records), "mean"]
    return _rows_to_csv(header, rows)


def exploration_csv(records: list[RunRecord]) -> str:
    rows = []
    for r in records:
        score = r.exploration()
        if score is None:
            continue
        rows.append(
            [
                r.seed,
                str(r.variant),
                *(repr(c) for c in score.coverages),
                repr(score.mean_coverage),
                repr(score.literal),
                repr(score.uniformity),
            ]
        )
    header = [
        "seed",
        "variant",
        "eq_1",
        "eq_2",
        "eq_3",
        "eq_4",
        "mean_coverage",
        "score",
        "uniformity_score",
    ]
    return _rows_to_csv(header, rows)


async def export_run(
    run_dir: str | Path, out_dir: str | Path | None = None
) -> list[Path]:
    """
    Сводные таблицы по каталогу эксперимента.

    ``shotdown.csv`` пишется только для UCAV, ``exploration.csv``
    только для сетки.

    Raises:
        UsageError: В каталоге нет результатов прогонов.
    """

    records = load_run_records(run_dir)
    target = Path(out_dir) if out_dir is not None else Path(run_dir)
    tables = {LEARNING_CURVE_FILE: learning_curve_csv(records)}
    if any(r.environment == "ucav" for r in records):
        tables[SHOTDOWN_FILE] = shotdown_csv(records)
    if any(r.visit_counts is not None for r in records):
        tables[EXPLORATION_FILE] = exploration_csv(records)

    await aiofiles.os.makedirs(target, exist_ok=True)
    written = []
    for name, text in tables.items():
        path = target / name
        async with aiofiles.open(path, "w", encoding="utf-8") as f:
            await f.write(text)
        written.append(path)
    logger_harness.info("Экспортировано %d таблиц в %s", len(written), target)
    return written
