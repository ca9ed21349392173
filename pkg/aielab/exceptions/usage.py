from __future__ import annotations

from dataclasses import dataclass


class UsageError(Exception): ...


class EpisodeFinished(UsageError): ...


class InvalidAction(UsageError): ...


@dataclass(slots=True)
class MissingSeries(UsageError):
    series: str
    kind: str

    def __str__(self) -> str:
        return (
            f"Для графика {self.kind!r} в записях нет ряда {self.series!r}"
        )

    __repr__ = __str__
