from __future__ import annotations

from dataclasses import dataclass


@dataclass(slots=True)
class RunFailed(Exception):
    seed: int
    episode: int
    cause: BaseException | None = None

    def __str__(self) -> str:
        parts = [f"seed={self.seed}", f"episode={self.episode}"]
        if self.cause:
            parts.append(
                f"cause={self.cause.__class__.__name__}: {self.cause}"
            )
        return "RunFailed(" + ", ".join(parts) + ")"

    __repr__ = __str__
