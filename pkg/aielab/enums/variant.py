from enum import auto, unique

from .._compat import StrEnum


@unique
class AgentVariant(StrEnum):
    """
    Вариант алгоритма.

    `ASIL` это A2C + SIL без RND.
    `AIE1` добавляет RND с онлайн-обучением предиктора.
    `AIE2` добавляет к AIE1 внутренний штраф.
    `AIE3` добавляет к AIE2 буфер признаков для предиктора.
    """

    ASIL = auto()
    AIE1 = auto()
    AIE2 = auto()
    AIE3 = auto()

    @property
    def uses_rnd(self) -> bool:
        return self is not AgentVariant.ASIL

    @property
    def uses_penalty(self) -> bool:
        return self in (AgentVariant.AIE2, AgentVariant.AIE3)

    @property
    def uses_feature_replay(self) -> bool:
        return self is AgentVariant.AIE3
