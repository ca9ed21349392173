from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..enums.activation import Activation
from ..enums.training import PenaltyThreshold
from ..enums.variant import AgentVariant


class AgentConfig(BaseModel):
    """
    Гиперпараметры агента.

    Attributes:
        variant (AgentVariant): ASIL, AIE1, AIE2 или AIE3.
        hidden_sizes (tuple[int, ...]): Скрытые слои актор-критика.
        hidden_activation (Activation): Активация скрытых слоёв.
        lr (float): Шаг Adam актор-критика.
        gamma (float): Дисконт.
        value_coef (float): Вес слагаемого ценности A2C.
        entropy_coef (float): Вес энтропийного бонуса A2C.
        max_grad_norm (float | None): Обрезка общей нормы градиента.
        rollout_length (int | None): Длина n-шагового отрезка A2C;
            None означает обновление по всему эпизоду.
        sil_passes (int): Раунды SIL и предиктора на эпизод (M).
        sil_batch_size (int): Размер мини-батча SIL.
        sil_value_weight (float): Вес потери ценности SIL (β^sil).
        sil_capacity (int): Ёмкость буфера самоимитации.
        priority_eps (float): Добавка к приоритету.
        rnd_hidden_sizes (tuple[int, ...]): Скрытые слои RND.
        rnd_output_size (int): Размер выхода RND.
        predictor_lr (float): Шаг Adam предиктора.
        predictor_batch_size (int): Размер батча предиктора.
        predictor_steps (int): Шагов предиктора за раунд.
        feature_capacity (int): Ёмкость буфера признаков (AIE3).
        intrinsic_coef (float): Множитель внутренней награды.
        normalize_intrinsic (bool): Делить i_t на скользящее std.
        penalty_mode (PenaltyThreshold): Режим порога штрафа.
        penalty_alpha (float): Квантиль порога.
        penalty_window (int): Длина истории N.
        penalty_weight (float): Вес штрафа λ.
        penalty_floor (float): Нижняя граница i_t под логарифмом.
        penalty_static_threshold (float): Порог режима STATIC.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    variant: AgentVariant = AgentVariant.AIE3
    hidden_sizes: tuple[int, ...] = (128, 128)
    hidden_activation: Activation = Activation.TANH
    lr: float = Field(default=1e-4, gt=0)
    gamma: float = Field(default=0.99, ge=0, le=1)
    value_coef: float = Field(default=0.5, ge=0)
    entropy_coef: float = Field(default=0.01, ge=0)
    max_grad_norm: float | None = Field(default=0.5, gt=0)
    rollout_length: int | None = Field(default=None, gt=0)

    sil_passes: int = Field(default=4, ge=0)
    sil_batch_size: int = Field(default=64, gt=0)
    sil_value_weight: float = Field(default=0.01, ge=0)
    sil_capacity: int = Field(default=100_000, gt=0)
    priority_eps: float = Field(default=1e-5, gt=0)

    rnd_hidden_sizes: tuple[int, ...] = (64, 64)
    rnd_output_size: int = Field(default=16, gt=0)
    predictor_lr: float = Field(default=1e-4, gt=0)
    predictor_batch_size: int = Field(default=64, gt=0)
    predictor_steps: int = Field(default=1, gt=0)
    feature_capacity: int = Field(default=100_000, gt=0)
    intrinsic_coef: float = Field(default=1.0, ge=0)
    normalize_intrinsic: bool = False

    penalty_mode: PenaltyThreshold = PenaltyThreshold.QUANTILE
    penalty_alpha: float = Field(default=0.1, gt=0, lt=1)
    penalty_window: int = Field(default=10_000, gt=0)
    penalty_weight: float = Field(default=0.1, gt=0, le=0.5)
    penalty_floor: float = Field(default=1e-8, gt=0)
    penalty_static_threshold: float = Field(default=0.0, ge=0)

    @model_validator(mode="after")
    def _check_sizes(self) -> AgentConfig:
        if any(s <= 0 for s in (*self.hidden_sizes, *self.rnd_hidden_sizes)):
            msg = "Размеры скрытых слоёв должны быть положительными"
            raise ValueError(msg)
        if self.hidden_activation not in (Activation.RELU, Activation.TANH):
            msg = "hidden_activation: допустимы relu и tanh"
            raise ValueError(msg)
        return self
