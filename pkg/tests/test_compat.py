"""Тесты совместимости aielab._compat: StrEnum и tomllib."""

from enum import auto, unique

import pytest

from aielab._compat import StrEnum, tomllib
from aielab.enums import AgentVariant, PlotKind, TerminalCause


class _SampleEnum(StrEnum):
    FOO_BAR = auto()
    BAZ = auto()


def test_auto_generates_lowercase_name():
    """auto() должен генерировать name.lower()."""
    assert _SampleEnum.FOO_BAR == "foo_bar"
    assert TerminalCause.SHOT_DOWN == "shot_down"
    assert PlotKind.TRAJECTORY_PROJECTION == "trajectory_projection"


def test_members_are_str_instances():
    """Члены StrEnum должны быть экземплярами str."""
    assert isinstance(_SampleEnum.BAZ, str)
    assert isinstance(AgentVariant.AIE3, str)


def test_lookup_by_value():
    """Значение из TOML и CSV восстанавливает член перечисления."""
    assert AgentVariant("asil") is AgentVariant.ASIL
    assert TerminalCause("out_of_bounds") is TerminalCause.OUT_OF_BOUNDS


def test_unique_decorator_rejects_duplicates():
    """@unique должен работать с compat StrEnum."""
    with pytest.raises(ValueError, match="duplicate"):

        @unique
        class _Bad(StrEnum):
            A = "x"
            B = "x"


def test_explicit_value_preserved():
    """Явно заданное значение не должно заменяться."""

    class _Explicit(StrEnum):
        HELLO = "world"

    assert _Explicit.HELLO == "world"
    assert _Explicit.HELLO.value == "world"


def test_non_string_value_raises_type_error():
    """Нестроковое значение должно вызывать TypeError."""
    with pytest.raises(TypeError, match="is not a string"):

        class _Bad(StrEnum):
            X = 1


def test_str_returns_value():
    """str(member) возвращает значение: так причины пишутся в CSV."""
    assert str(TerminalCause.ARRIVED) == "arrived"
    assert str(_SampleEnum.BAZ) == "baz"


def test_format_returns_value():
    """format(member) и f-строки должны возвращать значение."""
    assert format(_SampleEnum.FOO_BAR) == "foo_bar"
    assert f"{PlotKind.HEATMAP}-seed-0.svg" == "heatmap-seed-0.svg"


def test_tomllib_parses_tables():
    """tomllib доступен на всех поддерживаемых версиях."""
    data = tomllib.loads('[agent]\nvariant = "aie2"\nhidden_sizes = [8]\n')
    assert data == {"agent": {"variant": "aie2", "hidden_sizes": [8]}}
