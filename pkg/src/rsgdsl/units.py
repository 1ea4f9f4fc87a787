"""Fixed table of measurement units and conversion to SI.

Factors are exact rationals where possible so that timestamps can be
converted to integer nanoseconds without binary rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

NS_PER_SECOND = 10**9


class Dimension(str, Enum):
    LENGTH = "LENGTH"
    TIME = "TIME"
    ANGLE = "ANGLE"


class UnknownUnitError(KeyError):
    code = "UNKNOWN_UNIT"

    def __init__(self, symbol: str):
        super().__init__(symbol)
        self.symbol = symbol

    def __str__(self) -> str:
        return f"unknown unit {self.symbol!r}"


@dataclass(frozen=True)
class Unit:
    symbol: str
    dimension: Dimension
    factor: Fraction | float

    def __post_init__(self) -> None:
        if not self.factor > 0:
            raise ValueError(f"unit {self.symbol!r} needs a positive SI factor")


_UNITS = {
    u.symbol: u
    for u in (
        Unit("m", Dimension.LENGTH, Fraction(1)),
        Unit("dm", Dimension.LENGTH, Fraction(1, 10)),
        Unit("cm", Dimension.LENGTH, Fraction(1, 100)),
        Unit("mm", Dimension.LENGTH, Fraction(1, 1000)),
        Unit("s", Dimension.TIME, Fraction(1)),
        Unit("ms", Dimension.TIME, Fraction(1, 1000)),
        Unit("us", Dimension.TIME, Fraction(1, 10**6)),
        Unit("min", Dimension.TIME, Fraction(60)),
        Unit("h", Dimension.TIME, Fraction(3600)),
        Unit("rad", Dimension.ANGLE, Fraction(1)),
        Unit("deg", Dimension.ANGLE, math.pi / 180),
    )
}

UNIT_SYMBOLS = tuple(_UNITS)


def lookup_unit(symbol: str) -> Unit:
    try:
        return _UNITS[symbol]
    except KeyError:
        raise UnknownUnitError(symbol) from None


@dataclass(frozen=True)
class Quantity:
    magnitude: float
    unit: Unit

    def __post_init__(self) -> None:
        if not math.isfinite(self.magnitude):
            raise ValueError("quantity magnitude must be finite")

    @classmethod
    def of(cls, magnitude: float, symbol: str) -> Quantity:
        return cls(float(magnitude), lookup_unit(symbol))

    def __rmul__(self, scale: float) -> Quantity:
        return Quantity(scale * self.magnitude, self.unit)


def to_si(q: Quantity) -> float:
    factor = q.unit.factor
    if isinstance(factor, Fraction):
        return float(Fraction(q.magnitude) * factor)
    return q.magnitude * factor


def to_nanoseconds(q: Quantity) -> int:
    """Scale a time quantity to integer nanoseconds, rounding half to even."""
    if q.unit.dimension is not Dimension.TIME:
        raise ValueError(f"{q.unit.symbol!r} is not a time unit")
    return round(Fraction(q.magnitude) * Fraction(q.unit.factor) * NS_PER_SECOND)
