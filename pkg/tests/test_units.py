from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rsgdsl.units import (
    UNIT_SYMBOLS,
    Dimension,
    Quantity,
    UnknownUnitError,
    lookup_unit,
    to_nanoseconds,
    to_si,
)


@pytest.mark.parametrize(
    "magnitude, symbol, expected",
    [
        (1.0, "m", 1.0),
        (25.0, "cm", 0.25),
        (3.0, "mm", 0.003),
        (7.0, "dm", 0.7),
        (90.0, "deg", math.pi / 2),
        (2.0, "rad", 2.0),
        (1.5, "min", 90.0),
        (2.0, "h", 7200.0),
    ],
)
def test_to_si(magnitude, symbol, expected):
    assert to_si(Quantity.of(magnitude, symbol)) == pytest.approx(expected, rel=1e-15)


def test_decimal_lengths_scale_exactly():
    # exact rational factors give the correctly rounded decimal result
    assert to_si(Quantity.of(1.0, "cm")) == 0.01
    assert to_si(Quantity.of(0.1, "mm")) == 0.1 / 1000


@pytest.mark.parametrize(
    "magnitude, symbol, ns",
    [
        (0.0, "s", 0),
        (1.5, "s", 1_500_000_000),
        (250.0, "ms", 250_000_000),
        (3.0, "us", 3_000),
        (1.0, "min", 60 * 10**9),
        (-2.0, "s", -2 * 10**9),
    ],
)
def test_to_nanoseconds(magnitude, symbol, ns):
    assert to_nanoseconds(Quantity.of(magnitude, symbol)) == ns


def test_nanoseconds_round_to_nearest():
    assert to_nanoseconds(Quantity.of(1.4e-9, "s")) == 1
    assert to_nanoseconds(Quantity.of(1.6e-3, "us")) == 2
    assert to_nanoseconds(Quantity.of(-1.6e-9, "s")) == -2


def test_nanoseconds_need_time_unit():
    with pytest.raises(ValueError):
        to_nanoseconds(Quantity.of(1.0, "m"))


def test_unknown_unit():
    with pytest.raises(UnknownUnitError) as exc:
        lookup_unit("furlong")
    assert exc.value.code == "UNKNOWN_UNIT"
    assert "furlong" in str(exc.value)


def test_table_dimensions():
    dims = {s: lookup_unit(s).dimension for s in UNIT_SYMBOLS}
    assert {s for s, d in dims.items() if d is Dimension.LENGTH} == {"m", "dm", "cm", "mm"}
    assert {s for s, d in dims.items() if d is Dimension.ANGLE} == {"rad", "deg"}


def test_quantity_rejects_non_finite():
    with pytest.raises(ValueError):
        Quantity.of(float("nan"), "m")


def test_scalar_multiplication():
    assert 3 * Quantity.of(2.0, "cm") == Quantity.of(6.0, "cm")


@given(st.floats(-1e6, 1e6, allow_nan=False), st.sampled_from(["m", "dm", "cm", "mm"]))
def test_length_scaling_matches_float_oracle(x, symbol):
    factor = {"m": 1.0, "dm": 0.1, "cm": 0.01, "mm": 0.001}[symbol]
    assert to_si(Quantity.of(x, symbol)) == pytest.approx(x * factor, rel=1e-15, abs=1e-300)


@given(st.integers(-(10**12), 10**12))
def test_integer_milliseconds_convert_exactly(ms):
    assert to_nanoseconds(Quantity.of(float(ms), "ms")) == ms * 10**6
