"""Exact rational parsing and rendering.

Every probability, payoff and accuracy value in the package is a
:class:`fractions.Fraction`. Inputs written as decimals (``"0.51"``) are
converted digit by digit, never through binary floating point.
"""

from __future__ import annotations

import decimal
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

RationalLike = Union[int, Fraction, str, decimal.Decimal, float]

_RENDER_CONTEXT = decimal.Context(prec=12)


def to_fraction(value: RationalLike) -> Fraction:
    """Convert ``value`` to an exact :class:`Fraction`.

    Strings may be ``"p/q"``, integers, or decimal literals.  Floats are
    taken through their shortest decimal repr, so ``0.1`` becomes ``1/10``.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, decimal.Decimal):
        if not value.is_finite():
            raise ValueError(f"not a finite rational: {value}")
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip().replace("_", "")
        if not text:
            raise ValueError("empty rational literal")
        if "/" in text:
            num, _, den = text.partition("/")
            return Fraction(_parse_decimal(num)) / Fraction(_parse_decimal(den))
        return Fraction(_parse_decimal(text))
    raise TypeError(f"cannot interpret {value!r} as a rational")


def _parse_decimal(text: str) -> decimal.Decimal:
    try:
        d = decimal.Decimal(text.strip())
    except decimal.InvalidOperation:
        raise ValueError(f"invalid rational literal: {text!r}") from None
    if not d.is_finite():
        raise ValueError(f"invalid rational literal: {text!r}")
    return d


def parse_distribution(text: str) -> tuple[Fraction, ...]:
    """Parse a comma-separated list such as ``"1/2,1/2"``."""
    return tuple(to_fraction(part) for part in text.split(","))


def exact(q: Fraction) -> str:
    """Render as ``p/q`` (or ``p`` for integers)."""
    q = to_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def decimal_str(q: Fraction) -> str:
    """Render to 12 significant digits."""
    q = to_fraction(q)
    d = _RENDER_CONTEXT.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    return format(d, ".12g")


def rational_json(q: Fraction) -> dict[str, str]:
    return {"exact": exact(q), "decimal": decimal_str(q)}


def format_vector(values: Iterable[Fraction]) -> str:
    return "(" + ", ".join(exact(v) for v in values) + ")"


def rational_range(start: Fraction, stop: Fraction, step: Fraction) -> list[Fraction]:
    """Inclusive arithmetic progression ``start, start+step, ... <= stop``."""
    if step <= 0:
        raise ValueError("step must be positive")
    out = []
    x = start
    while x <= stop:
        out.append(x)
        x += step
    return out
