"""Numeric backends: exact rationals (default) or binary floats with tolerance.

All model quantities are `Amount`s: `fractions.Fraction` under the "rational"
backend, `float` under the "float" backend.  Strict inequalities (the failure
condition c < 0, the covering condition sum > c_u) are exact under rationals
and epsilon-guarded under floats.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

Amount = Union[Fraction, float]

RATIONAL = "rational"
FLOAT = "float"
BACKENDS = (RATIONAL, FLOAT)

DEFAULT_EPS = 1e-12


def to_amount(x, backend: str = RATIONAL) -> Amount:
    """Coerce x to the backend's number type.

    Float literals are read via their decimal repr (0.1 -> 1/10) so that
    paper-style parameters mean what they look like under exact arithmetic.
    """
    if backend == RATIONAL:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, float):
            return Fraction(repr(x))
        return Fraction(x)
    if backend == FLOAT:
        return float(x)
    raise ValueError(f"unknown backend {backend!r}")


def parse_amount(s: str, backend: str = RATIONAL) -> Amount:
    """Parse "p/q", decimal, or integer strings; exact under rationals."""
    value = Fraction(s)
    return value if backend == RATIONAL else float(value)


def format_amount(x: Amount) -> str:
    """Serialize losslessly: rationals as "p/q" (or "n"), floats as repr."""
    if isinstance(x, Fraction):
        return str(x)
    return repr(x)


def is_negative(x: Amount, backend: str, eps: float = DEFAULT_EPS) -> bool:
    """The failure test: strictly below zero (beyond eps under floats)."""
    if backend == RATIONAL:
        return x < 0
    return x < -eps


def exceeds(a: Amount, b: Amount, backend: str, eps: float = DEFAULT_EPS) -> bool:
    """Strict a > b (beyond eps under floats)."""
    if backend == RATIONAL:
        return a > b
    return a > b + eps
