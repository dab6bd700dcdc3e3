"""Exact rational coefficient type.

gmpy2's ``mpq`` is used when importable; setting ``DERHAM_PURE_PYTHON=1``
forces the stdlib :class:`fractions.Fraction` path (useful for debugging and
for the benchmark comparing both backends).
"""
from __future__ import annotations

import os
from fractions import Fraction

_FORCE_PURE = os.environ.get("DERHAM_PURE_PYTHON", "").strip().lower() in {"1", "true", "yes"}

try:
    if _FORCE_PURE:
        raise ImportError
    from gmpy2 import mpq as Q  # type: ignore[assignment]

    BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - depends on environment
    Q = Fraction  # type: ignore[assignment,misc]
    BACKEND = "fraction"

ZERO = Q(0)
ONE = Q(1)


def to_q(value) -> "Q":
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to the backend type."""
    if isinstance(value, str):
        value = Fraction(value)
    if isinstance(value, Fraction):
        return Q(value.numerator, value.denominator)
    return Q(value)


def q_str(c) -> str:
    num, den = int(c.numerator), int(c.denominator)
    return str(num) if den == 1 else f"{num}/{den}"
