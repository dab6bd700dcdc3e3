"""Degree-bound formulas and the assertion helper used by the pipeline."""
from __future__ import annotations


class BoundViolation(AssertionError):
    """A computed object exceeds its proven degree bound."""


def _require(d: int, n: int) -> None:
    if d < 3:
        raise ValueError(f"degree bounds need d >= 3 (got d={d})")
    if n < 1:
        raise ValueError("n must be positive")


def gysin_degree_bound(d: int, n: int, s: int, deg_omega: int) -> int:
    """``(2 d^n + d)^s * (deg_omega + s d)`` for the residue of a form with pole order s."""
    _require(d, n)
    if s < 1:
        raise ValueError("pole order must be >= 1")
    return (2 * d**n + d) ** s * (deg_omega + s * d)


def derham_degree_bound(d: int, n: int, p: int) -> int:
    """``(p+1)(d+1)(2 d^n + d)^(p+1)``: generator degree bound for H^p of Z(f)."""
    _require(d, n)
    if p < 0:
        raise ValueError("p must be non-negative")
    return (p + 1) * (d + 1) * (2 * d**n + d) ** (p + 1)


def lift_coefficient_bound(d: int, n: int, nu: int) -> int:
    """``d^nu * (2 d^(n-1) + 1)``, the bound on the f-adic digits of psi(X_i)."""
    return d**nu * (2 * d ** (n - 1) + 1)


def inverse_coefficient_bound(d: int, n: int, mu: int, deg_a) -> int | float:
    """``(2 d^n + d)^mu * deg a`` for the T-adic digits of psi_hat^-1(a)."""
    return (2 * d**n + d) ** mu * deg_a


def check(actual, bound, what: str, enabled: bool = True) -> None:
    if enabled and actual > bound:
        raise BoundViolation(f"{what}: degree {actual} exceeds bound {bound}")
