"""Smoothness certificates ``sum_i g_i * d_i f + h * f = 1``.

The search is plain bounded-degree linear algebra: for ``D = 0, 1, ...`` the
coefficients of ``g_1..g_n`` (degree <= D) and ``h`` (degree <= D) are the
unknowns, and the equations match coefficients against the constant 1.  The
first feasible ``D`` wins.  Unknowns are ordered block by block
(``g_1, ..., g_n, h``), each block in descending graded-lex order, and free
variables are set to zero, so the certificate is fully determined by ``f``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations_with_replacement

from .linalg import solve
from .polyring import Hypersurface, Poly, grlex_key, parse_poly

DEFAULT_CAPACITY = 10**6


class CapacityError(RuntimeError):
    """The requested degree bound is beyond the configured cap."""


class CertificateError(ValueError):
    """A supplied certificate does not satisfy its defining identity."""


@dataclass(frozen=True)
class NotFound:
    """No certificate with ``deg g_i <= max_degree`` exists."""

    max_degree: int

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class Certificate:
    g: tuple[Poly, ...]
    h: Poly
    degree_bound_used: int

    def residual(self, f: Poly) -> Poly:
        total = self.h * f
        for i, gi in enumerate(self.g):
            total = total + gi * f.derivative(i)
        return total - 1

    def verify(self, f: Poly) -> bool:
        if len(self.g) != f.nvars:
            return False
        if any(gi.total_degree > self.degree_bound_used for gi in self.g):
            return False
        return self.residual(f).is_zero()

    def to_json(self) -> dict:
        return {
            "g": [gi.to_string() for gi in self.g],
            "h": self.h.to_string(),
            "degree": self.degree_bound_used,
        }

    @classmethod
    def from_json(cls, data: dict | str, nvars: int) -> "Certificate":
        if isinstance(data, str):
            data = json.loads(data)
        g = tuple(parse_poly(s, nvars) for s in data["g"])
        if len(g) != nvars:
            raise CertificateError(f"expected {nvars} cofactors g, got {len(g)}")
        return cls(g, parse_poly(data["h"], nvars), int(data["degree"]))


def monomials_up_to(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree <= ``degree``, descending graded-lex."""
    out = []
    for k in range(max(degree, -1) + 1):
        for combo in combinations_with_replacement(range(nvars), k):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return sorted(out, key=grlex_key, reverse=True)


def _solve_at_degree(f: Poly, D: int) -> Certificate | None:
    n = f.nvars
    basis = monomials_up_to(n, D)
    multipliers = [f.derivative(i) for i in range(n)] + [f]
    columns = []  # one {monomial: coeff} per unknown
    for mult in multipliers:
        for m in basis:
            columns.append({tuple(a + b for a, b in zip(m, mm)): c for mm, c in mult.terms.items()})
    row_keys = sorted({m for col in columns for m in col} | {(0,) * n}, key=grlex_key, reverse=True)
    index = {m: i for i, m in enumerate(row_keys)}
    rows = [[0] * len(columns) for _ in row_keys]
    for j, col in enumerate(columns):
        for m, c in col.items():
            rows[index[m]][j] = c
    rhs = [0] * len(row_keys)
    rhs[index[(0,) * n]] = 1
    x = solve(rows, rhs)
    if x is None:
        return None
    block = len(basis)
    polys = [Poly(n, {m: x[b * block + k] for k, m in enumerate(basis)}) for b in range(n + 1)]
    return Certificate(tuple(polys[:n]), polys[n], D)


def find_certificate(f: Poly, max_degree: int) -> Certificate | NotFound:
    """Minimal-degree certificate with ``deg g_i <= max_degree``, or ``NotFound``."""
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    for D in range(max_degree + 1):
        cert = _solve_at_degree(f, D)
        if cert is not None:
            if not cert.verify(f):  # pragma: no cover - solver bug guard
                raise AssertionError("certificate identity failed after solving")
            return cert
    return NotFound(max_degree)


def certify_smooth(f: Poly | Hypersurface, capacity: int = DEFAULT_CAPACITY) -> Certificate | NotFound:
    """Search up to the effective Nullstellensatz bound ``d**n``."""
    if isinstance(f, Hypersurface):
        f = f.f
    if f.is_zero():
        raise ValueError("f must be nonzero")
    d, n = int(f.total_degree), f.nvars
    bound = d**n
    if bound > capacity:
        raise CapacityError(f"degree bound d^n = {d}^{n} exceeds capacity {capacity}")
    return find_certificate(f, bound)


def load_certificate(path: str, f: Poly) -> Certificate:
    with open(path) as fh:
        cert = Certificate.from_json(json.load(fh), f.nvars)
    if not cert.verify(f):
        raise CertificateError("certificate identity sum g_i d_i f + h f = 1 does not hold")
    return cert
