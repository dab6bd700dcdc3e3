"""The lift psi: B -> A^ as truncated f-adic series.

An element of ``A^`` mod ``f^(N+1)`` is stored as digits ``a_0..a_N`` meaning
``sum a_v f^v``.  Arithmetic results are carried into digit-normal form
(every digit reduced mod f), which is unique; inputs may use any digits.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import bounds
from .certificate import Certificate
from .polyring import Hypersurface, Poly, poly_sum


class NotALift(ValueError):
    """``f(Y)`` is not divisible by the required power of ``f``."""


class SeriesA:
    """Truncated f-adic expansion ``sum_{v<=N} a_v f^v`` modulo ``f^(N+1)``."""

    __slots__ = ("hs", "coeffs")

    def __init__(self, hs: Hypersurface, coeffs: Sequence[Poly]):
        if not coeffs:
            raise ValueError("a series needs at least one coefficient")
        self.hs = hs
        self.coeffs = tuple(coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_poly(cls, hs: Hypersurface, g: Poly, order: int) -> "SeriesA":
        return cls(hs, [g] + [Poly.zero(hs.n)] * order).normalized()

    @classmethod
    def constant(cls, hs: Hypersurface, c, order: int) -> "SeriesA":
        return cls(hs, [Poly.constant(c, hs.n)] + [Poly.zero(hs.n)] * order)

    def normalized(self) -> "SeriesA":
        """Carry into digit-normal form: every digit is its own NF mod f."""
        hs = self.hs
        digits = []
        carry = Poly.zero(hs.n)
        for a in self.coeffs:
            q, r = hs.divmod_f(carry + a)
            digits.append(r)
            carry = q
        return SeriesA(hs, digits)

    def is_normalized(self) -> bool:
        return all(self.hs.nf(a) == a for a in self.coeffs)

    def collapse(self) -> Poly:
        """``sum a_v f^v`` reduced modulo ``f^(N+1)``."""
        hs = self.hs
        total = poly_sum((a * hs.power(v) for v, a in enumerate(self.coeffs)), hs.n)
        return hs.divmod_f(total)[1] if self.order == 0 else _rem(total, hs.power(self.order + 1))

    def truncate(self, order: int) -> "SeriesA":
        if order > self.order:
            raise ValueError("cannot raise the truncation order")
        return SeriesA(self.hs, self.coeffs[: order + 1])

    def _check(self, other: "SeriesA") -> None:
        if other.hs != self.hs or other.order != self.order:
            raise ValueError("series must share hypersurface and order")

    def __add__(self, other: "SeriesA") -> "SeriesA":
        self._check(other)
        return SeriesA(self.hs, [a + b for a, b in zip(self.coeffs, other.coeffs)]).normalized()

    def __sub__(self, other: "SeriesA") -> "SeriesA":
        self._check(other)
        return SeriesA(self.hs, [a - b for a, b in zip(self.coeffs, other.coeffs)]).normalized()

    def __neg__(self) -> "SeriesA":
        return SeriesA(self.hs, [-a for a in self.coeffs])

    def scale(self, c) -> "SeriesA":
        return SeriesA(self.hs, [a.scale(c) for a in self.coeffs])

    def __mul__(self, other: "SeriesA") -> "SeriesA":
        self._check(other)
        n, N = self.hs.n, self.order
        out = []
        for k in range(N + 1):
            out.append(
                poly_sum(
                    (self.coeffs[i] * other.coeffs[k - i] for i in range(k + 1)
                     if self.coeffs[i] and other.coeffs[k - i]),
                    n,
                )
            )
        return SeriesA(self.hs, out).normalized()

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesA):
            return NotImplemented
        self._check(other)
        return self.normalized().coeffs == other.normalized().coeffs

    def __hash__(self) -> int:
        return hash(self.normalized().coeffs)

    def to_json(self) -> dict:
        return {"modulus_power": self.order + 1, "coeffs": [a.to_string() for a in self.coeffs]}

    def __repr__(self) -> str:
        return f"SeriesA({[a.to_string() for a in self.coeffs]})"


def _rem(g: Poly, modulus: Poly) -> Poly:
    from .polyring import divmod_poly

    return divmod_poly(g, modulus)[1]


@dataclass(frozen=True)
class PsiData:
    """``xi[i] = psi(X_i)`` to order ``N``, built from ``cert``."""

    hs: Hypersurface
    xi: tuple[SeriesA, ...]
    cert: Certificate

    @property
    def order(self) -> int:
        return self.xi[0].order

    def series_one(self, order: int | None = None) -> SeriesA:
        return SeriesA.constant(self.hs, 1, self.order if order is None else order)


def _f_of(hs: Hypersurface, ys: Sequence[SeriesA]) -> SeriesA:
    return hs.f.substitute(list(ys), SeriesA.constant(hs, 1, ys[0].order), lambda c, x: x.scale(c)).normalized()


def _correction(hs: Hypersurface, cert: Certificate, ys: Sequence[SeriesA], nu: int) -> list[Poly]:
    """Digits ``a_i`` with ``f(Y + a f^nu) = 0 mod f^(nu+1)``; ``ys`` has order nu."""
    value = _f_of(hs, ys)
    if any(value.coeffs[k] for k in range(nu)):
        raise NotALift(f"f(Y) is not divisible by f^{nu}")
    p = value.coeffs[nu]  # f(Y)/f^nu mod f; only its class mod f is used
    return [hs.nf(-(p * gi)) for gi in cert.g]


def lift_step(hs: Hypersurface, cert: Certificate, Y: Sequence[Poly], nu: int) -> tuple[Poly, ...]:
    """One Newton-style correction: ``Y_i + a_i f^nu`` lifts to order ``nu+1``."""
    if nu < 1:
        raise ValueError("nu must be positive")
    if len(Y) != hs.n:
        raise ValueError(f"expected {hs.n} polynomials")
    for i, y in enumerate(Y):
        if hs.nf(y - Poly.var(i, hs.n)):
            raise NotALift(f"Y_{i} is not congruent to X_{i} mod f")
    ys = [SeriesA.from_poly(hs, y, nu) for y in Y]
    a = _correction(hs, cert, ys, nu)
    fnu = hs.power(nu)
    return tuple(y + ai * fnu for y, ai in zip(Y, a))


def build_psi(hs: Hypersurface, cert: Certificate, order: int, check_bounds: bool = True) -> PsiData:
    """Iterate the lift from ``psi(X_i) = X_i`` up to truncation order ``order``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    if len(cert.g) != hs.n:
        raise ValueError("certificate does not match the hypersurface")
    n, d = hs.n, hs.d
    digits = [[Poly.var(i, n)] for i in range(n)]
    for nu in range(1, order + 1):
        ys = [SeriesA(hs, ds + [Poly.zero(n)]) for ds in digits]
        for ds, ai in zip(digits, _correction(hs, cert, ys, nu)):
            ds.append(ai)
    for i, ds in enumerate(digits):
        for nu, a in enumerate(ds):
            bounds.check(a.total_degree, bounds.lift_coefficient_bound(d, n, nu),
                         f"psi(X_{i + 1}) digit {nu}", check_bounds)
    return PsiData(hs, tuple(SeriesA(hs, ds) for ds in digits), cert)


def psi_apply(psi: PsiData, b: Poly, order: int | None = None) -> SeriesA:
    """``psi(b) = b(xi)``, truncated to ``order`` (default: the order of psi)."""
    N = psi.order if order is None else order
    if N > psi.order:
        raise ValueError(f"order {N} exceeds psi order {psi.order}")
    hs = psi.hs
    if b.is_constant():
        return SeriesA.constant(hs, b.constant_term(), N).normalized()
    xi = [x.truncate(N) for x in psi.xi]
    return b.substitute(xi, SeriesA.constant(hs, 1, N), lambda c, x: x.scale(c)).normalized()
