"""Splitting A^ = psi(B) + (f) and the isomorphism psi_hat: B[[T]] -> A^.

All series are truncated.  ``split`` consumes one order, so
``psi_hat_inv(a, N)`` needs ``psi`` built to order at least ``N``.
"""
from __future__ import annotations

from typing import Sequence

from . import bounds
from .lift import PsiData, SeriesA, psi_apply
from .polyring import NEG_INF, Hypersurface, Poly


class InternalInconsistency(AssertionError):
    pass


class QElem:
    """Element of ``B = A/(f)`` held as its normal form mod ``f``."""

    __slots__ = ("hs", "rep")

    def __init__(self, hs: Hypersurface, rep: Poly, *, reduced: bool = False):
        self.hs = hs
        self.rep = rep if reduced else hs.nf(rep)

    @classmethod
    def zero(cls, hs: Hypersurface) -> "QElem":
        return cls(hs, Poly.zero(hs.n), reduced=True)

    @property
    def degree(self):
        return self.rep.total_degree

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def __bool__(self) -> bool:
        return bool(self.rep)

    def __add__(self, other: "QElem") -> "QElem":
        return QElem(self.hs, self.rep + other.rep, reduced=True)

    def __sub__(self, other: "QElem") -> "QElem":
        return QElem(self.hs, self.rep - other.rep, reduced=True)

    def __neg__(self) -> "QElem":
        return QElem(self.hs, -self.rep, reduced=True)

    def __mul__(self, other) -> "QElem":
        if isinstance(other, QElem):
            return QElem(self.hs, self.rep * other.rep)
        return QElem(self.hs, self.rep * other, reduced=not isinstance(other, Poly))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, QElem):
            return self.hs == other.hs and self.rep == other.rep
        if isinstance(other, Poly):
            return self.rep == self.hs.nf(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.rep)

    def __str__(self) -> str:
        return self.rep.to_string()

    def __repr__(self) -> str:
        return f"QElem({self.rep.to_string()!r})"


class SeriesB:
    """``sum_v b_v T^(v - pole_order)`` with coefficients in B, truncated."""

    __slots__ = ("hs", "coeffs", "pole_order")

    def __init__(self, hs: Hypersurface, coeffs: Sequence[QElem | Poly], pole_order: int = 0):
        if not coeffs:
            raise ValueError("a series needs at least one coefficient")
        if pole_order < 0:
            raise ValueError("pole order must be non-negative")
        self.hs = hs
        self.coeffs = tuple(c if isinstance(c, QElem) else QElem(hs, c) for c in coeffs)
        self.pole_order = pole_order

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def T(cls, hs: Hypersurface, order: int) -> "SeriesB":
        cs = [Poly.zero(hs.n)] * (order + 1)
        if order >= 1:
            cs[1] = Poly.constant(1, hs.n)
        return cls(hs, cs)

    @classmethod
    def constant(cls, hs: Hypersurface, c, order: int) -> "SeriesB":
        return cls(hs, [Poly.constant(c, hs.n)] + [Poly.zero(hs.n)] * order)

    def _check(self, other: "SeriesB") -> None:
        if other.hs != self.hs or other.order != self.order or other.pole_order != self.pole_order:
            raise ValueError("series must share hypersurface, order and pole order")

    def __add__(self, other: "SeriesB") -> "SeriesB":
        self._check(other)
        return SeriesB(self.hs, [a + b for a, b in zip(self.coeffs, other.coeffs)], self.pole_order)

    def __sub__(self, other: "SeriesB") -> "SeriesB":
        self._check(other)
        return SeriesB(self.hs, [a - b for a, b in zip(self.coeffs, other.coeffs)], self.pole_order)

    def __mul__(self, other: "SeriesB") -> "SeriesB":
        """Product truncated at the common order (pole orders add)."""
        if other.hs != self.hs or other.order != self.order:
            raise ValueError("series must share hypersurface and order")
        N = self.order
        out = []
        for k in range(N + 1):
            acc = Poly.zero(self.hs.n)
            for i in range(k + 1):
                a, b = self.coeffs[i], other.coeffs[k - i]
                if a and b:
                    acc = acc + a.rep * b.rep
            out.append(QElem(self.hs, acc))
        return SeriesB(self.hs, out, self.pole_order + other.pole_order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesB):
            return NotImplemented
        return (self.hs == other.hs and self.pole_order == other.pole_order
                and self.coeffs == other.coeffs)

    def __hash__(self) -> int:
        return hash((self.coeffs, self.pole_order))

    def to_json(self) -> dict:
        return {"pole_order": self.pole_order, "coeffs": [str(c) for c in self.coeffs]}

    def __repr__(self) -> str:
        return f"SeriesB({[str(c) for c in self.coeffs]}, pole_order={self.pole_order})"


def split(psi: PsiData, a: SeriesA) -> tuple[QElem, SeriesA]:
    """Write ``a = psi(b) + c*f`` with ``b`` in B; ``c`` has order ``N-1``."""
    N = a.order
    if N < 1:
        raise ValueError("split needs a series of order >= 1")
    hs = psi.hs
    b = QElem(hs, a.coeffs[0])
    if b.degree > a.coeffs[0].total_degree:  # pragma: no cover - NF is degree-minimal
        raise InternalInconsistency("normal form raised the degree")
    image = psi_apply(psi, b.rep, N)
    u = [x - y for x, y in zip(a.coeffs, image.coeffs)]
    q, r = hs.divmod_f(u[0])
    if r:
        raise InternalInconsistency("a_0 - psi(b)_0 is not divisible by f")
    c = [q + u[1]] + u[2:]
    return b, SeriesA(hs, c)


def psi_hat_inv(psi: PsiData, a: Poly | SeriesA, order: int, check_bounds: bool = True) -> SeriesB:
    """Coefficients ``b_0..b_order`` with ``sum psi(b_v) f^v = a mod f^(order+1)``.

    The degree bound ``deg b_mu <= (2d^n+d)^mu deg a`` is asserted for
    polynomial input when ``d >= 3``.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if order > psi.order:
        raise ValueError(f"order {order} exceeds psi order {psi.order}")
    hs = psi.hs
    if isinstance(a, Poly):
        series = SeriesA(hs, [a] + [Poly.zero(hs.n)] * order)
    else:
        if a.order < order:
            raise ValueError("input series is shorter than the requested order")
        series = a.truncate(order)
    out = []
    while series.order >= 1:
        b, series = split(psi, series)
        out.append(b)
    out.append(QElem(hs, series.coeffs[0]))
    result = SeriesB(hs, out)
    if isinstance(a, Poly) and hs.d >= 3 and check_bounds and a:
        deg_a = a.total_degree
        for mu, b in enumerate(result.coeffs):
            bounds.check(b.degree, bounds.inverse_coefficient_bound(hs.d, hs.n, mu, deg_a),
                         f"psi_hat^-1 digit {mu}")
    return result


def psi_hat(psi: PsiData, s: SeriesB) -> SeriesA:
    """``sum_v psi(b_v) f^v`` modulo ``f^(N+1)``."""
    if s.pole_order:
        raise ValueError("psi_hat is defined on B[[T]] (pole order 0)")
    N = s.order
    if N > psi.order:
        raise ValueError(f"series order {N} exceeds psi order {psi.order}")
    hs = psi.hs
    total = SeriesA.constant(hs, 0, N)
    zero = Poly.zero(hs.n)
    for v, b in enumerate(s.coeffs):
        if not b:
            continue
        image = psi_apply(psi, b.rep, N - v)
        total = total + SeriesA(hs, [zero] * v + list(image.coeffs))
    return total


def compose_inverse(psi: PsiData, a: Poly, order: int) -> SeriesB:
    """``a(Xi_1, ..., Xi_n)`` in ``B[[T]]``: psi_hat^-1 via the ring-map route."""
    hs = psi.hs
    xis = [psi_hat_inv(psi, Poly.var(i, hs.n), order, check_bounds=False) for i in range(hs.n)]
    one = SeriesB.constant(hs, 1, order)
    return a.substitute(xis, one, lambda c, x: SeriesB(hs, [q * c for q in x.coeffs], x.pole_order))


def series_degree(s: SeriesB):
    return max((c.degree for c in s.coeffs), default=NEG_INF)
