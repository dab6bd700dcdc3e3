"""Sparse multivariate polynomials over Q.

Terms are stored as ``{exponent tuple: coefficient}``.  The monomial order is
graded lexicographic with ``X1 > X2 > ... > Xn``; with a graded order, the
remainder of one-divisor division is both canonical and of minimal total
degree in its coset, which is what the degree conventions downstream rely on.

Variable indices in the Python API are 0-based.
"""
from __future__ import annotations

import heapq
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from ._coeff import ONE, ZERO, Q, q_str, to_q

NEG_INF = float("-inf")
"""Total degree of the zero polynomial; compares below every integer."""

Monomial = tuple  # tuple[int, ...]


def grlex_key(m: Monomial) -> tuple:
    return (sum(m), m)


def var_names(nvars: int) -> list[str]:
    if nvars <= 3:
        return ["x", "y", "z"][:nvars]
    return [f"x{i + 1}" for i in range(nvars)]


class Poly:
    """Immutable sparse polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "_terms", "__dict__")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None, *, _clean: bool = False):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        self.nvars = nvars
        if _clean:
            self._terms = terms  # trusted: no zeros, right arity, backend coefficients
            return
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(int(e) for e in m)
            if len(m) != nvars or any(e < 0 for e in m):
                raise ValueError(f"bad exponent vector {m!r} for {nvars} variables")
            c = to_q(c)
            if c:
                clean[m] = clean.get(m, ZERO) + c
                if not clean[m]:
                    del clean[m]
        self._terms = clean

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars, {}, _clean=True)

    @classmethod
    def constant(cls, c, nvars: int) -> "Poly":
        c = to_q(c)
        return cls(nvars, {(0,) * nvars: c} if c else {}, _clean=True)

    @classmethod
    def var(cls, i: int, nvars: int) -> "Poly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        m = [0] * nvars
        m[i] = 1
        return cls(nvars, {tuple(m): ONE}, _clean=True)

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff=1) -> "Poly":
        return cls(len(exponents), {tuple(exponents): coeff})

    # -- inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict:
        """Read-only view is the caller's responsibility; do not mutate."""
        return self._terms

    def __iter__(self) -> Iterator[tuple[Monomial, object]]:
        """Iterate ``(monomial, coeff)`` in descending graded-lex order."""
        for m in self.monomials():
            yield m, self._terms[m]

    def monomials(self) -> list[Monomial]:
        return sorted(self._terms, key=grlex_key, reverse=True)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0,) * self.nvars in self._terms)

    def coeff(self, m: Monomial):
        return self._terms.get(tuple(m), ZERO)

    def constant_term(self):
        return self._terms.get((0,) * self.nvars, ZERO)

    @cached_property
    def total_degree(self):
        if not self._terms:
            return NEG_INF
        return max(sum(m) for m in self._terms)

    @cached_property
    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._terms, key=grlex_key)

    @property
    def leading_coeff(self):
        return self._terms[self.leading_monomial]

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return Poly.constant(other, self.nvars)

    def __add__(self, other) -> "Poly":
        if not isinstance(other, (Poly, int)) and not hasattr(other, "denominator"):
            return NotImplemented
        other = self._coerce(other)
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for m, c in small.items():
            s = out.get(m, ZERO) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(self.nvars, out, _clean=True)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {m: -c for m, c in self._terms.items()}, _clean=True)

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, (Poly, int)) and not hasattr(other, "denominator"):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        c = to_q(c)
        if not c:
            return Poly.zero(self.nvars)
        return Poly(self.nvars, {m: c * v for m, v in self._terms.items()}, _clean=True)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if isinstance(other, int) or hasattr(other, "denominator"):
                return self.scale(other)
            return NotImplemented
        other = self._coerce(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                out[m] = get(m, ZERO) + ca * cb
        return Poly(self.nvars, {m: c for m, c in out.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, int) or hasattr(other, "denominator"):
            return self._terms == Poly.constant(other, self.nvars)._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self._terms.items())))

    # -- calculus and evaluation -------------------------------------------
    def derivative(self, i: int) -> "Poly":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        out = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                nm = m[:i] + (e - 1,) + m[i + 1:]
                out[nm] = c * e
        return Poly(self.nvars, out, _clean=True)

    def evaluate(self, point: Sequence) -> object:
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        pt = [to_q(v) for v in point]
        total = ZERO
        for m, c in self._terms.items():
            term = c
            for v, e in zip(pt, m):
                if e:
                    term *= v ** e
            total += term
        return total

    def substitute(self, values: Sequence, one, scalar_mul=None):
        """Evaluate at ``values`` taken from any commutative ring.

        ``one`` is that ring's unit; ``scalar_mul(c, x)`` multiplies an element
        by a rational (defaults to ``x * c``).  Powers are cached per variable.
        """
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(values)}")
        mul = scalar_mul or (lambda c, x: x * c)
        powers: list[list] = [[one] for _ in values]

        def power(i: int, e: int):
            cache = powers[i]
            while len(cache) <= e:
                cache.append(cache[-1] * values[i])
            return cache[e]

        total = None
        for m, c in self:
            term = None
            for i, e in enumerate(m):
                if e:
                    term = power(i, e) if term is None else term * power(i, e)
            term = mul(c, one if term is None else term)
            total = term if total is None else total + term
        return mul(ZERO, one) if total is None else total

    def compose(self, polys: Sequence["Poly"]) -> "Poly":
        """Substitute polynomials for the variables."""
        if not polys:
            raise ValueError("need at least one polynomial")
        return self.substitute(list(polys), Poly.constant(1, polys[0].nvars))

    # -- printing -----------------------------------------------------------
    def to_string(self, names: Sequence[str] | None = None, compact: bool = False) -> str:
        names = list(names) if names is not None else var_names(self.nvars)
        if not self._terms:
            return "0"
        parts = []
        for m, c in self:
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(m) if e
            )
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = q_str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{q_str(a)}*{mono}"
            parts.append((neg, body))
        sep_plus, sep_minus = ("+", "-") if compact else (" + ", " - ")
        neg0, body0 = parts[0]
        out = ("-" if neg0 else "") + body0
        for neg, body in parts[1:]:
            out += (sep_minus if neg else sep_plus) + body
        return out

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {self.to_string()!r})"


def poly_sum(polys: Iterable[Poly], nvars: int) -> Poly:
    out: dict = {}
    for p in polys:
        for m, c in p.terms.items():
            out[m] = out.get(m, ZERO) + c
    return Poly(nvars, {m: c for m, c in out.items() if c}, _clean=True)


# -- division -----------------------------------------------------------------


def _heap_key(m: Monomial) -> tuple:
    return (-sum(m), tuple(-e for e in m))


def divmod_poly(g: Poly, divisor: Poly) -> tuple[Poly, Poly]:
    """One-divisor multivariate division in graded-lex order.

    Returns ``(q, r)`` with ``g = q*divisor + r`` and no monomial of ``r``
    divisible by the leading monomial of ``divisor``.
    """
    if divisor.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if g.nvars != divisor.nvars:
        raise ValueError("variable count mismatch")
    n = g.nvars
    lm = divisor.leading_monomial
    lc = divisor.leading_coeff
    tail = [(m, c) for m, c in divisor.terms.items() if m != lm]
    p = dict(g.terms)
    heap = [_heap_key(m) + (m,) for m in p]
    heapq.heapify(heap)
    quot: dict = {}
    rem: dict = {}
    while heap:
        m = heapq.heappop(heap)[-1]
        c = p.pop(m, None)
        if c is None:
            continue
        if all(a >= b for a, b in zip(m, lm)):
            shift = tuple(a - b for a, b in zip(m, lm))
            t = c / lc
            quot[shift] = t
            for mt, ct in tail:
                mm = tuple(a + b for a, b in zip(mt, shift))
                old = p.get(mm)
                if old is None:
                    p[mm] = -t * ct
                    heapq.heappush(heap, _heap_key(mm) + (mm,))
                else:
                    new = old - t * ct
                    if new:
                        p[mm] = new
                    else:
                        del p[mm]
        else:
            rem[m] = c
    return Poly(n, quot, _clean=True), Poly(n, rem, _clean=True)


def is_reduced(r: Poly, divisor: Poly) -> bool:
    lm = divisor.leading_monomial
    return not any(all(a >= b for a, b in zip(m, lm)) for m in r.terms)


def divmod_by_power(g: Poly, f: Poly, nu: int) -> tuple[Poly, Poly]:
    """Divide ``g`` by ``f**nu``; the remainder is the normal form mod ``(f^nu)``."""
    if f.is_zero():
        raise ZeroDivisionError("f must be nonzero")
    if nu < 1:
        raise ValueError("nu must be a positive integer")
    return divmod_poly(g, f ** nu)


def exact_quotient(g: Poly, divisor: Poly) -> Poly:
    q, r = divmod_poly(g, divisor)
    if r:
        raise ArithmeticError("polynomial is not exactly divisible")
    return q


def partial_derivative(g: Poly, i: int) -> Poly:
    return g.derivative(i)


def evaluate(g: Poly, point: Sequence) -> object:
    return g.evaluate(point)


# -- homogenization -----------------------------------------------------------


def homogenize_generous(f: Poly) -> Poly:
    """Return ``X0^(d+1) * f(X/X0)`` in ``n+1`` variables, ``X0`` first."""
    if f.is_zero():
        raise ValueError("cannot homogenize the zero polynomial")
    top = f.total_degree + 1
    return Poly(f.nvars + 1, {(top - sum(m),) + m: c for m, c in f.terms.items()}, _clean=True)


def dehomogenize(F: Poly) -> Poly:
    """Set the first variable to 1."""
    if F.nvars < 2:
        raise ValueError("need at least two variables")
    out: dict = {}
    for m, c in F.terms.items():
        k = m[1:]
        out[k] = out.get(k, ZERO) + c
    return Poly(F.nvars - 1, {m: c for m, c in out.items() if c}, _clean=True)


# -- parsing front-end ----------------------------------------------------------


def parse_poly(text: str, nvars: int) -> Poly:
    from .parsing import parse_poly as _parse

    return _parse(text, nvars)


# -- hypersurfaces ----------------------------------------------------------------


class Hypersurface:
    """Reduced equation ``f`` of an affine hypersurface, with cached powers.

    Squarefreeness of ``f`` is the caller's responsibility; a smoothness
    certificate for ``f`` proves that ``Z(f)`` is smooth.
    """

    def __init__(self, f: Poly):
        if f.is_zero() or f.total_degree < 1:
            raise ValueError("hypersurface equation must have degree >= 1")
        self.f = f
        self.n = f.nvars
        self.d = int(f.total_degree)
        self._powers = [Poly.constant(1, self.n), f]

    @classmethod
    def parse(cls, text: str, nvars: int) -> "Hypersurface":
        return cls(parse_poly(text, nvars))

    def power(self, k: int) -> Poly:
        while len(self._powers) <= k:
            self._powers.append(self._powers[-1] * self.f)
        return self._powers[k]

    @cached_property
    def gradient(self) -> tuple[Poly, ...]:
        return tuple(self.f.derivative(i) for i in range(self.n))

    def nf(self, g: Poly) -> Poly:
        """Normal form of ``g`` modulo ``f``."""
        if g.is_constant():
            return g
        return divmod_poly(g, self.f)[1]

    def divmod_f(self, g: Poly) -> tuple[Poly, Poly]:
        return divmod_poly(g, self.f)

    def one(self) -> Poly:
        return self._powers[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, Hypersurface) and self.f == other.f

    def __hash__(self) -> int:
        return hash(self.f)

    def __repr__(self) -> str:
        return f"Hypersurface({self.f.to_string()!r}, n={self.n}, d={self.d})"
