"""Independent residue oracles for split univariate f and the curve x*y^2 - x - 1.

Nothing here touches the completion machinery: classical residues come from
Laurent expansion at each pole with plain univariate coefficient lists, and
the curve ``x*y^2 - x - 1`` is checked through its parametrization by ``y``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from math import factorial
from typing import Sequence

from ._coeff import ONE, ZERO, Q, to_q
from .linalg import echelon
from .polyring import Hypersurface, Poly

CURVE = "x*y^2 - x - 1"


class OracleError(ValueError):
    pass


# -- univariate helpers on coefficient lists (index = power) ---------------------------


def _trim(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def _mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _taylor_shift(c: Sequence, center) -> list:
    """Coefficients of ``P(center + t)`` in ``t``."""
    out = [ZERO] * len(c)
    for k, ck in enumerate(c):
        if not ck:
            continue
        for j in range(k + 1):
            out[j] += ck * _binom(k, j) * center ** (k - j)
    return out


def _binom(k: int, j: int) -> int:
    return factorial(k) // (factorial(j) * factorial(k - j))


def _series_inverse(c: Sequence, order: int) -> list:
    if not c or not c[0]:
        raise OracleError("series is not invertible")
    inv = [ONE / c[0]]
    for k in range(1, order + 1):
        acc = sum((c[i] * inv[k - i] for i in range(1, min(k, len(c) - 1) + 1)), ZERO)
        inv.append(-acc / c[0])
    return inv


def _laurent_residue(numerator: Sequence, center, pole: int, others: Sequence[tuple]) -> object:
    """Residue at ``center`` of ``numerator / ((X-center)^pole * prod (X-r)^m)``."""
    if pole <= 0:
        return ZERO
    top = pole - 1
    num = (_taylor_shift(numerator, center) + [ZERO] * pole)[: top + 1]
    den = [ONE]
    for r, m in others:
        lin = [center - r, ONE]
        for _ in range(m):
            den = _mul(den, lin)[: top + 1]
    inv = _series_inverse(den + [ZERO] * pole, top)
    return sum((num[i] * inv[top - i] for i in range(top + 1)), ZERO)


def _univariate(g: Poly) -> list:
    if g.nvars != 1:
        raise OracleError("expected a univariate polynomial")
    deg = 0 if g.is_zero() else int(g.total_degree)
    return [g.coeff((k,)) for k in range(deg + 1)] if g else []


# -- univariate oracle -------------------------------------------------------------------


@dataclass(frozen=True)
class RationalRootData:
    roots: tuple
    leading_coeff: object

    @classmethod
    def for_poly(cls, f: Poly, roots: Sequence) -> "RationalRootData":
        roots = tuple(to_q(r) for r in roots)
        if len(set(roots)) != len(roots):
            raise OracleError("roots must be pairwise distinct")
        lc = f.leading_coeff if f else ZERO
        data = cls(roots, lc)
        if data.poly() != f:
            raise OracleError("root list is inconsistent with f")
        return data

    def poly(self) -> Poly:
        out = Poly.constant(self.leading_coeff, 1)
        x = Poly.var(0, 1)
        for r in self.roots:
            out = out * (x - r)
        return out

    def idempotent(self, i: int) -> Poly:
        """``e_i = prod_{j != i} (X - z_j) / a_i`` with ``e_i(z_j) = delta_ij``."""
        x = Poly.var(0, 1)
        e = Poly.constant(1, 1)
        a = ONE
        for j, r in enumerate(self.roots):
            if j != i:
                e = e * (x - r)
                a *= self.roots[i] - r
        return e.scale(ONE / a)


def rational_roots(f: Poly) -> RationalRootData:
    """All roots of a univariate ``f`` when it splits into distinct rational linear factors."""
    c = _univariate(f)
    if len(c) < 2:
        raise OracleError("need a nonconstant polynomial")
    from math import lcm

    scale = lcm(*(int(q.denominator) for q in c if q))
    ints = [int(q * scale) for q in c]
    low = next(k for k, v in enumerate(ints) if v)
    roots = [ZERO] if low else []
    ints = ints[low:]
    a0, an = abs(ints[0]), abs(ints[-1])
    candidates = {Q(sign * p, q) for p in _divisors(a0) for q in _divisors(an) for sign in (1, -1)}
    for r in sorted(candidates):
        if sum(to_q(v) * r**k for k, v in enumerate(ints)) == 0:
            roots.append(r)
    if len(roots) != len(c) - 1:
        raise OracleError("f does not split into distinct rational linear factors")
    return RationalRootData.for_poly(f, roots)


def _divisors(m: int) -> list[int]:
    return [k for k in range(1, m + 1) if m % k == 0]


def univariate_residues(g: Poly, roots: RationalRootData, s: int) -> list:
    """Classical residues ``Res_{z_i}(g / f^s)`` at each root."""
    if s < 1:
        raise ValueError("pole order must be positive")
    num = _univariate(g)
    lc_s = roots.leading_coeff ** s
    out = []
    for i, z in enumerate(roots.roots):
        others = [(r, s) for j, r in enumerate(roots.roots) if j != i]
        out.append(_laurent_residue(num, z, s, others) / lc_s)
    return out


def expected_univariate_residue(hs: Hypersurface, g: Poly, s: int, roots: RationalRootData) -> Poly:
    """``sum_i Res_{z_i}(g/f^s) e_i`` reduced mod f."""
    total = Poly.zero(1)
    for i, r in enumerate(univariate_residues(g, roots, s)):
        total = total + roots.idempotent(i).scale(r)
    return hs.nf(total)


def coordinates_in_idempotents(b: Poly, roots: RationalRootData) -> list:
    """Coordinates of ``b`` in the basis ``e_i`` of B: its values at the roots."""
    return [b.evaluate((z,)) for z in roots.roots]


def linearly_independent(bs: Sequence[Poly], roots: RationalRootData) -> bool:
    """Linear independence in ``B = Q[X]/(f)`` for split univariate ``f``."""
    if not bs:
        return True
    rows = []
    for b in bs:
        vals = coordinates_in_idempotents(b, roots)
        from math import lcm

        scale = lcm(*(int(v.denominator) for v in vals))
        rows.append([int(v * scale) for v in vals])
    return len(echelon(rows, len(roots.roots))) == len(bs)


# -- curve oracle ------------------------------------------------------------------------


def _is_curve(hs: Hypersurface) -> bool:
    from .polyring import parse_poly

    return hs.n == 2 and hs.f == parse_poly(CURVE, 2)


def curve_pullback_residues(hs: Hypersurface, tau) -> tuple:
    """Residues at ``y = 1`` and ``y = -1`` of ``tau`` pulled back along ``y``.

    ``tau`` is a 1-form (``BForm`` or ``AForm``) on ``Z(x*y^2 - x - 1)``.  The
    substitution is ``x = 1/(y^2-1)``, ``dX = -2y/(y^2-1)^2 dy``.
    """
    if not _is_curve(hs):
        raise OracleError(f"the pullback oracle only knows the curve {CURVE}")
    if tau.p != 1:
        raise OracleError("expected a 1-form")
    # numerator / (y^2 - 1)^K after clearing denominators
    pieces = []  # (coefficient list in y, power of (y^2-1))
    for (idx,), coeff in tau.terms.items():
        for (i, j), c in coeff.terms.items():
            mono = [ZERO] * j + [c]
            if idx == 0:
                pieces.append((_mul(mono, [ZERO, Q(-2)]), i + 2))
            else:
                pieces.append((mono, i))
    if not pieces:
        return (ZERO, ZERO)
    K = max(k for _, k in pieces)
    y2m1 = [Q(-1), ZERO, ONE]
    numerator: list = []
    for mono, k in pieces:
        term = mono
        for _ in range(K - k):
            term = _mul(term, y2m1)
        width = max(len(numerator), len(term))
        numerator = [
            (numerator[t] if t < len(numerator) else ZERO) + (term[t] if t < len(term) else ZERO)
            for t in range(width)
        ]
    numerator = _trim(numerator)
    r_plus = _laurent_residue(numerator, ONE, K, [(Q(-1), K)])
    r_minus = _laurent_residue(numerator, Q(-1), K, [(ONE, K)])
    return (r_plus, r_minus)


# -- verification suite used by the CLI ----------------------------------------------------


def random_poly(rng: random.Random, nvars: int, degree: int, terms: int = 6, coeff_range: int = 5) -> Poly:
    from .certificate import monomials_up_to

    monos = monomials_up_to(nvars, degree)
    picked = rng.sample(monos, min(terms, len(monos)))
    return Poly(nvars, {m: rng.randint(-coeff_range, coeff_range) for m in picked})


def run_checks(seed: int = 0) -> list[tuple[str, bool, str]]:
    """Oracle suites and regression fixtures; returns ``(name, passed, detail)``."""
    from .bounds import derham_degree_bound, gysin_degree_bound
    from .certificate import certify_smooth
    from .forms import AForm, LocForm, d_B, parse_form, residue
    from .lift import build_psi
    from .polyring import parse_poly

    rng = random.Random(seed)
    results = []

    def record(name, ok, detail=""):
        results.append((name, bool(ok), detail))

    # bounds
    record("bound derham(3,2,1) = 3528", derham_degree_bound(3, 2, 1) == 3528)
    record("bound gysin(3,2,2,2) = 3528", gysin_degree_bound(3, 2, 2, 2) == 3528)

    # univariate
    h1 = Hypersurface.parse("x^3 - x", 1)
    c1 = certify_smooth(h1)
    record("univariate certificate", bool(c1) and c1.verify(h1.f), str(c1.to_json() if c1 else c1))
    psi1 = build_psi(h1, c1, 2)
    roots = rational_roots(h1.f)
    got = residue(h1, psi1, parse_form("x*(x+1) d(x) / f", 1))
    want = parse_poly("1/2*x^2 + 1/2*x", 1)
    record("univariate Res(X(X+1)/f dX) = (X^2+X)/2", got.coeff(()) == want, str(got))
    bad = 0
    for _ in range(25):
        g = random_poly(rng, 1, 6)
        for s in (1, 2):
            w = LocForm(AForm(1, 1, {(0,): g}), s)
            if residue(h1, psi1, w).coeff(()) != expected_univariate_residue(h1, g, s, roots):
                bad += 1
    record("univariate oracle agreement (25 random g, s=1,2)", bad == 0, f"{bad} mismatches")

    # curve
    hs = Hypersurface.parse(CURVE, 2)
    cert = certify_smooth(hs)
    record("curve certificate degree <= 1", bool(cert) and cert.degree_bound_used <= 1 and cert.verify(hs.f),
           str(cert.to_json() if cert else cert))
    psi = build_psi(hs, cert, 2)
    for text, pair in (("(y+1) d(x)/\\d(y) / f", (1, 0)), ("(y-1) d(x)/\\d(y) / f", (0, 1))):
        tau = residue(hs, psi, parse_form(text, 2))
        record(f"curve residue of {text} pulls back to {pair}", curve_pullback_residues(hs, tau) == pair, str(tau))
    bad = 0
    for _ in range(10):
        h = random_poly(rng, 2, 4)
        tau = residue(hs, psi, LocForm(AForm(2, 2, {(0, 1): h}), 1))
        if tau.terms != ({(1,): hs.nf(Poly.var(0, 2) * h)} if hs.nf(Poly.var(0, 2) * h) else {}):
            bad += 1
    record("curve residue(h/f dX^dY) = NF(x h) dY (10 random h)", bad == 0, f"{bad} mismatches")
    bad = sum(curve_pullback_residues(hs, d_B(random_poly(rng, 2, 4), hs)) != (0, 0) for _ in range(5))
    record("exact forms have zero pullback residues", bad == 0, f"{bad} mismatches")
    return results
