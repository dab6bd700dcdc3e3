"""Differential forms over A, A_f and B, and the residue map.

A p-form is ``{indices: coefficient}`` with strictly increasing 0-based index
tuples of length p.  ``BForm`` coefficients are kept as normal forms mod f.

The residue of ``alpha/f^s dX_J`` is computed in ``B[[T]][1/T]``: the
numerator goes through ``psi_hat^-1``, each ``dX_j`` becomes ``dXi_j``, and
the coefficient of ``dT/T`` (with ``dT`` moved to the front) is read off.
Only T-powers that can reach ``T^-1`` are kept during the expansion.
"""
from __future__ import annotations

import warnings
from itertools import combinations
from typing import Sequence

from . import bounds
from ._exterior import accumulate, add_terms, contract, d_terms, merge_indices, wedge_terms
from .bounds import derham_degree_bound, gysin_degree_bound
from .certificate import Certificate
from .completion import QElem, SeriesB, psi_hat_inv
from .lift import PsiData
from .parsing import ParseError, parse_graded
from .polyring import NEG_INF, Hypersurface, Poly, grlex_key, var_names

__all__ = [
    "AForm", "BForm", "LocForm", "wedge", "d_A", "d_B", "lambda_map", "xi_differential",
    "residue", "residues", "bform_class_eq", "bform_normal_form", "gysin_degree_bound",
    "derham_degree_bound", "spanning_set", "parse_form", "ResidueWarning",
]


class ResidueWarning(UserWarning):
    pass


class _Form:
    __slots__ = ("n", "p", "terms")

    def __init__(self, n: int, p: int, terms: dict):
        if not 0 <= p <= n:
            raise ValueError(f"form degree {p} out of range for {n} variables")
        for j, c in terms.items():
            if len(j) != p or list(j) != sorted(set(j)) or any(not 0 <= i < n for i in j):
                raise ValueError(f"bad index tuple {j!r} for a {p}-form")
            if c.nvars != n:
                raise ValueError("coefficient has the wrong variable count")
        self.n = n
        self.p = p
        self.terms = {j: c for j, c in terms.items() if c}

    def _same(self, other) -> None:
        if type(other) is not type(self) or other.n != self.n:
            raise ValueError("forms must be of the same kind over the same ring")

    def _new(self, p: int, terms: dict):
        raise NotImplementedError

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def degree(self):
        """Coefficient degree plus form degree; the zero form has degree -inf."""
        return max((c.total_degree + self.p for c in self.terms.values()), default=NEG_INF)

    def coeff(self, indices: Sequence[int]) -> Poly:
        return self.terms.get(tuple(indices), Poly.zero(self.n))

    def __add__(self, other):
        self._same(other)
        if other.p != self.p:
            raise ValueError("cannot add forms of different degrees")
        return self._new(self.p, add_terms(self.terms, other.terms))

    def __sub__(self, other):
        self._same(other)
        if other.p != self.p:
            raise ValueError("cannot subtract forms of different degrees")
        return self._new(self.p, add_terms(self.terms, other.terms, -1))

    def __neg__(self):
        return self._new(self.p, {j: -c for j, c in self.terms.items()})

    def scale(self, c):
        return self._new(self.p, {j: v * c for j, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.n == other.n and self.p == other.p and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, self.p, frozenset(self.terms.items())))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items())

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        names = var_names(self.n)
        if self.p == 0:
            return self.terms[()].to_string(compact=True)
        parts = []
        for j, c in self.sorted_terms():
            wedge_str = "/\\".join(f"d({names[i]})" for i in j)
            if c == 1:
                parts.append(wedge_str)
            elif c == -1:
                parts.append("-" + wedge_str)
            elif c.is_constant():
                parts.append(f"{c.to_string()} {wedge_str}")
            else:
                parts.append(f"({c.to_string(compact=True)}) {wedge_str}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_string()

    def to_json(self, pole_order: int = 0) -> dict:
        return {
            "p": self.p,
            "pole_order": pole_order,
            "terms": [{"indices": [i + 1 for i in j], "coeff": c.to_string()} for j, c in self.sorted_terms()],
        }


class AForm(_Form):
    """Polynomial differential form in ``Omega^p_A``."""

    __slots__ = ()

    def _new(self, p, terms):
        return AForm(self.n, p, terms)

    @classmethod
    def zero(cls, n: int, p: int) -> "AForm":
        return cls(n, p, {})

    @classmethod
    def function(cls, g: Poly) -> "AForm":
        return cls(g.nvars, 0, {(): g})

    @classmethod
    def dx(cls, indices: Sequence[int], n: int, coeff: Poly | None = None) -> "AForm":
        """``coeff * dX_{i1} ^ ... ^ dX_{ip}`` for any index order."""
        terms = {(): coeff if coeff is not None else Poly.constant(1, n)}
        for i in indices:
            terms = wedge_terms(terms, {(i,): Poly.constant(1, n)})
        return cls(n, len(indices), terms)

    def wedge(self, other: "AForm") -> "AForm":
        self._same(other)
        if self.p + other.p > self.n:
            return AForm.zero(self.n, self.n)
        return AForm(self.n, self.p + other.p, wedge_terms(self.terms, other.terms))

    def __repr__(self) -> str:
        return f"AForm({self.to_string()!r})"

    @classmethod
    def from_json(cls, data: dict, n: int) -> "AForm":
        from .parsing import parse_poly

        terms: dict = {}
        for t in data["terms"]:
            idx = [i - 1 for i in t["indices"]]
            piece = AForm.dx(idx, n, parse_poly(t["coeff"], n))
            terms = add_terms(terms, piece.terms)
        return cls(n, int(data["p"]), terms)


class BForm(_Form):
    """Representative of a class in ``Omega^p_B``; coefficients are NFs mod f."""

    __slots__ = ("hs",)

    def __init__(self, hs: Hypersurface, p: int, terms: dict, *, reduced: bool = False):
        if not reduced:
            terms = {j: hs.nf(c) for j, c in terms.items()}
        super().__init__(hs.n, p, terms)
        self.hs = hs

    def _new(self, p, terms):
        return BForm(self.hs, p, terms)

    def _same(self, other) -> None:
        super()._same(other)
        if other.hs != self.hs:
            raise ValueError("forms live on different hypersurfaces")

    @classmethod
    def zero(cls, hs: Hypersurface, p: int) -> "BForm":
        return cls(hs, p, {}, reduced=True)

    @classmethod
    def from_aform(cls, hs: Hypersurface, form: AForm) -> "BForm":
        return cls(hs, form.p, form.terms)

    @classmethod
    def from_json(cls, hs: Hypersurface, data: dict) -> "BForm":
        if data.get("pole_order", 0):
            raise ValueError("a form on the hypersurface has no pole")
        return cls.from_aform(hs, AForm.from_json(data, hs.n))

    def lift(self) -> AForm:
        """The normal-form representative, viewed as a form over A."""
        return AForm(self.n, self.p, dict(self.terms))

    def wedge(self, other: "BForm") -> "BForm":
        self._same(other)
        if self.p + other.p > self.n:
            return BForm.zero(self.hs, self.n)
        return BForm(self.hs, self.p + other.p, wedge_terms(self.terms, other.terms, self.hs.nf), reduced=True)

    def __repr__(self) -> str:
        return f"BForm({self.to_string()!r})"


class LocForm:
    """``numerator / f^pole_order`` in ``Omega^p_{A_f}``."""

    __slots__ = ("numerator", "pole_order")

    def __init__(self, numerator: AForm, pole_order: int):
        if pole_order < 0:
            raise ValueError("pole order must be non-negative")
        self.numerator = numerator
        self.pole_order = pole_order

    @property
    def p(self) -> int:
        return self.numerator.p

    @property
    def n(self) -> int:
        return self.numerator.n

    def degree(self, d: int):
        """``deg alpha - s*d``."""
        return self.numerator.degree - self.pole_order * d

    def __add__(self, other: "LocForm") -> "LocForm":
        if other.pole_order != self.pole_order:
            raise ValueError("bring forms to a common pole order first")
        return LocForm(self.numerator + other.numerator, self.pole_order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocForm):
            return NotImplemented
        return self.numerator == other.numerator and self.pole_order == other.pole_order

    def __hash__(self) -> int:
        return hash((self.numerator, self.pole_order))

    def to_string(self) -> str:
        body = self.numerator.to_string()
        if not self.pole_order:
            return body
        power = "f" if self.pole_order == 1 else f"f^{self.pole_order}"
        if len(self.numerator.terms) > 1:
            body = f"({body})"
        return f"{body} / {power}"

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"LocForm({self.to_string()!r})"

    def to_json(self) -> dict:
        return self.numerator.to_json(self.pole_order)

    @classmethod
    def from_json(cls, data: dict, n: int) -> "LocForm":
        return cls(AForm.from_json(data, n), int(data.get("pole_order", 0)))


def parse_form(text: str, nvars: int, pole_order: int | None = None) -> LocForm:
    """Parse e.g. ``"(y+1) d(x)/\\d(y) / f"``; ``pole_order`` overrides a missing suffix."""
    p, terms, pole = parse_graded(text, nvars)
    if pole_order is not None:
        if pole and pole != pole_order:
            raise ParseError(f"pole order {pole} in the text conflicts with {pole_order}", 0, text)
        pole = pole_order
    return LocForm(AForm(nvars, p, terms), pole)


# -- operations ------------------------------------------------------------------------


def wedge(a, b):
    return a.wedge(b)


def d_A(omega: AForm) -> AForm:
    if omega.p == omega.n:
        return AForm.zero(omega.n, omega.n)
    return AForm(omega.n, omega.p + 1, d_terms(omega.terms, omega.n))


def d_B(b: QElem | Poly, hs: Hypersurface | None = None) -> BForm:
    """Differential of the normal-form representative, reduced mod f."""
    if isinstance(b, QElem):
        hs, rep = b.hs, b.rep
    else:
        if hs is None:
            raise ValueError("hypersurface required for a polynomial argument")
        rep = hs.nf(b)
    return BForm(hs, 1, d_terms({(): rep}, hs.n))


def d_B_form(tau: BForm) -> BForm:
    if tau.p == tau.n:
        return BForm.zero(tau.hs, tau.n)
    return BForm(tau.hs, tau.p + 1, d_terms(tau.terms, tau.n))


def df_form(hs: Hypersurface) -> AForm:
    return AForm(hs.n, 1, {(i,): g for i, g in enumerate(hs.gradient) if g})


def lambda_map(hs: Hypersurface, omega: BForm) -> LocForm:
    """``(df/f) ^ omega'`` with ``omega'`` the normal-form lift of ``omega``."""
    return LocForm(df_form(hs).wedge(omega.lift()), 1)


def bform_class_eq(hs: Hypersurface, tau1: BForm, tau2: BForm, cert: Certificate | None = None) -> bool:
    """Equality in ``Omega^p_B``: ``df ^ (tau1 - tau2)`` vanishes mod f.

    Valid because a smoothness certificate makes ``df`` unimodular over B;
    ``cert`` is accepted for symmetry with :func:`bform_normal_form`.
    """
    if tau1.p != tau2.p:
        raise ValueError("forms have different degrees")
    diff = (tau1 - tau2).lift()
    return not wedge_terms(df_form(hs).terms, diff.terms, hs.nf)


def bform_normal_form(hs: Hypersurface, cert: Certificate, tau: BForm) -> BForm:
    """Canonical representative ``iota_g(df ^ tau)`` of the class of ``tau``.

    With ``sum g_i d_i f = 1`` mod f this equals ``tau - df ^ iota_g(tau)``,
    kills ``df ^ (anything)``, and is idempotent.
    """
    wedge_df = wedge_terms(df_form(hs).terms, tau.terms, hs.nf)
    return BForm(hs, tau.p, contract(wedge_df, cert.g, hs.nf), reduced=True)


# -- residue ---------------------------------------------------------------------------


class XiDifferential:
    """``dXi_i = sum_v (dT part_v dT + spatial_v) T^v`` for v = 0..N."""

    __slots__ = ("dT_part", "spatial")

    def __init__(self, dT_part: SeriesB, spatial: list[BForm]):
        self.dT_part = dT_part
        self.spatial = spatial

    def __iter__(self):
        return iter((self.dT_part, self.spatial))


def xi_differential(psi: PsiData, i: int, order: int) -> XiDifferential:
    """Coefficients of ``dXi_i`` up to ``T^order``; needs psi of order ``order+1``."""
    hs = psi.hs
    if not 0 <= i < hs.n:
        raise IndexError(f"variable index {i} out of range")
    if order + 1 > psi.order:
        raise ValueError(f"psi order {psi.order} is too small for T^{order} (need {order + 1})")
    xi = psi_hat_inv(psi, Poly.var(i, hs.n), order + 1)
    dT = SeriesB(hs, [xi.coeffs[v + 1] * (v + 1) for v in range(order + 1)])
    spatial = [d_B(xi.coeffs[v]) for v in range(order + 1)]
    return XiDifferential(dT, spatial)


def _wedge_expansion(hs: Hypersurface, dxi: list[XiDifferential], J: tuple, top: int) -> dict:
    """dT-linear part of ``dXi_{j1} ^ ... ^ dXi_{jp}`` up to ``T^top``.

    Keys are ``(T power, spatial index tuple)``; the form is ``dT ^ dX_K``.
    """
    n = hs.n
    one = Poly.constant(1, n)
    # state: (tpow, has_dT, K) -> coefficient
    state: dict = {(0, False, ()): one}
    for j in J:
        dT_part, spatial = dxi[j].dT_part, dxi[j].spatial
        new: dict = {}
        for (t, has_dt, K), c in state.items():
            for v in range(top - t + 1):
                if not has_dt:
                    coef = dT_part.coeffs[v]
                    if coef:
                        prod = c * coef.rep
                        # dX_K ^ dT = (-1)^|K| dT ^ dX_K
                        accumulate(new, (t + v, True, K), prod if len(K) % 2 == 0 else -prod)
                for (k,), ck in spatial[v].terms.items():
                    sign, K2 = merge_indices(K, (k,))
                    if sign:
                        prod = c * ck
                        accumulate(new, (t + v, has_dt, K2), prod if sign > 0 else -prod)
        state = {key: r for key, r in ((key, hs.nf(v)) for key, v in new.items()) if r}
    return {(t, K): c for (t, has_dt, K), c in state.items() if has_dt}


def residue(hs: Hypersurface, psi: PsiData, omega: LocForm, check_bounds: bool = True,
            _cache: dict | None = None) -> BForm:
    """Residue of ``omega = alpha/f^s`` as a (p-1)-form on ``Z(f)``.

    For ``d >= 3`` the result is checked against ``(2d^n+d)^s (deg omega + s d)``.
    """
    s, p = omega.pole_order, omega.p
    if p < 1:
        raise ValueError("residue needs a form of degree p >= 1")
    if omega.n != hs.n:
        raise ValueError("form and hypersurface have different variable counts")
    if s == 0:
        warnings.warn("pole order 0: the residue is zero", ResidueWarning, stacklevel=2)
        return BForm.zero(hs, p - 1)
    if psi.order < s:
        raise ValueError(f"psi order {psi.order} is below the pole order {s}")
    cache = _cache if _cache is not None else {}
    key = ("dxi", s)
    if key not in cache:
        cache[key] = [xi_differential(psi, i, s - 1) for i in range(hs.n)]
    dxi = cache[key]
    out: dict = {}
    for J, alpha in omega.numerator.sorted_terms():
        b = psi_hat_inv(psi, alpha, s - 1, check_bounds=check_bounds)
        ekey = ("wedge", s, J)
        if ekey not in cache:
            cache[ekey] = _wedge_expansion(hs, dxi, J, s - 1)
        expansion = cache[ekey]
        for mu, bmu in enumerate(b.coeffs):
            if not bmu:
                continue
            for (t, K), c in expansion.items():
                if t == s - 1 - mu:
                    accumulate(out, K, bmu.rep * c)
    result = BForm(hs, p - 1, out)
    if check_bounds and hs.d >= 3 and omega.numerator:
        bound = gysin_degree_bound(hs.d, hs.n, s, omega.degree(hs.d))
        bounds.check(result.degree, bound, "residue")
    return result


def residues(hs: Hypersurface, psi: PsiData, forms: Sequence[LocForm], check_bounds: bool = True) -> list[BForm]:
    """Residues of several forms, sharing the ``dXi`` expansions."""
    cache: dict = {}
    return [residue(hs, psi, w, check_bounds, cache) for w in forms]


def spanning_set(hs: Hypersurface, p: int) -> list[LocForm]:
    """Candidate representatives ``m dX_J / f^(p+1)`` with ``deg m <= (p+1) d``.

    ``J`` runs over (p+1)-subsets in lexicographic order and ``m`` over
    monomials in ascending graded-lex order.  Their residues span
    ``H^p_dR(Z(f))``.
    """
    from .certificate import monomials_up_to

    n, d = hs.n, hs.d
    if p < 0:
        raise ValueError("p must be non-negative")
    if p + 1 > n:
        return []
    monos = sorted(monomials_up_to(n, (p + 1) * d), key=grlex_key)
    out = []
    for J in combinations(range(n), p + 1):
        for m in monos:
            out.append(LocForm(AForm(n, p + 1, {J: Poly.monomial(m)}), p + 1))
    return out
