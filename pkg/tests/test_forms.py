import random
import warnings
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from derham.bounds import BoundViolation
from derham.completion import QElem
from derham.forms import (
    AForm, BForm, LocForm, ResidueWarning, bform_class_eq, bform_normal_form, d_A, d_B, derham_degree_bound,
    gysin_degree_bound, lambda_map, parse_form, residue, residues, spanning_set, wedge, xi_differential,
)
from derham.lift import build_psi
from derham.oracle import random_poly
from derham.polyring import Poly

from conftest import P, polys

x, y = P("x"), P("y")


def random_aform(rng, n, p, degree=4):
    return AForm(n, p, {J: random_poly(rng, n, degree, terms=4) for J in combinations(range(n), p)})


def random_bform(rng, hs, p, degree=4):
    return BForm.from_aform(hs, random_aform(rng, hs.n, p, degree))


class TestExterior:
    def test_alternation(self):
        dx, dy = AForm.dx([0], 2), AForm.dx([1], 2)
        assert wedge(dx, dx).is_zero()
        assert wedge(dx, dy) == -wedge(dy, dx)
        assert AForm.dx([1, 0], 2) == -AForm.dx([0, 1], 2)

    def test_bilinear(self):
        a = AForm.dx([0], 2, x)
        b = AForm.dx([1], 2, y)
        assert wedge(a, b) == AForm.dx([0, 1], 2, x * y)

    def test_d_examples(self):
        assert d_A(AForm.function(x)) == AForm.dx([0], 2)
        assert d_A(AForm.function(x * y)) == AForm(2, 1, {(0,): y, (1,): x})

    @settings(max_examples=30)
    @given(polys(nvars=3, max_degree=4))
    def test_d_squared_zero_on_functions(self, g):
        assert d_A(d_A(AForm.function(g))).is_zero()

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32), st.integers(0, 3), st.integers(0, 3))
    def test_leibniz_and_dd(self, seed, p, q):
        rng = random.Random(seed)
        n = 3
        a, b = random_aform(rng, n, p, 3), random_aform(rng, n, q, 3)
        assert d_A(d_A(a)).is_zero()
        if p + q + 1 <= n:
            sign = -1 if p % 2 else 1
            assert d_A(a.wedge(b)) == d_A(a).wedge(b) + a.wedge(d_A(b)).scale(sign)


class TestDB:
    def test_examples(self, curve):
        assert d_B(QElem(curve, x)) == BForm(curve, 1, {(0,): P("1")})
        assert d_B(QElem(curve, P("5"))).is_zero()
        assert d_B(curve.f, curve).is_zero()
        assert not d_A(AForm.function(curve.f)).is_zero()


class TestLambda:
    def test_unit(self, curve):
        w = lambda_map(curve, BForm(curve, 0, {(): P("1")}))
        assert w.pole_order == 1
        assert w.numerator == AForm(2, 1, {(0,): P("y^2 - 1"), (1,): P("2*x*y")})

    def test_y_dy(self, curve):
        w = lambda_map(curve, BForm(curve, 1, {(1,): y}))
        assert w == LocForm(AForm.dx([0, 1], 2, P("y^3 - y")), 1)


class TestXiDifferential:
    def test_curve_x(self, curve_psi):
        dT, spatial = xi_differential(curve_psi, 0, 2)
        assert [c.rep for c in dT.coeffs] == [x, P("0"), P("0")]
        assert [s.terms for s in spatial] == [{(0,): P("1")}, {(0,): P("1")}, {}]

    def test_curve_y(self, curve_psi):
        dT, spatial = xi_differential(curve_psi, 1, 2)
        assert all(c.is_zero() for c in dT.coeffs)
        assert [s.terms for s in spatial] == [{(1,): P("1")}, {}, {}]

    def test_constant_term_is_dX(self, random_smooth_cubics):
        hs, cert = random_smooth_cubics[0]
        psi = build_psi(hs, cert, 2)
        for i in range(2):
            _, spatial = xi_differential(psi, i, 1)
            assert spatial[0] == BForm(hs, 1, {(i,): P("1")})

    def test_order_shortfall(self, curve, curve_cert):
        with pytest.raises(ValueError):
            xi_differential(build_psi(curve, curve_cert, 1), 0, 1)


class TestResidue:
    def test_univariate_idempotent(self, cubic, cubic_psi):
        tau = residue(cubic, cubic_psi, parse_form("x*(x+1) d(x) / f", 1))
        assert tau.p == 0 and tau.coeff(()) == P("1/2*x^2 + 1/2*x", 1)

    def test_curve_generators(self, curve, curve_psi):
        assert residue(curve, curve_psi, parse_form("(y+1) d(x)/\\d(y) / f", 2)) == BForm(curve, 1, {(1,): P("x*y + x")})
        assert residue(curve, curve_psi, parse_form("(y-1) d(x)/\\d(y) / f", 2)) == BForm(curve, 1, {(1,): P("x*y - x")})

    @settings(max_examples=20, deadline=None)
    @given(polys(max_degree=4))
    def test_curve_order_one_is_x_h_dY(self, h):
        hs, psi = _CURVE, _CURVE_PSI
        tau = residue(hs, psi, LocForm(AForm.dx([0, 1], 2, h), 1))
        assert tau == BForm(hs, 1, {(1,): x * h})

    def test_dX_wedge_dY_order_matters(self, curve, curve_psi):
        a = residue(curve, curve_psi, LocForm(AForm.dx([0, 1], 2), 1))
        b = residue(curve, curve_psi, LocForm(AForm.dx([1, 0], 2), 1))
        assert a == -b

    def test_linearity(self, random_smooth_cubics):
        rng = random.Random(2)
        hs, cert = random_smooth_cubics[2]
        psi = build_psi(hs, cert, 2)
        for s in (1, 2):
            for p in (1, 2):
                w1, w2 = random_aform(rng, 2, p, 3), random_aform(rng, 2, p, 3)
                lhs = residue(hs, psi, LocForm(w1 + w2, s))
                assert lhs == residue(hs, psi, LocForm(w1, s)) + residue(hs, psi, LocForm(w2, s))

    def test_polynomial_part_has_no_residue(self, curve, curve_psi):
        # g*f^2/f^2 is a polynomial form
        w = LocForm(AForm.dx([0, 1], 2, P("x*y + 2") * curve.f**2), 2)
        assert residue(curve, curve_psi, w).is_zero()

    def test_exact_form_residue_vanishes_univariate(self, cubic, cubic_psi):
        # d(g/f) = (g' f - g f') / f^2 dX
        f = cubic.f
        g = P("x^4 + 2*x - 3", 1)
        num = g.derivative(0) * f - g * f.derivative(0)
        assert residue(cubic, cubic_psi, LocForm(AForm(1, 1, {(0,): num}), 2)).is_zero()

    def test_pole_order_zero_warns(self, curve, curve_psi):
        with pytest.warns(ResidueWarning):
            assert residue(curve, curve_psi, LocForm(AForm.dx([0], 2), 0)).is_zero()

    def test_psi_too_short(self, curve, curve_cert):
        with pytest.raises(ValueError):
            residue(curve, build_psi(curve, curve_cert, 1), LocForm(AForm.dx([0, 1], 2), 2))

    def test_bounds_on_random_cubics(self, random_smooth_cubics):
        rng = random.Random(4)
        for hs, cert in random_smooth_cubics:
            psi = build_psi(hs, cert, 3)
            for s in (1, 2, 3):
                w = LocForm(random_aform(rng, 2, 2, 3), s)
                tau = residue(hs, psi, w)  # asserts internally
                assert tau.degree <= gysin_degree_bound(3, 2, s, w.degree(3))


class TestResLambda:
    def test_functions_exact(self, curve, curve_psi):
        rng = random.Random(21)
        for _ in range(5):
            w = random_bform(rng, curve, 0)
            assert residue(curve, curve_psi, lambda_map(curve, w)) == w

    def test_one_forms_up_to_df(self, curve, curve_cert, curve_psi):
        rng = random.Random(22)
        for _ in range(5):
            w = random_bform(rng, curve, 1)
            r = residue(curve, curve_psi, lambda_map(curve, w))
            assert bform_class_eq(curve, r, w)
            assert r == bform_normal_form(curve, curve_cert, w)

    def test_one_form_counterexample_to_coefficient_equality(self, curve, curve_psi):
        w = BForm(curve, 1, {(0,): P("1")})
        r = residue(curve, curve_psi, lambda_map(curve, w))
        assert r == BForm(curve, 1, {(1,): P("-2*x^2*y")}) != w
        assert bform_class_eq(curve, r, w)

    def test_random_cubic_all_degrees(self, random_smooth_cubics):
        rng = random.Random(23)
        for hs, cert in random_smooth_cubics:
            psi = build_psi(hs, cert, 1)
            for p in (0, 1):
                w = bform_normal_form(hs, cert, random_bform(rng, hs, p, 3))
                assert residue(hs, psi, lambda_map(hs, w)) == w


class TestClassEq:
    def test_reflexive(self, curve):
        w = BForm(curve, 1, {(0,): x, (1,): y})
        assert bform_class_eq(curve, w, w)

    def test_df_is_zero(self, curve):
        df = BForm(curve, 1, {(0,): P("y^2 - 1"), (1,): P("2*x*y")})
        assert bform_class_eq(curve, df, BForm.zero(curve, 1))

    def test_dX_is_not_zero(self, curve):
        assert not bform_class_eq(curve, BForm(curve, 1, {(0,): P("1")}), BForm.zero(curve, 1))

    def test_degree_mismatch(self, curve):
        with pytest.raises(ValueError):
            bform_class_eq(curve, BForm.zero(curve, 0), BForm.zero(curve, 1))

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32))
    def test_invariance_and_equivalence(self, seed):
        rng = random.Random(seed)
        hs, cert = _CURVE, _CURVE_CERT
        df = BForm(hs, 1, {(i,): g for i, g in enumerate(hs.gradient)})
        a = random_bform(rng, hs, 1, 3)
        gamma = random_bform(rng, hs, 0, 3)
        b = a + df.wedge(gamma)
        c = b + df.wedge(random_bform(rng, hs, 0, 3))
        assert bform_class_eq(hs, a, b) and bform_class_eq(hs, b, a)
        assert bform_class_eq(hs, a, c)
        nf = bform_normal_form(hs, cert, a)
        assert nf == bform_normal_form(hs, cert, b) == bform_normal_form(hs, cert, nf)
        assert bform_class_eq(hs, nf, a)
        assert not bform_class_eq(hs, a, a + BForm(hs, 1, {(0,): P("1")}))


class TestBoundFormulas:
    def test_gysin(self):
        assert gysin_degree_bound(3, 2, 2, 2) == 21**2 * 8 == 3528
        assert gysin_degree_bound(3, 1, 1, 1) == 36
        assert gysin_degree_bound(3, 2, 2, -6) == 0

    def test_derham(self):
        assert derham_degree_bound(3, 2, 1) == 3528
        assert derham_degree_bound(3, 1, 0) == 36
        assert derham_degree_bound(4, 2, 0) == 180

    def test_big_integers_exact(self):
        assert derham_degree_bound(10, 8, 3) == 4 * 11 * (2 * 10**8 + 10) ** 4

    @pytest.mark.parametrize("d", [1, 2])
    def test_small_degree_rejected(self, d):
        with pytest.raises(ValueError):
            derham_degree_bound(d, 2, 1)
        with pytest.raises(ValueError):
            gysin_degree_bound(d, 2, 1, 1)


class TestSpanningSet:
    def test_curve_count(self, curve):
        forms = spanning_set(curve, 1)
        assert len(forms) == 28
        assert all(w.pole_order == 2 and w.p == 2 for w in forms)
        assert all(w.numerator.degree <= 2 * 4 for w in forms)

    def test_univariate(self, cubic):
        forms = spanning_set(cubic, 0)
        assert [w.numerator.coeff((0,)) for w in forms] == [P("1", 1), P("x", 1), P("x^2", 1), P("x^3", 1)]
        assert all(w.pole_order == 1 for w in forms)

    def test_too_high(self, curve):
        assert spanning_set(curve, 2) == []

    def test_residues_within_bound(self, random_smooth_cubics):
        hs, cert = random_smooth_cubics[1]
        psi = build_psi(hs, cert, 2)
        taus = residues(hs, psi, spanning_set(hs, 1))
        assert max(t.degree for t in taus) <= derham_degree_bound(3, 2, 1)

    def test_univariate_residues_span_h0(self, cubic, cubic_psi):
        from derham.oracle import linearly_independent, rational_roots

        taus = residues(cubic, cubic_psi, spanning_set(cubic, 0))
        reps = [t.coeff(()) for t in taus]
        assert linearly_independent(reps[:3], rational_roots(cubic.f)) or \
            linearly_independent([r for r in reps if r][:3], rational_roots(cubic.f))


class TestSerialization:
    def test_form_json_roundtrip(self, curve):
        w = parse_form("(y+1) d(x)/\\d(y) / f^2", 2)
        data = w.to_json()
        assert data == {"p": 2, "pole_order": 2, "terms": [{"indices": [1, 2], "coeff": "y + 1"}]}
        assert LocForm.from_json(data, 2) == w

    def test_form_text_roundtrip(self):
        rng = random.Random(8)
        for p in range(4):
            w = random_aform(rng, 3, p, 3)
            assert parse_form(w.to_string(), 3).numerator == w

    def test_pole_flag_conflict(self):
        from derham.parsing import ParseError

        with pytest.raises(ParseError):
            parse_form("d(x) / f^2", 2, pole_order=1)
        assert parse_form("d(x)", 2, pole_order=3).pole_order == 3


def test_bound_violation_not_clamped(curve):
    from derham.certificate import Certificate

    f = curve.f
    m = P("y^40")
    cert = Certificate((x + m * f.derivative(1), -m * f.derivative(0)), P("-1"), 42)
    psi = build_psi(curve, cert, 1, check_bounds=False)
    with pytest.raises(BoundViolation):
        residue(curve, psi, LocForm(AForm.dx([0, 1], 2), 1))


from derham.certificate import certify_smooth as _cs  # noqa: E402
from derham.polyring import Hypersurface as _H  # noqa: E402

_CURVE = _H(P("x*y^2 - x - 1"))
_CURVE_CERT = _cs(_CURVE)
_CURVE_PSI = build_psi(_CURVE, _CURVE_CERT, 3)
