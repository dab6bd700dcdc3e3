import pytest
from hypothesis import given, settings

from derham.bounds import BoundViolation, lift_coefficient_bound
from derham.certificate import Certificate, certify_smooth
from derham.lift import NotALift, SeriesA, build_psi, lift_step, psi_apply
from derham.polyring import Hypersurface, Poly, divmod_by_power

from conftest import P, polys

x, y = P("x"), P("y")
_CURVE = Hypersurface(P("x*y^2 - x - 1"))
_CURVE_PSI = build_psi(_CURVE, certify_smooth(_CURVE), 3)


def test_first_step_subtracts_nf_of_g(curve, curve_cert):
    f = curve.f
    assert lift_step(curve, curve_cert, (x, y), 1) == (x - x * f, y)


def test_second_step(curve, curve_cert):
    f = curve.f
    Y = (x - x * f, y)
    # f(Y) = -f^2 exactly, so p = -1
    assert f.compose(list(Y)) == -(f**2)
    assert lift_step(curve, curve_cert, Y, 2) == (x - x * f + x * f**2, y)


def test_general_first_step(random_smooth_cubics):
    hs, cert = random_smooth_cubics[0]
    X = tuple(Poly.var(i, 2) for i in range(2))
    Y = lift_step(hs, cert, X, 1)
    assert Y == tuple(X[i] - hs.nf(cert.g[i]) * hs.f for i in range(2))


def test_not_a_lift(curve, curve_cert):
    with pytest.raises(NotALift):
        lift_step(curve, curve_cert, (x, y), 2)
    with pytest.raises(NotALift):
        lift_step(curve, curve_cert, (x + 1, y), 1)


def test_lift_invariant_exact(random_smooth_cubics):
    for hs, cert in random_smooth_cubics:
        Y = tuple(Poly.var(i, 2) for i in range(2))
        for nu in range(1, 4):
            Y = lift_step(hs, cert, Y, nu)
            _, r = divmod_by_power(hs.f.compose(list(Y)), hs.f, nu + 1)
            assert r.is_zero()


def test_order_zero_is_identity(curve, curve_cert):
    psi = build_psi(curve, curve_cert, 0)
    assert [s.coeffs for s in psi.xi] == [(x,), (y,)]


def test_curve_order_three(curve_psi):
    assert curve_psi.xi[0].coeffs == (x, -x, x, -x)
    assert curve_psi.xi[1].coeffs == (y, P("0"), P("0"), P("0"))


def test_curve_relation_vanishes_to_order(curve, curve_psi):
    xi = [s.collapse() for s in curve_psi.xi]
    _, r = divmod_by_power(curve.f.compose(xi), curve.f, 4)
    assert r.is_zero()


def test_truncation_compatibility(random_smooth_cubics):
    for hs, cert in random_smooth_cubics:
        full = build_psi(hs, cert, 3)
        for nu in range(4):
            short = build_psi(hs, cert, nu)
            assert [s.coeffs for s in short.xi] == [s.coeffs[: nu + 1] for s in full.xi]


def test_degree_bounds_on_random_cubics(random_smooth_cubics):
    for hs, cert in random_smooth_cubics:
        psi = build_psi(hs, cert, 3)
        for s in psi.xi:
            for nu, a in enumerate(s.coeffs):
                assert a.total_degree <= 3**nu * 7 == lift_coefficient_bound(3, 2, nu)


def test_bound_violation_is_raised(curve):
    # a valid but absurdly high-degree certificate: add the Koszul syzygy times a big monomial
    f = curve.f
    fx, fy = f.derivative(0), f.derivative(1)
    m = P("y^40")
    cert = Certificate((x + m * fy, -m * fx), P("-1"), 42)
    assert cert.residual(f).is_zero()
    with pytest.raises(BoundViolation):
        build_psi(curve, cert, 1)
    build_psi(curve, cert, 1, check_bounds=False)


class TestApply:
    def test_generators(self, curve_psi):
        assert psi_apply(curve_psi, x) == curve_psi.xi[0]
        assert psi_apply(curve_psi, y) == curve_psi.xi[1]

    def test_f_maps_to_zero(self, curve, curve_psi):
        assert psi_apply(curve_psi, curve.f).collapse().is_zero()

    def test_constant(self, curve, curve_psi):
        assert psi_apply(curve_psi, P("7/3")).coeffs == (P("7/3"),) + (P("0"),) * 3

    def test_depends_only_on_class(self, curve, curve_psi):
        b = P("x^2*y + 3*y")
        assert psi_apply(curve_psi, b) == psi_apply(curve_psi, b + P("x*y - 2") * curve.f)

    @settings(max_examples=25, deadline=None)
    @given(polys(max_degree=3), polys(max_degree=3))
    def test_ring_homomorphism_curve(self, b1, b2):
        psi = _CURVE_PSI
        assert psi_apply(psi, b1 * b2) == psi_apply(psi, b1) * psi_apply(psi, b2)
        assert psi_apply(psi, b1 + b2) == psi_apply(psi, b1) + psi_apply(psi, b2)

    def test_ring_homomorphism_random_cubics(self, random_smooth_cubics):
        import random

        from derham.oracle import random_poly

        rng = random.Random(3)
        for hs, cert in random_smooth_cubics:
            psi = build_psi(hs, cert, 3)
            for _ in range(3):
                b1, b2 = random_poly(rng, 2, 3), random_poly(rng, 2, 3)
                lhs = psi_apply(psi, b1 * b2)
                assert lhs == psi_apply(psi, b1) * psi_apply(psi, b2)
                assert lhs.collapse() == (psi_apply(psi, b1) * psi_apply(psi, b2)).collapse()


class TestSeriesA:
    def test_equality_is_by_collapse(self, curve):
        f = curve.f
        a = SeriesA(curve, [f, P("0"), P("0")])
        b = SeriesA(curve, [P("0"), P("1"), P("0")])
        assert a == b and a.collapse() == b.collapse() == f
        assert a.coeffs != b.coeffs

    def test_truncation(self, curve):
        assert SeriesA(curve, [curve.f**3, P("0"), P("0")]).collapse().is_zero()

    def test_json(self, curve_psi):
        assert curve_psi.xi[0].to_json() == {"modulus_power": 4, "coeffs": ["x", "-x", "x", "-x"]}

