import random

import pytest
from hypothesis import strategies as st

from derham.certificate import certify_smooth
from derham.lift import build_psi
from derham.oracle import random_poly
from derham.polyring import Hypersurface, Poly, parse_poly

CURVE = "x*y^2 - x - 1"
CUBIC = "x^3 - x"


@pytest.fixture(scope="session")
def curve():
    return Hypersurface.parse(CURVE, 2)


@pytest.fixture(scope="session")
def curve_cert(curve):
    return certify_smooth(curve)


@pytest.fixture(scope="session")
def curve_psi(curve, curve_cert):
    return build_psi(curve, curve_cert, 3)


@pytest.fixture(scope="session")
def cubic():
    return Hypersurface.parse(CUBIC, 1)


@pytest.fixture(scope="session")
def cubic_cert(cubic):
    return certify_smooth(cubic)


@pytest.fixture(scope="session")
def cubic_psi(cubic, cubic_cert):
    return build_psi(cubic, cubic_cert, 3)


def smooth_cubics(count=4, seed=7):
    """Deterministic random smooth plane cubics with their certificates."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        f = random_poly(rng, 2, 3, terms=5, coeff_range=3)
        if f.total_degree != 3:
            continue
        hs = Hypersurface(f)
        cert = certify_smooth(hs)
        if cert:
            out.append((hs, cert))
    return out


@pytest.fixture(scope="session")
def random_smooth_cubics():
    return smooth_cubics()


def polys(nvars=2, max_degree=4, max_terms=6, coeff=7):
    monomial = st.tuples(*[st.integers(0, max_degree)] * nvars).filter(lambda m: sum(m) <= max_degree)
    coefficient = st.fractions(min_value=-coeff, max_value=coeff, max_denominator=5)
    return st.dictionaries(monomial, coefficient, max_size=max_terms).map(lambda t: Poly(nvars, t))


def P(text, n=2):
    return parse_poly(text, n)
