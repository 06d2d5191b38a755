import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qlat.geometry import GeometricSpec, singular_point, validate_positive_basis
from qlat.numeric import QuadraticNumber

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {title}  [{detail}]")


def quad(rng, D, lo=-5, hi=5, den=6):
    return QuadraticNumber(rng.randint(lo, hi), rng.randint(lo, hi), rng.randint(1, den), D)


def positive_quad(rng, D):
    while True:
        x = quad(rng, D)
        if x.sign() > 0:
            return x


def random_spec(rng: random.Random, D=None, singular_ok=False) -> GeometricSpec:
    """A positive basis with m1perp < 0 < m2perp, irrational slope and (by default) a non-singular line."""
    D = D or rng.choice([2, 3, 5])
    while True:
        m1 = (positive_quad(rng, D), -positive_quad(rng, D))
        m2 = (positive_quad(rng, D), positive_quad(rng, D))
        q0 = (quad(rng, D), quad(rng, D))
        spec = GeometricSpec.make(m1, m2, q0)
        if not validate_positive_basis(spec):
            continue
        if not singular_ok and singular_point(spec) is not None:
            continue
        return spec


@st.composite
def specs(draw, D=None):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_spec(random.Random(seed), D)


@st.composite
def quadratics(draw, D=None):
    D = D or draw(st.sampled_from([2, 3, 5]))
    p = draw(st.integers(-10 ** 6, 10 ** 6))
    q = draw(st.integers(-10 ** 6, 10 ** 6))
    r = draw(st.integers(1, 10 ** 4))
    return QuadraticNumber(p, q, r, D)


@pytest.fixture
def rng():
    return random.Random(20240601)
