import pytest
from fractions import Fraction
from hypothesis import given, strategies as st

from qlat.errors import DivisionByZero, MixedDiscriminant
from qlat.numeric import (
    PHI, QuadraticNumber as Q, arith, bracket, ceil_exact, compare, floor_exact, sign_exact, qn,
)
from conftest import quadratics


def test_golden_ratio_square():
    assert PHI * PHI == PHI + 1


def test_conjugate_products():
    assert (1 + Q.sqrt(2)) * (1 - Q.sqrt(2)) == -1
    assert (2 + Q.sqrt(3)) * (2 - Q.sqrt(3)) == 1


def test_signs():
    assert sign_exact(Q.sqrt(5) - 2) == 1
    assert sign_exact(Q(0, 0, 1, 2)) == 0
    assert sign_exact(1 - Q.sqrt(2)) == -1


def test_floor_examples():
    assert floor_exact(PHI) == (1, False)
    assert floor_exact(-PHI) == (-2, False)
    assert ceil_exact(-PHI) == (-1, False)
    assert floor_exact(3 * PHI) == (4, False)


def test_integer_flag():
    assert floor_exact(Q(6, 0, 3)) == (2, True)
    assert ceil_exact(Q(6, 0, 3)) == (2, True)


def test_mixed_fields_rejected():
    with pytest.raises(MixedDiscriminant):
        Q.sqrt(2) + Q.sqrt(3)


def test_rationals_mix_with_any_field():
    assert Q.sqrt(2) + Fraction(1, 2) == Q(1, 2, 2, 2)
    assert (Q.sqrt(3) - Q.sqrt(3)) + Q.sqrt(5) == Q.sqrt(5)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        PHI / Q(0)
    with pytest.raises(ZeroDivisionError):
        arith(PHI, 0, "div")


def test_square_factors_are_extracted():
    assert Q(0, 1, 1, 12) == 2 * Q.sqrt(3)
    assert Q.sqrt(8).D == 2


def test_text_round_trip():
    for x in (PHI, -PHI / 7, Q(3), Q(-5, 2, 9, 3)):
        assert Q.from_text(x.to_text()) == x
        assert Q.from_human(x.human()) == x
        assert qn(x.to_text()) == x


def test_bracket():
    assert bracket(Q(2), 1) == 2 and bracket(Q(2), -1) == 2
    assert bracket(PHI, 1) == 1 and bracket(PHI, -1) == 2


@given(quadratics())
def test_floor_brackets_value(x):
    k, is_int = floor_exact(x)
    assert compare(k, x) <= 0 < compare(k + 1, x)
    assert ceil_exact(x)[0] == -floor_exact(-x)[0]
    if is_int:
        assert ceil_exact(x)[0] == k
    if x.is_rational:
        assert k == x.p // x.r


@given(st.data())
def test_field_axioms(data):
    D = data.draw(st.sampled_from([2, 3, 5]))
    x, y, z = (data.draw(quadratics(D)) for _ in range(3))
    assert x + y == y + x and x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    if y:
        assert (x / y) * y == x


@given(st.data())
def test_total_order(data):
    D = data.draw(st.sampled_from([2, 3, 5]))
    x, y, z = (data.draw(quadratics(D)) for _ in range(3))
    assert compare(x, y) == -compare(y, x)
    if compare(x, y) <= 0 and compare(y, z) <= 0:
        assert compare(x, z) <= 0
    if abs(float(x) - float(y)) > 1e-6:
        assert compare(x, y) == (1 if float(x) > float(y) else -1)


def test_floor_random_bulk(rng):
    for _ in range(10_000):
        D = rng.choice([2, 3, 5, 7, 13])
        x = Q(rng.randint(-10 ** 9, 10 ** 9), rng.randint(-10 ** 9, 10 ** 9), rng.randint(1, 10 ** 5), D)
        k, _ = floor_exact(x)
        assert k <= x < k + 1


def test_big_powers_stay_exact():
    lam = 2 + Q.sqrt(5)
    big = lam ** 64
    assert big * (2 - Q.sqrt(5)) ** 64 == 1
