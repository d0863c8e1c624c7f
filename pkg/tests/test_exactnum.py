import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from gapcover.exactnum import (
    FE_ONE,
    FE_ZERO,
    SQRT2,
    SQRT3,
    SQRT6,
    SQRT7,
    SQRT21,
    DivisionByZero,
    EpsScale,
    FieldElem,
    fe,
    fe_inv,
    fe_mul,
    fe_sign,
    rational_from_str,
    rational_to_str,
)

rationals = st.builds(
    mpq,
    st.integers(min_value=-40, max_value=40),
    st.integers(min_value=1, max_value=12),
)
field_elems = st.builds(FieldElem, st.tuples(*([rationals] * 8)))


def test_surd_products():
    assert SQRT2 * SQRT3 == SQRT6
    assert SQRT2 * SQRT2 == fe(2)
    assert (FE_ONE + SQRT2) * (FE_ONE - SQRT2) == fe(-1)
    assert SQRT3 * SQRT7 == SQRT21


def test_inverses():
    assert fe_inv(SQRT2) == SQRT2 * mpq(1, 2)
    assert fe_inv(fe(2)) == fe(mpq(1, 2))
    assert fe_inv(FE_ONE + SQRT2) == SQRT2 - FE_ONE
    with pytest.raises(DivisionByZero):
        fe_inv(FE_ZERO)


def test_sign_basics():
    assert fe_sign(SQRT2 - FE_ONE) == 1
    assert fe_sign(FE_ZERO) == 0
    # 21 vs (229/50)^2 = 52441/2500 = 20.9764, so sqrt21 > 4.58
    assert fe_sign(SQRT21 - mpq(229, 50)) == 1
    assert fe_sign(SQRT21 - mpq(23, 5)) == -1  # 21 < 4.6^2 = 21.16


def test_sign_tight_difference():
    # sqrt2 + sqrt3 vs sqrt(2 + 3 + 2*sqrt6): equal squares, so compare
    # values differing only at high precision.
    a = SQRT2 + SQRT3
    b = a + fe(mpq(1, 10**40))
    assert fe_sign(b - a) == 1
    assert fe_sign(a - b) == -1


@given(field_elems, field_elems, field_elems)
@settings(max_examples=60, deadline=None)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(field_elems)
@settings(max_examples=60, deadline=None)
def test_inverse_roundtrip(a):
    if a.is_zero:
        return
    assert fe_mul(a, fe_inv(a)) == FE_ONE


@given(field_elems, field_elems)
@settings(max_examples=60, deadline=None)
def test_sign_multiplicative(a, b):
    assert fe_sign(a) * fe_sign(b) == fe_sign(fe_mul(a, b))


def test_eps_scale_values():
    s = EpsScale(delta=mpq(1, 10), n=1)
    assert s.eps_power(10) == mpq(1, 10**10)
    assert s.eps_power(17) == mpq(1, 10**17)
    assert s.eps_power(5) == mpq(1, 10**5)
    assert s.eps == s.eps_power(10)


def test_eps_scale_monotone():
    s = EpsScale(delta=mpq(1, 3), n=2)
    powers = [s.eps_power(t) for t in range(0, 25)]
    assert all(a > b for a, b in zip(powers, powers[1:]))


def test_full_fidelity_matches_construction():
    for n in (1, 2, 7):
        s = EpsScale.full_fidelity(n)
        # eps = (10n)^-100 exactly, checked by cross multiplication
        assert s.eps * ((10 * n) ** 100) == 1
        assert s.sqrt_eps * s.sqrt_eps == s.eps
        assert s.eps15 == s.eps * s.sqrt_eps
        assert s.eps17 == s.eps_power(17)


def test_eps_scale_rejects_bad_delta():
    with pytest.raises(ValueError):
        EpsScale(delta=mpq(3, 2), n=1)
    with pytest.raises(ValueError):
        EpsScale(delta=mpq(0), n=1)


def test_rational_serialization():
    assert rational_to_str(mpq(-3, 7)) == "-3/7"
    assert rational_to_str(mpq(5)) == "5"
    assert rational_from_str("-3/7") == mpq(-3, 7)
    assert rational_from_str("12") == 12


def test_field_elem_serialization_roundtrip():
    x = SQRT2 * mpq(3, 4) - SQRT21 * mpq(7, 5) + fe(mpq(-2, 9))
    text = x.serialize()
    assert FieldElem.deserialize(text) == x


def test_order_operators():
    assert SQRT2 < SQRT3
    assert SQRT7 > fe(2)
    assert fe(1) <= FE_ONE
    assert not (SQRT2 >= fe(2))
