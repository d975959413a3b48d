"""
test_ff.py

Field construction, element arithmetic and embeddings. Prime-field results
are cross-checked against sympy.
"""

import pytest
from hypothesis import given, settings, strategies as st
from sympy import mod_inverse

from pychebcurves import config
from pychebcurves.ff import (
    embed,
    frobenius,
    make_field,
    nth_root,
    prime_power_exponent,
    split_prime_power,
)
from pychebcurves.routines import CapExceededError, FieldMismatchError


def test_canonical_defining_polynomials():
    assert make_field(7, 2).defining_poly == (1, 0, 1)
    assert make_field(3, 2).defining_poly == (1, 0, 1)
    # x^2 + 1 splits over F_5
    assert make_field(5, 2).defining_poly == (1, 1, 1)
    assert make_field(11, 1).defining_poly == (0, 1)
    assert make_field(7, 2) is make_field(7, 2)


def test_make_field_rejects_bad_input():
    with pytest.raises(ValueError):
        make_field(4)
    with pytest.raises(ValueError):
        make_field(7, 0)
    with pytest.raises(CapExceededError):
        make_field(7, 30)
    with pytest.raises(CapExceededError):
        make_field(7, 3, extension_cap=2)


def test_generator_relation():
    field = make_field(7, 2)
    y = field.gen
    assert y * y == field.element(-1)
    # Frobenius conjugates y to -y when y^2 = -1 and p = 3 mod 4
    assert frobenius(y) == -y
    assert field.order == 49


def test_mixing_fields_fails():
    with pytest.raises(FieldMismatchError):
        make_field(7).one + make_field(5).one
    with pytest.raises(FieldMismatchError):
        make_field(7, 2).element(make_field(7).one)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        make_field(7, 2).zero.inverse()


@settings(max_examples=60, derandomize=True, deadline=None)
@given(st.integers(min_value=1, max_value=100), st.sampled_from([5, 7, 11, 13, 101]))
def test_prime_field_inverse_matches_sympy(value, p):
    field = make_field(p)
    if value % p == 0:
        return
    assert field.element(value).inverse() == field.element(mod_inverse(value, p))


@settings(max_examples=80, derandomize=True, deadline=None)
@given(
    st.integers(min_value=0, max_value=80),
    st.integers(min_value=0, max_value=80),
    st.integers(min_value=0, max_value=80),
)
def test_extension_field_axioms(ka, kb, kc):
    field = make_field(3, 4)
    a, b, c = field.from_key(ka), field.from_key(kb), field.from_key(kc)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == field.zero
    if not a.is_zero():
        assert (a * a.inverse()).is_one()
        assert a ** (field.order - 1) == field.one
        assert (b / a) * a == b


def test_keys_are_canonical_positions():
    field = make_field(5, 2)
    keys = [e.key for e in field.elements()]
    assert keys == list(range(25))
    assert field.from_key(17).key == 17


def test_enumeration_cap():
    field = make_field(7, 2)
    with pytest.raises(CapExceededError):
        field.check_enumerable(cap=10)
    with config.use(config.RunConfig(enumeration_cap=48)):
        with pytest.raises(CapExceededError):
            list(field.elements())


def test_nth_root_is_smallest():
    field = make_field(7)
    assert nth_root(field.element(2), 2) == field.element(3)
    assert nth_root(field.element(3), 2) is None
    assert nth_root(field.zero, 5) == field.zero
    with pytest.raises(ValueError):
        nth_root(field.one, 0)


def test_embedding_respects_arithmetic():
    small, big = make_field(7, 2), make_field(7, 4)
    y = embed(small.gen, big)
    assert y * y == big.element(-1)
    a, b = small.element((3, 5)), small.element((6, 1))
    assert embed(a * b, big) == embed(a, big) * embed(b, big)
    assert embed(small.element(4), small) == small.element(4)
    with pytest.raises(FieldMismatchError):
        embed(small.gen, make_field(7, 3))


def test_to_json():
    assert make_field(7).element(10).to_json() == 3
    assert make_field(7, 2).element((2, 5)).to_json() == [2, 5]


def test_prime_power_helpers():
    assert prime_power_exponent(27, 3) == 3
    assert prime_power_exponent(1, 3) == 0
    assert prime_power_exponent(12, 3) is None
    assert prime_power_exponent(0, 3) is None
    assert split_prime_power(49) == (7, 2)
    assert split_prime_power(11) == (11, 1)
    for bad in (1, 12):
        with pytest.raises(ValueError):
            split_prime_power(bad)
