"""
test_poly.py

Polynomial arithmetic over finite fields, root finding and splitting
degrees, checked against sympy's galoistools on prime fields.
"""

import pytest
from hypothesis import given, settings, strategies as st
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_div, gf_mul, gf_strip

from pychebcurves import config
from pychebcurves.ff import make_field
from pychebcurves.moebius import Moebius
from pychebcurves.poly import (
    Poly,
    compose_fractional,
    compose_moebius,
    gcd,
    is_separable,
    modpow_frobenius,
    prime_field_poly,
    root_multiplicity,
    roots_in_field,
    splitting_degree,
)
from pychebcurves.routines import FieldMismatchError

P = 11
coefficient_lists = st.lists(st.integers(min_value=0, max_value=P - 1), min_size=1, max_size=8)


def _high_first(values):
    return gf_strip([ZZ(v) for v in reversed(values)])


def _low_first_ints(poly):
    return [int(c) for c in poly.coeffs[:, 0]]


@settings(max_examples=60, derandomize=True, deadline=None)
@given(coefficient_lists, coefficient_lists)
def test_product_matches_galoistools(a, b):
    product = prime_field_poly(P, a) * prime_field_poly(P, b)
    expected = gf_mul(_high_first(a), _high_first(b), P, ZZ)
    assert list(reversed(_low_first_ints(product))) == [int(c) for c in expected]


@settings(max_examples=60, derandomize=True, deadline=None)
@given(coefficient_lists, coefficient_lists)
def test_division_matches_galoistools(a, b):
    divisor = prime_field_poly(P, b)
    if divisor.is_zero():
        return
    quotient, remainder = divmod(prime_field_poly(P, a), divisor)
    q_expected, r_expected = gf_div(_high_first(a), _high_first(b), P, ZZ)
    assert list(reversed(_low_first_ints(quotient))) == [int(c) for c in q_expected]
    assert list(reversed(_low_first_ints(remainder))) == [int(c) for c in r_expected]


def test_division_identity_over_extension():
    field = make_field(5, 2)
    f = Poly.from_elements(field, [field.gen, 3, field.element((1, 4)), 1, 2])
    g = Poly.from_elements(field, [1, field.gen, 1])
    quotient, remainder = divmod(f, g)
    assert quotient * g + remainder == f
    assert remainder.degree < g.degree
    with pytest.raises(ZeroDivisionError):
        divmod(f, Poly.zero(field))


def test_gcd_is_monic():
    f = prime_field_poly(7, [2, -3, 1])  # (x - 1)(x - 2)
    g = prime_field_poly(7, [3, -4, 1]).scale(3)  # 3(x - 1)(x - 3)
    assert gcd(f, g) == prime_field_poly(7, [-1, 1])
    assert gcd(Poly.zero(make_field(7)), Poly.zero(make_field(7))).is_zero()


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        prime_field_poly(7, [1, 1]) + prime_field_poly(5, [1, 1])


def test_separability_and_multiplicity():
    f = prime_field_poly(7, [-1, 1]) ** 3 * prime_field_poly(7, [1, 1])
    assert not is_separable(f)
    assert root_multiplicity(f, make_field(7).one) == 3
    assert root_multiplicity(f, make_field(7).element(-1)) == 1
    assert root_multiplicity(f, make_field(7).element(2)) == 0
    assert is_separable(prime_field_poly(7, [1, 0, 1]))


def test_roots_are_sorted():
    field = make_field(7, 2)
    f = prime_field_poly(7, [1, 0, 1])
    assert roots_in_field(f, make_field(7)) == []
    assert roots_in_field(f, field) == [field.gen, -field.gen]
    assert roots_in_field(prime_field_poly(7, [5]), field) == []
    with pytest.raises(ValueError):
        roots_in_field(Poly.zero(field), field)


def test_equal_degree_splitting_matches_exhaustive_search():
    field = make_field(7, 4)
    f = prime_field_poly(7, [2, 0, -4, 0, 1])  # phi_4
    exhaustive = roots_in_field(f, field)
    assert len(exhaustive) == 4
    with config.use(config.RunConfig(root_search_cap=16)):
        assert roots_in_field(f, field, seed=0) == exhaustive
        assert roots_in_field(f, field, seed=12345) == exhaustive


def test_splitting_degree():
    assert splitting_degree(prime_field_poly(7, [1, 0, 1])) == 2
    assert splitting_degree(prime_field_poly(7, [1, 0, 0, 0, 1])) == 2
    # 2 is not a cube mod 7
    assert splitting_degree(prime_field_poly(7, [-2, 0, 0, 1])) == 3
    assert splitting_degree(prime_field_poly(7, [3, 1])) == 1
    with pytest.raises(ValueError):
        splitting_degree(prime_field_poly(7, [1, 2, 1]))


def test_compose_fractional():
    x = prime_field_poly(7, [0, 1])
    assert compose_fractional(x, 2, 3, 1, 1) == prime_field_poly(7, [3, 2])
    one = prime_field_poly(7, [1])
    assert compose_fractional(one, 2, 3, 1, 1, degree=2) == prime_field_poly(7, [1, 2, 1])
    # x^2 under x -> 1/x, cleared, is the constant 1
    assert compose_fractional(x**2, 0, 1, 1, 0) == one
    with pytest.raises(ValueError):
        compose_fractional(x**3, 1, 0, 0, 1, degree=2)


def test_derivative_and_monic():
    f = prime_field_poly(7, [1, 2, 3, 4])
    assert f.derivative() == prime_field_poly(7, [2, 6, 12])
    assert f.monic().leading.is_one()
    assert prime_field_poly(7, [0, 0, 0, 7]).is_zero()


def test_proportionality():
    f = prime_field_poly(7, [1, 2, 3])
    assert f.scale(5).proportionality(f) == make_field(7).element(5)
    assert prime_field_poly(7, [1, 2, 4]).proportionality(f) is None


def test_frobenius_powers_of_x():
    f = prime_field_poly(7, [1, 0, 1])
    x = Poly.x(make_field(7))
    assert modpow_frobenius(f, 0) == x
    assert modpow_frobenius(f, 1) == -x
    assert modpow_frobenius(f, 2) == x
    with pytest.raises(ValueError):
        modpow_frobenius(prime_field_poly(7, [3]), 1)


def test_compose_moebius():
    field = make_field(7)
    f = prime_field_poly(7, [1, 0, 1])
    composite, top = compose_moebius(f, Moebius(0, 1, 1, 0, field))
    assert composite == f
    assert top.is_one()
    composite, top = compose_moebius(f, Moebius(1, 1, 0, 1, field))
    assert composite == prime_field_poly(7, [2, 2, 1])
    # x -> 1/x sends the root 0 of x to infinity, so the degree drops
    composite, top = compose_moebius(prime_field_poly(7, [0, 1]), Moebius(0, 1, 1, 0, field))
    assert composite == prime_field_poly(7, [1])
    assert top.is_zero()


F13 = make_field(13)
nonconstant = st.tuples(
    st.lists(st.integers(min_value=0, max_value=12), min_size=1, max_size=5), st.integers(min_value=1, max_value=12)
).map(lambda pair: prime_field_poly(13, pair[0] + [pair[1]]))
maps = st.tuples(*[st.integers(min_value=0, max_value=12)] * 4).filter(
    lambda m: (m[0] * m[3] - m[1] * m[2]) % 13 != 0
).map(lambda m: Moebius(*m, F13))


@settings(max_examples=100, derandomize=True, deadline=None)
@given(nonconstant, nonconstant, maps)
def test_compose_moebius_of_product(f, g, mu):
    composite, _ = compose_moebius(f * g, mu)
    assert composite == compose_moebius(f, mu)[0] * compose_moebius(g, mu)[0]


@settings(max_examples=100, derandomize=True, deadline=None)
@given(nonconstant, maps, maps)
def test_compose_moebius_of_composition(f, mu, nu):
    once, _ = compose_moebius(f, mu @ nu)
    first, top = compose_moebius(f, mu)
    if top.is_zero():
        # mu sends infinity to a root of f; the second pass sees a lower degree
        return
    twice, _ = compose_moebius(first, nu)
    assert twice.proportionality(once) is not None
