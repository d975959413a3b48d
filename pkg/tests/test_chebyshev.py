"""
test_chebyshev.py

The recurrence, the closed form and the polynomial identities satisfied by
the normalized Chebyshev polynomials.
"""

import pytest
from hypothesis import given, settings, strategies as st
from sympy import primerange

from pychebcurves.chebyshev import (
    ChebSpec,
    cheb_coefficient,
    chebyshev_poly,
    closed_form,
    integer_coefficient,
    integer_coefficients,
    order3_scalar_holds,
    verify_exceptional_identity,
    verify_fermat_identity,
    verify_laurent_identity,
    verify_order3_identity,
    verify_quartic_root_identity,
)
from pychebcurves.ff import make_field, prime_power_exponent
from pychebcurves.poly import prime_field_poly
from pychebcurves.routines import HypothesisError


def test_small_degrees():
    assert integer_coefficients(0) == [2]
    assert integer_coefficients(1) == [0, 1]
    assert integer_coefficients(2) == [-2, 0, 1]
    assert integer_coefficients(3) == [0, -3, 0, 1]
    assert integer_coefficients(4) == [2, 0, -4, 0, 1]
    assert integer_coefficients(5) == [0, 5, 0, -5, 0, 1]
    assert integer_coefficient(6, 3) == -2
    assert cheb_coefficient(6, 3, make_field(7)) == make_field(7).element(5)


def test_closed_form_index_range():
    with pytest.raises(ValueError):
        integer_coefficient(5, 3)
    with pytest.raises(ValueError):
        integer_coefficient(0, 1)


@settings(max_examples=40, derandomize=True, deadline=None)
@given(st.integers(min_value=0, max_value=40), st.sampled_from([3, 5, 7, 11, 13]))
def test_recurrence_matches_closed_form(d, p):
    field = make_field(p)
    assert chebyshev_poly(d, field) == closed_form(d, field)


@settings(max_examples=40, derandomize=True, deadline=None)
@given(st.integers(min_value=1, max_value=40), st.sampled_from([3, 5, 7, 11, 13]))
def test_laurent_identity(d, p):
    field = make_field(p)
    if (2 * d) % p == 0:
        with pytest.raises(HypothesisError):
            ChebSpec(d, field)
        return
    assert verify_laurent_identity(ChebSpec(d, field))


def test_laurent_identity_rejects_other_polynomials():
    field = make_field(7)
    spec = ChebSpec(4, field)
    assert not verify_laurent_identity(spec, prime_field_poly(7, [1, 0, -4, 0, 1]))
    assert verify_laurent_identity(spec, prime_field_poly(7, [2, 0, -4, 0, 1]))


def test_chebspec_hypotheses():
    with pytest.raises(HypothesisError):
        ChebSpec(3, make_field(2))
    with pytest.raises(HypothesisError):
        ChebSpec(5, make_field(5))
    assert ChebSpec(5, make_field(5), enforce=False).d == 5
    with pytest.raises(ValueError):
        ChebSpec(-1, make_field(7))


def test_extension_field_coefficients_are_integers():
    phi = chebyshev_poly(6, make_field(7, 2))
    assert all(c.in_prime_field() for c in phi.coefficients)


@pytest.mark.parametrize("d, p", [(4, 7), (13, 5), (5, 3), (14, 3), (2, 3)])
def test_exceptional_identity_holds_when_2d_minus_1_is_a_power(d, p):
    assert verify_exceptional_identity(d, p)


@pytest.mark.parametrize("d, p", [(4, 11), (5, 7), (6, 7), (7, 11), (8, 3)])
def test_exceptional_identity_fails_otherwise(d, p):
    assert not verify_exceptional_identity(d, p)


@pytest.mark.parametrize("d, p", [(4, 5), (4, 7), (5, 7), (6, 11), (7, 13)])
def test_quartic_root_identity_fails(d, p):
    assert not verify_quartic_root_identity(d, p)


@pytest.mark.parametrize("d, p", [(4, 7), (13, 5), (5, 3), (6, 11), (7, 13)])
def test_fermat_identity_holds(d, p):
    assert verify_fermat_identity(d, p)


def test_fermat_identity_fails_outside_the_case():
    assert not verify_fermat_identity(4, 11)
    assert not verify_fermat_identity(5, 7)


@pytest.mark.parametrize("d, p", [(2, 7), (5, 19), (7, 3), (8, 31), (11, 43)])
def test_order3_identity_holds(d, p):
    assert order3_scalar_holds(d, p)
    assert verify_order3_identity(d, p)


def test_order3_identity_fails_outside_the_case():
    assert not verify_order3_identity(4, 11)
    assert not verify_order3_identity(5, 7)
    with pytest.raises(HypothesisError):
        verify_order3_identity(5, 5)


@pytest.mark.slow
@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_recurrence_and_laurent_identity_grid(p):
    field = make_field(p)
    for d in range(1, 201):
        if (2 * d) % p == 0:
            continue
        assert chebyshev_poly(d, field) == closed_form(d, field), d
        assert verify_laurent_identity(ChebSpec(d, field)), d


@pytest.mark.slow
@pytest.mark.parametrize("p", list(primerange(3, 51)))
def test_exceptional_identity_grid(p):
    for d in range(1, 61):
        if (2 * d) % p == 0:
            continue
        expected = prime_power_exponent(2 * d - 1, p) is not None
        assert verify_exceptional_identity(d, p) == expected, d
