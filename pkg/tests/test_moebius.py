"""
test_moebius.py

Fractional linear maps, three-point interpolation and setwise stabilizers.
"""

import time

import pytest
from hypothesis import assume, given, settings, strategies as st
from sympy import primerange

from pychebcurves.chebyshev import chebyshev_poly
from pychebcurves import moebius
from pychebcurves.ff import make_field
from pychebcurves.moebius import (
    GroupFingerprint,
    Moebius,
    QUADRUPLE_LOCI,
    ProjPoint1,
    commutant_shape_check,
    conjugate_group,
    fingerprint,
    from_three_points,
    generated_subgroup,
    generating_set,
    is_diagonal_or_antidiagonal,
    quadruple,
    quadruple_loci,
    quadruple_stabilizer,
    setwise_stabilizer,
    sign_flip,
)
from pychebcurves.poly import prime_field_poly, roots_in_field, splitting_degree
from pychebcurves.routines import InvariantBreach

F11 = make_field(11)


def _point(value):
    return ProjPoint1.affine(F11.element(value))


def test_points_are_normalized():
    two, four = F11.element(2), F11.element(4)
    assert ProjPoint1.from_coords(four, two) == _point(2)
    assert ProjPoint1.from_coords(two, F11.zero) == ProjPoint1.infinity(F11)
    with pytest.raises(ValueError):
        ProjPoint1.from_coords(F11.zero, F11.zero)
    assert sorted([ProjPoint1.infinity(F11), _point(3), _point(1)], key=ProjPoint1.sort_key) == [
        _point(1),
        _point(3),
        ProjPoint1.infinity(F11),
    ]


def test_action_and_poles():
    mu = Moebius(1, 1, 1, 0, F11)  # x -> (x + 1)/x
    assert mu(_point(0)) == ProjPoint1.infinity(F11)
    assert mu(ProjPoint1.infinity(F11)) == _point(1)
    assert mu(_point(2)) == _point(3 * pow(2, -1, 11))


def test_singular_matrix_rejected():
    with pytest.raises(ValueError):
        Moebius(1, 2, 2, 4, F11)
    with pytest.raises(ValueError):
        Moebius(1, 0, 0, 1)


def test_projective_equality():
    mu = Moebius(2, 4, 6, 10, F11)
    assert mu == Moebius(1, 2, 3, 5, F11)
    assert hash(mu) == hash(Moebius(1, 2, 3, 5, F11))
    assert Moebius(3, 0, 0, 3, F11).is_identity()
    assert mu.a == F11.element(2)


@settings(max_examples=40, derandomize=True, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=10), min_size=8, max_size=8))
def test_composition_is_action(values):
    try:
        mu = Moebius(*values[:4], F11)
        nu = Moebius(*values[4:], F11)
    except ValueError:
        return
    for x in range(11):
        point = _point(x)
        assert mu.compose(nu)(point) == mu(nu(point))
        assert (mu @ mu.inverse()).is_identity()


def test_orders():
    assert sign_flip(F11).order() == 2
    assert Moebius(0, 1, 1, 0, F11).order() == 2
    assert Moebius(1, 1, 0, 1, F11).order() == 11
    assert Moebius.identity(F11).order() == 1
    # x -> 1/(1 - x) cycles 0 -> 1 -> inf
    assert Moebius(0, 1, -1, 1, F11).order() == 3


def test_from_three_points():
    src = [_point(0), _point(1), ProjPoint1.infinity(F11)]
    dst = [_point(2), _point(5), _point(7)]
    mu = from_three_points(src, dst)
    assert [mu(p) for p in src] == dst
    with pytest.raises(ValueError):
        from_three_points([_point(0), _point(0), _point(1)], dst)


def test_inversion_from_three_points():
    src = [_point(0), _point(1), ProjPoint1.infinity(F11)]
    dst = [ProjPoint1.infinity(F11), _point(1), _point(0)]
    assert from_three_points(src, dst) == Moebius(0, 1, 1, 0, F11)
    assert from_three_points(src, src).is_identity()


def test_three_points_recover_involution():
    field = make_field(13)
    alpha = field.element(2)
    sq = alpha * alpha
    # fixes alpha and 1/alpha
    f = Moebius(sq + 1, -(alpha * 2), alpha * 2, -sq - 1)
    src = [ProjPoint1.affine(v) for v in (alpha, -alpha, alpha.inverse())]
    dst = [f(point) for point in src]
    assert dst[0] == src[0] and dst[2] == src[2]
    assert from_three_points(src, dst) == f
    assert f.order() == 2


def test_stabilizer_of_three_points_is_s3():
    group = setwise_stabilizer([_point(0), _point(1), ProjPoint1.infinity(F11)])
    shape = fingerprint(group)
    assert shape.order == 6
    assert shape.label == "S3"
    assert not shape.abelian


def test_octahedron_stabilizer():
    # 0, infinity and the fourth roots of unity
    field = make_field(13)
    points = [ProjPoint1.affine(field.element(v)) for v in (0, 1, 5, 8, 12)]
    points.append(ProjPoint1.infinity(field))
    assert fingerprint(setwise_stabilizer(points)).label == "S4"


def test_stabilizer_validates_input():
    with pytest.raises(ValueError):
        setwise_stabilizer([_point(0), _point(1)])
    with pytest.raises(ValueError):
        setwise_stabilizer([_point(0), _point(1), _point(1)])


def test_fingerprint_labels():
    # x -> 4x has order 6 over F_13
    cyclic = fingerprint(list(generated_subgroup([Moebius(4, 0, 0, 1, make_field(13))], make_field(13))))
    assert cyclic == GroupFingerprint(6, True, (1, 2, 3, 3, 6, 6), "C6")
    assert not cyclic.involutions_only
    phi = chebyshev_poly(5, make_field(19))
    field = make_field(19, splitting_degree(phi))
    group = setwise_stabilizer([ProjPoint1.affine(r) for r in roots_in_field(phi, field)])
    shape = fingerprint(group)
    assert (shape.order, shape.label) == (6, "S3")
    assert sign_flip(field) in group


def test_generating_set_generates():
    group = setwise_stabilizer([_point(0), _point(1), ProjPoint1.infinity(F11)])
    generators = generating_set(group)
    assert len(generators) == 2
    assert generated_subgroup(generators, F11) == set(group)


def test_conjugation_preserves_fingerprint():
    group = setwise_stabilizer([_point(0), _point(1), ProjPoint1.infinity(F11)])
    conjugated = conjugate_group(group, Moebius(1, 3, 0, 1, F11))
    assert fingerprint(conjugated).label == "S3"
    assert set(conjugated) == set(setwise_stabilizer([_point(3), _point(4), ProjPoint1.infinity(F11)]))


def test_commutant_of_sign_flip():
    assert commutant_shape_check(Moebius(0, 1, 1, 0, F11))
    assert commutant_shape_check(Moebius(2, 0, 0, 1, F11))
    assert not commutant_shape_check(Moebius(1, 1, 0, 1, F11))
    for eta in setwise_stabilizer([_point(0), _point(1), ProjPoint1.infinity(F11)]):
        if commutant_shape_check(eta):
            assert is_diagonal_or_antidiagonal(eta)
    with pytest.raises(ValueError):
        commutant_shape_check(Moebius.identity(make_field(2)))


@pytest.mark.parametrize("p, value", [(19, 5), (23, 2), (29, 2)])
def test_generic_quadruple_stabilizer(p, value):
    alpha = make_field(p).element(value)
    assert quadruple_loci(alpha) == []
    shape = quadruple_stabilizer(alpha)
    assert (shape.order, shape.label) == (4, "V4")


def test_quadruple_on_special_locus():
    # 3^4 = 81 = -1 mod 41
    alpha = make_field(41).element(3)
    assert "x^4+1" in quadruple_loci(alpha)
    assert quadruple_stabilizer(alpha).order > 4
    with pytest.raises(ValueError):
        quadruple(make_field(13).one)


def test_order_cap():
    with pytest.raises(InvariantBreach):
        Moebius(1, 1, 0, 1, F11).order(cap=5)


def test_module_level_helpers():
    mu, nu = Moebius(1, 1, 1, 0, F11), Moebius(2, 0, 0, 1, F11)
    assert moebius.apply(mu, _point(2)) == mu(_point(2))
    assert moebius.compose(mu, nu) == mu @ nu
    assert moebius.compose(moebius.inverse(mu), mu).is_identity()
    assert moebius.order(nu) == 10


@settings(max_examples=150, derandomize=True, deadline=None)
@given(
    st.sampled_from(list(primerange(11, 100))).flatmap(
        lambda p: st.tuples(st.just(p), st.integers(min_value=2, max_value=p - 2))
    )
)
def test_quadruple_stabilizer_matches_the_loci(pair):
    p, value = pair
    assume(pow(value, 4, p) != 1)
    field = make_field(p)
    alpha = field.element(value)
    group = setwise_stabilizer(quadruple(alpha))
    if quadruple_loci(alpha):
        assert len(group) > 4
    else:
        assert fingerprint(group).label == "V4"
        expected = {Moebius.identity(field), sign_flip(field), Moebius(0, 1, 1, 0, field), Moebius(0, -1, 1, 0, field)}
        assert set(group) == expected


@pytest.mark.parametrize("name", list(QUADRUPLE_LOCI))
@pytest.mark.parametrize("p", [11, 13, 17, 19, 23, 29, 31, 37, 41, 43])
def test_quadruple_stabilizer_on_each_locus(name, p):
    locus = prime_field_poly(p, list(reversed(QUADRUPLE_LOCI[name])))
    field = make_field(p, splitting_degree(locus))
    roots = roots_in_field(locus, field)
    assert roots
    for alpha in roots:
        assert name in quadruple_loci(alpha)
        assert quadruple_stabilizer(alpha).order > 4


F13 = make_field(13)


def _p1(value):
    return ProjPoint1.infinity(F13) if value == 13 else ProjPoint1.affine(F13.element(value))


entries = st.integers(min_value=0, max_value=12)
units = st.integers(min_value=1, max_value=12)
invertible = st.tuples(entries, entries, entries, entries).filter(lambda m: (m[0] * m[3] - m[1] * m[2]) % 13 != 0)


@settings(max_examples=150, derandomize=True, deadline=None)
@given(
    st.one_of(
        invertible,
        st.tuples(units, st.just(0), st.just(0), units),
        st.tuples(st.just(0), units, units, st.just(0)),
    )
)
def test_commutant_shape_both_directions(matrix):
    eta = Moebius(*matrix, F13)
    assert commutant_shape_check(eta) == is_diagonal_or_antidiagonal(eta)


@settings(max_examples=100, derandomize=True, deadline=None)
@given(st.sets(st.integers(min_value=0, max_value=13), min_size=3, max_size=6), invertible)
def test_stabilizer_conjugation_equivariance(values, matrix):
    points = [_p1(v) for v in sorted(values)]
    mu = Moebius(*matrix, F13)
    moved = [mu(point) for point in points]
    assert set(conjugate_group(setwise_stabilizer(points), mu)) == set(setwise_stabilizer(moved))


@pytest.mark.slow
def test_stabilizer_search_ignores_field_size():
    # the roots of phi_4 generate F_625
    field = make_field(5, 4)
    points = [ProjPoint1.affine(r) for r in roots_in_field(chebyshev_poly(4, make_field(5)), field)]
    setwise_stabilizer(points)
    start = time.perf_counter()
    group = setwise_stabilizer(points)
    elapsed = time.perf_counter() - start
    assert fingerprint(group).label == "A4"
    assert elapsed < 1.0
