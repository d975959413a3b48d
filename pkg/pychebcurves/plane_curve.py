"""
plane_curve.py

Plane curves y^d = g(x), closed in P^2 by the form
F(X, Y, Z) = Y^d - Z^d g(X/Z), and superelliptic curves y^m = f(x) on
their smooth models. Point enumeration over a finite field is vectorised
over the whole element table: every x is evaluated at once, and the
solutions in y come from a table of d-th powers.
"""

import warnings
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from logging import getLogger
from math import gcd
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from pychebcurves import fast
from pychebcurves.chebyshev import ChebSpec, chebyshev_poly
from pychebcurves.config import current
from pychebcurves.ff import FieldDesc, FieldElement, embed, make_field, prime_power_exponent, split_prime_power
from pychebcurves.poly import (
    Poly,
    compose_fractional,
    is_separable,
    root_multiplicity,
    roots_in_field,
    splitting_degree,
)
from pychebcurves.routines import CapExceededError, FieldMismatchError, InvariantBreach

logger = getLogger("pychebcurves.plane_curve")


def _normalize(coords: Sequence[FieldElement]) -> Tuple[FieldElement, ...]:
    # last nonzero coordinate scaled to 1, so affine points keep Z = 1
    for c in reversed(coords):
        if not c.is_zero():
            scale = c.inverse()
            return tuple(v * scale for v in coords)
    raise ValueError("All coordinates are zero.")


@dataclass(frozen=True)
class ProjPoint2:
    """Point (X : Y : Z) of P^2 with last nonzero coordinate equal to 1."""

    X: FieldElement
    Y: FieldElement
    Z: FieldElement

    @classmethod
    def from_coords(cls, X: FieldElement, Y: FieldElement, Z: FieldElement) -> "ProjPoint2":
        return cls(*_normalize((X, Y, Z)))

    @classmethod
    def from_affine(cls, x: FieldElement, y: FieldElement) -> "ProjPoint2":
        return cls(x, y, x.field.one)

    @property
    def field(self) -> FieldDesc:
        return self.X.field

    @property
    def coords(self) -> Tuple[FieldElement, FieldElement, FieldElement]:
        return (self.X, self.Y, self.Z)

    def is_at_infinity(self) -> bool:
        return self.Z.is_zero()

    def affine(self) -> Optional[Tuple[FieldElement, FieldElement]]:
        """(x, y) = (X/Z, Y/Z), or None on the line at infinity."""
        if self.is_at_infinity():
            return None
        return self.X / self.Z, self.Y / self.Z

    def sort_key(self) -> Tuple:
        return (self.is_at_infinity(),) + tuple(c.coeffs for c in self.coords)

    def change_field(self, target: FieldDesc) -> "ProjPoint2":
        return ProjPoint2(*(embed(c, target) for c in self.coords))

    def to_json(self) -> list:
        return [c.to_json() for c in self.coords]

    def __str__(self):
        return f"({self.X} : {self.Y} : {self.Z})"


@dataclass(frozen=True)
class ProjLine:
    """The line uX + vY + wZ = 0, dual coordinates normalized like points."""

    u: FieldElement
    v: FieldElement
    w: FieldElement

    @classmethod
    def from_coords(cls, u: FieldElement, v: FieldElement, w: FieldElement) -> "ProjLine":
        return cls(*_normalize((u, v, w)))

    @classmethod
    def from_ints(cls, field: FieldDesc, u: int, v: int, w: int) -> "ProjLine":
        return cls.from_coords(field.element(u), field.element(v), field.element(w))

    @property
    def field(self) -> FieldDesc:
        return self.u.field

    def contains(self, point: ProjPoint2) -> bool:
        return (self.u * point.X + self.v * point.Y + self.w * point.Z).is_zero()

    def spanning_points(self) -> Tuple[ProjPoint2, ProjPoint2]:
        """Two distinct points of the line."""
        u, v, w = self.u, self.v, self.w
        zero = self.field.zero
        if not u.is_zero():
            first, second = (-v, u, zero), (-w, zero, u)
        elif not v.is_zero():
            first, second = (self.field.one, zero, zero), (zero, -w, v)
        else:
            first, second = (self.field.one, zero, zero), (zero, self.field.one, zero)
        return ProjPoint2.from_coords(*first), ProjPoint2.from_coords(*second)

    def to_json(self) -> list:
        return [c.to_json() for c in (self.u, self.v, self.w)]

    def __str__(self):
        return f"[{self.u} : {self.v} : {self.w}]"


@dataclass(frozen=True)
class AffinePoint:
    x: FieldElement
    y: FieldElement

    def to_json(self) -> list:
        return [self.x.to_json(), self.y.to_json()]


@dataclass(frozen=True)
class PlaceAtInfinity:
    """Rational place above x = infinity, labelled by w with w^gcd(m, n) = lc(f)."""

    w: FieldElement

    def to_json(self) -> dict:
        return {"infinity": self.w.to_json()}


class PlaneCurve:
    """
    Closure in P^2 of y^d = g(x), with deg g = d and g separable.

    Parameters
    ----------
    d : int
        Degree of the curve
    field : FieldDesc
        Field of definition
    g_poly : Poly, optional
        Right-hand side; the Chebyshev polynomial phi_d when omitted
    """

    def __init__(self, d: int, field: FieldDesc, g_poly: Optional[Poly] = None):
        if d < 1:
            raise ValueError(f"Degree must be positive, got {d}.")
        if d % field.p == 0:
            raise ValueError(f"Characteristic {field.p} divides d = {d}.")
        if g_poly is None:
            ChebSpec(d, field)
            g_poly = chebyshev_poly(d, field)
        g_poly = g_poly.change_field(field)
        if g_poly.degree != d:
            raise ValueError(f"deg g = {g_poly.degree} differs from d = {d}.")
        if not is_separable(g_poly):
            raise ValueError(f"{g_poly} is not separable; the curve is singular.")
        self.d = d
        self.field = field
        self.g = g_poly

    @classmethod
    def chebyshev(cls, d: int, p: int, m: int = 1) -> "PlaneCurve":
        return cls(d, make_field(p, m))

    @property
    def is_chebyshev(self) -> bool:
        return self.g == chebyshev_poly(self.d, self.field)

    def _g_over(self, target: FieldDesc) -> Poly:
        if not target.contains(self.field):
            raise FieldMismatchError(f"{target} does not contain {self.field}.")
        return self.g.change_field(target)

    def form(self, point: ProjPoint2) -> FieldElement:
        X, Y, Z = point.coords
        total = Y**self.d
        for i, c in enumerate(self._g_over(point.field).coefficients):
            if not c.is_zero():
                total = total - c * X**i * Z ** (self.d - i)
        return total

    def contains(self, point: ProjPoint2) -> bool:
        return self.form(point).is_zero()

    def gradient(self, point: ProjPoint2) -> Tuple[FieldElement, FieldElement, FieldElement]:
        X, Y, Z = point.coords
        d = self.d
        zero = point.field.zero
        fx, fz = zero, zero
        for i, c in enumerate(self._g_over(point.field).coefficients):
            if c.is_zero():
                continue
            if i >= 1:
                fx = fx - c * i * X ** (i - 1) * Z ** (d - i)
            if i < d:
                fz = fz - c * (d - i) * X**i * Z ** (d - i - 1)
        return fx, Y ** (d - 1) * d, fz

    def genus(self) -> int:
        return genus_plane(self.d)

    def to_dict(self) -> dict:
        return {"kind": "plane", "d": self.d, "g": [c.to_json() for c in self.g.coefficients], "field": str(self.field)}

    def __str__(self):
        return f"y^{self.d} = {self.g} over {self.field}"


class SuperellipticCurve:
    """Smooth model of y^m = f(x), f separable of degree n, char not dividing m."""

    def __init__(self, m: int, f_poly: Poly, field: Optional[FieldDesc] = None):
        field = f_poly.field if field is None else field
        f_poly = f_poly.change_field(field)
        if m < 1 or f_poly.is_zero() or f_poly.degree < 1:
            raise ValueError(f"Degenerate exponents m = {m}, deg f = {f_poly.degree}.")
        if m % field.p == 0:
            raise ValueError(f"Characteristic {field.p} divides m = {m}.")
        if not is_separable(f_poly):
            raise ValueError(f"{f_poly} is not separable.")
        self.m = m
        self.f = f_poly
        self.field = field

    @property
    def n(self) -> int:
        return int(self.f.degree)

    @classmethod
    def chebyshev(cls, m: int, n: int, field: FieldDesc) -> "SuperellipticCurve":
        """y^m = phi_n(x)."""
        ChebSpec(n, field)
        return cls(m, chebyshev_poly(n, field), field)

    @classmethod
    def fermat_type(cls, m: int, n: int, field: FieldDesc) -> "SuperellipticCurve":
        """y^m = x^n + 1."""
        return cls(m, Poly.monomial(field, n) + 1, field)

    @property
    def kind(self) -> str:
        if self.f == chebyshev_poly(self.n, self.field):
            return "chebyshev"
        if self.f == Poly.monomial(self.field, self.n) + 1:
            return "fermat"
        return "general"

    def genus(self) -> int:
        return genus_superelliptic(self.m, self.n)

    def to_dict(self) -> dict:
        return {
            "kind": f"superelliptic/{self.kind}",
            "m": self.m,
            "f": [c.to_json() for c in self.f.coefficients],
            "field": str(self.field),
        }

    def __str__(self):
        return f"y^{self.m} = {self.f} over {self.field}"


Curve = Union[PlaneCurve, SuperellipticCurve]


def genus_plane(d: int) -> int:
    if d < 1:
        raise ValueError(f"Degree must be positive, got {d}.")
    return (d - 1) * (d - 2) // 2


def genus_superelliptic(m: int, n: int) -> int:
    """((m - 1)(n - 1) + 1 - gcd(m, n)) / 2 for y^m = f(x), deg f = n."""
    if m < 1 or n < 1:
        raise ValueError(f"Exponents must be positive, got m = {m}, n = {n}.")
    return ((m - 1) * (n - 1) + 1 - gcd(m, n)) // 2


def _curve_equation(curve: Curve) -> Tuple[Poly, int, int]:
    """(right-hand side, exponent of y, exponent for the places at infinity)."""
    if isinstance(curve, PlaneCurve):
        return curve.g, curve.d, curve.d
    return curve.f, curve.m, gcd(curve.m, curve.n)


def _power_keys(table: np.ndarray, e: int, field: FieldDesc) -> np.ndarray:
    return fast.encode(fast.vec_pow(table, e, field.p, field.red), field.p)


def _enumerate(curve: Curve, field: FieldDesc, cap: Optional[int]):
    rhs, exponent, at_infinity = _curve_equation(curve)
    if not field.contains(curve.field):
        raise FieldMismatchError(f"{field} does not contain {curve.field}.")
    rhs = rhs.change_field(field)
    table = field.element_table(cap)
    rhs_keys = fast.encode(rhs.eval_many(table), field.p)
    y_keys = _power_keys(table, exponent, field)
    inf_keys = y_keys if at_infinity == exponent else _power_keys(table, at_infinity, field)
    return table, rhs, rhs_keys, y_keys, inf_keys


def count_points(curve: Curve, field: FieldDesc, cap: Optional[int] = None) -> int:
    """Number of rational points (places for superelliptic curves) over `field`."""
    table, rhs, rhs_keys, y_keys, inf_keys = _enumerate(curve, field, cap)
    counts = np.bincount(y_keys, minlength=field.order)
    affine = int(counts[rhs_keys].sum())
    inf_counts = counts if inf_keys is y_keys else np.bincount(inf_keys, minlength=field.order)
    infinite = int(inf_counts[rhs.leading.key])
    logger.debug(f"{curve} over {field}: {affine} affine, {infinite} at infinity")
    return affine + infinite


def points_over(curve: Curve, field: FieldDesc, cap: Optional[int] = None) -> list:
    """
    Rational points over `field` in canonical order: affine points by x then
    y, then the points (places) at infinity.

    Plane curves yield `ProjPoint2`; superelliptic curves yield `AffinePoint`
    and `PlaceAtInfinity` records.
    """
    table, rhs, rhs_keys, y_keys, inf_keys = _enumerate(curve, field, cap)
    order = np.argsort(y_keys, kind="stable")
    sorted_keys = y_keys[order]
    elements = field.from_rows(table)
    plane = isinstance(curve, PlaneCurve)
    points = []
    for i, key in enumerate(rhs_keys):
        lo = np.searchsorted(sorted_keys, key, side="left")
        hi = np.searchsorted(sorted_keys, key, side="right")
        for j in order[lo:hi]:
            x, y = elements[i], elements[int(j)]
            points.append(ProjPoint2.from_affine(x, y) if plane else AffinePoint(x, y))
    lead = rhs.leading.key
    at_infinity = [elements[int(j)] for j in np.flatnonzero(inf_keys == lead)]
    if plane:
        points.extend(sorted((ProjPoint2.from_coords(field.one, w, field.zero) for w in at_infinity), key=ProjPoint2.sort_key))
    else:
        points.extend(PlaceAtInfinity(w) for w in at_infinity)
    return points


@dataclass
class MaximalityVerdict:
    """
    Attributes
    ----------
    criterion : bool
        Divisibility criterion; exact for plane Chebyshev curves, a
        sufficient condition for superelliptic ones
    counted : bool or None
        Whether the point count attains q^2 + 1 + 2gq; None when the count
        was not attempted
    mode : str
        "checked" when both verdicts are available, else "criterion-only"
    """

    q: int
    genus: int
    criterion: bool
    counted: Optional[bool]
    count: Optional[int]
    bound: int
    mode: str

    @property
    def maximal(self) -> bool:
        return self.criterion if self.counted is None else self.counted

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "genus": self.genus,
            "criterion": self.criterion,
            "counted": self.counted,
            "count": self.count,
            "bound": self.bound,
            "mode": self.mode,
            "maximal": self.maximal,
        }


def maximality_criterion(curve: Curve, q: int) -> bool:
    if isinstance(curve, PlaneCurve):
        if not curve.is_chebyshev:
            raise ValueError("The divisibility criterion is only known for y^d = phi_d(x).")
        return (q + 1) % 2 == 0 and ((q + 1) // 2) % curve.d == 0
    if curve.kind == "chebyshev":
        # covered by the Hermitian curve
        half, odd = divmod(q + 1, 2)
        return not odd and half % curve.n == 0 and half % curve.m == 0
    if curve.kind == "fermat":
        # quotient of the Hermitian curve
        return (q + 1) % curve.m == 0 and (q + 1) % curve.n == 0
    raise ValueError(f"No maximality criterion for {curve}.")


def is_maximal(curve: Curve, q: int, cap: Optional[int] = None) -> MaximalityVerdict:
    """
    Decide maximality over F_{q^2} by the divisibility criterion and, when
    F_{q^2} is small enough to enumerate, by counting points against the
    Hasse-Weil bound. The two verdicts must agree.
    """
    p, r = split_prime_power(q)
    if p != curve.field.p:
        raise FieldMismatchError(f"q = {q} is not a power of the characteristic {curve.field.p}.")
    genus = curve.genus()
    bound = q * q + 1 + 2 * genus * q
    criterion = maximality_criterion(curve, q)
    try:
        big = make_field(p, 2 * r)
        if not big.contains(curve.field):
            raise FieldMismatchError(f"{curve.field} does not embed into {big}.")
        count = count_points(curve, big, cap)
    except CapExceededError as error:
        logger.warning(f"Counting over F_{q}^2 skipped: {error}")
        return MaximalityVerdict(q, genus, criterion, None, None, bound, "criterion-only")
    counted = count == bound
    disagree = criterion != counted if isinstance(curve, PlaneCurve) else (criterion and not counted)
    if disagree:
        raise InvariantBreach(
            f"{curve}: criterion says {criterion} but {count} points against bound {bound}."
        )
    return MaximalityVerdict(q, genus, criterion, counted, count, bound, "checked")


def tangent_line(curve: PlaneCurve, point: ProjPoint2) -> ProjLine:
    if not curve.contains(point):
        raise ValueError(f"{point} is not on {curve}.")
    partials = curve.gradient(point)
    if all(c.is_zero() for c in partials):
        raise InvariantBreach(f"All partial derivatives vanish at {point}; the curve is singular there.")
    return ProjLine.from_coords(*partials)


def _restriction(curve: PlaneCurve, base: ProjPoint2, direction: ProjPoint2) -> Poly:
    """F(base + s * direction) as a polynomial in s."""
    field = base.field
    g = curve._g_over(field)
    y_part = Poly.linear(field, direction.Y, base.Y) ** curve.d
    restricted = y_part - compose_fractional(g, direction.X, base.X, direction.Z, base.Z, degree=curve.d)
    if restricted.is_zero():
        raise InvariantBreach(f"The line through {base} and {direction} lies on {curve}.")
    return restricted


def line_intersection_profile(curve: PlaneCurve, line: ProjLine) -> List[Tuple[ProjPoint2, int]]:
    """
    Points of the curve on `line` with their intersection multiplicities,
    over the smallest extension of the line's field that holds all of them.
    The multiplicities sum to d.
    """
    base, direction = line.spanning_points()
    restricted = _restriction(curve, base, direction)
    at_direction = curve.d - int(restricted.degree)
    source = line.field
    cap = current().extension_cap
    k = 1
    while source.m * k <= cap:
        target = make_field(source.p, source.m * k)
        roots = roots_in_field(restricted, target) if restricted.degree >= 1 else []
        profile = [(r, root_multiplicity(restricted, r)) for r in roots]
        if sum(mult for _, mult in profile) + at_direction == curve.d:
            b, v = base.change_field(target), direction.change_field(target)
            result = [
                (ProjPoint2.from_coords(*(bc + r * vc for bc, vc in zip(b.coords, v.coords))), mult)
                for r, mult in profile
            ]
            if at_direction:
                result.append((v, at_direction))
            return sorted(result, key=lambda item: item[0].sort_key())
        k += 1
    raise CapExceededError(f"Intersection with {line} does not split within degree {cap}.")


def is_total_inflection(curve: PlaneCurve, point: ProjPoint2) -> bool:
    """
    Whether the tangent line at `point` meets the curve only there; the
    restriction of F to the tangent, parameterised from `point`, must be a
    multiple of s^d.
    """
    line = tangent_line(curve, point)
    other = next(q for q in line.spanning_points() if q != point)
    restricted = _restriction(curve, point, other)
    return restricted.degree == curve.d and all(c.is_zero() for c in restricted.coefficients[:-1])


def on_inflection_lines(point: ProjPoint2) -> bool:
    """Whether the point lies on y = 0 or x = 2 or x = -2 (Z-homogenized)."""
    X, Y, Z = point.coords
    return Y.is_zero() or (X - Z * 2).is_zero() or (X + Z * 2).is_zero()


@dataclass
class InflectionReport:
    d: int
    field: FieldDesc
    points: List[ProjPoint2]
    predicted: Optional[str]
    observed: str
    complete: bool = True
    deviations: List[str] = dc_field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.points)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "field": self.field.to_dict(),
            "count": self.count,
            "predicted": self.predicted,
            "observed": self.observed,
            "complete": self.complete,
            "points": [point.to_json() for point in self.points],
            "deviations": list(self.deviations),
        }


def predicted_inflection_case(d: int, p: int) -> str:
    r = prime_power_exponent(2 * d - 1, p)
    return "Exceptional" if r is not None and r >= 1 else "Generic"


def default_search_field(curve: PlaneCurve) -> FieldDesc:
    if curve.field.m != 1:
        return make_field(curve.field.p, 2 * curve.field.m)
    return make_field(curve.field.p, 2 * splitting_degree(curve.g))


def _holds_expected_points(curve: PlaneCurve, field: FieldDesc, exceptional: bool) -> bool:
    """Whether `field` contains every total inflection point the classification predicts."""
    if len(roots_in_field(curve.g, field)) != curve.d:
        return False
    if exceptional:
        return len(roots_in_field(Poly.monomial(field, curve.d) - 2, field)) == curve.d
    return True


def total_inflections(curve: PlaneCurve, search_field: Optional[FieldDesc] = None) -> InflectionReport:
    """
    Enumerate the curve's points over `search_field`, keep the total
    inflection points and compare the result with the expected shape: d
    points on y = 0, or 3d points on y(x - 2)(x + 2) = 0 when 2d - 1 is a
    power of the characteristic.
    """
    field = default_search_field(curve) if search_field is None else search_field
    logger.info(f"Searching total inflection points of {curve} over {field}")
    found = [point for point in points_over(curve, field) if is_total_inflection(curve, point)]
    d = curve.d
    on_y_axis = all(point.Y.is_zero() for point in found)
    on_lines = all(on_inflection_lines(point) for point in found)
    if len(found) == d and on_y_axis:
        observed = "Generic"
    elif len(found) == 3 * d and on_lines:
        observed = "Exceptional"
    else:
        observed = "Unclassified"
    predicted = predicted_inflection_case(d, curve.field.p) if curve.is_chebyshev else None
    complete = _holds_expected_points(curve, field, predicted == "Exceptional")
    report = InflectionReport(d, field, found, predicted, observed, complete)
    if not complete:
        logger.warning(f"{field} does not hold every predicted point; the classification is partial")
    if curve.is_chebyshev and not on_lines:
        report.deviations.append("total inflection point off y(x - 2)(x + 2) = 0")
    if predicted is not None and complete and observed != predicted:
        report.deviations.append(f"expected {predicted}, observed {observed} with {len(found)} points")
    for message in report.deviations:
        logger.warning(message)
        warnings.warn(message)
    return report


def _quartic_invariants(a, b, c, d, e):
    i_inv = 12 * a * e - 3 * b * d + c * c
    j_inv = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * b * b * e - 2 * c * c * c
    return i_inv, j_inv


def j_invariant_quartic(coeffs: Sequence[Union[int, FieldElement]], field: FieldDesc) -> FieldElement:
    """
    j-invariant of y^2 = a x^4 + b x^3 + c x^2 + d x + e from the binary
    quartic invariants I and J: j = 6912 I^3 / (4 I^3 - J^2).
    """
    if field.p in (2, 3):
        raise ValueError(f"The quartic invariants need characteristic other than 2 and 3, got {field.p}.")
    if len(coeffs) != 5:
        raise ValueError(f"Expected five coefficients a..e, got {len(coeffs)}.")
    a, b, c, d, e = (field.element(v) for v in coeffs)
    i_inv, j_inv = _quartic_invariants(a, b, c, d, e)
    cube = i_inv**3
    denominator = cube * 4 - j_inv * j_inv
    if denominator.is_zero():
        raise ValueError("Singular quartic: 4 I^3 = J^2.")
    return cube * 6912 / denominator


def j_invariant_rational(coeffs: Sequence[Union[int, Fraction]]) -> Fraction:
    """Same as `j_invariant_quartic` over the rationals."""
    if len(coeffs) != 5:
        raise ValueError(f"Expected five coefficients a..e, got {len(coeffs)}.")
    i_inv, j_inv = _quartic_invariants(*(Fraction(v) for v in coeffs))
    denominator = 4 * i_inv**3 - j_inv**2
    if denominator == 0:
        raise ValueError("Singular quartic: 4 I^3 = J^2.")
    return 6912 * i_inv**3 / denominator
