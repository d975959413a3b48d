"""
moebius.py

Fractional linear maps of the projective line over a finite field, their
action on points, and setwise stabilizers of finite point sets.

Stabilizers are found through sharp 3-transitivity: a map preserving S is
fixed by where it sends three base points of S, and those images lie in S,
so only |S|(|S|-1)(|S|-2) candidates need testing whatever the field size.
"""

from collections import Counter
from dataclasses import dataclass, field as dc_field
from itertools import permutations
from logging import getLogger
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pychebcurves.ff import FieldDesc, FieldElement, embed
from pychebcurves.routines import FieldMismatchError, InvariantBreach

logger = getLogger("pychebcurves.moebius")

Scalar = Union[int, FieldElement]


@dataclass(frozen=True)
class ProjPoint1:
    """
    Point (s : t) of the projective line, stored normalized: t = 1 for
    affine points and (1 : 0) for the point at infinity.
    """

    s: FieldElement
    t: FieldElement

    @classmethod
    def from_coords(cls, s: FieldElement, t: FieldElement) -> "ProjPoint1":
        if not t.is_zero():
            return cls(s / t, t.field.one)
        if s.is_zero():
            raise ValueError("(0 : 0) is not a point of the projective line.")
        return cls(s.field.one, s.field.zero)

    @classmethod
    def affine(cls, value: FieldElement) -> "ProjPoint1":
        return cls(value, value.field.one)

    @classmethod
    def infinity(cls, field: FieldDesc) -> "ProjPoint1":
        return cls(field.one, field.zero)

    @property
    def field(self) -> FieldDesc:
        return self.s.field

    def is_infinity(self) -> bool:
        return self.t.is_zero()

    @property
    def value(self) -> Optional[FieldElement]:
        """Affine coordinate, None at infinity."""
        return None if self.is_infinity() else self.s

    def sort_key(self) -> Tuple:
        # affine points in element order, infinity last
        if self.is_infinity():
            return (1, ())
        return (0, self.s.coeffs)

    def change_field(self, target: FieldDesc) -> "ProjPoint1":
        return ProjPoint1(embed(self.s, target), embed(self.t, target))

    def to_json(self):
        return "inf" if self.is_infinity() else self.s.to_json()

    def __str__(self):
        return "inf" if self.is_infinity() else str(self.s)


class Moebius:
    """
    Invertible matrix (a b; c delta) acting by x -> (a x + b)/(c x + delta).

    Entries are kept as given, so polynomial identities built from them are
    exact; equality, hashing and ordering use the representative scaled to
    make the first nonzero entry (row-major) equal to 1.
    """

    __slots__ = ("a", "b", "c", "delta", "_key")

    def __init__(self, a: Scalar, b: Scalar, c: Scalar, delta: Scalar, field: Optional[FieldDesc] = None):
        if field is None:
            for entry in (a, b, c, delta):
                if isinstance(entry, FieldElement):
                    field = entry.field
                    break
            else:
                raise ValueError("A field is needed when every entry is an integer.")
        self.a, self.b, self.c, self.delta = (field.element(v) for v in (a, b, c, delta))
        if (self.a * self.delta - self.b * self.c).is_zero():
            raise ValueError(f"Singular matrix ({self.a} {self.b}; {self.c} {self.delta}).")
        self._key = None

    @classmethod
    def identity(cls, field: FieldDesc) -> "Moebius":
        return cls(1, 0, 0, 1, field)

    @property
    def field(self) -> FieldDesc:
        return self.a.field

    @property
    def entries(self) -> Tuple[FieldElement, FieldElement, FieldElement, FieldElement]:
        return (self.a, self.b, self.c, self.delta)

    def det(self) -> FieldElement:
        return self.a * self.delta - self.b * self.c

    def normalized(self) -> "Moebius":
        for entry in self.entries:
            if not entry.is_zero():
                scale = entry.inverse()
                return Moebius(*(v * scale for v in self.entries))
        raise AssertionError("unreachable: invertible matrix has a nonzero entry")

    @property
    def key(self) -> Tuple:
        if self._key is None:
            self._key = tuple(v.coeffs for v in self.normalized().entries)
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Moebius):
            return NotImplemented
        return self.field == other.field and self.key == other.key

    def __hash__(self):
        return hash((self.field, self.key))

    def is_identity(self) -> bool:
        return self.b.is_zero() and self.c.is_zero() and self.a == self.delta

    def compose(self, other: "Moebius") -> "Moebius":
        """self after other, i.e. the matrix product self * other."""
        if other.field != self.field:
            raise FieldMismatchError(f"Maps over {self.field} and {other.field} cannot be composed.")
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return Moebius(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    __matmul__ = compose

    def inverse(self) -> "Moebius":
        return Moebius(self.delta, -self.b, -self.c, self.a)

    def apply(self, point: ProjPoint1) -> ProjPoint1:
        if point.field != self.field:
            raise FieldMismatchError(f"Point over {point.field} and map over {self.field}.")
        s, t = point.s, point.t
        return ProjPoint1.from_coords(self.a * s + self.b * t, self.c * s + self.delta * t)

    __call__ = apply

    def order(self, cap: Optional[int] = None) -> int:
        """Least k >= 1 with self^k the identity, bounded by |PGL(2, q)|."""
        q = self.field.order
        cap = q**3 - q if cap is None else cap
        power = self
        k = 1
        while not power.is_identity():
            power = power.compose(self)
            k += 1
            if k > cap:
                raise InvariantBreach(f"Order of {self} exceeds {cap}.")
        return k

    def commutes_with(self, other: "Moebius") -> bool:
        return self.compose(other) == other.compose(self)

    def change_field(self, target: FieldDesc) -> "Moebius":
        return Moebius(*(embed(v, target) for v in self.entries))

    def to_dict(self) -> Dict[str, list]:
        normal = self.normalized()
        return {"matrix": [[normal.a.to_json(), normal.b.to_json()], [normal.c.to_json(), normal.delta.to_json()]]}

    def __str__(self):
        return f"x -> ({self.a}*x + {self.b})/({self.c}*x + {self.delta})"

    def __repr__(self):
        return f"Moebius({self.a}, {self.b}, {self.c}, {self.delta}; {self.field})"


def apply(mu: Moebius, point: ProjPoint1) -> ProjPoint1:
    return mu.apply(point)


def compose(mu: Moebius, nu: Moebius) -> Moebius:
    return mu.compose(nu)


def inverse(mu: Moebius) -> Moebius:
    return mu.inverse()


def order(mu: Moebius) -> int:
    return mu.order()


def _standard_map(p1: ProjPoint1, p2: ProjPoint1, p3: ProjPoint1) -> Moebius:
    """The map sending p1, p2, p3 to 0, 1, infinity."""
    # rows orthogonal to p1 and p3, scaled so that p2 lands on 1
    lam = p3.t * p2.s - p3.s * p2.t
    mu = p1.t * p2.s - p1.s * p2.t
    return Moebius(lam * p1.t, -(lam * p1.s), mu * p3.t, -(mu * p3.s))


def from_three_points(src: Sequence[ProjPoint1], dst: Sequence[ProjPoint1]) -> Moebius:
    """
    The unique map sending src[i] to dst[i] for i = 0, 1, 2.

    Parameters
    ----------
    src, dst : sequence of ProjPoint1
        Three pairwise distinct points each, all over one field
    """
    if len(src) != 3 or len(dst) != 3:
        raise ValueError("Exactly three source and three target points are needed.")
    for triple in (src, dst):
        if len(set(triple)) != 3:
            raise ValueError(f"Points {[str(p) for p in triple]} are not pairwise distinct.")
    fields = {point.field for point in (*src, *dst)}
    if len(fields) != 1:
        raise FieldMismatchError("All six points must lie over the same field.")
    return _standard_map(*dst).inverse().compose(_standard_map(*src)).normalized()


def _check_group(elements: Sequence[Moebius]):
    members = set(elements)
    if len(members) != len(elements):
        raise ValueError("Group elements are repeated.")
    if not any(g.is_identity() for g in elements):
        raise ValueError("The identity is missing.")
    for g in elements:
        if g.inverse() not in members:
            raise ValueError(f"Inverse of {g} is missing.")
        for h in elements:
            if g.compose(h) not in members:
                raise ValueError(f"Product of {g} and {h} is missing.")


def sort_group(elements: Iterable[Moebius]) -> List[Moebius]:
    return sorted((g.normalized() for g in elements), key=lambda g: g.key)


def setwise_stabilizer(points: Sequence[ProjPoint1]) -> List[Moebius]:
    """
    All maps sending the finite set `points` onto itself, sorted by their
    normalized entries.

    Candidates send the first three points in canonical order to every
    ordered triple of distinct points; a candidate is kept when it maps
    every remaining point into the set.
    """
    ordered = sorted(set(points), key=ProjPoint1.sort_key)
    if len(ordered) != len(points):
        raise ValueError("Stabilizer input contains repeated points.")
    if len(ordered) < 3:
        raise ValueError("At least three points are needed to pin down a map.")
    if len({point.field for point in ordered}) != 1:
        raise FieldMismatchError("All points must lie over the same field.")
    members = set(ordered)
    base = _standard_map(*ordered[:3])
    rest = ordered[3:]
    found = []
    for i, j, k in permutations(range(len(ordered)), 3):
        candidate = _standard_map(ordered[i], ordered[j], ordered[k]).inverse().compose(base)
        if all(candidate.apply(point) in members for point in rest):
            found.append(candidate.normalized())
    try:
        _check_group(found)
    except ValueError as error:
        raise InvariantBreach(f"Stabilizer is not a group: {error}") from error
    logger.debug(f"Stabilizer of {len(ordered)} points has order {len(found)}")
    return sort_group(found)


def generated_subgroup(generators: Sequence[Moebius], field: FieldDesc) -> set:
    members = {Moebius.identity(field)}
    frontier = list(members)
    while frontier:
        found = []
        for h in frontier:
            for g in generators:
                product = g.compose(h)
                if product not in members:
                    members.add(product)
                    found.append(product)
        frontier = found
    return members


def generating_set(group: Sequence[Moebius]) -> List[Moebius]:
    """Greedy generators: walk the sorted group, keep what is not yet generated."""
    ordered = sort_group(group)
    if not ordered:
        return []
    field = ordered[0].field
    generators: List[Moebius] = []
    span = {Moebius.identity(field)}
    for g in ordered:
        if g not in span:
            generators.append(g)
            span = generated_subgroup(generators, field)
    return generators


def conjugate_group(group: Sequence[Moebius], mu: Moebius) -> List[Moebius]:
    """mu g mu^-1 for every g, sorted."""
    mu_inv = mu.inverse()
    return sort_group(mu.compose(g).compose(mu_inv) for g in group)


@dataclass(frozen=True)
class GroupFingerprint:
    """
    Order, commutativity and element-order multiset of a finite subgroup
    of PGL(2, q), with the name of its shape when it is one of the
    recognised ones.
    """

    order: int
    abelian: bool
    element_orders: Tuple[int, ...]
    label: str = dc_field(default="")

    @property
    def involutions_only(self) -> bool:
        """Every nontrivial element has order 2."""
        return all(k in (1, 2) for k in self.element_orders)

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "abelian": self.abelian,
            "element_orders": list(self.element_orders),
            "label": self.label,
        }


def _label(order_: int, abelian: bool, orders: Sequence[int]) -> str:
    counts = Counter(orders)
    if order_ == 1:
        return "trivial"
    if max(orders) == order_:
        return f"C{order_}"
    if order_ == 4:
        return "V4"
    if order_ == 6 and not abelian:
        return "S3"
    if order_ == 12 and counts == Counter({1: 1, 2: 3, 3: 8}):
        return "A4"
    if order_ == 24 and counts == Counter({1: 1, 2: 9, 3: 8, 4: 6}):
        return "S4"
    if order_ == 60 and counts == Counter({1: 1, 2: 15, 3: 20, 5: 24}):
        return "A5"
    half = order_ // 2
    if order_ % 2 == 0 and not abelian and half in counts and counts[2] >= half:
        return f"D{half}"
    return f"other({order_})"


def fingerprint(group: Sequence[Moebius]) -> GroupFingerprint:
    elements = list(group)
    _check_group(elements)
    abelian = all(
        g.commutes_with(h) for index, g in enumerate(elements) for h in elements[index + 1 :]
    )
    orders = tuple(sorted(g.order() for g in elements))
    return GroupFingerprint(len(elements), abelian, orders, _label(len(elements), abelian, orders))


def sign_flip(field: FieldDesc) -> Moebius:
    """x -> -x."""
    return Moebius(-1, 0, 0, 1, field)


def commutant_shape_check(eta: Moebius) -> bool:
    """Whether eta commutes with x -> -x in PGL(2)."""
    if eta.field.p == 2:
        raise ValueError("x -> -x is the identity in characteristic 2.")
    return eta.commutes_with(sign_flip(eta.field))


def is_diagonal_or_antidiagonal(eta: Moebius) -> bool:
    return (eta.b.is_zero() and eta.c.is_zero()) or (eta.a.is_zero() and eta.delta.is_zero())


QUADRUPLE_LOCI = {
    "x^4+1": (1, 0, 0, 0, 1),
    "x^4+6x^2+1": (1, 0, 6, 0, 1),
    "x^4-6x^2+1": (1, 0, -6, 0, 1),
    "x^8+14x^4+1": (1, 0, 0, 0, 14, 0, 0, 0, 1),
}


def quadruple(alpha: FieldElement) -> List[ProjPoint1]:
    """The points alpha, -alpha, 1/alpha, -1/alpha."""
    if alpha.is_zero() or (alpha**4).is_one():
        raise ValueError(f"Need alpha^4 != 1 and alpha != 0, got {alpha}.")
    inv = alpha.inverse()
    return [ProjPoint1.affine(v) for v in (alpha, -alpha, inv, -inv)]


def quadruple_loci(alpha: FieldElement) -> List[str]:
    """Names of the special polynomials vanishing at alpha."""
    hits = []
    for name, coefficients in QUADRUPLE_LOCI.items():
        value = alpha.field.zero
        for c in coefficients:
            value = value * alpha + c
        if value.is_zero():
            hits.append(name)
    return hits


def quadruple_stabilizer(alpha: FieldElement) -> GroupFingerprint:
    """
    Fingerprint of the stabilizer of {alpha, -alpha, 1/alpha, -1/alpha};
    V4 generated by x -> -x and x -> 1/x unless alpha lies on one of the
    `QUADRUPLE_LOCI`.
    """
    return fingerprint(setwise_stabilizer(quadruple(alpha)))
