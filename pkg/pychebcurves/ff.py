"""
ff.py

Exact arithmetic in prime fields F_p and their extensions F_{p^m}.

A field is described by a `FieldDesc`; its defining polynomial is the first
monic irreducible of degree m in lexicographic order (coefficients read from
the constant term upwards), so that the same (p, m) always yields the same
model and every report is reproducible. Elements are immutable
`FieldElement` instances holding their coordinates in the power basis of the
generator y.
"""

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product
from logging import getLogger
from math import gcd
from typing import Iterator, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcd, gf_pow_mod, gf_rem, gf_sub

from pychebcurves import fast
from pychebcurves.config import current
from pychebcurves.routines import CapExceededError, FieldMismatchError

logger = getLogger("pychebcurves.ff")

# products of residues must fit in int64 inside the kernels
MAX_CHARACTERISTIC = 2**31


def _reduction_table(p: int, defining_poly: Tuple[int, ...]) -> np.ndarray:
    """Coordinates of y^k modulo the defining polynomial, k = 0 .. 2m - 2."""
    m = len(defining_poly) - 1
    table = np.zeros((2 * m - 1, m), dtype=np.int64)
    current_row = np.zeros(m, dtype=np.int64)
    current_row[0] = 1
    tail = np.array(defining_poly[:m], dtype=np.int64)
    for k in range(2 * m - 1):
        table[k] = current_row
        # multiply by y and fold y^m back with the defining relation
        carry = current_row[m - 1]
        shifted = np.zeros(m, dtype=np.int64)
        shifted[1:] = current_row[: m - 1]
        current_row = (shifted - carry * tail) % p
    return table


@dataclass(frozen=True)
class FieldDesc:
    """
    Description of the finite field F_{p^m} = F_p[y] / (defining_poly).

    Attributes
    ----------
    p : int
        Characteristic
    m : int
        Extension degree over F_p
    defining_poly : tuple of int
        Monic irreducible polynomial of degree m, coefficients low degree first.
        The prime field uses the placeholder `y`, i.e. (0, 1).
    """

    p: int
    m: int
    defining_poly: Tuple[int, ...]
    red: np.ndarray = dc_field(init=False, repr=False, compare=False, hash=False)
    modulus: np.ndarray = dc_field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(self.defining_poly) != self.m + 1 or self.defining_poly[-1] != 1:
            raise ValueError(
                f"Defining polynomial {self.defining_poly} is not monic of degree {self.m}."
            )
        object.__setattr__(self, "red", _reduction_table(self.p, self.defining_poly))
        object.__setattr__(
            self, "modulus", np.array(self.defining_poly, dtype=np.int64)
        )

    @property
    def order(self) -> int:
        return self.p**self.m

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.m)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.m - 1))

    @property
    def gen(self) -> "FieldElement":
        """The class of y; equals zero in the prime field placeholder model."""
        if self.m == 1:
            return self.zero
        return FieldElement(self, (0, 1) + (0,) * (self.m - 2))

    def element(self, value: Union[int, Sequence[int], "FieldElement"]) -> "FieldElement":
        """
        Build an element from an integer (a prime-field constant), a sequence
        of m coordinates, or an element of this same field.
        """
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(f"{value} does not belong to {self}.")
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, (int(value) % self.p,) + (0,) * (self.m - 1))
        coords = tuple(int(c) % self.p for c in value)
        if len(coords) != self.m:
            raise ValueError(f"Expected {self.m} coordinates, got {len(coords)}.")
        return FieldElement(self, coords)

    def from_key(self, key: int) -> "FieldElement":
        """Inverse of `FieldElement.key`."""
        coords = []
        for _ in range(self.m):
            key, digit = divmod(key, self.p)
            coords.append(digit)
        return FieldElement(self, tuple(reversed(coords)))

    def check_enumerable(self, cap: Optional[int] = None):
        cap = current().enumeration_cap if cap is None else cap
        if self.order > cap:
            raise CapExceededError(
                f"F_{self.p}^{self.m} has {self.order} elements, above the enumeration cap {cap}."
            )

    def element_table(self, cap: Optional[int] = None) -> np.ndarray:
        """
        Every element as an (order, m) int64 array, rows in canonical order.
        """
        self.check_enumerable(cap)
        keys = np.arange(self.order, dtype=np.int64)
        table = np.empty((self.order, self.m), dtype=np.int64)
        for i in range(self.m):
            table[:, i] = (keys // self.p ** (self.m - 1 - i)) % self.p
        return table

    def elements(self, cap: Optional[int] = None) -> Iterator["FieldElement"]:
        self.check_enumerable(cap)
        for coords in product(range(self.p), repeat=self.m):
            yield FieldElement(self, coords)

    def from_rows(self, rows: np.ndarray) -> list:
        return [FieldElement(self, tuple(int(c) for c in row)) for row in rows]

    def random_element(self, rng) -> "FieldElement":
        """Uniform element drawn with a `random.Random`-like generator."""
        return self.from_key(rng.randrange(self.order))

    def contains(self, other: "FieldDesc") -> bool:
        """Whether `other` embeds into this field."""
        return other.p == self.p and self.m % other.m == 0

    def to_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "defining_poly": list(self.defining_poly)}

    def __str__(self):
        if self.m == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.m}"


@dataclass(frozen=True)
class FieldElement:
    """
    Element of a `FieldDesc`, stored as coordinates (c_0, ..., c_{m-1}) with
    respect to 1, y, ..., y^{m-1}. Canonical order is the order of these
    tuples. Python integers are accepted as prime-field constants; elements
    of different fields never mix.
    """

    field: FieldDesc
    coeffs: Tuple[int, ...]

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    @property
    def key(self) -> int:
        """Position in the canonical order, first coordinate most significant."""
        key = 0
        for c in self.coeffs:
            key = key * self.field.p + c
        return key

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def in_prime_field(self) -> bool:
        return not any(self.coeffs[1:])

    def __bool__(self):
        return not self.is_zero()

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatchError(
                    f"Cannot combine elements of {self.field} and {other.field}."
                )
            return other
        if isinstance(other, (int, np.integer)):
            return self.field.element(int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(
            self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        field = self.field
        if field.m == 1:
            return FieldElement(field, ((self.coeffs[0] * other.coeffs[0]) % field.p,))
        out = fast.ext_mul(self.vec, other.vec, field.p, field.red)
        return FieldElement(field, tuple(int(c) for c in out))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError(f"Zero has no inverse in {self.field}.")
        field = self.field
        if field.m == 1:
            return FieldElement(field, (pow(self.coeffs[0], field.p - 2, field.p),))
        out = fast.ext_inv(self.vec, field.modulus, field.p)
        return FieldElement(field, tuple(int(c) for c in out))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        """Square-and-multiply; negative exponents invert first."""
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __lt__(self, other: "FieldElement"):
        return self.coeffs < self._coerce(other).coeffs

    def __le__(self, other: "FieldElement"):
        return self.coeffs <= self._coerce(other).coeffs

    def to_json(self) -> Union[int, list]:
        """An integer for prime-field elements, else the coordinate list."""
        if self.field.m == 1:
            return self.coeffs[0]
        return list(self.coeffs)

    def __str__(self):
        if self.field.m == 1:
            return str(self.coeffs[0])
        terms = []
        for power, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            if power == 0:
                terms.append(str(c))
            else:
                monomial = "y" if power == 1 else f"y^{power}"
                terms.append(monomial if c == 1 else f"{c}*{monomial}")
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return f"FieldElement({self}, {self.field})"


def _is_irreducible(coeffs: Tuple[int, ...], p: int) -> bool:
    """
    Certificate for a monic polynomial over F_p given low-first:
    gcd(f, x^{p^i} - x) = 1 for i <= m/2 and x^{p^m} = x mod f.
    """
    m = len(coeffs) - 1
    f = [ZZ(c) for c in reversed(coeffs)]
    x = [ZZ(1), ZZ(0)]
    h = x
    for i in range(1, m + 1):
        h = gf_pow_mod(h, p, f, p, ZZ)
        if i <= m // 2 and gf_gcd(gf_sub(h, x, p, ZZ), f, p, ZZ) != [ZZ(1)]:
            return False
    return gf_rem(gf_sub(h, x, p, ZZ), f, p, ZZ) == []


@lru_cache(maxsize=None)
def _first_irreducible(p: int, m: int) -> Tuple[int, ...]:
    for tail in product(range(p), repeat=m):
        # multiples of x are never irreducible for m > 1
        if tail[0] == 0:
            continue
        candidate = tail + (1,)
        if _is_irreducible(candidate, p):
            return candidate
    raise RuntimeError(f"No irreducible polynomial of degree {m} over F_{p}.")


@lru_cache(maxsize=None)
def _build_field(p: int, m: int) -> FieldDesc:
    if m == 1:
        return FieldDesc(p, 1, (0, 1))
    defining = _first_irreducible(p, m)
    logger.debug(f"F_{p}^{m} defined by {defining}")
    return FieldDesc(p, m, defining)


def make_field(p: int, m: int = 1, extension_cap: Optional[int] = None) -> FieldDesc:
    """
    Construct F_{p^m} with its canonical defining polynomial.

    Parameters
    ----------
    p : int
        Prime characteristic, below 2**31
    m : int
        Extension degree, at most the extension cap
    extension_cap : int, optional
        Overrides the active configuration's `extension_cap`

    Returns
    -------
    FieldDesc
        The same object for every call with equal (p, m)
    """
    cap = current().extension_cap if extension_cap is None else extension_cap
    if not isprime(p):
        raise ValueError(f"{p} is not prime.")
    if p >= MAX_CHARACTERISTIC:
        raise CapExceededError(f"Characteristic {p} is above {MAX_CHARACTERISTIC}.")
    if m < 1:
        raise ValueError(f"Extension degree must be positive, got {m}.")
    if m > cap:
        raise CapExceededError(f"Extension degree {m} is above the cap {cap}.")
    return _build_field(p, m)


def frobenius(e: FieldElement) -> FieldElement:
    return e ** e.field.p


def nth_root(e: FieldElement, n: int) -> Optional[FieldElement]:
    """
    The smallest r in canonical order with r^n = e, or None when e is not
    an n-th power in its field.
    """
    if n < 1:
        raise ValueError(f"Root index must be positive, got {n}.")
    if e.is_zero() or n == 1:
        return e
    q = e.field.order
    if not (e ** ((q - 1) // gcd(n, q - 1))).is_one():
        return None
    from pychebcurves.poly import Poly, roots_in_field

    target = Poly.monomial(e.field, n) - Poly.constant(e.field, e)
    roots = roots_in_field(target, e.field)
    if not roots:
        raise RuntimeError(f"Power-residue test passed but x^{n} - {e} has no roots.")
    return roots[0]


@lru_cache(maxsize=None)
def _generator_image(source: FieldDesc, target: FieldDesc) -> FieldElement:
    from pychebcurves.poly import Poly, roots_in_field

    prime = make_field(source.p, 1)
    defining = Poly.from_ints(prime, source.defining_poly)
    roots = roots_in_field(defining, target)
    if not roots:
        raise RuntimeError(f"{source} does not embed into {target}.")
    return roots[0]


def embed(e: FieldElement, target: FieldDesc) -> FieldElement:
    """
    Image of e under the fixed embedding of its field into `target`, which
    sends the generator to the smallest root of its defining polynomial.
    """
    source = e.field
    if source == target:
        return e
    if source.p != target.p:
        raise FieldMismatchError(f"Cannot embed {source} into {target}: characteristics differ.")
    if target.m % source.m:
        raise FieldMismatchError(f"Cannot embed {source} into {target}: degree does not divide.")
    if source.m == 1:
        return target.element(e.coeffs[0])
    image = _generator_image(source, target)
    result = target.zero
    for c in reversed(e.coeffs):
        result = result * image + c
    return result


def prime_power_exponent(n: int, p: int) -> Optional[int]:
    """The exponent r >= 0 with p^r = n, or None if n is not a power of p."""
    if n < 1:
        return None
    r = 0
    while n % p == 0:
        n //= p
        r += 1
    return r if n == 1 else None


def split_prime_power(q: int) -> Tuple[int, int]:
    """(p, r) with q = p^r, r >= 1; raises ValueError otherwise."""
    factors = factorint(q) if q > 1 else {}
    if len(factors) != 1:
        raise ValueError(f"{q} is not a prime power.")
    ((p, r),) = factors.items()
    return int(p), int(r)
