"""
poly.py

Dense univariate polynomials over a `FieldDesc`.

Coefficients live in an int64 array of shape (n, m): row i holds the
coordinates of the coefficient of x^i. Trailing zero rows are always
trimmed, so the zero polynomial has no rows and degree `NEG_INF`.
The heavy lifting (products, division, evaluation over whole fields) is done
by the kernels in `pychebcurves.fast`.
"""

import random
from logging import getLogger
from typing import List, Optional, Sequence, Tuple, Union, TYPE_CHECKING

import numpy as np

from pychebcurves import fast
from pychebcurves.config import current
from pychebcurves.ff import FieldDesc, FieldElement, embed, make_field
from pychebcurves.routines import CapExceededError, FieldMismatchError

if TYPE_CHECKING:
    from pychebcurves.moebius import Moebius

logger = getLogger("pychebcurves.poly")

NEG_INF = float("-inf")

Scalar = Union[int, FieldElement]


def _trim(rows: np.ndarray) -> np.ndarray:
    nonzero = np.flatnonzero(rows.any(axis=1))
    length = int(nonzero[-1]) + 1 if nonzero.size else 0
    return np.ascontiguousarray(rows[:length], dtype=np.int64)


class Poly:
    """
    Polynomial over a finite field.

    Parameters
    ----------
    field : FieldDesc
        Coefficient field
    coeffs : np.ndarray
        Array of shape (n, m), low degree first; trailing zero rows are dropped
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldDesc, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if coeffs.ndim != 2 or coeffs.shape[1] != field.m:
            raise ValueError(f"Coefficient array of shape {coeffs.shape} does not match {field}.")
        self.field = field
        self.coeffs = _trim(coeffs % field.p)

    @classmethod
    def zero(cls, field: FieldDesc) -> "Poly":
        return cls(field, np.zeros((0, field.m), dtype=np.int64))

    @classmethod
    def from_ints(cls, field: FieldDesc, values: Sequence[int]) -> "Poly":
        """Polynomial with prime-field constant coefficients, low degree first."""
        rows = np.zeros((len(values), field.m), dtype=np.int64)
        rows[:, 0] = [int(v) % field.p for v in values]
        return cls(field, rows)

    @classmethod
    def from_elements(cls, field: FieldDesc, values: Sequence[Scalar]) -> "Poly":
        rows = np.zeros((len(values), field.m), dtype=np.int64)
        for i, value in enumerate(values):
            rows[i] = field.element(value).coeffs
        return cls(field, rows)

    @classmethod
    def constant(cls, field: FieldDesc, value: Scalar) -> "Poly":
        return cls.from_elements(field, [value])

    @classmethod
    def monomial(cls, field: FieldDesc, k: int, value: Scalar = 1) -> "Poly":
        rows = np.zeros((k + 1, field.m), dtype=np.int64)
        rows[k] = field.element(value).coeffs
        return cls(field, rows)

    @classmethod
    def x(cls, field: FieldDesc) -> "Poly":
        return cls.monomial(field, 1)

    @classmethod
    def linear(cls, field: FieldDesc, a: Scalar, b: Scalar) -> "Poly":
        """The polynomial a*x + b."""
        return cls.from_elements(field, [b, a])

    @property
    def degree(self) -> Union[int, float]:
        """Degree, or `NEG_INF` for the zero polynomial."""
        if self.coeffs.shape[0] == 0:
            return NEG_INF
        return self.coeffs.shape[0] - 1

    def is_zero(self) -> bool:
        return self.coeffs.shape[0] == 0

    def coefficient(self, k: int) -> FieldElement:
        if 0 <= k < self.coeffs.shape[0]:
            return FieldElement(self.field, tuple(int(c) for c in self.coeffs[k]))
        return self.field.zero

    @property
    def coefficients(self) -> List[FieldElement]:
        return self.field.from_rows(self.coeffs)

    @property
    def leading(self) -> FieldElement:
        if self.is_zero():
            return self.field.zero
        return self.coefficient(self.coeffs.shape[0] - 1)

    def _check(self, other: "Poly"):
        if other.field is not self.field and other.field != self.field:
            raise FieldMismatchError(
                f"Polynomials over {self.field} and {other.field} cannot be combined."
            )

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, np.integer, FieldElement)):
            return Poly.constant(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        n = max(self.coeffs.shape[0], other.coeffs.shape[0])
        rows = np.zeros((n, self.field.m), dtype=np.int64)
        rows[: self.coeffs.shape[0]] += self.coeffs
        rows[: other.coeffs.shape[0]] += other.coeffs
        return Poly(self.field, rows)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, -self.coeffs)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer, FieldElement)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        field = self.field
        return Poly(field, fast.poly_mul(self.coeffs, other.coeffs, field.p, field.red))

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "Poly":
        c = self.field.element(c)
        if self.is_zero() or c.is_zero():
            return Poly.zero(self.field)
        field = self.field
        column = np.array([c.coeffs], dtype=np.int64)
        return Poly(field, fast.poly_mul(self.coeffs, column, field.p, field.red))

    def __divmod__(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("Polynomial division by zero.")
        field = self.field
        lead_inv = other.leading.inverse().vec
        quotient, remainder = fast.poly_divmod(
            self.coeffs, other.coeffs, field.p, field.red, lead_inv
        )
        return Poly(field, quotient), Poly(field, remainder)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("Negative powers of polynomials are not defined.")
        result = Poly.constant(self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def powmod(self, n: int, modulus: "Poly") -> "Poly":
        """self^n mod modulus by square-and-multiply."""
        if n < 0:
            raise ValueError("Negative exponents are not supported.")
        result = Poly.constant(self.field, 1) % modulus
        base = self % modulus
        while n:
            if n & 1:
                result = (result * base) % modulus
            n >>= 1
            if n:
                base = (base * base) % modulus
        return result

    def derivative(self) -> "Poly":
        if self.coeffs.shape[0] <= 1:
            return Poly.zero(self.field)
        factors = np.arange(1, self.coeffs.shape[0], dtype=np.int64)[:, None] % self.field.p
        return Poly(self.field, self.coeffs[1:] * factors)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.leading.inverse())

    def eval(self, value: Scalar) -> FieldElement:
        value = self.field.element(value)
        field = self.field
        out = fast.vec_horner(self.coeffs, value.vec[None, :], field.p, field.red)
        return FieldElement(field, tuple(int(c) for c in out[0]))

    __call__ = eval

    def eval_many(self, table: np.ndarray) -> np.ndarray:
        """Values at every row of an (N, m) element table."""
        field = self.field
        return fast.vec_horner(self.coeffs, table, field.p, field.red)

    def change_field(self, target: FieldDesc) -> "Poly":
        """Embed the coefficients into a field containing this one."""
        if target == self.field:
            return self
        if not target.contains(self.field):
            raise FieldMismatchError(f"{self.field} does not embed into {target}.")
        if self.field.m == 1:
            rows = np.zeros((self.coeffs.shape[0], target.m), dtype=np.int64)
            rows[:, 0] = self.coeffs[:, 0]
            return Poly(target, rows)
        return Poly.from_elements(target, [embed(c, target) for c in self.coefficients])

    def proportionality(self, other: "Poly") -> Optional[FieldElement]:
        """The scalar e with self == e * other, or None if there is none."""
        self._check(other)
        if other.is_zero():
            return self.field.one if self.is_zero() else None
        if self.degree != other.degree:
            return None
        e = self.leading / other.leading
        return e if self == other.scale(e) else None

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.field, self.coeffs.shape, self.coeffs.tobytes()))

    def to_dict(self) -> dict:
        return {
            "field": self.field.to_dict(),
            "coeffs": [c.to_json() for c in self.coefficients],
        }

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for power in range(self.coeffs.shape[0] - 1, -1, -1):
            c = self.coefficient(power)
            if c.is_zero():
                continue
            text = str(c)
            if self.field.m > 1 and "+" in text:
                text = f"({text})"
            if power == 0:
                terms.append(text)
                continue
            monomial = "x" if power == 1 else f"x^{power}"
            terms.append(monomial if c.is_one() else f"{text}*{monomial}")
        return " + ".join(terms)

    def __repr__(self):
        return f"Poly({self}, {self.field})"


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic greatest common divisor; gcd(0, 0) = 0."""
    f._check(g)
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def is_separable(f: Poly) -> bool:
    if f.is_zero():
        raise ValueError("The zero polynomial has no separability.")
    return gcd(f, f.derivative()).degree == 0


def modpow_frobenius(f: Poly, k: int) -> Poly:
    """
    x^{p^k} mod f, by k successive p-th powers.

    Parameters
    ----------
    f : Poly
        Nonconstant modulus
    k : int
        Number of Frobenius steps
    """
    if f.is_zero() or f.degree < 1:
        raise ValueError("Frobenius powers need a nonconstant modulus.")
    if k < 0:
        raise ValueError(f"Number of Frobenius steps must be non-negative, got {k}.")
    h = Poly.x(f.field) % f
    for _ in range(k):
        h = h.powmod(f.field.p, f)
    return h


def splitting_degree(f: Poly, cap: Optional[int] = None) -> int:
    """
    Degree over F_p of the splitting field of a separable polynomial with
    prime-field coefficients: the least m with f | x^{p^m} - x.
    """
    cap = current().extension_cap if cap is None else cap
    if f.field.m != 1:
        raise ValueError("splitting_degree expects coefficients in the prime field.")
    if not is_separable(f):
        raise ValueError(f"{f} is not separable over {f.field}.")
    if f.degree <= 1:
        return 1
    x = Poly.x(f.field)
    h = x % f
    for m in range(1, cap + 1):
        h = h.powmod(f.field.p, f)
        if gcd(f, h - x).degree == f.degree:
            return m
    raise CapExceededError(f"Splitting degree of {f} exceeds the cap {cap}.")


def _split_linear_factors(g: Poly, rng: random.Random) -> List[FieldElement]:
    """Roots of a monic product of distinct linear factors (odd characteristic)."""
    field = g.field
    exponent = (field.order - 1) // 2
    roots = []
    stack = [g]
    while stack:
        h = stack.pop()
        if h.degree == 1:
            roots.append(-h.coefficient(0) / h.coefficient(1))
            continue
        while True:
            shift = Poly.linear(field, 1, field.random_element(rng))
            w = gcd(h, shift.powmod(exponent, h) - 1)
            if 0 < w.degree < h.degree:
                stack.extend([w, h // w])
                break
    return roots


def roots_in_field(f: Poly, field: FieldDesc, seed: Optional[int] = None) -> List[FieldElement]:
    """
    Distinct roots of f in `field`, sorted in canonical order.

    Small fields are searched exhaustively; above the configured
    `root_search_cap` the distinct-root part gcd(f, x^q - x) is split with
    random shifts drawn from a seeded generator. The result does not depend
    on the seed.
    """
    if f.is_zero():
        raise ValueError("The zero polynomial vanishes everywhere.")
    config = current()
    f = f.change_field(field)
    if f.degree < 1:
        return []
    if field.order <= config.root_search_cap:
        table = field.element_table(cap=config.root_search_cap)
        values = f.eval_many(table)
        return field.from_rows(table[~values.any(axis=1)])
    if field.p == 2:
        raise CapExceededError(
            f"{field} is above the exhaustive search cap and splitting needs odd characteristic."
        )
    f = f.monic()
    distinct = gcd(f, modpow_frobenius(f, field.m) - Poly.x(field))
    if distinct.degree < 1:
        return []
    rng = random.Random(config.seed if seed is None else seed)
    roots = _split_linear_factors(distinct, rng)
    return sorted(roots, key=lambda root: root.coeffs)


def root_multiplicity(f: Poly, r: FieldElement) -> int:
    if f.is_zero():
        raise ValueError("Multiplicity is undefined for the zero polynomial.")
    f = f.change_field(r.field)
    divisor = Poly.linear(r.field, 1, -r)
    k = 0
    while True:
        quotient, remainder = divmod(f, divisor)
        if not remainder.is_zero():
            return k
        f = quotient
        k += 1


def compose_fractional(
    f: Poly, a: Scalar, b: Scalar, c: Scalar, delta: Scalar, degree: Optional[int] = None
) -> Poly:
    """
    The cleared composite (c x + delta)^D f((a x + b) / (c x + delta)) with
    D = deg f unless given. The four entries need not form an invertible
    matrix, which lets callers restrict homogeneous forms to lines.
    """
    field = f.field
    for entry in (a, b, c, delta):
        if isinstance(entry, FieldElement) and entry.field != field:
            field = entry.field
            f = f.change_field(field)
            break
    a, b, c, delta = (field.element(v) for v in (a, b, c, delta))
    top = f.degree if degree is None else degree
    if f.is_zero():
        return Poly.zero(field)
    if f.degree > top:
        raise ValueError(f"Homogenizing degree {top} is below deg f = {f.degree}.")
    numerator = Poly.linear(field, a, b)
    denominator = Poly.linear(field, c, delta)
    num_powers = [Poly.constant(field, 1)]
    den_powers = [Poly.constant(field, 1)]
    for _ in range(top):
        num_powers.append(num_powers[-1] * numerator)
        den_powers.append(den_powers[-1] * denominator)
    result = Poly.zero(field)
    for i, coefficient in enumerate(f.coefficients):
        if coefficient.is_zero():
            continue
        result = result + (num_powers[i] * den_powers[top - i]).scale(coefficient)
    return result


def compose_moebius(f: Poly, mu: "Moebius") -> Tuple[Poly, FieldElement]:
    """
    The cleared composite of f with the fractional linear map mu, using
    the matrix entries exactly as stored, together with its coefficient of
    x^{deg f} (zero when the degree drops).
    """
    if f.is_zero() or f.degree < 1:
        raise ValueError("compose_moebius expects a nonconstant polynomial.")
    target = mu.field
    if f.field != target:
        f = f.change_field(target)
    h = compose_fractional(f, mu.a, mu.b, mu.c, mu.delta)
    return h, h.coefficient(int(f.degree))


def prime_field_poly(p: int, values: Sequence[int]) -> Poly:
    """Shorthand for a polynomial over F_p given low-first integer coefficients."""
    return Poly.from_ints(make_field(p, 1), values)
