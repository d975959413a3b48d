"""
chebyshev.py

The normalized Chebyshev (Dickson) polynomials phi_d, characterised by
phi_d(t + 1/t) = t^d + t^-d, and the polynomial identities about them that
drive the curve computations. Every identity is checked with denominators
cleared, as an equality in F_p[t].
"""

from dataclasses import dataclass
from functools import lru_cache
from logging import getLogger
from typing import List, Optional

from sympy import binomial

from pychebcurves.ff import FieldDesc, FieldElement, make_field, prime_power_exponent
from pychebcurves.poly import Poly, compose_fractional, roots_in_field
from pychebcurves.routines import HypothesisError, InvariantBreach

logger = getLogger("pychebcurves.chebyshev")


@dataclass(frozen=True)
class ChebSpec:
    """
    Degree and coefficient field of a Chebyshev polynomial.

    The characteristic must not divide 2d; `enforce=False` skips that check
    and exists only for negative tests.
    """

    d: int
    field: FieldDesc
    enforce: bool = True

    def __post_init__(self):
        if self.d < 0:
            raise ValueError(f"Degree must be non-negative, got {self.d}.")
        if self.enforce and self.d >= 1 and (2 * self.d) % self.field.p == 0:
            raise HypothesisError(
                f"Characteristic {self.field.p} divides 2d = {2 * self.d}; phi_d is inseparable."
            )


@lru_cache(maxsize=256)
def chebyshev_poly(d: int, field: FieldDesc) -> Poly:
    """phi_d over `field` from phi_0 = 2, phi_1 = x, phi_{k+1} = x phi_k - phi_{k-1}."""
    if d < 0:
        raise ValueError(f"Degree must be non-negative, got {d}.")
    previous = Poly.constant(field, 2)
    if d == 0:
        return previous
    x = Poly.x(field)
    current_poly = x
    for _ in range(d - 1):
        previous, current_poly = current_poly, x * current_poly - previous
    return current_poly


def cheb(spec: ChebSpec) -> Poly:
    return chebyshev_poly(spec.d, spec.field)


def integer_coefficient(d: int, j: int) -> int:
    """
    Coefficient of x^{d-2j} of phi_d over the integers,
    (-1)^j d/(d-j) C(d-j, j), computed with exact division.
    """
    if d == 0:
        if j != 0:
            raise ValueError(f"phi_0 has no coefficient index {j}.")
        return 2
    if not 0 <= j <= d // 2:
        raise ValueError(f"Index {j} is outside [0, {d // 2}].")
    numerator = d * int(binomial(d - j, j))
    value, remainder = divmod(numerator, d - j)
    if remainder:
        raise ArithmeticError(f"Non-integral coefficient for d={d}, j={j}.")
    return (-1) ** j * value


def cheb_coefficient(d: int, j: int, field: FieldDesc) -> FieldElement:
    return field.element(integer_coefficient(d, j))


def closed_form(d: int, field: FieldDesc) -> Poly:
    """phi_d assembled from the closed-form coefficients."""
    values = [field.zero] * (d + 1)
    for j in range(d // 2 + 1):
        values[d - 2 * j] = cheb_coefficient(d, j, field)
    return Poly.from_elements(field, values)


def integer_coefficients(d: int) -> List[int]:
    """phi_d over the integers, low degree first."""
    values = [0] * (d + 1)
    for j in range(d // 2 + 1):
        values[d - 2 * j] = integer_coefficient(d, j)
    return values


def verify_laurent_identity(spec: ChebSpec, candidate: Optional[Poly] = None) -> bool:
    """
    Check t^d f((t^2 + 1)/t) = t^{2d} + 1 for f = phi_d, or for `candidate`
    when one is given.
    """
    f = cheb(spec) if candidate is None else candidate
    field = spec.field
    d = spec.d
    if f.degree > d:
        return False
    shifted = Poly.from_ints(field, [1, 0, 1])
    power = Poly.constant(field, 1)
    lhs = Poly.zero(field)
    for i, coefficient in enumerate(f.coefficients):
        if not coefficient.is_zero():
            lhs = lhs + (power * Poly.monomial(field, d - i)).scale(coefficient)
        power = power * shifted
    rhs = Poly.monomial(field, 2 * d) + 1
    return lhs == rhs


def _check_odd_coprime(d: int, p: int):
    if p == 2 or (2 * d) % p == 0:
        raise HypothesisError(f"Need odd p not dividing 2d, got d={d}, p={p}.")


def verify_exceptional_identity(d: int, p: int) -> bool:
    """
    Whether (t^2 - 2t + 1)^d + (t^2 + 2t + 1)^d = 2t^{2d} + 2 in F_p[t];
    expected exactly when 2d - 1 is a power of p.
    """
    _check_odd_coprime(d, p)
    field = make_field(p, 1)
    minus = Poly.from_ints(field, [1, -2, 1]) ** d
    plus = Poly.from_ints(field, [1, 2, 1]) ** d
    return minus + plus == Poly.monomial(field, 2 * d, 2) + 2


def verify_quartic_root_identity(d: int, p: int) -> bool:
    """
    Whether (t^2 - i t + 1)^d + (t^2 + i t + 1)^d = 2t^{2d} + 2 with i a
    primitive fourth root of unity, taken in F_p or F_{p^2}. Expected to
    fail for every d >= 4.
    """
    _check_odd_coprime(d, p)
    field = make_field(p, 1 if p % 4 == 1 else 2)
    i = roots_in_field(Poly.from_ints(field, [1, 0, 1]), field)[0]
    minus = Poly.from_elements(field, [1, -i, 1]) ** d
    plus = Poly.from_elements(field, [1, i, 1]) ** d
    return minus + plus == Poly.monomial(field, 2 * d, 2) + 2


def verify_fermat_identity(d: int, p: int) -> bool:
    """
    Whether (u - 1)^d phi_d((2u + 2)/(u - 1)) = 2u^d + 2 in F_p[u]; expected
    when 2d = q + 1 for a power q of p. The truth value is returned for any
    (d, p).
    """
    field = make_field(p, 1)
    if prime_power_exponent(2 * d - 1, p) is None:
        logger.info(f"2d - 1 = {2 * d - 1} is not a power of {p}; identity checked anyway.")
    h = compose_fractional(chebyshev_poly(d, field), 2, 2, 1, -1)
    return h == Poly.monomial(field, d, 2) + 2


def order3_scalar_holds(d: int, p: int) -> bool:
    """(-4)^d = 2 in F_p."""
    return pow(-4, d, p) == 2 % p


def verify_order3_identity(d: int, p: int) -> bool:
    """
    Whether (2 - x)^d phi_d((2x + 12)/(2 - x)) = 2 phi_d(x) in F_p[x];
    expected when 4d = q + 1. In that case the scalar (-4)^d must equal 2,
    otherwise the lift of the map could not exist.
    """
    if p < 3 or (2 * d) % p == 0:
        raise HypothesisError(f"Need p >= 3 not dividing 2d, got d={d}, p={p}.")
    field = make_field(p, 1)
    phi = chebyshev_poly(d, field)
    holds = compose_fractional(phi, 2, 12, -1, 2) == phi.scale(2)
    if holds and prime_power_exponent(4 * d - 1, p):
        if not order3_scalar_holds(d, p):
            raise InvariantBreach(f"(-4)^{d} != 2 in F_{p} although 4d = q + 1.")
    return holds
