"""
Exact arithmetic for singular moduli and Taylor coefficients.

Values live in a real quadratic field Q(sqrt(d)) (d squarefree and positive, d = 1 standing for Q itself)
and are written a + b*sqrt(d) with rational a, b.  Congruences are taken componentwise in the basis
{1, sqrt(d)} of Z[sqrt(d)]/(p^A), which matches "b1(n) - b2(n) in p^A O" without fixing a square root of d
modulo p.

Serialization grammar shared by every report format:

    INT | INT "/" POSINT | "(" RAT ")+(" RAT ")sqrt(" INT ")"
"""
import re
import logging
from fractions import Fraction
from typing import Union

from sympy import factorint, legendre_symbol, multiplicity

from cmtaylor.utils import CMTaylorError


log = logging.getLogger(__name__)

Rat = Fraction
Scalar = Union[int, Fraction]

_RAT = r"-?\d+(?:/\d+)?"
_QUAD_PATTERN = re.compile(rf"^\(({_RAT})\)\+\(({_RAT})\)sqrt\((\d+)\)$")
_RAT_PATTERN = re.compile(rf"^{_RAT}$")


class FieldMismatchError(CMTaylorError):
    pass

class NonIntegralError(CMTaylorError):
    pass

def is_squarefree(d: int) -> bool:
    return d > 0 and all(e == 1 for e in factorint(d).values())

class QuadRat:
    """An element a + b*sqrt(d) of Q(sqrt(d)).  Immutable."""
    __slots__ = ("d", "a", "b")

    def __init__(self, a: Scalar = 0, b: Scalar = 0, d: int = 1):
        a, b = Fraction(a), Fraction(b)
        if d == 1:
            a, b = a + b, Fraction(0)
        elif not is_squarefree(d):
            raise CMTaylorError(f"d={d} is not a squarefree positive integer")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("QuadRat is immutable")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def _coerce(self, other) -> "QuadRat":
        if isinstance(other, QuadRat):
            if other.d == self.d or other.is_rational:
                return QuadRat(other.a, other.b, self.d) if other.d != self.d else other
            if self.is_rational:
                return other
            raise FieldMismatchError(f"cannot combine elements of Q(sqrt({self.d})) and Q(sqrt({other.d}))")
        if isinstance(other, (int, Fraction)):
            return QuadRat(other, 0, self.d)
        return NotImplemented

    def _field(self, other: "QuadRat") -> int:
        return other.d if self.is_rational and not other.is_rational else self.d

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadRat(self.a + other.a, self.b + other.b, self._field(other))

    __radd__ = __add__

    def __neg__(self):
        return QuadRat(-self.a, -self.b, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self._field(other)
        return QuadRat(self.a * other.a + d * self.b * other.b, self.a * other.b + self.b * other.a, d)

    __rmul__ = __mul__

    def inverse(self) -> "QuadRat":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in a quadratic field")
        return QuadRat(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = QuadRat(1, 0, self.d), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> "QuadRat":
        return QuadRat(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.a == other
        if isinstance(other, QuadRat):
            if self.is_rational and other.is_rational:
                return self.a == other.a
            return (self.d, self.a, self.b) == (other.d, other.a, other.b)
        return NotImplemented

    def __hash__(self):
        if self.is_rational:
            return hash(self.a)
        return hash((self.d, self.a, self.b))

    def __str__(self):
        return format_value(self)

    def __repr__(self):
        return f"QuadRat({format_value(self)})"

def sqrt(d: int) -> QuadRat:
    return QuadRat(0, 1, d)

def conjugate(x: QuadRat) -> QuadRat:
    return x.conjugate()

def norm(x: QuadRat) -> Fraction:
    return x.norm()

def trace(x: QuadRat) -> Fraction:
    return x.trace()

def format_value(x: Union[int, Fraction, QuadRat]) -> str:
    if isinstance(x, QuadRat):
        if x.is_rational:
            return format_value(x.a)
        return f"({format_value(x.a)})+({format_value(x.b)})sqrt({x.d})"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

def parse_value(text: str) -> Union[Fraction, QuadRat]:
    text = text.strip()
    if _RAT_PATTERN.match(text):
        return Fraction(text)
    match = _QUAD_PATTERN.match(text)
    if match is None:
        raise CMTaylorError(f"cannot parse exact value '{text}'")
    a, b, d = match.groups()
    return QuadRat(Fraction(a), Fraction(b), int(d))

def vp(x: Scalar, p: int) -> int:
    """The p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise CMTaylorError("the p-adic valuation of 0 is undefined")
    return multiplicity(p, abs(x.numerator)) - multiplicity(p, x.denominator)

def is_split(D: int, p: int) -> str:
    """Classify the odd prime p in Q(sqrt(D)) as 'split', 'inert' or 'ramified'."""
    if D % p == 0:
        return "ramified"
    return "split" if legendre_symbol(D % p, p) == 1 else "inert"

def _residue(x: Fraction, modulus: int, p: int) -> int:
    if x.denominator % p == 0:
        raise NonIntegralError(f"{format_value(x)} is not {p}-integral")
    return x.numerator * pow(x.denominator, -1, modulus) % modulus

class ResidueQuad:
    """The class of a + b*sqrt(d) in Z[sqrt(d)]/(p^A).  Immutable."""
    __slots__ = ("p", "A", "d", "a", "b")

    def __init__(self, a: int, b: int, p: int, A: int, d: int = 1):
        modulus = p ** A
        if d == 1:
            a, b = a + b, 0
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "a", a % modulus)
        object.__setattr__(self, "b", b % modulus)

    def __setattr__(self, name, value):
        raise AttributeError("ResidueQuad is immutable")

    @property
    def modulus(self) -> int:
        return self.p ** self.A

    def _new(self, a: int, b: int) -> "ResidueQuad":
        return ResidueQuad(a, b, self.p, self.A, self.d)

    def _coerce(self, other) -> "ResidueQuad":
        if isinstance(other, ResidueQuad):
            if (other.p, other.A) != (self.p, self.A):
                raise FieldMismatchError(f"cannot combine residues modulo {self.modulus} and {other.modulus}")
            if other.d != self.d and other.b and self.b:
                raise FieldMismatchError(f"cannot combine residues in Z[sqrt({self.d})] and Z[sqrt({other.d})]")
            return other
        if isinstance(other, int):
            return self._new(other, 0)
        if isinstance(other, Fraction):
            return self._new(_residue(other, self.modulus, self.p), 0)
        if isinstance(other, QuadRat):
            return reduce_mod(other, self.p, self.A)
        return NotImplemented

    def _field(self, other: "ResidueQuad") -> int:
        return other.d if self.d == 1 else self.d

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ResidueQuad(self.a + other.a, self.b + other.b, self.p, self.A, self._field(other))

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.a, -self.b)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self._field(other)
        return ResidueQuad(self.a * other.a + d * self.b * other.b, self.a * other.b + self.b * other.a,
                           self.p, self.A, d)

    __rmul__ = __mul__

    def norm(self) -> int:
        return (self.a * self.a - self.d * self.b * self.b) % self.modulus

    def conjugate(self) -> "ResidueQuad":
        return self._new(self.a, -self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.norm() % self.p != 0

    def inverse(self) -> "ResidueQuad":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit modulo {self.p}^{self.A}")
        n_inv = pow(self.norm(), -1, self.modulus)
        return self.conjugate() * n_inv

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = self._new(1, 0), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self.a == other % self.modulus and self.b == 0
        if isinstance(other, ResidueQuad):
            same_field = self.d == other.d or (self.b == 0 and other.b == 0)
            return same_field and (self.p, self.A, self.a, self.b) == (other.p, other.A, other.a, other.b)
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.A, self.a, self.b))

    def centered(self) -> "tuple":
        """Components as signed representatives in (-p^A/2, p^A/2]."""
        m = self.modulus
        return tuple(c - m if c > m // 2 else c for c in (self.a, self.b))

    def __str__(self):
        a, b = self.centered()
        if self.b == 0:
            return str(a)
        return f"({a})+({b})sqrt({self.d})"

    def __repr__(self):
        return f"ResidueQuad({self} mod {self.p}^{self.A})"

def reduce_mod(x: Union[int, Fraction, QuadRat], p: int, A: int, d: int = None) -> ResidueQuad:
    """Reduce a p-integral element into Z[sqrt(d)]/(p^A), componentwise in the basis {1, sqrt(d)}."""
    modulus = p ** A
    if isinstance(x, QuadRat):
        field = x.d if d is None or not x.is_rational else d
        return ResidueQuad(_residue(x.a, modulus, p), _residue(x.b, modulus, p), p, A, field)
    return ResidueQuad(_residue(Fraction(x), modulus, p), 0, p, A, d or 1)

def unit_group_order(p: int, A: int, d: int) -> int:
    if d == 1:
        return (p - 1) * p ** (A - 1)
    kind = is_split(d, p)
    if kind == "split":
        base = (p - 1) ** 2
    elif kind == "inert":
        base = p * p - 1
    else:
        base = p * (p - 1)
    return base * p ** (2 * (A - 1))

def multiplicative_order(x: ResidueQuad) -> int:
    if not x.is_unit():
        raise CMTaylorError(f"{x} is not a unit, it has no multiplicative order")
    order = unit_group_order(x.p, x.A, x.d if x.b else 1)
    for q in factorint(order):
        while order % q == 0 and x ** (order // q) == 1:
            order //= q
    return order
