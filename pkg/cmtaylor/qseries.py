"""
Truncated q-expansions.

A QSeries stores the coefficients of q^offset, q^(offset+1), ..., q^(offset+order-1), where the offset is a
multiple of 1/24 (kept as the integer `offset24`); eta is the only source of fractional powers.  Coefficients may
be Python ints, Fractions, QuadRat, ResidueQuad or mpmath numbers: anything supporting +, * and division of 1 by a
unit.  Arithmetic results carry the smallest order that is still reliable for both operands.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterator, Sequence, Tuple, Union

import sympy

from cmtaylor.arith import reduce_mod
from cmtaylor.utils import CMTaylorError


log = logging.getLogger(__name__)

DEFAULT_ORDER = 64


class SeriesDivisionError(CMTaylorError):
    pass

def _normalize(x: Any) -> Any:
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x

def _reciprocal(c: Any) -> Any:
    if isinstance(c, (int, Fraction)):
        return _normalize(1 / Fraction(c))
    return 1 / c

def _is_zero(c: Any) -> bool:
    return c == 0

class QSeries:
    __slots__ = ("offset24", "coeffs")

    def __init__(self, coeffs: Sequence[Any], offset24: int = 0):
        object.__setattr__(self, "offset24", offset24)
        object.__setattr__(self, "coeffs", tuple(_normalize(c) for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def offset(self) -> Fraction:
        return Fraction(self.offset24, 24)

    def exponents(self) -> Iterator[Fraction]:
        for j in range(self.order):
            yield Fraction(self.offset24 + 24 * j, 24)

    def items(self) -> Iterator[Tuple[Fraction, Any]]:
        return zip(self.exponents(), self.coeffs)

    def coefficient(self, exponent: Union[int, Fraction]) -> Any:
        steps = Fraction(exponent) * 24 - self.offset24
        if steps % 24:
            return 0
        j = int(steps // 24)
        if j >= self.order:
            raise CMTaylorError(f"coefficient of q^{exponent} is beyond the truncation order")
        return self.coeffs[j] if j >= 0 else 0

    def truncate(self, order: int) -> "QSeries":
        return QSeries(self.coeffs[:order], self.offset24)

    def map_coefficients(self, fn: Callable[[Any], Any]) -> "QSeries":
        return QSeries([fn(c) for c in self.coeffs], self.offset24)

    def scale(self, c: Any) -> "QSeries":
        return self.map_coefficients(lambda x: x * c)

    def strip(self) -> "QSeries":
        """Factor out the leading monomial: drop leading zero coefficients, moving the offset."""
        v = 0
        while v < self.order and _is_zero(self.coeffs[v]):
            v += 1
        return QSeries(self.coeffs[v:], self.offset24 + 24 * v)

    def _as_series(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        # scalars are known to every order
        return QSeries([other] + [0] * (self.order + max(self.offset24, 0) // 24), 0)

    def __add__(self, other):
        other = self._as_series(other)
        if (self.offset24 - other.offset24) % 24:
            raise CMTaylorError("cannot add q-series whose offsets differ by a non-integer")
        start = min(self.offset24, other.offset24)
        end = min(self.offset24 + 24 * self.order, other.offset24 + 24 * other.order)
        coeffs = []
        for e in range(start, end, 24):
            c = 0
            for f in (self, other):
                j = (e - f.offset24) // 24
                if 0 <= j < f.order:
                    c = c + f.coeffs[j]
            coeffs.append(c)
        return QSeries(coeffs, start)

    __radd__ = __add__

    def __neg__(self):
        return self.map_coefficients(lambda c: -c)

    def __sub__(self, other):
        return self + (-self._as_series(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        coeffs = []
        for m in range(n):
            c = 0
            for j in range(m + 1):
                if not _is_zero(a[j]) and not _is_zero(b[m - j]):
                    c = c + a[j] * b[m - j]
            coeffs.append(c)
        return QSeries(coeffs, self.offset24 + other.offset24)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        g = self.strip()
        if g.order == 0:
            raise SeriesDivisionError("cannot invert a series with no known nonzero coefficient")
        try:
            lead_inv = _reciprocal(g.coeffs[0])
        except ZeroDivisionError as e:
            raise SeriesDivisionError(f"leading coefficient {g.coeffs[0]} is not a unit") from e
        inv = [lead_inv]
        for m in range(1, g.order):
            c = 0
            for j in range(1, m + 1):
                if not _is_zero(g.coeffs[j]):
                    c = c + g.coeffs[j] * inv[m - j]
            inv.append(_normalize(-c * lead_inv))
        return QSeries(inv, -g.offset24)

    def __truediv__(self, other):
        if not isinstance(other, QSeries):
            return self * _reciprocal(other)
        g = other.strip()
        return self.truncate(min(self.order, g.order)) * g.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = QSeries([1] + [0] * (self.order - 1), 0)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            other = self._as_series(other)
        try:
            difference = self - other
        except CMTaylorError:
            return False
        return all(_is_zero(c) for c in difference.coeffs)

    __hash__ = None  # type: ignore

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:8])
        return f"QSeries(offset={self.offset}, order={self.order}, [{shown}{', ...' if self.order > 8 else ''}])"

def D(f: QSeries) -> QSeries:
    """D = q d/dq: the coefficient of q^alpha is multiplied by alpha."""
    return QSeries([c * _normalize(alpha) if not _is_zero(c) else 0 for alpha, c in f.items()], f.offset24)

def rescale(f: QSeries, m: int) -> QSeries:
    """Substitute q -> q^m."""
    coeffs = [0] * (m * f.order)
    for j, c in enumerate(f.coeffs):
        coeffs[m * j] = c
    return QSeries(coeffs, m * f.offset24)

def sigma(k: int, n: int) -> int:
    return int(sympy.divisor_sigma(n, k))

@lru_cache(maxsize=None)
def bernoulli(k: int) -> Fraction:
    """B_k normalized by sum_{j<=k} C(k+1, j) B_j = 0, so B_1 = -1/2."""
    if k == 1:
        return Fraction(-1, 2)
    b = sympy.bernoulli(k)
    return Fraction(int(b.p), int(b.q))

@lru_cache(maxsize=None)
def theta(N: int = DEFAULT_ORDER) -> QSeries:
    """Theta = sum over n in Z of q^(n^2)."""
    coeffs = [0] * N
    n = 0
    while n * n < N:
        coeffs[n * n] += 1 if n == 0 else 2
        n += 1
    return QSeries(coeffs)

@lru_cache(maxsize=None)
def euler_product(N: int = DEFAULT_ORDER) -> QSeries:
    """prod (1 - q^n), by the pentagonal number theorem."""
    coeffs = [0] * N
    k = 0
    while True:
        placed = False
        for j in ({k, -k} if k else {0}):
            e = j * (3 * j - 1) // 2
            if e < N:
                coeffs[e] += -1 if k % 2 else 1
                placed = True
        if not placed:
            break
        k += 1
    return QSeries(coeffs)

def eta(N: int = DEFAULT_ORDER) -> QSeries:
    return QSeries(euler_product(N).coeffs, 1)

@lru_cache(maxsize=None)
def F2(N: int = DEFAULT_ORDER) -> QSeries:
    """sum over odd n of sigma_1(n) q^n, a weight 2 form on Gamma0(4)."""
    return QSeries([sigma(1, n) if n % 2 else 0 for n in range(N)])

@lru_cache(maxsize=None)
def E2(N: int = DEFAULT_ORDER) -> QSeries:
    return QSeries([1] + [-24 * sigma(1, n) for n in range(1, N)])

@lru_cache(maxsize=None)
def Ek(k: int, N: int = DEFAULT_ORDER) -> QSeries:
    if k < 4 or k % 2:
        raise CMTaylorError(f"Eisenstein series E_k needs an even weight k >= 4, not {k}")
    factor = -2 * k / bernoulli(k)
    return QSeries([1] + [factor * sigma(k - 1, n) for n in range(1, N)])

def delta(N: int = DEFAULT_ORDER) -> QSeries:
    """Delta = eta^24, with integer coefficients from q^1 on."""
    return QSeries((euler_product(N) ** 24).coeffs, 24)

def H52(N: int = DEFAULT_ORDER) -> QSeries:
    """The Cohen-Eisenstein series of weight 5/2, (Theta^5 - 20 Theta F2)/120."""
    t = theta(N)
    return (t ** 5 - t * F2(N) * 20) * Fraction(1, 120)

def reduce_series(f: QSeries, p: int, A: int, d: int = 1) -> QSeries:
    return f.map_coefficients(lambda c: reduce_mod(c, p, A, d))

def series_congruent(f: QSeries, g: QSeries, p: int, A: int) -> bool:
    return all(c.is_zero() for c in reduce_series(f - g, p, A).coeffs)
