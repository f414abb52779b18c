"""
Quasimodular forms on Gamma0(4) as weighted polynomials.

M_*(Gamma0(4)) = C[Theta, F2], and adjoining E2 gives the quasimodular forms.  A WeightedPoly is a polynomial in
X = Theta (weight 1/2), Y = F2 (weight 2) and Z = E2 (weight 2); the Z-degree is the depth.  D = q d/dq acts as
the derivation

    DX = (80XY - X^5)/24 + XZ/24
    DY = (5X^4Y - 16Y^2)/6 + YZ/6
    DZ = (Z^2 - E4)/12,     E4 = X^8 + 224X^4Y + 256Y^2

and the modified Serre derivative for phi = Z/12 + a4 X^4 + aY Y is Df - k phi f on weight k forms.
"""
import logging
from collections import namedtuple
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import sympy

from cmtaylor import qseries
from cmtaylor.qseries import QSeries
from cmtaylor.utils import CMTaylorError, log_info


log = logging.getLogger(__name__)

Monomial = Tuple[int, int, int]
PhiSpec = namedtuple("PhiSpec", "a4 aY")
DerivationTable = namedtuple("DerivationTable", "thetaX thetaY psi")
IdentityResult = namedtuple("IdentityResult", "name passed order")


class NotInAlgebraError(CMTaylorError):
    pass

class DerivationFault(CMTaylorError):
    """A derivation table failed to be Z-free or disagreed with q-expansions; an implementation fault."""
    pass

def monomial_weight(m: Monomial) -> Fraction:
    i, j, l = m
    return Fraction(i, 2) + 2 * j + 2 * l

class WeightedPoly:
    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Monomial, Any]] = None):
        cleaned = {m: Fraction(c) for m, c in (terms or {}).items() if c != 0}
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("WeightedPoly is immutable")

    @classmethod
    def constant(cls, c: Any) -> "WeightedPoly":
        return cls({(0, 0, 0): c})

    def _as_poly(self, other) -> "WeightedPoly":
        return other if isinstance(other, WeightedPoly) else WeightedPoly.constant(other)

    def __add__(self, other):
        other = self._as_poly(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return WeightedPoly(terms)

    __radd__ = __add__

    def __neg__(self):
        return WeightedPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._as_poly(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._as_poly(other)
        terms: Dict[Monomial, Fraction] = {}
        for (i1, j1, l1), c1 in self.terms.items():
            for (i2, j2, l2), c2 in other.terms.items():
                m = (i1 + i2, j1 + j2, l1 + l2)
                terms[m] = terms.get(m, 0) + c1 * c2
        return WeightedPoly(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        result = WeightedPoly.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, WeightedPoly):
            other = WeightedPoly.constant(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def is_z_free(self) -> bool:
        return all(l == 0 for (_, _, l) in self.terms)

    def is_homogeneous(self) -> bool:
        return len({monomial_weight(m) for m in self.terms}) <= 1

    def weight(self) -> Fraction:
        weights = {monomial_weight(m) for m in self.terms}
        if len(weights) != 1:
            raise CMTaylorError(f"{self} is not homogeneous")
        return weights.pop()

    def depth(self) -> int:
        return max((l for (_, _, l) in self.terms), default=0)

    def partial(self, var: int) -> "WeightedPoly":
        terms: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            if m[var]:
                lowered = list(m)
                lowered[var] -= 1
                terms[tuple(lowered)] = c * m[var]  # type: ignore
        return WeightedPoly(terms)

    def z_coefficients(self) -> List["WeightedPoly"]:
        """The modular components f_r with P = sum f_r Z^r."""
        parts: List[Dict[Monomial, Fraction]] = [dict() for _ in range(self.depth() + 1)]
        for (i, j, l), c in self.terms.items():
            parts[l][(i, j, 0)] = c
        return [WeightedPoly(p) for p in parts]

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda mc: (monomial_weight(mc[0]), mc[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j, l), c in self.sorted_terms():
            factors = [f"{v}^{e}" if e > 1 else v for v, e in zip("XYZ", (i, j, l)) if e]
            parts.append("*".join([f"({c})"] + factors) if factors else f"({c})")
        return " + ".join(parts)

    def __repr__(self):
        return f"WeightedPoly({self})"

X = WeightedPoly({(1, 0, 0): 1})
Y = WeightedPoly({(0, 1, 0): 1})
Z = WeightedPoly({(0, 0, 1): 1})
E4_POLY = X ** 8 + 224 * X ** 4 * Y + 256 * Y ** 2

_DX = (80 * X * Y - X ** 5) * Fraction(1, 24) + X * Z * Fraction(1, 24)
_DY = (5 * X ** 4 * Y - 16 * Y ** 2) * Fraction(1, 6) + Y * Z * Fraction(1, 6)
_DZ = (Z ** 2 - E4_POLY) * Fraction(1, 12)

PHI_I = PhiSpec(Fraction(0), Fraction(0))
PHI_Z7 = PhiSpec(Fraction(-1, 42), Fraction(-8, 21))
PHI_ROMIK = PhiSpec(Fraction(1, 8), Fraction(0))

def evaluate(P: WeightedPoly, x: Any, y: Any, z: Any, one: Any = 1) -> Any:
    """Substitute ring elements for X, Y, Z."""
    powers: Dict[Tuple[int, int], Any] = {}

    def power(var: int, base: Any, e: int) -> Any:
        if (var, e) not in powers:
            powers[(var, e)] = one if e == 0 else power(var, base, e - 1) * base
        return powers[(var, e)]

    total: Any = 0
    for (i, j, l), c in P.sorted_terms():
        total = total + power(0, x, i) * power(1, y, j) * power(2, z, l) * c
    return total

def to_qseries(P: WeightedPoly, N: int = qseries.DEFAULT_ORDER) -> QSeries:
    one = QSeries([1] + [0] * (N - 1))
    result = evaluate(P, qseries.theta(N), qseries.F2(N), qseries.E2(N), one)
    return result if isinstance(result, QSeries) else one * result

def phi_poly(phi: PhiSpec) -> WeightedPoly:
    return Z * Fraction(1, 12) + X ** 4 * phi.a4 + Y * phi.aY

def D_poly(P: WeightedPoly) -> WeightedPoly:
    return P.partial(0) * _DX + P.partial(1) * _DY + P.partial(2) * _DZ

def serre(P: WeightedPoly, phi: PhiSpec) -> WeightedPoly:
    """theta_phi P = DP - k phi P for P homogeneous of weight k."""
    if P.is_zero():
        return P
    return D_poly(P) - phi_poly(phi) * P * P.weight()

def monomials_of_weight(w: Union[int, Fraction]) -> List[Monomial]:
    w = Fraction(w)
    monomials = []
    j = 0
    while 2 * j <= w:
        i = 2 * (w - 2 * j)
        if i.denominator == 1:
            monomials.append((int(i), j, 0))
        j += 1
    return monomials

def express_in_basis(f: QSeries, w: Union[int, Fraction], N: Optional[int] = None) -> WeightedPoly:
    """Write the q-expansion f of a weight w form on Gamma0(4) as a polynomial in X = Theta and Y = F2."""
    monomials = monomials_of_weight(w)
    N = N or f.order
    if f.offset24 % 24 or f.offset24 < 0:
        raise NotInAlgebraError("a form on Gamma0(4) has a q-expansion with integral, nonnegative exponents")
    if not monomials or N <= len(monomials):
        raise NotInAlgebraError(f"no monomials or too few coefficients ({N}) at weight {w}")
    columns = [to_qseries(WeightedPoly({m: 1}), N) for m in monomials]
    rows = range(N)
    matrix = sympy.Matrix([[sympy.Rational(str(Fraction(col.coefficient(e)))) for col in columns] for e in rows])
    target = sympy.Matrix([sympy.Rational(str(Fraction(f.coefficient(e)))) for e in rows])
    try:
        solution, params = matrix.gauss_jordan_solve(target)
    except ValueError as e:
        raise NotInAlgebraError(f"series is not in M_{w}(Gamma0(4)) to order {N}") from e
    solution = solution.subs({s: 0 for s in params})
    return WeightedPoly({m: Fraction(int(c.p), int(c.q)) for m, c in zip(monomials, solution)})

def serre_derivation(phi: PhiSpec, verify: bool = True, N: int = qseries.DEFAULT_ORDER) -> DerivationTable:
    phi_P = phi_poly(phi)
    table = DerivationTable(thetaX=serre(X, phi), thetaY=serre(Y, phi), psi=D_poly(phi_P) - phi_P * phi_P)
    for name, P in zip(table._fields, table):
        if not P.is_z_free():
            raise DerivationFault(f"{name} = {P} still involves E2")
    if verify:
        phi_series = to_qseries(phi_P, N)
        theta_s, f2_s = qseries.theta(N), qseries.F2(N)
        from_series = DerivationTable(
            thetaX=express_in_basis(qseries.D(theta_s) - phi_series * theta_s * Fraction(1, 2), Fraction(5, 2)),
            thetaY=express_in_basis(qseries.D(f2_s) - phi_series * f2_s * 2, 4),
            psi=express_in_basis(qseries.D(phi_series) - phi_series * phi_series, 4))
        if from_series != table:
            raise DerivationFault(f"symbolic {table} disagrees with q-expansions {from_series}")
    log_info(action="Derived Serre derivation table", phi=str(phi), thetaX=str(table.thetaX),
             thetaY=str(table.thetaY), psi=str(table.psi))
    return table

def iterate_serre(f: WeightedPoly, phi: PhiSpec, n: int) -> WeightedPoly:
    """theta_phi^[n] f, with theta^[n+1] f = theta(theta^[n] f) + n(k+n-1) psi theta^[n-1] f."""
    if not f.is_homogeneous() or f.is_zero():
        raise CMTaylorError(f"{f} is not a nonzero homogeneous polynomial")
    k = f.weight()
    phi_P = phi_poly(phi)
    psi = D_poly(phi_P) - phi_P * phi_P
    previous, current = WeightedPoly(), f
    for m in range(n):
        previous, current = current, serre(current, phi) + psi * previous * (m * (k + m - 1))
    return current

def eisenstein_poly(k: int, N: int = qseries.DEFAULT_ORDER) -> WeightedPoly:
    return express_in_basis(qseries.Ek(k, N), k)

def parse_poly(expr: str) -> WeightedPoly:
    """Parse an expression in X, Y (and Z) with rational coefficients, e.g. '(X^5 - 20*X*Y)/120'."""
    symbols = sympy.symbols("X Y Z")
    try:
        parsed = sympy.sympify(expr.replace("^", "**"), locals=dict(zip("XYZ", symbols)))
        poly = sympy.Poly(sympy.expand(parsed), *symbols)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError) as e:
        raise CMTaylorError(f"cannot parse polynomial '{expr}'") from e
    terms = {}
    for m, c in poly.terms():
        c = sympy.Rational(c)
        terms[tuple(m)] = Fraction(int(c.p), int(c.q))
    return WeightedPoly(terms)  # type: ignore

PRINTED_H52 = [1, -10, 0, 0, -70, -48, 0, 0, -120, -250, 0, 0, -240, -240]

def identities(N: int = 200) -> List[IdentityResult]:
    """Check the q-expansion identities the Taylor recursions rest on, to order N."""
    theta_s, f2_s, e2_s = qseries.theta(N), qseries.F2(N), qseries.E2(N)
    eta_s = qseries.eta(N)
    results = []

    def record(name: str, passed: bool):
        results.append(IdentityResult(name, bool(passed), N))
        log_info(action="Checked identity", name=name, passed=bool(passed), order=N)

    record("theta = eta(2t)^5 / (eta(t)^2 eta(4t)^2)",
           theta_s == (qseries.rescale(eta_s, 2) ** 5 / (eta_s ** 2 * qseries.rescale(eta_s, 4) ** 2)).truncate(N))
    record("F2 = eta(4t)^8 / eta(2t)^4",
           f2_s == (qseries.rescale(eta_s, 4) ** 8 / qseries.rescale(eta_s, 2) ** 4).truncate(N))
    record("24 D(theta)/theta = 10 E2(2t) - 2 E2(t) - 8 E2(4t)",
           qseries.D(theta_s) * 24 / theta_s
           == qseries.rescale(e2_s, 2) * 10 - e2_s * 2 - qseries.rescale(e2_s, 4) * 8)
    record("E4 = X^8 + 224 X^4 Y + 256 Y^2", to_qseries(E4_POLY, N) == qseries.Ek(4, N))
    for label, phi, expected in (
            ("E2/12", PHI_I, DerivationTable(
                thetaX=(80 * X * Y - X ** 5) * Fraction(1, 24),
                thetaY=(5 * X ** 4 * Y - 16 * Y ** 2) * Fraction(1, 6),
                psi=E4_POLY * Fraction(-1, 144))),
            ("E2/12 - (X^4 + 16Y)/42", PHI_Z7, DerivationTable(
                thetaX=(5 * X ** 5 - 592 * X * Y) * Fraction(-1, 168),
                thetaY=(37 * X ** 4 * Y - 80 * Y ** 2) * Fraction(1, 42),
                psi=(25 * X ** 8 + 15584 * X ** 4 * Y + 6400 * Y ** 2) * Fraction(-1, 7056)))):
        table = serre_derivation(phi, verify=False)
        phi_series = to_qseries(phi_poly(phi), N)
        for name, generator, series, weight in (("thetaX", X, theta_s, Fraction(1, 2)), ("thetaY", Y, f2_s, 2)):
            record(f"phi={label}: {name} = {getattr(expected, name)}",
                   getattr(table, name) == getattr(expected, name)
                   and to_qseries(getattr(expected, name), N) == qseries.D(series) - phi_series * series * weight)
        record(f"phi={label}: psi = {expected.psi}",
               table.psi == expected.psi
               and to_qseries(expected.psi, N) == qseries.D(phi_series) - phi_series * phi_series)
    h52 = qseries.H52(N)
    record("120 H_5/2 = 1 - 10q - 70q^4 - 48q^5 - ... - 240q^13",
           [h52.coefficient(e) * 120 for e in range(len(PRINTED_H52))] == PRINTED_H52)
    return results
