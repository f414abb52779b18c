"""
A high precision floating point oracle for values of modular forms at CM points.

Every function takes its precision (decimal digits) explicitly and works GUARD digits beyond it inside
`mpmath.workdps`; the global mpmath context is never changed.
"""
import logging
from collections import namedtuple
from fractions import Fraction
from typing import Any, List, Optional, Tuple, Union

import mpmath
import sympy
from sympy.ntheory.continued_fraction import continued_fraction_convergents, continued_fraction_iterator
from sympy.parsing.sympy_parser import (implicit_multiplication_application, parse_expr,
                                        standard_transformations)

from cmtaylor import qseries
from cmtaylor.arith import QuadRat
from cmtaylor.qseries import QSeries
from cmtaylor.quasimod import PhiSpec, WeightedPoly
from cmtaylor.taylor import phi_for_point
from cmtaylor.utils import CMTaylorError, log_info


log = logging.getLogger(__name__)

DEFAULT_PRECISION = 128
GUARD = 10

PeriodValue = namedtuple("PeriodValue", "D omega h_prime trace")

# h'(D) = h(D) / (w(D)/2) for the class number one discriminants
H_PRIME = {-3: Fraction(1, 3), -4: Fraction(1, 2), -7: Fraction(1), -8: Fraction(1), -11: Fraction(1),
           -19: Fraction(1), -43: Fraction(1), -67: Fraction(1), -163: Fraction(1)}

NAMED_POINTS = {
    "i": "i",
    "i/2": "i/2",
    "z7": "(1 + sqrt(7)*i)/2",
}


class TruncationError(CMTaylorError):
    pass

class RecognitionError(CMTaylorError):
    pass

class UnsupportedDiscriminantError(CMTaylorError):
    pass

def to_mp(x: Any):
    """Convert an exact value (int, Fraction, QuadRat) or number to an mpmath number at the current precision."""
    if isinstance(x, QuadRat):
        return to_mp(x.a) + to_mp(x.b) * mpmath.sqrt(x.d)
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpmathify(x)

def gamma(x: Any, prec: int = DEFAULT_PRECISION):
    with mpmath.workdps(prec + GUARD):
        x = to_mp(x)
        if x <= 0 and x == mpmath.floor(x):
            raise CMTaylorError(f"gamma has a pole at {x}")
        return mpmath.gamma(x)

def kronecker(D: int, j: int) -> int:
    """The Kronecker symbol (D/j) for j >= 1."""
    result = 1
    e = sympy.multiplicity(2, j) if j % 2 == 0 else 0
    if e:
        if D % 2 == 0:
            return 0
        result = (1 if D % 8 in (1, 7) else -1) ** e
    m = j >> e
    if m > 1:
        result *= sympy.jacobi_symbol(D % m, m)
    return result

def omega_D(D: int, prec: int = DEFAULT_PRECISION) -> PeriodValue:
    """The Chowla-Selberg period (2 pi |D|)^(-1/2) prod_j Gamma(j/|D|)^(chi_D(j) / (2 h'(D)))."""
    if D not in H_PRIME:
        raise UnsupportedDiscriminantError(f"discriminant {D} is not supported (need one of {sorted(H_PRIME)})")
    h_prime = H_PRIME[D]
    n = abs(D)
    with mpmath.workdps(prec + GUARD):
        product = mpmath.mpf(1)
        factors = []
        for j in range(1, n):
            chi = kronecker(D, j)
            if chi:
                product *= gamma(Fraction(j, n), prec) ** chi
                factors.append(f"Gamma({j}/{n})^{chi}")
        omega = product ** (1 / (2 * to_mp(h_prime))) / mpmath.sqrt(2 * mpmath.pi * n)
    trace = f"(2*pi*{n})^(-1/2) * ({' * '.join(factors)})^(1/{2 * h_prime})"
    return PeriodValue(D, omega, h_prime, trace)

def cm_point(name: str, prec: int = DEFAULT_PRECISION):
    """i, i/2, z7 = (1 + i sqrt 7)/2, or any expression in i such as 0.5+0.8i or (1+sqrt(7)i)/2."""
    text = NAMED_POINTS.get(name, name)
    try:
        expr = parse_expr(text, local_dict={"i": sympy.I, "sqrt": sympy.sqrt},
                          transformations=standard_transformations + (implicit_multiplication_application,))
        expr = expr.subs({f: sympy.Rational(str(f)) for f in expr.atoms(sympy.Float)})
        value = sympy.N(expr, prec + GUARD)
        re, im = sympy.re(value), sympy.im(value)
    except (sympy.SympifyError, SyntaxError, TypeError) as e:
        raise CMTaylorError(f"cannot parse point '{name}'") from e
    with mpmath.workdps(prec + GUARD):
        tau0 = mpmath.mpc(str(re), str(im))
    if tau0.imag <= 0:
        raise CMTaylorError(f"point {name} is not in the upper half plane")
    return tau0

def order_for(tau0, prec: int = DEFAULT_PRECISION, growth: int = 8) -> int:
    """A truncation order N with |q|^N N^growth below 10^-(prec + GUARD) at tau0."""
    with mpmath.workdps(30):
        y = mpmath.im(tau0)
        target = -(prec + GUARD) * mpmath.log(10)
        N = int(mpmath.ceil(-target / (2 * mpmath.pi * y)))
        while -2 * mpmath.pi * y * N + growth * mpmath.log(N) > target:
            N += 1
    return N

def _nome(tau0, exponent: Fraction):
    return mpmath.exp(2j * mpmath.pi * to_mp(exponent) * tau0)

def eval_qseries(f: QSeries, tau0, prec: int = DEFAULT_PRECISION):
    """Sum of c q^alpha at q = e^(2 pi i tau0), refusing truncations too short for the precision."""
    with mpmath.workdps(prec + GUARD):
        tau0 = mpmath.mpmathify(tau0)
        if tau0.imag <= 0:
            raise CMTaylorError(f"{tau0} is not in the upper half plane")
        coeffs = [to_mp(c) for c in f.coeffs]
        q = _nome(tau0, Fraction(1))
        largest = max([abs(c) for c in coeffs] + [mpmath.mpf(1)])
        tail = largest * (f.order + 1) ** 2 * abs(q) ** (f.order + to_mp(f.offset)) / (1 - abs(q))
        if tail > mpmath.mpf(10) ** (-prec):
            raise TruncationError(f"truncation order {f.order} is too short for {prec} digits at {tau0}")
        total = mpmath.mpc(0)
        power = _nome(tau0, f.offset)
        for c in coeffs:
            if c:
                total += c * power
            power *= q
        return total

def _raise_parts(f: QSeries, k2: int, n: int) -> List[Optional[QSeries]]:
    """The q-series coefficients g_r of the n-fold raising of f written as sum g_r Y^r with Y = -1/(4 pi y)."""
    parts: List[Optional[QSeries]] = [f]
    for j in range(n):
        w = Fraction(k2, 2) + 2 * j
        raised: List[Optional[QSeries]] = [None] * (len(parts) + 1)
        for r, g in enumerate(parts):
            if g is None:
                continue
            # d_w (g Y^r) = (Dg) Y^r + (w - r) g Y^(r+1), using DY = -Y^2
            terms = [(r, qseries.D(g))]
            if w != r:
                terms.append((r + 1, g * (w - r)))
            for s, h in terms:
                raised[s] = h if raised[s] is None else raised[s] + h
        parts = raised
    return parts

def raising(f: QSeries, k2: int, n: int, tau0, prec: int = DEFAULT_PRECISION):
    """The iterated raising operator d^n f(tau0), d_w = D - w/(4 pi y), by carrying a polynomial in Y."""
    with mpmath.workdps(prec + GUARD):
        tau0 = mpmath.mpmathify(tau0)
        Y = -1 / (4 * mpmath.pi * tau0.imag)
        total = mpmath.mpc(0)
        for r, g in enumerate(_raise_parts(f, k2, n)):
            if g is not None:
                total += eval_qseries(g, tau0, prec) * Y ** r
    log_info(action="Evaluated raising operator", k2=k2, n=n, tau0=mpmath.nstr(tau0, 15))
    return total

def _basic_values(tau0, prec: int, N: Optional[int] = None):
    N = N or order_for(tau0, prec)
    with mpmath.workdps(prec + GUARD):
        th = eval_qseries(qseries.theta(N), tau0, prec)
        f2 = eval_qseries(qseries.F2(N), tau0, prec)
        e2star = eval_qseries(qseries.E2(N), tau0, prec) - 3 / (mpmath.pi * mpmath.im(tau0))
    return th, f2, e2star

def almost_holo_value(P: WeightedPoly, tau0, prec: int = DEFAULT_PRECISION, N: Optional[int] = None):
    """Substitute Theta(tau0), F2(tau0) and E2*(tau0) = E2(tau0) - 3/(pi y0) for X, Y, Z."""
    th, f2, e2star = _basic_values(tau0, prec, N)
    with mpmath.workdps(prec + GUARD):
        total = mpmath.mpc(0)
        for (i, j, l), c in P.sorted_terms():
            total += to_mp(c) * th ** i * f2 ** j * e2star ** l
        return total

def singular_modulus(tau0, prec: int = DEFAULT_PRECISION):
    """t0 = F2(tau0) / Theta(tau0)^4."""
    th, f2, _ = _basic_values(tau0, prec)
    with mpmath.workdps(prec + GUARD):
        return f2 / th ** 4

def e2star_ratio(tau0, prec: int = DEFAULT_PRECISION):
    th, _, e2star = _basic_values(tau0, prec)
    with mpmath.workdps(prec + GUARD):
        return e2star / th ** 4

def _real(x, prec: int):
    x = mpmath.mpmathify(x)
    if isinstance(x, mpmath.mpc):
        if abs(x.imag) > mpmath.mpf(10) ** (-(prec // 2)) * max(1, abs(x.real)):
            raise RecognitionError(f"{mpmath.nstr(x, 20)} is not real")
        return x.real
    return x

def recognize_quad(x, d: int = 1, denom_bound: int = 10 ** 6, prec: int = DEFAULT_PRECISION,
                   max_coeff: int = 10 ** 30) -> QuadRat:
    """
    Find a + b sqrt(d) equal to x, by an integer relation among (x, 1, sqrt(d)) at half the digits and
    confirmation at three quarters of them.
    """
    with mpmath.workdps(prec):
        x = _real(x, prec)
        basis = [x, mpmath.mpf(1)] + ([mpmath.sqrt(d)] if d != 1 else [])
        relation = mpmath.pslq(basis, tol=mpmath.mpf(10) ** (-(prec // 2)), maxcoeff=max_coeff, maxsteps=10 ** 6)
        if relation is None or relation[0] == 0 or abs(relation[0]) > denom_bound:
            raise RecognitionError(f"{mpmath.nstr(x, 20)} is not recognized in Q(sqrt({d}))")
        c0, c1 = relation[0], relation[1]
        c2 = relation[2] if d != 1 else 0
        value = QuadRat(Fraction(-c1, c0), Fraction(-c2, c0), d)
        if abs(to_mp(value) - x) > mpmath.mpf(10) ** (-(3 * prec // 4)) * max(1, abs(x)):
            raise RecognitionError(f"relation {relation} for {mpmath.nstr(x, 20)} is not confirmed")
    return value

def rational_reconstruct(x, den_bound: int = 10 ** 12, prec: int = DEFAULT_PRECISION) -> Fraction:
    """The first continued fraction convergent of x within 10^-(prec/2), with denominator at most den_bound."""
    with mpmath.workdps(prec):
        x = _real(x, prec)
        exact = sympy.Rational(mpmath.nstr(x, prec, min_fixed=-mpmath.inf, max_fixed=mpmath.inf))
        tolerance = mpmath.mpf(10) ** (-(prec // 2)) * max(1, abs(x))
        for convergent in continued_fraction_convergents(continued_fraction_iterator(exact)):
            if convergent.q > den_bound:
                break
            if abs(mpmath.mpf(convergent.p) / convergent.q - x) < tolerance:
                return Fraction(int(convergent.p), int(convergent.q))
    raise RecognitionError(f"no convergent of {mpmath.nstr(x, 20)} with denominator <= {den_bound} matches")

def discover_phi(tau0, d: int = 1, prec: int = DEFAULT_PRECISION) -> Tuple[QuadRat, PhiSpec]:
    """Recognize t0 = F2/Theta^4 and E2*/Theta^4 at tau0 in Q(sqrt(d)) and solve for the phi vanishing there."""
    t0 = recognize_quad(singular_modulus(tau0, prec), d, prec=prec)
    r = recognize_quad(e2star_ratio(tau0, prec), d, prec=prec)
    phi = phi_for_point(t0, r)
    log_info(action="Discovered phi", tau0=mpmath.nstr(tau0, 15), t0=str(t0), r=str(r), phi=str(phi))
    return t0, phi

def romik_period(prec: int = DEFAULT_PRECISION):
    """Gamma(1/4)^8 / (128 pi^4)."""
    with mpmath.workdps(prec + GUARD):
        return gamma(Fraction(1, 4), prec) ** 8 / (128 * mpmath.pi ** 4)

def period_i(prec: int = DEFAULT_PRECISION, unit_power: int = 4):
    """eps^unit_power pi Omega_-4^2 with eps = 1 + sqrt(2); unit_power 0 gives pi Omega_-4^2."""
    with mpmath.workdps(prec + GUARD):
        eps = 1 + mpmath.sqrt(2)
        return eps ** unit_power * mpmath.pi * omega_D(-4, prec).omega ** 2

def period_z7(prec: int = DEFAULT_PRECISION):
    """(Gamma(1/7) Gamma(2/7) Gamma(4/7))^2 / (32 pi^3)."""
    with mpmath.workdps(prec + GUARD):
        g = gamma(Fraction(1, 7), prec) * gamma(Fraction(2, 7), prec) * gamma(Fraction(4, 7), prec)
        return g ** 2 / (32 * mpmath.pi ** 3)

def bridge_scale(tau0, period, prec: int = DEFAULT_PRECISION, stride: int = 1):
    """(Theta(tau0)^4 4 pi y0)^stride / period: the factor kappa turning p_n(t0) into normalized coefficients."""
    th, _, _ = _basic_values(tau0, prec)
    with mpmath.workdps(prec + GUARD):
        return (th ** 4 * 4 * mpmath.pi * mpmath.im(tau0)) ** stride / period

def normalized_coefficient(f: QSeries, k2: int, n: int, tau0, period, prefactor: Union[int, Fraction, QuadRat] = 1,
                           prec: int = DEFAULT_PRECISION, stride: int = 1):
    """d^(stride n) f(tau0) (4 pi y0)^(stride n) / (period^n Theta(tau0)^k2), times prefactor."""
    th, _, _ = _basic_values(tau0, prec)
    value = raising(f, k2, stride * n, tau0, prec)
    with mpmath.workdps(prec + GUARD):
        y0 = mpmath.im(tau0)
        return value * (4 * mpmath.pi * y0) ** (stride * n) / (period ** n * th ** k2) * to_mp(prefactor)

def eq11_factor(prec: int = DEFAULT_PRECISION):
    """Theta(z7)^4 / (sqrt((8 + 3 sqrt 7)/4) Omega_-7^2); 1 when the closed forms at z7 hold as displayed."""
    tau0 = cm_point("z7", prec)
    th, _, _ = _basic_values(tau0, prec)
    with mpmath.workdps(prec + GUARD):
        return th ** 4 / (mpmath.sqrt((8 + 3 * mpmath.sqrt(7)) / 4) * omega_D(-7, prec).omega ** 2)
