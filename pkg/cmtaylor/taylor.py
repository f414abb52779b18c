"""
Taylor coefficients at CM points through the one-variable recursion

    p_{-1} = 0,  p_0(t) = P(X, tX^4) / X^(2k),
    p_{n+1} = (2k + 4n) A(t) p_n - B(t) p_n' + n(n + k - 1) C(t) p_{n-1},

so that the iterated modified Serre derivative of f = P(Theta, F2) equals Theta^(4n+2k) p_n(F2/Theta^4), and
d^n f(tau0) = p_n(t0) Theta(tau0)^(4n+2k) at a CM point where the completion of phi vanishes.

Two evaluation modes: exact (integer polynomials over a common denominator) and modular (integer coefficients
reduced modulo p^A at every step, p coprime to the recursion denominators).
"""
import logging
from collections import namedtuple
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from cmtaylor import quasimod
from cmtaylor.arith import NonIntegralError, QuadRat, ResidueQuad, reduce_mod
from cmtaylor.quasimod import DerivationTable, PhiSpec, WeightedPoly
from cmtaylor.utils import CMTaylorError, log_info


log = logging.getLogger(__name__)

UniPoly = Tuple[Fraction, ...]
Modulus = Tuple[int, int]
Value = Union[QuadRat, ResidueQuad]

ScaledPoly = namedtuple("ScaledPoly", "nums den")


class RecursionShapeError(CMTaylorError):
    pass

def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b

def _trim(coeffs: Sequence) -> list:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs

def dehomogenize(P: WeightedPoly, k2: int) -> UniPoly:
    """p(t) = P(X, tX^4) / X^(2k) for P homogeneous of weight k = k2/2 in X and Y."""
    coeffs: List[Fraction] = []
    for (i, j, l), c in P.terms.items():
        if l or i + 4 * j != k2:
            raise RecursionShapeError(f"{P} is not an X,Y-polynomial homogeneous of weight {Fraction(k2, 2)}")
        coeffs.extend([Fraction(0)] * (j + 1 - len(coeffs)))
        coeffs[j] += c
    return tuple(_trim(coeffs))

def _coefficient(p: UniPoly, i: int) -> Fraction:
    return p[i] if i < len(p) else Fraction(0)

def derive_recursion(table: DerivationTable) -> Tuple[UniPoly, UniPoly, UniPoly]:
    """
    Read A, B, C off a Serre derivation table: thetaX = X^5 (a + bt), thetaY = X^8 (ct + et^2) and
    psi = X^8 C(t) give A = a + bt, B = -((c - 4a)t + (e - 4b)t^2) and C.  B is always 16t^2 - t.
    """
    A = dehomogenize(table.thetaX, 5)
    theta_y = dehomogenize(table.thetaY, 8)
    C = dehomogenize(table.psi, 8)
    a, b = _coefficient(A, 0), _coefficient(A, 1)
    g, c, e = (_coefficient(theta_y, i) for i in range(3))
    if g != 0 or c - 4 * a != 1 or e - 4 * b != -16 or len(A) > 2 or len(theta_y) > 3 or len(C) > 3:
        raise RecursionShapeError(f"derivation table {table} does not give B(t) = 16t^2 - t")
    B = (Fraction(0), -(c - 4 * a), -(e - 4 * b))
    return A, B, C

def _common_denominator(p: Sequence[Fraction]) -> ScaledPoly:
    den = 1
    for c in p:
        den = _lcm(den, Fraction(c).denominator)
    return ScaledPoly([int(Fraction(c) * den) for c in p], den)

def _mul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out

def _derivative(a: Sequence[int]) -> List[int]:
    return [i * a[i] for i in range(1, len(a))]

def _add(*polys: Sequence[int]) -> List[int]:
    out = [0] * max((len(p) for p in polys), default=0)
    for p in polys:
        for i, c in enumerate(p):
            out[i] += c
    return out

def _scaled(p: Sequence[int], s: int) -> List[int]:
    return [c * s for c in p]

def _exact_recursion(A: UniPoly, B: UniPoly, C: UniPoly, p0: UniPoly, k2: int) -> Iterator[ScaledPoly]:
    a, b, c = (_common_denominator(q) for q in (A, B, C))
    previous, current = ScaledPoly([], 1), _common_denominator(p0)
    n = 0
    while True:
        yield current
        m = k2 + 4 * n
        cn = n * (2 * n + k2 - 2)  # = 2 n (n + k - 1)
        den1, den2, den3 = a.den * current.den, b.den * current.den, 2 * c.den * previous.den
        den = _lcm(_lcm(den1, den2), den3)
        nums = _add(_scaled(_mul(a.nums, current.nums), m * (den // den1)),
                    _scaled(_mul(b.nums, _derivative(current.nums)), -(den // den2)),
                    _scaled(_mul(c.nums, previous.nums), cn * (den // den3)))
        g = den
        for x in nums:
            g = gcd(g, x)
            if g == 1:
                break
        previous, current = current, ScaledPoly(_trim([x // g for x in nums]), den // g)
        n += 1

def _to_residue(x: Fraction, modulus: Modulus) -> int:
    return reduce_mod(x, *modulus).a

def _modular_recursion(A: UniPoly, B: UniPoly, C: UniPoly, p0: UniPoly, k2: int,
                       modulus: Modulus) -> Iterator[List[int]]:
    p, e = modulus
    M = p ** e
    a, b, c, current = ([_to_residue(Fraction(x), modulus) for x in q] for q in (A, B, C, p0))
    half = _to_residue(Fraction(1, 2), modulus)
    previous: List[int] = []
    n = 0
    while True:
        yield current
        m = k2 + 4 * n
        cn = n * (2 * n + k2 - 2) * half
        nums = _add(_scaled(_mul(a, current), m), _scaled(_mul(b, _derivative(current)), -1),
                    _scaled(_mul(c, previous), cn))
        previous, current = current, [x % M for x in nums]
        n += 1

def _horner(nums: Sequence[int], x):
    acc = 0 * x
    for c in reversed(nums):
        acc = acc * x + c
    return acc

@dataclass(frozen=True)
class TaylorPreset:
    label: str
    phi: PhiSpec
    A: UniPoly
    B: UniPoly
    C: UniPoly
    t_eval: QuadRat
    kappa: Optional[QuadRat]
    stride: int = 1
    prefactor: QuadRat = QuadRat(1)
    prefactor_note: str = ""
    form: str = "theta"
    k2: int = 1

@dataclass
class CoeffSeq:
    preset: str
    form: str
    values: List[Value] = field(default_factory=list)
    n_start: int = 0
    modulus: Optional[Modulus] = None

def build_preset(label: str, phi: PhiSpec, t_eval: QuadRat, kappa: Optional[QuadRat], stride: int = 1,
                 prefactor: QuadRat = QuadRat(1), prefactor_note: str = "", form: str = "theta") -> TaylorPreset:
    A, B, C = derive_recursion(quasimod.serre_derivation(phi))
    _, k2 = form_poly(form)
    return TaylorPreset(label, phi, A, B, C, t_eval, kappa, stride, prefactor, prefactor_note, form, k2)

@lru_cache(maxsize=None)
def get_preset(label: str) -> TaylorPreset:
    sqrt2, sqrt7 = QuadRat(0, 1, 2), QuadRat(0, 1, 7)
    if label == "i":
        return build_preset("i", quasimod.PHI_I, (17 - 12 * sqrt2) / 16, 2 * (3 + 2 * sqrt2),
                            prefactor_note="Phi = pi*Omega_-4^2")
    if label == "i-printed":
        return build_preset("i-printed", quasimod.PHI_I, (17 + 12 * sqrt2) / 16, 2 * (3 - 2 * sqrt2),
                            prefactor_note="Galois conjugate of the Phi = pi*Omega_-4^2 normalization")
    if label == "z7":
        return build_preset("z7", quasimod.PHI_Z7, -(127 - 48 * sqrt7) / 16, None,
                            prefactor=480 * (8 + 3 * sqrt7), form="h52",
                            prefactor_note="Theta(z7)^5/(480*eps), eps = 8+3*sqrt(7); kappa unresolved")
    if label == "romik":
        return build_preset("romik", quasimod.PHI_ROMIK, QuadRat(Fraction(1, 32)), QuadRat(32), stride=2,
                            prefactor_note="Phi = Gamma(1/4)^8/(128*pi^4), coefficients of w^(2n)/(2n)!")
    raise CMTaylorError(f"unknown preset '{label}'")

PRESETS = ("i", "i-printed", "z7", "romik")

def form_poly(name: str) -> Tuple[WeightedPoly, int]:
    """A named form on Gamma0(4) as a polynomial in X = Theta, Y = F2, with twice its weight."""
    X, Y = quasimod.X, quasimod.Y
    if name == "theta":
        P = X
    elif name == "f2":
        P = Y
    elif name == "h52":
        P = (X ** 5 - 20 * X * Y) * Fraction(1, 120)
    elif name.startswith("poly:"):
        P = quasimod.parse_poly(name[len("poly:"):])
    else:
        raise CMTaylorError(f"unknown form '{name}'")
    weight = P.weight()
    if not P.is_z_free() or (2 * weight).denominator != 1:
        raise CMTaylorError(f"form '{name}' is not a homogeneous polynomial in X and Y")
    return P, int(2 * weight)

def phi_for_point(t0: QuadRat, r: QuadRat) -> PhiSpec:
    """
    The phi = E2/12 + a4 Theta^4 + aY F2 whose completion vanishes where F2/Theta^4 = t0 and E2*/Theta^4 = r,
    i.e. a4 + aY t0 = -r/12 with rational a4, aY.
    """
    t0, s = QuadRat(0) + t0, -(QuadRat(0) + r) / 12
    if t0.is_rational:
        if not s.is_rational:
            raise CMTaylorError(f"no rational phi solves a4 + aY*{t0} = {s}")
        return PhiSpec(s.a, Fraction(0))
    if not s.is_rational and s.d != t0.d:
        raise CMTaylorError(f"{t0} and {s} lie in different quadratic fields")
    aY = s.b / t0.b
    return PhiSpec(s.a - aY * t0.a, aY)

def _recursion(preset: TaylorPreset, f: WeightedPoly, modulus: Optional[Modulus] = None):
    k2 = int(2 * f.weight())
    p0 = dehomogenize(f, k2)
    log_info(action="Running Taylor recursion", preset=preset.label, form=str(f), mode=str(modulus or "exact"))
    if modulus is None:
        return _exact_recursion(preset.A, preset.B, preset.C, p0, k2)
    return _modular_recursion(preset.A, preset.B, preset.C, p0, k2, modulus)

def run_recursion(preset: TaylorPreset, f: WeightedPoly, n: int) -> UniPoly:
    """The exact polynomial p_n(t)."""
    for m, scaled in enumerate(_recursion(preset, f)):
        if m == n:
            return tuple(Fraction(c, scaled.den) for c in scaled.nums)
    raise AssertionError("unreachable")

def taylor_values(preset: TaylorPreset, f: WeightedPoly, count: int, modulus: Optional[Modulus] = None,
                  point: Optional[QuadRat] = None) -> List[Value]:
    """p_n(t_eval) for n = 0, ..., count-1, exactly or modulo p^A."""
    point = preset.t_eval if point is None else point
    values: List[Value] = []
    if count <= 0:
        return values
    if modulus is None:
        for scaled in _recursion(preset, f):
            values.append(_horner(scaled.nums, point) / scaled.den)
            if len(values) == count:
                break
    else:
        x = reduce_mod(point, *modulus)
        for nums in _recursion(preset, f, modulus):
            values.append(_horner(nums, x))
            if len(values) == count:
                break
    return values

def taylor_value(preset: TaylorPreset, f: WeightedPoly, n: int) -> QuadRat:
    """p_n(t_eval), so that d^n f(tau0) = p_n(t0) Theta(tau0)^(4n+2k)."""
    return taylor_values(preset, f, n + 1)[n]

def normalized_sequence(preset: TaylorPreset, f: WeightedPoly, count: int, modulus: Optional[Modulus] = None,
                        kappa: Optional[QuadRat] = None, form_label: str = "") -> CoeffSeq:
    """value(n) = p_{stride n}(t_eval) kappa^n prefactor, for n = 0, ..., count-1."""
    kappa = kappa if kappa is not None else preset.kappa
    if kappa is None:
        log.warning("Preset %s has no resolved kappa; values are not normalized by kappa^n", preset.label)
        kappa = QuadRat(1)
    label = form_label or str(f)
    if modulus is not None:
        try:
            values = _normalize(preset, f, count, modulus, reduce_mod(kappa, *modulus),
                                reduce_mod(preset.prefactor, *modulus))
            return CoeffSeq(preset.label, label, values, 0, modulus)
        except NonIntegralError as e:
            log.warning("Modular recursion unavailable (%s); reducing exact values instead", e)
    values = _normalize(preset, f, count, None, kappa, preset.prefactor)
    if modulus is not None:
        values = [reduce_mod(v, *modulus) for v in values]
    return CoeffSeq(preset.label, label, values, 0, modulus)

def _normalize(preset: TaylorPreset, f: WeightedPoly, count: int, modulus: Optional[Modulus], scale, prefactor):
    raw = taylor_values(preset, f, preset.stride * (count - 1) + 1, modulus)[::preset.stride]
    values = []
    power = scale ** 0
    for value in raw:
        values.append(value * power * prefactor)
        power = power * scale
    return values
