"""
Eventual quasiperiodicity of coefficient sequences modulo prime powers.

A quasiperiod with multiplier is a pattern s(n + l) = b s(n) mod p^A for all n >= mu, written
{s(0), ..., s(mu-1), \\overline{s(mu), ..., s(mu+l-1)}^b}.  Plain periodicity is b = 1.
"""
import logging
from collections import namedtuple
from typing import List, Optional, Sequence, Tuple, Union

from cmtaylor import quasimod
from cmtaylor.arith import QuadRat, ResidueQuad, multiplicative_order, reduce_mod, vp
from cmtaylor.quasimod import WeightedPoly
from cmtaylor.taylor import CoeffSeq, TaylorPreset, dehomogenize, taylor_values
from cmtaylor.utils import CMTaylorError, log_info


log = logging.getLogger(__name__)

PeriodicityReport = namedtuple("PeriodicityReport", "p A preperiod period multiplier cycle horizon")
TransferResult = namedtuple("TransferResult", "n1 n2 scale lhs rhs valuation holds")

Residues = Sequence[ResidueQuad]


def reduce_sequence(seq: CoeffSeq, p: int, A: int) -> List[ResidueQuad]:
    """Reduce exact values componentwise; sequences already reduced modulo p^B, B >= A, are reduced further."""
    if seq.modulus is not None:
        q, B = seq.modulus
        if q != p or B < A:
            raise CMTaylorError(f"a sequence known modulo {q}^{B} cannot be reduced modulo {p}^{A}")
        return [ResidueQuad(v.a, v.b, p, A, v.d) for v in seq.values]
    return [reduce_mod(v, p, A) for v in seq.values]

def _multiplier(residues: Residues, mu: int, ell: int) -> Optional[ResidueQuad]:
    for n in range(mu, len(residues) - ell):
        if residues[n].is_unit():
            b = residues[n + ell] / residues[n]
            return b if b.is_unit() else None
    # no unit to solve from; only the all-zero tail is consistent
    return residues[0] ** 0

def _holds(residues: Residues, mu: int, ell: int, b: ResidueQuad) -> Optional[int]:
    """The first n >= mu breaking s(n + ell) = b s(n), or None."""
    for n in range(mu, len(residues) - ell):
        if residues[n + ell] != b * residues[n]:
            return n
    return None

def detect_quasiperiod(residues: Residues, min_repeats: int = 3) -> Optional[PeriodicityReport]:
    """
    The lexicographically least (mu, l) with s(n + l) = b s(n) for every mu <= n < N - l, a unit b, and at least
    min_repeats full periods observed; None when there is none within the horizon.
    """
    N = len(residues)
    if N < 8:
        raise CMTaylorError(f"a horizon of {N} is too short to detect periodicity")
    p, A = residues[0].p, residues[0].A
    for mu in range(N):
        for ell in range(1, (N - mu) // min_repeats + 1):
            b = _multiplier(residues, mu, ell)
            if b is not None and _holds(residues, mu, ell, b) is None:
                report = PeriodicityReport(p, A, mu, ell, b, tuple(residues[mu:mu + ell]), N)
                log_info(action="Detected quasiperiod", p=p, A=A, preperiod=mu, period=ell, multiplier=str(b),
                         horizon=N)
                return report
    log_info(action="No quasiperiod found", p=p, A=A, horizon=N)
    return None

def verify_report(seq: Union[CoeffSeq, Residues], report: PeriodicityReport) -> Tuple[bool, Optional[int]]:
    residues = reduce_sequence(seq, report.p, report.A) if isinstance(seq, CoeffSeq) else seq
    mu, ell = report.preperiod, report.period
    if tuple(residues[mu:mu + ell]) != tuple(report.cycle):
        return False, mu
    first = _holds(residues, mu, ell, report.multiplier)
    return first is None, first

def unrolled_period(report: PeriodicityReport) -> int:
    """The plain period l * ord(b)."""
    return report.period * multiplicative_order(report.multiplier)

def fermat_hint(p: int, A: int, extra_order: int = 1) -> int:
    return (p - 1) * p ** (A - 1) * extra_order

def eventual_vanishing(residues: Residues) -> Optional[int]:
    """The first index from which every residue is zero, or None when the last one is not."""
    n = len(residues)
    while n > 0 and residues[n - 1].is_zero():
        n -= 1
    return n if n < len(residues) else None

def format_overline(report: PeriodicityReport, prefix: Residues = ()) -> str:
    head = "".join(f"{r}, " for r in prefix)
    exponent = "" if report.multiplier == 1 else f"^{report.multiplier}"
    return f"{{{head}\\overline{{{', '.join(str(r) for r in report.cycle)}}}{exponent}}} (mod {report.p}^{report.A})"

def _valuation(x: QuadRat, p: int) -> Union[int, float]:
    components = [c for c in (x.a, x.b) if c != 0]
    return min(vp(c, p) for c in components) if components else float("inf")

def transferred_congruence(preset: TaylorPreset, P: WeightedPoly, p: int, A: int, n1: int) -> TransferResult:
    """
    Compare p_{n1}(t0) with p_{n2}(t0) e^(-2 p^A), n2 = n1 + (p-1) p^A and e = E_{p-1}/Theta^(2(p-1)) at t0: the
    values at t0 of the Fermat step D^{n2} = D^{n1} mod p^(A+1) after normalizing by omega^(p-1) = E_{p-1}(tau0).
    A form with p in its coefficient denominators is first scaled by the power of p clearing them.
    """
    if p < 5:
        raise CMTaylorError(f"the Fermat step needs E_{p - 1}, a modular form, so p >= 5 (got {p})")
    if P.is_zero():
        raise CMTaylorError("the zero form has no transferred congruence")
    scale = p ** max(0, -min(vp(c, p) for c in P.terms.values()))
    if scale > 1:
        log.warning("Scaling %s by %d to make it %d-integral", P, scale, p)
        P = P * scale
    n2 = n1 + (p - 1) * p ** A
    values = taylor_values(preset, P, n2 + 1)
    e_poly = dehomogenize(quasimod.eisenstein_poly(p - 1), 2 * (p - 1))
    e = QuadRat(0)
    for c in reversed(e_poly):
        e = e * preset.t_eval + c
    lhs, rhs = values[n1], values[n2] * e ** (-2 * p ** A)
    valuation = _valuation(lhs - rhs, p)
    result = TransferResult(n1, n2, scale, lhs, rhs, valuation, valuation >= A + 1)
    log_info(action="Checked transferred congruence", preset=preset.label, p=p, A=A, n1=n1, n2=n2,
             scale=scale, valuation=valuation)
    return result
