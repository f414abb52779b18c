"""
Recompute the published examples and print them next to the printed values.

Rows are PASS when the recomputation agrees, FAIL when it does not, and DISCREPANCY where the printed data follows
a convention the computation cannot confirm; the computed value (or the oracle's recognition of it) is shown.
"""
import logging
from fractions import Fraction

import mpmath

from cmtaylor import numeric, qseries, quasimod
from cmtaylor.arith import QuadRat, reduce_mod
from cmtaylor.cli.report import DISCREPANCY, FAIL, Report
from cmtaylor.congruence import detect_quasiperiod, eventual_vanishing, format_overline, reduce_sequence
from cmtaylor.taylor import build_preset, form_poly, get_preset, normalized_sequence, taylor_value, taylor_values
from cmtaylor.utils import CMTaylorError


log = logging.getLogger(__name__)

EXAMPLES = ("ex4.2", "ex4.4", "remark3.3", "romik", "scherer")

SQRT2, SQRT7 = QuadRat(0, 1, 2), QuadRat(0, 1, 7)
EPS = 1 + SQRT2
PRINTED_C = [QuadRat(1), EPS, QuadRat(1), -3 * EPS, QuadRat(17), 9 * EPS, -111 * EPS, 2373 * EPS, QuadRat(12513),
             86481 * EPS, QuadRat(-146079), -9806643 * EPS]
# (preperiod, period, multiplier) of c(n) modulo p^A
PRINTED_C_PATTERNS = {(5, 1): (1, 2, 2), (5, 2): (1, 10, 7), (13, 1): (1, 10, 7)}
FIFTY_SEVEN = "c(n) = 57 c(n+50) mod 5^3 for 11 <= n <= 150"
# printed data the recomputation contradicts, and the evidence reported with it
PRINTED_SLIPS = {
    "c(6)": "c(n) is rational at every even n and a rational multiple of eps at every odd n; the recursion gives "
            "-111 and so does the oracle",
    "c(n) mod 13^1": "the printed mod 13 pattern (l=10, b=7) is the mod 25 one; the recomputed period is 6",
    FIFTY_SEVEN: "c(n+10) = 7 c(n) mod 25 gives c(n+50) = 7^5 c(n) = 57 c(n) mod 125; the printed direction would "
                 "need (57^2 - 1) c(n) = 0 mod 125, impossible for a unit c(n)",
}

PRINTED_D = [72 - 3 * SQRT7, -265 - 60 * SQRT7, 1160 + 1105 * SQRT7, -30705 - 6300 * SQRT7,
             366600 + 130485 * SQRT7, -5323465 - 2715900 * SQRT7, 146660040 + 38437065 * SQRT7,
             -2376737265 - 1220829660 * SQRT7, 78627988680 + 24402981165 * SQRT7]
PRINTED_D_NORMS = [3 ** 2 * 569, 5 ** 2 * 1801, -3 ** 3 * 5 ** 2 * 47 * 227, 3 ** 2 * 5 ** 2 * 193 * 15313,
                   3 ** 3 * 5 ** 2 * 22535131, -5 ** 2 * 7 * 401 * 331934593, 3 ** 4 * 5 ** 2 * 5514721764001,
                   -3 ** 2 * 5 ** 2 * 7 * 2797 * 1085992448669, 3 ** 4 * 5 ** 2 * 139 * 7154532998265547]
PRINTED_ALPHA = (1065 - 400 * SQRT7) / 800

PRINTED_ROMIK = [1, 1, -1, 51, 849, -26199]
PRINTED_E12 = "0.98818418"


def _recognized_or_float(x, d: int, prec: int):
    try:
        return numeric.recognize_quad(x, d, prec=prec)
    except numeric.RecognitionError:
        return mpmath.nstr(x, 30)

def _check_printed(report: Report, name: str, computed, printed, passed: bool = None):
    slip = PRINTED_SLIPS.get(name)
    report.check(name, computed, printed, passed=passed, mismatch=DISCREPANCY if slip else FAIL)
    if slip and report.rows[-1].status == DISCREPANCY:
        report.notes.append(f"{name}: {slip}")

def _pattern(found) -> str:
    return "none" if found is None else f"mu={found.preperiod}, l={found.period}, b={found.multiplier}"

def example_4_2(config) -> Report:
    report = Report("reproduce ex4.2")
    preset = get_preset("i-printed")
    theta, _ = form_poly("theta")
    seq = normalized_sequence(preset, theta, len(PRINTED_C))
    for n, (computed, printed) in enumerate(zip(seq.values, PRINTED_C)):
        _check_printed(report, f"c({n})", computed, printed)
    mixed = [n for n, v in enumerate(seq.values) if not (QuadRat(0) + (v if n % 2 == 0 else v / EPS)).is_rational]
    report.check(f"c(n) in Q for even n, in Q*eps for odd n, n < {len(seq.values)}",
                 "holds" if not mixed else f"fails at n={mixed[0]}", "holds", passed=not mixed)

    horizon = config.horizon
    for (p, A), (mu, ell, b) in sorted(PRINTED_C_PATTERNS.items()):
        residues = reduce_sequence(normalized_sequence(preset, theta, horizon, (p, A)), p, A)
        found = detect_quasiperiod(residues)
        computed = "no quasiperiod" if found is None else format_overline(found, residues[:found.preperiod])
        passed = found is not None and (found.preperiod, found.period) == (mu, ell) and found.multiplier == b
        _check_printed(report, f"c(n) mod {p}^{A}", computed, f"mu={mu}, l={ell}, b={b}", passed=passed)

    residues = reduce_sequence(normalized_sequence(preset, theta, max(horizon, 201), (5, 3)), 5, 3)
    found = detect_quasiperiod(residues)
    report.check("c(n) mod 5^3", _pattern(found), "n >= 11, l=50", passed=found is not None and
                 found.preperiod <= 11 and found.period == 50 and found.multiplier == 57)
    forward = [n for n in range(11, 151) if residues[n + 50] != 57 * residues[n]]
    report.check("c(n+50) = 57 c(n) mod 5^3 for 11 <= n <= 150",
                 "holds" if not forward else f"fails at n={forward[0]}", "holds", passed=not forward)
    backward = [n for n in range(11, 151) if residues[n] != 57 * residues[n + 50]]
    _check_printed(report, FIFTY_SEVEN, "holds" if not backward else f"fails at n={backward[0]}", "holds",
                   passed=not backward)

    prec = config.precision
    tau0 = numeric.cm_point("i", prec)
    N = numeric.order_for(tau0, prec, growth=20)
    period = numeric.period_i(prec, unit_power=0)
    for n in (1, 2, 3, 6):
        value = numeric.normalized_coefficient(qseries.theta(N), 1, n, tau0, period, prec=prec)
        computed = _recognized_or_float(value, 2, prec)
        report.check(f"c({n}) conjugated, oracle with Phi = pi*Omega_-4^2 vs recursion", computed,
                     (QuadRat(0) + seq.values[n]).conjugate(), mismatch=DISCREPANCY)
    stated = numeric.normalized_coefficient(qseries.theta(N), 1, 1, tau0, numeric.period_i(prec), prec=prec)
    report.notes.append(f"with the stated Phi = eps^4*pi*Omega_-4^2 the oracle gives c(1) = "
                        f"{_recognized_or_float(stated, 2, prec)}; the table follows the conjugate convention")
    return report

def example_4_4(config) -> Report:
    report = Report("reproduce ex4.4")
    preset = get_preset("z7")
    h52, _ = form_poly("h52")
    alpha = taylor_value(preset, h52, 0)
    report.check("alpha = H(z7)/Theta(z7)^5", alpha, PRINTED_ALPHA)
    report.check("Nm(alpha)", alpha.norm(), Fraction(569, 2 ** 10 * 5 ** 2))
    report.check("d(0)", normalized_sequence(preset, h52, 1).values[0], PRINTED_D[0])
    for n, (d, norm) in enumerate(zip(PRINTED_D, PRINTED_D_NORMS)):
        report.check(f"Nm(printed d({n}))", d.norm(), norm, mismatch=DISCREPANCY)

    prec = config.precision
    tau0 = numeric.cm_point("z7", prec)
    period = numeric.period_z7(prec)
    kappa_value = numeric.bridge_scale(tau0, period, prec)
    kappa = _recognized_or_float(kappa_value, 7, prec)
    report.add("kappa = Theta(z7)^4 4 pi y0 / Phi", kappa)
    N = numeric.order_for(tau0, prec, growth=len(PRINTED_D) + 8)
    series = quasimod.to_qseries(h52, N)
    for n in range(1, len(PRINTED_D)):
        value = numeric.normalized_coefficient(series, 5, n, tau0, period, preset.prefactor, prec=prec)
        report.check(f"d({n}), oracle", _recognized_or_float(value, 7, prec), PRINTED_D[n], mismatch=DISCREPANCY)
    report.add("Theta(z7)^4 / (sqrt((8+3*sqrt(7))/4) Omega_-7^2)", numeric.eq11_factor(prec))

    horizon = max(config.horizon, 1000)
    exact_kappa = kappa if isinstance(kappa, QuadRat) else None
    try:
        seq = normalized_sequence(preset, h52, horizon, (11, 1), kappa=exact_kappa)
        norms = [reduce_mod(v.norm(), 11, 1) for v in reduce_sequence(seq, 11, 1)]
        found = detect_quasiperiod(norms)
    except CMTaylorError as e:
        report.notes.append(f"Nm(d(n)) mod 11 not computed: {e}")
        return report
    computed = "none" if found is None else (f"n >= {found.preperiod}, l={found.period}, "
                                             f"Nm(d(n+l)) = {found.multiplier} Nm(d(n))")
    # Nm(d(n)) = 3 Nm(d(n+110)) means a multiplier of 3^-1 = 4
    matches = found is not None and found.period == 110 and found.multiplier == 4 and found.preperiod <= 3
    report.check("Nm(d(n)) mod 11", computed, "n >= 3, l=110, Nm(d(n)) = 3 Nm(d(n+110))", passed=matches,
                 mismatch=DISCREPANCY)
    if exact_kappa is None:
        report.notes.append("kappa was not recognized; Nm(d(n)) mod 11 uses kappa = 1")
    return report

def remark_3_3(config) -> Report:
    report = Report("reproduce remark3.3")
    prec = config.precision
    tau0 = numeric.cm_point("z7", prec)
    N = numeric.order_for(tau0, prec, growth=14)
    e12 = numeric.eval_qseries(qseries.Ek(12, N), tau0, prec)
    delta = numeric.eval_qseries(qseries.delta(N), tau0, prec)
    with mpmath.workdps(prec + numeric.GUARD):
        report.check("E12((1+i*sqrt(7))/2)", mpmath.nstr(e12.real, 8), PRINTED_E12,
                     passed=abs(e12 - mpmath.mpf(PRINTED_E12)) < mpmath.mpf("5e-9"))
        ratio = numeric.rational_reconstruct(1 + 13 * delta / e12, 10 ** 7, prec)
        report.check("(E12 + 13 Delta)(tau0) / E12(tau0)", ratio, Fraction(211934, 212625))
        report.check("Delta(tau0) / E12(tau0)", numeric.rational_reconstruct(delta / e12, 10 ** 7, prec),
                     Fraction(-691, 2764125))
    report.check("211934/212625 mod 13", reduce_mod(ratio, 13, 1).a, 6)
    return report

def romik(config) -> Report:
    report = Report("reproduce romik")
    prec = config.precision
    tau0 = numeric.cm_point("i/2", prec)
    t0, phi = numeric.discover_phi(tau0, 1, prec)
    report.check("t0 = F2(i/2)/Theta(i/2)^4", t0, Fraction(1, 32))
    report.check("phi = E2/12 + a4 Theta^4 + aY F2", f"a4={phi.a4}, aY={phi.aY}",
                 f"a4={quasimod.PHI_ROMIK.a4}, aY={quasimod.PHI_ROMIK.aY}", passed=phi == quasimod.PHI_ROMIK)
    scale = numeric.bridge_scale(tau0, numeric.romik_period(prec), prec, stride=2)
    report.check("Theta(i/2)^8 4 pi^2 / Phi", _recognized_or_float(scale, 1, prec), 32)

    preset = build_preset("romik", phi, t0, QuadRat(32), stride=2)
    theta, _ = form_poly("theta")
    values = normalized_sequence(preset, theta, len(PRINTED_ROMIK)).values
    for n, (computed, printed) in enumerate(zip(values, PRINTED_ROMIK)):
        report.check(f"d({n})", computed, printed)
    raw = taylor_values(preset, theta, 42)
    odd = [n for n in range(1, 42, 2) if raw[n] != 0]
    report.check("p_n(1/32) = 0 for odd n <= 41", "holds" if not odd else f"fails at n={odd[0]}", "holds",
                 passed=not odd)
    exact = normalized_sequence(preset, theta, 101).values
    fractional = [n for n, v in enumerate(exact) if not (v.is_rational and v.a.denominator == 1)]
    report.check("d(n) integral for n <= 100", "holds" if not fractional else f"fails at n={fractional[0]}",
                 "holds", passed=not fractional)
    mod5 = normalized_sequence(preset, theta, 101, (5, 1)).values
    signs = [n for n in range(1, 101) if mod5[n] != (-1) ** (n + 1)]
    report.check("d(n) = (-1)^(n+1) mod 5 for 1 <= n <= 100", "holds" if not signs else f"fails at n={signs[0]}",
                 "holds", passed=not signs)
    return report

def scherer(config) -> Report:
    """d(n) mod p for p = 3, 7, 11 and n <= 300: reported, not asserted.  p = 3 goes through exact values."""
    report = Report("reproduce scherer")
    preset = get_preset("romik")
    theta, _ = form_poly("theta")
    for p in (3, 7, 11):
        count = max(config.horizon, 301)
        residues = reduce_sequence(normalized_sequence(preset, theta, count, (p, 1)), p, 1)
        start = eventual_vanishing(residues)
        report.add(f"d(n) mod {p}, n < {count}", "not eventually zero" if start is None else f"zero from n={start}")
    return report

HANDLERS = {"ex4.2": example_4_2, "ex4.4": example_4_4, "remark3.3": remark_3_3, "romik": romik,
            "scherer": scherer}

def reproduce(config) -> Report:
    report = HANDLERS[config.example](config)
    report.data.update(example=config.example)
    return report
