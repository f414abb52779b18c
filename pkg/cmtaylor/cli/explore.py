"""
Exploratory subcommands: q-expansions, identity checks, Taylor coefficients, congruences and the numeric oracle.
"""
import mpmath

from cmtaylor import congruence as cong
from cmtaylor import numeric, qseries, quasimod
from cmtaylor.arith import format_value, multiplicative_order, reduce_mod
from cmtaylor.cli.report import Report
from cmtaylor.qseries import QSeries
from cmtaylor.taylor import form_poly, get_preset, normalized_sequence
from cmtaylor.utils import CMTaylorError


def named_series(name: str, N: int) -> QSeries:
    simple = dict(theta=qseries.theta, f2=qseries.F2, e2=qseries.E2, eta=qseries.eta, delta=qseries.delta,
                  h52=qseries.H52)
    if name in simple:
        return simple[name](N)
    if name.startswith("e") and name[1:].isdigit():
        return qseries.Ek(int(name[1:]), N)
    if name.startswith("poly:"):
        return quasimod.to_qseries(quasimod.parse_poly(name[len("poly:"):]), N)
    raise CMTaylorError(f"unknown series '{name}'")

def series(config) -> Report:
    f = named_series(config.name, config.truncation)
    if config.modulus is not None:
        f = qseries.reduce_series(f, *config.modulus)
    report = Report("series")
    report.terms.extend(f.items())
    report.data.update(name=config.name, offset=format_value(f.offset), order=f.order,
                       modulus="exact" if config.modulus is None else "{}^{}".format(*config.modulus))
    return report

def identities(config) -> Report:
    report = Report("identities")
    for result in quasimod.identities(config.order):
        report.check(result.name, "holds" if result.passed else "fails", "holds", passed=result.passed)
    report.data.update(order=config.order)
    return report

def _sequence(config, count: int):
    preset = get_preset(config.preset)
    P, k2 = form_poly(config.form)
    return preset, k2, normalized_sequence(preset, P, count, config.modulus, config.kappa, config.form)

def taylor(config) -> Report:
    preset, k2, seq = _sequence(config, config.count)
    report = Report("taylor")
    for n, value in enumerate(seq.values, seq.n_start):
        report.add(f"value({n})", value)
    kappa = config.kappa if config.kappa is not None else preset.kappa
    report.data.update(preset=preset.label, form=config.form, k2=k2, mode=config.mode, t_eval=preset.t_eval,
                       kappa="unresolved" if kappa is None else kappa, stride=preset.stride,
                       prefactor=preset.prefactor)
    if config.modulus is not None:
        report.data.update(modulus="{}^{}".format(*config.modulus))
    if preset.prefactor_note:
        report.notes.append(preset.prefactor_note)
    return report

def congruence(config) -> Report:
    p, A = config.modulus
    preset, _, seq = _sequence(config, config.horizon)
    residues = cong.reduce_sequence(seq, p, A)
    found = cong.detect_quasiperiod(residues, config.min_repeats)
    report = Report("congruence")
    report.data.update(preset=preset.label, form=config.form, p=p, A=A, horizon=len(residues))
    if found is None:
        report.data.update(periodicity="none found")
    else:
        passed, _ = cong.verify_report(residues, found)
        report.check("verify_report", "holds" if passed else "fails", "holds", passed=passed)
        report.data.update(preperiod=found.preperiod, period=found.period, multiplier=found.multiplier,
                           cycle=list(found.cycle), unrolled_period=cong.unrolled_period(found),
                           pattern=cong.format_overline(found, residues[:found.preperiod]))
    kappa = config.kappa if config.kappa is not None else preset.kappa
    extra = 1
    if kappa is not None and reduce_mod(kappa, p, A).is_unit():
        extra = multiplicative_order(reduce_mod(kappa, p, A))
    report.data.update(fermat_hint=cong.fermat_hint(p, A, extra))
    vanishing = cong.eventual_vanishing(residues)
    if vanishing is not None:
        report.data.update(eventually_zero_from=vanishing)
    return report

def oracle(config) -> Report:
    prec = config.precision
    tau0 = numeric.cm_point(config.point, prec)
    P, k2 = form_poly(config.form)
    N = numeric.order_for(tau0, prec, growth=config.n + 8)
    value = numeric.raising(quasimod.to_qseries(P, N), k2, config.n, tau0, prec)
    with mpmath.workdps(prec + numeric.GUARD):
        theta = numeric.eval_qseries(qseries.theta(N), tau0, prec)
        ratio = value / theta ** (4 * config.n + k2)
    report = Report("oracle")
    report.data.update(point=config.point, form=config.form, n=config.n, precision=prec,
                       value=mpmath.nstr(value, prec), ratio=mpmath.nstr(ratio, prec))
    if config.recognize is not None:
        d = 1 if config.recognize == "q" else int(config.recognize[len("quad:"):])
        try:
            recognized = numeric.recognize_quad(ratio, d, prec=prec)
            report.add("recognized ratio", recognized)
        except numeric.RecognitionError as e:
            report.notes.append(str(e))
    return report
