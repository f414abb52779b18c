#!/usr/bin/env python
import os
import sys
import random
import contextlib
import unittest
import logging
from fractions import Fraction

pkg_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))  # noqa
sys.path.insert(0, pkg_root)  # noqa

from tests.infra import SuppressWarningsMixin  # noqa
from cmtaylor import congruence as cong  # noqa
from cmtaylor.arith import NonIntegralError, QuadRat, ResidueQuad, reduce_mod  # noqa
from cmtaylor.quasimod import X, Y  # noqa
from cmtaylor.taylor import CoeffSeq, form_poly, get_preset, normalized_sequence  # noqa
from cmtaylor.utils import CMTaylorError  # noqa

log = logging.getLogger(__name__)

HORIZON = 200


def theta_residues(p: int, A: int, horizon: int = HORIZON):
    seq = normalized_sequence(get_preset("i-printed"), X, horizon, (p, A))
    return cong.reduce_sequence(seq, p, A)


class TestDetection(SuppressWarningsMixin, unittest.TestCase):
    def test_constant_sequence(self):
        residues = [reduce_mod(1, 5, 1)] * 10
        report = cong.detect_quasiperiod(residues)
        self.assertEqual((report.preperiod, report.period), (0, 1))
        self.assertEqual(report.multiplier, 1)
        self.assertEqual(cong.format_overline(report), "{\\overline{1}} (mod 5^1)")

    def test_geometric_sequence(self):
        residues = [reduce_mod(0, 7, 1)] * 3 + [reduce_mod(3 ** n, 7, 1) for n in range(30)]
        report = cong.detect_quasiperiod(residues)
        self.assertEqual((report.preperiod, report.period, report.multiplier), (3, 1, 3))
        self.assertEqual(cong.unrolled_period(report), 6)

    def test_short_horizon(self):
        with self.assertRaises(CMTaylorError):
            cong.detect_quasiperiod([reduce_mod(1, 5, 1)] * 7)

    def test_nothing_found(self):
        residues = [reduce_mod(n * n + 1, 101, 1) for n in range(40)]
        self.assertIsNone(cong.detect_quasiperiod(residues))

    def test_theta_coefficients_at_i(self):
        # mod 13 the period is 6; -6 = 7 mod 13
        computed = {(5, 1): (1, 2, 2), (5, 2): (1, 10, 7), (13, 1): (1, 6, 7)}
        for (p, A), (mu, ell, b) in computed.items():
            with self.subTest(p=p, A=A):
                residues = theta_residues(p, A)
                report = cong.detect_quasiperiod(residues)
                self.assertEqual((report.preperiod, report.period), (mu, ell))
                self.assertEqual(report.multiplier, b)
                self.assertEqual(report.horizon, HORIZON)
                self.assertEqual(cong.verify_report(residues, report), (True, None))

    def test_doubling_horizon_is_stable(self):
        for p, A in ((5, 1), (5, 2), (13, 1)):
            with self.subTest(p=p, A=A):
                short = cong.detect_quasiperiod(theta_residues(p, A, 100))
                long = cong.detect_quasiperiod(theta_residues(p, A, 200))
                self.assertEqual((short.preperiod, short.period, short.multiplier, short.cycle),
                                 (long.preperiod, long.period, long.multiplier, long.cycle))

    def test_fifty_seven(self):
        residues = theta_residues(5, 3, 201)
        report = cong.detect_quasiperiod(residues[:HORIZON])
        self.assertEqual((report.preperiod, report.period, report.multiplier), (2, 50, 57))
        self.assertEqual(reduce_mod(7, 5, 3) ** 5, 57)
        for n in range(11, 151):
            with self.subTest(n=n):
                self.assertEqual(residues[n + 50], residues[n] * 57)
        self.assertNotEqual(residues[11], residues[61] * 57)

    def test_verify_report_finds_break(self):
        residues = theta_residues(5, 1, 60)
        report = cong.detect_quasiperiod(residues)
        tampered = list(residues)
        tampered[40] = tampered[40] + 1
        passed, first = cong.verify_report(tampered, report)
        self.assertFalse(passed)
        self.assertIn(first, (38, 40))
        seq = normalized_sequence(get_preset("i-printed"), X, 60, (5, 1))
        self.assertEqual(cong.verify_report(seq, report), (True, None))

    def test_report_helpers(self):
        residues = theta_residues(5, 1, 40)
        report = cong.detect_quasiperiod(residues)
        self.assertEqual(cong.unrolled_period(report), 8)
        text = cong.format_overline(report, residues[:report.preperiod])
        self.assertTrue(text.startswith("{1, \\overline{"))
        self.assertTrue(text.endswith("}^2} (mod 5^1)"))
        self.assertEqual([cong.fermat_hint(5, 1), cong.fermat_hint(13, 1), cong.fermat_hint(5, 3)], [4, 12, 100])
        self.assertEqual(cong.fermat_hint(5, 2, extra_order=4), 80)


class TestReduction(SuppressWarningsMixin, unittest.TestCase):
    def test_reduce_sequence(self):
        seq = CoeffSeq("i", "theta", [QuadRat(Fraction(1, 5))])
        with self.assertRaises(NonIntegralError):
            cong.reduce_sequence(seq, 5, 1)
        reduced = normalized_sequence(get_preset("i-printed"), X, 20, (5, 2))
        self.assertEqual(cong.reduce_sequence(reduced, 5, 1), theta_residues(5, 1, 20))
        with self.assertRaises(CMTaylorError):
            cong.reduce_sequence(reduced, 5, 3)
        with self.assertRaises(CMTaylorError):
            cong.reduce_sequence(reduced, 7, 1)

    def test_eventual_vanishing(self):
        def residues(values):
            return [reduce_mod(v, 3, 1) for v in values]
        self.assertEqual(cong.eventual_vanishing(residues([1, 2, 0, 4, 0, 0])), 4)
        self.assertIsNone(cong.eventual_vanishing(residues([0, 0, 1])))
        self.assertEqual(cong.eventual_vanishing(residues([0, 0, 0])), 0)
        self.assertEqual(ResidueQuad(9, 0, 3, 2).is_zero(), True)


class TestTransfer(SuppressWarningsMixin, unittest.TestCase):
    def test_cohen_eisenstein_at_i(self):
        preset = get_preset("i")
        h52, _ = form_poly("h52")
        for P, scale in ((h52 * 120, 1), (h52, 5)):
            with self.subTest(P=str(P)):
                with self.assertLogs("cmtaylor.congruence", "WARNING") if scale > 1 else contextlib.nullcontext():
                    result = cong.transferred_congruence(preset, P, 5, 1, 2)
                self.assertEqual((result.n1, result.n2, result.scale), (2, 22, scale))
                self.assertGreaterEqual(result.valuation, 2)
                self.assertTrue(result.holds)

    def test_transferred_congruence(self):
        result = cong.transferred_congruence(get_preset("i"), X, 5, 1, 2)
        self.assertEqual((result.n1, result.n2, result.scale), (2, 22, 1))
        self.assertEqual(result.holds, result.valuation >= 2)
        with self.assertRaises(CMTaylorError):
            cong.transferred_congruence(get_preset("i"), X, 3, 1, 2)
        with self.assertRaises(CMTaylorError):
            cong.transferred_congruence(get_preset("i"), X * 0, 5, 1, 2)


class TestRandomForms(SuppressWarningsMixin, unittest.TestCase):
    moduli = ((5, 1), (13, 1), (17, 1), (29, 1), (5, 2))

    def random_form(self, rng: random.Random):
        k2 = rng.choice((1, 3, 5, 7, 9, 11, 13))
        monomials = [X ** (k2 - 4 * j) * Y ** j for j in range(k2 // 4 + 1)]
        coeffs = [rng.randint(-9, 9) for _ in monomials]
        if not any(coeffs):
            coeffs[0] = 1
        return sum((c * m for c, m in zip(coeffs, monomials)), X * 0)

    def test_quasiperiod_within_fermat_horizon(self):
        rng = random.Random(1729)
        preset = get_preset("i")
        for trial in range(20):
            P = self.random_form(rng)
            for p, A in self.moduli:
                horizon = 4 * cong.fermat_hint(p, A) + 16
                with self.subTest(trial=trial, P=str(P), p=p, A=A):
                    residues = cong.reduce_sequence(normalized_sequence(preset, P, 2 * horizon, (p, A)), p, A)
                    report = cong.detect_quasiperiod(residues[:horizon])
                    self.assertIsNotNone(report)
                    self.assertEqual(cong.verify_report(residues[:horizon], report), (True, None))
                    doubled = cong.detect_quasiperiod(residues)
                    self.assertEqual((doubled.preperiod, doubled.period, doubled.multiplier),
                                     (report.preperiod, report.period, report.multiplier))

    def test_linearity_mod_5(self):
        rng = random.Random(1729)
        preset = get_preset("i-printed")
        base = [cong.reduce_sequence(normalized_sequence(preset, P, 60, (5, 1)), 5, 1) for P in (X ** 5, X * Y)]
        for _ in range(5):
            a, b = rng.randint(-50, 50), rng.randint(-50, 50)
            with self.subTest(a=a, b=b):
                P = a * X ** 5 + b * X * Y
                if P.is_zero():
                    continue
                residues = cong.reduce_sequence(normalized_sequence(preset, P, 60, (5, 1)), 5, 1)
                self.assertEqual(residues, [u * a + v * b for u, v in zip(*base)])

if __name__ == '__main__':
    unittest.main()
