#!/usr/bin/env python
import os
import sys
import unittest
import logging
from fractions import Fraction

pkg_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))  # noqa
sys.path.insert(0, pkg_root)  # noqa

from tests.infra import SuppressWarningsMixin  # noqa
from cmtaylor import qseries, quasimod, taylor  # noqa
from cmtaylor.arith import QuadRat, reduce_mod  # noqa
from cmtaylor.quasimod import X, Y, Z  # noqa
from cmtaylor.taylor import RecursionShapeError, get_preset, normalized_sequence, taylor_value, taylor_values  # noqa
from cmtaylor.cli.reproduce import EPS, PRINTED_ALPHA, PRINTED_C, PRINTED_D, PRINTED_ROMIK  # noqa
from cmtaylor.utils import CMTaylorError  # noqa

log = logging.getLogger(__name__)

SQRT2, SQRT7 = QuadRat(0, 1, 2), QuadRat(0, 1, 7)


def _fractions(*values):
    return tuple(Fraction(v) for v in values)

def _is_integral(v) -> bool:
    v = QuadRat(0) + v
    return Fraction(v.a).denominator == 1 and Fraction(v.b).denominator == 1


class TestRecursionShape(SuppressWarningsMixin, unittest.TestCase):
    def test_dehomogenize(self):
        self.assertEqual(taylor.dehomogenize(quasimod.E4_POLY, 8), _fractions(1, 224, 256))
        h52, k2 = taylor.form_poly("h52")
        self.assertEqual(k2, 5)
        self.assertEqual(taylor.dehomogenize(h52, 5), (Fraction(1, 120), Fraction(-1, 6)))
        self.assertEqual(taylor.dehomogenize(Y, 4), _fractions(0, 1))
        with self.assertRaises(RecursionShapeError):
            taylor.dehomogenize(X + Y, 1)
        with self.assertRaises(RecursionShapeError):
            taylor.dehomogenize(X * Z, 5)

    def test_derive_recursion(self):
        expected = {
            "i": (_fractions(Fraction(-1, 24), Fraction(10, 3)),
                  _fractions(Fraction(-1, 144), Fraction(-224, 144), Fraction(-256, 144))),
            "z7": (_fractions(Fraction(-5, 168), Fraction(592, 168)),
                   _fractions(Fraction(-25, 7056), Fraction(-15584, 7056), Fraction(-6400, 7056))),
            "romik": (_fractions(Fraction(-5, 48), Fraction(160, 48)),
                      _fractions(Fraction(-25, 576), Fraction(64, 576), Fraction(-1024, 576))),
        }
        for label, (A, C) in expected.items():
            with self.subTest(label):
                preset = get_preset(label)
                self.assertEqual(preset.A, A)
                self.assertEqual(preset.B, _fractions(0, -1, 16))
                self.assertEqual(preset.C, C)

    def test_form_poly(self):
        self.assertEqual(taylor.form_poly("theta"), (X, 1))
        self.assertEqual(taylor.form_poly("f2"), (Y, 4))
        self.assertEqual(taylor.form_poly("poly:X^4 - 16*Y")[1], 4)
        for bad in ("nope", "poly:X + Y", "poly:X*Z"):
            with self.subTest(bad):
                with self.assertRaises(CMTaylorError):
                    taylor.form_poly(bad)
        with self.assertRaises(CMTaylorError):
            get_preset("j")

    def test_phi_for_point(self):
        self.assertEqual(taylor.phi_for_point(QuadRat(Fraction(1, 32)), QuadRat(Fraction(-3, 2))),
                         quasimod.PHI_ROMIK)
        t0 = -(127 - 48 * SQRT7) / 16
        r = (96 * SQRT7 - 252) / 7
        self.assertEqual(taylor.phi_for_point(t0, r), quasimod.PHI_Z7)
        self.assertEqual(taylor.phi_for_point((17 - 12 * SQRT2) / 16, QuadRat(0)), quasimod.PHI_I)
        with self.assertRaises(CMTaylorError):
            taylor.phi_for_point(QuadRat(Fraction(1, 32)), SQRT2)


class TestExactValues(SuppressWarningsMixin, unittest.TestCase):
    def test_first_step(self):
        self.assertEqual(taylor_value(get_preset("i"), X, 0), 1)
        self.assertEqual(taylor_value(get_preset("i"), X, 1), (7 - 5 * SQRT2) / 2)
        self.assertEqual(taylor_value(get_preset("i-printed"), X, 1), (7 + 5 * SQRT2) / 2)
        self.assertEqual(taylor_value(get_preset("i-printed"), X, 2), (17 + 12 * SQRT2) / 4)
        self.assertEqual(taylor_values(get_preset("i"), X, 0), [])

    def test_printed_theta_coefficients(self):
        seq = normalized_sequence(get_preset("i-printed"), X, len(PRINTED_C), form_label="theta")
        self.assertEqual(seq.form, "theta")
        self.assertIsNone(seq.modulus)
        for n, (computed, printed) in enumerate(zip(seq.values, PRINTED_C)):
            with self.subTest(n=n):
                if n == 6:
                    self.assertEqual(computed, -111)
                    self.assertEqual(printed, computed * EPS)
                else:
                    self.assertEqual(computed, printed)
                if n % 2:
                    self.assertTrue((computed / EPS).is_rational)
                else:
                    self.assertTrue((QuadRat(0) + computed).is_rational)
        mod5 = [1, EPS, 1, 2 * EPS, 2, 4 * EPS, 4, 3 * EPS, 3, EPS, 1, 2 * EPS]
        self.assertEqual(normalized_sequence(get_preset("i-printed"), X, 12, (5, 1)).values,
                         [reduce_mod(v, 5, 1, 2) for v in mod5])

    def test_conjugate_presets(self):
        plain = normalized_sequence(get_preset("i"), X, 8).values
        printed = normalized_sequence(get_preset("i-printed"), X, 8).values
        for n, (a, b) in enumerate(zip(plain, printed)):
            with self.subTest(n=n):
                self.assertEqual((QuadRat(0) + a).conjugate(), b)

    def test_romik(self):
        preset = get_preset("romik")
        self.assertEqual(normalized_sequence(preset, X, len(PRINTED_ROMIK)).values, PRINTED_ROMIK)
        raw = taylor_values(preset, X, 42)
        for n in range(1, 42, 2):
            with self.subTest(n=n):
                self.assertEqual(raw[n], 0)
        self.assertTrue(all(_is_integral(v) for v in normalized_sequence(preset, X, 101).values))

    def test_z7(self):
        preset = get_preset("z7")
        h52, _ = taylor.form_poly("h52")
        self.assertIsNone(preset.kappa)
        self.assertEqual(taylor_value(preset, h52, 0), PRINTED_ALPHA)
        self.assertEqual(PRINTED_ALPHA.norm(), Fraction(569, 2 ** 10 * 5 ** 2))
        with self.assertLogs("cmtaylor.taylor", "WARNING"):
            seq = normalized_sequence(preset, h52, 1)
        self.assertEqual(seq.values[0], PRINTED_D[0])

    def test_integrality(self):
        for n, value in enumerate(normalized_sequence(get_preset("i"), X, 30).values):
            with self.subTest(n=n):
                self.assertTrue(_is_integral(value))


class TestAgreement(SuppressWarningsMixin, unittest.TestCase):
    def test_recursion_matches_iterated_serre(self):
        for label in ("i", "z7", "romik"):
            preset = get_preset(label)
            for f in (X, Y, (X ** 5 - 20 * X * Y) * Fraction(1, 120)):
                k2 = int(2 * f.weight())
                for n in range(13):
                    with self.subTest(preset=label, f=str(f), n=n):
                        iterated = quasimod.iterate_serre(f, preset.phi, n)
                        self.assertEqual(taylor.dehomogenize(iterated, k2 + 4 * n),
                                         taylor.run_recursion(preset, f, n))

    def test_iterated_serre_matches_q_expansions(self):
        N = 60
        preset = get_preset("i")
        phi_series = quasimod.to_qseries(quasimod.phi_poly(preset.phi), N)
        psi_series = qseries.D(phi_series) - phi_series * phi_series
        k = Fraction(1, 2)
        previous, current = qseries.theta(N) * 0, qseries.theta(N)
        for n in range(4):
            with self.subTest(n=n):
                self.assertEqual(quasimod.to_qseries(quasimod.iterate_serre(X, preset.phi, n), N), current)
            previous, current = current, (qseries.D(current) - phi_series * current * (k + 2 * n)
                                          + psi_series * previous * (n * (k + n - 1)))


class TestModularValues(SuppressWarningsMixin, unittest.TestCase):
    def test_modular_equals_reduced_exact(self):
        preset = get_preset("i-printed")
        exact = normalized_sequence(preset, X, 30).values
        for modulus in ((5, 1), (5, 3), (7, 2), (13, 1)):
            with self.subTest(modulus=modulus):
                seq = normalized_sequence(preset, X, 30, modulus)
                self.assertEqual(seq.modulus, modulus)
                self.assertEqual(seq.values, [reduce_mod(v, *modulus) for v in exact])

    def test_romik_signs_mod_5(self):
        values = normalized_sequence(get_preset("romik"), X, 101, (5, 1)).values
        for n in range(1, 101):
            with self.subTest(n=n):
                self.assertEqual(values[n], reduce_mod((-1) ** (n + 1), 5, 1))

    def test_fallback_when_modulus_divides_denominators(self):
        preset = get_preset("i")
        exact = normalized_sequence(preset, X, 10).values
        with self.assertLogs("cmtaylor.taylor", "WARNING"):
            seq = normalized_sequence(preset, X, 10, (3, 1))
        self.assertEqual(seq.modulus, (3, 1))
        self.assertEqual(seq.values, [reduce_mod(v, 3, 1) for v in exact])

if __name__ == '__main__':
    unittest.main()
