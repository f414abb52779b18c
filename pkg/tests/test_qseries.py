#!/usr/bin/env python
import os
import sys
import random
import unittest
import logging
from fractions import Fraction

pkg_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))  # noqa
sys.path.insert(0, pkg_root)  # noqa

from tests.infra import SuppressWarningsMixin  # noqa
from cmtaylor import qseries  # noqa
from cmtaylor.qseries import QSeries, SeriesDivisionError  # noqa
from cmtaylor.utils import CMTaylorError  # noqa

log = logging.getLogger(__name__)


class TestConstructors(SuppressWarningsMixin, unittest.TestCase):
    def test_leading_coefficients(self):
        expected = {
            "theta": (qseries.theta(10), [1, 2, 0, 0, 2, 0, 0, 0, 0, 2]),
            "euler product": (qseries.euler_product(13), [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]),
            "F2": (qseries.F2(10), [0, 1, 0, 4, 0, 6, 0, 8, 0, 13]),
            "E2": (qseries.E2(4), [1, -24, -72, -96]),
            "E4": (qseries.Ek(4, 3), [1, 240, 2160]),
            "Delta": (qseries.delta(4), [1, -24, 252, -1472]),
        }
        for name, (series, coeffs) in expected.items():
            with self.subTest(name):
                self.assertEqual(list(series.coeffs), coeffs)

    def test_offsets(self):
        self.assertEqual(qseries.eta(8).offset, Fraction(1, 24))
        self.assertEqual(qseries.delta(8).offset, 1)
        self.assertEqual(qseries.delta(8).coefficient(2), -24)
        self.assertEqual(qseries.delta(8).coefficient(Fraction(1, 2)), 0)

    def test_eisenstein(self):
        self.assertEqual(qseries.bernoulli(1), Fraction(-1, 2))
        self.assertEqual(qseries.bernoulli(12), Fraction(-691, 2730))
        self.assertEqual(qseries.Ek(12, 3).coefficient(1), Fraction(65520, 691))
        with self.assertRaises(CMTaylorError):
            qseries.Ek(3, 10)

    def test_cohen_eisenstein(self):
        printed = [1, -10, 0, 0, -70, -48, 0, 0, -120, -250, 0, 0, -240, -240]
        self.assertEqual([c * 120 for c in qseries.H52(14).coeffs], printed)


class TestArithmetic(SuppressWarningsMixin, unittest.TestCase):
    def test_inverse_and_division(self):
        theta = qseries.theta(40)
        self.assertEqual(theta * theta.inverse(), 1)
        self.assertEqual((theta * qseries.F2(40)) / theta, qseries.F2(40))
        with self.assertRaises(SeriesDivisionError):
            QSeries([0, 0, 0]).inverse()

    def test_eta_quotients(self):
        N = 60
        eta = qseries.eta(N)
        with self.subTest("Delta = eta^24"):
            self.assertEqual(eta ** 24, qseries.delta(N))
        with self.subTest("F2 = eta(4t)^8 / eta(2t)^4"):
            quotient = qseries.rescale(eta, 4) ** 8 / qseries.rescale(eta, 2) ** 4
            self.assertEqual(quotient.offset, 1)
            self.assertEqual(quotient.truncate(N), qseries.F2(N))

    def test_ramanujan_derivative(self):
        # D E2 = (E2^2 - E4) / 12
        N = 50
        e2 = qseries.E2(N)
        self.assertEqual(qseries.D(e2) * 12, e2 * e2 - qseries.Ek(4, N))

    def test_leibniz_rule(self):
        rng = random.Random(31415)
        pairs = [(qseries.eta(30), qseries.theta(30)), (qseries.E2(30), qseries.H52(30))]
        for _ in range(5):
            pairs.append(tuple(QSeries([Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(30)])
                               for _ in range(2)))
        for f, g in pairs:
            with self.subTest(f=f.coeffs[:3], g=g.coeffs[:3]):
                self.assertEqual(qseries.D(f * g), qseries.D(f) * g + f * qseries.D(g))

    def test_offset_mismatch(self):
        with self.assertRaises(CMTaylorError):
            qseries.eta(10) + qseries.theta(10)
        self.assertFalse(qseries.eta(10) == qseries.theta(10))


class TestCongruences(SuppressWarningsMixin, unittest.TestCase):
    def test_reduce_series(self):
        reduced = qseries.reduce_series(qseries.Ek(4, 6), 5, 1)
        self.assertEqual([c.a for c in reduced.coeffs], [1, 0, 0, 0, 0, 0])

    def test_fermat_step(self):
        # D^(n + (p-1)p) h = D^n h mod p^2 for n >= 2, here with h = 120 H_5/2 and p = 5
        N = 100
        h = qseries.H52(N) * 120
        theta = qseries.theta(N)
        low, high = h, h
        for n in range(22):
            high = qseries.D(high)
            if n < 2:
                low = qseries.D(low)
        self.assertTrue(qseries.series_congruent(theta * high, theta * low, 5, 2))
        self.assertFalse(qseries.series_congruent(theta * high, theta * low, 5, 3))

if __name__ == '__main__':
    unittest.main()
