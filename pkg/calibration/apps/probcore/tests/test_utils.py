"""Test the temperature-scaled softmax"""
import math

import numpy as np
from rest_framework.test import APISimpleTestCase

from ...core.exceptions import NonPositiveTemperature
from ..models import Prediction
from ..utils import MspCalibrator, confidence, msp, predict, softmax_t


class SoftmaxTest(APISimpleTestCase):
    """ Class contains methods testing softmax_t."""

    def setUp(self):
        self.rng = np.random.default_rng(42)

    def test_closed_form(self):
        """
        test logits (2, 0) at T = 2
        """
        e = math.e
        np.testing.assert_allclose(
            softmax_t([2.0, 0.0], 2.0), [e / (e + 1), 1 / (e + 1)], rtol=1e-12)

    def test_uniform(self):
        """
        test equal logits give the uniform vector
        """
        np.testing.assert_allclose(softmax_t([3.0, 3.0, 3.0, 3.0], 0.7), [0.25] * 4)

    def test_unit_temperature(self):
        """
        test T = 1 is the plain softmax
        """
        logits = np.array([0.3, -1.2, 2.0])
        plain = np.exp(logits) / np.exp(logits).sum()

        np.testing.assert_allclose(softmax_t(logits, 1.0), plain, rtol=1e-12)

    def test_non_positive_temperature(self):
        """
        test T <= 0 is rejected
        """
        for T in (0.0, -1.0):
            with self.assertRaises(NonPositiveTemperature):
                softmax_t([1.0, 0.0], T)

    def test_properties(self):
        """
        test normalization, shift invariance and overflow on random logits
        """
        for _ in range(100):
            J = int(self.rng.integers(2, 12))
            logits = self.rng.normal(scale=3.0, size=J)
            T = float(np.exp(self.rng.uniform(-3, 3)))
            shift = float(self.rng.normal(scale=100.0))

            probabilities = softmax_t(logits, T)
            self.assertAlmostEqual(probabilities.sum(), 1.0, delta=1e-12)
            self.assertTrue(np.all(probabilities >= 0) and np.all(probabilities <= 1))
            if np.ptp(logits) / T < 30:
                # float64 saturates to exactly 0 or 1 beyond this spread
                self.assertTrue(np.all(probabilities > 0) and np.all(probabilities < 1))
            np.testing.assert_allclose(
                softmax_t(logits + shift, T), probabilities, atol=1e-12)
            self.assertGreaterEqual(confidence(logits, T), 1.0 / J - 1e-15)

    def test_extreme_logits(self):
        """
        test logits of magnitude 1e4 stay finite
        """
        probabilities = softmax_t([1e4, -1e4, 0.0], 0.05)

        self.assertTrue(np.all(np.isfinite(probabilities)))
        self.assertAlmostEqual(probabilities.sum(), 1.0, delta=1e-12)

    def test_saturation(self):
        """
        test a saturated softmax stays finite with its mass on the top logit
        """
        probabilities = softmax_t([3.0, -3.0], 0.05)

        self.assertTrue(np.all(np.isfinite(probabilities)))
        self.assertEqual(probabilities[0], 1.0)
        self.assertGreaterEqual(probabilities[1], 0.0)
        self.assertLess(probabilities[1], 1e-50)

    def test_row_temperatures(self):
        """
        test a temperature per row of a logit matrix
        """
        logits = np.array([[2.0, 0.0], [2.0, 0.0]])

        rows = softmax_t(logits, np.array([1.0, 2.0]))

        np.testing.assert_allclose(rows[0], softmax_t([2.0, 0.0], 1.0))
        np.testing.assert_allclose(rows[1], softmax_t([2.0, 0.0], 2.0))


class PredictionTest(APISimpleTestCase):
    """ Class contains methods testing predict, confidence and msp."""

    def setUp(self):
        self.rng = np.random.default_rng(7)

    def test_predict(self):
        """
        test argmax and its lowest-index tie-break
        """
        self.assertEqual(predict([0.1, 0.9, 0.3]), 1)
        self.assertEqual(predict([0.5, 0.5]), 0)

    def test_predict_temperature_invariant(self):
        """
        test the label is unchanged by dividing logits by T
        """
        for _ in range(100):
            logits = self.rng.normal(size=6)
            for T in (0.1, 10.0):
                self.assertEqual(predict(logits), predict(logits / T))

    def test_confidence_closed_form(self):
        """
        test confidence values with known closed forms
        """
        e2 = math.exp(2)
        self.assertAlmostEqual(confidence([2.0, 0.0, 0.0], 1.0), e2 / (e2 + 2), places=12)
        self.assertAlmostEqual(confidence([2.0, 0.0], 2.0), 0.7310585786300049, places=12)
        self.assertAlmostEqual(confidence([2.0, 0.0], 1.0), 0.8807970779778823, places=12)
        self.assertAlmostEqual(confidence([1.0, 1.0, 1.0], 5.0), 1 / 3, places=12)

    def test_confidence_decreasing(self):
        """
        test confidence strictly decreases in T for a unique argmax
        """
        for _ in range(100):
            logits = self.rng.normal(size=4)
            values = [confidence(logits, T) for T in (0.5, 1.0, 2.0, 4.0)]
            self.assertTrue(all(a > b for a, b in zip(values, values[1:])))

    def test_msp(self):
        """
        test msp is (predict, confidence at T = 1)
        """
        prediction = msp([2.0, 0.0, 0.0])

        self.assertEqual(prediction, Prediction(label=0, confidence=prediction.confidence))
        self.assertAlmostEqual(prediction.confidence, 0.7869860421615985, places=12)
        self.assertEqual(msp([0.0] * 4).confidence, 0.25)

    def test_msp_calibrator(self):
        """
        test the batch and per-sample msp paths agree
        """
        logits = self.rng.normal(size=(20, 5))
        labels, confidences = MspCalibrator().predict_batch(logits)

        for row, label, value in zip(logits, labels, confidences):
            prediction = MspCalibrator()(row)
            self.assertEqual(prediction.label, label)
            self.assertAlmostEqual(prediction.confidence, value, places=15)
