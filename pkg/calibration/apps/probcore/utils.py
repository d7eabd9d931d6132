"""Temperature-scaled softmax and the quantities derived from it.

Every function accepts a single logit vector or an n x J matrix of them;
temperatures broadcast against the rows.
"""
import numpy as np
from scipy.special import log_softmax, softmax

from ..core.exceptions import NonPositiveTemperature
from .models import Prediction


def check_temperature(T):
    temperatures = np.asarray(T, dtype=float)
    if not np.all(temperatures > 0):
        raise NonPositiveTemperature({'T': temperatures.tolist()})
    return temperatures


def _scaled(logits, T):
    logits = np.asarray(logits, dtype=float)
    temperatures = check_temperature(T)
    if logits.ndim == 2 and temperatures.ndim == 1:
        temperatures = temperatures[:, None]
    return logits / temperatures


def softmax_t(logits, T=1.0):
    """softmax(logits / T) along the class axis, max-subtracted for stability."""
    return softmax(_scaled(logits, T), axis=-1)


def log_softmax_t(logits, T=1.0):
    return log_softmax(_scaled(logits, T), axis=-1)


def predict(logits):
    # np.argmax returns the first maximum, so ties go to the lowest index.
    return np.argmax(np.asarray(logits, dtype=float), axis=-1)


def confidence(logits, T=1.0):
    """Largest entry of softmax_t; lies in [1/J, 1]."""
    return np.max(softmax_t(logits, T), axis=-1)


def msp(logits):
    return Prediction(label=int(predict(logits)), confidence=float(confidence(logits, 1.0)))


class MspCalibrator:
    """Uncalibrated baseline: maximum softmax probability at T = 1."""
    kind = 'msp'

    def predict_batch(self, logits, embeddings=None):
        logits = np.asarray(logits, dtype=float)
        return predict(logits), confidence(logits, 1.0)

    def __call__(self, logits, embedding=None):
        return msp(logits)
