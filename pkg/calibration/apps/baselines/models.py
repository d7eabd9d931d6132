from dataclasses import dataclass

import numpy as np

from ..core.exceptions import SchemaViolation
from ..metrics.utils import assign_bins, check_bin_count
from ..probcore.models import Prediction
from ..probcore.utils import confidence, predict


def _read_only(values):
    array = np.array(values, dtype=float).reshape(-1)
    array.setflags(write=False)
    return array


class TopLabelBaseline:
    """Maps the msp confidence of a sample to a calibrated one; labels stay msp."""
    kind = None

    def map_confidence(self, confidences):
        raise NotImplementedError

    def predict_batch(self, logits, embeddings=None):
        logits = np.asarray(logits, dtype=float)
        return predict(logits), self.map_confidence(confidence(logits, 1.0))

    def apply(self, logits):
        logits = np.asarray(logits, dtype=float)
        mapped = self.map_confidence(np.atleast_1d(confidence(logits, 1.0)))
        return Prediction(label=int(predict(logits)), confidence=float(mapped[0]))

    def __call__(self, logits, embedding=None):
        return self.apply(logits)


@dataclass(frozen=True, eq=False)
class HistogramBinningModel(TopLabelBaseline):
    """Per-bin empirical accuracy of the training confidences.

    Empty training bins hold ``fallback``, the global training accuracy.
    """
    M: int
    bin_accuracy: np.ndarray
    fallback: float

    kind = 'histbin'

    def __post_init__(self):
        object.__setattr__(self, 'M', check_bin_count(self.M))
        object.__setattr__(self, 'bin_accuracy', _read_only(self.bin_accuracy))
        object.__setattr__(self, 'fallback', float(self.fallback))
        if self.bin_accuracy.shape[0] != self.M:
            raise SchemaViolation({
                'bin_accuracy': 'expected %d entries, got %d'
                % (self.M, self.bin_accuracy.shape[0])})
        if not np.all((self.bin_accuracy >= 0) & (self.bin_accuracy <= 1)):
            raise SchemaViolation({'bin_accuracy': 'entries must lie in [0, 1]'})
        if not 0 <= self.fallback <= 1:
            raise SchemaViolation({'fallback': 'must lie in [0, 1]'})

    def map_confidence(self, confidences):
        return self.bin_accuracy[assign_bins(np.asarray(confidences, dtype=float), self.M) - 1]


@dataclass(frozen=True, eq=False)
class IsotonicModel(TopLabelBaseline):
    """Stepwise-constant monotone map: a confidence takes the value of the
    largest breakpoint not above it, and ``values[0]`` below the first one.
    """
    breakpoints: np.ndarray
    values: np.ndarray

    kind = 'isotonic'

    def __post_init__(self):
        object.__setattr__(self, 'breakpoints', _read_only(self.breakpoints))
        object.__setattr__(self, 'values', _read_only(self.values))
        if self.breakpoints.shape[0] == 0:
            raise SchemaViolation({'breakpoints': 'at least one breakpoint is required'})
        if self.breakpoints.shape != self.values.shape:
            raise SchemaViolation({
                'values': 'expected %d entries, got %d'
                % (self.breakpoints.shape[0], self.values.shape[0])})
        if np.any(np.diff(self.breakpoints) <= 0):
            raise SchemaViolation({'breakpoints': 'must be strictly increasing'})
        if np.any(np.diff(self.values) < 0):
            raise SchemaViolation({'values': 'must be nondecreasing'})
        if not np.all((self.values >= 0) & (self.values <= 1)):
            raise SchemaViolation({'values': 'entries must lie in [0, 1]'})

    def map_confidence(self, confidences):
        steps = np.searchsorted(self.breakpoints, np.asarray(confidences, dtype=float),
                                side='right') - 1
        return self.values[np.clip(steps, 0, None)]
