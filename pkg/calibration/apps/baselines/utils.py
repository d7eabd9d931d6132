"""Histogram binning and isotonic regression on the top-label confidence."""
import logging

import numpy as np
from sklearn.isotonic import IsotonicRegression

from ..core.exceptions import EmptyDataset
from ..core.utils import mdts_setting
from ..metrics.utils import assign_bins, check_bin_count
from ..probcore.utils import confidence, predict
from .models import HistogramBinningModel, IsotonicModel

logger = logging.getLogger(__name__)


def training_pairs(dataset):
    """msp confidences and correctness of every sample of ``dataset``."""
    if dataset.n == 0:
        raise EmptyDataset({'domain': dataset.id})
    return confidence(dataset.logits, 1.0), predict(dataset.logits) == dataset.labels


def fit_histbin(dataset, M=None):
    M = check_bin_count(mdts_setting('BINS') if M is None else M)
    confidences, correct = training_pairs(dataset)

    members = assign_bins(confidences, M) - 1
    counts = np.bincount(members, minlength=M)
    hits = np.bincount(members, weights=correct.astype(float), minlength=M)
    fallback = float(correct.mean())

    bin_accuracy = np.full(M, fallback)
    occupied = counts > 0
    bin_accuracy[occupied] = hits[occupied] / counts[occupied]
    logger.info('histbin on %s: %d of %d bins occupied, fallback %.4f',
                dataset.id, int(occupied.sum()), M, fallback)
    return HistogramBinningModel(M=M, bin_accuracy=bin_accuracy, fallback=fallback)


def fit_isotonic(dataset):
    """Pool-adjacent-violators fit of correctness against msp confidence."""
    confidences, correct = training_pairs(dataset)

    regression = IsotonicRegression(y_min=0.0, y_max=1.0, increasing=True, out_of_bounds='clip')
    regression.fit(confidences, correct.astype(float))

    breakpoints = np.unique(confidences)
    values = np.clip(regression.predict(breakpoints), 0.0, 1.0)
    logger.info('isotonic on %s: %d breakpoints', dataset.id, breakpoints.shape[0])
    return IsotonicModel(breakpoints=breakpoints, values=values)


def apply_baseline(model, logits):
    return model.apply(logits)
