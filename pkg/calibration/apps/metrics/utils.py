"""Calibration error metrics over one or many domains."""
import logging
import math
from numbers import Integral

import numpy as np

from ..core.exceptions import (
    CalibrationException, CalibrationFailed, DimensionMismatch, EmptyInput,
    InvalidBinCount, SchemaViolation)
from .models import BinStats, EceReport, MultiDomainReport

logger = logging.getLogger(__name__)


def bin_edges(M):
    return np.arange(M + 1) / M


def assign_bins(confidences, M):
    """1-based bin of each confidence; bins are ((m-1)/M, m/M] and 0 joins bin 1."""
    return np.clip(np.searchsorted(bin_edges(M), confidences, side='left'), 1, M)


def check_bin_count(M):
    if isinstance(M, bool) or not isinstance(M, Integral) or M < 1:
        raise InvalidBinCount({'M': str(M)})
    return int(M)


def ece(confidences, correct, M):
    """Expected calibration error with M equal-width bins."""
    M = check_bin_count(M)
    confidences = np.asarray(confidences, dtype=float).reshape(-1)
    correct = np.asarray(correct, dtype=bool).reshape(-1)
    n = confidences.shape[0]
    if n == 0:
        raise EmptyInput({'message': 'no confidences to bin'})
    if correct.shape[0] != n:
        raise DimensionMismatch({'confidences': n, 'correct': correct.shape[0]})
    if not np.all((confidences >= 0) & (confidences <= 1)):
        raise SchemaViolation({'message': 'confidences must lie in [0, 1]'})

    members = assign_bins(confidences, M)
    counts = np.bincount(members, minlength=M + 1)[1:]
    confidence_sums = np.bincount(members, weights=confidences, minlength=M + 1)[1:]
    correct_sums = np.bincount(members, weights=correct.astype(float), minlength=M + 1)[1:]

    occupied = counts > 0
    accuracy = np.zeros(M)
    mean_confidence = np.zeros(M)
    accuracy[occupied] = correct_sums[occupied] / counts[occupied]
    mean_confidence[occupied] = confidence_sums[occupied] / counts[occupied]

    edges = bin_edges(M)
    bins = tuple(
        BinStats(index=m + 1, lo=float(edges[m]), hi=float(edges[m + 1]),
                 count=int(counts[m]), accuracy=float(accuracy[m]),
                 mean_confidence=float(mean_confidence[m]))
        for m in range(M))
    return EceReport(
        ece=ece_from_bins(bins, n), bins=bins, n=n, M=M,
        mean_conf=float(confidence_sums.sum() / n),
        mean_acc=float(correct_sums.sum() / n))


def ece_from_bins(bins, n):
    return math.fsum(
        stats.count / n * abs(stats.accuracy - stats.mean_confidence)
        for stats in bins if stats.count)


def mdece(reports):
    """Unweighted mean of per-domain ECE; ``reports`` maps id -> EceReport."""
    if not reports:
        raise EmptyInput({'message': 'no domains to average'})
    return math.fsum(report.ece for report in reports.values()) / len(reports)


def accuracy_prediction_mae(per_domain):
    """Mean over domains of |mean confidence - accuracy|."""
    if not per_domain:
        raise EmptyInput({'message': 'no domains to average'})
    return math.fsum(
        abs(report.mean_conf - report.mean_acc) for report in per_domain.values()
    ) / len(per_domain)


def calibrate_domain(calibrator, domain):
    """Labels and confidences of ``calibrator`` on every sample of ``domain``.

    Calibrators exposing ``predict_batch`` are run on the whole domain; if
    that fails, samples are replayed one by one so the error names its row.
    """
    if hasattr(calibrator, 'predict_batch'):
        try:
            labels, confidences = calibrator.predict_batch(domain.logits, domain.embeddings)
            return np.asarray(labels), np.asarray(confidences, dtype=float)
        except CalibrationException:
            logger.debug('batch calibration failed on %s; replaying per sample', domain.id)

    labels = np.empty(domain.n, dtype=np.int64)
    confidences = np.empty(domain.n)
    for row in range(domain.n):
        try:
            prediction = calibrator(domain.logits[row], domain.embeddings[row])
        except Exception as error:
            raise CalibrationFailed({
                'domain': domain.id, 'row': row + 1, 'message': str(error)})
        labels[row], confidences[row] = prediction.label, prediction.confidence
    return labels, confidences


def evaluate(calibrator, dataset, M):
    """Per-domain, pooled and multi-domain ECE of ``calibrator`` on ``dataset``."""
    per_domain = {}
    all_confidences, all_correct = [], []
    for domain in dataset:
        labels, confidences = calibrate_domain(calibrator, domain)
        correct = labels == domain.labels
        per_domain[domain.id] = ece(confidences, correct, M)
        all_confidences.append(confidences)
        all_correct.append(correct)

    pooled = ece(np.concatenate(all_confidences), np.concatenate(all_correct), M)
    report = MultiDomainReport(per_domain=per_domain, mdece=mdece(per_domain), pooled=pooled)
    logger.debug('evaluated %d domains: mdece %.6f pooled %.6f',
                 len(per_domain), report.mdece, pooled.ece)
    return report


def reliability_table(report):
    """One row per bin: the data behind a reliability diagram."""
    return [
        {
            'bin': stats.index,
            'lo': stats.lo,
            'hi': stats.hi,
            'count': stats.count,
            'accuracy': stats.accuracy,
            'confidence': stats.mean_confidence,
        }
        for stats in report.bins
    ]
