import logging
import math

import numpy as np

from ..core.exceptions import EmptyDataset, InvalidBounds
from ..core.utils import mdts_setting
from ..probcore.utils import check_temperature, log_softmax_t
from .models import TemperatureModel

logger = logging.getLogger(__name__)

INVERSE_PHI = 2 / (1 + math.sqrt(5))


def nll_terms(logits, labels, T):
    """Per-sample negative log-likelihood of the labels at temperature T."""
    log_probabilities = log_softmax_t(logits, T)
    return -log_probabilities[np.arange(len(labels)), labels]


def nll(dataset, T):
    """Summed negative log-likelihood of ``dataset`` at temperature T."""
    check_temperature(T)
    if dataset is None or dataset.n == 0:
        raise EmptyDataset()
    # fsum is exactly rounded, so the total does not depend on sample order.
    return math.fsum(nll_terms(dataset.logits, dataset.labels, T))


def golden_section_search(f, lower, upper, tol=1e-6, max_iterations=200):
    """Minimize a unimodal ``f`` on [lower, upper].

    Returns ``(argmin, minimum, converged)``. The interval endpoints are
    compared with the final bracket, so a minimum on the boundary is
    returned exactly as that endpoint.
    """
    f_lower, f_upper = f(lower), f(upper)
    a, b = lower, upper
    x1 = b - INVERSE_PHI * (b - a)
    x2 = a + INVERSE_PHI * (b - a)
    f1, f2 = f(x1), f(x2)

    iteration = 0
    while b - a >= tol and iteration < max_iterations:
        if f2 > f1:
            b, x2, f2 = x2, x1, f1
            x1 = b - INVERSE_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INVERSE_PHI * (b - a)
            f2 = f(x2)
        iteration += 1
        logger.debug('golden section %d: [%.9g, %.9g]', iteration, a, b)

    converged = b - a < tol
    middle = 0.5 * (a + b)
    f_middle = f(middle)
    # Ties go to the endpoints.
    candidates = [(f_lower, lower), (f_upper, upper), (f_middle, middle)]
    minimum, argmin = min(candidates, key=lambda candidate: candidate[0])
    return argmin, minimum, converged


def fit_ts(dataset, t_min=None, t_max=None, tol=None, max_iterations=None):
    """Fit one temperature by minimizing the NLL, searching over log T."""
    default_min, default_max = mdts_setting('TEMPERATURE_CLAMP')
    t_min = default_min if t_min is None else t_min
    t_max = default_max if t_max is None else t_max
    tol = mdts_setting('TS_TOLERANCE') if tol is None else tol
    if max_iterations is None:
        max_iterations = mdts_setting('TS_MAX_ITERATIONS')

    if dataset is None or dataset.n == 0:
        raise EmptyDataset()
    if not 0 < t_min < t_max:
        raise InvalidBounds({'t_min': t_min, 't_max': t_max})

    def objective(log_t):
        return nll(dataset, math.exp(log_t))

    log_t, _, converged = golden_section_search(
        objective, math.log(t_min), math.log(t_max), tol, max_iterations)
    # Boundary hits return the bound itself.
    if log_t == math.log(t_min):
        T = t_min
    elif log_t == math.log(t_max):
        T = t_max
    else:
        T = min(max(math.exp(log_t), t_min), t_max)

    model = TemperatureModel(
        T=T, t_min=t_min, t_max=t_max,
        nll_at_T=nll(dataset, T), converged=converged)
    if not converged:
        logger.warning('temperature search for %s hit the iteration cap', dataset.id)
    logger.debug('fitted T=%.6f on %s', T, dataset.id)
    return model


def apply(model, logits):
    return model.apply(logits)
