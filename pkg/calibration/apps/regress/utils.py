"""Fitting and selecting the embedding -> temperature regressors."""
import itertools
import logging

import numpy as np
from sklearn.kernel_ridge import KernelRidge
from sklearn.linear_model import Ridge

from ..core.exceptions import (
    DimensionMismatch, EmptyTrainingSet, InvalidHyperparameters, SingularSystem,
    TooFewDomains)
from ..core.utils import mdts_setting
from ..metrics.utils import ece
from ..probcore.utils import confidence
from ..probcore.utils import predict as predict_labels
from .models import (
    KINDS, KernelRidgeRegressor, LinearRegressor, NearestNeighborsRegressor,
    RegressorSpec)

logger = logging.getLogger(__name__)

HUBER_MAX_ITERATIONS = 100
HUBER_WEIGHT_TOLERANCE = 1e-8


def weighted_least_squares(X, t, weights, intercept, penalty=0.0):
    """Minimum-norm solution of sum_i w_i (t_i - <x_i, theta> - b)^2 + penalty |theta|^2.

    The intercept is handled by weighted centering, so it is never penalized.
    """
    if intercept:
        total = weights.sum()
        x_mean = weights @ X / total
        t_mean = weights @ t / total
        X, t = X - x_mean, t - t_mean
    root = np.sqrt(weights)
    design, response = X * root[:, None], t * root
    if penalty > 0:
        p = X.shape[1]
        design = np.vstack([design, np.sqrt(penalty) * np.eye(p)])
        response = np.concatenate([response, np.zeros(p)])
    try:
        theta = np.linalg.lstsq(design, response, rcond=None)[0]
    except np.linalg.LinAlgError as error:
        raise SingularSystem({'message': str(error)})
    bias = float(t_mean - x_mean @ theta) if intercept else 0.0
    return theta, bias


def _fit_ols(spec, X, t, weights):
    theta, bias = weighted_least_squares(X, t, weights, spec.intercept)
    return LinearRegressor(spec=spec, theta=theta, intercept=bias)


def _fit_ridge(spec, X, t, weights):
    ridge = Ridge(
        alpha=spec.hyperparams['lam'], fit_intercept=spec.intercept, solver='cholesky')
    ridge.fit(X, t, sample_weight=weights)
    return LinearRegressor(
        spec=spec, theta=ridge.coef_, intercept=ridge.intercept_)


def _fit_huber(spec, X, t, weights):
    """Iteratively reweighted least squares on the Huber loss, started from OLS."""
    delta, alpha = spec.hyperparams['delta'], spec.hyperparams['alpha']
    huber_weights = np.ones_like(t)
    theta, bias = weighted_least_squares(X, t, weights, spec.intercept, alpha)
    for iteration in range(HUBER_MAX_ITERATIONS):
        residuals = np.abs(t - X @ theta - bias)
        updated = np.where(
            residuals <= delta, 1.0, delta / np.maximum(residuals, np.finfo(float).tiny))
        change = np.max(np.abs(updated - huber_weights))
        huber_weights = updated
        if change < HUBER_WEIGHT_TOLERANCE:
            break
        theta, bias = weighted_least_squares(
            X, t, weights * huber_weights, spec.intercept, alpha)
    else:
        logger.debug('huber IRLS stopped after %d iterations', HUBER_MAX_ITERATIONS)
    return LinearRegressor(spec=spec, theta=theta, intercept=bias)


def support_rows(n, cap):
    """Evenly strided row indices, at most ``cap`` of them."""
    if n <= cap:
        return np.arange(n)
    return np.unique(np.linspace(0, n - 1, cap).round().astype(np.int64))


def _fit_krr(spec, X, t, weights):
    rows = support_rows(X.shape[0], mdts_setting('KRR_MAX_SUPPORT'))
    gamma = spec.hyperparams['gamma']
    krr = KernelRidge(alpha=spec.hyperparams['lam'], kernel='rbf', gamma=gamma)
    krr.fit(X[rows], t[rows], sample_weight=weights[rows])
    return KernelRidgeRegressor(
        spec=spec, support=krr.X_fit_, dual=krr.dual_coef_, gamma=gamma)


def _fit_knn(spec, X, t, weights):
    return NearestNeighborsRegressor(
        spec=spec, support=X.copy(), targets=t.copy(), k=spec.hyperparams['k'])


FITTERS = {
    'ols': _fit_ols,
    'ridge': _fit_ridge,
    'huber': _fit_huber,
    'krr': _fit_krr,
    'knn': _fit_knn,
}


def fit(spec, X, t, sample_weight=None):
    """Fit ``spec`` on embeddings X (n x p) and targets t (n,).

    ``sample_weight`` is honoured by every kind except knn.
    """
    X = np.array(X, dtype=float, ndmin=2)
    t = np.asarray(t, dtype=float).reshape(-1)
    if X.shape[0] == 0 or t.shape[0] == 0:
        raise EmptyTrainingSet()
    if X.shape[0] != t.shape[0]:
        raise DimensionMismatch({'rows': X.shape[0], 'targets': t.shape[0]})
    if not np.all(np.isfinite(X)) or not np.all(np.isfinite(t)):
        raise SingularSystem({'message': 'training data contains non-finite values'})

    if sample_weight is None:
        weights = np.ones_like(t)
    else:
        weights = np.asarray(sample_weight, dtype=float).reshape(-1)
        if weights.shape != t.shape or np.any(weights < 0) or not weights.sum() > 0:
            raise InvalidHyperparameters({
                'sample_weight': 'one nonnegative weight per row, not all zero'})

    model = FITTERS[spec.kind](spec, X, t, weights)
    if spec.kind in ('ols', 'ridge', 'huber') and not np.all(np.isfinite(model.theta)):
        raise SingularSystem({'kind': spec.kind})
    return model


def predict(model, x):
    return model.predict(x)


def grid_points(grid):
    """Every combination of a grid, keys in declared order, last key fastest."""
    names = list(grid)
    for name in names:
        if not len(grid[name]):
            raise InvalidHyperparameters({name: 'grid is empty'})
    for values in itertools.product(*(grid[name] for name in names)):
        yield dict(zip(names, values))


def temperature_training_set(domains, per_domain_T, domain_weighting=False):
    """Stack (embedding, T_k) pairs of ``domains``.

    Each sample of domain k carries target T_k. With ``domain_weighting``
    every domain gets total weight 1 instead of n_k.
    """
    domains = list(domains)
    X = np.vstack([domain.embeddings for domain in domains])
    t = np.concatenate([np.full(domain.n, float(per_domain_T[domain.id])) for domain in domains])
    if domain_weighting:
        weights = np.concatenate([np.full(domain.n, 1.0 / domain.n) for domain in domains])
    else:
        weights = None
    return X, t, weights


def leave_one_domain_out_mdece(spec, calibration, per_domain_T, bins, clamp,
                               domain_weighting=False):
    """Mean ECE over domains, each calibrated by a fit on the other domains."""
    t_min, t_max = clamp
    scores = []
    for index, held_out in enumerate(calibration.domains):
        others = calibration.domains[:index] + calibration.domains[index + 1:]
        X, t, weights = temperature_training_set(others, per_domain_T, domain_weighting)
        model = fit(spec, X, t, sample_weight=weights)
        temperatures = np.clip(model.predict(held_out.embeddings), t_min, t_max)
        correct = predict_labels(held_out.logits) == held_out.labels
        report = ece(confidence(held_out.logits, temperatures), correct, bins)
        scores.append(report.ece)
    return float(np.mean(scores))


def select_hyperparams(kind, calibration, per_domain_T, grid=None, intercept=True,
                       bins=None, clamp=None, domain_weighting=False):
    """Grid search by leave-one-domain-out MDECE.

    ``grid`` maps hyperparameter names to candidate lists and defaults to
    the configured grid for ``kind``. Returns the RegressorSpec of the best
    grid point; ties keep the earlier point in declared grid order.
    """
    if kind not in KINDS:
        raise InvalidHyperparameters({'kind': kind})
    if len(calibration) < 2:
        raise TooFewDomains({'domains': len(calibration)})
    if grid is None:
        grid = mdts_setting('REGRESSOR_GRIDS')[kind]
    bins = mdts_setting('BINS') if bins is None else bins
    clamp = tuple(mdts_setting('TEMPERATURE_CLAMP')) if clamp is None else clamp

    best_spec, best_score = None, np.inf
    for point in grid_points(grid):
        spec = RegressorSpec(kind=kind, hyperparams=point, intercept=intercept)
        score = leave_one_domain_out_mdece(
            spec, calibration, per_domain_T, bins, clamp, domain_weighting)
        logger.debug('%s: leave-one-domain-out MDECE %.6f', spec, score)
        if score < best_score:
            best_spec, best_score = spec, score
    logger.info('selected %s (leave-one-domain-out MDECE %.6f)', best_spec, best_score)
    return best_spec
