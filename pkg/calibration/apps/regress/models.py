from dataclasses import dataclass, field
from numbers import Integral, Real

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.metrics.pairwise import rbf_kernel

from ..core.exceptions import DimensionMismatch, InvalidHyperparameters
from ..core.utils import mdts_setting

KINDS = ('ols', 'ridge', 'huber', 'krr', 'knn')
LINEAR_KINDS = ('ols', 'ridge', 'huber')

# name -> (lower bound, lower bound inclusive, integer valued)
HYPERPARAMETERS = {
    'ols': {},
    'ridge': {'lam': (0.0, True, False)},
    'huber': {'delta': (0.0, False, False), 'alpha': (0.0, True, False)},
    'krr': {'gamma': (0.0, False, False), 'lam': (0.0, False, False)},
    'knn': {'k': (1, True, True)},
}

# Query rows per distance block in nearest-neighbour prediction.
KNN_BLOCK_ROWS = 256


def validate_hyperparams(kind, hyperparams):
    if kind not in KINDS:
        raise InvalidHyperparameters({
            'kind': kind, 'message': 'kind must be one of %s' % ', '.join(KINDS)})
    expected = HYPERPARAMETERS[kind]
    given = dict(hyperparams or {})
    if set(given) != set(expected):
        raise InvalidHyperparameters({
            'kind': kind,
            'message': 'expected hyperparameters [%s], got [%s]' % (
                ', '.join(sorted(expected)), ', '.join(sorted(given)))})

    checked = {}
    for name, (lower, inclusive, integral) in expected.items():
        value = given[name]
        if isinstance(value, bool) or not isinstance(value, Real):
            raise InvalidHyperparameters({name: 'must be a number'})
        if integral:
            if float(value) != int(value):
                raise InvalidHyperparameters({name: 'must be an integer'})
            value = int(value)
        else:
            value = float(value)
        if not np.isfinite(value) or value < lower or (value == lower and not inclusive):
            raise InvalidHyperparameters({
                name: 'must be %s %s' % ('>=' if inclusive else '>', lower)})
        checked[name] = value
    return checked


@dataclass(frozen=True)
class RegressorSpec:
    """Which regressor to fit, with its hyperparameters."""
    kind: str
    hyperparams: dict = field(default_factory=dict)
    intercept: bool = True

    def __post_init__(self):
        object.__setattr__(
            self, 'hyperparams', validate_hyperparams(self.kind, self.hyperparams))

    @classmethod
    def default(cls, kind, intercept=True):
        defaults = mdts_setting('REGRESSOR_DEFAULTS')
        if kind not in defaults:
            raise InvalidHyperparameters({'kind': kind})
        return cls(kind=kind, hyperparams=defaults[kind], intercept=intercept)

    def __str__(self):
        params = ', '.join('%s=%g' % item for item in sorted(self.hyperparams.items()))
        return '%s(%s)' % (self.kind, params) if params else self.kind


def _as_rows(x, dim):
    """Promote ``x`` to a 2-D batch; returns the batch and whether x was one row."""
    array = np.asarray(x, dtype=float)
    single = array.ndim == 1
    rows = np.atleast_2d(array)
    if rows.ndim != 2 or rows.shape[1] != dim:
        raise DimensionMismatch({'expected': dim, 'received': list(array.shape)})
    return rows, single


class FittedRegressor:
    """Common interface of the fitted embedding -> temperature regressors."""

    @property
    def kind(self):
        return self.spec.kind

    @property
    def input_dim(self):
        raise NotImplementedError

    def predict_rows(self, rows):
        raise NotImplementedError

    def predict(self, x):
        rows, single = _as_rows(x, self.input_dim)
        values = self.predict_rows(rows)
        return float(values[0]) if single else values


@dataclass(frozen=True, eq=False)
class LinearRegressor(FittedRegressor):
    """ols, ridge and huber fits: <x, theta> + intercept."""
    spec: RegressorSpec
    theta: np.ndarray
    intercept: float = 0.0

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float).reshape(-1)
        theta.setflags(write=False)
        object.__setattr__(self, 'theta', theta)
        object.__setattr__(self, 'intercept', float(self.intercept))

    @property
    def input_dim(self):
        return self.theta.shape[0]

    def predict_rows(self, rows):
        return rows @ self.theta + self.intercept


@dataclass(frozen=True, eq=False)
class KernelRidgeRegressor(FittedRegressor):
    """RBF kernel ridge fit: sum_i dual_i * exp(-gamma * |x - support_i|^2)."""
    spec: RegressorSpec
    support: np.ndarray
    dual: np.ndarray
    gamma: float

    def __post_init__(self):
        support = np.array(self.support, dtype=float, ndmin=2)
        dual = np.array(self.dual, dtype=float).reshape(-1)
        if dual.shape[0] != support.shape[0]:
            raise DimensionMismatch({
                'support_rows': support.shape[0], 'dual': dual.shape[0]})
        support.setflags(write=False)
        dual.setflags(write=False)
        object.__setattr__(self, 'support', support)
        object.__setattr__(self, 'dual', dual)
        object.__setattr__(self, 'gamma', float(self.gamma))

    @property
    def input_dim(self):
        return self.support.shape[1]

    def predict_rows(self, rows):
        return rbf_kernel(rows, self.support, gamma=self.gamma) @ self.dual


@dataclass(frozen=True, eq=False)
class NearestNeighborsRegressor(FittedRegressor):
    """Mean target of the k nearest training embeddings.

    Distance ties go to the lowest training index.
    """
    spec: RegressorSpec
    support: np.ndarray
    targets: np.ndarray
    k: int

    def __post_init__(self):
        support = np.array(self.support, dtype=float, ndmin=2)
        targets = np.array(self.targets, dtype=float).reshape(-1)
        if targets.shape[0] != support.shape[0]:
            raise DimensionMismatch({
                'support_rows': support.shape[0], 'targets': targets.shape[0]})
        support.setflags(write=False)
        targets.setflags(write=False)
        object.__setattr__(self, 'support', support)
        object.__setattr__(self, 'targets', targets)
        object.__setattr__(self, 'k', int(self.k))

    @property
    def input_dim(self):
        return self.support.shape[1]

    def predict_rows(self, rows):
        k = min(self.k, self.targets.shape[0])
        values = np.empty(rows.shape[0])
        for start in range(0, rows.shape[0], KNN_BLOCK_ROWS):
            block = slice(start, start + KNN_BLOCK_ROWS)
            distances = cdist(rows[block], self.support, 'sqeuclidean')
            kth = np.partition(distances, k - 1, axis=1)[:, k - 1:k]
            closer = distances < kth
            tied = distances == kth
            # Fill the remaining slots with tied points in index order.
            missing = k - closer.sum(axis=1, keepdims=True)
            chosen = closer | (tied & (np.cumsum(tied, axis=1) <= missing))
            values[block] = chosen @ self.targets / k
        return values
