from dataclasses import dataclass

import numpy as np

from ..core.exceptions import InvalidConfig, NonPositiveTemperature, SchemaViolation
from ..core.utils import mdts_setting


def _read_only(values):
    array = np.array(values, dtype=float).reshape(-1)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class HypothesisFamily:
    """Finite family of calibration maps h_T(x) = max softmax(f(x) / T) and
    the thresholds t of the disagreement sets {x: |h(x) - h'(x)| > t}.
    """
    temperatures: np.ndarray
    thresholds: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'temperatures', _read_only(self.temperatures))
        object.__setattr__(self, 'thresholds', _read_only(self.thresholds))
        if self.temperatures.size == 0 or self.thresholds.size == 0:
            raise InvalidConfig({'family': 'temperature and threshold grids must be nonempty'})
        if not np.all(self.temperatures > 0):
            raise NonPositiveTemperature({'temperatures': self.temperatures.tolist()})
        if not np.all((self.thresholds >= 0) & (self.thresholds <= 1)):
            raise InvalidConfig({'thresholds': 'must lie in [0, 1]'})

    @classmethod
    def grid(cls, temp_grid=None, threshold_grid=None, temp_range=None):
        """Geometric temperature grid on ``temp_range`` and uniform thresholds on [0, 1]."""
        defaults = mdts_setting('BOUND')
        if temp_grid is None:
            temp_grid = defaults['TEMP_GRID']
        if threshold_grid is None:
            threshold_grid = defaults['THRESHOLD_GRID']
        low, high = defaults['TEMP_RANGE'] if temp_range is None else temp_range
        if temp_grid < 1 or threshold_grid < 1:
            raise InvalidConfig({'family': 'grid sizes must be positive'})
        return cls(temperatures=np.geomspace(low, high, temp_grid),
                   thresholds=np.linspace(0.0, 1.0, threshold_grid))


@dataclass(frozen=True, eq=False)
class MixtureWeights:
    alpha: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'alpha', _read_only(self.alpha))
        if self.alpha.size == 0:
            raise SchemaViolation({'alpha': 'at least one weight is required'})
        if np.any(self.alpha < 0) or abs(self.alpha.sum() - 1.0) > 1e-12:
            raise SchemaViolation({'alpha': 'weights must be nonnegative and sum to 1'})

    @classmethod
    def vertex(cls, K, index):
        alpha = np.zeros(K)
        alpha[index] = 1.0
        return cls(alpha)

    def __len__(self):
        return self.alpha.shape[0]


@dataclass(frozen=True)
class DivergenceReport:
    """Both sides of the domain-adaptation bound on the OOD risk of a calibrator.

    ``slack`` stands in for the finite-sample term and is always reported.
    """
    d_hbar: float
    lambda_: float
    alpha: MixtureWeights
    lhs: float
    rhs: float
    slack: float

    def __post_init__(self):
        if not 0 <= self.d_hbar <= 1:
            raise SchemaViolation({'d_hbar': 'must lie in [0, 1]'})

    @property
    def holds(self):
        return self.lhs <= self.rhs
