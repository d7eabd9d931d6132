from dataclasses import dataclass

import numpy as np

from ..core.exceptions import InvalidBounds, NonPositiveTemperature
from ..probcore.models import Prediction
from ..probcore.utils import confidence, predict


@dataclass(frozen=True)
class TemperatureModel:
    """A single fitted temperature and the interval it was searched on."""
    T: float
    t_min: float
    t_max: float
    nll_at_T: float = float('nan')
    converged: bool = True

    kind = 'ts'

    def __post_init__(self):
        if not self.T > 0:
            raise NonPositiveTemperature({'T': self.T})
        if not 0 < self.t_min < self.t_max:
            raise InvalidBounds({'t_min': self.t_min, 't_max': self.t_max})
        if not self.t_min <= self.T <= self.t_max:
            raise InvalidBounds({
                'T': self.T, 't_min': self.t_min, 't_max': self.t_max,
                'message': 'T lies outside its clamp interval'})

    def apply(self, logits):
        return Prediction(
            label=int(predict(logits)), confidence=float(confidence(logits, self.T)))

    def predict_batch(self, logits, embeddings=None):
        logits = np.asarray(logits, dtype=float)
        return predict(logits), confidence(logits, self.T)

    def __call__(self, logits, embedding=None):
        return self.apply(logits)
