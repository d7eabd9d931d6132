from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from ..core.exceptions import DimensionMismatch, InvalidBounds, ModelMismatch
from ..probcore.models import Prediction
from ..probcore.utils import confidence, predict
from ..regress.models import FittedRegressor


@dataclass(frozen=True, eq=False)
class MdtsModel:
    """Per-domain temperatures plus the regressor that predicts a temperature
    from an embedding. Predicted temperatures are clamped to ``clamp``.
    """
    per_domain_T: Dict[str, float]
    regressor: FittedRegressor
    clamp: Tuple[float, float]
    num_classes: int
    embedding_dim: int
    domain_weighting: bool = field(default=False)

    kind = 'mdts'

    def __post_init__(self):
        t_min, t_max = (float(bound) for bound in self.clamp)
        if not 0 < t_min < t_max:
            raise InvalidBounds({'t_min': t_min, 't_max': t_max})
        object.__setattr__(self, 'clamp', (t_min, t_max))
        object.__setattr__(self, 'per_domain_T', {
            str(domain_id): float(T) for domain_id, T in self.per_domain_T.items()})
        for domain_id, T in self.per_domain_T.items():
            if not t_min <= T <= t_max:
                raise InvalidBounds({
                    'domain': domain_id, 'T': T,
                    'message': 'per-domain temperature outside the clamp interval'})
        if self.regressor.input_dim != self.embedding_dim:
            raise ModelMismatch({
                'embedding_dim': self.embedding_dim,
                'regressor_input_dim': self.regressor.input_dim})

    def predict_temperature(self, embedding):
        return np.clip(self.regressor.predict(embedding), *self.clamp)

    def _check_logits(self, logits):
        logits = np.asarray(logits, dtype=float)
        if logits.shape[-1] != self.num_classes:
            raise DimensionMismatch({
                'expected_classes': self.num_classes, 'received': list(logits.shape)})
        return logits

    def predict_batch(self, logits, embeddings):
        logits = self._check_logits(logits)
        temperatures = self.predict_temperature(np.atleast_2d(embeddings))
        return predict(logits), confidence(logits, temperatures)

    def calibrate(self, logits, embedding):
        logits = self._check_logits(logits)
        temperature = float(self.predict_temperature(embedding))
        return Prediction(
            label=int(predict(logits)), confidence=float(confidence(logits, temperature)))

    def __call__(self, logits, embedding):
        return self.calibrate(logits, embedding)
