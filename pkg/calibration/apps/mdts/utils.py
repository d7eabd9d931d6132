"""Multi-domain temperature scaling.

1. fit one temperature per calibration domain;
2. regress those temperatures on the samples' embeddings;
3. at test time, predict a temperature from each sample's embedding alone.
"""
import logging

from ..core.exceptions import EmptyDataset
from ..core.utils import mdts_setting
from ..regress.models import RegressorSpec
from ..regress.utils import fit, temperature_training_set
from ..ts.utils import fit_ts
from .models import MdtsModel

logger = logging.getLogger(__name__)


def fit_domain_temperatures(calibration, clamp=None):
    """fit_ts on every domain; returns {domain id: T}."""
    t_min, t_max = clamp or mdts_setting('TEMPERATURE_CLAMP')
    temperatures = {}
    for domain in calibration:
        try:
            model = fit_ts(domain, t_min, t_max)
        except EmptyDataset:
            raise EmptyDataset({'domain': domain.id})
        temperatures[domain.id] = model.T
        logger.info('domain %s: T=%.6f', domain.id, model.T)
    return temperatures


def fit_mdts(calibration, spec=None, clamp=None, domain_weighting=False, per_domain_T=None):
    """Fit MD-TS on the calibration domains.

    Every sample of domain k is paired with that domain's temperature T_k
    and ``spec`` is fitted on the pooled pairs. ``per_domain_T`` skips the
    per-domain fits when the temperatures are already known.
    """
    spec = spec or RegressorSpec('ols')
    clamp = tuple(clamp or mdts_setting('TEMPERATURE_CLAMP'))
    if per_domain_T is None:
        per_domain_T = fit_domain_temperatures(calibration, clamp)

    X, t, weights = temperature_training_set(calibration, per_domain_T, domain_weighting)
    regressor = fit(spec, X, t, sample_weight=weights)
    logger.info('fitted %s on %d samples from %d domains', spec, t.shape[0], len(calibration))
    return MdtsModel(
        per_domain_T={domain.id: per_domain_T[domain.id] for domain in calibration},
        regressor=regressor, clamp=clamp,
        num_classes=calibration.num_classes, embedding_dim=calibration.embedding_dim,
        domain_weighting=domain_weighting)


def predict_temperature(model, embedding):
    return model.predict_temperature(embedding)


def calibrate(model, logits, embedding):
    return model.calibrate(logits, embedding)
