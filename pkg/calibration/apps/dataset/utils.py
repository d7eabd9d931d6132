import logging
import math
from numbers import Integral

import numpy as np

from ..core.exceptions import DomainTooSmall, InvalidConfig
from .models import DomainDataset, SplitResult

logger = logging.getLogger(__name__)

POOLED_ID = 'pooled'


def check_seed(seed, name='seed'):
    if isinstance(seed, bool) or not isinstance(seed, Integral) or seed < 0:
        raise InvalidConfig({name: 'must be a nonnegative integer'})
    return seed


def split_rng(seed):
    """The generator behind every split: numpy's PCG64 seeded with ``seed``."""
    check_seed(seed, 'split_seed')
    return np.random.Generator(np.random.PCG64(seed))


def split_indices(n, rng):
    """Sorted (calibration, evaluation) index arrays for one domain of size n."""
    order = rng.permutation(n)
    size = math.ceil(n / 2)
    return np.sort(order[:size]), np.sort(order[size:])


def split_half(dataset, seed):
    """Split each domain at random into a calibration and an evaluation half.

    One PCG64 stream is consumed domain by domain in dataset order, so the
    same seed always reproduces the same halves. The calibration half takes
    ceil(n/2) rows; the split is not stratified by class.
    """
    for domain in dataset:
        if domain.n < 2:
            raise DomainTooSmall({'domain': domain.id, 'n': domain.n})

    rng = split_rng(seed)
    calibration, evaluation = [], []
    for domain in dataset:
        calibration_rows, evaluation_rows = split_indices(domain.n, rng)
        calibration.append(domain.subset(calibration_rows))
        evaluation.append(domain.subset(evaluation_rows))

    logger.debug('split %d domains with seed %d', len(dataset), seed)
    return SplitResult(
        calibration=dataset.with_domains(calibration),
        evaluation=dataset.with_domains(evaluation))


def pool(dataset):
    """Concatenate every domain, in domain order, into one 'pooled' domain.

    oracle_conf survives only when every domain carries it. The pooled
    split tag is 'ood' only when every domain is out-of-distribution.
    """
    domains = list(dataset)
    with_oracle = all(domain.has_oracle for domain in domains)
    split_tag = 'ood' if all(domain.split_tag == 'ood' for domain in domains) else 'ind'
    return DomainDataset(
        id=POOLED_ID,
        labels=np.concatenate([domain.labels for domain in domains]),
        logits=np.vstack([domain.logits for domain in domains]),
        embeddings=np.vstack([domain.embeddings for domain in domains]),
        oracle_conf=(np.concatenate([domain.oracle_conf for domain in domains])
                     if with_oracle else None),
        split_tag=split_tag)
