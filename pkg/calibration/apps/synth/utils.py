"""Synthetic multi-domain data with known calibrating temperatures.

Each domain k draws a scale c_k. Labels are drawn from softmax(z) while the
classifier presents logits c_k * z, so T = c_k is the temperature that
calibrates domain k and max softmax(z) is the oracle confidence.
"""
import logging

import numpy as np

from ..core.exceptions import MissingOracle
from ..dataset.models import DomainDataset, MultiDomainDataset
from ..metrics.models import MultiDomainReport
from ..metrics.utils import ece, mdece
from ..probcore.utils import predict, softmax_t

logger = logging.getLogger(__name__)


def draw_labels(probabilities, rng):
    """One categorical draw per row of ``probabilities``."""
    thresholds = rng.random(probabilities.shape[0])[:, None]
    labels = (np.cumsum(probabilities, axis=1) < thresholds).sum(axis=1)
    return np.minimum(labels, probabilities.shape[1] - 1)


def mixing_matrix(size, rng):
    """A seeded orthogonal matrix (QR of a Gaussian draw, signs fixed by R)."""
    q, r = np.linalg.qr(rng.normal(size=(size, size)))
    return q * np.sign(np.diag(r))


def domain_id(index, config):
    if index < config.K:
        return 'ind-%02d' % index
    return 'ood-%02d' % (index - config.K)


def generate(config):
    """Build the dataset and the {domain id: c_k} ground truth for ``config``."""
    rng = np.random.Generator(np.random.PCG64(config.seed))
    mixing = None
    if config.embed_mode == 'mixed':
        mixing = mixing_matrix(config.J + config.mix_dim, rng)

    domains, ground_truth = [], {}
    for index in range(config.K + config.K_ood):
        scale = float(rng.uniform(*config.c_range))
        z = rng.normal(scale=config.logit_scale, size=(config.n_k, config.J))
        probabilities = softmax_t(z, 1.0)
        labels = draw_labels(probabilities, rng)

        if mixing is None:
            noise = rng.normal(scale=config.embed_noise, size=config.n_k)
            embeddings = np.column_stack([z, scale + noise])
        else:
            noise = rng.normal(
                scale=config.embed_noise, size=(config.n_k, config.J + config.mix_dim))
            latent = np.column_stack([z, np.full((config.n_k, config.mix_dim), scale)])
            embeddings = latent @ mixing.T + noise

        name = domain_id(index, config)
        domains.append(DomainDataset(
            id=name, labels=labels, logits=scale * z, embeddings=embeddings,
            oracle_conf=probabilities.max(axis=1),
            split_tag='ind' if index < config.K else 'ood'))
        ground_truth[name] = scale
        logger.debug('generated %s with c=%.4f', name, scale)

    dataset = MultiDomainDataset(
        num_classes=config.J, embedding_dim=config.embedding_dim, domains=tuple(domains))
    logger.info('generated %d in-distribution and %d held-out domains (seed %d)',
                config.K, config.K_ood, config.seed)
    return dataset, ground_truth


def oracle_report(domain, M):
    """ECE of the oracle confidences against the classifier's own labels."""
    if not domain.has_oracle:
        raise MissingOracle({'domain': domain.id})
    correct = predict(domain.logits) == domain.labels
    return ece(domain.oracle_conf, correct, M)


def oracle_ece(domain, M):
    return oracle_report(domain, M).ece


def oracle_multi_domain_report(dataset, M):
    """Per-domain, pooled and multi-domain ECE of the oracle confidences."""
    per_domain = {domain.id: oracle_report(domain, M) for domain in dataset}
    confidences = np.concatenate([domain.oracle_conf for domain in dataset])
    correct = np.concatenate([predict(domain.logits) == domain.labels for domain in dataset])
    return MultiDomainReport(
        per_domain=per_domain, mdece=mdece(per_domain), pooled=ece(confidences, correct, M))
