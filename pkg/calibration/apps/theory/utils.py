"""Empirical checks of the multi-domain calibration bound.

Calibration maps are callables taking a DomainDataset and returning one
confidence per sample. Every supremum and minimum below runs over the
finite HypothesisFamily by enumeration.
"""
import itertools
import logging
import math

import numpy as np

from ..core.exceptions import EmptyInput, InvalidConfig, MissingOracle, TooManyDomains
from ..core.utils import mdts_setting
from ..probcore.utils import confidence
from .models import DivergenceReport, MixtureWeights

logger = logging.getLogger(__name__)


def confidence_map(calibrator):
    """Calibration map of anything exposing ``predict_batch``."""
    def h(samples):
        return np.asarray(calibrator.predict_batch(samples.logits, samples.embeddings)[1],
                          dtype=float)
    return h


def temperature_map(T):
    def h(samples):
        return confidence(samples.logits, T)
    return h


def oracle_map(samples):
    if samples.oracle_conf is None:
        raise MissingOracle({'domain': samples.id})
    return samples.oracle_conf


def risk(h, samples):
    """Mean |h*(x) - h(x)| over ``samples``, h* being the oracle confidence."""
    oracle = oracle_map(samples)
    return math.fsum(np.abs(oracle - np.asarray(h(samples), dtype=float))) / samples.n


def family_values(samples, family):
    """G x n matrix of h_T(x) for every temperature of ``family``."""
    return np.stack([confidence(samples.logits, T) for T in family.temperatures])


def disagreement_rates(samples, family):
    """G x G x R empirical probabilities of {x: |h(x) - h'(x)| > t}."""
    if samples.n == 0:
        raise EmptyInput({'domain': samples.id})
    values = family_values(samples, family)
    gaps = np.abs(values[:, None, :] - values[None, :, :])
    return (gaps[..., None] > family.thresholds).mean(axis=2)


def _divergence(rates_a, rates_b):
    return float(np.clip(np.max(np.abs(rates_a - rates_b)), 0.0, 1.0))


def h_divergence(samples_a, samples_b, family):
    return _divergence(disagreement_rates(samples_a, family),
                       disagreement_rates(samples_b, family))


def _family_risks(samples, family):
    oracle = oracle_map(samples)
    values = family_values(samples, family)
    return np.array([math.fsum(row) / samples.n for row in np.abs(values - oracle)])


class MixtureTerms:
    """Per-domain disagreement rates and family risks, computed once.

    Mixture quantities are linear in alpha: weighting domain k's samples by
    alpha_k / n_k makes every empirical probability and risk the alpha-mix
    of the per-domain ones.
    """

    def __init__(self, ind_domains, ood, family):
        self.ind_domains = list(ind_domains)
        if not self.ind_domains:
            raise EmptyInput({'message': 'no in-distribution domains'})
        self.ood = ood
        self.family = family
        self.ind_rates = np.stack([disagreement_rates(domain, family)
                                   for domain in self.ind_domains])
        self.ood_rates = disagreement_rates(ood, family)
        self.ind_risks = np.stack([_family_risks(domain, family)
                                   for domain in self.ind_domains])
        self.ood_risks = _family_risks(ood, family)

    @property
    def K(self):
        return len(self.ind_domains)

    def divergence(self, alpha):
        return _divergence(np.tensordot(alpha, self.ind_rates, axes=1), self.ood_rates)

    def joint_risk(self, alpha):
        """lambda: smallest mixture risk plus OOD risk of a single family member."""
        mixture_risks = alpha @ self.ind_risks
        return float(np.min(mixture_risks + self.ood_risks))

    def objective(self, alpha):
        return 0.5 * self.divergence(alpha) + self.joint_risk(alpha)


def simplex_lattice(K, resolution):
    """Points m / resolution with sum(m) = resolution, in lexicographic order."""
    for head in itertools.product(range(resolution + 1), repeat=K - 1):
        last = resolution - sum(head)
        if last >= 0:
            yield np.array(head + (last,), dtype=float) / resolution


def optimize_alpha(ind_domains, ood, family, grid_resolution=None, terms=None):
    """Lattice minimizer of d/2 + lambda over mixture weights.

    Ties keep the lexicographically smallest alpha.
    """
    bound = mdts_setting('BOUND')
    if grid_resolution is None:
        grid_resolution = bound['ALPHA_RESOLUTION']
    if grid_resolution < 2:
        raise InvalidConfig({'alpha_resolution': 'must be at least 2'})
    domains = list(ind_domains)
    if len(domains) > bound['MAX_DOMAINS']:
        raise TooManyDomains({'K': len(domains), 'max': bound['MAX_DOMAINS']})
    if terms is None:
        terms = MixtureTerms(domains, ood, family)

    best_alpha, best_value = None, math.inf
    for alpha in simplex_lattice(terms.K, grid_resolution):
        value = terms.objective(alpha)
        logger.debug('alpha %s: objective %.6f', alpha.tolist(), value)
        if value < best_value:
            best_alpha, best_value = alpha, value
    logger.info('alpha %s minimizes the mixture objective (%.6f)',
                best_alpha.tolist(), best_value)
    return MixtureWeights(best_alpha)


def check_bound(ind_domains, ood, hhat, family, alpha, slack=None, terms=None):
    """OOD risk of ``hhat`` against the mixture risk plus divergence, lambda and slack."""
    slack = mdts_setting('BOUND')['SLACK'] if slack is None else float(slack)
    if slack < 0:
        raise InvalidConfig({'slack': 'must be nonnegative'})
    domains = list(ind_domains)
    if terms is None:
        terms = MixtureTerms(domains, ood, family)
    weights = alpha.alpha

    d_hbar = terms.divergence(weights)
    lambda_ = terms.joint_risk(weights)
    lhs = risk(hhat, ood)
    mixture_risk = math.fsum(
        weight * risk(hhat, domain) for weight, domain in zip(weights, domains))
    rhs = mixture_risk + 0.5 * d_hbar + lambda_ + slack
    report = DivergenceReport(
        d_hbar=d_hbar, lambda_=lambda_, alpha=alpha, lhs=lhs, rhs=rhs, slack=slack)
    logger.info('bound %s: lhs %.6f rhs %.6f (d %.6f, lambda %.6f, slack %.4f)',
                'holds' if report.holds else 'fails', lhs, rhs, d_hbar, lambda_, slack)
    return report
