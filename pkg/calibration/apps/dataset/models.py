from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..core.exceptions import (
    EmptyDataset, EmptyInput, LabelOutOfRange, NonFiniteValue, SchemaViolation)

SPLIT_TAGS = ('ind', 'ood')


def _frozen(array):
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class DomainDataset:
    """One domain's labels, logits f(x) and embeddings Psi(x).

    ``oracle_conf`` is the ground-truth calibrated confidence, available on
    synthetic data only.
    """
    id: str
    labels: np.ndarray
    logits: np.ndarray
    embeddings: np.ndarray
    oracle_conf: Optional[np.ndarray] = None
    split_tag: str = 'ind'

    def __post_init__(self):
        labels = np.asarray(self.labels)
        logits = np.array(self.logits, dtype=float, ndmin=2)
        embeddings = np.array(self.embeddings, dtype=float, ndmin=2)

        if labels.ndim != 1 or labels.shape[0] == 0:
            raise EmptyDataset({'domain': self.id})
        n = labels.shape[0]
        if logits.ndim != 2 or logits.shape[0] != n:
            raise SchemaViolation({
                'domain': self.id,
                'message': 'logits must be an n x J matrix with n = %d' % n})
        if embeddings.ndim != 2 or embeddings.shape[0] != n:
            raise SchemaViolation({
                'domain': self.id,
                'message': 'embeddings must be an n x p matrix with n = %d' % n})
        if self.split_tag not in SPLIT_TAGS:
            raise SchemaViolation({
                'domain': self.id,
                'message': 'split_tag must be one of %s' % (SPLIT_TAGS,)})
        if not np.all(np.isfinite(logits)) or not np.all(np.isfinite(embeddings)):
            raise NonFiniteValue({'domain': self.id})

        if not np.issubdtype(labels.dtype, np.integer):
            if not np.all(np.isfinite(labels)) or np.any(labels != np.round(labels)):
                raise SchemaViolation({
                    'domain': self.id, 'message': 'labels must be integers'})
        labels = labels.astype(np.int64)
        num_classes = logits.shape[1]
        bad = np.flatnonzero((labels < 0) | (labels >= num_classes))
        if bad.size:
            raise LabelOutOfRange({
                'domain': self.id, 'row': int(bad[0]) + 1,
                'label': int(labels[bad[0]]), 'num_classes': num_classes})

        oracle = self.oracle_conf
        if oracle is not None:
            oracle = np.array(oracle, dtype=float)
            if oracle.shape != (n,):
                raise SchemaViolation({
                    'domain': self.id,
                    'message': 'oracle_conf must have one entry per sample'})
            if not np.all(np.isfinite(oracle)):
                raise NonFiniteValue({'domain': self.id, 'column': 'oracle_conf'})
            low = 1.0 / num_classes
            bad = np.flatnonzero((oracle < low - 1e-12) | (oracle > 1.0 + 1e-12))
            if bad.size:
                raise SchemaViolation({
                    'domain': self.id, 'row': int(bad[0]) + 1,
                    'message': 'oracle_conf must lie in [1/J, 1]'})
            oracle = _frozen(oracle)

        object.__setattr__(self, 'labels', _frozen(labels))
        object.__setattr__(self, 'logits', _frozen(logits))
        object.__setattr__(self, 'embeddings', _frozen(embeddings))
        object.__setattr__(self, 'oracle_conf', oracle)

    @property
    def n(self):
        return self.labels.shape[0]

    @property
    def num_classes(self):
        return self.logits.shape[1]

    @property
    def embedding_dim(self):
        return self.embeddings.shape[1]

    @property
    def has_oracle(self):
        return self.oracle_conf is not None

    def subset(self, indices, id=None):
        indices = np.asarray(indices, dtype=np.int64)
        return DomainDataset(
            id=self.id if id is None else id,
            labels=self.labels[indices],
            logits=self.logits[indices],
            embeddings=self.embeddings[indices],
            oracle_conf=None if self.oracle_conf is None else self.oracle_conf[indices],
            split_tag=self.split_tag)

    def __str__(self):
        return '%s (%s, n=%d)' % (self.id, self.split_tag, self.n)


@dataclass(frozen=True)
class MultiDomainDataset:
    num_classes: int
    embedding_dim: int
    domains: Tuple[DomainDataset, ...] = field(default_factory=tuple)

    def __post_init__(self):
        domains = tuple(self.domains)
        if not domains:
            raise EmptyInput({'message': 'a multi-domain dataset needs at least one domain'})
        if self.num_classes < 1 or self.embedding_dim < 1:
            raise SchemaViolation({
                'message': 'num_classes and embedding_dim must be positive'})
        seen = set()
        for domain in domains:
            if domain.num_classes != self.num_classes:
                raise SchemaViolation({
                    'domain': domain.id,
                    'message': 'expected %d classes, found %d' % (
                        self.num_classes, domain.num_classes)})
            if domain.embedding_dim != self.embedding_dim:
                raise SchemaViolation({
                    'domain': domain.id,
                    'message': 'expected embedding_dim %d, found %d' % (
                        self.embedding_dim, domain.embedding_dim)})
            if domain.id in seen:
                raise SchemaViolation({
                    'domain': domain.id, 'message': 'duplicate domain id'})
            seen.add(domain.id)
        object.__setattr__(self, 'domains', domains)

    def __iter__(self):
        return iter(self.domains)

    def __len__(self):
        return len(self.domains)

    @property
    def ids(self):
        return [domain.id for domain in self.domains]

    def get(self, domain_id):
        for domain in self.domains:
            if domain.id == domain_id:
                return domain
        raise KeyError(domain_id)

    def has_split(self, split_tag):
        return any(domain.split_tag == split_tag for domain in self.domains)

    def select(self, split_tag):
        """The sub-dataset of domains tagged ``split_tag``, order preserved."""
        return self.with_domains(
            [domain for domain in self.domains if domain.split_tag == split_tag])

    def with_domains(self, domains):
        return MultiDomainDataset(
            num_classes=self.num_classes,
            embedding_dim=self.embedding_dim,
            domains=tuple(domains))


@dataclass(frozen=True)
class SplitResult:
    calibration: MultiDomainDataset
    evaluation: MultiDomainDataset
