from dataclasses import dataclass, field
from typing import Dict, Tuple


@dataclass(frozen=True)
class BinStats:
    """Confidence bin ((index - 1) / M, index / M]; empty bins hold zeros."""
    index: int
    lo: float
    hi: float
    count: int
    accuracy: float
    mean_confidence: float


@dataclass(frozen=True)
class EceReport:
    ece: float
    bins: Tuple[BinStats, ...]
    n: int
    M: int
    mean_conf: float
    mean_acc: float


@dataclass(frozen=True)
class MultiDomainReport:
    per_domain: Dict[str, EceReport] = field(default_factory=dict)
    mdece: float = 0.0
    pooled: EceReport = None

    @property
    def bins(self):
        return self.pooled.M

    @property
    def pooled_ece(self):
        return self.pooled.ece
