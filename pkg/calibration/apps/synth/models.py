from dataclasses import dataclass
from numbers import Integral, Real
from typing import Optional, Tuple

from ..core.exceptions import InvalidConfig
from ..core.utils import mdts_setting

EMBED_MODES = ('direct', 'mixed')


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of the synthetic multi-domain generator.

    Unset optional fields take the configured ``MDTS['SYNTH']`` defaults.
    ``K_ood`` adds held-out domains whose scales come from the same range.
    """
    K: int
    J: int
    n_k: int
    logit_scale: Optional[float] = None
    c_range: Optional[Tuple[float, float]] = None
    embed_mode: Optional[str] = None
    embed_noise: Optional[float] = None
    mix_dim: Optional[int] = None
    seed: int = 0
    K_ood: int = 0

    def __post_init__(self):
        defaults = mdts_setting('SYNTH')
        for name, key in (('logit_scale', 'LOGIT_SCALE'), ('c_range', 'C_RANGE'),
                          ('embed_mode', 'EMBED_MODE'), ('embed_noise', 'EMBED_NOISE'),
                          ('mix_dim', 'MIX_DIM')):
            if getattr(self, name) is None:
                object.__setattr__(self, name, defaults[key])
        object.__setattr__(self, 'c_range', tuple(float(c) for c in self.c_range))
        self.validate()

    def validate(self):
        errors = {}
        for name in ('K', 'J', 'n_k', 'mix_dim'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, Integral) or value < 1:
                errors[name] = 'must be a positive integer'
        if isinstance(self.J, Integral) and self.J == 1:
            errors['J'] = 'at least two classes are required'
        if isinstance(self.K_ood, bool) or not isinstance(self.K_ood, Integral) or self.K_ood < 0:
            errors['K_ood'] = 'must be a nonnegative integer'
        if not isinstance(self.logit_scale, Real) or not self.logit_scale > 0:
            errors['logit_scale'] = 'must be positive'
        if len(self.c_range) != 2 or not 0 < self.c_range[0] < self.c_range[1]:
            errors['c_range'] = 'must satisfy 0 < c_lo < c_hi'
        if self.embed_mode not in EMBED_MODES:
            errors['embed_mode'] = 'must be one of %s' % ', '.join(EMBED_MODES)
        if not isinstance(self.embed_noise, Real) or not self.embed_noise >= 0:
            errors['embed_noise'] = 'must be nonnegative'
        if isinstance(self.seed, bool) or not isinstance(self.seed, Integral) or self.seed < 0:
            errors['seed'] = 'must be a nonnegative integer'
        if errors:
            raise InvalidConfig(errors)

    @property
    def embedding_dim(self):
        return self.J + 1 if self.embed_mode == 'direct' else self.J + self.mix_dim
