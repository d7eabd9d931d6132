import os
from dataclasses import dataclass
from typing import Optional

from ..core.exceptions import IoFailure, MissingFile
from ..dataset.utils import check_seed
from ..metrics.utils import check_bin_count

MSP_MODEL = 'msp'


@dataclass(frozen=True)
class RunConfig:
    """Flags shared by the subcommands; paths are checked before any work."""
    command: str
    data: Optional[str] = None
    model: Optional[str] = None
    bins: int = 20
    seed: int = 0
    split_seed: int = 0
    out: Optional[str] = None

    def validate(self):
        if self.data is not None and not os.path.exists(self.data):
            raise MissingFile({'path': self.data})
        if self.model not in (None, MSP_MODEL) and not os.path.isfile(self.model):
            raise MissingFile({'path': self.model})
        if self.out is not None and os.path.exists(self.out) and not os.path.isdir(self.out):
            raise IoFailure({'path': self.out, 'message': 'output path is not a directory'})
        check_bin_count(self.bins)
        check_seed(self.seed)
        check_seed(self.split_seed, 'split_seed')
        return self
