import dataclasses

import numpy as np

from kquad.designs import DesignSet
from kquad.kernels import DEFAULT_SCALE

from .core import QuadratureMethod, QuadratureRule


def equal_weights(design: DesignSet, scale: float = DEFAULT_SCALE) -> QuadratureRule:
    """The rule w_i = 1/n. Its absolute weight sum is 1 for every n."""
    return QuadratureRule(design=design, weights=np.full(design.n, 1.0 / design.n), scale=scale)


@dataclasses.dataclass(frozen=True)
class EqualWeights(QuadratureMethod):
    scale: float = DEFAULT_SCALE

    def build(self, design: DesignSet) -> QuadratureRule:
        return equal_weights(design, self.scale)
