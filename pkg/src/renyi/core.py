"""Order-alpha entropy of a partition and the ``g_alpha`` transform pair.

Entropies are plain floats in bits; ``math.inf`` stands for an infinite
entropy (no acceptable partition exists).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, InputError
from .families import CellFamily, is_mu_partition
from .measure import DiscreteMeasure

#: Orders closer than this to 1 are rejected; use the Shannon reference instead.
ALPHA_GUARD = 1e-6


@dataclass(frozen=True)
class AlphaOrder:
    value: float

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v) or v <= 0:
            raise InputError(f"alpha must be positive and finite, got {self.value!r}")
        if abs(v - 1.0) < ALPHA_GUARD:
            raise InputError(f"alpha must differ from 1 by at least {ALPHA_GUARD}")
        object.__setattr__(self, "value", v)

    def __float__(self) -> float:
        return self.value

    @property
    def concave(self) -> bool:
        """True for alpha in (0, 1), where ``x**alpha`` is concave and subadditive."""
        return self.value < 1.0


def as_alpha(alpha) -> AlphaOrder:
    return alpha if isinstance(alpha, AlphaOrder) else AlphaOrder(alpha)


def g_alpha(x: float, alpha) -> float:
    """``2 ** ((1 - alpha) * x)``; maps an entropy to a power sum.

    ``g_alpha(inf)`` is ``inf`` for alpha < 1 and ``0`` for alpha > 1.
    """
    a = as_alpha(alpha).value
    return 2.0 ** ((1.0 - a) * x)


def g_alpha_inv(x: float, alpha) -> float:
    a = as_alpha(alpha).value
    if not x > 0:
        raise InputError(f"g_alpha_inv needs a positive argument, got {x!r}")
    return math.log2(x) / (1.0 - a)


def renyi_of_masses(masses, alpha) -> float:
    """Entropy of order alpha of a mass profile; zero masses are skipped."""
    a = as_alpha(alpha).value
    m = np.asarray(masses, dtype=float)
    m = m[m > 0]
    if m.size == 0:
        raise ContractError("mass profile has no positive entry")
    return math.log2(float(np.sum(m ** a))) / (1.0 - a) + 0.0


def shannon_of_masses(masses) -> float:
    m = np.asarray(masses, dtype=float)
    m = m[m > 0]
    return float(-np.sum(m * np.log2(m))) + 0.0


def partition_entropy(mu: DiscreteMeasure, P: CellFamily, alpha) -> float:
    """Renyi entropy of order alpha of ``mu`` over the cells of ``P``."""
    if not is_mu_partition(P, mu):
        raise ContractError("not a mu-partition: cells overlap or leave mass uncovered")
    return renyi_of_masses(P.cell_masses(mu), alpha)


def shannon_partition_entropy(mu: DiscreteMeasure, P: CellFamily) -> float:
    """Shannon entropy of ``mu`` over ``P``, the alpha -> 1 limit."""
    if not is_mu_partition(P, mu):
        raise ContractError("not a mu-partition: cells overlap or leave mass uncovered")
    return shannon_of_masses(P.cell_masses(mu))
