"""Entropy bounds for a mixture of sources.

For ``mu = sum_k a_k mu_k`` and any family ``Q``::

    g^-1( sum_k a_k       g(H(mu_k)) )  <=  H(mu)  <=  g^-1( sum_k a_k**alpha g(H(mu_k)) )

with ``g = g_alpha``.  The lower bound is a quasi-arithmetic mean of the
component entropies; the upper bound adds the cost of not knowing which
source emitted a symbol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .core import as_alpha, g_alpha, g_alpha_inv
from .errors import InputError
from .families import CellFamily
from .measure import MASS_TOL, PROB_TOL, MixtureSpec, mix
from .search import DEFAULT_BUDGET, classical_entropy

BOUND_TOL = 1e-9


def _check(entropies: Sequence[float], coeffs: Sequence[float]):
    if len(entropies) != len(coeffs) or not coeffs:
        raise InputError("need one coefficient per entropy")
    if any(a < -PROB_TOL or a > 1 + PROB_TOL for a in coeffs):
        raise InputError("coefficients must lie in [0, 1]")
    if abs(sum(coeffs) - 1.0) > PROB_TOL:
        raise InputError("coefficients must sum to 1")
    # rounding can leave a point mass at -1e-16 bits
    if any(h < -MASS_TOL or math.isnan(h) for h in entropies):
        raise InputError("entropies must be nonnegative")


def _bound(entropies, coeffs, alpha, power: bool) -> float:
    _check(entropies, coeffs)
    a = as_alpha(alpha)
    active = [(c, h) for c, h in zip(coeffs, entropies) if c > 0]
    if any(math.isinf(h) for _, h in active):
        return math.inf
    s = sum((c ** a.value if power else c) * g_alpha(h, a) for c, h in active)
    return g_alpha_inv(s, a) + 0.0


def mixture_lower_bound(entropies: Sequence[float], coeffs: Sequence[float], alpha) -> float:
    """``g^-1(sum a_k g(H_k))``; infinite if a weighted component is infinite."""
    return _bound(entropies, coeffs, alpha, power=False)


def mixture_upper_bound(entropies: Sequence[float], coeffs: Sequence[float], alpha) -> float:
    """``g^-1(sum a_k**alpha g(H_k))``; infinite if a weighted component is infinite."""
    return _bound(entropies, coeffs, alpha, power=True)


@dataclass
class BoundReport:
    lower: float
    upper: float
    actual: float | None
    alpha: float
    coefficients: list[float]
    components: list[float] = field(default_factory=list)
    certified: bool = True

    @property
    def holds(self) -> bool:
        """Sandwich check; vacuous when ``actual`` is missing."""
        if self.actual is None:
            return self.lower <= self.upper + BOUND_TOL
        if math.isinf(self.actual):
            return math.isinf(self.upper)
        return self.lower - BOUND_TOL <= self.actual <= self.upper + BOUND_TOL

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "coefficients": list(self.coefficients),
            "component_entropies": list(self.components),
            "lower": self.lower,
            "actual": self.actual,
            "upper": self.upper,
            "certified": self.certified,
            "holds": self.holds,
        }


def verify_mixture_bounds(spec: MixtureSpec, Q: CellFamily, alpha, method: str = "auto",
                          budget: int = DEFAULT_BUDGET) -> BoundReport:
    """Compute component and mixture entropies over ``Q`` and both bounds."""
    a = as_alpha(alpha)
    results = [classical_entropy(m, Q, a, method, budget) for m in spec.measures]
    actual = classical_entropy(mix(spec), Q, a, method, budget)
    hs = [r.value for r in results]
    return BoundReport(
        lower=mixture_lower_bound(hs, spec.coefficients, a),
        upper=mixture_upper_bound(hs, spec.coefficients, a),
        actual=actual.value,
        alpha=a.value,
        coefficients=list(spec.coefficients),
        components=hs,
        certified=all(r.certified for r in results + [actual]),
    )


def shannon_mixture_bounds(entropies: Sequence[float], coeffs: Sequence[float]) -> tuple[float, float]:
    """The alpha -> 1 limits: weighted mean, and weighted mean plus the coefficient entropy."""
    _check(entropies, coeffs)
    mean = sum(c * h for c, h in zip(coeffs, entropies))
    mixing = -sum(c * math.log2(c) for c in coeffs if c > 0)
    return mean, mean + mixing


def shannon_limit_check(entropies: Sequence[float], coeffs: Sequence[float],
                        alphas: Sequence[float]) -> list[tuple[float, float, float]]:
    """Evaluate both bounds along ``alphas`` to watch them approach the Shannon bounds."""
    if any(math.isinf(h) for h in entropies):
        raise InputError("entropies must be finite")
    out = []
    for al in alphas:
        if al == 1.0:
            raise InputError("alpha = 1 is the limit itself; approach it from either side")
        out.append((float(al), mixture_lower_bound(entropies, coeffs, al),
                    mixture_upper_bound(entropies, coeffs, al)))
    return out
