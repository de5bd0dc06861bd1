"""Divisions of a measure over a family and weighted entropy.

A division assigns each family cell a sub-measure supported inside that cell,
with all sub-measures summing back to the original measure.  Two constructions
connect divisions and partitions:

* :func:`division_from_partition` merges the cells of an acceptable partition
  into the family cells that contain them; weighted entropy can only drop.
* :func:`hlp_partition_from_division` sorts the cells by assigned mass and
  peels off the already-claimed atoms; classical entropy can only drop.

Together they show that minimizing over divisions and over acceptable
partitions gives the same value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .core import as_alpha, renyi_of_masses
from .errors import ContractError, InputError
from .families import CellFamily, Partition, is_mu_partition
from .measure import MASS_TOL, DiscreteMeasure, restrict


@dataclass(frozen=True, eq=False)
class Division:
    """Sub-measures ``parts[i]`` attached to cells ``family[i]``.

    Cells missing from ``parts`` carry the zero measure.
    """

    family: CellFamily
    parts: Mapping[int, DiscreteMeasure]

    def __post_init__(self):
        parts = dict(self.parts)
        for i in parts:
            if not 0 <= i < len(self.family):
                raise InputError(f"division part for unknown cell {i}")
        if parts:
            first = next(iter(parts.values())).space
            if not all(m.space.same_as(first) for m in parts.values()):
                raise InputError("division parts must share one atom space")
        object.__setattr__(self, "parts", parts)

    def masses(self) -> np.ndarray:
        """Total mass of each cell's part, indexed like ``family.cells``."""
        out = np.zeros(len(self.family))
        for i, m in self.parts.items():
            out[i] = m.total
        return out

    def leakage(self) -> float:
        """Largest mass any part places outside its own cell."""
        worst = 0.0
        for i, m in self.parts.items():
            inside = self.family.membership(m.space)[i]
            worst = max(worst, float(m.weights[~inside].sum()))
        return worst

    def total_measure(self, like: DiscreteMeasure) -> np.ndarray:
        w = np.zeros(len(like.space))
        for m in self.parts.values():
            w += m.weights
        return w


def validate_division(m: Division, mu: DiscreteMeasure) -> bool:
    """True iff every part stays inside its cell and the parts sum to ``mu``."""
    if any(not p.space.same_as(mu.space) for p in m.parts.values()):
        return False
    if m.leakage() > MASS_TOL:
        return False
    return bool(np.all(np.abs(m.total_measure(mu) - mu.weights) <= MASS_TOL))


def weighted_entropy(m: Division, alpha) -> float:
    """Order-alpha entropy of the division's cell-mass profile."""
    if m.leakage() > MASS_TOL:
        raise ContractError("invalid division: a part has mass outside its cell")
    return renyi_of_masses(m.masses(), as_alpha(alpha))


def division_from_partition(P: CellFamily, Q: CellFamily, mu: DiscreteMeasure,
                            pi: Mapping[int, int] | None = None) -> Division:
    """Merge the cells of an acceptable partition into containing family cells.

    ``pi`` maps a ``P`` cell index to a ``Q`` cell index.  Positive-mass cells
    absent from ``pi`` go to the lowest-index ``Q`` cell containing them.
    """
    if not is_mu_partition(P, mu):
        raise ContractError("P is not a mu-partition")
    pi = dict(pi or {})
    groups: dict[int, set[int]] = {}
    for i, p in enumerate(P.cells):
        if mu.mass(p) <= 0:
            continue
        if i in pi:
            j = pi[i]
            if not 0 <= j < len(Q) or not p <= Q.cells[j]:
                raise ContractError(f"pi maps P-cell {i} to a Q-cell that does not contain it")
        else:
            j = next((k for k, q in enumerate(Q.cells) if p <= q), None)
            if j is None:
                raise ContractError(f"P-cell {i} lies in no cell of Q")
        groups.setdefault(j, set()).update(p)
    parts = {j: restrict(mu, sorted(atoms)) for j, atoms in groups.items()}
    return Division(Q, parts)


def _hlp_order(m: Division) -> list[int]:
    masses = m.masses()
    positive = [i for i in range(len(m.family)) if masses[i] > 0]
    return sorted(positive, key=lambda i: (-masses[i], i))


def hlp_partition_from_division(m: Division, mu: DiscreteMeasure) -> Partition:
    """Peel cells in order of nonincreasing part mass into a disjoint partition.

    Ties in mass keep ascending cell index.  Cells left empty by the peel are
    dropped.
    """
    order = _hlp_order(m)
    used = frozenset().union(*(m.family.cells[i] for i in order)) if order else frozenset()
    missed = mu.support - used
    if missed and mu.mass(missed) > MASS_TOL:
        raise ContractError("positive-mass cells of the division do not cover the support of mu")
    claimed: set[int] = set()
    cells = []
    for i in order:
        fresh = m.family.cells[i] - claimed
        claimed |= fresh
        if fresh:
            cells.append(frozenset(fresh))
    return Partition(tuple(cells), "hlp")


def hlp_sequences(m: Division, mu: DiscreteMeasure) -> tuple[np.ndarray, np.ndarray]:
    """The pair compared by the peel argument.

    ``x[i]`` is the part mass of the i-th cell in peel order and ``y[i]`` the
    ``mu``-mass of what that cell contributes to the peeled partition.
    """
    order = _hlp_order(m)
    masses = m.masses()
    claimed: set[int] = set()
    x, y = [], []
    for i in order:
        fresh = m.family.cells[i] - claimed
        claimed |= fresh
        x.append(masses[i])
        y.append(mu.mass(fresh) if fresh else 0.0)
    return np.array(x), np.array(y)


@dataclass(frozen=True)
class MajorizationInstance:
    """Sequences with ``x`` nonincreasing and dominated by ``y`` in every prefix sum."""

    x: tuple[float, ...]
    y: tuple[float, ...]

    def __post_init__(self):
        x = tuple(float(v) for v in self.x)
        y = tuple(float(v) for v in self.y)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if len(x) != len(y) or not x:
            raise InputError("x and y must be nonempty and of equal length")
        if min(x + y) < 0:
            raise InputError("sequences must be nonnegative")
        if any(b > a for a, b in zip(x, x[1:])):
            raise InputError("x must be nonincreasing")
        px, py = np.cumsum(x), np.cumsum(y)
        if np.any(px > py + MASS_TOL):
            raise InputError("a prefix sum of x exceeds that of y")
        if abs(px[-1] - py[-1]) > MASS_TOL:
            raise InputError("x and y must have equal totals")

    @property
    def bound(self) -> float:
        return max(self.x + self.y)


def majorization_check(inst: MajorizationInstance, alpha) -> bool:
    """Check the power-sum inequality implied by the prefix-sum dominance.

    ``sum x**alpha >= sum y**alpha`` for alpha < 1 (concave power) and
    ``sum x**alpha <= sum y**alpha`` for alpha > 1 (convex power).
    """
    if not isinstance(inst, MajorizationInstance):
        raise InputError("expected a MajorizationInstance")
    a = as_alpha(alpha)
    sx = float(np.sum(np.asarray(inst.x) ** a.value))
    sy = float(np.sum(np.asarray(inst.y) ** a.value))
    slack = MASS_TOL * max(1.0, sx, sy)
    return sx >= sy - slack if a.concave else sx <= sy + slack


def division_from_json(data: dict, family: CellFamily, mu: DiscreteMeasure) -> Division:
    """Parse ``{"family": "Q", "parts": {"0": {"0": 0.333, ...}, ...}}``."""
    if not isinstance(data, dict) or not isinstance(data.get("parts"), dict):
        raise InputError("division JSON needs a 'parts' object")
    parts = {}
    try:
        for cell, masses in data["parts"].items():
            parts[int(cell)] = DiscreteMeasure.from_mapping(
                mu.space, {int(k): float(v) for k, v in masses.items()})
    except (TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"malformed division parts: {exc}") from None
    return Division(family, parts)


def division_to_json(m: Division) -> dict:
    return {
        "family": m.family.label,
        "parts": {str(i): {str(k): v for k, v in p.as_dict().items()}
                  for i, p in sorted(m.parts.items())},
    }
