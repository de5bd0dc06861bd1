"""Classical entropy of a family: the minimum over acceptable partitions.

Every acceptable partition of a finite measure is, up to null atoms, an
assignment of each positive-mass atom to one family cell containing it.  The
exact solver enumerates these assignments; the greedy solver builds one good
assignment and so gives an upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import as_alpha, renyi_of_masses
from .division import Division
from .errors import BudgetError, InputError
from .families import CellFamily, Partition
from .measure import AtomSpace, DiscreteMeasure

DEFAULT_BUDGET = 10**7
PRNG_NAME = "numpy.PCG64"
_CHUNK = 1 << 18


@dataclass(frozen=True)
class SearchResult:
    value: float
    witness: Partition | None
    method: str  # "exhaustive", "greedy" or "infinite"

    @property
    def certified(self) -> bool:
        """False when ``value`` is only an upper bound."""
        return self.method != "greedy"


def _choices(mu: DiscreteMeasure, Q: CellFamily):
    """Positive-mass atom positions and, per atom, the cells that contain it."""
    member = Q.membership(mu.space)
    atoms = np.flatnonzero(mu.weights > 0)
    return atoms, [np.flatnonzero(member[:, j]) for j in atoms]


def _witness(mu: DiscreteMeasure, atoms, assignment) -> Partition:
    groups: dict[int, list[int]] = {}
    for j, c in zip(atoms, assignment):
        groups.setdefault(int(c), []).append(int(mu.space.ids[j]))
    return Partition(tuple(frozenset(groups[c]) for c in sorted(groups)), "witness")


def assignment_count(mu: DiscreteMeasure, Q: CellFamily) -> int:
    """Number of atom-to-cell assignments the exact solver would enumerate."""
    _, opts = _choices(mu, Q)
    return math.prod(len(o) for o in opts)


def classical_entropy_exact(mu: DiscreteMeasure, Q: CellFamily, alpha,
                            budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Minimum entropy over all ``Q``-acceptable partitions, by enumeration.

    Ties go to the lexicographically first assignment (atoms in space order,
    cells by index).
    """
    a = as_alpha(alpha).value
    atoms, opts = _choices(mu, Q)
    if any(len(o) == 0 for o in opts):
        return SearchResult(math.inf, None, "infinite")
    total = math.prod(len(o) for o in opts)
    if total > budget:
        raise BudgetError(f"{total} assignments exceed the budget of {budget}; use the greedy method")
    w = mu.weights[atoms]
    shape = tuple(len(o) for o in opts)
    best_val, best_assign = math.inf, None
    for start in range(0, total, _CHUNK):
        flat = np.arange(start, min(total, start + _CHUNK))
        picks = np.unravel_index(flat, shape)
        cells = np.stack([opts[j][picks[j]] for j in range(len(atoms))], axis=1)
        masses = np.zeros((len(flat), len(Q)))
        rows = np.arange(len(flat))
        for j in range(len(atoms)):
            masses[rows, cells[:, j]] += w[j]
        powers = np.where(masses > 0, masses, 1.0) ** a
        sums = np.where(masses > 0, powers, 0.0).sum(axis=1)
        vals = np.log2(sums) / (1.0 - a)
        k = int(np.argmin(vals))
        if vals[k] < best_val:
            best_val, best_assign = float(vals[k]), cells[k]
    # recompute through the scalar path so the value matches partition_entropy exactly
    witness = _witness(mu, atoms, best_assign)
    return SearchResult(renyi_of_masses(witness.cell_masses(mu), a), witness, "exhaustive")


def classical_entropy_greedy(mu: DiscreteMeasure, Q: CellFamily, alpha) -> SearchResult:
    """Upper bound on the classical entropy from one greedy assignment.

    Atoms go, heaviest first, to the containing cell with the largest mass
    collected so far; ties prefer the cell with larger total mass under
    ``mu``, then the lower index.  Concentrating mass lowers the entropy for
    every order, so the rule is the same on both sides of 1.
    """
    atoms, opts = _choices(mu, Q)
    if any(len(o) == 0 for o in opts):
        return SearchResult(math.inf, None, "infinite")
    w = mu.weights[atoms]
    capacity = Q.cell_masses(mu)
    acc = np.zeros(len(Q))
    assign = np.empty(len(atoms), dtype=np.int64)
    for j in sorted(range(len(atoms)), key=lambda j: (-w[j], j)):
        c = max(opts[j], key=lambda c: (acc[c], capacity[c], -c))
        acc[c] += w[j]
        assign[j] = c
    witness = _witness(mu, atoms, assign)
    exact = all(len(o) == 1 for o in opts)
    return SearchResult(renyi_of_masses(witness.cell_masses(mu), alpha), witness,
                        "exhaustive" if exact else "greedy")


def classical_entropy(mu: DiscreteMeasure, Q: CellFamily, alpha, method: str = "auto",
                      budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Dispatch to the exact or greedy solver.

    ``auto`` enumerates when the assignment count fits ``budget`` and falls
    back to greedy otherwise.
    """
    if method == "exact":
        return classical_entropy_exact(mu, Q, alpha, budget)
    if method == "greedy":
        return classical_entropy_greedy(mu, Q, alpha)
    if method != "auto":
        raise InputError(f"unknown search method {method!r}")
    if assignment_count(mu, Q) <= budget:
        return classical_entropy_exact(mu, Q, alpha, budget)
    return classical_entropy_greedy(mu, Q, alpha)


def sample_random_divisions(mu: DiscreteMeasure, Q: CellFamily, count: int,
                            seed: int) -> list[Division]:
    """Random divisions: each atom's mass split over its cells by Dirichlet(1) shares."""
    if count < 0:
        raise InputError("count must be nonnegative")
    member = Q.membership(mu.space)
    atoms = np.flatnonzero(mu.weights > 0)
    sub = member[:, atoms]
    if np.any(~sub.any(axis=0)):
        raise InputError("some positive-mass atom lies in no cell")
    rng = np.random.default_rng(seed)
    live = np.flatnonzero(sub.any(axis=1))
    mask = sub[live]
    out = []
    for _ in range(count):
        # normalized iid Exp(1) draws are Dirichlet(1) distributed
        e = np.where(mask, rng.standard_exponential(mask.shape), 0.0)
        share = e / e.sum(axis=0)
        parts = {}
        for r, c in enumerate(live):
            w = np.zeros(len(mu.space))
            w[atoms] = mu.weights[atoms] * share[r]
            parts[int(c)] = DiscreteMeasure(mu.space, w)
        out.append(Division(Q, parts))
    return out


def random_instance(rng: np.random.Generator, n_atoms: int, n_cells: int,
                    p_member: float = 0.5) -> tuple[DiscreteMeasure, CellFamily]:
    """A random probability measure with a random overlapping covering family."""
    space = AtomSpace.range(n_atoms)
    weights = rng.dirichlet(np.ones(n_atoms))
    member = rng.random((n_cells, n_atoms)) < p_member
    for j in np.flatnonzero(~member.any(axis=0)):
        member[rng.integers(n_cells), j] = True
    for i in np.flatnonzero(~member.any(axis=1)):
        member[i, rng.integers(n_atoms)] = True
    cells = tuple(frozenset(np.flatnonzero(row).tolist()) for row in member)
    return DiscreteMeasure(space, weights), CellFamily(cells, "Q")
