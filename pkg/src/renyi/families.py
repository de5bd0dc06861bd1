"""Error-control families, partitions and the family generators.

A :class:`CellFamily` is an indexed list of atom-id sets.  It bounds which
coding alphabets are admissible: a partition ``P`` is acceptable for ``Q``
when every positive-mass cell of ``P`` sits inside some cell of ``Q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError
from .measure import MASS_TOL, AtomSpace, DiscreteMeasure


@dataclass(frozen=True, eq=False)
class CellFamily:
    cells: tuple[frozenset[int], ...]
    label: str | None = None

    def __post_init__(self):
        cells = tuple(frozenset(int(a) for a in c) for c in self.cells)
        if any(not c for c in cells):
            raise InputError("family cells must be nonempty")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "_mask_cache", None)

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def __getitem__(self, i: int) -> frozenset[int]:
        return self.cells[i]

    @cached_property
    def atoms(self) -> frozenset[int]:
        return frozenset().union(*self.cells)

    def membership(self, space: AtomSpace) -> np.ndarray:
        """Boolean ``(n_cells, n_atoms)`` incidence matrix over ``space`` (read-only, cached)."""
        cached = self._mask_cache
        if cached is not None and cached[0] is space:
            return cached[1]
        m = np.zeros((len(self.cells), len(space)), dtype=bool)
        for i, c in enumerate(self.cells):
            m[i, space.positions(c)] = True
        m.setflags(write=False)
        object.__setattr__(self, "_mask_cache", (space, m))
        return m

    def cell_masses(self, mu: DiscreteMeasure) -> np.ndarray:
        return self.membership(mu.space) @ mu.weights

    def containing(self, atom_id: int) -> list[int]:
        return [i for i, c in enumerate(self.cells) if atom_id in c]

    def same_cells(self, other: "CellFamily") -> bool:
        return sorted(map(sorted, self.cells)) == sorted(map(sorted, other.cells))

    def __repr__(self) -> str:
        body = ", ".join("{" + ",".join(map(str, sorted(c))) + "}" for c in self.cells)
        return f"CellFamily([{body}]{', ' + repr(self.label) if self.label else ''})"


class Partition(CellFamily):
    """A family whose cells are pairwise disjoint.

    Coverage depends on the measure and is checked by :func:`is_mu_partition`.
    """

    def __post_init__(self):
        super().__post_init__()
        if not _disjoint(self.cells):
            raise InputError("partition cells must be pairwise disjoint")

    @classmethod
    def of(cls, family: CellFamily) -> "Partition":
        return family if isinstance(family, Partition) else cls(family.cells, family.label)


def _disjoint(cells: Sequence[frozenset[int]]) -> bool:
    return sum(len(c) for c in cells) == len(frozenset().union(*cells))


def is_mu_partition(P: CellFamily, mu: DiscreteMeasure) -> bool:
    """True iff the cells are disjoint and leave at most null mass uncovered."""
    if not _disjoint(P.cells):
        return False
    covered = P.atoms
    unknown = covered.difference(mu.space.index)
    if unknown:
        return False
    uncovered = [int(a) for a, w in zip(mu.space.ids, mu.weights) if w > 0 and int(a) not in covered]
    return mu.mass(uncovered) <= MASS_TOL


def refines(P: CellFamily, Q: CellFamily, mu: DiscreteMeasure | None = None) -> bool:
    """``P`` is ``Q``-acceptable: each cell of ``P`` lies inside a cell of ``Q``.

    With ``mu`` given, cells of zero ``mu``-mass are exempt.
    """
    for p in P.cells:
        if mu is not None and mu.mass(p) <= 0:
            continue
        if not any(p <= q for q in Q.cells):
            return False
    return True


def grid_labels(coords: np.ndarray, delta: float) -> tuple[np.ndarray, np.ndarray]:
    """Bucket each row of ``coords`` by ``floor(coord / delta)`` per axis.

    Returns ``(buckets, inverse)``: the lexicographically sorted distinct
    bucket indices and, for every row, the position of its bucket.
    """
    if not delta > 0:
        raise InputError("grid delta must be positive")
    keys = np.floor(np.asarray(coords, dtype=float) / delta).astype(np.int64)
    if keys.ndim == 1:
        keys = keys.reshape(-1, 1)
    buckets, inverse = np.unique(keys, axis=0, return_inverse=True)
    return buckets, inverse.reshape(-1)


def grid_family(space: AtomSpace, delta: float, label: str | None = None) -> Partition:
    """Occupied cells of the axis-aligned grid of side ``delta``."""
    if not space.has_coords:
        raise InputError("grid family needs atom coords")
    _, inverse = grid_labels(space.coords, delta)
    order = np.argsort(inverse, kind="stable")
    splits = np.flatnonzero(np.diff(inverse[order])) + 1
    cells = [frozenset(space.ids[idx].tolist()) for idx in np.split(order, splits)]
    return Partition(tuple(cells), label or f"grid:{delta:g}")


def ball_family(space: AtomSpace, delta: float, centers: Iterable[Sequence[float]] | None = None,
                label: str | None = None) -> CellFamily:
    """One closed Euclidean ball of radius ``delta`` per center.

    Centers default to the atom positions.  Balls holding no atom are dropped.
    """
    if not delta > 0:
        raise InputError("ball delta must be positive")
    if not space.has_coords:
        raise InputError("ball family needs atom coords")
    pts = space.coords
    c = pts if centers is None else np.asarray(list(centers), dtype=float)
    if c.ndim == 1:
        c = c.reshape(-1, 1)
    if c.shape[1] != pts.shape[1]:
        raise InputError("centers and atoms have different dimensions")
    cells = []
    for center in c:
        inside = np.linalg.norm(pts - center, axis=1) <= delta
        if inside.any():
            cells.append(frozenset(space.ids[inside].tolist()))
    return CellFamily(tuple(cells), label or f"balls:{delta:g}")


def family_from_json(data: dict) -> CellFamily:
    """Parse ``{"cells": [[0, 1], [2]], "label": "Q"}``."""
    if not isinstance(data, dict) or not isinstance(data.get("cells"), list):
        raise InputError("family JSON needs a 'cells' list")
    try:
        cells = tuple(frozenset(int(a) for a in c) for c in data["cells"])
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed family cells: {exc}") from None
    return CellFamily(cells, data.get("label"))


def family_to_json(family: CellFamily) -> dict:
    out: dict = {"cells": [sorted(c) for c in family.cells]}
    if family.label is not None:
        out["label"] = family.label
    return out
