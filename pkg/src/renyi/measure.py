"""Finitely supported measures over an indexed atom space.

An :class:`AtomSpace` is an ordered list of atom ids with optional
coordinates.  A :class:`DiscreteMeasure` stores one nonnegative mass per atom
of its space, aligned with the space's ordering.  Zero-mass atoms stay in the
space; entropy sums skip them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError

#: Tolerance on total mass for probability checks.
PROB_TOL = 1e-9
#: Tolerance on individual mass comparisons.
MASS_TOL = 1e-12


@dataclass(frozen=True)
class Atom:
    id: int
    coords: tuple[float, ...] | None = None


@dataclass(frozen=True, eq=False)
class AtomSpace:
    """Ordered atom ids with an optional ``(n, d)`` coordinate array."""

    ids: np.ndarray
    coords: np.ndarray | None = None

    def __post_init__(self):
        ids = np.asarray(self.ids, dtype=np.int64).reshape(-1)
        if len(np.unique(ids)) != len(ids):
            raise InputError("atom ids must be unique")
        ids.setflags(write=False)
        object.__setattr__(self, "ids", ids)
        if self.coords is not None:
            coords = np.asarray(self.coords, dtype=float)
            if coords.ndim == 1:
                coords = coords.reshape(-1, 1)
            if coords.shape[0] != len(ids):
                raise InputError("coords must have one row per atom")
            coords.setflags(write=False)
            object.__setattr__(self, "coords", coords)

    @classmethod
    def from_atoms(cls, atoms: Iterable[Atom]) -> "AtomSpace":
        atoms = list(atoms)
        with_coords = [a.coords is not None for a in atoms]
        if any(with_coords) and not all(with_coords):
            raise InputError("either every atom carries coords or none does")
        coords = None
        if atoms and all(with_coords):
            arity = {len(a.coords) for a in atoms}
            if len(arity) != 1:
                raise InputError("atom coords must have uniform arity")
            coords = np.array([a.coords for a in atoms], dtype=float)
        return cls(np.array([a.id for a in atoms], dtype=np.int64), coords)

    @classmethod
    def range(cls, n: int, coords=None) -> "AtomSpace":
        return cls(np.arange(n, dtype=np.int64), coords)

    def __len__(self) -> int:
        return len(self.ids)

    @cached_property
    def index(self) -> dict[int, int]:
        return {int(a): i for i, a in enumerate(self.ids)}

    @property
    def atoms(self) -> list[Atom]:
        if self.coords is None:
            return [Atom(int(a)) for a in self.ids]
        return [Atom(int(a), tuple(float(c) for c in row)) for a, row in zip(self.ids, self.coords)]

    @property
    def has_coords(self) -> bool:
        return self.coords is not None

    def positions(self, ids: Iterable[int]) -> np.ndarray:
        """Array positions of ``ids``; unknown ids raise :class:`InputError`."""
        index = self.index
        try:
            return np.fromiter((index[int(a)] for a in ids), dtype=np.int64)
        except KeyError as exc:
            raise InputError(f"unknown atom id {exc.args[0]}") from None

    def same_as(self, other: "AtomSpace") -> bool:
        if self is other:
            return True
        if not np.array_equal(self.ids, other.ids):
            return False
        if (self.coords is None) != (other.coords is None):
            return False
        return self.coords is None or np.array_equal(self.coords, other.coords)


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Nonnegative masses aligned with ``space.ids``."""

    space: AtomSpace
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).reshape(-1)
        if w.shape[0] != len(self.space):
            raise InputError("weights must have one entry per atom")
        if not np.all(np.isfinite(w)):
            raise InputError("weights must be finite")
        if np.any(w < 0):
            raise InputError("weights must be nonnegative")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_mapping(cls, space: AtomSpace, weights: Mapping[int, float]) -> "DiscreteMeasure":
        w = np.zeros(len(space))
        pos = space.positions(weights.keys())
        w[pos] = list(weights.values())
        return cls(space, w)

    @classmethod
    def uniform(cls, space: AtomSpace, ids: Iterable[int] | None = None) -> "DiscreteMeasure":
        w = np.zeros(len(space))
        pos = np.arange(len(space)) if ids is None else space.positions(ids)
        w[pos] = 1.0 / len(pos)
        return cls(space, w)

    @classmethod
    def dirac(cls, space: AtomSpace, atom_id: int) -> "DiscreteMeasure":
        return cls.from_mapping(space, {atom_id: 1.0})

    @property
    def total(self) -> float:
        return float(self.weights.sum())

    @property
    def is_probability(self) -> bool:
        return abs(self.total - 1.0) <= PROB_TOL

    def weight(self, atom_id: int) -> float:
        return float(self.weights[self.space.positions([atom_id])[0]])

    def mass(self, ids: Iterable[int]) -> float:
        """Total mass of the atom set ``ids``."""
        return float(self.weights[self.space.positions(ids)].sum())

    @property
    def support(self) -> frozenset[int]:
        return frozenset(int(a) for a in self.space.ids[self.weights > 0])

    def as_dict(self, nonzero: bool = True) -> dict[int, float]:
        keep = self.weights > 0 if nonzero else np.ones(len(self.space), dtype=bool)
        return {int(a): float(w) for a, w in zip(self.space.ids[keep], self.weights[keep])}

    def on_space(self, space: AtomSpace) -> "DiscreteMeasure":
        """Re-express this measure over a larger space containing its atoms."""
        if space.same_as(self.space):
            return self
        w = np.zeros(len(space))
        w[space.positions(self.space.ids)] = self.weights
        return DiscreteMeasure(space, w)

    def normalized(self) -> "DiscreteMeasure":
        t = self.total
        if t <= 0:
            raise InputError("cannot normalize a zero measure")
        return DiscreteMeasure(self.space, self.weights / t)

    def allclose(self, other: "DiscreteMeasure", atol: float = MASS_TOL) -> bool:
        return self.space.same_as(other.space) and bool(
            np.allclose(self.weights, other.weights, rtol=0.0, atol=atol)
        )

    def __repr__(self) -> str:
        return f"DiscreteMeasure({self.as_dict()!r})"


@dataclass(frozen=True)
class MixtureSpec:
    """Convex combination ``sum_k a_k * mu_k`` over a shared atom space."""

    coefficients: tuple[float, ...]
    measures: tuple[DiscreteMeasure, ...]

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.coefficients)
        measures = tuple(self.measures)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "measures", measures)
        if not measures or len(coeffs) != len(measures):
            raise InputError("need one coefficient per component measure")
        if any(a < -PROB_TOL or a > 1 + PROB_TOL for a in coeffs):
            raise InputError("mixture coefficients must lie in [0, 1]")
        if abs(sum(coeffs) - 1.0) > PROB_TOL:
            raise InputError(f"mixture coefficients sum to {sum(coeffs)!r}, not 1")
        space = measures[0].space
        if not all(m.space.same_as(space) for m in measures[1:]):
            raise InputError("mixture components must share one atom space")

    @classmethod
    def of(cls, *pairs: tuple[float, DiscreteMeasure]) -> "MixtureSpec":
        return cls(tuple(a for a, _ in pairs), tuple(m for _, m in pairs))

    @property
    def space(self) -> AtomSpace:
        return self.measures[0].space

    def __len__(self) -> int:
        return len(self.measures)


def restrict(mu: DiscreteMeasure, ids: Iterable[int]) -> DiscreteMeasure:
    """Keep ``mu``'s mass on ``ids`` and zero it elsewhere."""
    pos = mu.space.positions(ids)
    w = np.zeros(len(mu.space))
    w[pos] = mu.weights[pos]
    return DiscreteMeasure(mu.space, w)


def mix(spec: MixtureSpec) -> DiscreteMeasure:
    """Atomwise convex combination of the mixture components."""
    w = np.zeros(len(spec.space))
    for a, m in zip(spec.coefficients, spec.measures):
        w += a * m.weights
    return DiscreteMeasure(spec.space, w)


def union_space(spaces: Sequence[AtomSpace]) -> AtomSpace:
    """Merge atom spaces, keeping first-seen order.

    Shared ids must agree on coordinates.  Useful for mixing measures that were
    generated separately.
    """
    ids: list[int] = []
    rows: list[np.ndarray] = []
    seen: dict[int, np.ndarray | None] = {}
    with_coords = {s.has_coords for s in spaces}
    if len(with_coords) > 1:
        raise InputError("cannot merge spaces with and without coords")
    for s in spaces:
        for i, a in enumerate(s.ids):
            a = int(a)
            row = None if s.coords is None else s.coords[i]
            if a in seen:
                if row is not None and not np.array_equal(seen[a], row):
                    raise InputError(f"atom {a} has conflicting coords")
                continue
            seen[a] = row
            ids.append(a)
            if row is not None:
                rows.append(row)
    coords = np.array(rows) if rows else None
    return AtomSpace(np.array(ids, dtype=np.int64), coords)


def disjoint_union(measures: Sequence[DiscreteMeasure]) -> list[DiscreteMeasure]:
    """Place measures with coords on one shared space, merging atoms at equal coords.

    Atoms are matched by coordinates, not ids, so separately generated
    measures (each numbered from 0) can be mixed.
    """
    if not all(m.space.has_coords for m in measures):
        raise InputError("coordinate merge needs coords on every measure")
    stacked = np.concatenate([m.space.coords for m in measures])
    uniq, inverse = np.unique(stacked, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    space = AtomSpace.range(len(uniq), uniq)
    out = []
    start = 0
    for m in measures:
        n = len(m.space)
        w = np.zeros(len(uniq))
        np.add.at(w, inverse[start:start + n], m.weights)
        out.append(DiscreteMeasure(space, w))
        start += n
    return out


# JSON wire format ---------------------------------------------------------


def space_from_json(atoms: list) -> AtomSpace:
    try:
        parsed = [Atom(int(a["id"]), None if a.get("coords") is None else tuple(map(float, a["coords"])))
                  for a in atoms]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed atom list: {exc}") from None
    return AtomSpace.from_atoms(parsed)


def space_to_json(space: AtomSpace) -> list[dict]:
    out = []
    for a in space.atoms:
        entry: dict = {"id": a.id}
        if a.coords is not None:
            entry["coords"] = list(a.coords)
        out.append(entry)
    return out


def _weights_from_json(space: AtomSpace, raw) -> DiscreteMeasure:
    if not isinstance(raw, dict):
        raise InputError("weights must be an object mapping atom id to mass")
    try:
        mapping = {int(k): float(v) for k, v in raw.items()}
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed weights: {exc}") from None
    return DiscreteMeasure.from_mapping(space, mapping)


def measure_from_json(data: dict) -> DiscreteMeasure:
    """Parse ``{"atoms": [{"id": 0, "coords": [0.0]}, ...], "weights": {"0": 0.5, ...}}``."""
    if not isinstance(data, dict) or "atoms" not in data or "weights" not in data:
        raise InputError("measure JSON needs 'atoms' and 'weights'")
    return _weights_from_json(space_from_json(data["atoms"]), data["weights"])


def measure_to_json(mu: DiscreteMeasure) -> dict:
    return {
        "atoms": space_to_json(mu.space),
        "weights": {str(k): v for k, v in mu.as_dict().items()},
    }


def mixture_from_json(data: dict) -> MixtureSpec:
    """Parse ``{"atoms": [...], "components": [{"coefficient": a, "weights": {...}}, ...]}``."""
    if not isinstance(data, dict) or "atoms" not in data or "components" not in data:
        raise InputError("mixture JSON needs 'atoms' and 'components'")
    space = space_from_json(data["atoms"])
    try:
        coeffs = [float(c["coefficient"]) for c in data["components"]]
        measures = [_weights_from_json(space, c["weights"]) for c in data["components"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed mixture component: {exc}") from None
    return MixtureSpec(tuple(coeffs), tuple(measures))


def mixture_to_json(spec: MixtureSpec) -> dict:
    return {
        "atoms": space_to_json(spec.space),
        "components": [
            {"coefficient": a, "weights": {str(k): v for k, v in m.as_dict().items()}}
            for a, m in zip(spec.coefficients, spec.measures)
        ],
    }


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
