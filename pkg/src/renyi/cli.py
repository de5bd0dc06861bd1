"""``renyi`` command line.

Exit codes: 0 success, 2 input error, 3 enumeration budget exceeded,
4 a verification (bound sandwich, equivalence, mixture dimension) failed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import math
import sys
import time
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from .bounds import verify_mixture_bounds
from .core import AlphaOrder, partition_entropy
from .dimension import DeltaLadder, IfsSpec, estimate_dimension, generate_ifs_measure, mixture_dimension_check
from .division import hlp_partition_from_division, weighted_entropy
from .errors import BudgetError, InputError, RenyiError
from .families import CellFamily, ball_family, family_from_json, family_to_json, grid_family
from .measure import (
    DiscreteMeasure,
    load_json,
    measure_from_json,
    measure_to_json,
    mixture_from_json,
)
from .search import (
    DEFAULT_BUDGET,
    PRNG_NAME,
    classical_entropy,
    random_instance,
    sample_random_divisions,
)

log = logging.getLogger("renyi")

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_VERIFY = 0, 2, 3, 4
TOL = 1e-9


def _tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def _fmt(obj):
    """Fix float output at 12 significant digits; non-finite values become strings."""
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
        return float(f"{x:.12g}") + 0.0
    if isinstance(obj, dict):
        return {k: _fmt(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_fmt(v) for v in obj]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


class _Run:
    """Collects the run manifest: inputs with content hashes, seed, version."""

    def __init__(self, command: str):
        self.command = command
        self.inputs: list[dict] = []
        self.seed: int | None = None
        self.start = time.perf_counter()

    def load(self, path: str) -> dict:
        data = load_json(path)
        with open(path, "rb") as fh:
            digest = hashlib.sha256(fh.read()).hexdigest()
        self.inputs.append({"path": path, "sha256": digest})
        return data

    def manifest(self) -> dict:
        out = {"command": self.command, "tool_version": _tool_version(), "inputs": self.inputs}
        if self.seed is not None:
            out["seed"] = self.seed
            out["prng"] = PRNG_NAME
        return out

    def finish(self, payload: dict, out_path: str | None):
        payload = dict(payload)
        payload["manifest"] = self.manifest()
        text = json.dumps(_fmt(payload), indent=2, sort_keys=False) + "\n"
        if out_path:
            with open(out_path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        log.info("%s finished in %.3fs", self.command, time.perf_counter() - self.start)


def _family(args, run: _Run, mu: DiscreteMeasure) -> CellFamily:
    chosen = [args.family is not None, args.grid_delta is not None, args.ball_delta is not None]
    if sum(chosen) != 1:
        raise InputError("give exactly one of --family, --grid-delta, --ball-delta")
    if args.family is not None:
        return family_from_json(run.load(args.family))
    if args.grid_delta is not None:
        return grid_family(mu.space, args.grid_delta)
    centers = None
    if args.centers:
        raw = run.load(args.centers)
        centers = raw.get("centers") if isinstance(raw, dict) else raw
        if not isinstance(centers, list):
            raise InputError("centers file must hold a list of coordinates")
    return ball_family(mu.space, args.ball_delta, centers)


def _method(args) -> str:
    return "exact" if args.exact else "greedy" if args.greedy else "auto"


def _search_payload(res) -> dict:
    return {
        "value_bits": res.value,
        "method": res.method,
        "certified": res.certified,
        "witness": None if res.witness is None else family_to_json(res.witness)["cells"],
    }


def cmd_entropy(args) -> int:
    run = _Run("entropy")
    mu = measure_from_json(run.load(args.measure))
    Q = _family(args, run, mu)
    alpha = AlphaOrder(args.alpha)
    res = classical_entropy(mu, Q, alpha, _method(args), args.budget)
    payload = {"alpha": alpha.value, **_search_payload(res)}
    failed = False
    if args.samples:
        if args.seed is None:
            raise InputError("--samples needs an explicit --seed")
        run.seed = args.seed
        divisions = sample_random_divisions(mu, Q, args.samples, args.seed)
        hv = [weighted_entropy(m, alpha) for m in divisions]
        hp = [partition_entropy(mu, hlp_partition_from_division(m, mu), alpha) for m in divisions]
        min_hv = min(hv) if hv else math.inf
        payload["samples"] = {
            "count": args.samples,
            "min_weighted_bits": min_hv,
            "max_hlp_excess_bits": max((p - v for p, v in zip(hp, hv)), default=0.0),
        }
        if res.certified and hv:
            failed = min_hv < res.value - TOL or any(p > v + TOL for p, v in zip(hp, hv))
    run.finish(payload, args.out)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_bounds(args) -> int:
    run = _Run("bounds")
    spec = mixture_from_json(run.load(args.mixture))
    Q = _family(args, run, spec.measures[0])
    report = verify_mixture_bounds(spec, Q, AlphaOrder(args.alpha), _method(args), args.budget)
    run.finish(report.as_dict(), args.out)
    return EXIT_OK if report.holds else EXIT_VERIFY


def _write_csv(path: str, per_scale):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["delta", "entropy_bits"])
        for d, h in per_scale:
            w.writerow([f"{d:.12g}", f"{h:.12g}"])


def cmd_dimension(args) -> int:
    run = _Run("dimension")
    if (args.measure is None) == (args.mixture is None):
        raise InputError("give exactly one of --measure, --mixture")
    ladder = DeltaLadder.parse(args.ladder, args.family_kind)
    alpha = AlphaOrder(args.alpha)
    if args.measure is not None:
        mu = measure_from_json(run.load(args.measure))
        est = estimate_dimension(mu, ladder, alpha)
        if args.csv:
            _write_csv(args.csv, est.per_scale)
        run.finish(est.as_dict(), args.out)
        return EXIT_OK
    spec = mixture_from_json(run.load(args.mixture))
    report = mixture_dimension_check(spec, ladder, alpha, args.tolerance)
    if args.csv:
        _write_csv(args.csv, report.mixture.per_scale)
    run.finish(report.as_dict(), args.out)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_generate_ifs(args) -> int:
    run = _Run("generate ifs")
    mu = generate_ifs_measure(IfsSpec.from_json(run.load(args.spec)))
    text = json.dumps(measure_to_json(mu)) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def equivalence_trials(n_atoms: int, n_cells: int, trials: int, samples: int, seed: int,
                       alphas=(0.5, 2.0)) -> dict:
    """Exhaustive minimum vs sampled divisions vs peel round trip on random instances.

    ``max_gap`` is the worst violation of: sampled division below the exhaustive
    minimum, peeled partition above its division, peeled partition below the
    exhaustive minimum.  It is 0 when every check passes.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    rows = []
    for t in range(trials):
        mu, Q = random_instance(rng, n_atoms, n_cells)
        divisions = sample_random_divisions(mu, Q, samples, int(rng.integers(2**63)))
        peeled = [hlp_partition_from_division(m, mu) for m in divisions]
        for a in alphas:
            exact = classical_entropy(mu, Q, a, "exact").value
            hv = np.array([weighted_entropy(m, a) for m in divisions])
            hp = np.array([partition_entropy(mu, p, a) for p in peeled])
            gap = max(0.0, exact - hv.min(), float(np.max(hp - hv)), exact - hp.min())
            worst = max(worst, gap)
            rows.append({"trial": t, "alpha": a, "exact_bits": exact,
                         "min_sampled_bits": float(hv.min()), "gap": gap})
    return {"trials": trials, "atoms": n_atoms, "cells": n_cells, "samples": samples,
            "alphas": list(alphas), "max_gap": worst, "tolerance": TOL,
            "passed": bool(worst <= TOL), "instances": rows}


def cmd_verify_equivalence(args) -> int:
    run = _Run("verify-equivalence")
    run.seed = args.seed
    if args.atoms < 1 or args.cells < 1 or args.trials < 0 or args.samples < 1:
        raise InputError("atoms, cells and samples must be positive")
    alphas = tuple(args.alpha) if args.alpha else (0.5, 2.0)
    for a in alphas:
        AlphaOrder(a)
    report = equivalence_trials(args.atoms, args.cells, args.trials, args.samples, args.seed, alphas)
    if not args.verbose_instances:
        report.pop("instances")
    run.finish(report, args.out)
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def _family_flags(p: argparse.ArgumentParser):
    p.add_argument("--family", help="family JSON file")
    p.add_argument("--grid-delta", type=float, help="use the grid family of this cell side")
    p.add_argument("--ball-delta", type=float, help="use closed balls of this radius")
    p.add_argument("--centers", help="JSON list of ball centers (default: every atom)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", help="enumerate all acceptable partitions")
    g.add_argument("--greedy", action="store_true", help="greedy upper bound only")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max assignments to enumerate")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="renyi", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log timings to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="classical entropy of a measure over a family")
    p.add_argument("--measure", required=True)
    p.add_argument("--alpha", type=float, required=True)
    _family_flags(p)
    p.add_argument("--samples", type=int, default=0, help="also sample this many random divisions")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("bounds", help="mixture entropy against its lower and upper bounds")
    p.add_argument("--mixture", required=True)
    p.add_argument("--alpha", type=float, required=True)
    _family_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("dimension", help="entropy dimension by regression over a scale ladder")
    p.add_argument("--measure")
    p.add_argument("--mixture", help="check the mixture dimension rule instead")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--ladder", required=True, help="e.g. dyadic:4..12, triadic:4..12 or 0.5,0.25,0.125")
    p.add_argument("--family-kind", choices=("grid", "balls"), default="grid")
    p.add_argument("--tolerance", type=float, default=0.02)
    p.add_argument("--csv", help="write (delta, entropy) pairs here")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("generate", help="generate test measures")
    gen = p.add_subparsers(dest="kind", required=True)
    q = gen.add_parser("ifs", help="self-similar measure from an IFS spec")
    q.add_argument("--spec", required=True)
    q.add_argument("-o", "--out")
    q.set_defaults(func=cmd_generate_ifs)

    p = sub.add_parser("verify-equivalence", help="check weighted and classical entropy agree")
    p.add_argument("--atoms", type=int, default=5)
    p.add_argument("--cells", type=int, default=4)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--alpha", type=float, action="append")
    p.add_argument("--verbose-instances", action="store_true", help="include per-instance rows")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_equivalence)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except BudgetError as exc:
        print(f"renyi: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InputError as exc:
        print(f"renyi: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RenyiError as exc:
        print(f"renyi: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
