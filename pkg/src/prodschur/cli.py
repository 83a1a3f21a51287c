"""Command-line front end: every operation as a reproducible experiment.

Outputs are machine readable: CSV for sweeps, a line-oriented text format
for sets and colourings (header ``# interval lo hi k`` then sorted
``element colour`` pairs).  Every artifact is accompanied by a run
manifest (JSON: command line, config digest, seed, version, wall time);
identical manifests modulo wall time produce byte-identical output.

Exit codes: 0 success, 1 usage error, 2 inconclusive search,
3 resource guard tripped.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from typing import Optional

import numpy as np

from . import __version__
from .core import (
    Colouring,
    IntegerSubset,
    Interval,
    ResourceGuardError,
    TripleSystem,
)
from .constructions import (
    alpha_for_rate,
    eleven_interval_colouring,
    max_non_schur_size_bounds,
    mod5_colouring,
    perturbed_blocker_set,
    product_free_colouring,
    verify_colouring_free,
)
from .counting import (
    count_monochromatic,
    count_product_triples,
    max_divisor_count,
    multiplication_table_count,
    supersaturation_count,
)
from .randomlab import (
    ProbabilityRule,
    SweepPlan,
    contains_product_triple,
    derive_seed,
    perturbed_sweep,
    threshold_sweep,
)
from .solver import SearchConfig, schur_number

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONCLUSIVE = 2
EXIT_GUARD = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; the contract here wants 1."""

    def error(self, message: str):
        raise _UsageError(message)


# ---------------------------------------------------------------------------
# set/colouring text format
# ---------------------------------------------------------------------------

def colouring_to_text(colouring: Colouring) -> str:
    iv = colouring.ground.interval
    lines = [f"# interval {iv.lo} {iv.hi} {colouring.k}"]
    for m in colouring.ground.members():
        lines.append(f"{int(m)} {colouring.colour_of(int(m))}")
    return "\n".join(lines) + "\n"


def subset_to_text(subset: IntegerSubset) -> str:
    """A bare set is written as a 1-colouring."""
    iv = subset.interval
    lines = [f"# interval {iv.lo} {iv.hi} 1"]
    lines.extend(f"{int(m)} 1" for m in subset.members())
    return "\n".join(lines) + "\n"


def colouring_from_text(text: str) -> Colouring:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# interval"):
        raise ValueError("missing '# interval lo hi k' header")
    _, _, lo, hi, k = lines[0].split()
    lo, hi, k = int(lo), int(hi), int(k)
    colour_of = {}
    for ln in lines[1:]:
        elem, col = ln.split()
        colour_of[int(elem)] = int(col)
    ground = IntegerSubset.from_members(Interval(lo, hi), colour_of.keys())
    return Colouring.from_map(ground, k, colour_of)


# ---------------------------------------------------------------------------
# manifest plumbing
# ---------------------------------------------------------------------------

def _manifest(args: argparse.Namespace, seed: Optional[int], wall: float) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    digest = hashlib.sha256(json.dumps(cfg, sort_keys=True, default=str)
                            .encode()).hexdigest()
    return {
        "command": " ".join(sys.argv),
        "config_digest": digest,
        "seed": seed,
        "version": __version__,
        "wall_time_s": round(wall, 3),
    }


def _emit(args: argparse.Namespace, payload: str, seed: Optional[int],
          wall: float) -> None:
    manifest = _manifest(args, seed, wall)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(payload)
        with open(out + ".manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")
        print(f"wrote {out} (+ manifest)", file=sys.stderr)
    else:
        sys.stdout.write(payload)
        print(json.dumps(manifest), file=sys.stderr)


def _records_to_csv(records, extra_cols: tuple[str, ...] = ()) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("n", "c", "p", "trials", "successes", "frequency") + extra_cols)
    for rec in records:
        row = [rec.n, rec.extra["c"], rec.p, rec.trials, rec.successes,
               rec.frequency]
        row.extend(rec.extra[col] for col in extra_cols)
        writer.writerow(row)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_schur(args) -> int:
    system = TripleSystem.parse(args.system)
    config = SearchConfig(k=args.k, system=system, max_n=args.max_n,
                          node_limit=args.node_limit)
    t0 = time.perf_counter()
    outcome = schur_number(args.k, system, config)
    wall = time.perf_counter() - t0
    print(f"k: {args.k}")
    print(f"system: {system.value}")
    print(f"value: {outcome.value if outcome.conclusive else 'inconclusive'}")
    print(f"lower_bound: {outcome.lower_bound}")
    print(f"nodes_explored: {outcome.nodes_explored}")
    print(f"elapsed_s: {outcome.elapsed:.3f}")
    if outcome.witness is not None and args.out:
        _emit(args, colouring_to_text(outcome.witness), None, wall)
    return EXIT_OK if outcome.conclusive else EXIT_INCONCLUSIVE


def _cmd_gstar(args) -> int:
    bounds = max_non_schur_size_bounds(args.k, args.n, args.eps,
                                       s=args.s, s_prime=args.s_prime)
    print(f"lower: {bounds.lower}")
    print(f"upper: {bounds.upper}")
    print(f"upper_condition_met: {bounds.upper_condition_met}")
    return EXIT_OK


def _build_construction(args) -> tuple[str, str]:
    """Returns (payload text, verification report)."""
    name = args.name
    if name == "log-product":
        if args.k is None:
            raise _UsageError("--k is required for log-product")
        colouring = product_free_colouring(args.k, args.n)
        violations = verify_colouring_free(colouring, TripleSystem.PRODUCT)
        report = (f"construction: log-product k={args.k} n={args.n}\n"
                  f"ground: ({colouring.ground.interval.lo - 1}, {args.n}]\n"
                  f"violations: {len(violations)}\n")
        return colouring_to_text(colouring), report
    if name == "mod5":
        ground, colouring = mod5_colouring(args.n)
        violations = verify_colouring_free(colouring, TripleSystem.SUM)
        report = (f"construction: mod5 n={args.n}\n"
                  f"size: {ground.cardinality()} (ceil(4n/5) = {-(-4 * args.n // 5)})\n"
                  f"violations: {len(violations)}\n")
        return colouring_to_text(colouring), report
    if name == "eleven":
        colouring = eleven_interval_colouring(args.n)
        mono = count_monochromatic(colouring, TripleSystem.SUM)
        report = (f"construction: eleven n={args.n}\n"
                  f"monochromatic_sum_triples: {mono}\n"
                  f"reference_n2_over_22: {args.n * args.n / 22:.1f}\n")
        return colouring_to_text(colouring), report
    if name == "blocker":
        if args.alpha is None:
            raise _UsageError("--alpha is required for blocker")
        subset = perturbed_blocker_set(args.n, args.alpha)
        triple_free = not contains_product_triple(subset)
        report = (f"construction: blocker n={args.n} alpha={args.alpha}\n"
                  f"size: {subset.cardinality()} "
                  f"(fraction {subset.cardinality() / args.n:.6f})\n"
                  f"product_triple_free: {triple_free}\n")
        return subset_to_text(subset), report
    raise _UsageError(f"unknown construction {name!r}")


def _cmd_construct(args) -> int:
    t0 = time.perf_counter()
    payload, report = _build_construction(args)
    wall = time.perf_counter() - t0
    print(report, end="", file=sys.stderr)
    _emit(args, payload, None, wall)
    return EXIT_OK


def _cmd_count(args) -> int:
    what = args.what
    if what == "triples":
        tc = count_product_triples(args.n)
        print(f"total: {tc.total}")
        print(f"off_diagonal: {tc.off_diagonal}")
        print(f"diagonal: {tc.diagonal}")
        ref = 0.5 * args.n * math.log(args.n)
        print(f"reference_half_n_log_n: {ref:.1f}")
        print(f"ratio: {tc.total / ref:.4f}")
    elif what == "mono":
        system = TripleSystem.parse(args.system)
        if args.name == "mod5":
            _, colouring = mod5_colouring(args.n)
        elif args.name == "eleven":
            colouring = eleven_interval_colouring(args.n)
        elif args.name == "log-product":
            if args.k is None:
                raise _UsageError("--k is required for log-product")
            colouring = product_free_colouring(args.k, args.n)
        else:
            raise _UsageError("--name must be one of mod5, eleven, log-product")
        print(f"monochromatic: {count_monochromatic(colouring, system)}")
    elif what == "divisors":
        mx, arg = max_divisor_count(args.n)
        print(f"max: {mx}")
        print(f"argmax: {arg}")
        ref = math.log(args.n) / math.log(math.log(args.n))
        print(f"reference_log_n_over_loglog_n: {ref:.3f}")
    elif what == "table":
        if args.y is None or args.z is None:
            raise _UsageError("--y and --z are required for table counts")
        est = multiplication_table_count(args.n, args.y, args.z)
        print(f"exact: {est.exact}")
        if est.ratio is not None:
            print(f"u: {est.u:.6f}")
            print(f"theta_form: {est.theta_form:.1f}")
            print(f"ratio: {est.ratio:.4f}")
        else:
            print("theta preconditions not met; exact count only")
    elif what == "supersat":
        A = IntegerSubset.full(2, args.n)
        if args.drop:
            rng = np.random.Generator(np.random.Philox(
                key=np.array([derive_seed(args.seed, args.drop), 0],
                             dtype=np.uint64)))
            keep = A.dense()
            drop = rng.choice(np.arange(2, args.n + 1), size=args.drop,
                              replace=False)
            keep[drop] = False
            A = IntegerSubset.from_dense(Interval(2, args.n), keep)
        count = supersaturation_count(A)
        print(f"count: {count}")
        print(f"size: {A.cardinality()}")
        print(f"reference_n_over_8: {args.n / 8:.1f}")
    else:
        raise _UsageError(f"unknown count target {what!r}")
    return EXIT_OK


def _parse_multipliers(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(","))
    except ValueError as exc:
        raise _UsageError(f"bad multiplier list {text!r}: {exc}")


def _cmd_threshold(args) -> int:
    plan = SweepPlan(n=args.n, multipliers=_parse_multipliers(args.c),
                     trials=args.trials, master_seed=args.seed,
                     rule=ProbabilityRule.RANDOM_THRESHOLD)
    t0 = time.perf_counter()
    records = threshold_sweep(plan)
    wall = time.perf_counter() - t0
    _emit(args, _records_to_csv(records), args.seed, wall)
    return EXIT_OK


def _cmd_perturbed(args) -> int:
    alpha = args.alpha if args.alpha is not None else alpha_for_rate(0.25)
    t0 = time.perf_counter()
    records = perturbed_sweep(args.n, alpha, _parse_multipliers(args.c),
                              args.trials, args.seed)
    wall = time.perf_counter() - t0
    payload = _records_to_csv(records,
                              extra_cols=("alpha", "beta_alpha", "blocker_size"))
    _emit(args, payload, args.seed, wall)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="prodschur",
                     description="Schur-triple search, constructions, counts "
                                 "and Monte Carlo experiments")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schur", help="exact Schur-type number")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--system", default="sum", choices=["sum", "double-sum"])
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--node-limit", type=int, default=None)
    p.add_argument("--out", default=None, help="write the witness colouring here")
    p.set_defaults(func=_cmd_schur)

    p = sub.add_parser("gstar", help="extremal-size bounds for product k-Schurness")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--s-prime", type=int, default=None)
    p.set_defaults(func=_cmd_gstar)

    p = sub.add_parser("construct", help="build and verify a named construction")
    p.add_argument("--name", required=True,
                   choices=["log-product", "mod5", "eleven", "blocker"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("count", help="exact counts with asymptotic references")
    p.add_argument("--what", required=True,
                   choices=["triples", "mono", "divisors", "table", "supersat"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--y", type=float, default=None)
    p.add_argument("--z", type=float, default=None)
    p.add_argument("--name", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--system", default="sum",
                   choices=["sum", "double-sum", "product"])
    p.add_argument("--drop", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("threshold", help="random-set threshold sweep (CSV)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", required=True, help="comma-separated multipliers")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("perturbed", help="randomly perturbed sweep (CSV)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=None,
                   help="default: the density with rate 1/4")
    p.add_argument("--c", required=True, help="comma-separated multipliers")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_perturbed)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceGuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
