"""Seeded Monte Carlo experiments on random and randomly perturbed sets.

Randomness discipline: every trial draws from a counter-based Philox
stream keyed by a seed derived deterministically from
(master_seed, multiplier index, trial index).  Trials are therefore
independent, order-insensitive, and reproducible regardless of how many
workers execute them; aggregation is plain success counting.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .constructions import perturbed_blocker_set, threshold_exponent_offset
from .core import ExperimentRecord, IntegerSubset, Interval

_MASK64 = (1 << 64) - 1
_KEY_SALT = 0x9E3779B97F4A7C15  # second Philox key word, fixed

WORKERS_ENV = "PRODSCHUR_WORKERS"


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_seed(master_seed: int, *indices: int) -> int:
    """64-bit per-trial seed from a master seed and stream indices."""
    h = master_seed & _MASK64
    for i in indices:
        h = _splitmix64(h ^ (i & _MASK64))
    return h


def _generator(seed: int) -> np.random.Generator:
    key = np.array([seed & _MASK64, _KEY_SALT], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _resolve_workers(workers: Optional[int]) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


class ProbabilityRule(Enum):
    """How a sweep maps a multiplier c to an inclusion probability."""

    RANDOM_THRESHOLD = "random-threshold"  # p = c * (n ln n)^(-1/3)
    PERTURBED = "perturbed"                # p = c * n^(-1/2 + offset(alpha))


@dataclass(frozen=True)
class SweepPlan:
    """Parameters of one Monte Carlo sweep over multipliers."""

    n: int
    multipliers: tuple[float, ...]
    trials: int
    master_seed: int
    rule: ProbabilityRule = ProbabilityRule.RANDOM_THRESHOLD
    alpha: Optional[float] = None

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.multipliers or any(c <= 0 for c in self.multipliers):
            raise ValueError("multipliers must be positive")
        if self.rule is ProbabilityRule.PERTURBED and self.alpha is None:
            raise ValueError("the perturbed rule needs alpha")

    def probability(self, c: float) -> tuple[float, bool]:
        """(clamped p, whether clamping occurred) for multiplier c."""
        if self.rule is ProbabilityRule.RANDOM_THRESHOLD:
            raw = c * (self.n * math.log(self.n)) ** (-1.0 / 3.0)
        else:
            offset = threshold_exponent_offset(self.alpha)
            raw = c * self.n ** (-0.5 + offset)
        clamped = raw > 1.0
        return (1.0 if clamped else raw), clamped


def sample_random_subset(n: int, p: float, seed: int) -> IntegerSubset:
    """Each element of [2, n] independently with probability p; Philox-keyed."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if n < 2:
        raise ValueError("n must be >= 2")
    dense = np.zeros(n + 1, dtype=bool)
    if p >= 1.0:
        dense[2:] = True
    elif p > 0.0:
        dense[2:] = _generator(seed).random(n - 1) < p
    return IntegerSubset.from_dense(Interval(2, n), dense)


def contains_product_triple(A: IntegerSubset) -> bool:
    """True iff some a, b in A (possibly equal) have ab in A.

    Scans a over A's members up to sqrt(n) and tests the whole row
    b in [a, n/a] against the dense indicator, n = carrier upper end.
    """
    n = A.interval.hi
    dense = A.dense()
    if A.interval.lo <= 1 and dense[1]:
        return True  # 1*1 = 1, and 1*b = b for any other member
    r = math.isqrt(n)
    small = np.flatnonzero(dense[:r + 1])
    for a in small:
        a = int(a)
        if a < 2:
            continue
        b_hi = n // a
        row = dense[a:b_hi + 1]
        prods = dense[a * a:a * b_hi + 1:a]
        if np.any(row & prods):
            return True
    return False


def two_copy_split(p: float) -> tuple[float, float]:
    """p1 = p2 with (1-p1)(1-p2) = 1-p: two sparser exposures of one set."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    half = 1.0 - math.sqrt(1.0 - p)
    return half, half


def product_set_count(A: IntegerSubset, n: int) -> int:
    """|{ab <= n : a, b in A}| — distinct pairwise products, deduplicated."""
    dense = A.dense(n)
    hit = np.zeros(n + 1, dtype=bool)
    r = math.isqrt(n)
    small = np.flatnonzero(dense[:r + 1])
    for a in small:
        a = int(a)
        if a < 1:
            continue
        b_hi = n // a
        if b_hi < a:
            continue
        row = dense[a:b_hi + 1]
        hit[a * a:a * b_hi + 1:a] |= row
    return int(np.count_nonzero(hit))


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def _threshold_chunk(args: tuple[int, float, Sequence[int]]) -> int:
    n, p, seeds = args
    return sum(contains_product_triple(sample_random_subset(n, p, s)) for s in seeds)


def _perturbed_chunk(args: tuple[np.ndarray, int, float, Sequence[int]]) -> int:
    blocker_dense, n, p, seeds = args
    blocker = IntegerSubset.from_dense(Interval(2, n), blocker_dense)
    return sum(perturbed_trial(blocker, n, p, s) for s in seeds)


def _run_trials(chunk_fn, static_args: tuple, trial_seeds: list[int],
                workers: int) -> int:
    if workers <= 1 or len(trial_seeds) < 2 * workers:
        return chunk_fn(static_args + (trial_seeds,))
    chunks = [trial_seeds[i::workers] for i in range(workers)]
    jobs = [static_args + (chunk,) for chunk in chunks if chunk]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(chunk_fn, jobs))


def threshold_sweep(plan: SweepPlan, workers: Optional[int] = None
                    ) -> list[ExperimentRecord]:
    """Success frequency of containing a product triple across multipliers.

    For each multiplier c, runs plan.trials independent samples of
    [2,n]_p at p = c (n ln n)^(-1/3) and records how many contained a
    product Schur triple.
    """
    if plan.rule is not ProbabilityRule.RANDOM_THRESHOLD:
        raise ValueError("threshold_sweep needs a RANDOM_THRESHOLD plan")
    workers = _resolve_workers(workers)
    records = []
    for ci, c in enumerate(plan.multipliers):
        p, clamped = plan.probability(c)
        seeds = [derive_seed(plan.master_seed, ci, t) for t in range(plan.trials)]
        successes = _run_trials(_threshold_chunk, (plan.n, p), seeds, workers)
        records.append(ExperimentRecord(
            n=plan.n, p=p, seed=plan.master_seed, trials=plan.trials,
            successes=successes,
            extra={"c": c, "clamped": clamped}))
    return records


def perturbed_trial(C: IntegerSubset, n: int, p: float, seed: int) -> bool:
    """Does C united with a fresh sample of [2,n]_p contain a product triple?"""
    R = sample_random_subset(n, p, seed)
    return contains_product_triple(C.union(R))


def perturbed_sweep(n: int, alpha: float, multipliers: Sequence[float],
                    trials: int, master_seed: int,
                    workers: Optional[int] = None) -> list[ExperimentRecord]:
    """Perturbed-threshold sweep against the blocker construction.

    Probabilities follow p = c * n^(-1/2 + offset(alpha)); the blocker
    set is built once and shared across all trials.  Records annotate
    alpha, the exponent offset, and the blocker's size.
    """
    plan = SweepPlan(n=n, multipliers=tuple(multipliers), trials=trials,
                     master_seed=master_seed, rule=ProbabilityRule.PERTURBED,
                     alpha=alpha)
    workers = _resolve_workers(workers)
    blocker = perturbed_blocker_set(n, alpha)
    blocker_dense = blocker.dense()
    offset = threshold_exponent_offset(alpha)
    size = blocker.cardinality()
    records = []
    for ci, c in enumerate(plan.multipliers):
        p, clamped = plan.probability(c)
        seeds = [derive_seed(master_seed, ci, t) for t in range(trials)]
        successes = _run_trials(_perturbed_chunk, (blocker_dense, n, p), seeds, workers)
        records.append(ExperimentRecord(
            n=n, p=p, seed=master_seed, trials=trials, successes=successes,
            extra={"c": c, "clamped": clamped, "alpha": alpha,
                   "beta_alpha": offset, "blocker_size": size,
                   "blocker_fraction": size / n}))
    return records


def degree_structure(Cprime: IntegerSubset, n: int, beta: float
                     ) -> tuple[float, IntegerSubset, int]:
    """Average degree and high-degree set of the implicit product graph.

    Vertices are [2, floor(n^(1/2+beta))]; a and b (distinct) are
    adjacent iff ab is in Cprime.  Degrees come from divisor row scans,
    the graph itself is never materialised.  Returns (average degree d,
    X = vertices of degree > d/2, |X|); |X| >= d/2 always holds and is
    re-checked on every call.
    """
    if n < 4:
        raise ValueError("n must be >= 4")
    vmax = math.floor(n ** (0.5 + beta))
    vmax = min(vmax, n)
    if vmax < 2:
        raise ValueError("vertex set [2, n^(1/2+beta)] is empty")
    dense = Cprime.dense(n)
    degrees = np.zeros(vmax + 1, dtype=np.int64)
    for a in range(2, vmax + 1):
        b_hi = min(vmax, n // a)
        if b_hi < 2:
            continue
        row = dense[2 * a:a * b_hi + 1:a]  # products a*b, b in [2, b_hi]
        deg = int(np.count_nonzero(row))
        if 2 <= a <= b_hi and dense[a * a]:
            deg -= 1  # no loops
        degrees[a] = deg
    v_count = vmax - 1
    avg = float(degrees.sum()) / v_count
    x_dense = np.zeros(vmax + 1, dtype=bool)
    x_dense[2:] = degrees[2:] > avg / 2.0
    X = IntegerSubset.from_dense(Interval(2, vmax), x_dense)
    x_size = X.cardinality()
    if x_size < avg / 2.0:
        raise RuntimeError(
            f"internal invariant violated: |X| = {x_size} < d/2 = {avg / 2.0}")
    return avg, X, x_size
