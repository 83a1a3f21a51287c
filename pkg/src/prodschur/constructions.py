"""Explicit colourings and sets with product-free / sum-free guarantees.

Each construction is paired with an independent re-checker
(verify_colouring_free enumerates every triple of the system from
scratch), so nothing here is trusted on the strength of its derivation
alone.  Natural logarithms are used throughout; for the shape-level
checks downstream this only rescales constants.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .core import Colouring, IntegerSubset, Interval, TripleSystem, has_mono_triple
from . import counting

# Exact small Schur numbers: least n such that every k-colouring of [n]
# has a monochromatic a+b=c (plain), resp. a+b=c or a+b=c-1 (double).
# Cross-checked against the exact solver in the test suite.
KNOWN_SCHUR = {1: 2, 2: 5, 3: 14, 4: 45}
KNOWN_DOUBLE_SUM_SCHUR = {1: 2, 2: 5, 3: 14, 4: 41}


def erdos_ford_delta() -> float:
    """The Erdos-Ford constant 1 - (1 + ln ln 2)/ln 2 = 0.086071...

    Governs the density of integers with a divisor in a dyadic-type
    interval; natural logarithms (the defining identity
    (1 - delta) ln 2 = 1 + ln ln 2 pins the convention).
    """
    return 1.0 - (1.0 + math.log(math.log(2.0))) / math.log(2.0)


def divisor_interval_rate(alpha: float) -> float:
    """Rate r(alpha) = alpha^(1/delta) / (4 (ln(1/alpha))^(3/(2 delta))).

    Controls how wide a divisor interval must be sieved away to thin the
    integers by density ~alpha; strictly increasing on (0, 1).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    d = erdos_ford_delta()
    return alpha ** (1.0 / d) / (4.0 * math.log(1.0 / alpha) ** (1.5 / d))


def threshold_exponent_offset(alpha: float) -> float:
    """Offset b(alpha) = r/(1+2r) with r = divisor_interval_rate(alpha).

    The perturbed-threshold probability scales as n^(b - 1/2); always in
    (0, 1/2).
    """
    r = divisor_interval_rate(alpha)
    return r / (1.0 + 2.0 * r)


def alpha_for_rate(target: float, tol: float = 1e-15) -> float:
    """Inverse of divisor_interval_rate by bisection on its monotone branch."""
    if target <= 0:
        raise ValueError("target rate must be positive")
    lo, hi = 1e-12, 1.0 - 1e-12
    if divisor_interval_rate(hi) < target:
        raise ValueError(f"target rate {target} not attained below alpha = 1")
    for _ in range(200):
        mid = (lo + hi) / 2.0
        if divisor_interval_rate(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return (lo + hi) / 2.0


@dataclass(frozen=True)
class PerturbationParams:
    """Derived constants for one removable-density value alpha.

    `small_factor_bound` / `large_factor_bound` are the factor cutoffs
    n^(1/2 -+ offset); they are populated once n is supplied.
    """

    alpha: float
    rate: float
    exponent_offset: float
    small_factor_bound: Optional[float] = None
    large_factor_bound: Optional[float] = None

    def __post_init__(self) -> None:
        if not 0.0 < self.exponent_offset < 0.5:
            raise ValueError("exponent offset must lie in (0, 1/2)")

    @classmethod
    def from_alpha(cls, alpha: float, n: Optional[int] = None) -> "PerturbationParams":
        rate = divisor_interval_rate(alpha)
        offset = rate / (1.0 + 2.0 * rate)
        y = z = None
        if n is not None:
            y = n ** (0.5 - offset)
            z = n ** (0.5 + offset)
        return cls(alpha=alpha, rate=rate, exponent_offset=offset,
                   small_factor_bound=y, large_factor_bound=z)


def integer_nth_root(x: int, k: int) -> int:
    """floor(x^(1/k)) in exact integer arithmetic (Newton + adjustment)."""
    if x < 0 or k < 1:
        raise ValueError("need x >= 0 and k >= 1")
    if k == 1 or x < 2:
        return x
    r = 1 << -(-x.bit_length() // k)  # certainly >= the root
    while True:
        nr = ((k - 1) * r + x // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def log_partition_boundaries(n: int, parts: int) -> np.ndarray:
    """b_i = floor(n^(i/parts)) for i = 1..parts, by exact integer roots.

    The half-open cells (b_{i-1}, b_i] realise the index map
    ceil(parts * log_n(a)) exactly, with no floating-point edge cases at
    perfect powers.
    """
    return np.array([integer_nth_root(n ** i, parts) for i in range(1, parts + 1)],
                    dtype=np.int64)


@functools.lru_cache(maxsize=None)
def _double_sum_base(k: int) -> Colouring:
    """Witness colouring of [S'(k)-1] free of a+b=c and a+b=c-1."""
    from .solver import schur_number  # deferred: solver imports core only

    if k not in KNOWN_DOUBLE_SUM_SCHUR:
        raise ValueError(f"no built-in double-sum Schur number for k={k}; "
                         f"pass an explicit base colouring")
    outcome = schur_number(k, TripleSystem.DOUBLE_SUM)
    assert outcome.conclusive and outcome.witness is not None
    return outcome.witness


def product_free_colouring(k: int, n: int, base: Optional[Colouring] = None) -> Colouring:
    """k-colouring of (n^(1/s), n] with no monochromatic product, s = S'(k).

    Integer a receives the base colour of its logarithmic cell index
    ceil(s * log_n(a)) - 1.  A product ab = c adds log-indices up to the
    double-sum slack, so freeness of the base colouring transfers.  The
    base must be a k-colouring of [s-1] free of a+b=c and a+b=c-1; if
    omitted it is taken from the exact solver (k <= 4).
    """
    if base is None:
        base = _double_sum_base(k)
    s = base.ground.interval.hi + 1
    if base.ground.interval.lo != 1 or base.ground.cardinality() != s - 1:
        raise ValueError("base must colour the full interval [1, s-1]")
    if base.k != k:
        raise ValueError(f"base has {base.k} colours, expected {k}")
    bad = has_mono_triple(base, TripleSystem.DOUBLE_SUM)
    if bad is not None:
        raise ValueError(f"base colouring admits the monochromatic solution {bad}")

    lo = integer_nth_root(n, s) + 1
    if lo > n:
        raise ValueError(f"ground interval (n^(1/{s}), {n}] is empty")
    bounds = log_partition_boundaries(n, s)
    ground = IntegerSubset.full(lo, n)
    elements = np.arange(lo, n + 1, dtype=np.int64)
    cell = np.searchsorted(bounds, elements, side="left")  # = index map, in [1, s-1]
    base_dense = base.dense()
    colours = base_dense[cell]
    return Colouring(ground, k, colours)


class ExtremalSizeBounds(NamedTuple):
    lower: float
    upper: float
    upper_condition_met: bool


def max_non_schur_size_bounds(k: int, n: int, eps: float,
                              s: Optional[int] = None,
                              s_prime: Optional[int] = None) -> ExtremalSizeBounds:
    """Bounds n - n^(1/S'(k)) <= size <= n - (1-eps) n^(1/S(k)).

    The upper bound is only proven for n > (2/eps)^(S(k)^2); that
    condition is astronomically large for k >= 2, so it is reported as a
    flag rather than enforced.  S/S' come from the built-in table for
    k <= 4 unless supplied.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    s = s if s is not None else KNOWN_SCHUR.get(k)
    s_prime = s_prime if s_prime is not None else KNOWN_DOUBLE_SUM_SCHUR.get(k)
    if s is None or s_prime is None:
        raise ValueError(f"no built-in Schur numbers for k={k}; supply s= and s_prime=")
    lower = n - n ** (1.0 / s_prime)
    upper = n - (1.0 - eps) * n ** (1.0 / s)
    # log-space comparison: (2/eps)^(s^2) overflows floats long before it matters
    condition = math.log(n) > s * s * math.log(2.0 / eps)
    return ExtremalSizeBounds(lower, upper, condition)


def mod5_colouring(n: int) -> tuple[IntegerSubset, Colouring]:
    """The 2-coloured subset of [n] with no multiple of 5 and no mono sum.

    Members not divisible by 5; residues 1, 4 (mod 5) get colour 1 and
    residues 2, 3 colour 2.  Size is ceil(4n/5).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    values = np.arange(0, n + 1, dtype=np.int64)
    res = values % 5
    dense = res != 0
    dense[0] = False
    ground = IntegerSubset.from_dense(Interval(1, n), dense)
    colours = np.zeros(n, dtype=np.int8)
    inner = res[1:]
    colours[(inner == 1) | (inner == 4)] = 1
    colours[(inner == 2) | (inner == 3)] = 2
    return ground, Colouring(ground, 2, colours)


def eleven_interval_colouring(n: int) -> Colouring:
    """2-colouring of [1,n] with colour 1 on (4n/11, 10n/11].

    The colouring that attains the minimal monochromatic-sum count
    n^2/22 + O(n) over two colours.
    """
    if n < 11:
        raise ValueError("n must be >= 11")
    ground = IntegerSubset.full(1, n)
    a = np.arange(1, n + 1, dtype=np.int64)
    in_middle = (11 * a > 4 * n) & (11 * a <= 10 * n)
    colours = np.where(in_middle, 1, 2).astype(np.int8)
    return Colouring(ground, 2, colours)


def perturbed_blocker_set(n: int, alpha: float, *,
                          beta_override: Optional[float] = None) -> IntegerSubset:
    """[ceil(n^(1-2b)), n] minus every integer with a divisor in (y, z).

    b = threshold_exponent_offset(alpha), y = n^(1/2-b), z = n^(1/2+b).
    Every member then factors only as (small <= y) * (large >= z), and
    pairwise products of members exceed n, so the set alone carries no
    product triple.  `beta_override` is a test hook bypassing alpha.
    """
    beta = beta_override if beta_override is not None else threshold_exponent_offset(alpha)
    npow = n ** beta
    if npow < math.sqrt(2.0):
        raise ValueError(
            f"range violation: n^beta = {npow:.6g} < sqrt(2); alpha too small "
            f"for this n")
    if beta > 1.0 / 6.0 + 1e-12:
        raise ValueError(
            f"range violation: beta = {beta:.6g} > 1/6; alpha exceeds the "
            f"construction range")
    y = n ** (0.5 - beta)
    z = n ** (0.5 + beta)
    lo = math.ceil(n ** (1.0 - 2.0 * beta))
    removed = counting.divisors_in_interval_indicator(n, y, z)
    dense = np.zeros(n + 1, dtype=bool)
    dense[lo:] = ~removed[lo:]
    dense[:2] = False
    return IntegerSubset.from_dense(Interval(2, n), dense)


def verify_colouring_free(colouring: Colouring, system: TripleSystem
                          ) -> list[tuple[int, int, int]]:
    """Every monochromatic triple (a <= b) of the system in the ground set.

    Independent full enumeration; an empty list certifies the colouring.
    """
    iv = colouring.ground.interval
    col = colouring.dense()
    _, violations = counting._mono_scan(col, iv.lo, iv.hi, system, collect=True)
    return violations
