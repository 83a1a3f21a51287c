"""Shared domain types: intervals, dense integer subsets, colourings, triple systems.

Everything here is immutable after construction and safe to share across
workers.  The dense-indicator representation is deliberate: membership
tests sit inside every hot loop (triple detection, sieves), so subsets
are stored as flat indicator arrays over their carrier interval rather
than as sorted element lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

import numpy as np


class ResourceGuardError(RuntimeError):
    """A size/memory guard refused to run an infeasible computation."""


class TripleSystem(Enum):
    """Which equation family is in force.  a and b need not be distinct."""

    SUM = "sum"              # a + b = c
    DOUBLE_SUM = "double-sum"  # a + b = c  or  a + b = c - 1
    PRODUCT = "product"      # a * b = c

    @classmethod
    def parse(cls, name: str) -> "TripleSystem":
        for sys_ in cls:
            if sys_.value == name:
                return sys_
        raise ValueError(f"unknown triple system {name!r}; expected one of "
                         f"{[s.value for s in cls]}")


@dataclass(frozen=True)
class Interval:
    """Closed integer interval [lo, hi] with 1 <= lo <= hi."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if not (1 <= self.lo <= self.hi):
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]: need 1 <= lo <= hi")

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, m: int) -> bool:
        return self.lo <= m <= self.hi


class IntegerSubset:
    """A subset of an integer interval, held as a dense indicator.

    Membership is O(1).  The indicator is read-only once built; all
    "mutations" return fresh subsets.
    """

    __slots__ = ("interval", "_ind")

    def __init__(self, interval: Interval, indicator: np.ndarray):
        if len(indicator) != len(interval):
            raise ValueError("indicator length does not match interval size")
        # always copy: callers may hand in views of arrays they keep mutating
        ind = np.array(indicator, dtype=bool)
        ind.flags.writeable = False
        self.interval = interval
        self._ind = ind

    # -- constructors -------------------------------------------------

    @classmethod
    def full(cls, lo: int, hi: int) -> "IntegerSubset":
        iv = Interval(lo, hi)
        return cls(iv, np.ones(len(iv), dtype=bool))

    @classmethod
    def from_members(cls, interval: Interval, members: Iterable[int]) -> "IntegerSubset":
        ind = np.zeros(len(interval), dtype=bool)
        for m in members:
            if m not in interval:
                raise ValueError(f"member {m} outside interval [{interval.lo}, {interval.hi}]")
            ind[m - interval.lo] = True
        return cls(interval, ind)

    @classmethod
    def from_dense(cls, interval: Interval, dense: np.ndarray) -> "IntegerSubset":
        """Build from an absolute indicator (index = integer value, length >= hi+1)."""
        return cls(interval, dense[interval.lo:interval.hi + 1])

    # -- queries ------------------------------------------------------

    def __contains__(self, m: int) -> bool:
        iv = self.interval
        return iv.lo <= m <= iv.hi and bool(self._ind[m - iv.lo])

    def cardinality(self) -> int:
        return int(self._ind.sum())

    def __len__(self) -> int:
        return self.cardinality()

    def members(self) -> np.ndarray:
        """All members in increasing order."""
        return np.flatnonzero(self._ind) + self.interval.lo

    def dense(self, hi: Optional[int] = None) -> np.ndarray:
        """Absolute indicator: bool array of length hi+1 indexed by integer value."""
        hi = self.interval.hi if hi is None else hi
        out = np.zeros(hi + 1, dtype=bool)
        top = min(hi, self.interval.hi)
        if top >= self.interval.lo:
            out[self.interval.lo:top + 1] = self._ind[:top - self.interval.lo + 1]
        return out

    def union(self, other: "IntegerSubset") -> "IntegerSubset":
        """Union carried on the smallest interval covering both operands."""
        lo = min(self.interval.lo, other.interval.lo)
        hi = max(self.interval.hi, other.interval.hi)
        dense = self.dense(hi) | other.dense(hi)
        return IntegerSubset.from_dense(Interval(lo, hi), dense)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegerSubset):
            return NotImplemented
        return self.interval == other.interval and np.array_equal(self._ind, other._ind)

    def __repr__(self) -> str:
        return (f"IntegerSubset([{self.interval.lo},{self.interval.hi}], "
                f"|A|={self.cardinality()})")


class Colouring:
    """An assignment of a colour index in 1..k to each member of a ground set."""

    __slots__ = ("ground", "k", "_col")

    def __init__(self, ground: IntegerSubset, k: int, colours: np.ndarray):
        """`colours` is aligned with the ground interval; 0 marks non-members."""
        if k < 1 or k > 127:
            raise ValueError(f"colour count k={k} out of supported range 1..127")
        col = np.array(colours, dtype=np.int8)
        if len(col) != len(ground.interval):
            raise ValueError("colour array length does not match ground interval")
        mem = ground.dense()[ground.interval.lo:]
        if np.any((col > 0) != mem):
            raise ValueError("colour array support differs from ground membership")
        if np.any(col > k) or np.any(col < 0):
            raise ValueError("colour indices must lie in 1..k")
        col.flags.writeable = False
        self.ground = ground
        self.k = k
        self._col = col

    @classmethod
    def from_map(cls, ground: IntegerSubset, k: int, colour_of: dict[int, int]) -> "Colouring":
        iv = ground.interval
        col = np.zeros(len(iv), dtype=np.int8)
        for m in ground.members():
            col[m - iv.lo] = colour_of[int(m)]
        return cls(ground, k, col)

    @classmethod
    def from_classes(cls, ground: IntegerSubset, classes: list[Iterable[int]]) -> "Colouring":
        """Colour class i (0-based) gets colour index i+1."""
        iv = ground.interval
        col = np.zeros(len(iv), dtype=np.int8)
        for i, members in enumerate(classes):
            for m in members:
                col[m - iv.lo] = i + 1
        return cls(ground, len(classes), col)

    def colour_of(self, m: int) -> int:
        if m not in self.ground:
            raise KeyError(f"{m} is not in the ground set")
        return int(self._col[m - self.ground.interval.lo])

    def dense(self, hi: Optional[int] = None) -> np.ndarray:
        """Absolute colour array (index = integer value); 0 where absent."""
        hi = self.ground.interval.hi if hi is None else hi
        out = np.zeros(hi + 1, dtype=np.int8)
        top = min(hi, self.ground.interval.hi)
        lo = self.ground.interval.lo
        if top >= lo:
            out[lo:top + 1] = self._col[:top - lo + 1]
        return out

    def colour_class(self, c: int) -> np.ndarray:
        """Members of colour class c (1-based), increasing."""
        return np.flatnonzero(self._col == c) + self.ground.interval.lo

    def used_colours(self) -> list[int]:
        return sorted(int(c) for c in np.unique(self._col) if c > 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Colouring):
            return NotImplemented
        return (self.k == other.k and self.ground == other.ground
                and np.array_equal(self._col, other._col))

    def __repr__(self) -> str:
        return f"Colouring(ground={self.ground!r}, k={self.k})"


@dataclass(frozen=True, eq=True)
class SolverOutcome:
    """Result of an exact Schur-type search.

    `conclusive` is False when a node limit or ceiling stopped the search
    before exhaustion; `lower_bound` is then the best certified bound
    (a good colouring of [lower_bound - 1] was found).
    """

    value: Optional[int]
    witness: Optional[Colouring]
    nodes_explored: int
    elapsed: float
    conclusive: bool
    lower_bound: int


@dataclass(frozen=True, eq=True)
class ExperimentRecord:
    """One row of a Monte Carlo sweep."""

    n: int
    p: float
    seed: int
    trials: int
    successes: int
    extra: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not (0 <= self.successes <= self.trials):
            raise ValueError("successes must lie in [0, trials]")
        if not (0.0 <= self.p <= 1.0):
            raise ValueError("p must lie in [0, 1]")

    @property
    def frequency(self) -> float:
        return self.successes / self.trials if self.trials else 0.0


def triple_satisfied(a: int, b: int, c: int, system: TripleSystem) -> bool:
    """True iff (a, b, c) solves the system's equation(s); symmetric in a, b."""
    if min(a, b, c) < 1:
        raise ValueError("triple elements must be positive")
    if system is TripleSystem.SUM:
        return a + b == c
    if system is TripleSystem.DOUBLE_SUM:
        return a + b == c or a + b == c - 1
    return a * b == c


def has_mono_triple(colouring: Colouring, system: TripleSystem):
    """First monochromatic triple of the system inside the ground set.

    Returns (a, b, c, colour) with a <= b, lexicographically least by
    (a, b) (and by c for the double-sum pair), or None.
    """
    members = [int(m) for m in colouring.ground.members()]
    col = colouring.dense()
    hi = colouring.ground.interval.hi
    product = system is TripleSystem.PRODUCT
    double = system is TripleSystem.DOUBLE_SUM
    for i, a in enumerate(members):
        ca = col[a]
        for b in members[i:]:
            c = a * b if product else a + b
            if c > hi:
                break  # c grows with b, so no later b can work either
            if col[b] != ca:
                continue
            if col[c] == ca:
                return (a, b, c, int(ca))
            if double and c + 1 <= hi and col[c + 1] == ca:
                return (a, b, c + 1, int(ca))
    return None
