"""Exact Schur-type search: S(k), S'(k), k-Schurness, extremal subsets.

The engine is a depth-first backtracking search over colourings with
constraint propagation.  Elements are coloured in increasing order; for
each colour a bitmask of forbidden positions is maintained: assigning x
to colour c forbids c at a+x (and a+x+1 for the double-sum system) for
every a already in class c, including a = x.  Under the sum systems that
propagation is a single shift-or on the class bitmask; under the product
system the class member list is walked and positions a*x <= hi are set.
Symmetry breaking fixes the canonical colour order (colour c+1 may first
appear only after colour c has), which is sound because colour classes
are interchangeable.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .core import (
    Colouring,
    IntegerSubset,
    Interval,
    ResourceGuardError,
    SolverOutcome,
    TripleSystem,
    has_mono_triple,
)


class SearchInconclusive(Exception):
    """A node limit stopped a search before exhaustion."""

    def __init__(self, nodes_explored: int, deepest: int):
        super().__init__(f"search inconclusive after {nodes_explored} nodes "
                         f"(deepest complete prefix: {deepest} elements)")
        self.nodes_explored = nodes_explored
        self.deepest = deepest


@dataclass
class SearchConfig:
    """Knobs for the exact search."""

    k: int
    system: TripleSystem = TripleSystem.SUM
    max_n: Optional[int] = None
    symmetry_breaking: bool = True
    node_limit: Optional[int] = None

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_n is not None and self.max_n < 1:
            raise ValueError("max_n must be >= 1")


class _Found(Exception):
    """Internal: goal-mode search found a complete colouring."""


class _LimitHit(Exception):
    """Internal: node limit reached."""


class _Search:
    """One backtracking run over a fixed increasing member list.

    Goal mode looks for a complete colouring and prunes a branch as soon
    as any future member is forbidden in every colour.  Frontier mode
    (used for Schur numbers) instead tracks the deepest fully coloured
    prefix over the exhaustive tree; dead-member pruning is then limited
    to members within reach of improving that frontier, which leaves the
    computed frontier exact.
    """

    def __init__(self, members: list[int], k: int, system: TripleSystem,
                 symmetry_breaking: bool = True,
                 node_limit: Optional[int] = None,
                 frontier_mode: bool = False):
        self.members = members
        self.k = k
        self.system = system
        self.symmetry_breaking = symmetry_breaking
        self.node_limit = node_limit
        self.frontier_mode = frontier_mode
        self.hi = members[-1] if members else 0
        self.masks = [0] * k
        self.forb = [0] * k
        self.class_lists: list[list[int]] = [[] for _ in range(k)]
        self.assign = [0] * len(members)
        self.nodes = 0
        self.deepest = 0                      # longest good prefix seen
        self.best: list[int] = []             # its colour assignment
        self.found: Optional[list[int]] = None
        # suffix_masks[i]: bits of members[i:], for O(1) dead-member tests
        self.suffix_masks = [0] * (len(members) + 1)
        for i in range(len(members) - 1, -1, -1):
            self.suffix_masks[i] = self.suffix_masks[i + 1] | (1 << members[i])

    def run(self) -> None:
        if not self.members:
            self.found = []
            return
        try:
            self._dfs(0, 0)
        except _Found:
            self.found = list(self.assign)
        except _LimitHit:
            raise SearchInconclusive(self.nodes, self.deepest)

    def _product_forbids(self, c: int, x: int) -> int:
        bits = 0
        hi = self.hi
        for a in self.class_lists[c]:
            q = a * x
            if q <= hi:
                bits |= 1 << q
        q = x * x
        if q <= hi:
            bits |= 1 << q
        return bits

    def _dfs(self, depth: int, used: int) -> None:
        members = self.members
        x = members[depth]
        k = self.k
        system = self.system
        product = system is TripleSystem.PRODUCT
        last = depth == len(members) - 1
        limit = min(used + 1, k) if self.symmetry_breaking else k
        for c in range(limit):
            fc = self.forb[c]
            if (fc >> x) & 1:
                continue
            if product and x == 1:
                continue  # (1,1,1) is itself a product triple
            if self.node_limit is not None and self.nodes >= self.node_limit:
                raise _LimitHit
            self.nodes += 1
            old_mask = self.masks[c]
            new_mask = old_mask | (1 << x)
            if product:
                new_forb = fc | self._product_forbids(c, x)
                self.class_lists[c].append(x)
            else:
                shifted = new_mask << x
                new_forb = fc | shifted
                if system is TripleSystem.DOUBLE_SUM:
                    new_forb |= shifted << 1
            self.masks[c] = new_mask
            self.forb[c] = new_forb
            self.assign[depth] = c
            if depth + 1 > self.deepest:
                self.deepest = depth + 1
                self.best = list(self.assign[:depth + 1])
            if last:
                raise _Found
            if self.symmetry_breaking:
                new_used = used if c < used else used + 1
            else:
                new_used = k  # colour-usage count is not tracked in free mode
            if not self._prune(depth, new_used):
                self._dfs(depth + 1, new_used)
            self.masks[c] = old_mask
            self.forb[c] = fc
            if product:
                self.class_lists[c].pop()

    def _prune(self, depth: int, used: int) -> bool:
        """True if a relevant future member is already forbidden everywhere.

        While fewer than k colours are in play a fresh colour is always
        available, so nothing can be dead.
        """
        if used < self.k:
            return False
        dead = self.forb[0]
        for c in range(1, self.k):
            dead &= self.forb[c]
        if not dead:
            return False
        if self.frontier_mode:
            # only members needed to push the frontier past `deepest` matter
            window = self.suffix_masks[depth + 1] ^ self.suffix_masks[self.deepest + 1]
        else:
            window = self.suffix_masks[depth + 1]
        return bool(dead & window)


def exists_good_colouring(ground: IntegerSubset, k: int, system: TripleSystem,
                          *, symmetry_breaking: bool = True,
                          node_limit: Optional[int] = None) -> Optional[Colouring]:
    """A k-colouring of `ground` with no monochromatic triple, or None.

    The search is complete: None certifies that no such colouring exists.
    If `node_limit` is exhausted first, SearchInconclusive is raised
    rather than returning None.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    members = [int(m) for m in ground.members()]
    search = _Search(members, k, system, symmetry_breaking=symmetry_breaking,
                     node_limit=node_limit)
    search.run()
    if search.found is None:
        return None
    colour_of = {m: c + 1 for m, c in zip(members, search.found)}
    return Colouring.from_map(ground, k, colour_of)


def schur_number(k: int, system: TripleSystem = TripleSystem.SUM,
                 config: Optional[SearchConfig] = None) -> SolverOutcome:
    """Least n such that every k-colouring of [n] has a monochromatic triple.

    A single exhaustive DFS colours 1, 2, 3, ... as deep as possible; a
    node at depth m is exactly a triple-free colouring of [m], so after
    exhaustion the answer is deepest+1 and the witness is the first
    colouring that reached the deepest level.  The default ceiling is the
    k!e upper bound, which both sum systems respect.
    """
    if system is TripleSystem.PRODUCT:
        raise ValueError("schur_number is defined for the sum systems; use "
                         "is_k_schur/exists_good_colouring on [2,n] grounds "
                         "for the product system")
    if config is None:
        config = SearchConfig(k=k, system=system)
    if config.k != k or config.system is not system:
        raise ValueError("config.k/config.system disagree with the call arguments")
    if k > 4 and config.max_n is None:
        raise ResourceGuardError(
            "k >= 5 is beyond desk scale; pass a SearchConfig with an explicit "
            "max_n ceiling to attempt it anyway")
    max_n = config.max_n if config.max_n is not None else schur_bounds(k)[1]

    start = time.perf_counter()
    members = list(range(1, max_n + 1))
    search = _Search(members, k, system,
                     symmetry_breaking=config.symmetry_breaking,
                     node_limit=config.node_limit, frontier_mode=True)
    inconclusive = False
    try:
        search.run()
    except SearchInconclusive:
        inconclusive = True
    elapsed = time.perf_counter() - start

    deepest = search.deepest
    witness = None
    if deepest > 0:
        w_ground = IntegerSubset.full(1, deepest)
        witness = Colouring.from_map(w_ground, k,
                                     {m: c + 1 for m, c in zip(members, search.best)})
        check = has_mono_triple(witness, system)
        if check is not None:
            raise RuntimeError(f"internal error: witness fails re-check with {check}")
    if search.found is not None:
        # the ceiling itself admits a good colouring, so the value is beyond it
        inconclusive = True
    if inconclusive:
        return SolverOutcome(value=None, witness=witness,
                             nodes_explored=search.nodes, elapsed=elapsed,
                             conclusive=False, lower_bound=deepest + 1)
    return SolverOutcome(value=deepest + 1, witness=witness,
                         nodes_explored=search.nodes, elapsed=elapsed,
                         conclusive=True, lower_bound=deepest + 1)


def schur_bounds(k: int) -> tuple[int, int]:
    """Classical bounds (3^k+1)/2 <= S(k) <= floor(k! e), in exact arithmetic.

    floor(k! e) equals sum_{i=0..k} k!/i!: the tail of the series lies
    strictly between 0 and 1/k, so truncation plus zero correction is the
    exact floor for every k >= 1.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    lower = (3 ** k + 1) // 2
    term = 1
    upper = 1  # i = k term: k!/k!
    for i in range(k, 0, -1):
        term *= i
        upper += term  # k!/(i-1)!
    return lower, upper


def is_k_schur(A: IntegerSubset, k: int, system: TripleSystem,
               *, node_limit: Optional[int] = None) -> bool:
    """True iff every k-colouring of A has a monochromatic triple."""
    return exists_good_colouring(A, k, system, node_limit=node_limit) is None


def max_non_schur_subset(n: int, k: int, system: TripleSystem
                         ) -> tuple[int, IntegerSubset, Colouring]:
    """Largest subset of the ground interval that is not k-Schur.

    Ground is [1,n] for the sum systems and [2,n] for products.  Subsets
    of each size are tried in lexicographic order of their element tuple,
    largest size first; the first that admits a good colouring wins,
    which fixes the tie-break deterministically.
    """
    lo = 2 if system is TripleSystem.PRODUCT else 1
    if n < lo:
        raise ValueError(f"n must be >= {lo} for {system.value}")
    universe = list(range(lo, n + 1))
    if len(universe) > 24:
        raise ResourceGuardError(
            f"subset search over 2^{len(universe)} subsets is infeasible; "
            f"limit is ground size 24")
    interval = Interval(lo, n)
    for size in range(len(universe), 0, -1):
        for subset in combinations(universe, size):
            ground = IntegerSubset.from_members(interval, subset)
            witness = exists_good_colouring(ground, k, system)
            if witness is not None:
                return size, ground, witness
    # even the empty set is vacuously good, but sizes >= 1 always succeed
    # for singletons under the sum systems; reaching here means n < lo
    raise RuntimeError("unreachable: singleton subsets admit good colourings")
