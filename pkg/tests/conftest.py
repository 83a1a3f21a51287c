"""Shared brute-force oracles, kept independent of the library internals.

These scanners use nothing but plain loops over explicit member lists so
they can arbitrate the vectorised / propagated implementations.
"""

import random
from itertools import product as iter_product

import pytest

from prodschur.core import TripleSystem


def completions(a, b, system):
    if system is TripleSystem.SUM:
        return (a + b,)
    if system is TripleSystem.DOUBLE_SUM:
        return (a + b, a + b + 1)
    return (a * b,)


def brute_mono_triples(colour_of: dict, system) -> list:
    """All monochromatic triples (a, b, c), a <= b, by full scan."""
    members = sorted(colour_of)
    mem = set(members)
    out = []
    for i, a in enumerate(members):
        for b in members[i:]:
            if colour_of[a] != colour_of[b]:
                continue
            for c in completions(a, b, system):
                if c in mem and colour_of[c] == colour_of[a]:
                    out.append((a, b, c))
    return out


def brute_first_mono(colour_of: dict, system):
    """Lexicographically least monochromatic triple by (a, b, c), or None."""
    members = sorted(colour_of)
    mem = set(members)
    for i, a in enumerate(members):
        for b in members[i:]:
            if colour_of[a] != colour_of[b]:
                continue
            for c in completions(a, b, system):
                if c in mem and colour_of[c] == colour_of[a]:
                    return (a, b, c, colour_of[a])
    return None


def brute_exists_good(members, k, system) -> bool:
    """Naive enumeration over all k^|members| colourings."""
    members = sorted(members)
    for assign in iter_product(range(1, k + 1), repeat=len(members)):
        colour_of = dict(zip(members, assign))
        if not brute_mono_triples(colour_of, system):
            return True
    return False


def brute_contains_product(members) -> bool:
    members = sorted(members)
    mem = set(members)
    for i, a in enumerate(members):
        for b in members[i:]:
            if a * b in mem:
                return True
    return False


@pytest.fixture
def rng():
    return random.Random(20240817)
