import numpy as np
import pytest

from prodschur.core import (
    Colouring,
    ExperimentRecord,
    IntegerSubset,
    Interval,
    TripleSystem,
    has_mono_triple,
    triple_satisfied,
)
from conftest import brute_first_mono

SUM = TripleSystem.SUM
DSUM = TripleSystem.DOUBLE_SUM
PROD = TripleSystem.PRODUCT


class TestInterval:
    def test_basic(self):
        iv = Interval(2, 10)
        assert len(iv) == 9
        assert 2 in iv and 10 in iv and 1 not in iv and 11 not in iv

    @pytest.mark.parametrize("lo,hi", [(0, 5), (5, 4), (-1, 3)])
    def test_invalid(self, lo, hi):
        with pytest.raises(ValueError):
            Interval(lo, hi)


class TestIntegerSubset:
    def test_membership_and_cardinality(self):
        A = IntegerSubset.from_members(Interval(2, 12), [2, 5, 12])
        assert 5 in A and 6 not in A and 1 not in A and 13 not in A
        assert A.cardinality() == 3
        assert list(A.members()) == [2, 5, 12]

    def test_full(self):
        A = IntegerSubset.full(1, 6)
        assert A.cardinality() == 6

    def test_member_outside_interval(self):
        with pytest.raises(ValueError):
            IntegerSubset.from_members(Interval(2, 5), [6])

    def test_dense_absolute_indexing(self):
        A = IntegerSubset.from_members(Interval(3, 8), [3, 7])
        d = A.dense()
        assert d[3] and d[7] and not d[4] and not d[0]
        assert len(d) == 9
        assert len(A.dense(20)) == 21

    def test_union(self):
        A = IntegerSubset.from_members(Interval(2, 6), [2, 3])
        B = IntegerSubset.from_members(Interval(4, 9), [8])
        U = A.union(B)
        assert U.interval == Interval(2, 9)
        assert list(U.members()) == [2, 3, 8]

    def test_immutable(self):
        A = IntegerSubset.full(1, 4)
        with pytest.raises(ValueError):
            A._ind[0] = False


class TestColouring:
    def test_from_classes_and_queries(self):
        g = IntegerSubset.full(1, 4)
        c = Colouring.from_classes(g, [[1, 4], [2, 3]])
        assert c.colour_of(1) == 1 and c.colour_of(3) == 2
        assert list(c.colour_class(1)) == [1, 4]
        assert c.used_colours() == [1, 2]

    def test_colour_of_non_member(self):
        g = IntegerSubset.from_members(Interval(1, 5), [1, 5])
        c = Colouring.from_map(g, 1, {1: 1, 5: 1})
        with pytest.raises(KeyError):
            c.colour_of(3)

    def test_support_mismatch_rejected(self):
        g = IntegerSubset.from_members(Interval(1, 3), [1, 3])
        with pytest.raises(ValueError):
            Colouring(g, 2, np.array([1, 1, 1], dtype=np.int8))

    def test_colour_out_of_range_rejected(self):
        g = IntegerSubset.full(1, 2)
        with pytest.raises(ValueError):
            Colouring(g, 2, np.array([1, 3], dtype=np.int8))


class TestTripleSatisfied:
    @pytest.mark.parametrize("a,b,c,system,expected", [
        (1, 1, 2, SUM, True),
        (2, 2, 5, DSUM, True),   # 2+2 = 5-1
        (3, 3, 9, PROD, True),   # a and b may coincide
        (1, 2, 4, SUM, False),
        (2, 2, 4, DSUM, True),
        (2, 3, 7, PROD, False),
        (1, 1, 1, PROD, True),   # 1*1 = 1, the literal reading
    ])
    def test_examples(self, a, b, c, system, expected):
        assert triple_satisfied(a, b, c, system) is expected

    def test_symmetry_exhaustive_small(self):
        for system in TripleSystem:
            for a in range(1, 31):
                for b in range(1, 31):
                    for c in (a + b, a + b + 1, a * b, 7):
                        assert triple_satisfied(a, b, c, system) == \
                            triple_satisfied(b, a, c, system)

    def test_symmetry_random_up_to_1000(self, rng):
        for system in TripleSystem:
            for _ in range(2000):
                a, b, c = (rng.randint(1, 1000) for _ in range(3))
                assert triple_satisfied(a, b, c, system) == \
                    triple_satisfied(b, a, c, system)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            triple_satisfied(0, 1, 1, SUM)

    def test_parse(self):
        assert TripleSystem.parse("double-sum") is DSUM
        with pytest.raises(ValueError):
            TripleSystem.parse("products")


class TestHasMonoTriple:
    def test_spec_examples(self):
        g = IntegerSubset.full(1, 2)
        both_one = Colouring.from_classes(g, [[1, 2]])
        assert has_mono_triple(both_one, SUM) == (1, 1, 2, 1)

        g4 = IntegerSubset.full(1, 4)
        split = Colouring.from_classes(g4, [[1, 4], [2, 3]])
        assert has_mono_triple(split, SUM) is None

        gp = IntegerSubset.from_members(Interval(2, 6), [2, 3, 6])
        mono = Colouring.from_map(gp, 1, {2: 1, 3: 1, 6: 1})
        assert has_mono_triple(mono, PROD) == (2, 3, 6, 1)

    def test_oracle_equivalence_random_grounds(self, rng):
        """Agreement with a full brute scan on ground sets of size <= 20."""
        for trial in range(120):
            size = rng.randint(1, 20)
            members = sorted(rng.sample(range(1, 21), size))
            k = rng.randint(1, 3)
            colour_of = {m: rng.randint(1, k) for m in members}
            ground = IntegerSubset.from_members(Interval(1, 20), members)
            colouring = Colouring.from_map(ground, k, colour_of)
            for system in TripleSystem:
                got = has_mono_triple(colouring, system)
                expected = brute_first_mono(colour_of, system)
                assert got == expected, (members, colour_of, system)

    def test_product_ground_containing_one(self):
        g = IntegerSubset.from_members(Interval(1, 5), [1, 5])
        c = Colouring.from_map(g, 2, {1: 1, 5: 2})
        # (1,1,1) is monochromatic no matter the colours
        assert has_mono_triple(c, PROD) == (1, 1, 1, 1)


class TestExperimentRecord:
    def test_frequency(self):
        rec = ExperimentRecord(n=10, p=0.5, seed=1, trials=4, successes=3)
        assert rec.frequency == 0.75

    def test_validation(self):
        with pytest.raises(ValueError):
            ExperimentRecord(n=10, p=0.5, seed=1, trials=4, successes=5)
        with pytest.raises(ValueError):
            ExperimentRecord(n=10, p=1.5, seed=1, trials=4, successes=1)
