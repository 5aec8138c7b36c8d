import itertools
import math
from fractions import Fraction

import pytest
from mpmath import mp

from tracecoeff import gln
from tracecoeff.gln import (Composition, Partition, RootDatum, classes_csv,
                            dimensions, induce, induce_oracle, orbit_table,
                            partitions_of, reduction_constants,
                            richardson_levi, trivial_class, unipotent_classes)
from tracecoeff.numberfield import NumberField


def compositions_of(n):
    # cut points of a row of n boxes
    out = []
    for mask in range(1 << (n - 1)):
        parts, run = [], 1
        for i in range(n - 1):
            if mask >> i & 1:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        out.append(tuple(parts))
    return out


class TestPartitionTypes:
    def test_validation(self):
        assert Partition((3, 1, 1)) == (3, 1, 1)
        with pytest.raises(ValueError):
            Partition((1, 2))
        with pytest.raises(ValueError):
            Partition((2, 0))
        with pytest.raises(ValueError):
            Partition((2, -1))
        with pytest.raises(ValueError):
            Composition(())
        assert Composition((1, 3, 2)) == (1, 3, 2)
        assert Composition((1, 3, 2)).size == 6

    def test_dual_examples(self):
        assert Partition((3,)).dual() == (1, 1, 1)
        assert Partition((2, 1)).dual() == (2, 1)
        assert Partition((2, 2)).dual() == (2, 2)
        assert Partition((4, 2, 1)).dual() == (3, 2, 1, 1)
        assert Partition(()).dual() == ()

    def test_dual_is_involution(self):
        for n in range(1, 9):
            for p in partitions_of(n):
                P = Partition(p)
                assert P.dual().dual() == P
                assert P.dual().size == n

    def test_partition_counts(self):
        counts = [len(partitions_of(n)) for n in range(1, 11)]
        assert counts == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]

    def test_partitions_sorted_ascending(self):
        ps = partitions_of(5)
        assert ps == sorted(ps)
        assert ps[0] == (1, 1, 1, 1, 1) and ps[-1] == (5,)


class TestInduce:
    def test_table_examples(self):
        assert induce((1, 1, 1), [(1,), (1,), (1,)]) == (3,)
        assert induce((2, 1), [(2,), (1,)]) == (3,)
        assert induce((2, 1), [(1, 1), (1,)]) == (2, 1)
        assert induce((2, 2), [(1, 1), (1, 1)]) == (2, 2)

    def test_from_full_group_is_identity(self):
        for n in range(1, 7):
            for p in partitions_of(n):
                assert induce((n,), [p]) == p

    def test_size_mismatch_rejected(self):
        with pytest.raises(ValueError):
            induce((2, 1), [(2,)])
        with pytest.raises(ValueError):
            induce((2, 1), [(3,), (1,)])
        with pytest.raises(ValueError):
            induce((2, 1), [(2,), (1,), (1,)])

    def test_round_trip_with_richardson_levi(self):
        # dual levi with trivial classes comes back to the class itself
        for n in range(1, 11):
            for p in partitions_of(n):
                V = Partition(p)
                levi = richardson_levi(V)
                assert induce(levi, [trivial_class(k) for k in levi]) == V

    def test_transitivity_exhaustive_trivial(self):
        # refining a Levi and inducing in stages agrees with one step
        for n in range(2, 9):
            for mid in compositions_of(n):
                for refinement in itertools.product(
                        *[compositions_of(b) for b in mid]):
                    flat = tuple(itertools.chain.from_iterable(refinement))
                    staged = induce(mid, [
                        induce(ref, [trivial_class(k) for k in ref])
                        for ref in refinement])
                    direct_cls = [trivial_class(k) for k in flat]
                    assert staged == induce(flat, direct_cls)

    def test_transitivity_nontrivial_samples(self):
        import random
        rng = random.Random(42)
        for _ in range(200):
            n = rng.randint(2, 8)
            mid = rng.choice(compositions_of(n))
            refinement = [rng.choice(compositions_of(b)) for b in mid]
            classes = [[rng.choice(partitions_of(k)) for k in ref]
                       for ref in refinement]
            staged = induce(mid, [induce(ref, cls)
                                  for ref, cls in zip(refinement, classes)])
            flat_levi = tuple(itertools.chain.from_iterable(refinement))
            flat_cls = list(itertools.chain.from_iterable(classes))
            assert staged == induce(flat_levi, flat_cls)

    def test_order_independence(self):
        a = induce((3, 2, 1), [(2, 1), (1, 1), (1,)])
        b = induce((1, 2, 3), [(1,), (1, 1), (2, 1)])
        assert a == b


class TestRichardson:
    def test_examples(self):
        assert richardson_levi((3,)) == (1, 1, 1)
        assert richardson_levi((2, 1)) == (2, 1)
        assert richardson_levi((1, 1, 1)) == (3,)

    def test_bijection_on_classes(self):
        for n in range(1, 9):
            images = {richardson_levi(p) for p in partitions_of(n)}
            assert len(images) == len(partitions_of(n))


class TestDimensions:
    def test_gl3_values(self):
        assert dimensions((3,)) == {"dim_class": 6, "dim_radical": 3,
                                    "dim_a_L_G": 2, "weyl_sizes": (1, 1, 1)}
        d = dimensions((2, 1))
        assert d["dim_class"] == 4 and d["dim_radical"] == 2
        assert d["dim_a_L_G"] == 1 and d["weyl_sizes"] == (2, 1)

    def test_extremes(self):
        for n in range(1, 9):
            assert dimensions((1,) * n)["dim_class"] == 0
            assert dimensions((n,))["dim_class"] == n * n - n

    def test_even_and_consistent(self):
        for n in range(1, 9):
            for p in partitions_of(n):
                d = dimensions(p)
                assert d["dim_class"] == 2 * d["dim_radical"]
                dual = Partition(p).dual()
                assert d["dim_a_L_G"] == len(dual) - 1
                assert math.prod(d["weyl_sizes"]) == math.prod(
                    math.factorial(k) for k in dual)

    def test_class_listing(self):
        classes = unipotent_classes(3)
        assert [c["partition"] for c in classes] == [(1, 1, 1), (2, 1), (3,)]
        assert [c["levi"] for c in classes] == [(3,), (2, 1), (1, 1, 1)]
        assert len(unipotent_classes(4)) == 5
        assert unipotent_classes(1)[0]["dimensions"]["dim_class"] == 0
        with pytest.raises(ValueError):
            unipotent_classes(0)


class TestInduceOracle:
    def test_examples(self):
        assert induce_oracle((1, 1, 1), [(1,), (1,), (1,)], trials=4) == (3,)
        assert induce_oracle((2, 2), [(1, 1), (1, 1)], trials=4) == (2, 2)
        for p in partitions_of(5):
            assert induce_oracle((5,), [p], trials=2) == p

    def test_rejections(self):
        with pytest.raises(ValueError):
            induce_oracle((2,), [(1, 1)], trials=0)
        with pytest.raises(ValueError):
            induce_oracle((9,), [(1,) * 9], trials=2)
        with pytest.raises(ValueError):
            induce_oracle((2, 1), [(2,)], trials=2)

    def test_agreement_trivial_exhaustive(self):
        for n in range(1, 7):
            for levi in partitions_of(n):
                classes = [trivial_class(k) for k in levi]
                assert induce_oracle(levi, classes, trials=4, seed=3) == \
                    induce(levi, classes)

    def test_agreement_random_nontrivial(self):
        import random
        rng = random.Random(1234)
        for trial in range(50):
            n = rng.randint(2, 6)
            levi = rng.choice(compositions_of(n))
            classes = [rng.choice(partitions_of(k)) for k in levi]
            got = induce_oracle(levi, classes, trials=6, seed=trial)
            assert got == induce(levi, classes), (levi, classes, got)

    def test_determinism(self):
        a = induce_oracle((3, 2), [(2, 1), (2,)], trials=5, seed=9)
        b = induce_oracle((3, 2), [(2, 1), (2,)], trials=5, seed=9)
        assert a == b


class TestOrbitTable:
    def test_gl3_six_rows(self):
        rows = orbit_table(3)
        flat = [(tuple(r["levi"]), tuple(map(tuple, r["classes"])),
                 tuple(r["induced"]), tuple(r["m_levi"])) for r in rows]
        assert flat == [
            ((1, 1, 1), ((1,), (1,), (1,)), (3,), (1, 1, 1)),
            ((2, 1), ((1, 1), (1,)), (2, 1), (2, 1)),
            ((2, 1), ((2,), (1,)), (3,), (1, 1, 1)),
            ((3,), ((1, 1, 1),), (1, 1, 1), (3,)),
            ((3,), ((2, 1),), (2, 1), (2, 1)),
            ((3,), ((3,),), (3,), (1, 1, 1)),
        ]

    def test_csv_export(self):
        assert classes_csv(3) == (
            "partition,dual,dim_class,dim_radical,dim_a_L_G\n"
            "1+1+1,3,0,0,0\n"
            "2+1,2+1,4,2,1\n"
            "3,1+1+1,6,3,2\n")
        lines = classes_csv(4).strip().split("\n")
        assert len(lines) == 6
        assert lines[0] == "partition,dual,dim_class,dim_radical,dim_a_L_G"


class TestRootDatum:
    def test_pairing_invariant(self):
        for n in range(2, 7):
            rd = RootDatum(n)
            for a, root_a in enumerate(rd.simple_roots()):
                for b in range(n - 1):
                    val = rd.inner(rd.coroot(root_a), rd.fundamental_weight(b))
                    assert val == (1 if a == b else 0)

    def test_rho_is_half_sum(self):
        for n in range(2, 7):
            rd = RootDatum(n)
            acc = [Fraction(0)] * n
            for (i, j) in rd.positive_roots():
                acc[i] += Fraction(1, 2)
                acc[j] -= Fraction(1, 2)
            assert tuple(acc) == rd.rho() == rd.rho_vee()

    def test_root_values_on_rho_vee(self):
        rd = RootDatum(5)
        for (i, j) in rd.positive_roots():
            assert rd.root_value((i, j), rd.rho_vee()) == j - i

    def test_counts_and_errors(self):
        rd = RootDatum(4)
        assert len(rd.positive_roots()) == 6
        assert len(rd.simple_roots()) == 3
        with pytest.raises(ValueError):
            rd.fundamental_weight(3)
        with pytest.raises(ValueError):
            RootDatum(0)


class TestReductionConstants:
    def test_rationals_gl2(self):
        rc = reduction_constants(NumberField.rationals(), 2)
        assert abs(rc.c_F - mp.pi / 4) < 1e-30
        assert len(rc.root_gaps) == 1
        assert abs(rc.root_gaps[0]["gap"] - 4 / mp.pi) < 1e-30
        assert abs(rc.root_gaps[0]["gap"] - 1.2732395447) < 1e-9

    def test_gaussian_gl2(self):
        rc = reduction_constants(NumberField.quadratic(-1), 2)
        assert abs(rc.c_F - (mp.pi / 4) ** 2 / 4) < 1e-30
        assert abs(rc.c_F - 0.15421257) < 1e-7
        assert abs(rc.root_gaps[0]["gap"] - 1 / rc.c_F) < 1e-25
        assert abs(rc.root_gaps[0]["gap"] - 6.4845558) < 1e-6

    def test_gaps_at_least_one_sweep(self):
        fields = [NumberField.rationals(), NumberField.quadratic(-1),
                  NumberField.quadratic(-3), NumberField.quadratic(5),
                  NumberField.quadratic(-163)]
        for F in fields:
            for n in (2, 3, 4):
                rc = reduction_constants(F, n)
                assert rc.c_F < 1
                for g in rc.root_gaps:
                    assert g["gap"] >= 1
                    # alpha(T1) <= 0 for every positive root
                    i, j = g["root"]
                    assert rc.T1[i] - rc.T1[j] <= 0
                    assert g["disc_ratio"] <= g["disc_ratio_bound"] * (1 + 1e-20)

    def test_t1_is_log_c_rho_vee(self):
        rc = reduction_constants(NumberField.quadratic(-3), 3)
        rd = RootDatum(3)
        log_c = mp.log(rc.c_F)
        for got, t in zip(rc.T1, rd.rho_vee()):
            want = log_c * mp.mpf(t.numerator) / t.denominator
            assert abs(got - want) < 1e-30

    def test_gl1_rejected(self):
        with pytest.raises(ValueError):
            reduction_constants(NumberField.rationals(), 1)

    def test_to_dict_shape(self):
        rc = reduction_constants(NumberField.quadratic(-1), 2)
        d = rc.to_dict()
        assert d["field"] == "Q(sqrt(-1))"
        assert d["degree"] == 2 and d["abs_disc"] == 4
        assert len(d["roots"]) == 1
        assert d["roots"][0]["root"] == [0, 1]
