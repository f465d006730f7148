import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from milpgnn.gen import counterexample_pair, gen_random
from milpgnn.instance import MilpInstance, Sense, build_graph, permute
from milpgnn.wl import is_mp_tractable, stable_partition, wl_indistinguishable, wl_refine


def three_var_example() -> MilpInstance:
    """Two identical-featured constraints over three identical-featured
    binary variables; x1 and x2 appear in both rows, x3 only in the first."""
    return MilpInstance(
        m=2,
        n=3,
        c=np.ones(3),
        b=np.ones(2),
        senses=np.full(2, Sense.GE, dtype=np.int8),
        lower=np.zeros(3),
        upper=np.ones(3),
        integer=np.ones(3, dtype=bool),
        a_rows=np.array([0, 0, 0, 1, 1]),
        a_cols=np.array([0, 1, 2, 0, 1]),
        a_vals=np.ones(5),
    )


class TestStablePartition:
    def test_three_var_example_partition(self):
        part = stable_partition(build_graph(three_var_example()))
        assert part.classes_v == ((0,), (1,))
        assert part.classes_w == ((0, 1), (2,))

    def test_three_var_example_converges_in_one_round(self):
        part = stable_partition(build_graph(three_var_example()))
        assert part.rounds_to_converge == 1

    def test_counterexample_partitions_are_single_class(self):
        for inst in counterexample_pair():
            part = stable_partition(build_graph(inst))
            assert part.classes_v == (tuple(range(8)),)
            assert part.classes_w == (tuple(range(8)),)

    def test_round_zero_groups_by_features(self):
        col = wl_refine(build_graph(three_var_example()), 0)
        assert len(set(col.colors_v)) == 1
        assert len(set(col.colors_w)) == 1

    def test_refinement_is_monotone(self):
        # classes only split, never merge
        g = build_graph(gen_random(11))
        prev = None
        for rounds in range(8):
            col = wl_refine(g, rounds)
            cv, cw = col.partition()
            k = len(cv) + len(cw)
            if prev is not None:
                assert k >= prev
            prev = k

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 100_000))
    def test_convergence_within_node_count(self, seed):
        inst = gen_random(seed, m=4, n=7, nnz=12)
        part = stable_partition(build_graph(inst))
        assert part.rounds_to_converge <= inst.m + inst.n

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 100_000), perm_seed=st.integers(0, 100_000))
    def test_partition_is_permutation_equivariant(self, seed, perm_seed):
        inst = gen_random(seed, m=3, n=6, nnz=9)
        rng = np.random.default_rng(perm_seed)
        sv, sw = rng.permutation(3), rng.permutation(6)
        part = stable_partition(build_graph(inst))
        part_p = stable_partition(build_graph(permute(inst, sv, sw)))
        mapped_v = sorted(tuple(sorted(sv[i] for i in c)) for c in part.classes_v)
        mapped_w = sorted(tuple(sorted(sw[j] for j in c)) for c in part.classes_w)
        assert mapped_v == sorted(part_p.classes_v)
        assert mapped_w == sorted(part_p.classes_w)


class TestTractability:
    def test_three_var_example_tractable(self):
        ok, witness = is_mp_tractable(three_var_example())
        assert ok and witness is None

    def test_counterexample_intractable_with_witness(self):
        for inst in counterexample_pair():
            ok, witness = is_mp_tractable(inst)
            assert not ok
            p, q, i1, i2, j1, j2 = witness
            a = inst.dense_matrix()
            assert a[i1, j1] != a[i2, j2]

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 100_000))
    def test_unfoldable_implies_tractable(self, seed):
        # all-singleton stable partitions leave 1x1 blocks, always constant
        inst = gen_random(seed, m=4, n=7, nnz=12)
        part = stable_partition(build_graph(inst))
        if all(len(c) == 1 for c in part.classes_v + part.classes_w):
            ok, _ = is_mp_tractable(inst)
            assert ok

    def test_generic_random_instances_mostly_unfoldable(self):
        # continuous data makes colliding features probability-zero
        unfoldable = 0
        for seed in range(50):
            part = stable_partition(build_graph(gen_random(seed)))
            if all(len(c) == 1 for c in part.classes_v + part.classes_w):
                unfoldable += 1
        assert unfoldable >= 49


class TestIndistinguishability:
    def test_counterexample_pair_indistinguishable(self):
        g1, g2 = (build_graph(i) for i in counterexample_pair())
        assert wl_indistinguishable(g1, g2)

    def test_graph_indistinguishable_from_itself(self):
        g = build_graph(gen_random(0))
        assert wl_indistinguishable(g, g)

    def test_distinct_random_instances_distinguished(self):
        g1 = build_graph(gen_random(1))
        g2 = build_graph(gen_random(2))
        assert not wl_indistinguishable(g1, g2)

    def test_size_mismatch_raises(self):
        g1 = build_graph(gen_random(0, m=3, n=5, nnz=6))
        g2 = build_graph(gen_random(0))
        with pytest.raises(ValueError):
            wl_indistinguishable(g1, g2)


class TestComplexityTrend:
    def test_refinement_cost_scales_near_linearly_in_rounds(self):
        # one round over a fixed graph should cost O(edges); check a factor-3
        # slack on doubling the instance
        import time

        def cost(n):
            inst = gen_random(0, m=n, n=2 * n, nnz=4 * n)
            g = build_graph(inst)
            t0 = time.perf_counter()
            for _ in range(5):
                wl_refine(g, 3)
            return time.perf_counter() - t0

        small, large = cost(20), cost(40)
        assert large <= 6 * small + 0.05
