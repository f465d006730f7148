import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from milpgnn.gen import counterexample_pair, gen_random
from milpgnn.instance import MilpInstance, Sense, permute
from milpgnn.lp import LpStatus, solve_lp
from milpgnn.sb import (
    PRODUCT_RULE,
    RelaxationInfeasibleError,
    RelaxationUnboundedError,
    ScoreRule,
    sb_scores,
)

from oracles import brute_force_lp, brute_force_min_norm


def oracle_sb(inst: MilpInstance):
    """Recompute scores end-to-end with the brute-force oracles only."""
    status, f_star, _ = brute_force_lp(inst)
    assert status == "optimal"
    x_star = brute_force_min_norm(inst, f_star)
    scores = np.zeros(inst.n)
    for j in range(inst.n):
        if not inst.integer[j]:
            continue
        xj = float(x_star[j])
        nearest = round(xj)
        if abs(xj - nearest) <= 1e-9:
            xj = nearest
        st_d, f_d, _ = brute_force_lp(inst, extra_fix=(j, inst.lower[j], math.floor(xj)))
        st_u, f_u, _ = brute_force_lp(inst, extra_fix=(j, math.ceil(xj), inst.upper[j]))
        d_down = max(f_d - f_star, 0.0) if st_d == "optimal" else math.inf
        d_up = max(f_u - f_star, 0.0) if st_u == "optimal" else math.inf
        scores[j] = -1.0 if math.isinf(d_down) or math.isinf(d_up) else d_down * d_up
    return scores


class TestFrozenValues:
    def test_cycle_scores_are_zero(self):
        scores = sb_scores(counterexample_pair()[0]).scores
        assert np.abs(scores).max() <= 1e-9

    def test_split_scores(self):
        expected = np.array([0.25] * 6 + [0.0, 0.0])
        scores = sb_scores(counterexample_pair()[1]).scores
        assert np.abs(scores - expected).max() <= 1e-9

    def test_relaxation_facts(self):
        for inst in counterexample_pair():
            result = sb_scores(inst)
            assert result.f_star == pytest.approx(4.0, abs=1e-9)
            assert np.abs(result.x_star - 0.5).max() <= 1e-9

    def test_split_child_optima(self):
        inst = counterexample_pair()[1]
        result = sb_scores(inst)
        assert np.abs(result.deltas[0] - 0.5).max() <= 1e-9  # 4.5 - 4 both ways


class TestOracleEquivalence:
    @pytest.mark.parametrize("seed", range(25))
    def test_small_random_instances(self, seed):
        inst = gen_random(seed, m=2, n=4, nnz=5)
        if solve_lp(inst).status != LpStatus.OPTIMAL:
            return
        mine = sb_scores(inst).scores
        ref = oracle_sb(inst)
        finite = (ref >= 0) & (mine >= 0)
        assert (mine < 0) .tolist() == (ref < 0).tolist()
        if finite.any():
            assert np.abs(mine[finite] - ref[finite]).max() <= 1e-7


class TestProperties:
    def test_continuous_variables_score_zero(self):
        for seed in range(10):
            inst = gen_random(seed)
            if solve_lp(inst).status != LpStatus.OPTIMAL:
                continue
            scores = sb_scores(inst).scores
            assert np.abs(scores[~inst.integer]).max(initial=0.0) == 0.0

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 5_000), perm_seed=st.integers(0, 5_000))
    def test_permutation_equivariance(self, seed, perm_seed):
        inst = gen_random(seed, m=3, n=6, nnz=9)
        if solve_lp(inst).status != LpStatus.OPTIMAL:
            return
        rng = np.random.default_rng(perm_seed)
        sv, sw = rng.permutation(inst.m), rng.permutation(inst.n)
        base = sb_scores(inst).scores
        permuted = sb_scores(permute(inst, sv, sw)).scores
        assert np.abs(permuted[sw] - base).max() <= 1e-9

    def test_cyclic_shift_of_cycle_preserves_scores(self):
        inst = counterexample_pair()[0]
        shift = np.array([(k + 1) % 8 for k in range(8)])
        base = sb_scores(inst).scores
        shifted = sb_scores(permute(inst, shift, shift)).scores
        assert np.abs(shifted[shift] - base).max() <= 1e-9


class TestRules:
    def test_product_rule_is_default(self):
        inst = counterexample_pair()[1]
        assert np.array_equal(sb_scores(inst).scores, sb_scores(inst, PRODUCT_RULE).scores)

    def test_linear_rule_combines_deltas(self):
        inst = counterexample_pair()[1]
        result = sb_scores(inst, ScoreRule("linear", 0.3))
        expected = 0.3 * result.deltas[:, 0] + 0.7 * result.deltas[:, 1]
        expected[~inst.integer] = 0.0
        assert np.abs(result.scores - expected).max() <= 1e-12

    def test_unknown_rule_rejected(self):
        with pytest.raises(ValueError):
            ScoreRule("geometric").combine(1.0, 2.0)


class TestUndefinedAndSentinel:
    def test_infeasible_relaxation_raises(self):
        inst = MilpInstance(
            m=2, n=1, c=np.ones(1), b=np.array([1.0, -1.0]),
            senses=np.array([Sense.GE, Sense.LE], dtype=np.int8),
            lower=np.array([-10.0]), upper=np.array([10.0]),
            integer=np.array([True]),
            a_rows=np.array([0, 1]), a_cols=np.array([0, 0]), a_vals=np.array([1.0, 1.0]),
        )
        with pytest.raises(RelaxationInfeasibleError):
            sb_scores(inst)

    def test_unbounded_relaxation_raises(self):
        inst = MilpInstance(
            m=1, n=1, c=np.array([-1.0]), b=np.array([0.0]),
            senses=np.array([Sense.GE], dtype=np.int8),
            lower=np.array([0.0]), upper=np.array([np.inf]),
            integer=np.array([True]),
            a_rows=np.array([0]), a_cols=np.array([0]), a_vals=np.array([1.0]),
        )
        with pytest.raises(RelaxationUnboundedError):
            sb_scores(inst)

    def test_infinite_score_sentinel(self):
        # x integer in [0.2, 0.8]: both children empty -> score -1
        inst = MilpInstance(
            m=1, n=2, c=np.array([1.0, 1.0]), b=np.array([1.0]),
            senses=np.array([Sense.GE], dtype=np.int8),
            lower=np.array([0.2, 0.0]), upper=np.array([0.8, 5.0]),
            integer=np.array([True, False]),
            a_rows=np.array([0, 0]), a_cols=np.array([0, 1]), a_vals=np.array([1.0, 1.0]),
        )
        result = sb_scores(inst)
        assert result.scores[0] == -1.0
        assert np.isinf(result.deltas[0]).all()
