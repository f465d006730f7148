import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from milpgnn.gen import counterexample_pair, gen_random
from milpgnn.instance import permute
from milpgnn.lp import (
    BoundOverride,
    LpStatus,
    check_kkt,
    min_norm_kkt_residual,
    min_norm_solution,
    solve_lp,
)

from oracles import brute_force_lp, brute_force_min_norm


def _status_name(status: LpStatus) -> str:
    return {
        LpStatus.OPTIMAL: "optimal",
        LpStatus.INFEASIBLE: "infeasible",
        LpStatus.UNBOUNDED: "unbounded",
    }[status]


class TestSolveAgainstOracle:
    @pytest.mark.parametrize("seed", range(30))
    def test_status_and_objective_match(self, seed):
        inst = gen_random(seed, m=3, n=5, nnz=8)
        status, objective, _ = brute_force_lp(inst)
        out = solve_lp(inst)
        assert _status_name(out.status) == status
        if status == "optimal":
            assert out.objective == pytest.approx(objective, abs=1e-6)

    @pytest.mark.parametrize("seed", range(10))
    def test_bound_override_matches_oracle(self, seed):
        inst = gen_random(seed, m=3, n=5, nnz=8)
        mid = 0.5 * (inst.lower + inst.upper)
        override = BoundOverride(2, float(inst.lower[2]), float(mid[2]))
        status, objective, _ = brute_force_lp(inst, extra_fix=(2, override.lower, override.upper))
        out = solve_lp(inst, override)
        assert _status_name(out.status) == status
        if status == "optimal":
            assert out.objective == pytest.approx(objective, abs=1e-6)

    def test_empty_override_interval_infeasible(self):
        inst = gen_random(0, m=3, n=5, nnz=8)
        out = solve_lp(inst, BoundOverride(0, 1.0, 0.0))
        assert out.status == LpStatus.INFEASIBLE


class TestKkt:
    @pytest.mark.parametrize("seed", range(30))
    def test_residual_small_on_solved_instances(self, seed):
        inst = gen_random(seed, m=4, n=8, nnz=16)
        out = solve_lp(inst)
        if out.status == LpStatus.OPTIMAL:
            assert check_kkt(inst, out.x, out.duals) <= 1e-8

    def test_counterexample_duals_certify(self):
        for inst in counterexample_pair():
            out = solve_lp(inst)
            assert out.status == LpStatus.OPTIMAL
            assert check_kkt(inst, out.x, out.duals) <= 1e-8


class TestProperties:
    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10_000), perm_seed=st.integers(0, 10_000))
    def test_objective_is_permutation_invariant(self, seed, perm_seed):
        inst = gen_random(seed, m=3, n=6, nnz=9)
        rng = np.random.default_rng(perm_seed)
        p = permute(inst, rng.permutation(3), rng.permutation(6))
        a, b = solve_lp(inst), solve_lp(p)
        assert a.status == b.status
        if a.status == LpStatus.OPTIMAL:
            assert a.objective == pytest.approx(b.objective, abs=1e-7)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_tightening_bounds_never_improves(self, seed):
        inst = gen_random(seed, m=3, n=6, nnz=9)
        out = solve_lp(inst)
        if out.status != LpStatus.OPTIMAL:
            return
        j = seed % inst.n
        mid = 0.5 * (inst.lower[j] + inst.upper[j])
        child = solve_lp(inst, BoundOverride(j, float(inst.lower[j]), float(mid)))
        if child.status == LpStatus.OPTIMAL:
            assert child.objective >= out.objective - 1e-9


class TestMinNorm:
    @pytest.mark.parametrize("seed", range(40))
    def test_matches_brute_force_projection(self, seed):
        inst = gen_random(seed, m=2, n=4, nnz=5)
        out = solve_lp(inst)
        if out.status != LpStatus.OPTIMAL:
            return
        x = min_norm_solution(inst, out.objective, x0=out.x)
        oracle = brute_force_min_norm(inst, out.objective)
        assert oracle is not None
        assert np.abs(x - oracle).max() <= 1e-6

    @pytest.mark.parametrize("seed", range(30))
    def test_kkt_certificate(self, seed):
        inst = gen_random(seed, m=3, n=6, nnz=9)
        out = solve_lp(inst)
        if out.status != LpStatus.OPTIMAL:
            return
        x = min_norm_solution(inst, out.objective, x0=out.x)
        assert min_norm_kkt_residual(inst, out.objective, x) <= 1e-8

    def test_counterexample_min_norm_is_half(self):
        for inst in counterexample_pair():
            out = solve_lp(inst)
            assert out.objective == pytest.approx(4.0, abs=1e-9)
            x = min_norm_solution(inst, out.objective, x0=out.x)
            assert np.abs(x - 0.5).max() <= 1e-9

    def test_norm_never_exceeds_vertex_norm(self):
        for seed in range(10):
            inst = gen_random(seed, m=3, n=5, nnz=8)
            out = solve_lp(inst)
            if out.status != LpStatus.OPTIMAL:
                continue
            x = min_norm_solution(inst, out.objective, x0=out.x)
            assert x @ x <= out.x @ out.x + 1e-7
