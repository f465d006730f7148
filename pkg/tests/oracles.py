"""Independent brute-force oracles used to validate the solver stack.

Nothing here calls the package's LP or QP code: optima come from enumerating
candidate active sets, and the minimum-norm point on the optimal face from a
dense pseudo-inverse projection.  Exponential in problem size by design —
only for small instances.
"""

import itertools
import math

import numpy as np

from milpgnn.instance import MilpInstance, Sense

FEAS_TOL = 1e-8
BIG = 1e6  # artificial box used to detect unboundedness


def _feasible(inst: MilpInstance, x: np.ndarray, lower, upper) -> bool:
    if (x < lower - FEAS_TOL).any() or (x > upper + FEAS_TOL).any():
        return False
    ax = inst.dense_matrix() @ x
    for i in range(inst.m):
        if inst.senses[i] == Sense.LE and ax[i] > inst.b[i] + FEAS_TOL:
            return False
        if inst.senses[i] == Sense.GE and ax[i] < inst.b[i] - FEAS_TOL:
            return False
        if inst.senses[i] == Sense.EQ and abs(ax[i] - inst.b[i]) > FEAS_TOL:
            return False
    return True


def brute_force_lp(inst: MilpInstance, extra_fix=None):
    """Vertex enumeration on the feasible region boxed into [-BIG, BIG].

    Returns (status, objective, vertices) with status 'optimal',
    'infeasible', or 'unbounded'.  Unbounded means the boxed optimum rests on
    an artificial bound: the true problem improves beyond any box.
    """
    n = inst.n
    a = inst.dense_matrix()
    lower = inst.lower.copy()
    upper = inst.upper.copy()
    if extra_fix is not None:
        j, lo, hi = extra_fix
        lower[j], upper[j] = lo, hi
    if (lower > upper).any():
        return "infeasible", None, []
    boxed_lower = np.maximum(lower, -BIG)
    boxed_upper = np.minimum(upper, BIG)

    rows: list[tuple[np.ndarray, float]] = [(a[i], float(inst.b[i])) for i in range(inst.m)]
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        rows.append((e.copy(), float(boxed_lower[j])))
        rows.append((e.copy(), float(boxed_upper[j])))

    best = math.inf
    best_pts: list[np.ndarray] = []
    for combo in itertools.combinations(range(len(rows)), n):
        mat = np.array([rows[k][0] for k in combo])
        rhs = np.array([rows[k][1] for k in combo])
        if abs(np.linalg.det(mat)) < 1e-12:
            continue
        x = np.linalg.solve(mat, rhs)
        if not _feasible(inst, x, boxed_lower, boxed_upper):
            continue
        obj = float(inst.c @ x)
        if obj < best - 1e-9:
            best, best_pts = obj, [x]
        elif obj <= best + 1e-9:
            best_pts.append(x)
    if not best_pts:
        return "infeasible", None, []
    for x in best_pts:
        for j in range(n):
            if lower[j] < -BIG and x[j] <= -BIG + FEAS_TOL:
                return "unbounded", None, []
            if upper[j] > BIG and x[j] >= BIG - FEAS_TOL:
                return "unbounded", None, []
    return "optimal", best, best_pts


def brute_force_min_norm(inst: MilpInstance, f_star: float):
    """Minimum-ℓ2-norm point on the optimal face, by projecting 0 onto every
    candidate face system and keeping the best feasible projection."""
    n = inst.n
    a = inst.dense_matrix()
    eqs: list[tuple[np.ndarray, float]] = [(inst.c.astype(float), float(f_star))]
    for i in range(inst.m):
        if inst.senses[i] == Sense.EQ:
            eqs.append((a[i], float(inst.b[i])))
    cands: list[tuple[np.ndarray, float]] = []
    for i in range(inst.m):
        if inst.senses[i] != Sense.EQ:
            cands.append((a[i], float(inst.b[i])))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        for v in (inst.lower[j], inst.upper[j]):
            if math.isfinite(v):
                cands.append((e.copy(), float(v)))

    best = None
    best_norm = math.inf
    for r in range(len(cands) + 1):
        for combo in itertools.combinations(range(len(cands)), r):
            mat = np.array([v for v, _ in eqs] + [cands[k][0] for k in combo])
            rhs = np.array([d for _, d in eqs] + [cands[k][1] for k in combo])
            x = np.linalg.pinv(mat) @ rhs
            if np.abs(mat @ x - rhs).max() > 1e-7:
                continue  # inconsistent system
            if not _feasible(inst, x, inst.lower, inst.upper):
                continue
            if abs(float(inst.c @ x) - f_star) > 1e-6:
                continue
            nrm = float(x @ x)
            if nrm < best_norm - 1e-12:
                best_norm = nrm
                best = x
    return best


def finite_difference_grad(fn, arrays, h=1e-5, samples=40, seed=0):
    """Central finite differences of scalar fn() w.r.t. random entries of the
    given parameter arrays.  Yields (array index, entry index, fd value)."""
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        ai = int(rng.integers(len(arrays)))
        arr = arrays[ai]
        idx = tuple(int(rng.integers(s)) for s in arr.shape)
        orig = arr[idx]
        arr[idx] = orig + h
        fp = fn()
        arr[idx] = orig - h
        fm = fn()
        arr[idx] = orig
        yield ai, idx, (fp - fm) / (2.0 * h)
