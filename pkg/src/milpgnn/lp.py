"""LP relaxations and the minimal-l2-norm optimal solution.

``solve_lp`` relaxes integrality and solves with HiGHS (deterministic dual
simplex via scipy), optionally with a single variable's bounds replaced.
``min_norm_solution`` picks the unique least-norm point of the optimal face
with a primal active-set QP, which terminates finitely at desk scale and is
verified through its KKT residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import linprog

from .instance import MilpInstance, Sense

__all__ = [
    "LpStatus",
    "LpOutcome",
    "BoundOverride",
    "LpNumericalError",
    "solve_lp",
    "check_kkt",
    "min_norm_solution",
]

FEAS_TOL = 1e-9
OPT_TOL = 1e-9
KKT_TOL = 1e-8
NORM_TOL = 1e-7


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LpNumericalError(RuntimeError):
    """The backend failed to converge on this instance."""


@dataclass(frozen=True)
class BoundOverride:
    """Replacement bounds for a single variable.  An empty interval is legal
    and simply yields an infeasible LP."""

    j: int
    lower: float
    upper: float


@dataclass(frozen=True)
class LpDuals:
    """Multipliers with the sign convention

        c = A' y + z_lower - z_upper,

    y_i >= 0 for >= rows, y_i <= 0 for <= rows, free for = rows,
    z_lower >= 0, z_upper >= 0, complementary to the active bounds."""

    y: np.ndarray
    z_lower: np.ndarray
    z_upper: np.ndarray


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    objective: float | None = None
    x: np.ndarray | None = None
    duals: LpDuals | None = None
    primal_residual: float = 0.0
    kkt_residual: float = 0.0


def _effective_bounds(inst: MilpInstance, override: BoundOverride | None):
    lower = inst.lower.copy()
    upper = inst.upper.copy()
    if override is not None:
        if not 0 <= override.j < inst.n:
            raise IndexError(f"override index {override.j} out of range")
        lower[override.j] = override.lower
        upper[override.j] = override.upper
    return lower, upper


def solve_lp(inst: MilpInstance, override: BoundOverride | None = None) -> LpOutcome:
    """Solve the LP relaxation (integrality ignored), optionally with one
    variable's bounds replaced."""
    lower, upper = _effective_bounds(inst, override)
    if np.any(lower > upper):
        return LpOutcome(status=LpStatus.INFEASIBLE)

    a = inst.dense_matrix()
    le = inst.senses == Sense.LE
    ge = inst.senses == Sense.GE
    eq = inst.senses == Sense.EQ
    a_ub = np.vstack([a[le], -a[ge]]) if (le.any() or ge.any()) else None
    b_ub = np.concatenate([inst.b[le], -inst.b[ge]]) if a_ub is not None else None
    a_eq = a[eq] if eq.any() else None
    b_eq = inst.b[eq] if a_eq is not None else None

    res = linprog(
        inst.c,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=list(zip(lower, upper)),
        method="highs",
    )
    if res.status == 2:
        return LpOutcome(status=LpStatus.INFEASIBLE)
    if res.status == 3:
        return LpOutcome(status=LpStatus.UNBOUNDED)
    if res.status != 0:
        raise LpNumericalError(f"LP backend failure: {res.message}")

    x = np.asarray(res.x, dtype=float)
    # Map HiGHS marginals back to per-row multipliers in our convention.
    y = np.zeros(inst.m)
    if a_ub is not None:
        mub = np.asarray(res.ineqlin.marginals, dtype=float)
        n_le = int(le.sum())
        y[le] = mub[:n_le]  # <= rows: y <= 0
        y[ge] = -mub[n_le:]  # >= rows were negated: flip sign back, y >= 0
    if a_eq is not None:
        y[eq] = np.asarray(res.eqlin.marginals, dtype=float)
    z_lower = np.maximum(np.asarray(res.lower.marginals, dtype=float), 0.0)
    z_upper = np.maximum(-np.asarray(res.upper.marginals, dtype=float), 0.0)
    duals = LpDuals(y=y, z_lower=z_lower, z_upper=z_upper)

    primal = _primal_residual(inst, x, lower, upper)
    kkt = check_kkt(inst, x, duals, override=override)
    return LpOutcome(
        status=LpStatus.OPTIMAL,
        objective=float(res.fun),
        x=x,
        duals=duals,
        primal_residual=primal,
        kkt_residual=kkt,
    )


def _primal_residual(inst: MilpInstance, x: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> float:
    a = inst.dense_matrix()
    ax = a @ x if inst.m else np.zeros(0)
    viol = [0.0]
    for i in range(inst.m):
        if inst.senses[i] == Sense.LE:
            viol.append(ax[i] - inst.b[i])
        elif inst.senses[i] == Sense.GE:
            viol.append(inst.b[i] - ax[i])
        else:
            viol.append(abs(ax[i] - inst.b[i]))
    with np.errstate(invalid="ignore"):
        lo = lower - x
        hi = x - upper
    viol.extend(v for v in lo if math.isfinite(v))
    viol.extend(v for v in hi if math.isfinite(v))
    return max(0.0, max(viol))


def check_kkt(
    inst: MilpInstance,
    x: np.ndarray,
    duals: LpDuals,
    override: BoundOverride | None = None,
) -> float:
    """Max violation across stationarity, feasibility, sign constraints and
    complementary slackness of a candidate primal/dual pair."""
    lower, upper = _effective_bounds(inst, override)
    a = inst.dense_matrix()
    x = np.asarray(x, dtype=float)
    y, zl, zu = duals.y, duals.z_lower, duals.z_upper

    stationarity = inst.c - (a.T @ y if inst.m else 0.0) - zl + zu
    res = float(np.max(np.abs(stationarity))) if inst.n else 0.0
    res = max(res, _primal_residual(inst, x, lower, upper))

    ax = a @ x if inst.m else np.zeros(0)
    for i in range(inst.m):
        slack = ax[i] - inst.b[i]
        if inst.senses[i] == Sense.LE:
            res = max(res, y[i], abs(y[i] * slack))
        elif inst.senses[i] == Sense.GE:
            res = max(res, -y[i], abs(y[i] * slack))
        # = rows: y free, no complementarity term
    for j in range(inst.n):
        res = max(res, -zl[j], -zu[j])
        if math.isfinite(lower[j]):
            res = max(res, abs(zl[j] * (x[j] - lower[j])))
        else:
            res = max(res, abs(zl[j]))
        if math.isfinite(upper[j]):
            res = max(res, abs(zu[j] * (upper[j] - x[j])))
        else:
            res = max(res, abs(zu[j]))
    return res


class _OptimalFaceInfeasible(RuntimeError):
    pass


def _face_constraints(inst: MilpInstance, f_star: float):
    """Equalities Ex=e and inequalities Gx>=h describing the optimal face."""
    a = inst.dense_matrix()
    e_rows, e_rhs, g_rows, g_rhs = [], [], [], []
    e_rows.append(inst.c)
    e_rhs.append(f_star)
    for i in range(inst.m):
        if inst.senses[i] == Sense.EQ:
            e_rows.append(a[i])
            e_rhs.append(inst.b[i])
        elif inst.senses[i] == Sense.GE:
            g_rows.append(a[i])
            g_rhs.append(inst.b[i])
        else:
            g_rows.append(-a[i])
            g_rhs.append(-inst.b[i])
    eye = np.eye(inst.n)
    for j in range(inst.n):
        if math.isfinite(inst.lower[j]):
            g_rows.append(eye[j])
            g_rhs.append(inst.lower[j])
        if math.isfinite(inst.upper[j]):
            g_rows.append(-eye[j])
            g_rhs.append(-inst.upper[j])
    e_mat = np.asarray(e_rows)
    g_mat = np.asarray(g_rows) if g_rows else np.zeros((0, inst.n))
    return e_mat, np.asarray(e_rhs), g_mat, np.asarray(g_rhs)


def _min_norm_on_working_set(c_mat: np.ndarray, d: np.ndarray):
    """argmin ||x||^2 s.t. Cx=d, plus the multipliers; tolerant of rank
    deficiency via least squares on the normal system."""
    gram = c_mat @ c_mat.T
    lam, *_ = np.linalg.lstsq(gram, d, rcond=None)
    return c_mat.T @ lam, lam


def _stationarity_certified(c_mat: np.ndarray, n_eq: int, x: np.ndarray) -> bool:
    """True iff x = C' lam has a solution with lam >= 0 on inequality rows,
    i.e. x is the optimum of the working-set subproblem after all."""
    from scipy.optimize import lsq_linear

    lb = np.full(c_mat.shape[0], -np.inf)
    lb[n_eq:] = 0.0
    sol = lsq_linear(c_mat.T, x, bounds=(lb, np.full(c_mat.shape[0], np.inf)))
    residual = float(np.max(np.abs(c_mat.T @ sol.x - x), initial=0.0))
    return residual <= 1e-9 * (1.0 + float(np.max(np.abs(x), initial=0.0)))


def min_norm_solution(inst: MilpInstance, f_star: float, x0: np.ndarray | None = None) -> np.ndarray:
    """Unique minimizer of ||x||_2 over the optimal face
    {Ax o b, l <= x <= u, c'x = f_star}.

    Primal active-set iteration on min 0.5 x'x; ties in the ratio test and
    the multiplier drop break by lowest row index for determinism.
    """
    if x0 is None:
        outcome = solve_lp(inst)
        if outcome.status != LpStatus.OPTIMAL:
            raise _OptimalFaceInfeasible("LP relaxation has no optimum")
        if abs(outcome.objective - f_star) > 1e-6 * (1.0 + abs(f_star)):
            raise ValueError(f"f_star {f_star} is not the LP optimum {outcome.objective}")
        x0 = outcome.x
    e_mat, e_rhs, g_mat, g_rhs = _face_constraints(inst, f_star)
    x = np.asarray(x0, dtype=float).copy()
    n_eq = e_mat.shape[0]
    working: list[int] = []
    max_iter = 50 * (inst.m + inst.n + g_mat.shape[0] + 1)

    for _ in range(max_iter):
        c_mat = np.vstack([e_mat, g_mat[working]]) if working else e_mat
        d = np.concatenate([e_rhs, g_rhs[working]]) if working else e_rhs
        target, lam = _min_norm_on_working_set(c_mat, d)
        p = target - x
        at_target = np.max(np.abs(p), initial=0.0) <= 1e-9 * (1.0 + np.max(np.abs(x)))
        if at_target:
            lam_ineq = lam[n_eq:]
            negative = np.flatnonzero(lam_ineq < -1e-9)
            if negative.size == 0:
                return x
            # On rank-deficient working sets the plain least-squares
            # multipliers may look negative although a valid nonnegative
            # certificate exists; check against all active rows before
            # dropping anything.
            active = g_mat @ x - g_rhs <= 1e-8 if g_mat.size else np.zeros(0, dtype=bool)
            full = np.vstack([e_mat, g_mat[active]]) if active.any() else e_mat
            if _stationarity_certified(full, n_eq, x):
                return x
            # Bland's rule (lowest index) to rule out cycling on degeneracy
            working.pop(int(negative[0]))
            continue
        # Longest step along p keeping the inactive inequalities feasible.
        alpha = 1.0
        blocker = -1
        for k in range(g_mat.shape[0]):
            if k in working:
                continue
            gp = g_mat[k] @ p
            if gp < -1e-12:
                step = (g_rhs[k] - g_mat[k] @ x) / gp
                if step < alpha - 1e-14:
                    alpha = max(step, 0.0)
                    blocker = k
        x = x + alpha * p
        if blocker >= 0:
            working.append(blocker)
        working.sort()
    raise LpNumericalError("active-set QP failed to converge")


def min_norm_kkt_residual(inst: MilpInstance, f_star: float, x: np.ndarray) -> float:
    """KKT residual of the least-norm QP at x: stationarity of 0.5||x||^2
    against the face constraints, plus feasibility and complementarity."""
    e_mat, e_rhs, g_mat, g_rhs = _face_constraints(inst, f_star)
    res = float(np.max(np.abs(e_mat @ x - e_rhs), initial=0.0))
    slack = g_mat @ x - g_rhs if g_mat.size else np.zeros(0)
    res = max(res, float(np.max(-slack, initial=0.0)))
    active = slack <= 1e-8 if g_mat.size else np.zeros(0, dtype=bool)
    c_mat = np.vstack([e_mat, g_mat[active]]) if active.any() else e_mat
    # Stationarity x = E' mu + G_active' lam with lam >= 0; sign-constrained
    # least squares so a valid certificate is found whenever one exists.
    from scipy.optimize import lsq_linear

    n_eq = e_mat.shape[0]
    lb = np.full(c_mat.shape[0], -np.inf)
    lb[n_eq:] = 0.0
    sol = lsq_linear(c_mat.T, x, bounds=(lb, np.full(c_mat.shape[0], np.inf)))
    res = max(res, float(np.max(np.abs(c_mat.T @ sol.x - x), initial=0.0)))
    return res
