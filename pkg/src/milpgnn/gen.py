"""Instance generators: the random 6x20 family, the hardcoded counterexample
pair, and a small set-covering family.

Sampling goes through a counter-based 64-bit stream (SplitMix64) with
Box-Muller for normals, so a dataset is reproducible from its seed across
platforms and languages.
"""

from __future__ import annotations

import math

import numpy as np

from .instance import MilpInstance, Sense

__all__ = [
    "PortableRng",
    "gen_random",
    "counterexample_pair",
    "gen_set_cover",
    "gen_training_set",
]

_MASK = (1 << 64) - 1


class PortableRng:
    """Deterministic stream: value k of seed s is SplitMix64(s' + k * GAMMA)
    finalization, consumed as uniforms, Box-Muller normals, or unbiased
    integers by rejection."""

    _GAMMA = 0x9E3779B97F4A7C15

    def __init__(self, seed: int):
        self._state = (seed ^ 0x5851F42D4C957F2D) & _MASK
        self._spare: float | None = None

    def next_u64(self) -> int:
        self._state = (self._state + self._GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def normal(self, mu: float = 0.0, sigma: float = 1.0) -> float:
        if self._spare is not None:
            z, self._spare = self._spare, None
        else:
            # u1 in (0, 1] so the log is finite
            u1 = (self.next_u64() >> 11) * 2.0**-53 + 2.0**-54
            u2 = self.uniform()
            radius = math.sqrt(-2.0 * math.log(u1))
            z = radius * math.cos(2.0 * math.pi * u2)
            self._spare = radius * math.sin(2.0 * math.pi * u2)
        return mu + sigma * z

    def randint(self, bound: int) -> int:
        """Uniform integer in [0, bound) without modulo bias."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = _MASK - (_MASK + 1) % bound
        while True:
            u = self.next_u64()
            if u <= limit:
                return u % bound

    def sample_without_replacement(self, population: int, count: int) -> list[int]:
        """First ``count`` entries of a seeded Fisher-Yates shuffle."""
        if count > population:
            raise ValueError("count exceeds population")
        pool = list(range(population))
        for k in range(count):
            swap = k + self.randint(population - k)
            pool[k], pool[swap] = pool[swap], pool[k]
        return pool[:count]


def gen_random(seed: int, m: int = 6, n: int = 20, nnz: int = 60) -> MilpInstance:
    """Random MILP with N(0,1) data, N(0,100) bounds swapped into order,
    uniform senses, and coin-flip integrality."""
    if nnz > m * n:
        raise ValueError("nnz exceeds m*n")
    rng = PortableRng(seed)
    b = np.array([rng.normal() for _ in range(m)])
    c = np.array([rng.normal() for _ in range(n)])
    positions = sorted(rng.sample_without_replacement(m * n, nnz))
    vals = np.array([rng.normal() for _ in range(nnz)])
    lower = np.empty(n)
    upper = np.empty(n)
    for j in range(n):
        lo = rng.normal(0.0, 10.0)
        hi = rng.normal(0.0, 10.0)
        if lo > hi:
            lo, hi = hi, lo
        lower[j], upper[j] = lo, hi
    senses = np.array([rng.randint(3) for _ in range(m)], dtype=np.int8)
    integer = np.array([rng.randint(2) == 1 for _ in range(n)], dtype=bool)
    rows = np.array([p // n for p in positions], dtype=np.int64)
    cols = np.array([p % n for p in positions], dtype=np.int64)
    keep = vals != 0.0  # probability-zero guard; keeps the support exact
    return MilpInstance(
        m=m,
        n=n,
        c=c,
        b=b,
        senses=senses,
        lower=lower,
        upper=upper,
        integer=integer,
        a_rows=rows[keep],
        a_cols=cols[keep],
        a_vals=vals[keep],
    )


def _covering_instance(pairs: list[tuple[int, int]]) -> MilpInstance:
    rows, cols, vals = [], [], []
    for i, (j1, j2) in enumerate(pairs):
        rows += [i, i]
        cols += [j1, j2]
        vals += [1.0, 1.0]
    k = len(pairs)
    return MilpInstance(
        m=k,
        n=k,
        c=np.ones(k),
        b=np.ones(k),
        senses=np.full(k, Sense.GE, dtype=np.int8),
        lower=np.zeros(k),
        upper=np.ones(k),
        integer=np.ones(k, dtype=bool),
        a_rows=np.array(rows),
        a_cols=np.array(cols),
        a_vals=np.array(vals),
    )


def counterexample_pair() -> tuple[MilpInstance, MilpInstance]:
    """Two 8-variable covering problems: an 8-cycle, and two triangles plus a
    2-cycle.  Node-level refinement cannot tell them apart although their
    branching scores differ."""
    cycle8 = _covering_instance([(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 0)])
    split = _covering_instance([(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (6, 7), (7, 6)])
    return cycle8, split


def gen_set_cover(seed: int, rows: int, cols: int, density: float) -> MilpInstance:
    """0/1 covering matrix with per-entry inclusion probability ``density``;
    empty rows are resampled so the relaxation is never trivially infeasible."""
    if not 0.0 < density <= 1.0:
        raise ValueError("density must be in (0, 1]")
    rng = PortableRng(seed)
    r_idx, c_idx = [], []
    for i in range(rows):
        while True:
            picked = [j for j in range(cols) if rng.uniform() < density]
            if picked:
                break
        r_idx += [i] * len(picked)
        c_idx += picked
    return MilpInstance(
        m=rows,
        n=cols,
        c=np.ones(cols),
        b=np.ones(rows),
        senses=np.full(rows, Sense.GE, dtype=np.int8),
        lower=np.zeros(cols),
        upper=np.ones(cols),
        integer=np.ones(cols, dtype=bool),
        a_rows=np.array(r_idx, dtype=np.int64),
        a_cols=np.array(c_idx, dtype=np.int64),
        a_vals=np.ones(len(r_idx)),
    )


def gen_training_set(seed: int, count: int, m: int = 6, n: int = 20, nnz: int = 60):
    """Generate ``count`` instances whose LP relaxation is feasible and
    bounded, rejecting and resampling the rest.  Returns (instances,
    rejection count)."""
    from .lp import LpStatus, solve_lp

    instances = []
    rejected = 0
    sub_seed = seed
    while len(instances) < count:
        inst = gen_random(sub_seed, m=m, n=n, nnz=nnz)
        sub_seed += 1
        if solve_lp(inst).status == LpStatus.OPTIMAL:
            instances.append(inst)
        else:
            rejected += 1
    return instances, rejected
