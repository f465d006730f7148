"""MILP data model, the bipartite constraint-variable graph view, and JSON I/O.

A problem is

    min c'x   s.t.  Ax o b,  l <= x <= u,  x_j integer for j with integer[j],

where each row sense o_i is one of <=, =, >=.  The matrix A is kept in
triplet form; an entry is present iff it is nonzero, so the edge set of the
graph view equals the support of A exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import IO, Sequence

import numpy as np

__all__ = [
    "Sense",
    "MilpInstance",
    "MilpGraph",
    "InstanceError",
    "build_graph",
    "parse_instance",
    "serialize_instance",
    "permute",
]


class Sense(IntEnum):
    """Row sense with the canonical integer codes used in serialized form."""

    LE = 0
    EQ = 1
    GE = 2


class InstanceError(ValueError):
    """Raised when instance data violates the schema or its invariants."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MilpInstance:
    """Immutable MILP problem data.

    Bounds use IEEE -inf/+inf for absent bounds; they serialize as the
    strings "-inf"/"+inf" so infinities survive a JSON round trip exactly.
    Triplets are stored sorted by (row, col) with no duplicates and no
    explicit zeros.
    """

    m: int
    n: int
    c: np.ndarray
    b: np.ndarray
    senses: np.ndarray  # int8 codes, see Sense
    lower: np.ndarray
    upper: np.ndarray
    integer: np.ndarray  # bool
    a_rows: np.ndarray  # int64
    a_cols: np.ndarray  # int64
    a_vals: np.ndarray  # float64

    def __post_init__(self):
        object.__setattr__(self, "c", _readonly(np.asarray(self.c, dtype=float)))
        object.__setattr__(self, "b", _readonly(np.asarray(self.b, dtype=float)))
        object.__setattr__(self, "senses", _readonly(np.asarray(self.senses, dtype=np.int8)))
        object.__setattr__(self, "lower", _readonly(np.asarray(self.lower, dtype=float)))
        object.__setattr__(self, "upper", _readonly(np.asarray(self.upper, dtype=float)))
        object.__setattr__(self, "integer", _readonly(np.asarray(self.integer, dtype=bool)))
        rows = np.asarray(self.a_rows, dtype=np.int64)
        cols = np.asarray(self.a_cols, dtype=np.int64)
        vals = np.asarray(self.a_vals, dtype=float)
        order = np.lexsort((cols, rows))
        object.__setattr__(self, "a_rows", _readonly(rows[order]))
        object.__setattr__(self, "a_cols", _readonly(cols[order]))
        object.__setattr__(self, "a_vals", _readonly(vals[order]))
        self._validate()

    def _validate(self) -> None:
        m, n = self.m, self.n
        if m < 0 or n < 0:
            raise InstanceError("m and n must be nonnegative")
        for name, arr, size in [
            ("c", self.c, n),
            ("b", self.b, m),
            ("senses", self.senses, m),
            ("lower", self.lower, n),
            ("upper", self.upper, n),
            ("integer", self.integer, n),
        ]:
            if arr.shape != (size,):
                raise InstanceError(f"field {name!r} has length {arr.shape}, expected {size}")
        if not np.all(np.isin(self.senses, [0, 1, 2])):
            raise InstanceError("sense codes must be 0 (<=), 1 (=) or 2 (>=)")
        if np.any(np.isnan(self.c)) or np.any(np.isnan(self.b)):
            raise InstanceError("c and b must be finite numbers")
        if np.any(self.lower > self.upper):
            j = int(np.argmax(self.lower > self.upper))
            raise InstanceError(f"lower bound exceeds upper bound at variable {j}")
        k = self.a_rows.size
        if self.a_cols.size != k or self.a_vals.size != k:
            raise InstanceError("triplet arrays must have equal length")
        if k:
            if self.a_rows.min(initial=0) < 0 or (m and self.a_rows.max(initial=-1) >= m):
                raise InstanceError("triplet row index out of range")
            if self.a_cols.min(initial=0) < 0 or (n and self.a_cols.max(initial=-1) >= n):
                raise InstanceError("triplet column index out of range")
            if m == 0 or n == 0:
                raise InstanceError("triplet index out of range for empty dimension")
            if np.any(self.a_vals == 0.0):
                raise InstanceError("explicit zero entry in A; drop zeros from the triplet list")
            keys = self.a_rows * n + self.a_cols
            if np.unique(keys).size != k:
                raise InstanceError("duplicate (row, col) triplet in A")

    @property
    def nnz(self) -> int:
        return int(self.a_vals.size)

    def dense_matrix(self) -> np.ndarray:
        """A as a dense (m, n) array; fine at desk scale."""
        a = np.zeros((self.m, self.n))
        a[self.a_rows, self.a_cols] = self.a_vals
        return a

    def __eq__(self, other) -> bool:
        if not isinstance(other, MilpInstance):
            return NotImplemented
        return (
            self.m == other.m
            and self.n == other.n
            and np.array_equal(self.c, other.c)
            and np.array_equal(self.b, other.b)
            and np.array_equal(self.senses, other.senses)
            and np.array_equal(self.lower, other.lower)
            and np.array_equal(self.upper, other.upper)
            and np.array_equal(self.integer, other.integer)
            and np.array_equal(self.a_rows, other.a_rows)
            and np.array_equal(self.a_cols, other.a_cols)
            and np.array_equal(self.a_vals, other.a_vals)
        )

    __hash__ = None


@dataclass(frozen=True)
class MilpGraph:
    """Bipartite view: constraint nodes carry (b_i, sense_i), variable nodes
    carry (c_j, l_j, u_j, is_integer_j), edges carry the nonzero A entries.

    Adjacency lists are sorted by index, so iteration order is deterministic.
    """

    m: int
    n: int
    b: np.ndarray
    senses: np.ndarray
    c: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    integer: np.ndarray
    edges: tuple[tuple[int, int, float], ...]
    cons_neighbors: tuple[tuple[tuple[int, float], ...], ...]  # per i: (j, A_ij)
    var_neighbors: tuple[tuple[tuple[int, float], ...], ...]  # per j: (i, A_ij)

    def cons_feature(self, i: int) -> tuple[float, int]:
        return (float(self.b[i]), int(self.senses[i]))

    def var_feature(self, j: int) -> tuple[float, float, float, int]:
        return (float(self.c[j]), float(self.lower[j]), float(self.upper[j]), int(self.integer[j]))

    def dense_matrix(self) -> np.ndarray:
        a = np.zeros((self.m, self.n))
        for i, j, v in self.edges:
            a[i, j] = v
        return a


def build_graph(inst: MilpInstance) -> MilpGraph:
    """Build the bipartite graph view; edges are exactly the support of A."""
    cons: list[list[tuple[int, float]]] = [[] for _ in range(inst.m)]
    vari: list[list[tuple[int, float]]] = [[] for _ in range(inst.n)]
    edges = []
    for i, j, v in zip(inst.a_rows, inst.a_cols, inst.a_vals):
        i, j, v = int(i), int(j), float(v)
        edges.append((i, j, v))
        cons[i].append((j, v))
        vari[j].append((i, v))
    return MilpGraph(
        m=inst.m,
        n=inst.n,
        b=inst.b,
        senses=inst.senses,
        c=inst.c,
        lower=inst.lower,
        upper=inst.upper,
        integer=inst.integer,
        edges=tuple(edges),
        cons_neighbors=tuple(tuple(sorted(adj)) for adj in cons),
        var_neighbors=tuple(tuple(sorted(adj)) for adj in vari),
    )


_INF_STRINGS = {"-inf": -math.inf, "+inf": math.inf, "inf": math.inf}


def _bound_from_json(v, kind: str, j: int) -> float:
    if isinstance(v, str):
        if v in _INF_STRINGS:
            return _INF_STRINGS[v]
        raise InstanceError(f"bad {kind} bound {v!r} at variable {j}")
    if isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v):
        return float(v)
    raise InstanceError(f"bad {kind} bound {v!r} at variable {j}")


def _bound_to_json(v: float):
    if v == -math.inf:
        return "-inf"
    if v == math.inf:
        return "+inf"
    return v


def parse_instance(text: str | bytes) -> MilpInstance:
    """Parse the JSON wire format.  Each malformed input gets a distinct
    diagnostic; explicit zeros in A are rejected, not dropped."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InstanceError("top-level JSON value must be an object")
    required = ["m", "n", "c", "b", "senses", "lower", "upper", "integer", "A"]
    for key in required:
        if key not in doc:
            raise InstanceError(f"missing field {key!r}")
    m, n = doc["m"], doc["n"]
    if not isinstance(m, int) or not isinstance(n, int):
        raise InstanceError("m and n must be integers")
    triplets = doc["A"]
    if not isinstance(triplets, list):
        raise InstanceError("A must be a list of [row, col, value] triplets")
    rows, cols, vals = [], [], []
    for t in triplets:
        if not (isinstance(t, list) and len(t) == 3):
            raise InstanceError(f"bad triplet {t!r}")
        r, ccol, v = t
        if not isinstance(r, int) or not isinstance(ccol, int):
            raise InstanceError(f"triplet indices must be integers: {t!r}")
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            raise InstanceError(f"triplet value must be a finite number: {t!r}")
        if v == 0:
            raise InstanceError(f"explicit zero at ({r}, {ccol}); the support of A must not contain zeros")
        rows.append(r)
        cols.append(ccol)
        vals.append(float(v))
    lower = [_bound_from_json(v, "lower", j) for j, v in enumerate(doc["lower"])]
    upper = [_bound_from_json(v, "upper", j) for j, v in enumerate(doc["upper"])]
    integer = doc["integer"]
    if not all(isinstance(v, bool) for v in integer):
        raise InstanceError("integer flags must be booleans")
    try:
        return MilpInstance(
            m=m,
            n=n,
            c=np.asarray(doc["c"], dtype=float),
            b=np.asarray(doc["b"], dtype=float),
            senses=np.asarray(doc["senses"], dtype=np.int8),
            lower=np.asarray(lower, dtype=float),
            upper=np.asarray(upper, dtype=float),
            integer=np.asarray(integer, dtype=bool),
            a_rows=np.asarray(rows, dtype=np.int64),
            a_cols=np.asarray(cols, dtype=np.int64),
            a_vals=np.asarray(vals, dtype=float),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InstanceError):
            raise
        raise InstanceError(str(exc)) from exc


def serialize_instance(inst: MilpInstance) -> str:
    """Inverse of parse_instance; numbers print in shortest round-trip form."""
    doc = {
        "m": inst.m,
        "n": inst.n,
        "c": inst.c.tolist(),
        "b": inst.b.tolist(),
        "senses": [int(s) for s in inst.senses],
        "lower": [_bound_to_json(v) for v in inst.lower],
        "upper": [_bound_to_json(v) for v in inst.upper],
        "integer": inst.integer.tolist(),
        "A": [[int(r), int(c), float(v)] for r, c, v in zip(inst.a_rows, inst.a_cols, inst.a_vals)],
    }
    return json.dumps(doc)


def load_instance(path_or_file: str | IO) -> MilpInstance:
    if hasattr(path_or_file, "read"):
        return parse_instance(path_or_file.read())
    with open(path_or_file, "rb") as fh:
        return parse_instance(fh.read())


def _check_permutation(sigma: Sequence[int], size: int, what: str) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=np.int64)
    if sigma.shape != (size,) or not np.array_equal(np.sort(sigma), np.arange(size)):
        raise InstanceError(f"{what} is not a permutation of 0..{size - 1}")
    return sigma


def permute(inst: MilpInstance, sigma_v: Sequence[int], sigma_w: Sequence[int]) -> MilpInstance:
    """Relabel constraints and variables; sigma maps old index -> new index.

    Row i of the result at position sigma_v[i] is row i of the input, and
    similarly for columns, so all aligned vectors move consistently.
    """
    sv = _check_permutation(sigma_v, inst.m, "sigma_v")
    sw = _check_permutation(sigma_w, inst.n, "sigma_w")
    inv_v = np.empty_like(sv)
    inv_v[sv] = np.arange(inst.m)
    inv_w = np.empty_like(sw)
    inv_w[sw] = np.arange(inst.n)
    return MilpInstance(
        m=inst.m,
        n=inst.n,
        c=inst.c[inv_w],
        b=inst.b[inv_v],
        senses=inst.senses[inv_v],
        lower=inst.lower[inv_w],
        upper=inst.upper[inv_w],
        integer=inst.integer[inv_w],
        a_rows=sv[inst.a_rows],
        a_cols=sw[inst.a_cols],
        a_vals=inst.a_vals,
    )
