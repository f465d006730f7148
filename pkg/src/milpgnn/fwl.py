"""Second-order folklore color refinement on node pairs, and the two
indistinguishability relations it induces.

Pairs come in two kinds: (constraint, variable) and (variable, variable).
Colorings are stored dense because every update ranges over all of V or W
regardless of sparsity.  Interning is canonical as in the node-level test,
with one shared dictionary when two graphs are refined jointly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import MilpGraph
from .wl import _fkey, _Interner

__all__ = [
    "PairColoring",
    "fwl2_refine",
    "fwl2_indistinguishable",
    "fwl2_indistinguishable_W",
]


@dataclass(frozen=True)
class PairColoring:
    """Dense pair colors after a fixed number of rounds: colors_vw[i, j] for
    (constraint i, variable j), colors_ww[j1, j2] for variable pairs."""

    round: int
    colors_vw: np.ndarray
    colors_ww: np.ndarray

    def class_count(self) -> int:
        return len(set(self.colors_vw.flat) | set(self.colors_ww.flat))


def _var_key(g: MilpGraph, j: int, quantize):
    return (
        _fkey(float(g.c[j]), quantize),
        _fkey(float(g.lower[j]), quantize),
        _fkey(float(g.upper[j]), quantize),
        int(g.integer[j]),
    )


def _initial(graphs: list[MilpGraph], quantize):
    intern = _Interner()
    out = []
    for g in graphs:
        a = g.dense_matrix()
        vw = np.empty((g.m, g.n), dtype=np.int64)
        ww = np.empty((g.n, g.n), dtype=np.int64)
        vkeys = [(_fkey(float(g.b[i]), quantize), int(g.senses[i])) for i in range(g.m)]
        wkeys = [_var_key(g, j, quantize) for j in range(g.n)]
        for i in range(g.m):
            for j in range(g.n):
                vw[i, j] = intern(("VW", vkeys[i], wkeys[j], _fkey(a[i, j], quantize)))
        for j1 in range(g.n):
            for j2 in range(g.n):
                ww[j1, j2] = intern(("WW", wkeys[j1], wkeys[j2], int(j1 == j2)))
        out.append((vw, ww))
    return out


def _refine_once(colorings):
    intern = _Interner()
    sigs = []
    for vw, ww in colorings:
        m, n = vw.shape
        sig_vw = [
            [
                (vw[i, j], tuple(sorted((ww[j1, j], vw[i, j1]) for j1 in range(n))))
                for j in range(n)
            ]
            for i in range(m)
        ]
        sig_ww = [
            [
                (ww[j1, j2], tuple(sorted((vw[i, j2], vw[i, j1]) for i in range(m))))
                for j2 in range(n)
            ]
            for j1 in range(n)
        ]
        sigs.append((sig_vw, sig_ww))
    out = []
    for (sig_vw, sig_ww), (vw, ww) in zip(sigs, colorings):
        nvw = np.array([[intern(("VW", s)) for s in row] for row in sig_vw], dtype=np.int64)
        nww = np.array([[intern(("WW", s)) for s in row] for row in sig_ww], dtype=np.int64)
        out.append((nvw, nww))
    return out


def _joint_partition(colorings):
    by_color: dict = {}
    idx = 0
    for vw, ww in colorings:
        for c in vw.flat:
            by_color.setdefault(int(c), []).append(idx)
            idx += 1
        for c in ww.flat:
            by_color.setdefault(int(c), []).append(idx)
            idx += 1
    return frozenset(tuple(v) for v in by_color.values())


def _refine_to_stability(graphs: list[MilpGraph], quantize):
    colorings = _initial(graphs, quantize)
    part = _joint_partition(colorings)
    rounds = 0
    while True:
        nxt = _refine_once(colorings)
        nxt_part = _joint_partition(nxt)
        if nxt_part == part:
            return colorings, rounds
        colorings, part = nxt, nxt_part
        rounds += 1


def fwl2_refine(g: MilpGraph, rounds: int, quantize: float | None = None) -> PairColoring:
    """Run exactly ``rounds`` pair-refinement rounds on one graph."""
    if rounds < 0:
        raise ValueError("rounds must be >= 0")
    colorings = _initial([g], quantize)
    for _ in range(rounds):
        colorings = _refine_once(colorings)
    vw, ww = colorings[0]
    return PairColoring(round=rounds, colors_vw=vw, colors_ww=ww)


def fwl2_stable(g: MilpGraph, quantize: float | None = None) -> PairColoring:
    """Refine until the pair partition stops changing."""
    colorings, rounds = _refine_to_stability([g], quantize)
    vw, ww = colorings[0]
    return PairColoring(round=rounds, colors_vw=vw, colors_ww=ww)


def _check_sizes(g1: MilpGraph, g2: MilpGraph):
    if (g1.m, g1.n) != (g2.m, g2.n):
        raise ValueError(f"size mismatch: ({g1.m},{g1.n}) vs ({g2.m},{g2.n})")


def fwl2_indistinguishable_W(g1: MilpGraph, g2: MilpGraph, quantize: float | None = None) -> bool:
    """Per-variable-column criterion: at joint stability, for every j both the
    (i, j) color column over i and the (j1, j) color column over j1 must agree
    across the two graphs as multisets."""
    _check_sizes(g1, g2)
    (vw1, ww1), (vw2, ww2) = _refine_to_stability([g1, g2], quantize)[0]
    for j in range(g1.n):
        if sorted(vw1[:, j]) != sorted(vw2[:, j]):
            return False
        if sorted(ww1[:, j]) != sorted(ww2[:, j]):
            return False
    return True


def fwl2_indistinguishable(g1: MilpGraph, g2: MilpGraph, quantize: float | None = None) -> bool:
    """Whole-multiset criterion over all pair colors of each kind."""
    _check_sizes(g1, g2)
    (vw1, ww1), (vw2, ww2) = _refine_to_stability([g1, g2], quantize)[0]
    return sorted(vw1.flat) == sorted(vw2.flat) and sorted(ww1.flat) == sorted(ww2.flat)
