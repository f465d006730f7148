"""Message-passing and second-order folklore networks over MILP graphs, with
hand-derived backpropagation and Adam training against branching-score
targets.

Both architectures share the building blocks: the initial maps are single
linear layers followed by ReLU, the internal maps are 3-layer MLPs with ReLU
hidden activations and a linear last layer, and the readout is a 2-layer MLP
ending in a scalar.  Message terms multiply by the matrix entry, so an absent
edge contributes exactly zero.

Everything runs on plain numpy float64; gradients are checked against central
finite differences in the test suite.
"""

from __future__ import annotations

import csv
import json
import struct
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .instance import MilpGraph, Sense

__all__ = [
    "Mlp",
    "GnnParams",
    "TrainConfig",
    "init_params",
    "encode_graph",
    "mpgnn_forward",
    "fgnn2_forward",
    "gnn_forward",
    "BatchedGraphs",
    "batch_graphs",
    "mpgnn_batch_forward",
    "loss",
    "grad",
    "train",
    "save_params",
    "load_params",
]

CONS_FEATURES = 4  # b, one-hot sense
VAR_FEATURES = 6  # c, lower finite flag/value, upper finite flag/value, integrality


class DivergenceError(RuntimeError):
    """Training loss became NaN; carries the epoch index."""

    def __init__(self, epoch: int):
        super().__init__(f"loss diverged to NaN at epoch {epoch}")
        self.epoch = epoch


class Mlp:
    """Dense MLP: ReLU between layers, linear last layer by default.  The
    encoders and internal maps use output_relu=True (every layer activated);
    only the scalar readout ends linearly.  A ReLU-terminated g is essential:
    with a linear final layer g stays affine on the few distinct pair inputs,
    its messages satisfy an exact additivity identity, and training locks
    onto symmetric plateaus it can never leave."""

    def __init__(self, weights: list[np.ndarray], biases: list[np.ndarray], output_relu: bool = False):
        self.weights = weights
        self.biases = biases
        self.output_relu = output_relu

    @property
    def in_dim(self) -> int:
        return self.weights[0].shape[0]

    def forward(self, x: np.ndarray):
        """x: (..., in_dim).  Returns (y, cache)."""
        lead = x.shape[:-1]
        h = x.reshape(-1, x.shape[-1])
        inputs = []
        last = len(self.weights) - 1
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            inputs.append(h)
            h = h @ w + b
            if k < last or self.output_relu:
                h = np.maximum(h, 0.0)
        return h.reshape(*lead, -1), (lead, inputs, h)

    def backward(self, cache, dy: np.ndarray):
        """Returns (dx, grads) with grads ordered [dW0, db0, dW1, db1, ...]."""
        lead, inputs, out = cache
        d = dy.reshape(-1, dy.shape[-1])
        last = len(self.weights) - 1
        grads: list[np.ndarray] = [None] * (2 * len(self.weights))
        for k in range(last, -1, -1):
            if k < last or self.output_relu:
                # recompute the layer output mask from the cached input
                z = inputs[k] @ self.weights[k] + self.biases[k]
                d = d * (z > 0.0)
            grads[2 * k] = inputs[k].T @ d
            grads[2 * k + 1] = d.sum(axis=0)
            d = d @ self.weights[k].T
        return d.reshape(*lead, -1), grads

    def param_arrays(self) -> list[np.ndarray]:
        out = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out


@dataclass
class GnnParams:
    """All learnable maps of one network.  slots holds, in a fixed order,
    the initial encoders, L layers of four internal maps, and the readout."""

    kind: str  # "mpgnn" | "fgnn2"
    dim: int
    layers: int
    p0: Mlp
    q0: Mlp
    msg_layers: list[dict[str, Mlp]]  # per layer: p, q, f, g
    readout: Mlp

    def flat(self) -> list[np.ndarray]:
        arrays = self.p0.param_arrays() + self.q0.param_arrays()
        for layer in self.msg_layers:
            for name in ("p", "q", "f", "g"):
                arrays += layer[name].param_arrays()
        arrays += self.readout.param_arrays()
        return arrays

    def copy(self) -> "GnnParams":
        def cp(m: Mlp) -> Mlp:
            return Mlp([w.copy() for w in m.weights], [b.copy() for b in m.biases], m.output_relu)

        return GnnParams(
            kind=self.kind,
            dim=self.dim,
            layers=self.layers,
            p0=cp(self.p0),
            q0=cp(self.q0),
            msg_layers=[{k: cp(v) for k, v in layer.items()} for layer in self.msg_layers],
            readout=cp(self.readout),
        )


def _make_mlp(rng: np.random.Generator, dims: Sequence[int], output_relu: bool = False) -> Mlp:
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return Mlp(weights, biases, output_relu)


def init_params(kind: str, dim: int, layers: int, seed: int) -> GnnParams:
    """Glorot-uniform weights, zero biases, fully determined by the seed."""
    if dim < 1 or layers < 1:
        raise ValueError("dim and layers must be >= 1")
    if kind not in ("mpgnn", "fgnn2"):
        raise ValueError(f"unknown architecture {kind!r}")
    rng = np.random.default_rng(seed)
    d = dim
    if kind == "mpgnn":
        p0 = _make_mlp(rng, [CONS_FEATURES, d], output_relu=True)
        q0 = _make_mlp(rng, [VAR_FEATURES, d], output_relu=True)
        msg_layers = [
            {
                "p": _make_mlp(rng, [2 * d, d, d, d], output_relu=True),
                "q": _make_mlp(rng, [2 * d, d, d, d], output_relu=True),
                "f": _make_mlp(rng, [d, d, d, d], output_relu=True),
                "g": _make_mlp(rng, [d, d, d, d], output_relu=True),
            }
            for _ in range(layers)
        ]
        readout = _make_mlp(rng, [3 * d, d, 1])
    else:
        p0 = _make_mlp(rng, [CONS_FEATURES + VAR_FEATURES + 1, d], output_relu=True)
        q0 = _make_mlp(rng, [2 * VAR_FEATURES + 1, d], output_relu=True)
        msg_layers = [
            {
                "p": _make_mlp(rng, [2 * d, d, d, d], output_relu=True),
                "q": _make_mlp(rng, [2 * d, d, d, d], output_relu=True),
                "f": _make_mlp(rng, [2 * d, d, d, d], output_relu=True),
                "g": _make_mlp(rng, [2 * d, d, d, d], output_relu=True),
            }
            for _ in range(layers)
        ]
        readout = _make_mlp(rng, [2 * d, d, 1])
    return GnnParams(kind=kind, dim=dim, layers=layers, p0=p0, q0=q0, msg_layers=msg_layers, readout=readout)


def encode_graph(g: MilpGraph):
    """Numeric node features: constraints get (b, one-hot sense); variables
    get (c, finite-flag and value of each bound, integrality flag).  Returns
    (XV, XW, dense A)."""
    xv = np.zeros((g.m, CONS_FEATURES))
    xv[:, 0] = g.b
    for i in range(g.m):
        xv[i, 1 + int(g.senses[i])] = 1.0
    xw = np.zeros((g.n, VAR_FEATURES))
    xw[:, 0] = g.c
    lo_finite = np.isfinite(g.lower)
    up_finite = np.isfinite(g.upper)
    xw[:, 1] = lo_finite
    xw[:, 2] = np.where(lo_finite, g.lower, 0.0)
    xw[:, 3] = up_finite
    xw[:, 4] = np.where(up_finite, g.upper, 0.0)
    xw[:, 5] = g.integer
    return xv, xw, g.dense_matrix()


# ---------------------------------------------------------------------------
# message-passing network


def mpgnn_forward(params: GnnParams, g: MilpGraph, want_cache: bool = False):
    """Per-variable outputs y_j = readout(sum_i s_i, sum_j t_j, t_j)."""
    if params.kind != "mpgnn":
        raise ValueError("params are not for the message-passing network")
    xv, xw, a = encode_graph(g)
    s, s_cache = params.p0.forward(xv)
    t, t_cache = params.q0.forward(xw)
    s_hist, t_hist, layer_caches = [s], [t], []
    for layer in params.msg_layers:
        f_out, f_c = layer["f"].forward(t)
        msg_v = a @ f_out
        s_new, p_c = layer["p"].forward(np.concatenate([s, msg_v], axis=1))
        g_out, g_c = layer["g"].forward(s)
        msg_w = a.T @ g_out
        t_new, q_c = layer["q"].forward(np.concatenate([t, msg_w], axis=1))
        layer_caches.append((f_c, p_c, g_c, q_c))
        s, t = s_new, t_new
        s_hist.append(s)
        t_hist.append(t)
    u = s.sum(axis=0)
    w = t.sum(axis=0)
    r_in = np.concatenate([np.tile(u, (g.n, 1)), np.tile(w, (g.n, 1)), t], axis=1)
    y, r_c = params.readout.forward(r_in)
    y = y[:, 0]
    if not want_cache:
        return y
    return y, (xv, xw, a, s_cache, t_cache, layer_caches, r_c)


def _mpgnn_backward(params: GnnParams, g: MilpGraph, cache, dy: np.ndarray) -> list[np.ndarray]:
    xv, xw, a, s_cache, t_cache, layer_caches, r_c = cache
    d = params.dim
    d_rin, r_grads = params.readout.backward(r_c, dy[:, None])
    du = d_rin[:, :d].sum(axis=0)
    dw = d_rin[:, d : 2 * d].sum(axis=0)
    ds = np.tile(du, (g.m, 1))
    dt = np.tile(dw, (g.n, 1)) + d_rin[:, 2 * d :]

    layer_grads: list[list[np.ndarray]] = []
    for layer, (f_c, p_c, g_c, q_c) in zip(reversed(params.msg_layers), reversed(layer_caches)):
        d_pin, p_grads = layer["p"].backward(p_c, ds)
        ds_prev = d_pin[:, :d]
        d_msg_v = d_pin[:, d:]
        df = a.T @ d_msg_v
        dt_from_f, f_grads = layer["f"].backward(f_c, df)
        d_qin, q_grads = layer["q"].backward(q_c, dt)
        dt_prev = d_qin[:, :d] + dt_from_f
        d_msg_w = d_qin[:, d:]
        dg = a @ d_msg_w
        ds_from_g, g_grads = layer["g"].backward(g_c, dg)
        ds, dt = ds_prev + ds_from_g, dt_prev
        layer_grads.append([p_grads, q_grads, f_grads, g_grads])

    _, p0_grads = params.p0.backward(s_cache, ds)
    _, q0_grads = params.q0.backward(t_cache, dt)
    flat = p0_grads + q0_grads
    for p_grads, q_grads, f_grads, g_grads in reversed(layer_grads):
        flat += p_grads + q_grads + f_grads + g_grads
    flat += r_grads
    return flat


# ---------------------------------------------------------------------------
# second-order folklore network


def fgnn2_forward(params: GnnParams, g: MilpGraph, want_cache: bool = False):
    """Pair features over (constraint, variable) and (variable, variable);
    outputs y_j = readout(sum_i s_ij, sum_j1 t_{j1 j})."""
    if params.kind != "fgnn2":
        raise ValueError("params are not for the folklore network")
    xv, xw, a = encode_graph(g)
    m, n = g.m, g.n
    d = params.dim

    s_in = np.concatenate(
        [
            np.broadcast_to(xv[:, None, :], (m, n, CONS_FEATURES)),
            np.broadcast_to(xw[None, :, :], (m, n, VAR_FEATURES)),
            a[:, :, None],
        ],
        axis=2,
    )
    t_in = np.concatenate(
        [
            np.broadcast_to(xw[:, None, :], (n, n, VAR_FEATURES)),
            np.broadcast_to(xw[None, :, :], (n, n, VAR_FEATURES)),
            np.eye(n)[:, :, None],
        ],
        axis=2,
    )
    s, s_cache = params.p0.forward(s_in)  # (m, n, d)
    t, t_cache = params.q0.forward(t_in)  # (n, n, d)

    layer_caches = []
    for layer in params.msg_layers:
        # message into s[i, j]: sum over j1 of f(t[j1, j], s[i, j1])
        zs = np.concatenate(
            [
                np.broadcast_to(np.transpose(t, (1, 0, 2))[None, :, :, :], (m, n, n, d)),
                np.broadcast_to(s[:, None, :, :], (m, n, n, d)),
            ],
            axis=3,
        )
        f_out, f_c = layer["f"].forward(zs)
        s_new, p_c = layer["p"].forward(np.concatenate([s, f_out.sum(axis=2)], axis=2))
        # message into t[j1, j2]: sum over i of g(s[i, j2], s[i, j1])
        zt = np.concatenate(
            [
                np.broadcast_to(np.transpose(s, (1, 0, 2))[None, :, :, :], (n, n, m, d)),
                np.broadcast_to(np.transpose(s, (1, 0, 2))[:, None, :, :], (n, n, m, d)),
            ],
            axis=3,
        )
        g_out, g_c = layer["g"].forward(zt)
        t_new, q_c = layer["q"].forward(np.concatenate([t, g_out.sum(axis=2)], axis=2))
        layer_caches.append((f_c, p_c, g_c, q_c))
        s, t = s_new, t_new

    us = s.sum(axis=0)  # (n, d)
    ut = t.sum(axis=0)  # (n, d), sums t[j1, j] over j1
    y, r_c = params.readout.forward(np.concatenate([us, ut], axis=1))
    y = y[:, 0]
    if not want_cache:
        return y
    return y, (s_cache, t_cache, layer_caches, r_c, (m, n))


def _fgnn2_backward(params: GnnParams, g: MilpGraph, cache, dy: np.ndarray) -> list[np.ndarray]:
    s_cache, t_cache, layer_caches, r_c, (m, n) = cache
    d = params.dim
    d_rin, r_grads = params.readout.backward(r_c, dy[:, None])
    ds = np.broadcast_to(d_rin[None, :, :d], (m, n, d)).copy()
    dt = np.broadcast_to(d_rin[None, :, d:], (n, n, d)).copy()

    layer_grads: list[list[np.ndarray]] = []
    for layer, (f_c, p_c, g_c, q_c) in zip(reversed(params.msg_layers), reversed(layer_caches)):
        d_pin, p_grads = layer["p"].backward(p_c, ds)
        ds_prev = d_pin[..., :d].copy()
        d_msg_s = d_pin[..., d:]  # (m, n, d)
        dzs, f_grads = layer["f"].backward(f_c, np.broadcast_to(d_msg_s[:, :, None, :], (m, n, n, d)))
        # zs[i, j, j1] = (t[j1, j], s[i, j1])
        dt_prev = np.transpose(dzs[..., :d].sum(axis=0), (1, 0, 2))  # -> index (j1, j)
        ds_prev += dzs[..., d:].sum(axis=1)  # -> index (i, j1)

        d_qin, q_grads = layer["q"].backward(q_c, dt)
        dt_prev += d_qin[..., :d]
        d_msg_t = d_qin[..., d:]  # (n, n, d)
        dzt, g_grads = layer["g"].backward(g_c, np.broadcast_to(d_msg_t[:, :, None, :], (n, n, m, d)))
        # zt[j1, j2, i] = (s[i, j2], s[i, j1])
        ds_prev += np.transpose(dzt[..., :d].sum(axis=0), (1, 0, 2))  # -> (i, j2)
        ds_prev += np.transpose(dzt[..., d:].sum(axis=1), (1, 0, 2))  # -> (i, j1)
        ds, dt = ds_prev, dt_prev
        layer_grads.append([p_grads, q_grads, f_grads, g_grads])

    _, p0_grads = params.p0.backward(s_cache, ds)
    _, q0_grads = params.q0.backward(t_cache, dt)
    flat = p0_grads + q0_grads
    for p_grads, q_grads, f_grads, g_grads in reversed(layer_grads):
        flat += p_grads + q_grads + f_grads + g_grads
    flat += r_grads
    return flat


def gnn_forward(params: GnnParams, g: MilpGraph) -> np.ndarray:
    if params.kind == "mpgnn":
        return mpgnn_forward(params, g)
    return fgnn2_forward(params, g)


# ---------------------------------------------------------------------------
# batched message-passing path for same-shape datasets


@dataclass(frozen=True)
class BatchedGraphs:
    """A dataset of same-shape graphs stacked along a batch axis, so one
    epoch is a handful of large matmuls instead of many small ones."""

    xv: np.ndarray  # (B, m, CONS_FEATURES)
    xw: np.ndarray  # (B, n, VAR_FEATURES)
    a: np.ndarray  # (B, m, n)
    targets: np.ndarray  # (B, n)


def batch_graphs(pairs: Sequence[tuple[MilpGraph, np.ndarray]]) -> BatchedGraphs:
    shapes = {(g.m, g.n) for g, _ in pairs}
    if len(shapes) != 1:
        raise ValueError(f"graphs must share one shape, got {sorted(shapes)}")
    encoded = [encode_graph(g) for g, _ in pairs]
    return BatchedGraphs(
        xv=np.stack([e[0] for e in encoded]),
        xw=np.stack([e[1] for e in encoded]),
        a=np.stack([e[2] for e in encoded]),
        targets=np.stack([np.asarray(t, dtype=float) for _, t in pairs]),
    )


def mpgnn_batch_forward(params: GnnParams, batch: BatchedGraphs, want_cache: bool = False):
    if params.kind != "mpgnn":
        raise ValueError("params are not for the message-passing network")
    a = batch.a
    bsz, m, n = a.shape
    s, s_cache = params.p0.forward(batch.xv)  # (B, m, d)
    t, t_cache = params.q0.forward(batch.xw)  # (B, n, d)
    layer_caches = []
    for layer in params.msg_layers:
        f_out, f_c = layer["f"].forward(t)
        msg_v = a @ f_out
        s_new, p_c = layer["p"].forward(np.concatenate([s, msg_v], axis=2))
        g_out, g_c = layer["g"].forward(s)
        msg_w = np.transpose(a, (0, 2, 1)) @ g_out
        t_new, q_c = layer["q"].forward(np.concatenate([t, msg_w], axis=2))
        layer_caches.append((f_c, p_c, g_c, q_c))
        s, t = s_new, t_new
    d = params.dim
    u = s.sum(axis=1)  # (B, d)
    w = t.sum(axis=1)
    r_in = np.concatenate(
        [
            np.broadcast_to(u[:, None, :], (bsz, n, d)),
            np.broadcast_to(w[:, None, :], (bsz, n, d)),
            t,
        ],
        axis=2,
    )
    y, r_c = params.readout.forward(r_in)
    y = y[..., 0]
    if not want_cache:
        return y
    return y, (a, s_cache, t_cache, layer_caches, r_c, (bsz, m, n))


def _mpgnn_batch_backward(params: GnnParams, cache, dy: np.ndarray) -> list[np.ndarray]:
    a, s_cache, t_cache, layer_caches, r_c, (bsz, m, n) = cache
    d = params.dim
    d_rin, r_grads = params.readout.backward(r_c, dy[..., None])
    du = d_rin[..., :d].sum(axis=1)  # (B, d)
    dw = d_rin[..., d : 2 * d].sum(axis=1)
    ds = np.broadcast_to(du[:, None, :], (bsz, m, d)).copy()
    dt = np.broadcast_to(dw[:, None, :], (bsz, n, d)).copy() + d_rin[..., 2 * d :]

    layer_grads: list[list[np.ndarray]] = []
    for layer, (f_c, p_c, g_c, q_c) in zip(reversed(params.msg_layers), reversed(layer_caches)):
        d_pin, p_grads = layer["p"].backward(p_c, ds)
        ds_prev = d_pin[..., :d]
        d_msg_v = d_pin[..., d:]
        df = np.transpose(a, (0, 2, 1)) @ d_msg_v
        dt_from_f, f_grads = layer["f"].backward(f_c, df)
        d_qin, q_grads = layer["q"].backward(q_c, dt)
        dt_prev = d_qin[..., :d] + dt_from_f
        d_msg_w = d_qin[..., d:]
        dg = a @ d_msg_w
        ds_from_g, g_grads = layer["g"].backward(g_c, dg)
        ds, dt = ds_prev + ds_from_g, dt_prev
        layer_grads.append([p_grads, q_grads, f_grads, g_grads])

    _, p0_grads = params.p0.backward(s_cache, ds)
    _, q0_grads = params.q0.backward(t_cache, dt)
    flat = p0_grads + q0_grads
    for p_grads, q_grads, f_grads, g_grads in reversed(layer_grads):
        flat += p_grads + q_grads + f_grads + g_grads
    flat += r_grads
    return flat


# ---------------------------------------------------------------------------
# loss, gradient, training


def loss(params: GnnParams, dataset) -> float:
    """0.5 * sum over the dataset of the squared output error.  The dataset
    is a list of (graph, target) pairs or a BatchedGraphs."""
    if isinstance(dataset, BatchedGraphs):
        err = mpgnn_batch_forward(params, dataset) - dataset.targets
        return 0.5 * float((err * err).sum())
    total = 0.0
    for g, target in dataset:
        err = gnn_forward(params, g) - np.asarray(target, dtype=float)
        total += 0.5 * float(err @ err)
    return total


def grad(params: GnnParams, dataset):
    """Exact gradient of ``loss``; accumulation order is the dataset order,
    so results are bitwise reproducible.  Returns (loss, flat grads)."""
    if isinstance(dataset, BatchedGraphs):
        y, cache = mpgnn_batch_forward(params, dataset, want_cache=True)
        err = y - dataset.targets
        return 0.5 * float((err * err).sum()), _mpgnn_batch_backward(params, cache, err)
    total = 0.0
    acc: list[np.ndarray] | None = None
    for g, target in dataset:
        if params.kind == "mpgnn":
            y, cache = mpgnn_forward(params, g, want_cache=True)
        else:
            y, cache = fgnn2_forward(params, g, want_cache=True)
        err = y - np.asarray(target, dtype=float)
        total += 0.5 * float(err @ err)
        if params.kind == "mpgnn":
            gs = _mpgnn_backward(params, g, cache, err)
        else:
            gs = _fgnn2_backward(params, g, cache, err)
        if acc is None:
            acc = gs
        else:
            for slot, piece in zip(acc, gs):
                slot += piece
    if acc is None:
        acc = [np.zeros_like(arr) for arr in params.flat()]
    return total, acc


@dataclass(frozen=True)
class TrainConfig:
    """Adam schedule: base rate, decayed when the loss crosses the two
    thresholds; stops early once target_loss is reached (if set)."""

    learning_rate: float = 1e-5
    decay_thresholds: tuple[float, float] = (1e-6, 1e-12)
    decayed_rates: tuple[float, float] = (1e-6, 1e-7)
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    epochs: int = 10_000
    target_loss: float | None = None
    seed: int = 0


def train(
    params: GnnParams,
    dataset: Sequence[tuple[MilpGraph, np.ndarray]],
    cfg: TrainConfig,
    on_epoch: Callable[[int, float, float], None] | None = None,
):
    """Full-batch Adam.  Returns (trained params, curve) where curve is a
    list of (epoch, loss, lr) rows; the loss is the pre-step value."""
    params = params.copy()
    arrays = params.flat()
    m_state = [np.zeros_like(a) for a in arrays]
    v_state = [np.zeros_like(a) for a in arrays]
    curve: list[tuple[int, float, float]] = []
    for epoch in range(cfg.epochs):
        value, grads = grad(params, dataset)
        if np.isnan(value):
            raise DivergenceError(epoch)
        if value <= cfg.decay_thresholds[1]:
            lr = cfg.decayed_rates[1]
        elif value <= cfg.decay_thresholds[0]:
            lr = cfg.decayed_rates[0]
        else:
            lr = cfg.learning_rate
        curve.append((epoch, value, lr))
        if on_epoch is not None:
            on_epoch(epoch, value, lr)
        if cfg.target_loss is not None and value <= cfg.target_loss:
            break
        t = epoch + 1
        bias1 = 1.0 - cfg.beta1**t
        bias2 = 1.0 - cfg.beta2**t
        for a, gr, ms, vs in zip(arrays, grads, m_state, v_state):
            ms *= cfg.beta1
            ms += (1.0 - cfg.beta1) * gr
            vs *= cfg.beta2
            vs += (1.0 - cfg.beta2) * gr * gr
            a -= lr * (ms / bias1) / (np.sqrt(vs / bias2) + cfg.eps)
    return params, curve


def write_curve_csv(curve, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "loss", "lr"])
        writer.writerows(curve)


# ---------------------------------------------------------------------------
# parameter serialization: JSON shape header + raw little-endian float64


def save_params(params: GnnParams, path) -> None:
    arrays = params.flat()
    header = {
        "kind": params.kind,
        "dim": params.dim,
        "layers": params.layers,
        "shapes": [list(a.shape) for a in arrays],
    }
    blob = json.dumps(header).encode()
    with open(path, "wb") as fh:
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        for a in arrays:
            fh.write(np.ascontiguousarray(a, dtype="<f8").tobytes())


def load_params(path) -> GnnParams:
    with open(path, "rb") as fh:
        (hlen,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(hlen))
        params = init_params(header["kind"], header["dim"], header["layers"], seed=0)
        for a, shape in zip(params.flat(), header["shapes"]):
            if list(a.shape) != shape:
                raise ValueError("shape header does not match the architecture")
            raw = fh.read(8 * int(np.prod(shape)))
            a[...] = np.frombuffer(raw, dtype="<f8").reshape(shape)
    return params
