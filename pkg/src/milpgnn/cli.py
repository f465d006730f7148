"""Command-line entry point.

Exit codes are a stable contract: 0 success, 1 input error, 2 undefined
branching scores (infeasible or unbounded relaxation), 3 intractable verdict
from check-tractability.  Machine-readable JSON goes to stdout with 0-based
indices; the human-readable partition summary uses 1-based indices.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import nn
from .fwl import fwl2_indistinguishable, fwl2_indistinguishable_W
from .gen import counterexample_pair, gen_random, gen_set_cover, gen_training_set
from .instance import InstanceError, MilpInstance, build_graph, load_instance, serialize_instance
from .lp import LpStatus, solve_lp
from .sb import (
    PRODUCT_RULE,
    RelaxationInfeasibleError,
    RelaxationUnboundedError,
    ScoreRule,
    sb_scores,
)
from .wl import is_mp_tractable, stable_partition, wl_indistinguishable

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNDEFINED_SB = 2
EXIT_INTRACTABLE = 3


class CliInputError(Exception):
    pass


def _load(path: str) -> MilpInstance:
    try:
        return load_instance(path)
    except (OSError, InstanceError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CliInputError(f"{path}: {exc}") from exc


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _jsonable(v):
    if isinstance(v, float) and math.isinf(v):
        return "+inf" if v > 0 else "-inf"
    return v


# ---------------------------------------------------------------------------


def cmd_check_tractability(args) -> int:
    inst = _load(args.instance)
    part = stable_partition(build_graph(inst))
    tractable, witness = is_mp_tractable(inst)
    report = {
        "I": [list(c) for c in part.classes_v],
        "J": [list(c) for c in part.classes_w],
        "rounds": part.rounds_to_converge,
        "tractable": tractable,
        "witness": list(witness) if witness is not None else None,
    }
    _emit(report)
    one = lambda cls: "{" + ", ".join("{" + ", ".join(str(i + 1) for i in c) + "}" for c in cls) + "}"
    print(f"stable partition (1-based): I = {one(part.classes_v)}, J = {one(part.classes_w)}", file=sys.stderr)
    print("verdict:", "tractable" if tractable else "intractable", file=sys.stderr)
    return EXIT_OK if tractable else EXIT_INTRACTABLE


def _parse_rule(spec: str) -> ScoreRule:
    if spec == "product":
        return PRODUCT_RULE
    if spec.startswith("linear:"):
        try:
            mu = float(spec.split(":", 1)[1])
        except ValueError as exc:
            raise CliInputError(f"bad rule {spec!r}") from exc
        if not 0.0 <= mu <= 1.0:
            raise CliInputError("linear rule weight must be in [0, 1]")
        return ScoreRule("linear", mu)
    raise CliInputError(f"unknown rule {spec!r} (expected 'product' or 'linear:MU')")


def cmd_sb_score(args) -> int:
    inst = _load(args.instance)
    rule = _parse_rule(args.rule)
    try:
        result = sb_scores(inst, rule)
    except (RelaxationInfeasibleError, RelaxationUnboundedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED_SB
    _emit(
        {
            "f_star": result.f_star,
            "x_star": result.x_star.tolist(),
            "scores": result.scores.tolist(),
            "deltas": [[_jsonable(d) for d in row] for row in result.deltas.tolist()],
        }
    )
    return EXIT_OK


def cmd_fwl2_compare(args) -> int:
    a, b = _load(args.a), _load(args.b)
    ga, gb = build_graph(a), build_graph(b)
    if (ga.m, ga.n) != (gb.m, gb.n):
        raise CliInputError(f"size mismatch: ({ga.m},{ga.n}) vs ({gb.m},{gb.n})")
    _emit(
        {
            "indistinguishable": fwl2_indistinguishable(ga, gb),
            "indistinguishable_W": fwl2_indistinguishable_W(ga, gb),
        }
    )
    return EXIT_OK


def _write_svg(curve, path) -> None:
    """Minimal log-scale loss-curve line chart, no plotting dependency."""
    width, height, pad = 640, 400, 50
    losses = [max(l, 1e-300) for _, l, _ in curve] or [1.0]
    lo = math.log10(min(losses))
    hi = math.log10(max(losses))
    if hi - lo < 1e-12:
        hi = lo + 1.0
    xmax = max(len(curve) - 1, 1)
    pts = []
    for k, (_, l, _) in enumerate(curve):
        x = pad + (width - 2 * pad) * k / xmax
        y = height - pad - (height - 2 * pad) * (math.log10(max(l, 1e-300)) - lo) / (hi - lo)
        pts.append(f"{x:.1f},{y:.1f}")
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height-pad}" x2="{width-pad}" y2="{height-pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height-pad}" stroke="black"/>',
        f'<text x="{width//2}" y="{height-10}" text-anchor="middle" font-size="12">epoch</text>',
        f'<text x="14" y="{height//2}" font-size="12" transform="rotate(-90 14 {height//2})" text-anchor="middle">loss (log10)</text>',
        f'<text x="{pad-6}" y="{height-pad}" text-anchor="end" font-size="10">{lo:.1f}</text>',
        f'<text x="{pad-6}" y="{pad+4}" text-anchor="end" font-size="10">{hi:.1f}</text>',
        f'<text x="{width-pad}" y="{height-pad+14}" text-anchor="middle" font-size="10">{xmax}</text>',
    ]
    if len(pts) >= 2:
        lines.append(f'<polyline points="{" ".join(pts)}" fill="none" stroke="steelblue" stroke-width="1.5"/>')
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines))


def _load_dataset(spec: str):
    if spec == "counterexample":
        insts = list(counterexample_pair())
    else:
        if not os.path.isdir(spec):
            raise CliInputError(f"{spec}: not a directory (or 'counterexample')")
        files = sorted(f for f in os.listdir(spec) if f.endswith(".json") and f != "manifest.json")
        if not files:
            raise CliInputError(f"{spec}: no instance files")
        insts = [_load(os.path.join(spec, f)) for f in files]
    dataset = []
    for inst in insts:
        try:
            scores = sb_scores(inst).scores
        except (RelaxationInfeasibleError, RelaxationUnboundedError) as exc:
            raise CliInputError(f"instance with undefined SB in training data: {exc}") from exc
        dataset.append((build_graph(inst), scores))
    return dataset


def cmd_train(args) -> int:
    dataset = _load_dataset(args.data)
    os.makedirs(args.out, exist_ok=True)
    params = nn.init_params(args.arch, args.dim, args.layers, args.seed)
    cfg = nn.TrainConfig(
        learning_rate=args.lr,
        epochs=args.epochs,
        target_loss=args.target,
    )
    trained, curve = nn.train(params, dataset, cfg)
    nn.write_curve_csv(curve, os.path.join(args.out, "curve.csv"))
    _write_svg(curve, os.path.join(args.out, "curve.svg"))
    nn.save_params(trained, os.path.join(args.out, "params.bin"))
    final_loss = curve[-1][1] if curve else None
    _emit(
        {
            "arch": args.arch,
            "dim": args.dim,
            "layers": args.layers,
            "seed": args.seed,
            "epochs_run": len(curve),
            "final_loss": final_loss,
            "out": args.out,
        }
    )
    return EXIT_OK


def cmd_generate(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    manifest = {"family": args.family, "seeds": [], "files": [], "rejected": 0}
    if args.family == "random":
        insts, rejected = gen_training_set(args.seed, args.count, m=args.m, n=args.n, nnz=args.nnz)
        manifest["rejected"] = rejected
    elif args.family == "set-cover":
        insts = [gen_set_cover(args.seed + k, args.m, args.n, args.density) for k in range(args.count)]
    else:
        insts = list(counterexample_pair())
    for k, inst in enumerate(insts):
        name = f"{args.family}_{args.seed + k:06d}.json"
        with open(os.path.join(args.out, name), "w") as fh:
            fh.write(serialize_instance(inst))
        manifest["seeds"].append(args.seed + k)
        manifest["files"].append(name)
    with open(os.path.join(args.out, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
    _emit({"written": len(insts), "out": args.out, "rejected": manifest["rejected"]})
    return EXIT_OK


def cmd_reproduce_counterexample(args) -> int:
    inst_a, inst_b = counterexample_pair()
    ga, gb = build_graph(inst_a), build_graph(inst_b)
    sa, sb = sb_scores(inst_a), sb_scores(inst_b)
    tract_a, _ = is_mp_tractable(inst_a)
    tract_b, _ = is_mp_tractable(inst_b)
    max_diff = 0.0
    max_spread = 0.0
    for k in range(100):
        d = 8 if k % 2 == 0 else 64
        params = nn.init_params("mpgnn", d, 2, seed=args.seed * 100 + k)
        ya = nn.mpgnn_forward(params, ga)
        yb = nn.mpgnn_forward(params, gb)
        max_diff = max(max_diff, float(np.abs(ya - yb).max()))
        max_spread = max(max_spread, float(np.ptp(ya)), float(np.ptp(yb)))
    fg = nn.init_params("fgnn2", 64, 2, seed=args.seed + 1)
    fgnn_sep = float(np.abs(nn.fgnn2_forward(fg, ga) - nn.fgnn2_forward(fg, gb)).max())
    _emit(
        {
            "sb_cycle8": sa.scores.tolist(),
            "sb_split": sb.scores.tolist(),
            "f_star": [sa.f_star, sb.f_star],
            "wl_indistinguishable": wl_indistinguishable(ga, gb),
            "mp_tractable": [tract_a, tract_b],
            "fwl2_indistinguishable": fwl2_indistinguishable(ga, gb),
            "fwl2_indistinguishable_W": fwl2_indistinguishable_W(ga, gb),
            "mpgnn_max_output_diff": max_diff,
            "mpgnn_max_output_spread": max_spread,
            "fgnn2_output_separation": fgnn_sep,
            "seed": args.seed,
        }
    )
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="milpgnn", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-tractability", help="stable partition and block-constancy verdict")
    p.add_argument("instance")
    p.set_defaults(func=cmd_check_tractability)

    p = sub.add_parser("sb-score", help="strong-branching score vector")
    p.add_argument("instance")
    p.add_argument("--rule", default="product", help="'product' or 'linear:MU'")
    p.set_defaults(func=cmd_sb_score)

    p = sub.add_parser("fwl2-compare", help="pair-refinement indistinguishability verdicts")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_fwl2_compare)

    p = sub.add_parser("train", help="fit a surrogate to SB scores")
    p.add_argument("--arch", choices=["mpgnn", "fgnn2"], required=True)
    p.add_argument("--data", required=True, help="instance directory or 'counterexample'")
    p.add_argument("--dim", type=int, default=64)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--epochs", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lr", type=float, default=1e-5)
    p.add_argument("--target", type=float, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("generate", help="write instance files plus a manifest")
    p.add_argument("--family", choices=["random", "set-cover", "counterexample"], default="random")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--nnz", type=int, default=60)
    p.add_argument("--density", type=float, default=0.2)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("reproduce-counterexample", help="one-shot separation report")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_reproduce_counterexample)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
