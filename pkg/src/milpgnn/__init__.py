"""Strong-branching scores on MILP graphs, color-refinement tractability
tests, and message-passing / second-order folklore network surrogates."""

from .instance import (
    InstanceError,
    MilpGraph,
    MilpInstance,
    Sense,
    build_graph,
    load_instance,
    parse_instance,
    permute,
    serialize_instance,
)
from .lp import BoundOverride, LpOutcome, LpStatus, min_norm_solution, solve_lp
from .sb import PRODUCT_RULE, SbScores, ScoreRule, sb_scores
from .wl import is_mp_tractable, stable_partition, wl_indistinguishable, wl_refine
from .fwl import fwl2_indistinguishable, fwl2_indistinguishable_W, fwl2_refine, fwl2_stable
from .gen import PortableRng, counterexample_pair, gen_random, gen_set_cover, gen_training_set

__all__ = [
    "InstanceError",
    "MilpGraph",
    "MilpInstance",
    "Sense",
    "build_graph",
    "load_instance",
    "parse_instance",
    "permute",
    "serialize_instance",
    "BoundOverride",
    "LpOutcome",
    "LpStatus",
    "min_norm_solution",
    "solve_lp",
    "PRODUCT_RULE",
    "SbScores",
    "ScoreRule",
    "sb_scores",
    "is_mp_tractable",
    "stable_partition",
    "wl_indistinguishable",
    "wl_refine",
    "fwl2_indistinguishable",
    "fwl2_indistinguishable_W",
    "fwl2_refine",
    "fwl2_stable",
    "PortableRng",
    "counterexample_pair",
    "gen_random",
    "gen_set_cover",
    "gen_training_set",
]

__version__ = "0.1.0"
