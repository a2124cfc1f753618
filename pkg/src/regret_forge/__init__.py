"""Min-max regret toolkit for binary integer programs with interval costs."""

from .core import Direction, LinearConstraint, Sense, TimeBudget, ToleranceSet
from .lp import LpModel, LpSolution, LpStatus, lp_dual_objective, solve_lp
from .milp import (
    MilpModel,
    MilpOutcome,
    MilpStatus,
    add_global_constraint,
    solve_milp,
)
from .mmr import (
    AlgStatus,
    Algorithm,
    AlgorithmReport,
    BinarySolution,
    BipInstance,
    CutFlavor,
    IdsConfig,
    RegretEvaluation,
    Scenario,
    best_scenario,
    best_scenario_cut,
    branch_and_cut,
    build_ds_model,
    dominance_holds,
    dual_substitution,
    evaluate_max_regret,
    fixed_scenario,
    hamming_cut,
    iterated_ds,
    local_exact_refine,
    slave_problem,
    worst_scenario,
)
from .oracle import brute_force_max_regret, brute_force_mmr
from .problems import (
    GapSpec,
    KpSpec,
    MkpSpec,
    ScpSpec,
    encode_gap,
    encode_kp,
    encode_mkp,
    encode_scp,
)
from .instances import (
    Rng,
    gen_desk_instance,
    gen_gap,
    gen_kp,
    gen_scp_intervals,
    overlay_intervals,
    parse_chubeasley_mkp,
    parse_native,
    parse_orlib_gap,
    parse_orlib_scp,
    serialize_native,
)

__all__ = [
    "Direction", "LinearConstraint", "Sense", "TimeBudget", "ToleranceSet",
    "LpModel", "LpSolution", "LpStatus", "solve_lp", "lp_dual_objective",
    "MilpModel", "MilpOutcome", "MilpStatus", "add_global_constraint", "solve_milp",
    "Algorithm", "AlgStatus", "AlgorithmReport", "BinarySolution", "BipInstance",
    "CutFlavor", "IdsConfig", "RegretEvaluation", "Scenario",
    "worst_scenario", "best_scenario", "evaluate_max_regret", "fixed_scenario",
    "build_ds_model", "dual_substitution", "hamming_cut", "best_scenario_cut",
    "dominance_holds", "iterated_ds", "local_exact_refine", "branch_and_cut",
    "slave_problem",
    "brute_force_max_regret", "brute_force_mmr",
    "KpSpec", "MkpSpec", "ScpSpec", "GapSpec",
    "encode_kp", "encode_mkp", "encode_scp", "encode_gap",
    "Rng", "overlay_intervals", "gen_kp", "gen_scp_intervals", "gen_gap",
    "gen_desk_instance", "parse_orlib_scp", "parse_orlib_gap",
    "parse_chubeasley_mkp", "parse_native", "serialize_native",
]
