"""Min-max regret machinery for binary integer programs.

Covers scenario construction, exact regret evaluation, the median
fixed-scenario heuristic, the dual-substitution model and its iterated
variants, dominance tests with the matching exclusion cuts, the local
exact subroutine, and the Benders-style branch-and-cut solver.

All instance data is integral and regrets are computed in exact integer
arithmetic; the LP/MILP kernel only decides *which* solutions to look at.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .core import Direction, LinearConstraint, Sense, TimeBudget, ToleranceSet
from .errors import (
    InfeasibleSolution,
    NonIntegralData,
    TimeLimitExceeded,
    UnboundedRelaxation,
)
from .lp import LpModel
from .milp import MilpModel, MilpOutcome, MilpStatus, add_global_constraint, solve_milp

_INF = math.inf


class Algorithm(Enum):
    FIX = "fix"
    DS = "ds"
    IDS_H = "ids-h"
    IDS_B = "ids-b"
    BC = "bc"
    ORACLE = "oracle"


class AlgStatus(Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    TIME_LIMIT = "time_limit"
    INFEASIBLE = "infeasible"


class CutFlavor(Enum):
    HAMMING = "hamming"
    BEST_SCENARIO = "best-scenario"


def _as_int_tuple(values, what):
    out = []
    for v in values:
        f = float(v)
        if f != int(f):
            raise NonIntegralData(f"{what} must be integral, got {v}")
        out.append(int(f))
    return tuple(out)


@dataclass(frozen=True)
class BipInstance:
    """A binary program with interval objective coefficients."""

    num_vars: int
    direction: Direction
    c_lo: tuple[int, ...]
    c_hi: tuple[int, ...]
    constraints: tuple[LinearConstraint, ...]
    name: str = ""

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("instance needs at least one variable")
        object.__setattr__(self, "c_lo", _as_int_tuple(self.c_lo, "cost lower bound"))
        object.__setattr__(self, "c_hi", _as_int_tuple(self.c_hi, "cost upper bound"))
        if len(self.c_lo) != self.num_vars or len(self.c_hi) != self.num_vars:
            raise ValueError("interval vectors must match num_vars")
        if any(lo > hi for lo, hi in zip(self.c_lo, self.c_hi)):
            raise ValueError("every interval needs c_lo <= c_hi")
        rows = []
        for row in self.constraints:
            coefs = _as_int_tuple((c for _, c in row.terms), "constraint coefficient")
            rhs = _as_int_tuple((row.rhs,), "constraint rhs")[0]
            for j, _ in row.terms:
                if not 0 <= j < self.num_vars:
                    raise ValueError(f"constraint references variable {j} out of range")
            rows.append(LinearConstraint(
                tuple((j, float(c)) for (j, _), c in zip(row.terms, coefs)),
                row.sense, float(rhs)))
        object.__setattr__(self, "constraints", tuple(rows))

    @cached_property
    def lo_arr(self) -> np.ndarray:
        return np.array(self.c_lo, dtype=np.int64)

    @cached_property
    def hi_arr(self) -> np.ndarray:
        return np.array(self.c_hi, dtype=np.int64)


@dataclass(frozen=True)
class Scenario:
    costs: tuple[int, ...]

    @cached_property
    def arr(self) -> np.ndarray:
        return np.array(self.costs, dtype=np.int64)


@dataclass(frozen=True)
class BinarySolution:
    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("solution bits must be 0/1")
        object.__setattr__(self, "bits", bits)

    @cached_property
    def arr(self) -> np.ndarray:
        return np.array(self.bits, dtype=np.int64)

    def __len__(self):
        return len(self.bits)


@dataclass(frozen=True)
class RegretEvaluation:
    solution: BinarySolution
    worst_scenario: Scenario
    inner_optimum: int
    own_value: int
    max_regret: int
    rival: BinarySolution


class TraceEntry(NamedTuple):
    iteration: int
    candidate_regret: int | None
    model_objective: float | None


@dataclass(frozen=True)
class AlgorithmReport:
    algorithm: Algorithm
    status: AlgStatus
    incumbent: BinarySolution | None
    max_regret: int | None
    lower_bound: int
    iterations: int
    elapsed: float
    trace: tuple[TraceEntry, ...] = ()

    def best_iteration(self) -> int | None:
        """First iteration whose candidate already reached the final regret."""
        if self.max_regret is None:
            return None
        for entry in self.trace:
            if entry.candidate_regret is not None and entry.candidate_regret == self.max_regret:
                return entry.iteration
        return None


@dataclass(frozen=True)
class IdsConfig:
    cut_flavor: CutFlavor
    d: int = 1
    local_exact: bool = False
    budget: TimeBudget = TimeBudget.unlimited()

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("Hamming radius d must be >= 1")


# -- scenarios -----------------------------------------------------------


def worst_scenario(inst: BipInstance, x: BinarySolution) -> Scenario:
    """Extreme scenario attaining x's maximum regret.

    Maximization: selected items drop to their lower bound, everything
    else rises.  Minimization mirrors (selected items as dear as possible,
    rivals as cheap as possible).
    """
    bits = x.arr.astype(bool)
    if inst.direction is Direction.MAX:
        costs = np.where(bits, inst.lo_arr, inst.hi_arr)
    else:
        costs = np.where(bits, inst.hi_arr, inst.lo_arr)
    return Scenario(tuple(int(c) for c in costs))


def best_scenario(inst: BipInstance, x: BinarySolution) -> Scenario:
    """Mirror of :func:`worst_scenario`: the scenario most favorable to x."""
    bits = x.arr.astype(bool)
    if inst.direction is Direction.MAX:
        costs = np.where(bits, inst.hi_arr, inst.lo_arr)
    else:
        costs = np.where(bits, inst.lo_arr, inst.hi_arr)
    return Scenario(tuple(int(c) for c in costs))


def check_feasible(inst: BipInstance, x: BinarySolution) -> bool:
    if len(x) != inst.num_vars:
        return False
    bits = x.bits
    for row in inst.constraints:
        lhs = sum(int(c) * bits[j] for j, c in row.terms)
        rhs = int(row.rhs)
        if row.sense is Sense.LE and lhs > rhs:
            return False
        if row.sense is Sense.GE and lhs < rhs:
            return False
        if row.sense is Sense.EQ and lhs != rhs:
            return False
    return True


# -- classical solves ----------------------------------------------------


def _classical_model(inst: BipInstance, costs) -> MilpModel:
    base = LpModel(
        num_vars=inst.num_vars,
        objective=np.asarray(costs, dtype=float),
        direction=inst.direction,
        lower=np.zeros(inst.num_vars),
        upper=np.ones(inst.num_vars),
        constraints=inst.constraints,
    )
    return MilpModel(base=base, binary_vars=frozenset(range(inst.num_vars)))


def _solve_classical(inst, costs, budget, tol=None):
    """Exact classical BIP solve under fixed integer costs.

    Returns (bits, value) or None when infeasible; raises
    TimeLimitExceeded (with any incumbent attached) on budget expiry.
    """
    out = solve_milp(_classical_model(inst, costs), budget=budget, tol=tol)
    if out.status is MilpStatus.INFEASIBLE:
        return None
    if out.status is not MilpStatus.OPTIMAL:
        partial = None
        if out.incumbent is not None:
            bits = BinarySolution(tuple(int(round(b)) for b in out.incumbent))
            partial = (bits, int(np.asarray(costs, dtype=np.int64) @ bits.arr))
        raise TimeLimitExceeded("classical solve cut off", partial=partial)
    bits = BinarySolution(tuple(int(round(b)) for b in out.incumbent))
    value = int(np.asarray(costs, dtype=np.int64) @ bits.arr)
    return bits, value


def slave_problem(inst: BipInstance, x: BinarySolution,
                  budget: TimeBudget = TimeBudget.unlimited()) -> tuple[BinarySolution, int]:
    """Exact inner optimum under x's worst-case scenario."""
    scen = worst_scenario(inst, x)
    solved = _solve_classical(inst, scen.arr, budget)
    if solved is None:
        raise InfeasibleSolution("instance has no feasible solution")
    return solved


def evaluate_max_regret(inst: BipInstance, x: BinarySolution,
                        budget: TimeBudget = TimeBudget.unlimited()) -> RegretEvaluation:
    """Exact maximum regret of a feasible solution."""
    if not check_feasible(inst, x):
        raise InfeasibleSolution("candidate violates the instance constraints")
    scen = worst_scenario(inst, x)
    rival, inner = slave_problem(inst, x, budget)
    own = int(scen.arr @ x.arr)
    regret = inner - own if inst.direction is Direction.MAX else own - inner
    return RegretEvaluation(
        solution=x,
        worst_scenario=scen,
        inner_optimum=inner,
        own_value=own,
        max_regret=regret,
        rival=rival,
    )


# -- fixed-scenario heuristic -------------------------------------------


def fixed_scenario(inst: BipInstance,
                   budget: TimeBudget = TimeBudget.unlimited()) -> AlgorithmReport:
    """Median-scenario heuristic; half the evaluated regret is a valid
    lower bound, so regrets of 0 or 1 are proven optimal.

    The median (c_lo + c_hi) / 2 is handled by solving under the doubled
    costs c_lo + c_hi, which has the same optimizers and avoids fractions.
    """
    deadline = budget.start()
    t0 = time.monotonic()
    doubled = inst.lo_arr + inst.hi_arr
    try:
        solved = _solve_classical(inst, doubled, deadline.slice())
    except TimeLimitExceeded:
        return AlgorithmReport(Algorithm.FIX, AlgStatus.TIME_LIMIT, None, None, 0, 0,
                               time.monotonic() - t0)
    if solved is None:
        return AlgorithmReport(Algorithm.FIX, AlgStatus.INFEASIBLE, None, None, 0, 0,
                               time.monotonic() - t0)
    x_med, doubled_value = solved
    try:
        ev = evaluate_max_regret(inst, x_med, deadline.slice())
    except TimeLimitExceeded:
        return AlgorithmReport(Algorithm.FIX, AlgStatus.TIME_LIMIT, x_med, None, 0, 1,
                               time.monotonic() - t0)
    regret = ev.max_regret
    lb = (regret + 1) // 2
    status = AlgStatus.OPTIMAL if lb == regret else AlgStatus.FEASIBLE
    return AlgorithmReport(
        Algorithm.FIX, status, x_med, regret, lb, 1,
        time.monotonic() - t0,
        trace=(TraceEntry(1, regret, doubled_value / 2.0),),
    )


# -- dual substitution ----------------------------------------------------


def build_ds_model(inst: BipInstance) -> MilpModel:
    """Single-level reformulation: the inner problem's LP dual replaces the
    rival solution.

    Layout: x at 0..n-1 (binary), row duals u at n..n+m-1, bound duals v at
    n+m..n+m+n-1.  Row-sense sign conventions: under maximization LE rows
    give u >= 0, GE rows u <= 0, EQ rows free u; under minimization the
    signs flip (the inner problem's dual is a maximization).
    """
    n = inst.num_vars
    m = len(inst.constraints)
    ncols = n + m + n
    obj = np.zeros(ncols)
    lower = np.zeros(ncols)
    upper = np.ones(ncols)
    upper[n:] = _INF
    is_max = inst.direction is Direction.MAX

    for i, row in enumerate(inst.constraints):
        ui = n + i
        obj[ui] = row.rhs if is_max else -row.rhs
        pos = row.sense is Sense.LE if is_max else row.sense is Sense.GE
        if row.sense is Sense.EQ:
            lower[ui], upper[ui] = -_INF, _INF
        elif pos:
            lower[ui], upper[ui] = 0.0, _INF
        else:
            lower[ui], upper[ui] = -_INF, 0.0
    obj[n + m:] = 1.0
    if is_max:
        obj[:n] = -inst.lo_arr
    else:
        obj[:n] = inst.hi_arr

    dual_terms: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for i, row in enumerate(inst.constraints):
        for j, coef in row.terms:
            dual_terms[j].append((n + i, coef))
    rows = list(inst.constraints)
    span = inst.hi_arr - inst.lo_arr
    for j in range(n):
        if is_max:
            terms = dual_terms[j] + [(n + m + j, 1.0)]
            if span[j]:
                terms.append((j, float(span[j])))
            rows.append(LinearConstraint(tuple(terms), Sense.GE, float(inst.c_hi[j])))
        else:
            terms = dual_terms[j] + [(n + m + j, -1.0)]
            if span[j]:
                terms.append((j, -float(span[j])))
            rows.append(LinearConstraint(tuple(terms), Sense.LE, float(inst.c_lo[j])))

    base = LpModel(
        num_vars=ncols,
        objective=obj,
        direction=Direction.MIN,
        lower=lower,
        upper=upper,
        constraints=tuple(rows),
    )
    return MilpModel(base=base, binary_vars=frozenset(range(n)))


def _extract_bits(outcome: MilpOutcome, n: int) -> BinarySolution:
    return BinarySolution(tuple(int(round(b)) for b in outcome.incumbent[:n]))


def dual_substitution(inst: BipInstance,
                      budget: TimeBudget = TimeBudget.unlimited()) -> AlgorithmReport:
    """Solve the dual-substitution model once and evaluate its solution.

    The model optimum is an upper bound on the optimal max regret; the
    evaluated regret of the extracted solution is at least as tight.
    """
    cfg = IdsConfig(cut_flavor=CutFlavor.BEST_SCENARIO, budget=budget)
    return _ids_loop(inst, cfg, algorithm=Algorithm.DS, max_iterations=1)


def hamming_cut(xhat: BinarySolution, d: int) -> LinearConstraint:
    """Linear row forcing Hamming distance >= d from ``xhat``."""
    if d < 1:
        raise ValueError("Hamming radius d must be >= 1")
    terms = tuple(
        (j, -1.0) if bit else (j, 1.0) for j, bit in enumerate(xhat.bits)
    )
    return LinearConstraint(terms, Sense.GE, float(d - sum(xhat.bits)))


def best_scenario_cut(inst: BipInstance, xhat: BinarySolution) -> LinearConstraint:
    """Exclusion row removing exactly the solutions dominated by ``xhat``.

    Uses the integral tightening of the strict dominance inequality, which
    is why instances carry integer intervals.
    """
    lo, hi = inst.lo_arr, inst.hi_arr
    if not (np.issubdtype(lo.dtype, np.integer) and np.issubdtype(hi.dtype, np.integer)):
        raise NonIntegralData("best-scenario cut needs integer intervals")
    bits = xhat.arr.astype(bool)
    if inst.direction is Direction.MAX:
        coefs = np.where(bits, lo, hi)
        rhs = int(lo[bits].sum()) + 1
        sense = Sense.GE
    else:
        coefs = np.where(bits, hi, lo)
        rhs = int(hi[bits].sum()) - 1
        sense = Sense.LE
    terms = tuple((j, float(c)) for j, c in enumerate(coefs) if c != 0)
    return LinearConstraint(terms, sense, float(rhs))


def dominance_holds(inst: BipInstance, xbar: BinarySolution, xhat: BinarySolution) -> bool:
    """Whether excluding ``xbar`` loses nothing once ``xhat`` is known.

    True when xhat is at least as good as xbar under xbar's own best
    scenario, which certifies r_max(xhat) <= r_max(xbar).
    """
    for sol in (xbar, xhat):
        if not check_feasible(inst, sol):
            raise InfeasibleSolution("dominance test needs feasible solutions")
    s = best_scenario(inst, xbar).arr
    z_hat = int(s @ xhat.arr)
    z_bar = int(s @ xbar.arr)
    if inst.direction is Direction.MAX:
        return z_hat >= z_bar
    return z_hat <= z_bar


def iterated_ds(inst: BipInstance, cfg: IdsConfig) -> AlgorithmReport:
    """Iterate dual substitution, excluding each examined solution.

    Runs until the cut-restricted model goes infeasible or the budget
    expires.  Exhaustive termination is proven optimal for best-scenario
    cuts, for Hamming cuts with d=1, and for Hamming cuts with d>=2 when
    the local exact subroutine covers each excluded shell.
    """
    algorithm = Algorithm.IDS_B if cfg.cut_flavor is CutFlavor.BEST_SCENARIO else Algorithm.IDS_H
    return _ids_loop(inst, cfg, algorithm=algorithm, max_iterations=None)


def _ids_loop(inst, cfg, algorithm, max_iterations):
    deadline = cfg.budget.start()
    t0 = time.monotonic()
    model = build_ds_model(inst)
    n = inst.num_vars
    trace: list[TraceEntry] = []
    best: RegretEvaluation | None = None
    status = AlgStatus.FEASIBLE
    exact_on_exhaustion = (
        cfg.cut_flavor is CutFlavor.BEST_SCENARIO
        or cfg.d == 1
        or cfg.local_exact
    )
    k = 0
    while True:
        if deadline.expired():
            status = AlgStatus.TIME_LIMIT
            break
        k += 1
        try:
            outcome = solve_milp(model, budget=deadline.slice(), integral_objective=False)
        except UnboundedRelaxation:
            # only possible when even the inner LP relaxation is infeasible,
            # which implies an empty feasible set
            status = AlgStatus.INFEASIBLE if k == 1 else AlgStatus.FEASIBLE
            break
        if outcome.status is MilpStatus.INFEASIBLE:
            if k == 1:
                status = AlgStatus.INFEASIBLE
            elif exact_on_exhaustion:
                status = AlgStatus.OPTIMAL
            else:
                status = AlgStatus.FEASIBLE
            break
        if outcome.incumbent is None:
            status = AlgStatus.TIME_LIMIT
            break
        xhat = _extract_bits(outcome, n)
        # an iteration that produced a candidate gets to finish its evaluation
        ev = evaluate_max_regret(inst, xhat)
        trace.append(TraceEntry(k, ev.max_regret, outcome.objective_value))
        if best is None or ev.max_regret < best.max_regret:
            best = ev
        if outcome.status is not MilpStatus.OPTIMAL:
            status = AlgStatus.TIME_LIMIT
            break
        if best.max_regret == 0:
            status = AlgStatus.OPTIMAL
            break
        if max_iterations is not None and k >= max_iterations:
            status = AlgStatus.FEASIBLE
            break
        if cfg.cut_flavor is CutFlavor.BEST_SCENARIO:
            cut = best_scenario_cut(inst, xhat)
        else:
            cut = hamming_cut(xhat, cfg.d)
        model = add_global_constraint(model, cut)
        if cfg.cut_flavor is CutFlavor.HAMMING and cfg.d >= 2 and cfg.local_exact:
            try:
                refined = local_exact_refine(inst, xhat, cfg.d, deadline.slice())
            except TimeLimitExceeded as exc:
                refined = exc.partial
                status = AlgStatus.TIME_LIMIT
                if refined is not None and refined.max_regret < best.max_regret:
                    best = refined
                break
            if refined is not None and refined.max_regret < best.max_regret:
                best = refined
            if best.max_regret == 0:
                status = AlgStatus.OPTIMAL
                break

    if best is None:
        return AlgorithmReport(algorithm, status, None, None, 0, k,
                               time.monotonic() - t0, trace=tuple(trace))
    lb = best.max_regret if status is AlgStatus.OPTIMAL else 0
    return AlgorithmReport(
        algorithm, status, best.solution, best.max_regret, lb, k,
        time.monotonic() - t0, trace=tuple(trace),
    )


# -- branch and cut -------------------------------------------------------


def _benders_cut(inst: BipInstance, rival: BinarySolution, aux: int) -> LinearConstraint:
    """Master row stating the auxiliary variable against one rival solution."""
    span = inst.hi_arr - inst.lo_arr
    bits = rival.arr.astype(bool)
    if inst.direction is Direction.MAX:
        terms = [(aux, 1.0)]
        terms += [(j, float(span[j])) for j in np.flatnonzero(bits) if span[j]]
        rhs = float(inst.hi_arr[bits].sum())
        return LinearConstraint(tuple(terms), Sense.GE, rhs)
    terms = [(aux, 1.0)]
    terms += [(j, -float(span[j])) for j in np.flatnonzero(bits) if span[j]]
    rhs = float(inst.lo_arr[bits].sum())
    return LinearConstraint(tuple(terms), Sense.LE, rhs)


@dataclass
class _BcResult:
    status: AlgStatus
    best: RegretEvaluation | None
    master_bound: float
    rounds: int
    trace: tuple[TraceEntry, ...]
    slave_timeouts: int


def _bc_core(inst: BipInstance, budget: TimeBudget,
             extra_master_rows: tuple[LinearConstraint, ...] = ()) -> _BcResult:
    deadline = budget.start()
    n = inst.num_vars
    is_max = inst.direction is Direction.MAX
    tol = ToleranceSet()

    try:
        seeded = _solve_classical(inst, inst.lo_arr + inst.hi_arr, deadline.slice())
    except TimeLimitExceeded:
        return _BcResult(AlgStatus.TIME_LIMIT, None, -_INF, 0, (), 0)
    if seeded is None:
        return _BcResult(AlgStatus.INFEASIBLE, None, 0.0, 0, (), 0)
    x_seed, _ = seeded

    obj = np.zeros(n + 1)
    lower = np.zeros(n + 1)
    upper = np.ones(n + 1)
    lower[n], upper[n] = -_INF, _INF
    if is_max:
        obj[:n] = -inst.lo_arr
        obj[n] = 1.0
    else:
        obj[:n] = inst.hi_arr
        obj[n] = -1.0
    rows = inst.constraints + tuple(extra_master_rows) + (_benders_cut(inst, x_seed, n),)
    master = MilpModel(
        base=LpModel(
            num_vars=n + 1,
            objective=obj,
            direction=Direction.MIN,
            lower=lower,
            upper=upper,
            constraints=rows,
        ),
        binary_vars=frozenset(range(n)),
    )

    evaluated: dict[tuple[int, ...], RegretEvaluation] = {}
    best: RegretEvaluation | None = None
    rounds = 0
    slave_timeouts = 0
    trace: list[TraceEntry] = []

    if not extra_master_rows:
        try:
            seed_ev = evaluate_max_regret(inst, x_seed, deadline.slice())
            best = seed_ev
        except TimeLimitExceeded:
            return _BcResult(AlgStatus.TIME_LIMIT, None, -_INF, 0, (), 0)

    def provider(cand: np.ndarray) -> LinearConstraint | None:
        nonlocal best, rounds, slave_timeouts
        rounds += 1
        bits = BinarySolution(tuple(int(round(b)) for b in cand[:n]))
        aux_val = float(cand[n])
        scen = worst_scenario(inst, bits)
        own = int(scen.arr @ bits.arr)
        try:
            rival, q = slave_problem(inst, bits, deadline.slice())
        except TimeLimitExceeded as exc:
            slave_timeouts += 1
            if exc.partial is not None:
                y_part, q_part = exc.partial
                violated = q_part > aux_val + tol.duality * (1 + abs(aux_val)) if is_max \
                    else q_part < aux_val - tol.duality * (1 + abs(aux_val))
                if violated:
                    # a suboptimal slave solution still certifies a valid cut
                    return _benders_cut(inst, y_part, n)
            raise
        regret = q - own if is_max else own - q
        ev = RegretEvaluation(bits, scen, q, own, regret, rival)
        evaluated[bits.bits] = ev
        if best is None or regret < best.max_regret:
            best = ev
        master_obj = (aux_val - own) if is_max else (own - aux_val)
        trace.append(TraceEntry(rounds, regret, master_obj))
        eps = tol.duality * (1 + abs(aux_val))
        violated = q > aux_val + eps if is_max else q < aux_val - eps
        if violated:
            return _benders_cut(inst, rival, n)
        return None

    outcome = solve_milp(master, lazy=provider, budget=deadline.slice(),
                         integral_objective=True)
    if outcome.status is MilpStatus.OPTIMAL:
        bits = _extract_bits(outcome, n)
        ev = evaluated[bits.bits]
        return _BcResult(AlgStatus.OPTIMAL, ev, float(ev.max_regret), rounds,
                         tuple(trace), slave_timeouts)
    if outcome.status is MilpStatus.INFEASIBLE:
        # only possible when extra master rows empty out the region
        return _BcResult(AlgStatus.INFEASIBLE, None, 0.0, rounds, tuple(trace),
                         slave_timeouts)
    status = AlgStatus.TIME_LIMIT if best is None else AlgStatus.FEASIBLE
    return _BcResult(status, best, outcome.best_bound, rounds, tuple(trace),
                     slave_timeouts)


def branch_and_cut(inst: BipInstance,
                   budget: TimeBudget = TimeBudget.unlimited()) -> AlgorithmReport:
    """Exact solver: master problem over (x, aux) with lazily separated
    rival-solution rows, seeded with the median fixed-scenario solution.
    """
    t0 = time.monotonic()
    res = _bc_core(inst, budget)
    elapsed = time.monotonic() - t0
    if res.status is AlgStatus.INFEASIBLE:
        return AlgorithmReport(Algorithm.BC, res.status, None, None, 0, res.rounds,
                               elapsed, trace=res.trace)
    if res.best is None:
        return AlgorithmReport(Algorithm.BC, AlgStatus.TIME_LIMIT, None, None, 0,
                               res.rounds, elapsed, trace=res.trace)
    regret = res.best.max_regret
    if res.status is AlgStatus.OPTIMAL:
        lb = regret
    else:
        lb = max(0, (regret + 1) // 2 if res.best is not None else 0)
        if math.isfinite(res.master_bound):
            lb = max(lb, math.ceil(res.master_bound - 1e-6 * (1 + abs(res.master_bound))))
        lb = min(lb, regret)
    return AlgorithmReport(
        Algorithm.BC, res.status, res.best.solution, regret, lb, res.rounds,
        elapsed, trace=res.trace,
    )


def local_exact_refine(inst: BipInstance, xhat: BinarySolution, d: int,
                       budget: TimeBudget = TimeBudget.unlimited()) -> RegretEvaluation | None:
    """Exact search of the Hamming shell 1 <= dist(x, xhat) <= d-1.

    The outer minimization is restricted to the shell while inner regret
    evaluations keep the full feasible set.  Returns None when the shell
    contains no feasible solution.
    """
    if d < 2:
        raise ValueError("local exact refinement needs d >= 2")
    ones = sum(xhat.bits)
    terms = tuple((j, -1.0) if bit else (j, 1.0) for j, bit in enumerate(xhat.bits))
    shell = (
        LinearConstraint(terms, Sense.GE, float(1 - ones)),
        LinearConstraint(terms, Sense.LE, float(d - 1 - ones)),
    )
    res = _bc_core(inst, budget, extra_master_rows=shell)
    if res.status is AlgStatus.INFEASIBLE:
        return None
    if res.status is AlgStatus.OPTIMAL:
        return res.best
    raise TimeLimitExceeded("local exact refinement cut off", partial=res.best)
