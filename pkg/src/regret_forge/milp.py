"""Branch-and-bound over LP relaxations, with lazy constraint callbacks.

Node selection is best-bound with depth-first dives so incumbents appear
early; branching picks the most fractional binary (ties to the lowest
index).  Lazy cuts returned by the callback become part of the global row
set and therefore constrain every open node from that point on.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable

import numpy as np

from .core import Direction, LinearConstraint, TimeBudget, ToleranceSet
from .errors import TimeLimitExceeded, UnboundedRelaxation
from .lp import KernelResult, LpModel, LpStatus, SimplexKernel

# a provider returns None to accept the candidate, or a violated cut
LazyCutProvider = Callable[[np.ndarray], LinearConstraint | None]


class MilpStatus(Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    TIME_LIMIT = "time_limit"


@dataclass(frozen=True)
class MilpModel:
    base: LpModel
    binary_vars: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "binary_vars", frozenset(self.binary_vars))
        for j in self.binary_vars:
            if not 0 <= j < self.base.num_vars:
                raise ValueError(f"binary index {j} out of range")
            if self.base.lower[j] < -1e-12 or self.base.upper[j] > 1 + 1e-12:
                raise ValueError(f"binary variable {j} must have bounds within [0, 1]")


@dataclass
class MilpOutcome:
    status: MilpStatus
    incumbent: np.ndarray | None
    objective_value: float | None
    best_bound: float
    nodes_explored: int
    cuts_added: int


def add_global_constraint(model: MilpModel, c: LinearConstraint) -> MilpModel:
    """New model whose feasible set is intersected with ``c``."""
    for j, _ in c.terms:
        if not 0 <= j < model.base.num_vars:
            raise ValueError(f"constraint references variable {j} out of range")
    base = replace(model.base, constraints=model.base.constraints + (c,))
    return MilpModel(base=base, binary_vars=model.binary_vars)


def _infer_integral_objective(model: MilpModel) -> bool:
    obj = model.base.objective
    for j in range(model.base.num_vars):
        if obj[j] == 0.0:
            continue
        if j not in model.binary_vars or obj[j] != round(obj[j]):
            return False
    return True


class _Node:
    __slots__ = ("fixes", "warm", "bound", "seen")

    def __init__(self, fixes, warm, bound):
        self.fixes = fixes  # linked tuple (var, value, parent_fixes)
        self.warm = warm
        self.bound = bound  # parent LP bound, valid for the subtree
        self.seen = False


def solve_milp(
    model: MilpModel,
    lazy: LazyCutProvider | None = None,
    budget: TimeBudget = TimeBudget.unlimited(),
    tol: ToleranceSet | None = None,
    integral_objective: bool | None = None,
) -> MilpOutcome:
    """Solve to optimality or until the budget runs out.

    ``integral_objective`` asserts that every integer-feasible point has an
    integral objective value, enabling ceil/floor bound rounding.  Left as
    ``None`` it is inferred statically, which is only safe when the
    objective is supported on integer-coefficient binaries.
    """
    tol = tol or ToleranceSet()
    deadline = budget.start()
    base = model.base
    n = base.num_vars
    binaries = np.array(sorted(model.binary_vars), dtype=np.int64)
    if integral_objective is None:
        integral_objective = _infer_integral_objective(model)
    sgn = 1.0 if base.direction is Direction.MIN else -1.0

    kern = SimplexKernel(base.objective, base.direction, base.constraints, n, tol)
    root_lower = np.asarray(base.lower, dtype=float).copy()
    root_upper = np.asarray(base.upper, dtype=float).copy()

    incumbent = None
    incumbent_obj = None
    nodes_explored = 0
    cuts_added = 0
    counter = 0
    heap: list[tuple[float, int, _Node]] = []
    current: _Node | None = _Node(None, None, -sgn * math.inf)
    timed_out = False

    def materialize(fixes):
        lo = root_lower.copy()
        up = root_upper.copy()
        link = fixes
        while link is not None:
            j, v, link = link
            lo[j] = v
            up[j] = v
        return lo, up

    def improves(obj_value):
        if incumbent_obj is None:
            return True
        return sgn * obj_value < sgn * incumbent_obj - 1e-9 * (1 + abs(incumbent_obj))

    def subtree_hopeless(bound):
        if incumbent_obj is None:
            return False
        eff = bound
        if integral_objective and math.isfinite(bound):
            eps = 1e-6 * (1 + abs(bound))
            eff = math.ceil(bound - eps) if sgn > 0 else math.floor(bound + eps)
        return sgn * eff >= sgn * incumbent_obj - 1e-9 * (1 + abs(incumbent_obj))

    def open_bound():
        cands = [sgn * node.bound for _, _, node in heap]
        if current is not None:
            cands.append(sgn * current.bound)
        if not cands:
            return incumbent_obj if incumbent_obj is not None else -sgn * math.inf
        return sgn * min(cands)

    try:
        while True:
            if deadline.expired():
                timed_out = True
                break
            if current is None:
                if not heap:
                    break
                _, _, node = heapq.heappop(heap)
                if subtree_hopeless(node.bound):
                    continue
                current = node

            lo, up = materialize(current.fixes)
            warm = current.warm
            if warm is not None and warm.basis is not None:
                warm = _extend_warm(warm, kern.num_rows, n)
            res = kern.solve(lo, up, warm=warm)
            if not current.seen:
                current.seen = True
                nodes_explored += 1
            if res.status is LpStatus.INFEASIBLE:
                current = None
                continue
            if res.status is LpStatus.UNBOUNDED:
                raise UnboundedRelaxation("node LP relaxation is unbounded")
            bound = res.objective
            current.bound = bound
            if subtree_hopeless(bound):
                current = None
                continue

            x = res.x
            if len(binaries):
                frac = np.abs(x[binaries] - np.round(x[binaries]))
                worst = int(np.argmax(frac))
                max_frac = float(frac[worst])
            else:
                max_frac = 0.0

            def branch_on(worst_idx, res_, bound_):
                nonlocal counter, current
                j = int(binaries[worst_idx])
                go_up = x[j] >= 0.5
                near = _Node((j, 1.0 if go_up else 0.0, current.fixes), res_, bound_)
                far = _Node((j, 0.0 if go_up else 1.0, current.fixes), res_, bound_)
                counter += 1
                heapq.heappush(heap, (sgn * bound_, counter, far))
                current = near

            if max_frac > tol.integrality:
                branch_on(worst, res, bound)
                continue

            # integer-feasible candidate
            cand = x.copy()
            if len(binaries):
                cand[binaries] = np.round(cand[binaries])
                if max_frac > 0.0:
                    # re-solve with binaries pinned for an exact completion
                    pin_lo, pin_up = lo.copy(), up.copy()
                    pin_lo[binaries] = cand[binaries]
                    pin_up[binaries] = cand[binaries]
                    pinned = kern.solve(pin_lo, pin_up, warm=res)
                    if pinned.status is not LpStatus.OPTIMAL:
                        # rounding left the node region: split on the offender
                        branch_on(worst, res, bound)
                        continue
                    cand = pinned.x.copy()
                    cand[binaries] = np.round(cand[binaries])
                    res = pinned
            cand_obj = float(base.objective @ cand)

            if lazy is not None:
                cut = lazy(cand)
                if cut is not None:
                    if cut.violation(cand) <= tol.feasibility * (1 + abs(cut.rhs)):
                        raise ValueError("lazy provider returned a non-violated cut")
                    kern.add_row(cut)
                    cuts_added += 1
                    current.warm = res
                    # same node, re-solved against the enlarged row set
                    continue
            if improves(cand_obj):
                incumbent = cand
                incumbent_obj = cand_obj
            current = None
    except TimeLimitExceeded:
        timed_out = True

    if timed_out:
        status = MilpStatus.FEASIBLE if incumbent is not None else MilpStatus.TIME_LIMIT
        best_bound = open_bound()
    elif incumbent is not None:
        status = MilpStatus.OPTIMAL
        best_bound = incumbent_obj
    else:
        status = MilpStatus.INFEASIBLE
        best_bound = sgn * math.inf
    return MilpOutcome(
        status=status,
        incumbent=incumbent,
        objective_value=incumbent_obj,
        best_bound=best_bound,
        nodes_explored=nodes_explored,
        cuts_added=cuts_added,
    )


def _extend_warm(res: KernelResult, num_rows: int, num_vars: int) -> KernelResult:
    """Adapt a warm basis to a kernel that has grown by appended rows."""
    m_old = len(res.basis)
    extra = num_rows - m_old
    if extra <= 0:
        return res
    # new slack columns sit at the end; make them basic for their own rows
    vstat = np.concatenate([res.vstat, np.full(extra, 2, dtype=np.int8)])
    new_slacks = np.arange(num_vars + m_old, num_vars + num_rows, dtype=np.int64)
    basis = np.concatenate([res.basis, new_slacks])
    return KernelResult(status=res.status, basis=basis, vstat=vstat)
