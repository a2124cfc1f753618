"""Exhaustive-enumeration reference solver (tests and acceptance only).

Everything here trades speed for independence: no simplex, no
branch-and-bound, just the full 0/1 lattice with vectorized feasibility
filtering, so it can certify the production algorithms.
"""

from __future__ import annotations

import time

import numpy as np

from .core import Direction, Sense
from .errors import InfeasibleSolution, TooLarge
from .mmr import (
    Algorithm,
    AlgorithmReport,
    AlgStatus,
    BinarySolution,
    BipInstance,
    RegretEvaluation,
    Scenario,
    TraceEntry,
    worst_scenario,
)

_MATMUL_CHUNK = 512


def enumerate_feasible(inst: BipInstance, guard: int = 20) -> np.ndarray:
    """All feasible 0/1 vectors, lexicographic by bits (x_0 most significant)."""
    n = inst.num_vars
    if n > guard:
        raise TooLarge(f"enumeration guarded at {guard} variables, instance has {n}")
    count = 1 << n
    ks = np.arange(count, dtype=np.uint64)[:, None]
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint64)[None, :]
    bits = ((ks >> shifts) & 1).astype(np.int64)
    mask = np.ones(count, dtype=bool)
    for row in inst.constraints:
        idx = np.array([j for j, _ in row.terms], dtype=np.int64)
        coef = np.array([c for _, c in row.terms], dtype=np.int64)
        lhs = bits[:, idx] @ coef if len(idx) else np.zeros(count, dtype=np.int64)
        rhs = int(row.rhs)
        if row.sense is Sense.LE:
            mask &= lhs <= rhs
        elif row.sense is Sense.GE:
            mask &= lhs >= rhs
        else:
            mask &= lhs == rhs
    return bits[mask]


def _inner_extreme(scenarios: np.ndarray, feasible: np.ndarray, direction: Direction):
    """Row-wise best rival value: for scenario matrix S (k x n) return the
    max/min of S @ F.T over the feasible set F, chunked to bound memory."""
    k = scenarios.shape[0]
    out = np.empty(k)
    arg = np.empty(k, dtype=np.int64)
    ft = feasible.T.astype(float)
    for start in range(0, k, _MATMUL_CHUNK):
        stop = min(start + _MATMUL_CHUNK, k)
        vals = scenarios[start:stop].astype(float) @ ft
        if direction is Direction.MAX:
            arg[start:stop] = np.argmax(vals, axis=1)
        else:
            arg[start:stop] = np.argmin(vals, axis=1)
        out[start:stop] = vals[np.arange(stop - start), arg[start:stop]]
    return out.astype(np.int64), arg


def brute_force_max_regret(inst: BipInstance, x: BinarySolution) -> RegretEvaluation:
    """Exact max regret of ``x`` by enumerating every rival solution."""
    feasible = enumerate_feasible(inst, guard=20)
    if len(x) != inst.num_vars or not _row_member(feasible, x.arr):
        raise InfeasibleSolution("candidate is not feasible for the instance")
    scen = worst_scenario(inst, x)
    vals = feasible @ scen.arr
    pick = int(np.argmax(vals)) if inst.direction is Direction.MAX else int(np.argmin(vals))
    inner = int(vals[pick])
    own = int(scen.arr @ x.arr)
    regret = inner - own if inst.direction is Direction.MAX else own - inner
    return RegretEvaluation(
        solution=x,
        worst_scenario=scen,
        inner_optimum=inner,
        own_value=own,
        max_regret=regret,
        rival=BinarySolution(tuple(int(b) for b in feasible[pick])),
    )


def _row_member(matrix: np.ndarray, row: np.ndarray) -> bool:
    return bool(len(matrix)) and bool(np.any(np.all(matrix == row, axis=1)))


def _all_regrets(inst: BipInstance, feasible: np.ndarray):
    if inst.direction is Direction.MAX:
        scen = np.where(feasible == 1, inst.lo_arr, inst.hi_arr)
    else:
        scen = np.where(feasible == 1, inst.hi_arr, inst.lo_arr)
    inner, _ = _inner_extreme(scen, feasible, inst.direction)
    own = (scen * feasible).sum(axis=1)
    regrets = inner - own if inst.direction is Direction.MAX else own - inner
    return regrets


def brute_force_mmr(inst: BipInstance, guard: int = 14) -> AlgorithmReport:
    """Exact optimum by enumerating both the outer and the inner problem.

    Ties go to the lexicographically-smallest optimal solution, so golden
    outputs stay reproducible.
    """
    if inst.num_vars > guard:
        raise TooLarge(f"double enumeration guarded at {guard} variables")
    t0 = time.monotonic()
    feasible = enumerate_feasible(inst, guard=guard)
    if not len(feasible):
        return AlgorithmReport(Algorithm.ORACLE, AlgStatus.INFEASIBLE, None, None,
                               0, 0, time.monotonic() - t0)
    regrets = _all_regrets(inst, feasible)
    pick = int(np.argmin(regrets))
    opt = int(regrets[pick])
    sol = BinarySolution(tuple(int(b) for b in feasible[pick]))
    return AlgorithmReport(
        Algorithm.ORACLE, AlgStatus.OPTIMAL, sol, opt, opt, 1,
        time.monotonic() - t0,
        trace=(TraceEntry(1, opt, float(opt)),),
    )


def brute_force_all_optima(inst: BipInstance, guard: int = 14) -> tuple[BinarySolution, ...]:
    """Every optimal solution, in lexicographic order (for equivariance checks)."""
    if inst.num_vars > guard:
        raise TooLarge(f"double enumeration guarded at {guard} variables")
    feasible = enumerate_feasible(inst, guard=guard)
    if not len(feasible):
        return ()
    regrets = _all_regrets(inst, feasible)
    opt = regrets.min()
    return tuple(
        BinarySolution(tuple(int(b) for b in feasible[i]))
        for i in np.flatnonzero(regrets == opt)
    )
