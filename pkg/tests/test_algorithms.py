import itertools

import numpy as np
import pytest

from regret_forge.core import Direction, Sense, TimeBudget
from regret_forge.errors import TimeLimitExceeded
from regret_forge.milp import MilpStatus, solve_milp
from regret_forge.mmr import (
    AlgStatus,
    Algorithm,
    BinarySolution,
    CutFlavor,
    IdsConfig,
    branch_and_cut,
    build_ds_model,
    dual_substitution,
    evaluate_max_regret,
    fixed_scenario,
    iterated_ds,
    local_exact_refine,
    slave_problem,
    worst_scenario,
)
from regret_forge.instances import gen_desk_instance
from regret_forge.oracle import brute_force_max_regret, brute_force_mmr, enumerate_feasible

from conftest import bits, make_instance


def desk(direction, seed, delta=0.1):
    return gen_desk_instance(direction, seed, delta)


# -- fixed scenario ---------------------------------------------------------

def test_fix_degenerate_intervals_optimal():
    inst = make_instance(Direction.MAX, [(3, 3), (8, 8)], [([1, 1], Sense.LE, 1)])
    rep = fixed_scenario(inst)
    assert rep.status is AlgStatus.OPTIMAL
    assert rep.max_regret == 0
    assert rep.lower_bound == 0


def test_fix_two_item(two_item_kp):
    rep = fixed_scenario(two_item_kp)
    assert rep.max_regret == 2
    assert rep.lower_bound == 1
    assert rep.status is AlgStatus.FEASIBLE
    assert sum(rep.incumbent.bits) == 1


def test_fix_infeasible():
    inst = make_instance(Direction.MAX, [(1, 2)], [([1], Sense.GE, 2)])
    assert fixed_scenario(inst).status is AlgStatus.INFEASIBLE


@pytest.mark.parametrize("direction", [Direction.MAX, Direction.MIN])
def test_fix_two_approximation(direction):
    for seed in range(25):
        inst = desk(direction, 9000 + seed, delta=0.3)
        oracle = brute_force_mmr(inst)
        rep = fixed_scenario(inst)
        assert rep.status in (AlgStatus.OPTIMAL, AlgStatus.FEASIBLE)
        assert rep.max_regret <= 2 * oracle.max_regret
        assert rep.lower_bound <= oracle.max_regret


# -- dual substitution -------------------------------------------------------

def test_ds_model_dimensions():
    inst = make_instance(Direction.MAX, [(1, 3), (2, 5), (0, 4)], [([1, 2, 3], Sense.LE, 5)])
    model = build_ds_model(inst)
    n, m = 3, 1
    assert model.base.num_vars == n + m + n
    assert model.binary_vars == frozenset(range(n))
    assert len(model.base.constraints) == m + n  # original rows plus dual rows


def test_ds_degenerate_tight_relaxation_gives_zero():
    # 2x2 assignment-style equality instance: totally unimodular
    inst = make_instance(
        Direction.MIN, [(4, 4), (1, 1), (2, 2), (9, 9)],
        [
            ([1, 1, 0, 0], Sense.EQ, 1),
            ([0, 0, 1, 1], Sense.EQ, 1),
            ([1, 0, 1, 0], Sense.LE, 1),
            ([0, 1, 0, 1], Sense.LE, 1),
        ],
    )
    rep = dual_substitution(inst)
    assert rep.status is AlgStatus.OPTIMAL
    assert rep.max_regret == 0
    assert rep.trace[0].model_objective == pytest.approx(0.0, abs=1e-7)


@pytest.mark.parametrize("direction", [Direction.MAX, Direction.MIN])
def test_ds_remark_bounds(direction):
    for seed in range(20):
        inst = desk(direction, 4242 + seed, delta=0.3)
        oracle = brute_force_mmr(inst)
        rep = dual_substitution(inst)
        model_obj = rep.trace[0].model_objective
        slack = 1e-6 * (1 + abs(model_obj))
        assert model_obj >= oracle.max_regret - slack  # upper bound on the optimum
        assert rep.max_regret <= model_obj + slack     # evaluation tightens it
        assert rep.max_regret >= oracle.max_regret


def test_ds_infeasible_instance():
    inst = make_instance(Direction.MAX, [(1, 2), (3, 4)],
                         [([1, 0], Sense.GE, 1), ([1, 0], Sense.LE, 0)])
    assert dual_substitution(inst).status is AlgStatus.INFEASIBLE


# -- iterated dual substitution ----------------------------------------------

def test_ids_degenerate_stops_first_iteration():
    inst = make_instance(Direction.MAX, [(3, 3), (8, 8)], [([1, 1], Sense.LE, 1)])
    rep = iterated_ds(inst, IdsConfig(cut_flavor=CutFlavor.BEST_SCENARIO))
    assert rep.status is AlgStatus.OPTIMAL
    assert rep.max_regret == 0
    assert rep.iterations == 1


@pytest.mark.parametrize(
    "flavor,d,local",
    [
        (CutFlavor.BEST_SCENARIO, 1, False),
        (CutFlavor.HAMMING, 1, False),
        (CutFlavor.HAMMING, 2, True),
        (CutFlavor.HAMMING, 3, True),
    ],
)
def test_ids_exhaustive_exactness(flavor, d, local):
    for seed, direction in (
        (11, Direction.MAX), (12, Direction.MIN), (13, Direction.MAX), (14, Direction.MIN)
    ):
        inst = desk(direction, seed)
        oracle = brute_force_mmr(inst)
        rep = iterated_ds(inst, IdsConfig(cut_flavor=flavor, d=d, local_exact=local))
        assert rep.status is AlgStatus.OPTIMAL
        assert rep.max_regret == oracle.max_regret
        assert rep.lower_bound == rep.max_regret


def test_ids_hamming_without_local_exact_is_heuristic_status():
    inst = desk(Direction.MAX, 202)
    rep = iterated_ds(inst, IdsConfig(cut_flavor=CutFlavor.HAMMING, d=3, local_exact=False))
    # may exhaust the space but must not claim optimality for d >= 2 alone,
    # unless it proved regret zero
    if rep.max_regret and rep.max_regret > 0:
        assert rep.status in (AlgStatus.FEASIBLE, AlgStatus.TIME_LIMIT)
    assert rep.max_regret >= brute_force_mmr(inst).max_regret


def test_ids_monotone_incumbent_trace():
    for seed in (5, 6, 7):
        inst = desk(Direction.MIN, seed)
        rep = iterated_ds(inst, IdsConfig(cut_flavor=CutFlavor.HAMMING, d=1))
        best = None
        for entry in rep.trace:
            if best is not None:
                assert min(best, entry.candidate_regret) <= best
            best = entry.candidate_regret if best is None else min(best, entry.candidate_regret)
        assert best == rep.max_regret


def test_ids_time_limit_keeps_incumbent():
    inst = desk(Direction.MAX, 404)
    rep = iterated_ds(inst, IdsConfig(cut_flavor=CutFlavor.HAMMING, d=1,
                                      budget=TimeBudget(0.05)))
    assert rep.status in (AlgStatus.TIME_LIMIT, AlgStatus.OPTIMAL)
    if rep.status is AlgStatus.TIME_LIMIT and rep.trace:
        assert rep.incumbent is not None


# -- local exact refinement ---------------------------------------------------

def test_local_exact_d2_equals_best_flip():
    inst = desk(Direction.MAX, 55)
    feas = enumerate_feasible(inst)
    xhat = BinarySolution(tuple(int(b) for b in feas[len(feas) // 2]))
    got = local_exact_refine(inst, xhat, 2)
    flips = []
    for j in range(inst.num_vars):
        flipped = list(xhat.bits)
        flipped[j] = 1 - flipped[j]
        v = np.array(flipped)
        if any(np.array_equal(v, f) for f in feas):
            flips.append(brute_force_max_regret(inst, BinarySolution(tuple(flipped))).max_regret)
    if not flips:
        assert got is None
    else:
        assert got is not None
        assert got.max_regret == min(flips)


def test_local_exact_shell_matches_brute_force():
    inst = desk(Direction.MIN, 58)
    feas = enumerate_feasible(inst)
    xhat = BinarySolution(tuple(int(b) for b in feas[0]))
    d = 3
    got = local_exact_refine(inst, xhat, d)
    shell = []
    for v in feas:
        dist = int(np.sum(np.abs(v - xhat.arr)))
        if 1 <= dist <= d - 1:
            shell.append(brute_force_max_regret(inst, BinarySolution(tuple(int(b) for b in v))).max_regret)
    if not shell:
        assert got is None
    else:
        assert got.max_regret == min(shell)


def test_local_exact_empty_shell():
    # only feasible point is (1, 1): flipping any single bit is infeasible
    inst = make_instance(
        Direction.MAX, [(1, 2), (1, 2)],
        [([1, 0], Sense.GE, 1), ([0, 1], Sense.GE, 1)],
    )
    assert local_exact_refine(inst, bits(1, 1), 2) is None


def test_local_exact_requires_d_at_least_two():
    inst = make_instance(Direction.MAX, [(1, 2)], [])
    with pytest.raises(ValueError):
        local_exact_refine(inst, bits(0), 1)


# -- branch and cut ------------------------------------------------------------

def test_bc_degenerate_zero():
    inst = make_instance(
        Direction.MIN, [(4, 4), (1, 1)],
        [([1, 1], Sense.EQ, 1)],
    )
    rep = branch_and_cut(inst)
    assert rep.status is AlgStatus.OPTIMAL
    assert rep.max_regret == 0
    assert rep.lower_bound == 0


@pytest.mark.parametrize("direction", [Direction.MAX, Direction.MIN])
def test_bc_matches_oracle(direction):
    for seed in range(15):
        inst = desk(direction, 31000 + seed, delta=0.3)
        oracle = brute_force_mmr(inst)
        rep = branch_and_cut(inst)
        assert rep.status is AlgStatus.OPTIMAL
        assert rep.max_regret == oracle.max_regret
        assert rep.lower_bound == oracle.max_regret


def test_bc_infeasible():
    inst = make_instance(Direction.MAX, [(1, 2)], [([1], Sense.GE, 2)])
    assert branch_and_cut(inst).status is AlgStatus.INFEASIBLE


def test_bc_budget_reports_feasible_with_bound():
    inst = desk(Direction.MAX, 606)
    rep = branch_and_cut(inst, TimeBudget(0.02))
    oracle = brute_force_mmr(inst)
    assert rep.status in (AlgStatus.OPTIMAL, AlgStatus.FEASIBLE, AlgStatus.TIME_LIMIT)
    if rep.max_regret is not None:
        assert rep.max_regret >= oracle.max_regret
        assert rep.lower_bound <= oracle.max_regret


# -- slave problem --------------------------------------------------------------

def test_slave_problem_examples(two_item_kp):
    y, q = slave_problem(two_item_kp, bits(1, 0))
    assert y.bits == (0, 1)
    assert q == 6

    degenerate = make_instance(Direction.MAX, [(5, 5), (7, 7)], [([2, 3], Sense.LE, 5)])
    _, q2 = slave_problem(degenerate, bits(0, 0))
    assert q2 == 12  # classical optimum under fixed costs


def test_slave_shares_inner_solve_with_evaluation(two_item_kp):
    x = bits(1, 0)
    ev = evaluate_max_regret(two_item_kp, x)
    y, q = slave_problem(two_item_kp, x)
    assert q == ev.inner_optimum
    assert y == ev.rival


# -- scaling equivariance ---------------------------------------------------------

@pytest.mark.parametrize("k", [2, 5])
def test_positive_scaling_equivariance(k):
    from dataclasses import replace

    for seed in (71, 72):
        inst = desk(Direction.MAX, seed)
        scaled = replace(inst, c_lo=tuple(k * v for v in inst.c_lo),
                         c_hi=tuple(k * v for v in inst.c_hi))
        base = branch_and_cut(inst)
        big = branch_and_cut(scaled)
        assert big.max_regret == k * base.max_regret
