import numpy as np
import pytest

from regret_forge.core import Direction, Sense
from regret_forge.errors import InfeasibleSolution, TooLarge
from regret_forge.mmr import AlgStatus, BinarySolution, evaluate_max_regret
from regret_forge.instances import gen_desk_instance
from regret_forge.oracle import (
    brute_force_all_optima,
    brute_force_max_regret,
    brute_force_mmr,
    enumerate_feasible,
)

from conftest import bits, make_instance


def test_single_item_choosing_dominates():
    inst = make_instance(Direction.MAX, [(2, 4)], [])
    rep = brute_force_mmr(inst)
    assert rep.status is AlgStatus.OPTIMAL
    assert rep.max_regret == 0
    assert rep.incumbent.bits == (1,)


def test_two_item_optimum(two_item_kp):
    rep = brute_force_mmr(two_item_kp)
    assert rep.max_regret == 2


def test_empty_feasible_set():
    inst = make_instance(Direction.MAX, [(1, 2)], [([1], Sense.GE, 2)])
    assert brute_force_mmr(inst).status is AlgStatus.INFEASIBLE


def test_degenerate_plus_optimal_solution_is_zero():
    inst = make_instance(Direction.MAX, [(5, 5), (7, 7)], [([2, 3], Sense.LE, 5)])
    assert brute_force_max_regret(inst, bits(1, 1)).max_regret == 0


def test_infeasible_candidate_rejected(two_item_kp):
    with pytest.raises(InfeasibleSolution):
        brute_force_max_regret(two_item_kp, bits(1, 1))


def test_guards():
    big = make_instance(Direction.MAX, [(1, 2)] * 15, [])
    with pytest.raises(TooLarge):
        brute_force_mmr(big)
    huge = make_instance(Direction.MAX, [(1, 2)] * 21, [])
    with pytest.raises(TooLarge):
        brute_force_max_regret(huge, BinarySolution((0,) * 21))


def test_matches_milp_evaluation_on_random_pairs():
    checked = 0
    for seed in range(40):
        direction = Direction.MAX if seed % 2 else Direction.MIN
        inst = gen_desk_instance(direction, 600 + seed, delta=0.3)
        feas = enumerate_feasible(inst)
        if not len(feas):
            continue
        step = max(1, len(feas) // 5)
        for row in feas[::step]:
            x = BinarySolution(tuple(int(b) for b in row))
            checked += 1
            assert (brute_force_max_regret(inst, x).max_regret
                    == evaluate_max_regret(inst, x).max_regret)
    assert checked >= 100


def test_lexicographic_tie_break():
    # symmetric items: both singletons optimal; oracle must return (0, 1)... or
    # rather the lexicographically-smallest optimum, which is (0, 1) only if
    # (1, 0) is not better; with identical intervals both tie.
    inst = make_instance(Direction.MAX, [(4, 6), (4, 6)], [([1, 1], Sense.LE, 1)])
    rep = brute_force_mmr(inst)
    optima = brute_force_all_optima(inst)
    assert rep.incumbent == optima[0]
    assert [o.bits for o in optima] == sorted(o.bits for o in optima)
    assert rep.incumbent.bits == (0, 1)


def test_all_optima_scaling_invariance():
    from dataclasses import replace

    for seed in (80, 81, 82):
        inst = gen_desk_instance(Direction.MIN, seed)
        scaled = replace(inst, c_lo=tuple(3 * v for v in inst.c_lo),
                         c_hi=tuple(3 * v for v in inst.c_hi))
        assert brute_force_all_optima(inst) == brute_force_all_optima(scaled)
        assert brute_force_mmr(scaled).max_regret == 3 * brute_force_mmr(inst).max_regret
