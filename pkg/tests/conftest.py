import numpy as np
import pytest

from regret_forge.core import Direction, LinearConstraint, Sense
from regret_forge.mmr import BinarySolution, BipInstance


def make_instance(direction, intervals, rows, name="test"):
    """Build a BipInstance from interval pairs and (coefs, sense, rhs) rows."""
    cons = tuple(
        LinearConstraint(
            tuple((j, float(c)) for j, c in enumerate(coefs) if c != 0),
            sense,
            float(rhs),
        )
        for coefs, sense, rhs in rows
    )
    return BipInstance(
        num_vars=len(intervals),
        direction=direction,
        c_lo=tuple(lo for lo, _ in intervals),
        c_hi=tuple(hi for _, hi in intervals),
        constraints=cons,
        name=name,
    )


def bits(*values):
    return BinarySolution(tuple(values))


@pytest.fixture
def two_item_kp():
    """The canonical 2-item example: intervals [(4,6),(4,6)], one slot."""
    return make_instance(Direction.MAX, [(4, 6), (4, 6)], [([1, 1], Sense.LE, 1)])
