"""Encoders turning the four benchmark problems into BipInstance form."""

from __future__ import annotations

from dataclasses import dataclass

from .core import Direction, LinearConstraint, Sense
from .errors import EmptyFeasibleRegion
from .mmr import BinarySolution, BipInstance


@dataclass(frozen=True)
class KpSpec:
    """Knapsack: pick items maximizing value within one capacity."""

    weights: tuple[int, ...]
    capacity: int
    c_lo: tuple[int, ...]
    c_hi: tuple[int, ...]
    name: str = "kp"

    def __post_init__(self):
        if any(w < 1 for w in self.weights):
            raise ValueError("knapsack weights must be >= 1")
        if self.capacity < 0:
            raise ValueError("knapsack capacity must be >= 0")
        if not len(self.weights) == len(self.c_lo) == len(self.c_hi):
            raise ValueError("weights and value intervals must align")


@dataclass(frozen=True)
class MkpSpec:
    """Multidimensional knapsack: m resource rows, shared capacity per row."""

    resources: tuple[tuple[int, ...], ...]  # m rows of n entries
    capacities: tuple[int, ...]
    c_lo: tuple[int, ...]
    c_hi: tuple[int, ...]
    name: str = "mkp"

    def __post_init__(self):
        if any(v < 0 for row in self.resources for v in row):
            raise ValueError("resource matrix must be nonnegative")
        if any(b < 0 for b in self.capacities):
            raise ValueError("capacities must be >= 0")
        if len(self.resources) != len(self.capacities):
            raise ValueError("one capacity per resource row")


@dataclass(frozen=True)
class ScpSpec:
    """Set covering: rows are elements, columns are subsets with costs."""

    num_cols: int
    cover_rows: tuple[tuple[int, ...], ...]  # per element, covering column ids
    c_lo: tuple[int, ...]
    c_hi: tuple[int, ...]
    name: str = "scp"

    def __post_init__(self):
        for cols in self.cover_rows:
            for j in cols:
                if not 0 <= j < self.num_cols:
                    raise ValueError("cover entry out of range")


@dataclass(frozen=True)
class GapSpec:
    """Generalized assignment: agents x jobs, interval costs per pair."""

    num_agents: int
    num_jobs: int
    resources: tuple[tuple[int, ...], ...]  # agent-major, m x n
    capacities: tuple[int, ...]
    c_lo: tuple[tuple[int, ...], ...]  # agent-major
    c_hi: tuple[tuple[int, ...], ...]
    name: str = "gap"

    def __post_init__(self):
        if any(v < 1 for row in self.resources for v in row):
            raise ValueError("resources must be positive")
        if any(b < 1 for b in self.capacities):
            raise ValueError("capacities must be positive")


def encode_kp(spec: KpSpec) -> BipInstance:
    row = LinearConstraint(
        tuple((j, float(w)) for j, w in enumerate(spec.weights)),
        Sense.LE,
        float(spec.capacity),
    )
    return BipInstance(
        num_vars=len(spec.weights),
        direction=Direction.MAX,
        c_lo=spec.c_lo,
        c_hi=spec.c_hi,
        constraints=(row,),
        name=spec.name,
    )


def encode_mkp(spec: MkpSpec) -> BipInstance:
    rows = tuple(
        LinearConstraint(
            tuple((j, float(a)) for j, a in enumerate(res) if a),
            Sense.LE,
            float(b),
        )
        for res, b in zip(spec.resources, spec.capacities)
    )
    return BipInstance(
        num_vars=len(spec.c_lo),
        direction=Direction.MAX,
        c_lo=spec.c_lo,
        c_hi=spec.c_hi,
        constraints=rows,
        name=spec.name,
    )


def encode_scp(spec: ScpSpec) -> BipInstance:
    rows = []
    for i, cols in enumerate(spec.cover_rows):
        if not cols:
            raise EmptyFeasibleRegion(f"element {i} is covered by no subset")
        rows.append(LinearConstraint(
            tuple((j, 1.0) for j in sorted(cols)), Sense.GE, 1.0))
    return BipInstance(
        num_vars=spec.num_cols,
        direction=Direction.MIN,
        c_lo=spec.c_lo,
        c_hi=spec.c_hi,
        constraints=tuple(rows),
        name=spec.name,
    )


def gap_var(spec: GapSpec, agent: int, job: int) -> int:
    """Flattened variable index of assignment (agent, job)."""
    return agent * spec.num_jobs + job


def encode_gap(spec: GapSpec) -> BipInstance:
    m, n = spec.num_agents, spec.num_jobs
    rows = []
    for i in range(m):
        rows.append(LinearConstraint(
            tuple((gap_var(spec, i, j), float(spec.resources[i][j])) for j in range(n)),
            Sense.LE,
            float(spec.capacities[i]),
        ))
    for j in range(n):
        rows.append(LinearConstraint(
            tuple((gap_var(spec, i, j), 1.0) for i in range(m)),
            Sense.EQ,
            1.0,
        ))
    return BipInstance(
        num_vars=m * n,
        direction=Direction.MIN,
        c_lo=tuple(v for row in spec.c_lo for v in row),
        c_hi=tuple(v for row in spec.c_hi for v in row),
        constraints=tuple(rows),
        name=spec.name,
    )


def decode_gap_assignment(spec: GapSpec, sol: BinarySolution) -> tuple[int, ...]:
    """Per-job agent index recovered from a flattened solution."""
    out = []
    for j in range(spec.num_jobs):
        hits = [i for i in range(spec.num_agents) if sol.bits[gap_var(spec, i, j)]]
        if len(hits) != 1:
            raise ValueError(f"job {j} assigned {len(hits)} times")
        out.append(hits[0])
    return tuple(out)
