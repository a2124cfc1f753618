"""Shared value types: directions, senses, constraints, tolerances, budgets."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum


class Direction(Enum):
    MIN = "min"
    MAX = "max"


class Sense(Enum):
    LE = "<="
    GE = ">="
    EQ = "=="


@dataclass(frozen=True)
class LinearConstraint:
    """Sparse linear row ``sum(coef * x[idx]) sense rhs``.

    ``terms`` is a tuple of ``(variable index, coefficient)`` pairs with
    distinct indices.
    """

    terms: tuple[tuple[int, float], ...]
    sense: Sense
    rhs: float

    def __post_init__(self):
        terms = tuple((int(i), float(c)) for i, c in self.terms)
        object.__setattr__(self, "terms", terms)
        if len({i for i, _ in terms}) != len(terms):
            raise ValueError("duplicate variable index in constraint row")
        if not math.isfinite(self.rhs):
            raise ValueError("constraint rhs must be finite")

    def evaluate(self, x) -> float:
        return sum(c * x[i] for i, c in self.terms)

    def satisfied_by(self, x, tol: float = 0.0) -> bool:
        lhs = self.evaluate(x)
        if self.sense is Sense.LE:
            return lhs <= self.rhs + tol
        if self.sense is Sense.GE:
            return lhs >= self.rhs - tol
        return abs(lhs - self.rhs) <= tol

    def violation(self, x) -> float:
        lhs = self.evaluate(x)
        if self.sense is Sense.LE:
            return max(0.0, lhs - self.rhs)
        if self.sense is Sense.GE:
            return max(0.0, self.rhs - lhs)
        return abs(lhs - self.rhs)


@dataclass(frozen=True)
class ToleranceSet:
    """Central numerical tolerances; all applied relative to ``1 + magnitude``."""

    feasibility: float = 1e-6
    duality: float = 1e-6
    pivot: float = 1e-9
    integrality: float = 1e-6


@dataclass(frozen=True)
class TimeBudget:
    """Wall-clock allowance in seconds; ``None`` means unlimited."""

    seconds: float | None = None

    def __post_init__(self):
        if self.seconds is not None and self.seconds <= 0:
            raise ValueError("time budget must be positive")

    @classmethod
    def unlimited(cls) -> "TimeBudget":
        return cls(None)

    def start(self) -> "Deadline":
        return Deadline(self.seconds)


@dataclass
class Deadline:
    """A started budget: remembers when the clock began ticking."""

    seconds: float | None
    _t0: float = field(default_factory=time.monotonic)

    def remaining(self) -> float:
        if self.seconds is None:
            return math.inf
        return self.seconds - (time.monotonic() - self._t0)

    def expired(self) -> bool:
        return self.remaining() <= 0.0

    def elapsed(self) -> float:
        return time.monotonic() - self._t0

    def slice(self) -> TimeBudget:
        """Budget covering whatever time is left on this deadline."""
        rem = self.remaining()
        if math.isinf(rem):
            return TimeBudget(None)
        return TimeBudget(max(rem, 1e-9))
