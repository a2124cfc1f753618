"""Instance generation and parsing.

The RNG is pinned down exactly so independently-written implementations
can reproduce instance streams bit-for-bit: splitmix64 drives a 64-bit
state, and uniform integers on [lo, hi] are drawn by taking the top
``ceil(log2(span))`` bits of the next word, rejecting draws >= span
(span == 1 consumes nothing).

Interval overlays follow the benchmark recipes: lower endpoints are drawn
from [ceil((1-delta) c), c] and upper endpoints from [c, floor((1+delta) c)],
with delta treated as an exact decimal so endpoint rounding never suffers
float fuzz.  Draw order is fixed: per coefficient, lower endpoint first.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .core import Direction, LinearConstraint, Sense
from .errors import ParseError
from .mmr import BipInstance
from .problems import GapSpec, KpSpec, MkpSpec, ScpSpec

_MASK64 = (1 << 64) - 1


class Rng:
    """Deterministic splitmix64 stream with rejection-sampled integers."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], inclusive."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        if span == 1:
            return lo
        k = (span - 1).bit_length()
        while True:
            r = self.next_u64() >> (64 - k)
            if r < span:
                return lo + r

    def unit_open_closed(self) -> float:
        """Real in (0, 1]."""
        return 1.0 - self.next_u64() / 2.0**64

    def unit(self) -> float:
        """Real in [0, 1)."""
        return self.next_u64() / 2.0**64


def _exact(delta) -> Fraction:
    frac = Fraction(str(delta))
    if frac < 0:
        raise ValueError("delta must be nonnegative")
    return frac


def overlay_intervals(costs, delta, rng: Rng) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Draw interval endpoints around base costs per the standard recipe."""
    d = _exact(delta)
    lo, hi = [], []
    for c in costs:
        c = int(c)
        if c < 0:
            raise ValueError("base costs must be nonnegative")
        lo.append(rng.randint(math.ceil((1 - d) * c), c))
        hi.append(rng.randint(c, math.floor((1 + d) * c)))
    return tuple(lo), tuple(hi)


# -- knapsack families -----------------------------------------------------

KP_TYPE_NAMES = {
    1: "uncorrelated",
    2: "weakly correlated",
    3: "strongly correlated",
    4: "inverse strongly correlated",
    5: "almost strongly correlated",
    6: "subset sum",
    7: "even-odd subset sum",
    8: "even-odd strongly correlated",
    9: "uncorrelated similar weights",
}


def gen_kp(ktype: int, n: int, rbar: int, gamma, delta, rng: Rng, name: str = "") -> KpSpec:
    """One knapsack instance from the nine classic families.

    Draw order: per item its weight then (where random) its value; then the
    capacity; then the interval overlay.  Even-weight families draw the
    half-weight and double it; their capacity is forced odd.
    """
    if ktype not in KP_TYPE_NAMES:
        raise ValueError(f"unknown knapsack family {ktype}")
    if rbar % 500:
        raise ValueError("rbar must be a multiple of 500 so derived values stay integral")
    tenth = rbar // 10
    jitter = rbar // 500
    a, c = [], []
    for _ in range(n):
        if ktype == 1:
            aj = rng.randint(1, rbar)
            cj = rng.randint(1, rbar)
        elif ktype == 2:
            aj = rng.randint(1, rbar)
            cj = rng.randint(max(1, aj - tenth), aj + tenth)
        elif ktype == 3:
            aj = rng.randint(1, rbar)
            cj = aj + tenth
        elif ktype == 4:
            cj = rng.randint(1, rbar)
            aj = cj + tenth
        elif ktype == 5:
            aj = rng.randint(1, rbar)
            cj = rng.randint(aj + tenth - jitter, aj + tenth + jitter)
        elif ktype == 6:
            aj = rng.randint(1, rbar)
            cj = aj
        elif ktype == 7:
            aj = 2 * rng.randint(1, rbar // 2)
            cj = aj
        elif ktype == 8:
            aj = 2 * rng.randint(1, rbar // 2)
            cj = aj + tenth
        else:
            aj = rng.randint(100 * rbar, 100 * rbar + tenth)
            cj = rng.randint(1, rbar)
        a.append(aj)
        c.append(cj)
    b = math.floor(_exact(gamma) * sum(a))
    if ktype in (7, 8) and b % 2 == 0:
        b += 1
    lo, hi = overlay_intervals(c, delta, rng)
    return KpSpec(weights=tuple(a), capacity=b, c_lo=lo, c_hi=hi,
                  name=name or f"kp-type{ktype}-{n}")


# -- covering and assignment recipes ---------------------------------------


def gen_scp_intervals(base_costs, flavor: str, delta, rng: Rng):
    """Interval flavors for covering instances.

    B overlays the original costs; M draws the upper endpoint on [0, 1000]
    and the lower below it; K draws the lower endpoint on [0, 1000] and the
    upper within 1000 above it.
    """
    flavor = flavor.upper()
    if flavor == "B":
        return overlay_intervals(base_costs, delta, rng)
    lo, hi = [], []
    for _ in base_costs:
        if flavor == "M":
            h = rng.randint(0, 1000)
            l = rng.randint(0, h)
        elif flavor == "K":
            l = rng.randint(0, 1000)
            h = rng.randint(l, l + 1000)
        else:
            raise ValueError(f"unknown covering flavor {flavor!r}")
        lo.append(l)
        hi.append(h)
    return tuple(lo), tuple(hi)


def gen_gap(gtype: str, m: int, n: int, delta, rng: Rng, name: str = "") -> GapSpec:
    """Assignment instances of types A, B, C, E.

    A/B/C draw the resource matrix then the cost matrix (both row-major).
    Capacities: A uses 0.6(n/m)15 + 0.4*gamma where gamma is the heaviest
    load under cheapest-agent assignment; B takes 70% of the A value; C and
    E use 0.8 of each agent's resource row sum over m.  E draws real-valued
    data which is rounded half-up to integers before the interval overlay.
    """
    t = gtype.upper()
    if t in ("A", "B", "C"):
        a = [[rng.randint(5, 25) for _ in range(n)] for _ in range(m)]
        c = [[rng.randint(10, 50) for _ in range(n)] for _ in range(m)]
        if t in ("A", "B"):
            theta = [min(range(m), key=lambda i: (c[i][j], i)) for j in range(n)]
            gam = max(
                sum(a[i][j] for j in range(n) if theta[j] == i) for i in range(m)
            )
            base_cap = math.floor(0.6 * (n / m) * 15 + 0.4 * gam)
            cap = base_cap if t == "A" else math.floor(0.7 * base_cap)
            caps = [max(1, cap)] * m
        else:
            caps = [max(1, math.floor(0.8 * sum(a[i]) / m)) for i in range(m)]
    elif t == "E":
        a_real = [[1.0 - 10.0 * math.log(rng.unit_open_closed()) for _ in range(n)]
                  for _ in range(m)]
        a = [[max(1, math.floor(x + 0.5)) for x in row] for row in a_real]
        c = [[max(1, math.floor(1000.0 / a_real[i][j] - 10.0 * rng.unit() + 0.5))
              for j in range(n)] for i in range(m)]
        caps = [max(1, math.floor(0.8 * sum(a[i]) / m)) for i in range(m)]
    else:
        raise ValueError(f"unknown assignment type {gtype!r}")
    flat = [v for row in c for v in row]
    lo, hi = overlay_intervals(flat, delta, rng)
    shape = lambda flatv: tuple(tuple(flatv[i * n + j] for j in range(n)) for i in range(m))
    return GapSpec(
        num_agents=m,
        num_jobs=n,
        resources=tuple(tuple(row) for row in a),
        capacities=tuple(caps),
        c_lo=shape(lo),
        c_hi=shape(hi),
        name=name or f"gap-{t.lower()}{m:02d}{n:02d}",
    )


# -- desk-scale random instances -------------------------------------------


def gen_desk_instance(direction: Direction, seed: int, delta=0.1,
                      name: str = "") -> BipInstance:
    """Small seeded instance for oracle-equivalence and property suites.

    Maximization instances are knapsack-like (1-3 LE rows, tight-ish
    capacities); minimization instances are covering-like (2 GE cover rows
    plus a cardinality budget, which keeps the feasible set enumerable).
    """
    rng = Rng(seed)
    n = rng.randint(4, 12)
    base = [rng.randint(5, 60) for _ in range(n)]
    rows = []
    if direction is Direction.MAX:
        m = rng.randint(1, 3)
        for _ in range(m):
            weights = [rng.randint(1, 20) for _ in range(n)]
            pct = rng.randint(30, 45)
            cap = max(min(weights), sum(weights) * pct // 100)
            rows.append(LinearConstraint(
                tuple((j, float(w)) for j, w in enumerate(weights)),
                Sense.LE, float(cap)))
    else:
        for _ in range(2):
            size = rng.randint(2, max(2, n // 2))
            cols = sorted({rng.randint(0, n - 1) for _ in range(size)})
            rows.append(LinearConstraint(
                tuple((j, 1.0) for j in cols), Sense.GE, 1.0))
        budget = rng.randint(2, max(2, n // 2))
        rows.append(LinearConstraint(
            tuple((j, 1.0) for j in range(n)), Sense.LE, float(budget)))
    lo, hi = overlay_intervals(base, delta, rng)
    return BipInstance(
        num_vars=n,
        direction=direction,
        c_lo=lo,
        c_hi=hi,
        constraints=tuple(rows),
        name=name or f"desk-{direction.value}-{seed}",
    )


# -- token-stream parsing ---------------------------------------------------


class _Cursor:
    def __init__(self, data):
        if isinstance(data, bytes):
            data = data.decode("utf-8", errors="replace")
        self._items = []
        for ln, line in enumerate(data.splitlines(), start=1):
            for tok in line.split():
                self._items.append((tok, ln))
        self._pos = 0
        self.line = 1

    def next_token(self, what: str) -> str:
        if self._pos >= len(self._items):
            raise ParseError(f"unexpected end of file while reading {what}", line=self.line)
        tok, self.line = self._items[self._pos]
        self._pos += 1
        return tok

    def next_int(self, what: str) -> int:
        tok = self.next_token(what)
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected integer for {what}, got {tok!r}", line=self.line) from None

    def expect_end(self):
        if self._pos < len(self._items):
            tok, ln = self._items[self._pos]
            raise ParseError(f"trailing data starting at {tok!r}", line=ln)


def parse_orlib_scp(data) -> ScpSpec:
    """OR-Library covering format: ``m n``, the n subset costs, then for
    each element a count followed by 1-based covering column ids."""
    cur = _Cursor(data)
    m = cur.next_int("row count")
    n = cur.next_int("column count")
    if m < 1 or n < 1:
        raise ParseError("row and column counts must be positive", line=cur.line)
    costs = tuple(cur.next_int(f"cost of column {j + 1}") for j in range(n))
    rows = []
    for i in range(m):
        k = cur.next_int(f"cover count of element {i + 1}")
        if k < 0:
            raise ParseError("cover count cannot be negative", line=cur.line)
        cols = []
        for _ in range(k):
            col = cur.next_int(f"cover entry of element {i + 1}")
            if not 1 <= col <= n:
                raise ParseError(f"cover entry {col} outside 1..{n}", line=cur.line)
            cols.append(col - 1)
        rows.append(tuple(sorted(cols)))
    cur.expect_end()
    return ScpSpec(num_cols=n, cover_rows=tuple(rows), c_lo=costs, c_hi=costs)


def parse_orlib_gap(data) -> GapSpec:
    """Single-problem assignment format: ``m n``, the m x n cost matrix,
    the m x n resource matrix (both agent-major), then m capacities."""
    cur = _Cursor(data)
    m = cur.next_int("agent count")
    n = cur.next_int("job count")
    if m < 1 or n < 1:
        raise ParseError("agent and job counts must be positive", line=cur.line)
    c = tuple(tuple(cur.next_int("cost") for _ in range(n)) for _ in range(m))
    a = tuple(tuple(cur.next_int("resource") for _ in range(n)) for _ in range(m))
    b = tuple(cur.next_int("capacity") for _ in range(m))
    cur.expect_end()
    return GapSpec(num_agents=m, num_jobs=n, resources=a, capacities=b, c_lo=c, c_hi=c)


def parse_chubeasley_mkp(data) -> MkpSpec:
    """Single-instance Chu-Beasley layout: ``n m opt``, the n values, the
    m x n coefficient matrix row-major, then the m capacities."""
    cur = _Cursor(data)
    n = cur.next_int("variable count")
    m = cur.next_int("constraint count")
    cur.next_int("recorded optimum")  # informational only
    if m < 1 or n < 1:
        raise ParseError("variable and constraint counts must be positive", line=cur.line)
    c = tuple(cur.next_int("value") for _ in range(n))
    a = tuple(tuple(cur.next_int("coefficient") for _ in range(n)) for _ in range(m))
    b = tuple(cur.next_int("capacity") for _ in range(m))
    cur.expect_end()
    return MkpSpec(resources=a, capacities=b, c_lo=c, c_hi=c)


# -- native format ----------------------------------------------------------

_SENSE_TOKEN = {Sense.LE: "LE", Sense.GE: "GE", Sense.EQ: "EQ"}
_TOKEN_SENSE = {v: k for k, v in _SENSE_TOKEN.items()}


def serialize_native(inst: BipInstance) -> str:
    """Versioned whitespace format: header ``MMRBIP v1 <name> <dir> <n> <m>``,
    one ``c_lo c_hi`` line per variable, one sparse row line per constraint."""
    name = re.sub(r"\s+", "_", inst.name) or "unnamed"
    out = [f"MMRBIP v1 {name} {inst.direction.name} {inst.num_vars} {len(inst.constraints)}"]
    for lo, hi in zip(inst.c_lo, inst.c_hi):
        out.append(f"{lo} {hi}")
    for row in inst.constraints:
        terms = " ".join(f"{j} {int(c)}" for j, c in row.terms)
        line = f"{_SENSE_TOKEN[row.sense]} {int(row.rhs)} {len(row.terms)}"
        out.append(f"{line} {terms}" if terms else line)
    return "\n".join(out) + "\n"


def parse_native(data) -> BipInstance:
    cur = _Cursor(data)
    magic = cur.next_token("magic")
    version = cur.next_token("version")
    if magic != "MMRBIP" or version != "v1":
        raise ParseError(f"bad header {magic!r} {version!r}; expected 'MMRBIP v1'", line=cur.line)
    name = cur.next_token("instance name")
    dir_tok = cur.next_token("direction")
    if dir_tok not in ("MIN", "MAX"):
        raise ParseError(f"direction must be MIN or MAX, got {dir_tok!r}", line=cur.line)
    n = cur.next_int("variable count")
    m = cur.next_int("constraint count")
    if n < 1 or m < 0:
        raise ParseError("counts out of range", line=cur.line)
    lo, hi = [], []
    for j in range(n):
        lo.append(cur.next_int(f"c_lo of variable {j}"))
        hi.append(cur.next_int(f"c_hi of variable {j}"))
        if lo[-1] > hi[-1]:
            raise ParseError(f"variable {j} has c_lo > c_hi", line=cur.line)
    rows = []
    for i in range(m):
        sense_tok = cur.next_token(f"sense of constraint {i}")
        if sense_tok not in _TOKEN_SENSE:
            raise ParseError(f"unknown sense {sense_tok!r}", line=cur.line)
        rhs = cur.next_int(f"rhs of constraint {i}")
        nnz = cur.next_int(f"nonzero count of constraint {i}")
        if nnz < 0:
            raise ParseError("nonzero count cannot be negative", line=cur.line)
        terms = []
        for _ in range(nnz):
            idx = cur.next_int("term index")
            if not 0 <= idx < n:
                raise ParseError(f"term index {idx} outside 0..{n - 1}", line=cur.line)
            coef = cur.next_int("term coefficient")
            terms.append((idx, float(coef)))
        rows.append(LinearConstraint(tuple(terms), _TOKEN_SENSE[sense_tok], float(rhs)))
    cur.expect_end()
    return BipInstance(
        num_vars=n,
        direction=Direction[dir_tok],
        c_lo=tuple(lo),
        c_hi=tuple(hi),
        constraints=tuple(rows),
        name=name,
    )
