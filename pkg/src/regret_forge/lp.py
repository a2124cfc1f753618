"""Bounded-variable primal simplex.

Variables carry their own bounds (binaries relax to [0, 1]); each
constraint row gets one slack column whose bounds encode the sense, so the
working system is always ``A z = b`` with ``l <= z <= u``.  A composite
phase 1 drives bound violations of the basic variables to zero, after
which phase 2 optimizes the true objective.  The basis inverse is kept
explicitly and refactorized periodically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import Direction, LinearConstraint, Sense, ToleranceSet
from .errors import NumericalBreakdown

_INF = math.inf

# nonbasic-at-lower / nonbasic-at-upper / basic / free-at-zero
_LOWER, _UPPER, _BASIC, _FREE = 0, 1, 2, 3

_REFACTOR_EVERY = 100


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpModel:
    """A linear program with per-variable bounds and sparse rows."""

    num_vars: int
    objective: np.ndarray
    direction: Direction
    lower: np.ndarray
    upper: np.ndarray
    constraints: tuple[LinearConstraint, ...]

    def __post_init__(self):
        obj = np.asarray(self.objective, dtype=float)
        lo = np.asarray(self.lower, dtype=float)
        up = np.asarray(self.upper, dtype=float)
        if obj.shape != (self.num_vars,) or lo.shape != (self.num_vars,) or up.shape != (self.num_vars,):
            raise ValueError("objective/bounds length must equal num_vars")
        if np.any(lo > up):
            raise ValueError("every variable needs lower <= upper")
        if np.any(lo == _INF) or np.any(up == -_INF):
            raise ValueError("variable bounds must leave a reachable range")
        for row in self.constraints:
            if not math.isfinite(row.rhs):
                raise ValueError("constraint rhs must be finite")
            for j, _ in row.terms:
                if not 0 <= j < self.num_vars:
                    raise ValueError(f"constraint references variable {j} out of range")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)
        object.__setattr__(self, "constraints", tuple(self.constraints))


@dataclass
class LpSolution:
    status: LpStatus
    primal: np.ndarray | None = None
    objective_value: float | None = None
    duals: np.ndarray | None = None
    reduced_costs: np.ndarray | None = None
    iterations: int = 0


@dataclass
class KernelResult:
    """Raw solve output, including the basis for warm starts."""

    status: LpStatus
    x: np.ndarray | None = None
    objective: float | None = None  # in the model's stated direction
    duals: np.ndarray | None = None
    reduced: np.ndarray | None = None
    basis: np.ndarray | None = None
    vstat: np.ndarray | None = None
    iterations: int = 0


def _rows_to_dense(rows, num_vars):
    m = len(rows)
    a = np.zeros((m, num_vars))
    b = np.zeros(m)
    slack_lo = np.zeros(m)
    slack_up = np.zeros(m)
    for i, row in enumerate(rows):
        for j, coef in row.terms:
            a[i, j] = coef
        b[i] = row.rhs
        if row.sense is Sense.LE:
            slack_lo[i], slack_up[i] = 0.0, _INF
        elif row.sense is Sense.GE:
            slack_lo[i], slack_up[i] = -_INF, 0.0
        else:
            slack_lo[i], slack_up[i] = 0.0, 0.0
    return a, b, slack_lo, slack_up


class SimplexKernel:
    """Reusable solver for one objective/constraint structure.

    Per-call variable bounds make branch-and-bound node solves cheap, and
    ``add_row`` supports globally-added cuts.  All state needed by one
    ``solve`` call is local, so a kernel can be reused sequentially.
    """

    def __init__(self, objective, direction, rows, num_vars, tol: ToleranceSet | None = None):
        self.tol = tol or ToleranceSet()
        self.num_vars = int(num_vars)
        self.direction = direction
        c = np.asarray(objective, dtype=float)
        # internal form is always minimization
        self._c_int = c.copy() if direction is Direction.MIN else -c
        self._c_user = c
        self._rows = list(rows)
        self._a, self._b, self._slo, self._sup = _rows_to_dense(self._rows, self.num_vars)

    @property
    def num_rows(self):
        return len(self._rows)

    def add_row(self, row: LinearConstraint):
        self._rows.append(row)
        a, b, slo, sup = _rows_to_dense([row], self.num_vars)
        self._a = np.vstack([self._a, a]) if self._a.size else a
        self._b = np.append(self._b, b)
        self._slo = np.append(self._slo, slo)
        self._sup = np.append(self._sup, sup)

    # -- solve ---------------------------------------------------------

    def solve(self, lower, upper, warm: KernelResult | None = None) -> KernelResult:
        m = len(self._rows)
        n = self.num_vars
        ncols = n + m
        lo = np.concatenate([np.asarray(lower, float), self._slo])
        up = np.concatenate([np.asarray(upper, float), self._sup])
        c_full = np.concatenate([self._c_int, np.zeros(m)])
        cmax = float(np.max(np.abs(self._c_int))) if n else 0.0
        etol2 = 1e-9 * (1.0 + cmax)
        etol1 = 2e-9
        ftol = self.tol.feasibility * (1.0 + np.maximum(np.abs(np.where(np.isfinite(lo), lo, 0.0)),
                                                        np.abs(np.where(np.isfinite(up), up, 0.0))))

        with np.errstate(invalid="ignore"):
            movable = ~((up - lo) <= 0)  # fixed variables never enter

        basis, vstat = self._starting_point(lo, up, warm, ncols, m)
        binv = self._factorize(basis, m)
        if binv is None:  # stale warm basis; restart cold
            basis, vstat = self._starting_point(lo, up, None, ncols, m)
            binv = self._factorize(basis, m)
            if binv is None:
                raise NumericalBreakdown("singular starting basis")
        xval = self._recompute(basis, vstat, binv, lo, up)

        iters = 0
        degen_run = 0
        bland_after = 2 * (m + ncols)
        max_iters = 10_000 + 200 * (m + ncols)
        phase = 1
        feas_bounces = 0

        while True:
            if iters > max_iters:
                raise NumericalBreakdown("iteration safety cap exceeded")
            xb = xval[basis]
            lob, upb = lo[basis], up[basis]
            ftb = ftol[basis]
            above = xb > upb + ftb
            below = xb < lob - ftb
            if phase == 1 and not (above.any() or below.any()):
                phase = 2
                degen_run = 0
                continue

            if phase == 1:
                e = np.where(above, 1.0, np.where(below, -1.0, 0.0))
                y = e @ binv
                etol = etol1
            else:
                y = c_full[basis] @ binv if m else np.zeros(0)
                etol = etol2
            d = np.empty(ncols)
            d[:n] = (0.0 if phase == 1 else self._c_int) - (y @ self._a if m else 0.0)
            d[n:] = -y

            bland = degen_run > bland_after
            j, direction = self._entering(d, vstat, etol, bland, movable)
            if j < 0:
                if phase == 1:
                    return KernelResult(status=LpStatus.INFEASIBLE, iterations=iters)
                # claimed optimal: verify no drift crept in
                xval = self._recompute(basis, vstat, binv, lo, up)
                xb = xval[basis]
                bad = (xb > up[basis] + ftol[basis]) | (xb < lo[basis] - ftol[basis])
                if bad.any():
                    feas_bounces += 1
                    if feas_bounces > 3:
                        raise NumericalBreakdown("feasibility lost after optimality claim")
                    binv = self._factorize(basis, m)
                    if binv is None:
                        raise NumericalBreakdown("singular basis at cleanup")
                    phase = 1
                    continue
                return self._package(basis, vstat, binv, xval, lo, up, iters)

            w = binv @ self._col(j) if m else np.zeros(0)
            step, leave_r, leave_stat, flip = self._ratio(
                j, direction, w, xval, basis, lo, up, above, below, bland)
            if step is None:
                if phase == 2:
                    return KernelResult(status=LpStatus.UNBOUNDED, iterations=iters)
                raise NumericalBreakdown("phase-1 ray without breakpoint")

            degen_run = degen_run + 1 if step <= 1e-10 else 0
            xval[basis] -= direction * step * w
            if flip:
                vstat[j] = _UPPER if vstat[j] == _LOWER else _LOWER
                xval[j] = up[j] if vstat[j] == _UPPER else lo[j]
            else:
                leaving = basis[leave_r]
                vstat[leaving] = leave_stat
                xval[leaving] = up[leaving] if leave_stat == _UPPER else lo[leaving]
                xval[j] = xval[j] + direction * step
                basis[leave_r] = j
                vstat[j] = _BASIC
                wr = w[leave_r]
                binv[leave_r] /= wr
                scale = w.copy()
                scale[leave_r] = 0.0
                binv -= np.outer(scale, binv[leave_r])
            iters += 1
            if iters % _REFACTOR_EVERY == 0:
                binv = self._factorize(basis, m)
                if binv is None:
                    raise NumericalBreakdown("singular basis at refactorization")
                xval = self._recompute(basis, vstat, binv, lo, up)

    # -- helpers -------------------------------------------------------

    def _col(self, j):
        if j < self.num_vars:
            return self._a[:, j]
        e = np.zeros(len(self._rows))
        e[j - self.num_vars] = 1.0
        return e

    def _starting_point(self, lo, up, warm, ncols, m):
        if warm is not None and warm.basis is not None and len(warm.basis) == m \
                and len(warm.vstat) == ncols:
            basis = warm.basis.copy()
            vstat = warm.vstat.copy()
            # bounds may have changed since the warm basis was recorded
            nb = vstat != _BASIC
            fix_low = nb & (vstat == _LOWER) & ~np.isfinite(lo)
            vstat[fix_low & np.isfinite(up)] = _UPPER
            vstat[fix_low & ~np.isfinite(up)] = _FREE
            fix_up = nb & (vstat == _UPPER) & ~np.isfinite(up)
            vstat[fix_up & np.isfinite(lo)] = _LOWER
            vstat[fix_up & ~np.isfinite(lo)] = _FREE
            fix_free = nb & (vstat == _FREE) & (np.isfinite(lo) | np.isfinite(up))
            vstat[fix_free & np.isfinite(lo)] = _LOWER
            vstat[fix_free & ~np.isfinite(lo)] = _UPPER
            return basis, vstat
        basis = np.arange(self.num_vars, self.num_vars + m, dtype=np.int64)
        vstat = np.empty(ncols, dtype=np.int8)
        vstat[:] = _FREE
        vstat[np.isfinite(up)] = _UPPER
        vstat[np.isfinite(lo)] = _LOWER  # prefer lower when both finite
        vstat[basis] = _BASIC
        return basis, vstat

    def _factorize(self, basis, m):
        if m == 0:
            return np.zeros((0, 0))
        bmat = np.empty((m, m))
        for k, bj in enumerate(basis):
            bmat[:, k] = self._col(bj)
        try:
            return np.linalg.inv(bmat)
        except np.linalg.LinAlgError:
            return None

    def _recompute(self, basis, vstat, binv, lo, up):
        xval = np.zeros(len(vstat))
        at_lo = vstat == _LOWER
        at_up = vstat == _UPPER
        xval[at_lo] = lo[at_lo]
        xval[at_up] = up[at_up]
        if len(basis):
            n = self.num_vars
            rhs = self._b - self._a @ xval[:n] - xval[n:]
            xval[basis] = binv @ rhs
        return xval

    def _entering(self, d, vstat, etol, bland, movable):
        can_inc = (vstat == _LOWER) & (d < -etol)
        can_dec = (vstat == _UPPER) & (d > etol)
        free = vstat == _FREE
        can_inc |= free & (d < -etol)
        can_dec |= free & (d > etol)
        any_c = (can_inc | can_dec) & movable
        if not any_c.any():
            return -1, 0.0
        if bland:
            j = int(np.argmax(any_c))
        else:
            score = np.where(any_c, np.abs(d), -1.0)
            j = int(np.argmax(score))
        return j, 1.0 if can_inc[j] else -1.0

    def _ratio(self, j, direction, w, xval, basis, lo, up, above, below, bland):
        ptol = self.tol.pivot
        m = len(basis)
        xb = xval[basis]
        lob, upb = lo[basis], up[basis]
        t = np.full(m, _INF)
        if m:
            delta = direction * w
            dec = delta > ptol
            inc = delta < -ptol
            with np.errstate(invalid="ignore"):
                tgt_dec = np.where(above, upb, lob)
                ok = dec & ~below & np.isfinite(tgt_dec)
                t[ok] = (xb[ok] - tgt_dec[ok]) / delta[ok]
                tgt_inc = np.where(below, lob, upb)
                ok = inc & ~above & np.isfinite(tgt_inc)
                t[ok] = (tgt_inc[ok] - xb[ok]) / (-delta[ok])
            np.maximum(t, 0.0, out=t)
        t_own = up[j] - lo[j] if (np.isfinite(lo[j]) and np.isfinite(up[j])) else _INF
        t_rows = float(t.min()) if m else _INF
        if not math.isfinite(t_rows) and not math.isfinite(t_own):
            return None, -1, 0, False
        tie = 1e-9 * (1.0 + abs(t_rows)) if math.isfinite(t_rows) else 0.0
        if t_own < t_rows - tie:
            return t_own, -1, 0, True
        ties = np.flatnonzero(t <= t_rows + tie)
        if bland:
            r = int(ties[np.argmin(basis[ties])])
        else:
            mags = np.abs(w[ties])
            best = mags.max()
            strong = ties[mags >= max(best * 0.5, ptol)]
            r = int(strong[np.argmin(basis[strong])]) if strong.size else int(ties[0])
        if abs(w[r]) <= ptol:
            raise NumericalBreakdown("pivot magnitude below tolerance")
        if direction * w[r] > 0:
            stat = _UPPER if above[r] else _LOWER
        else:
            stat = _LOWER if below[r] else _UPPER
        return float(t[r]), r, stat, False

    def _package(self, basis, vstat, binv, xval, lo, up, iters):
        n = self.num_vars
        m = len(basis)
        c_full = np.concatenate([self._c_int, np.zeros(m)])
        y_int = c_full[basis] @ binv if m else np.zeros(0)
        d_int = np.empty(n)
        d_int[:] = self._c_int - (y_int @ self._a if m else 0.0)
        sign = 1.0 if self.direction is Direction.MIN else -1.0
        x = xval[:n].copy()
        obj = float(self._c_user @ x)
        return KernelResult(
            status=LpStatus.OPTIMAL,
            x=x,
            objective=obj,
            duals=sign * y_int,
            reduced=sign * d_int,
            basis=basis.copy(),
            vstat=vstat.copy(),
            iterations=iters,
        )


def solve_lp(model: LpModel, tol: ToleranceSet | None = None) -> LpSolution:
    """Classify and solve ``model``; OPTIMAL results carry duals and reduced costs."""
    kern = SimplexKernel(model.objective, model.direction, model.constraints,
                         model.num_vars, tol)
    res = kern.solve(model.lower, model.upper)
    if res.status is not LpStatus.OPTIMAL:
        return LpSolution(status=res.status, iterations=res.iterations)
    return LpSolution(
        status=LpStatus.OPTIMAL,
        primal=res.x,
        objective_value=res.objective,
        duals=res.duals,
        reduced_costs=res.reduced,
        iterations=res.iterations,
    )


def lp_dual_objective(sol: LpSolution, model: LpModel) -> float:
    """Dual objective of an OPTIMAL solve: row duals times rhs plus the
    bound contributions of the reduced costs.

    Basic variables have (numerically) zero reduced cost, so summing
    ``reduced_cost * value`` over every variable collects exactly the
    nonbasic bound terms.
    """
    if sol.status is not LpStatus.OPTIMAL:
        raise ValueError("dual objective is only defined for OPTIMAL solutions")
    rhs = np.array([row.rhs for row in model.constraints])
    out = float(sol.duals @ rhs) if len(rhs) else 0.0
    out += float(sol.reduced_costs @ sol.primal)
    return out
