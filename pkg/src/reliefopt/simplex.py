"""Bounded-variable primal simplex.

Two-phase dense simplex over

    min c'x   s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  lower <= x <= upper

with finite lower bounds (upper bounds may be +inf).  Entering variables are
chosen by the most-negative reduced cost with deterministic index tie-breaks;
after a run of degenerate steps the pivot rule switches to Bland's rule, which
guarantees termination.  All tolerances default to 1e-9.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL = 1e-9

_AT_LOWER = 0
_AT_UPPER = 1
_BASIC = 2

# consecutive degenerate pivots before switching to Bland's rule
_DEGENERATE_RUN = 30


class SimplexError(ArithmeticError):
    """Numerical failure or iteration limit inside the simplex."""


@dataclass
class LpResult:
    status: str                # "optimal" or "infeasible"
    x: np.ndarray | None = None
    objective: float = float("nan")


def solve_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None,
             lower=None, upper=None, tol: float = TOL) -> LpResult:
    """Solve the LP exactly (to ``tol``); never returns a non-vertex point."""
    c = np.asarray(c, dtype=float)
    n = c.size
    lower = np.zeros(n) if lower is None else np.asarray(lower, dtype=float)
    upper = np.full(n, np.inf) if upper is None else np.asarray(upper, dtype=float)
    if not np.all(np.isfinite(lower)):
        raise ValueError("finite lower bounds required")
    if np.any(lower > upper + tol):
        return LpResult("infeasible")

    rows = []
    rhs = []
    n_ub = 0
    if A_ub is not None and len(A_ub):
        A_ub = np.atleast_2d(np.asarray(A_ub, dtype=float))
        rows.append(A_ub)
        rhs.append(np.asarray(b_ub, dtype=float))
        n_ub = A_ub.shape[0]
    if A_eq is not None and len(A_eq):
        A_eq = np.atleast_2d(np.asarray(A_eq, dtype=float))
        rows.append(A_eq)
        rhs.append(np.asarray(b_eq, dtype=float))
    if not rows:
        # box-only problem: each variable sits at its cheaper bound
        x = np.where(c >= 0, lower, np.where(np.isfinite(upper), upper, np.nan))
        if np.any(np.isnan(x)):
            raise SimplexError("unbounded box problem")
        return LpResult("optimal", x, float(c @ x))

    A = np.vstack(rows)
    b = np.concatenate(rhs)
    m = A.shape[0]

    # columns: structural | slacks (<= rows) | artificials (one per row)
    n_slack = n_ub
    total = n + n_slack + m
    Afull = np.zeros((m, total))
    Afull[:, :n] = A
    for r in range(n_slack):
        Afull[r, n + r] = 1.0
    lo = np.concatenate([lower, np.zeros(n_slack + m)])
    up = np.concatenate([upper, np.full(n_slack, np.inf), np.full(m, np.inf)])

    # start: structural at lower bound, slacks absorbing what they can
    status = np.full(total, _AT_LOWER, dtype=np.int8)
    xval = lo.copy()
    resid = b - Afull[:, :n] @ lower
    basis = np.empty(m, dtype=int)
    for r in range(m):
        art = n + n_slack + r
        if r < n_ub and resid[r] >= 0.0:
            basis[r] = n + r            # slack carries the residual
            Afull[r, art] = 1.0         # unused artificial, pinned below
            up[art] = 0.0
        else:
            sign = 1.0 if resid[r] >= 0.0 else -1.0
            Afull[r, art] = sign
            basis[r] = art
    status[basis] = _BASIC

    phase1_cost = np.zeros(total)
    phase1_cost[n + n_slack:] = 1.0

    state = _State(Afull, b, lo, up, basis, status, xval, tol)
    state.refresh()
    # phase 1 only when some artificial starts off zero
    if float(phase1_cost @ np.abs(state.xval)) > 1e-11:
        _run(state, phase1_cost)
        if state.objective(phase1_cost) > 1e-7:
            return LpResult("infeasible")

    # pin artificials at zero and optimize the true objective
    state.up[n + n_slack:] = 0.0
    state.xval[n + n_slack:][state.status[n + n_slack:] != _BASIC] = 0.0
    cost = np.zeros(total)
    cost[:n] = c
    _run(state, cost)

    x = state.solution()[:n]
    return LpResult("optimal", x, float(c @ x))


class _State:
    def __init__(self, A, b, lo, up, basis, status, xval, tol):
        self.A = np.asfortranarray(A)   # fast column access in the ratio test
        self.b = b
        self.lo = lo
        self.up = up
        self.basis = basis
        self.status = status
        self.xval = xval
        self.tol = tol
        self.Binv = None

    def refresh(self):
        """Refactorize the basis inverse and recompute basic values."""
        B = self.A[:, self.basis]
        try:
            self.Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise SimplexError("singular basis") from exc
        nonbasic_flow = self.A @ np.where(self.status == _BASIC, 0.0, self.xval)
        xB = self.Binv @ (self.b - nonbasic_flow)
        self.xval[self.basis] = xB

    def objective(self, cost):
        return float(cost @ self.xval)

    def solution(self):
        return self.xval.copy()


def _run(state: _State, cost: np.ndarray) -> None:
    A, lo, up = state.A, state.lo, state.up
    tol = state.tol
    m, total = A.shape
    degenerate_run = 0
    max_iter = 4000 + 60 * total
    span_ok = up > lo
    for it in range(max_iter):
        if it and it % 64 == 0:
            state.refresh()
        y = cost[state.basis] @ state.Binv
        d = cost - y @ A
        at_lo = (state.status == _AT_LOWER) & (d < -tol) & span_ok
        at_up = (state.status == _AT_UPPER) & (d > tol)
        cand = np.flatnonzero(at_lo | at_up)
        if cand.size == 0:
            return
        if degenerate_run >= _DEGENERATE_RUN:
            j = int(cand[0])                          # Bland: smallest index
        else:
            j = int(cand[np.argmax(np.abs(d[cand]))])  # Dantzig, first max on ties
        direction = 1.0 if state.status[j] == _AT_LOWER else -1.0

        w = state.Binv @ A[:, j]
        step = w * direction                           # xB moves by -step * t
        xB = state.xval[state.basis]
        loB = lo[state.basis]
        upB = up[state.basis]

        pos = step > tol
        neg = step < -tol
        with np.errstate(divide="ignore", invalid="ignore"):
            t_pos = np.where(pos, (xB - loB) / np.where(pos, step, 1.0), np.inf)
            t_neg = np.where(neg, (upB - xB) / np.where(neg, -step, 1.0), np.inf)
        t_rows = np.minimum(t_pos, t_neg)
        t_rows[t_rows < 0.0] = 0.0
        t_own = up[j] - lo[j]
        rmin = float(t_rows.min()) if t_rows.size else np.inf
        t_best = min(t_own, rmin)
        if not np.isfinite(t_best):
            raise SimplexError("unbounded direction")
        t_best = max(t_best, 0.0)
        degenerate_run = degenerate_run + 1 if t_best <= tol else 0

        state.xval[state.basis] = xB - step * t_best
        state.xval[j] = state.xval[j] + direction * t_best

        if rmin <= t_own:
            # basis change; Bland tie-break on the leaving row
            ties = np.flatnonzero(t_rows <= rmin + tol)
            leave = int(ties[np.argmin(state.basis[ties])])
            out = state.basis[leave]
            hit_lower = step[leave] > 0
            state.status[out] = _AT_LOWER if hit_lower else _AT_UPPER
            state.xval[out] = lo[out] if hit_lower else up[out]
            state.basis[leave] = j
            state.status[j] = _BASIC
            piv = w[leave]
            if abs(piv) < 1e-11:
                state.refresh()
            else:
                E = state.Binv[leave] / piv
                state.Binv = state.Binv - np.outer(w, E)
                state.Binv[leave] = E
        else:
            # entering variable flips to its opposite bound, basis unchanged
            state.status[j] = _AT_UPPER if direction > 0 else _AT_LOWER
            state.xval[j] = up[j] if direction > 0 else lo[j]
    raise SimplexError("iteration limit exceeded")
