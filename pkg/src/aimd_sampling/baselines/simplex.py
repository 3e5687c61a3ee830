"""Dense two-phase tableau simplex for small linear programs.

Solves ``min c @ x`` subject to ``A_ub @ x <= b_ub``, ``A_eq @ x == b_eq`` and
``lb <= x <= ub`` (``ub`` entries may be ``inf``). Bland's rule is used for both
entering and leaving variables, so the method terminates on degenerate
problems. Intended for problems with at most a few hundred rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL = 1e-9


class LPInfeasible(Exception):
    pass


class LPUnbounded(Exception):
    pass


@dataclass(frozen=True)
class LPResult:
    x: np.ndarray
    objective: float
    iterations: int


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    colv = T[:, col].copy()
    colv[row] = 0.0
    T -= np.outer(colv, T[row])


def _iterate(T, basis, cost, allowed, max_iter):
    """Run simplex pivots minimizing ``cost`` over columns flagged in ``allowed``."""
    m = T.shape[0]
    it = 0
    while True:
        cb = cost[basis]
        rc = cost - cb @ T[:, :-1]
        rc[~allowed] = 0.0
        entering = np.flatnonzero(rc < -TOL)
        if entering.size == 0:
            return it
        col = int(entering[0])
        column = T[:, col]
        best_ratio, leave = np.inf, -1
        for i in range(m):
            if column[i] > TOL:
                ratio = T[i, -1] / column[i]
                if ratio < best_ratio - TOL or (abs(ratio - best_ratio) <= TOL and basis[i] < basis[leave]):
                    best_ratio, leave = ratio, i
        if leave < 0:
            raise LPUnbounded("objective unbounded")
        _pivot(T, leave, col)
        basis[leave] = col
        it += 1
        if it > max_iter:
            raise RuntimeError("simplex iteration limit reached")


def solve_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, lb=None, ub=None,
             max_iter: int = 100_000) -> LPResult:
    c = np.asarray(c, dtype=float)
    n = c.size
    lb = np.zeros(n) if lb is None else np.asarray(lb, dtype=float)
    ub = np.full(n, np.inf) if ub is None else np.asarray(ub, dtype=float)
    if np.any(~np.isfinite(lb)):
        raise ValueError("lower bounds must be finite")
    A_ub = np.zeros((0, n)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, dtype=float))
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float)
    A_eq = np.zeros((0, n)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, dtype=float))
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float)

    # shift x = lb + y, y >= 0; finite upper bounds become extra <= rows
    bounded = np.flatnonzero(np.isfinite(ub))
    U = np.zeros((bounded.size, n))
    U[np.arange(bounded.size), bounded] = 1.0
    G = np.vstack([A_ub, U])
    g = np.concatenate([b_ub - A_ub @ lb, ub[bounded] - lb[bounded]])
    h = b_eq - A_eq @ lb
    n_slack = G.shape[0]
    A = np.block([[G, np.eye(n_slack)], [A_eq, np.zeros((A_eq.shape[0], n_slack))]])
    b = np.concatenate([g, h])
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    m, nv = A.shape
    T = np.hstack([A, np.eye(m), b[:, None]])
    basis = list(range(nv, nv + m))
    ncols = nv + m

    phase1 = np.zeros(ncols)
    phase1[nv:] = 1.0
    iters = _iterate(T, basis, phase1, np.ones(ncols, bool), max_iter)
    if T[:, -1] @ phase1[basis] > 1e-7 * max(1.0, float(np.abs(b).max(initial=0.0))):
        raise LPInfeasible("no feasible point")

    # drive zero-valued artificials out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= nv:
            nz = np.flatnonzero(np.abs(T[i, :nv]) > TOL)
            if nz.size == 0:
                continue
            _pivot(T, i, int(nz[0]))
            basis[i] = int(nz[0])
        keep.append(i)
    T = T[keep]
    basis = [basis[i] for i in keep]

    cost = np.zeros(ncols)
    cost[:n] = c
    allowed = np.zeros(ncols, bool)
    allowed[:nv] = True
    iters += _iterate(T, basis, cost, allowed, max_iter)

    y = np.zeros(ncols)
    y[basis] = T[:, -1]
    x = lb + y[:n]
    return LPResult(x, float(c @ x), iters)
