"""Dense two-phase primal simplex for tiny linear programs.

Bland's rule throughout, so the method terminates deterministically; no
external solver is involved. Instances here are small (a handful of variables,
at most a few dozen rows), so a dense tableau is the simplest correct choice.
"""

from __future__ import annotations

import numpy as np

_TOL = 1e-10


class LPInfeasible(RuntimeError):
    pass


class LPUnbounded(RuntimeError):
    pass


def _pivot(T: np.ndarray, basis: list[int], row: int, col: int) -> None:
    T[row] /= T[row, col]
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0.0:
            T[i] -= T[i, col] * T[row]
    basis[row] = col


def _run_simplex(T: np.ndarray, basis: list[int], ncols: int, max_iter: int = 50_000) -> None:
    """Minimize the objective encoded in the last tableau row over columns < ncols.

    The last row holds reduced costs (negated objective in the rhs cell);
    entering/leaving choices follow Bland's rule.
    """
    m = T.shape[0] - 1
    for _ in range(max_iter):
        col = -1
        for j in range(ncols):  # Bland: smallest improving index
            if T[m, j] < -_TOL:
                col = j
                break
        if col < 0:
            return
        ratio = np.inf
        row = -1
        for i in range(m):
            a = T[i, col]
            if a > _TOL:
                r = T[i, -1] / a
                if r < ratio - _TOL or (abs(r - ratio) <= _TOL and (row < 0 or basis[i] < basis[row])):
                    ratio = r
                    row = i
        if row < 0:
            raise LPUnbounded("objective unbounded below")
        _pivot(T, basis, row, col)
    raise RuntimeError("simplex iteration limit reached")


def solve_equality_lp(c, A, b) -> tuple[np.ndarray, float]:
    """min c@x subject to A@x = b, x >= 0. Returns (x, optimal value)."""
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.array(c, dtype=float)
    m, n = A.shape
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    # Phase 1: artificial basis, minimize the sum of artificials.
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    basis = list(range(n, n + m))
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    _run_simplex(T, basis, ncols=n)
    if T[m, -1] < -1e-7:
        raise LPInfeasible(f"phase-1 residual {-T[m, -1]:.3e}")

    # Drive any artificial still in the basis out of it (degenerate rows).
    keep = []
    for i in range(m):
        if basis[i] >= n:
            piv = -1
            for j in range(n):
                if abs(T[i, j]) > 1e-9:
                    piv = j
                    break
            if piv >= 0:
                _pivot(T, basis, i, piv)
                keep.append(i)
            # else: redundant row, drop it below
        else:
            keep.append(i)
    if len(keep) < m:
        T = np.vstack([T[keep], T[-1:]])
        basis = [basis[i] for i in keep]
        m = len(keep)

    # Phase 2: rebuild reduced costs for the real objective.
    T2 = np.zeros((m + 1, n + 1))
    T2[:m, :n] = T[:m, :n]
    T2[:m, -1] = T[:m, -1]
    T2[m, :n] = c
    for i, bi in enumerate(basis):
        T2[m] -= c[bi] * T2[i]
    _run_simplex(T2, basis, ncols=n)

    x = np.zeros(n)
    for i, bi in enumerate(basis):
        x[bi] = T2[i, -1]
    return x, float(c @ x)


def solve_box_lp(c, A_ub, b_ub, lower, upper, maximize: bool = False) -> tuple[np.ndarray, float]:
    """Optimize c@z subject to A_ub@z <= b_ub and lower <= z <= upper.

    Shifts to y = z - lower >= 0, appends slack columns and delegates to the
    equality-form solver. Returns (z, optimal value).
    """
    A_ub = np.asarray(A_ub, dtype=float)
    b_ub = np.asarray(b_ub, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    c = np.asarray(c, dtype=float)
    n = len(c)
    rows = np.vstack([A_ub, np.eye(n)])
    rhs = np.concatenate([b_ub - A_ub @ lower, upper - lower])
    m = rows.shape[0]
    A_eq = np.hstack([rows, np.eye(m)])
    obj = np.concatenate([(-c if maximize else c), np.zeros(m)])
    sol, val = solve_equality_lp(obj, A_eq, rhs)
    z = sol[:n] + lower
    return z, float(c @ z)
