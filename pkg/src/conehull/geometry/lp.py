"""Dense two-phase simplex method with Bland's anti-cycling rule.

Only used for small feasibility problems (a few rows, at most a few hundred
columns), so a plain tableau is adequate.
"""

import numpy as np

from ..constants import LP_TOL
from ..errors import DimensionMismatch

_PIVOT_TOL = 1e-12


def _pivot(T, basis, r, c):
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    basis[r] = c


def _run(T, basis, ncols, tol):
    """Minimise the objective stored in the last row of tableau T.

    Entering column: lowest index with negative reduced cost.  Leaving row:
    minimum ratio, ties broken by lowest basic variable index.
    Returns False when the problem is unbounded.
    """
    m = T.shape[0] - 1
    max_iter = 50 * (m + ncols) + 100
    for _ in range(max_iter):
        cost = T[-1, :ncols]
        neg = np.flatnonzero(cost < -tol)
        if len(neg) == 0:
            return True
        c = int(neg[0])
        col = T[:m, c]
        pos = col > _PIVOT_TOL
        if not np.any(pos):
            return False
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / col[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-14 * max(1.0, abs(best)))
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, basis, r, c)
    raise RuntimeError("simplex iteration limit reached")


def linprog_eq(c, A, b, tol=LP_TOL):
    """Solve ``min c.x  s.t.  A x = b, x >= 0``.

    Returns
    -------
    status : str
        ``"optimal"``, ``"infeasible"`` or ``"unbounded"``.
    x : ndarray or None
    value : float or None
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1

    # phase one: artificials in columns n..n+m-1
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :n] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = list(range(n, n + m))
    _run(T, basis, n + m, tol * 1e-3)
    if -T[-1, -1] > tol:
        return "infeasible", None, None

    # drive remaining artificials out of the basis; drop redundant rows
    keep = []
    for r in range(m):
        if basis[r] >= n:
            nz = np.flatnonzero(np.abs(T[r, :n]) > 1e-9)
            if len(nz):
                _pivot(T, basis, r, int(nz[0]))
                keep.append(r)
        else:
            keep.append(r)
    T = np.vstack([T[keep][:, list(range(n)) + [-1]], np.zeros(n + 1)])
    basis = [basis[r] for r in keep]

    # phase two
    T[-1, :n] = c
    for r, j in enumerate(basis):
        T[-1] -= c[j] * T[r]
    if not _run(T, basis, n, tol * 1e-3):
        return "unbounded", None, None
    x = np.zeros(n)
    for r, j in enumerate(basis):
        x[j] = T[r, -1]
    return "optimal", x, float(c @ x)


def point_in_conv_lp(x, points, tol=LP_TOL):
    """Decide whether ``x`` is a convex combination of the rows of ``points``.

    The data are centred at ``x`` and rescaled to unit spread before the
    feasibility problem ``sum l_i (p_i - x) = 0, sum l_i = 1, l >= 0`` is
    handed to the simplex method.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if P.shape[1] != x.shape[0]:
        raise DimensionMismatch("point and point set dimensions differ")
    Q = P - x
    s = np.max(np.abs(Q))
    if s == 0.0:
        return True
    Q /= s
    k, n = x.shape[0], P.shape[0]
    A = np.empty((k + 1, n))
    A[:k] = Q.T
    A[k] = 1.0
    b = np.zeros(k + 1)
    b[k] = 1.0
    status, _, _ = linprog_eq(np.zeros(n), A, b, tol)
    return status == "optimal"
