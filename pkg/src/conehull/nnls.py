"""Lawson-Hanson active-set nonnegative least squares."""

import numpy as np

from .errors import IllConditioned


def nnls(A, b, maxiter=None, tol=None):
    """Minimise ``|A x - b|`` subject to ``x >= 0``.

    Parameters
    ----------
    A : ndarray, shape (m, n)
    b : ndarray, shape (m,)
    maxiter : int, optional
        Cap on outer iterations, default ``10 * max(m, n)``.
    tol : float, optional
        Threshold on the dual vector ``A^T (b - A x)`` below which the KKT
        conditions are considered satisfied.

    Returns
    -------
    x : ndarray, shape (n,)
    rnorm : float
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if maxiter is None:
        maxiter = 10 * max(m, n)
    if tol is None:
        tol = 10 * np.finfo(float).eps * max(m, n) * max(1.0, np.abs(A).max()) * max(1.0, np.linalg.norm(b))
    fit_tol = 1e-13 * max(1.0, np.linalg.norm(b))

    x = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    w = A.T @ b
    for _ in range(maxiter):
        free = ~passive
        # an exact fit satisfies the KKT conditions whatever round-off leaves in w
        if not np.any(free) or np.max(w[free]) <= tol or np.linalg.norm(b - A @ x) <= fit_tol:
            break
        # m independent passive columns span R^m, so the residual is zero up to round-off
        if passive.sum() >= m:
            break
        j = int(np.flatnonzero(free)[np.argmax(w[free])])
        passive[j] = True
        for _inner in range(maxiter):
            z = np.zeros(n)
            cols = A[:, passive]
            sol, _, rank, sv = np.linalg.lstsq(cols, b, rcond=None)
            if rank < cols.shape[1]:
                raise IllConditioned("active generators are linearly dependent")
            z[passive] = sol
            if np.all(z[passive] > 0):
                x = z
                break
            neg = passive & (z <= 0)
            alpha = np.min(x[neg] / (x[neg] - z[neg]))
            x = x + alpha * (z - x)
            passive &= x > tol
            x[~passive] = 0.0
        w = A.T @ (b - A @ x)
    else:
        raise IllConditioned("NNLS did not converge")
    return x, float(np.linalg.norm(A @ x - b))
