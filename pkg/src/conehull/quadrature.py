"""Adaptive Gauss-Legendre quadrature by interval bisection."""

import numpy as np

from .constants import QUAD_ABS_TOL

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(20)


def _rule(f, a, b):
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * _NODES
    return half * float(np.dot(_WEIGHTS, f(x)))


def integrate(f, a, b, abs_tol=QUAD_ABS_TOL, rel_tol=0.0, max_depth=60):
    """Integrate a vectorised smooth ``f`` over the finite interval [a, b].

    An interval is accepted when the 20-point rule on it agrees with the sum
    of the rules on its two halves to within its share of the tolerance
    ``max(abs_tol, rel_tol * |coarse total|)``.
    """
    total = _rule(f, a, b)
    tol = max(abs_tol, rel_tol * abs(total))
    result = 0.0
    stack = [(a, b, total, 0)]
    while stack:
        lo, hi, whole, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _rule(f, lo, mid)
        right = _rule(f, mid, hi)
        share = tol * (hi - lo) / (b - a)
        if abs(left + right - whole) <= share or depth >= max_depth:
            result += left + right
        else:
            stack.append((lo, mid, left, depth + 1))
            stack.append((mid, hi, right, depth + 1))
    return result
