"""Independent oracles used by the tests.

These deliberately avoid the package's own algorithms: the spline oracle
integrates numerically instead of manipulating polynomial coefficients, the
band scan re-states the interval definitions literally instead of using the
closed-form index, and the determinant oracle expands over permutations.
"""

import itertools

import numpy as np


def bspline_grid_oracle(max_order, k=15):
    """Spline values on a dyadic grid by sliding-window numerical integration.

    Starts from the closed-form triangle (order 2) sampled at spacing
    ``2**-k`` and repeatedly integrates a sliding unit window using the
    cumulative trapezoid rule.  All breakpoints are half-integers and land
    on grid points, so the trapezoid error stays O(4**-k) per level.

    Returns ``{order: (grid, values)}`` for orders ``2..max_order``.
    """
    h = 2.0 ** -k
    K = 2 ** (k - 1)  # grid steps per half unit
    xs = np.arange(-2 * K, 2 * K + 1) * h
    vals = np.maximum(0.0, 1.0 - np.abs(xs))
    tables = {2: (xs, vals)}
    for order in range(3, max_order + 1):
        F = np.concatenate([[0.0], np.cumsum((vals[1:] + vals[:-1]) * (h / 2.0))])
        L = xs.size
        j = np.arange(L + 2 * K)
        hi = np.clip(j, 0, L - 1)          # F is 0 left of the support,
        lo = np.clip(j - 2 * K, 0, L - 1)  # total mass right of it
        vals = F[hi] - F[lo]
        xs = (np.arange(L + 2 * K) - (order * K)) * h
        tables[order] = (xs, vals)
    return tables


def band_scan_exhaustive(N, a, b, m_max=64):
    """All band indices whose defining inequalities hold at (a, b).

    Literal restatement: shift condition ``N(m-2)/(2m-3) < a < N/2`` (just
    ``0 < a < N/2`` for m = 1), frequency interval
    ``2(m-1)/(N+(2m-3)a) < b <= 2m/(N+(2m-1)a)`` (``0 < b <= 2/(N+a)`` for
    m = 1), and the strict cap ``b < 2/N``.
    """
    hits = []
    for m in range(1, m_max + 1):
        if m == 1:
            ok_a = 0 < a < N / 2
            lo = 0.0
            hi = 2 / (N + a)
        else:
            ok_a = N * (m - 2) / (2 * m - 3) < a < N / 2
            lo = 2 * (m - 1) / (N + (2 * m - 3) * a)
            hi = 2 * m / (N + (2 * m - 1) * a)
        if ok_a and lo < b <= hi and b < 2 / N:
            hits.append(m)
    return hits


def det_leibniz(mat):
    """Determinant by the permutation-sum expansion (small matrices only)."""
    mat = np.asarray(mat, dtype=np.float64)
    n = mat.shape[0]
    total = 0.0
    for perm in itertools.permutations(range(n)):
        inversions = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        term = 1.0 if inversions % 2 == 0 else -1.0
        for i in range(n):
            term *= mat[i, perm[i]]
        total += term
    return total


def gauss_legendre_piece_integral(window):
    """Integral of a window by fixed-order quadrature over its float pieces."""
    nodes, weights = np.polynomial.legendre.leggauss(8)
    total = 0.0
    breaks = window.breaks
    for i in range(breaks.size - 1):
        left, right = breaks[i], breaks[i + 1]
        mid = 0.5 * (left + right)
        halfw = 0.5 * (right - left)
        xs = mid + halfw * nodes
        total += halfw * float(np.sum(weights * window.eval_many(xs)))
    return total
