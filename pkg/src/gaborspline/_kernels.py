"""Hot numerical kernels with two interchangeable backends.

Everything downstream reduces to four primitives: evaluating a compactly
supported even piecewise polynomial at many points, assembling batches of
small sample matrices from it, and computing determinants / solving linear
systems for those batches.  These inner loops dominate runtime, so each
primitive exists twice:

* ``*_numba``  -- ``@njit`` loop kernels (used by default when numba imports),
* ``*_numpy``  -- vectorized numpy / batched LAPACK equivalents.

Selection is controlled by the ``GABORSPLINE_NUMBA`` environment variable:
``0`` forces the numpy path (numba is not even imported), ``1`` requires the
numba path, unset or ``auto`` picks numba when importable.  The module-level
``BACKEND`` string records the decision.

Both backends honour the evaluation conventions the rest of the package
relies on:

* the support test compares ``|x|`` against the stored half-width, so values
  outside the support are exactly 0.0 (never a rounding-level residue);
* evaluation happens at ``-|x|``, which makes evenness hold bit-for-bit;
* pieces are half-open ``[left, right)``, last piece closed;
* elimination skips exactly-zero multipliers, so structurally zero solution
  components come out as exact zeros.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "BACKEND",
    "HAVE_NUMBA",
    "eval_many",
    "eval_one",
    "gram_batch",
    "det_batch",
    "solve_batch",
]

_OFF = ("0", "false", "off", "no", "numpy")
_ON = ("1", "true", "on", "yes", "numba")


def _decide_backend():
    flag = os.environ.get("GABORSPLINE_NUMBA", "auto").strip().lower()
    if flag in _OFF:
        return "numpy", False
    try:
        import numba  # noqa: F401
        have = True
    except ImportError:
        have = False
    if flag in _ON:
        if not have:
            raise RuntimeError(
                "GABORSPLINE_NUMBA=%s requires numba, which failed to import" % flag
            )
        return "numba", True
    return ("numba" if have else "numpy"), have


BACKEND, HAVE_NUMBA = _decide_backend()


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

def eval_many_numpy(breaks, coeffs, half, xs):
    """Evaluate the window at every point of the 1-d array ``xs``."""
    z = -np.abs(xs)
    out = np.zeros_like(z)
    inside = z >= -half
    if inside.any():
        zi = z[inside]
        idx = np.searchsorted(breaks, zi, side="right") - 1
        np.clip(idx, 0, coeffs.shape[0] - 1, out=idx)
        u = zi - breaks[idx]
        acc = coeffs[idx, coeffs.shape[1] - 1].copy()
        for j in range(coeffs.shape[1] - 2, -1, -1):
            acc *= u
            acc += coeffs[idx, j]
        out[inside] = acc
    return out


def gram_batch_numpy(breaks, coeffs, half, m, a, inv_b, xs):
    """Sample matrices g(x - l/b + k a) for every x; see gram module for layout."""
    n = 2 * m - 1
    rowshift = (float(m - 1) - np.arange(n, dtype=np.float64)) * inv_b
    coloff = (np.arange(n, dtype=np.float64) - float(m - 1)) * a
    args = (xs[:, None] + rowshift[None, :])[:, :, None] + coloff[None, None, :]
    vals = eval_many_numpy(breaks, coeffs, half, args.ravel())
    return vals.reshape(xs.shape[0], n, n)


def det_batch_numpy(mats):
    return np.linalg.det(mats)


def solve_batch_numpy(mats, rhs):
    n = mats.shape[1]
    rhs_b = np.empty((mats.shape[0], n), dtype=np.float64)
    rhs_b[:] = rhs
    return np.linalg.solve(mats, rhs_b)


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if HAVE_NUMBA:
    import numba

    @numba.njit(cache=True)
    def _eval_scalar(breaks, coeffs, half, x):
        z = -abs(x)
        if z < -half:
            return 0.0
        # binary search, matching np.searchsorted(..., side="right")
        lo = 0
        hi = breaks.shape[0]
        while lo < hi:
            mid = (lo + hi) // 2
            if breaks[mid] <= z:
                lo = mid + 1
            else:
                hi = mid
        idx = lo - 1
        if idx < 0:
            idx = 0
        elif idx >= coeffs.shape[0]:
            idx = coeffs.shape[0] - 1
        u = z - breaks[idx]
        acc = coeffs[idx, coeffs.shape[1] - 1]
        for j in range(coeffs.shape[1] - 2, -1, -1):
            acc = acc * u + coeffs[idx, j]
        return acc

    @numba.njit(cache=True)
    def eval_many_numba(breaks, coeffs, half, xs):
        out = np.empty(xs.shape[0])
        for i in range(xs.shape[0]):
            out[i] = _eval_scalar(breaks, coeffs, half, xs[i])
        return out

    @numba.njit(cache=True)
    def gram_batch_numba(breaks, coeffs, half, m, a, inv_b, xs):
        n = 2 * m - 1
        out = np.empty((xs.shape[0], n, n))
        for i in range(xs.shape[0]):
            x = xs[i]
            for r in range(n):
                t = x + (m - 1 - r) * inv_b
                for c in range(n):
                    out[i, r, c] = _eval_scalar(breaks, coeffs, half, t + (c - (m - 1)) * a)
        return out

    @numba.njit(cache=True)
    def det_batch_numba(mats):
        nb = mats.shape[0]
        n = mats.shape[1]
        out = np.empty(nb)
        lu = np.empty((n, n))
        for bi in range(nb):
            for r in range(n):
                for c in range(n):
                    lu[r, c] = mats[bi, r, c]
            det = 1.0
            for col in range(n):
                piv = col
                best = abs(lu[col, col])
                for r in range(col + 1, n):
                    v = abs(lu[r, col])
                    if v > best:
                        best = v
                        piv = r
                if best == 0.0:
                    det = 0.0
                    break
                if piv != col:
                    for c in range(col, n):
                        tmp = lu[col, c]
                        lu[col, c] = lu[piv, c]
                        lu[piv, c] = tmp
                    det = -det
                pv = lu[col, col]
                det *= pv
                for r in range(col + 1, n):
                    f = lu[r, col]
                    if f != 0.0:
                        f = f / pv
                        for c in range(col + 1, n):
                            lu[r, c] -= f * lu[col, c]
            out[bi] = det
        return out

    @numba.njit(cache=True)
    def solve_batch_numba(mats, rhs):
        nb = mats.shape[0]
        n = mats.shape[1]
        sols = np.empty((nb, n))
        aug = np.empty((n, n + 1))
        for bi in range(nb):
            for r in range(n):
                for c in range(n):
                    aug[r, c] = mats[bi, r, c]
                aug[r, n] = rhs[r]
            ok = True
            for col in range(n):
                piv = col
                best = abs(aug[col, col])
                for r in range(col + 1, n):
                    v = abs(aug[r, col])
                    if v > best:
                        best = v
                        piv = r
                if best == 0.0:
                    ok = False
                    break
                if piv != col:
                    for c in range(col, n + 1):
                        tmp = aug[col, c]
                        aug[col, c] = aug[piv, c]
                        aug[piv, c] = tmp
                pv = aug[col, col]
                for r in range(col + 1, n):
                    f = aug[r, col]
                    if f != 0.0:
                        f = f / pv
                        for c in range(col + 1, n + 1):
                            aug[r, c] -= f * aug[col, c]
            if not ok:
                for c in range(n):
                    sols[bi, c] = np.nan
                continue
            for r in range(n - 1, -1, -1):
                s = aug[r, n]
                for c in range(r + 1, n):
                    s -= aug[r, c] * sols[bi, c]
                sols[bi, r] = s / aug[r, r]
        return sols

else:  # pragma: no cover - exercised only when numba is absent or disabled
    eval_many_numba = None
    gram_batch_numba = None
    det_batch_numba = None
    solve_batch_numba = None


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

if BACKEND == "numba":
    _eval_impl = eval_many_numba
    _gram_impl = gram_batch_numba
    _det_impl = det_batch_numba
    _solve_impl = solve_batch_numba
else:
    _eval_impl = eval_many_numpy
    _gram_impl = gram_batch_numpy
    _det_impl = det_batch_numpy
    _solve_impl = solve_batch_numpy


def _as_f64(arr):
    return np.ascontiguousarray(arr, dtype=np.float64)


def eval_many(breaks, coeffs, half, xs):
    """Window values at the points of ``xs`` (any shape); returns same shape."""
    xs = np.asarray(xs, dtype=np.float64)
    flat = _as_f64(xs.ravel())
    return _eval_impl(breaks, coeffs, float(half), flat).reshape(xs.shape)


def eval_one(breaks, coeffs, half, x):
    return float(_eval_impl(breaks, coeffs, float(half), np.array([x], dtype=np.float64))[0])


def gram_batch(breaks, coeffs, half, m, a, inv_b, xs):
    """Batch of (2m-1) x (2m-1) sample matrices, one per point of ``xs``."""
    xs = _as_f64(np.atleast_1d(xs))
    return _gram_impl(breaks, coeffs, float(half), int(m), float(a), float(inv_b), xs)


def det_batch(mats):
    """Determinants of a (B, n, n) batch via elimination with partial pivoting."""
    mats = _as_f64(mats)
    return _det_impl(mats)


def solve_batch(mats, rhs):
    """Solve ``mats[i] @ v = rhs`` for every matrix of the batch.

    Callers must screen out singular matrices first (via :func:`det_batch`);
    this routine returns NaN rows (numba path) or raises (LAPACK path) on an
    exactly singular input.
    """
    mats = _as_f64(mats)
    rhs = _as_f64(rhs)
    return _solve_impl(mats, rhs)
