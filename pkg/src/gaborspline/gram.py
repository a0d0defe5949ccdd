"""The (2m-1) x (2m-1) sample matrix G_m(x) and its determinant.

Layout.  Entry ``(ell, k)`` holds ``g(x - ell/b + k a)`` for
``ell, k in {1-m, ..., m-1}``.  Rows are stored with ``ell = 1-m`` on top
(the top row carries the modulation shift ``+(m-1)/b``) and columns with
``k = 1-m`` on the left, so array position ``[ell + m - 1, k + m - 1]``
holds entry ``(ell, k)``.  For ``x in [-a/2, 0]`` and parameters inside
band T(m) the matrix is block upper triangular,

    G_m(x) = [[A, B],
              [0, C]],

with A the m x m top-left block (tridiagonal), B carrying a single
possibly-nonzero entry ``g(x + a)`` at its bottom-left corner, and C upper
bidiagonal.  The zeros are exact because the window's support test is
symbolic.

Determinants come in two independent flavours:

* :func:`det_direct` - row elimination with partial pivoting (the oracle);
* :func:`det_formula` - the closed forms: a diagonal product over
  ``g(x + k/b - k a)``, with one 2x2 minor replacing two factors on the
  open exchange intervals (the Z case).

The case split lives in :func:`locate_case`: when ``N/2 - 1/b <= a - N/2``
the diagonal product holds everywhere (Product case); otherwise the interval
``[-a/2, 0]`` splits into a closed set where the product still holds (S case)
and open intervals, one per ``ell in {1-m, ..., -1}``, where the minor
``|A_{-ell, -ell-1}|`` is needed (Z case).  Case boundaries are decided by
plain comparisons on the rational endpoint formulas, no epsilon; boundary
ties land in the closed S case.

Everything is pure; grid sweeps parallelize trivially.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DomainError, RegionError, StructuralError
from .regions import LatticeParams, tm_bounds
from .windows import Window

__all__ = [
    "MAX_BAND_INDEX",
    "GramMatrix",
    "BlockDecomposition",
    "CaseLabel",
    "PRODUCT_CASE",
    "SM_CASE",
    "build_gram",
    "gram_matrices",
    "block_decompose",
    "det_direct",
    "locate_case",
    "submatrix_det_2x2",
    "det_formula",
    "det_formula_sweep",
    "require_band",
    "gram_to_csv",
]

MAX_BAND_INDEX = 64


def _check_m(m) -> int:
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)):
        raise DomainError("band index m must be an integer, got %r" % (m,))
    if m < 1:
        raise DomainError("band index m must be >= 1, got %d" % m)
    if m > MAX_BAND_INDEX:
        raise DomainError("band index m capped at %d, got %d" % (MAX_BAND_INDEX, m))
    return int(m)


def require_band(p: LatticeParams, m: int) -> None:
    """Raise RegionError unless ``(a, b)`` lies in band T(m)."""
    itv = tm_bounds(p.N, p.a, m)
    if itv is None or not itv.contains(p.b):
        raise RegionError(
            "parameters (a=%s, b=%s) are not in band T(%d) for N=%s"
            % (p.a, p.b, m, p.N)
        )


@dataclass(frozen=True, eq=False)
class GramMatrix:
    x: float
    m: int
    params: LatticeParams
    entries: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return 2 * self.m - 1

    def entry(self, ell: int, k: int) -> float:
        """g(x - ell/b + k a) for ell, k in {1-m, ..., m-1}."""
        off = self.m - 1
        if not (-off <= ell <= off and -off <= k <= off):
            raise DomainError("indices must lie in [%d, %d]" % (-off, off))
        return float(self.entries[ell + off, k + off])


def gram_matrices(w: Window, p: LatticeParams, m: int, xs) -> np.ndarray:
    """Batch of G_m(x) for every x in ``xs``; shape (len(xs), 2m-1, 2m-1)."""
    m = _check_m(m)
    N, a, b, inv_b = p.kernel_floats()
    return _kernels.gram_batch(w.breaks, w.coeffs, w.support_halfwidth, m, a, inv_b, xs)


def build_gram(w: Window, p: LatticeParams, m: int, x) -> GramMatrix:
    """Assemble G_m(x); requires ``|x| <= a/2``."""
    m = _check_m(m)
    x = float(x)
    N, a, b, inv_b = p.kernel_floats()
    if not math.isfinite(x) or abs(x) > a / 2.0:
        raise DomainError("x must lie in [-a/2, a/2], got %r" % x)
    entries = gram_matrices(w, p, m, np.array([x]))[0]
    return GramMatrix(x=x, m=m, params=p, entries=entries)


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    A: np.ndarray  # m x m, tridiagonal
    B: np.ndarray  # m x (m-1), single nonzero g(x+a) at its (m, 1) position
    C: np.ndarray  # (m-1) x (m-1), upper bidiagonal
    zero_block_verified: bool


def block_decompose(G: GramMatrix, strict: bool = True) -> BlockDecomposition:
    """Split G into [[A, B], [0, C]] and verify the structural zeros.

    Checks that the bottom-left (m-1) x m block is exactly zero, that B is
    zero away from its (m, 1) corner, and that A is tridiagonal.  With
    ``strict`` (default) a violation raises :class:`StructuralError`
    carrying the offending (ell, k); otherwise it only clears
    ``zero_block_verified``.  Valid for ``x in [-a/2, 0]``.
    """
    if G.x > 0.0:
        raise DomainError("block structure is defined for x in [-a/2, 0], got x=%r" % G.x)
    m = G.m
    E = G.entries
    A = E[:m, :m].copy()
    B = E[:m, m:].copy()
    C = E[m:, m:].copy()
    off = m - 1

    def fail(r, c):
        ell = r - off
        k = c - off
        msg = "unexpected nonzero entry (ell=%d, k=%d) = %r at x=%r" % (ell, k, E[r, c], G.x)
        if strict:
            raise StructuralError(msg, ell=ell, k=k)
        return False

    ok = True
    for r in range(m, 2 * m - 1):  # zero block
        for c in range(m):
            if E[r, c] != 0.0:
                ok = fail(r, c) and ok
    for r in range(m):  # B: only (m, 1), i.e. array (m-1, m), may be nonzero
        for c in range(m, 2 * m - 1):
            if (r, c) != (m - 1, m) and E[r, c] != 0.0:
                ok = fail(r, c) and ok
    for r in range(m):  # A tridiagonal
        for c in range(m):
            if abs(r - c) > 1 and E[r, c] != 0.0:
                ok = fail(r, c) and ok
    return BlockDecomposition(A=A, B=B, C=C, zero_block_verified=ok)


def det_direct(G) -> float:
    """Determinant by row elimination with partial pivoting (0 for singular).

    Accepts a :class:`GramMatrix` or any square array; this is the
    independent oracle against which the closed forms are checked.
    """
    arr = G.entries if isinstance(G, GramMatrix) else np.asarray(G, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DomainError("need a square matrix, got shape %r" % (arr.shape,))
    return float(_kernels.det_batch(arr[None, :, :])[0])


@dataclass(frozen=True)
class CaseLabel:
    kind: str  # "product" | "sm" | "zm"
    ell: int | None = None

    @staticmethod
    def zm(ell: int) -> "CaseLabel":
        return CaseLabel(kind="zm", ell=int(ell))

    def __str__(self) -> str:
        if self.kind == "zm":
            return "ZmCase(%d)" % self.ell
        return "ProductCase" if self.kind == "product" else "SmCase"


PRODUCT_CASE = CaseLabel(kind="product")
SM_CASE = CaseLabel(kind="sm")


def locate_case(p: LatticeParams, m: int, x) -> CaseLabel:
    """Which determinant formula applies at ``x in [-a/2, 0]``.

    Product case when ``N/2 - 1/b <= a - N/2`` (then the diagonal product
    holds for every x).  Otherwise x falls either in the closed S set
    (diagonal product) or strictly inside the exchange interval

        ( -ell a + (ell+1)/b - N/2,  N/2 + ell/b - (ell+1) a )

    for a unique ``ell in {1-m, ..., -1}`` (Z case, 2x2 minor).  Interval
    endpoints are compared exactly as written; ties belong to the S case.
    """
    m = _check_m(m)
    N, a, b = p.N, p.a, p.b
    if x < -a / 2 or x > 0:
        raise DomainError("x must lie in [-a/2, 0], got %r" % x)
    if N / 2 - 1 / b <= a - N / 2:
        return PRODUCT_CASE
    for ell in range(1 - m, 0):
        lo = -ell * a + (ell + 1) / b - N / 2
        hi = N / 2 + ell / b - (ell + 1) * a
        if lo < x < hi:
            return CaseLabel.zm(ell)
    return SM_CASE


def submatrix_det_2x2(w: Window, p: LatticeParams, k: int, x) -> float:
    """Determinant of the 2x2 exchange minor for column pair (k, k-1):

    g(x+k/b-ka) g(x+(k-1)/b-(k-1)a) - g(x+(k-1)/b-ka) g(x+k/b-(k-1)a).
    """
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1:
        raise DomainError("k must be a positive integer, got %r" % (k,))
    N, a, b, inv_b = p.kernel_floats()
    x = float(x)
    if x < -a / 2.0 or x > 0.0:
        raise DomainError("x must lie in [-a/2, 0], got %r" % x)
    args = np.array(
        [
            (x + k * inv_b) - k * a,
            (x + (k - 1) * inv_b) - (k - 1) * a,
            (x + (k - 1) * inv_b) - k * a,
            (x + k * inv_b) - (k - 1) * a,
        ]
    )
    v = w.eval_many(args)
    return float(v[0] * v[1] - v[2] * v[3])


def det_formula_sweep(w: Window, p: LatticeParams, m: int, xs) -> np.ndarray:
    """Closed-form |G_m(x)| for every x in ``xs`` (vectorized).

    Points with x > 0 are mirrored to -x first (|G_m(-x)| = |G_m(x)| by the
    evenness of the window).  Requires ``(a, b)`` in band T(m), where the
    closed forms are proven.
    """
    m = _check_m(m)
    require_band(p, m)
    N, a, b, inv_b = p.kernel_floats()
    xs = np.asarray(xs, dtype=np.float64).ravel()
    if np.any(np.abs(xs) > a / 2.0):
        raise DomainError("all x must lie in [-a/2, a/2]")
    z = np.where(xs > 0.0, -xs, xs)

    ks = np.arange(1 - m, m, dtype=np.float64)
    kb = ks * inv_b
    ka = ks * a
    diag = w.eval_many((z[:, None] + kb[None, :]) - ka[None, :])
    dets = np.prod(diag, axis=1)

    if N / 2.0 - inv_b <= a - N / 2.0:
        return dets

    for ell in range(1 - m, 0):
        lo = -ell * a + (ell + 1) * inv_b - N / 2.0
        hi = N / 2.0 + ell * inv_b - (ell + 1) * a
        mask = (z > lo) & (z < hi)
        if not mask.any():
            continue
        zi = z[mask]
        k0 = -ell
        c0 = k0 + m - 1
        c1 = k0 - 1 + m - 1
        off1 = w.eval_many((zi + (k0 - 1) * inv_b) - k0 * a)
        off2 = w.eval_many((zi + k0 * inv_b) - (k0 - 1) * a)
        minor = diag[mask, c0] * diag[mask, c1] - off1 * off2
        rest = diag[mask].copy()
        rest[:, c0] = 1.0
        rest[:, c1] = 1.0
        dets[mask] = minor * np.prod(rest, axis=1)
    return dets


def det_formula(w: Window, p: LatticeParams, m: int, x) -> float:
    """Closed-form |G_m(x)| (scalar); see :func:`det_formula_sweep`."""
    return float(det_formula_sweep(w, p, m, np.array([float(x)]))[0])


def gram_to_csv(G: GramMatrix, path) -> None:
    """Debug dump of the matrix in display order (top row ell = 1-m)."""
    N, a, b, _ = G.params.kernel_floats()
    lines = [
        "# gram matrix dump",
        "# N = %r" % N,
        "# a = %r" % a,
        "# b = %r" % b,
        "# m = %d" % G.m,
        "# x = %r" % G.x,
        "# rows: ell = %d (top) .. %d (bottom); cols: k = %d .. %d"
        % (1 - G.m, G.m - 1, 1 - G.m, G.m - 1),
    ]
    for r in range(G.size):
        lines.append(",".join(repr(float(v)) for v in G.entries[r]))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")
