"""Construction of the compactly supported dual window.

Inside band T(m) the matrix G_m(x) is invertible for every
``x in [-a/2, a/2]``, and the dual window h is obtained pointwise from

    G_m(x) (h(x + (1-m)a), ..., h(x), ..., h(x + (m-1)a))^T = b e_center,

where ``e_center`` selects the row ell = 0.  Solving on x in (-a/2, 0] and
mirroring to the right (h is even) defines h on its full support
``[-(2m-1)a/2, (2m-1)a/2]``.

The primary computation path is the pivoted linear solve; the closed forms
(:func:`dual_value_cramer`, the determinant products in :mod:`.gram`) serve
as verification oracles.  Solves are always performed at ``-|x|``: on
``[-a/2, 0]`` the block triangular structure keeps elimination pivots inside
the top block, so the solution components that are structurally zero (the
samples of h on the gaps ``(a/2 + ja, a + ja)``) come out as exact zeros,
and mirrored queries are exact reverses.

The built object samples midpoints of equal subintervals of (-a/2, 0]
(never the case-boundary points) and is immutable; per-x solves are
independent and parallelizable.  h is discontinuous at the odd
half-multiples of a; serialized values at those points would follow the
left-limit convention, which the sample grid never actually hits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DomainError, RegionError, SingularMatrixError
from .gram import _check_m, gram_matrices, require_band
from .regions import LatticeParams, classify
from .windows import Window, make_tabulated

__all__ = [
    "DualWindow",
    "JumpReport",
    "solve_dual_at",
    "build_dual",
    "dual_value_cramer",
    "discontinuity_probe",
    "dual_to_csv",
    "load_dual_csv",
]

SINGULARITY_RTOL = 1e-14
_CHUNK_ENTRIES = 2_000_000  # matrix entries per solve/det chunk


def _solve_chunk(w: Window, p: LatticeParams, m: int, zs: np.ndarray) -> np.ndarray:
    """Guarded solves of G_m(z) v = b e_center for z in [-a/2, 0]."""
    N, a, b, inv_b = p.kernel_floats()
    n = 2 * m - 1
    mats = gram_matrices(w, p, m, zs)
    dets = _kernels.det_batch(mats)
    norms = np.max(np.abs(mats), axis=(1, 2))
    bad = (np.abs(dets) < SINGULARITY_RTOL * norms**n) | (norms == 0.0)
    if bad.any():
        i = int(np.argmax(bad))
        raise SingularMatrixError(
            "G_m(x) numerically singular at x=%r (det=%r)" % (float(zs[i]), float(dets[i])),
            x=float(zs[i]),
            det=float(dets[i]),
        )
    rhs = np.zeros(n)
    rhs[m - 1] = b
    return _kernels.solve_batch(mats, rhs)


def solve_duals(w: Window, p: LatticeParams, m: int, zs) -> np.ndarray:
    """Vector solves at many points of [-a/2, 0], chunked; shape (len(zs), 2m-1)."""
    zs = np.ascontiguousarray(zs, dtype=np.float64)
    n = 2 * m - 1
    step = max(1, _CHUNK_ENTRIES // (n * n))
    out = np.empty((zs.size, n))
    for s in range(0, zs.size, step):
        out[s : s + step] = _solve_chunk(w, p, m, zs[s : s + step])
    return out


def solve_dual_at(w: Window, p: LatticeParams, m: int, x) -> np.ndarray:
    """Dual samples (h(x + (1-m)a), ..., h(x + (m-1)a)) at one point.

    Requires ``(a, b)`` in band T(m) and ``|x| <= a/2``.  For x > 0 the
    system is solved at -x and the solution reversed (h is even), keeping
    the numerically exact zero pattern of the left-half solves.
    """
    m = _check_m(m)
    require_band(p, m)
    N, a, b, inv_b = p.kernel_floats()
    x = float(x)
    if not math.isfinite(x) or abs(x) > a / 2.0:
        raise DomainError("x must lie in [-a/2, a/2], got %r" % x)
    z = -x if x > 0.0 else x
    sol = solve_duals(w, p, m, np.array([z]))[0]
    if x > 0.0:
        sol = sol[::-1].copy()
    return sol


@dataclass(frozen=True, eq=False)
class DualWindow:
    """Sampled dual window on a uniform grid over its support.

    Positions are the midpoints of cells of width ``a/(2 S)`` covering
    ``(-(2m-1)a/2, (2m-1)a/2)``; values at mirrored positions are equal by
    construction (the same float is stored).  ``window`` keeps the analysis
    window for re-solving probes; it is None for deserialized objects.
    """

    params: LatticeParams
    m: int
    positions: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    piece_boundaries: np.ndarray = field(repr=False)
    samples_per_cell: int
    spacing: float
    window: Window | None = field(default=None, repr=False)

    @property
    def support_halfwidth(self) -> float:
        N, a, b, _ = self.params.kernel_floats()
        return (2 * self.m - 1) * a / 2.0

    def values_at(self, q) -> np.ndarray:
        """Nearest-sample lookup; exactly 0 outside the support."""
        q = np.asarray(q, dtype=np.float64)
        flat = q.ravel()
        out = np.zeros(flat.shape, dtype=np.float64)
        inside = np.abs(flat) <= self.support_halfwidth
        if inside.any():
            qi = flat[inside]
            hi = np.searchsorted(self.positions, qi)
            lo = np.clip(hi - 1, 0, self.positions.size - 1)
            hi = np.clip(hi, 0, self.positions.size - 1)
            pick = np.where(
                np.abs(qi - self.positions[lo]) <= np.abs(self.positions[hi] - qi),
                lo,
                hi,
            )
            out[inside] = self.values[pick]
        return out.reshape(q.shape)

    def as_window(self) -> Window:
        """Tabulated window over the dual's support (for bound estimates)."""
        neg = self.positions < 0.0
        return make_tabulated(self.positions[neg], self.values[neg], self.support_halfwidth)


def build_dual(w: Window, p: LatticeParams, m: int, samples_per_cell: int = 512) -> DualWindow:
    """Solve on midpoints of (-a/2, 0], scatter to x + k a, mirror to x > 0.

    Requires ``classify(p) = T(m)``.  The resulting grid is uniform with
    spacing ``a / (2 samples_per_cell)`` and covers the full support.
    """
    m = _check_m(m)
    label = classify(p)
    if not (label.kind == "t" and label.m == m):
        raise RegionError(
            "dual construction requires parameters in band T(%d); classify gave %s"
            % (m, label)
        )
    if samples_per_cell < 1:
        raise DomainError("samples_per_cell must be >= 1")
    S = int(samples_per_cell)
    N, a, b, inv_b = p.kernel_floats()
    h = (a / 2.0) / S
    xs = (np.arange(S) + 0.5) * h - a / 2.0
    sols = solve_duals(w, p, m, xs)

    ks = np.arange(1 - m, m, dtype=np.float64)
    neg_pos = (xs[:, None] + ks[None, :] * a).ravel()
    neg_val = sols.ravel()
    positions = np.concatenate([neg_pos, -neg_pos])
    values = np.concatenate([neg_val, neg_val])
    order = np.argsort(positions, kind="stable")
    positions = positions[order]
    values = values[order]

    j = np.arange(1, m + 1, dtype=np.float64)
    bounds = (2 * j - 1) * a / 2.0
    piece_boundaries = np.concatenate([-bounds[::-1], bounds])
    return DualWindow(
        params=p,
        m=m,
        positions=positions,
        values=values,
        piece_boundaries=piece_boundaries,
        samples_per_cell=S,
        spacing=h,
        window=w,
    )


def dual_value_cramer(w: Window, p: LatticeParams, m: int, x) -> float:
    """h(x) on [-a/2, 0] via the cofactor closed form.

    h(x) = b |A~_m(x)| prod_{k=1-m}^{-1} g(x + k/b - k a) / |G_m(x)|,
    where A~_m drops the last row and column of the top-left block (the
    empty product and the 0x0 determinant are 1, so m = 1 gives b/g(x)).
    Strictly positive on [-a/2, 0].
    """
    m = _check_m(m)
    require_band(p, m)
    N, a, b, inv_b = p.kernel_floats()
    x = float(x)
    if x < -a / 2.0 or x > 0.0:
        raise DomainError("x must lie in [-a/2, 0], got %r" % x)
    mat = gram_matrices(w, p, m, np.array([x]))[0]
    det_g = float(_kernels.det_batch(mat[None])[0])
    if det_g == 0.0:
        raise SingularMatrixError("G_m(x) singular at x=%r" % x, x=x, det=det_g)
    if m == 1:
        det_tilde = 1.0
        prod = 1.0
    else:
        det_tilde = float(_kernels.det_batch(np.ascontiguousarray(mat[: m - 1, : m - 1])[None])[0])
        ks = np.arange(1 - m, 0, dtype=np.float64)
        prod = float(np.prod(w.eval_many((x + ks * inv_b) - ks * a)))
    return b * det_tilde * prod / det_g


@dataclass(frozen=True)
class JumpReport:
    """Result of probing the dual across the first piece boundary a/2."""

    location: float
    eps: float
    left_value: float
    right_value: float
    jump_detected: bool
    gap_max_abs: float  # max |h| over stored samples strictly inside (a/2, a)
    gap_all_zero: bool
    max_interior_step: float  # max step between adjacent samples in (0, a/2)


def discontinuity_probe(d: DualWindow, eps: float) -> JumpReport:
    """Estimate the one-sided values of h at a/2 and verify the gap.

    ``left`` is h(a/2 - eps), ``right`` is h(a/2 + eps); with the analysis
    window attached they come from fresh solves at x = eps - a/2, otherwise
    from nearest stored samples.  A jump is declared when the right value is
    exactly 0 and the left value exceeds ``10 eps`` times the dual's max
    amplitude.  Also reports the stored samples strictly inside (a/2, a)
    (all exactly 0 for m >= 2) and the largest step between adjacent
    samples inside (0, a/2) (small when h is continuous there).
    """
    N, a, b, _ = d.params.kernel_floats()
    if not (eps > 0.0 and math.isfinite(eps)):
        raise DomainError("eps must be positive and finite")
    if eps > d.spacing / 2.0:
        raise DomainError(
            "eps=%g exceeds half a grid cell (%g); refine the dual or shrink eps"
            % (eps, d.spacing / 2.0)
        )
    loc = a / 2.0
    if d.window is not None:
        sol = solve_dual_at(d.window, d.params, d.m, eps - loc)
        left = float(sol[d.m - 1])
        right = float(sol[d.m]) if d.m >= 2 else 0.0
    else:
        left = float(d.values_at(loc - eps))
        right = float(d.values_at(loc + eps)) if d.m >= 2 else 0.0

    scale = float(np.max(np.abs(d.values))) if d.values.size else 0.0
    gap = (d.positions > loc) & (d.positions < a)
    gap_max = float(np.max(np.abs(d.values[gap]))) if gap.any() else 0.0
    interior = (d.positions > 0.0) & (d.positions < loc)
    steps = np.abs(np.diff(d.values[interior])) if interior.sum() > 1 else np.array([0.0])
    return JumpReport(
        location=loc,
        eps=float(eps),
        left_value=left,
        right_value=right,
        jump_detected=(right == 0.0) and (left > 10.0 * eps * scale),
        gap_max_abs=gap_max,
        gap_all_zero=(gap_max == 0.0),
        max_interior_step=float(steps.max()),
    )


def dual_to_csv(d: DualWindow, path) -> None:
    """Two-column CSV (position, value) with metadata comment lines."""
    N, a, b, _ = d.params.kernel_floats()
    lines = [
        "# dual window samples",
        "# N = %r" % N,
        "# a = %r" % a,
        "# b = %r" % b,
        "# m = %d" % d.m,
        "# samples_per_cell = %d" % d.samples_per_cell,
        "# value_at_jump = left-limit",
        "position,value",
    ]
    for pos, val in zip(d.positions, d.values):
        lines.append("%r,%r" % (float(pos), float(val)))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def load_dual_csv(path) -> DualWindow:
    """Rebuild a :class:`DualWindow` from :func:`dual_to_csv` output.

    The analysis window is not serialized, so probes on the loaded object
    fall back to nearest-sample estimates.
    """
    meta = {}
    positions = []
    values = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "=" in line:
                    key, _, val = line[1:].partition("=")
                    meta[key.strip()] = val.strip()
                continue
            if line.startswith("position"):
                continue
            pos_txt, _, val_txt = line.partition(",")
            positions.append(float(pos_txt))
            values.append(float(val_txt))
    try:
        N = float(meta["N"])
        a = float(meta["a"])
        b = float(meta["b"])
        m = int(meta["m"])
        S = int(meta["samples_per_cell"])
    except KeyError as exc:
        raise DomainError("dual CSV is missing metadata line for %s" % exc) from None
    if not positions:
        raise DomainError("dual CSV has no samples: %s" % path)
    p = LatticeParams(N, a, b)
    j = np.arange(1, m + 1, dtype=np.float64)
    bounds = (2 * j - 1) * a / 2.0
    return DualWindow(
        params=p,
        m=m,
        positions=np.asarray(positions, dtype=np.float64),
        values=np.asarray(values, dtype=np.float64),
        piece_boundaries=np.concatenate([-bounds[::-1], bounds]),
        samples_per_cell=S,
        spacing=(a / 2.0) / S,
        window=None,
    )
