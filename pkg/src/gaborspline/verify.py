"""Independent numerical certification.

* :func:`duality_residual` checks the finite duality condition

      sum_k g(x - l/b + k a) h(x + k a) = b delta_{l,0},   |l| <= m-1,

  on a midpoint grid of [-a/2, a/2]; the l = 0 row is measured against b,
  the others against 0.  h can be read by re-solving at each grid point
  (default, no interpolation error) or by nearest-sample lookup into a
  built dual (exact only when the grids align, i.e. grid_size equals twice
  the dual's samples_per_cell).

* :func:`bessel_bound_walnut` estimates an upper frame bound from the
  standard absolute-overlap sum; it is a grid-sup heuristic, never a
  certified bound.  :func:`lower_bound_via_dual` converts Bessel bounds of
  a dual pair into a two-sided estimate (A >= 1/B_h).

* :func:`positivity_sweep` and :func:`oracle_crosscheck` certify the
  determinant invariants (strict positivity on T(m); closed forms agree
  with elimination).

All sweeps are pure with deterministic reductions.  Reports serialize to
``key = value`` text via their ``to_text`` methods.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .dual import DualWindow, solve_duals
from .errors import DomainError, InvariantViolationError, RegionError
from .gram import _check_m, det_formula_sweep, gram_matrices, require_band
from .regions import LatticeParams, classify
from .windows import Window

__all__ = [
    "DualityReport",
    "BoundEstimate",
    "CrosscheckReport",
    "duality_residual",
    "bessel_bound_walnut",
    "lower_bound_via_dual",
    "positivity_sweep",
    "oracle_crosscheck",
]

_CHUNK_ENTRIES = 2_000_000
# fixed grid phase: keeps doubled grids nested (monotone sup estimates) while
# staying clear of lattice-aligned points whose measure-zero spikes would
# inflate an essential-sup estimate
_WALNUT_PHASE = math.sqrt(2.0) / 2048.0


def _midpoint_grid(a: float, grid_size: int) -> np.ndarray:
    return (np.arange(grid_size) + 0.5) * (a / grid_size) - a / 2.0


@dataclass(frozen=True)
class DualityReport:
    per_ell_max_residual: dict
    grid_size: int
    tol: float
    passed: bool
    mode: str
    params: LatticeParams
    m: int
    per_x_residual: np.ndarray | None = field(default=None, repr=False)

    def to_text(self) -> str:
        lines = [
            "kind = duality",
            "N = %r" % float(self.params.N),
            "a = %r" % float(self.params.a),
            "b = %r" % float(self.params.b),
            "m = %d" % self.m,
            "mode = %s" % self.mode,
            "grid_size = %d" % self.grid_size,
            "tol = %r" % self.tol,
            "pass = %s" % ("true" if self.passed else "false"),
        ]
        for ell in sorted(self.per_ell_max_residual):
            lines.append("residual_ell_%d = %r" % (ell, self.per_ell_max_residual[ell]))
        return "\n".join(lines) + "\n"


def duality_residual(
    w: Window,
    d: DualWindow | None,
    p: LatticeParams,
    m: int,
    grid_size: int = 4096,
    tol: float = 1e-10,
    mode: str = "resolve",
    keep_per_x: bool = False,
) -> DualityReport:
    """Max duality defect per modulation index l over a midpoint grid.

    ``mode="resolve"`` recomputes h(x + k a) by solving at each grid point
    (mirrored to [-a/2, 0]); ``mode="lookup"`` reads nearest samples from
    ``d``.  A provided dual must match (p, m).
    """
    m = _check_m(m)
    if mode not in ("resolve", "lookup"):
        raise DomainError("mode must be 'resolve' or 'lookup', got %r" % mode)
    if grid_size < 1:
        raise DomainError("grid_size must be >= 1")
    if d is not None:
        dN, da, db, _ = d.params.kernel_floats()
        pN, pa, pb, _ = p.kernel_floats()
        if d.m != m or (dN, da, db) != (pN, pa, pb):
            raise DomainError("dual window parameters do not match the request")
    if mode == "lookup" and d is None:
        raise DomainError("lookup mode needs a built dual window")

    N, a, b, inv_b = p.kernel_floats()
    n = 2 * m - 1
    xs = _midpoint_grid(a, grid_size)
    ks = np.arange(1 - m, m, dtype=np.float64)
    center = m - 1

    per_ell = np.zeros(n)
    per_x = np.empty((grid_size, n)) if keep_per_x else None
    step = max(1, _CHUNK_ENTRIES // (n * n))
    for s in range(0, grid_size, step):
        xc = xs[s : s + step]
        mats = gram_matrices(w, p, m, xc)
        if mode == "resolve":
            hs = solve_duals(w, p, m, np.where(xc > 0.0, -xc, xc))
            flip = xc > 0.0
            if flip.any():
                hs[flip] = hs[flip, ::-1]
        else:
            hs = d.values_at(xc[:, None] + ks[None, :] * a)
        res = np.einsum("gij,gj->gi", mats, hs)
        res[:, center] -= b
        np.abs(res, out=res)
        if per_x is not None:
            per_x[s : s + step] = res
        per_ell = np.maximum(per_ell, res.max(axis=0))

    per_ell_map = {int(ks[i]): float(per_ell[i]) for i in range(n)}
    return DualityReport(
        per_ell_max_residual=per_ell_map,
        grid_size=grid_size,
        tol=float(tol),
        passed=bool(per_ell.max() <= tol),
        mode=mode,
        params=p,
        m=m,
        per_x_residual=per_x,
    )


def bessel_bound_walnut(w: Window, p: LatticeParams, grid_size: int = 4096) -> float:
    """Grid-sup estimate of an upper frame bound for a bounded window:

        (1/b) sum_j sup_x sum_n |g(x - n a) g(x - n a - j/b)|.

    Both sums are finite by compact support.  The sup runs over one shift
    period with a fixed irrational phase, so doubling ``grid_size`` refines
    the same grid and the estimate never decreases.  Documented as an
    estimate up to grid resolution, not a certified bound.
    """
    if grid_size < 1:
        raise DomainError("grid_size must be >= 1")
    N, a, b, _ = p.kernel_floats()
    half = w.support_halfwidth
    xs = a * _WALNUT_PHASE + np.arange(grid_size) * (a / grid_size)
    jmax = int(math.floor(2.0 * half * b)) + 1
    total = 0.0
    for j in range(-jmax, jmax + 1):
        shift = j / b
        n_lo = math.floor((-half - abs(shift)) / a) - 1
        n_hi = math.ceil((a + half + abs(shift)) / a) + 1
        acc = np.zeros(grid_size)
        for n in range(n_lo, n_hi + 1):
            base = xs - n * a
            acc += np.abs(w.eval_many(base) * w.eval_many(base - shift))
        total += float(acc.max())
    return total / b


@dataclass(frozen=True)
class BoundEstimate:
    lower_A: float
    upper_B: float
    method: str = "walnut-grid-estimate"

    def to_text(self) -> str:
        return (
            "kind = frame_bounds\nmethod = %s\nlower_A = %r\nupper_B = %r\n"
            % (self.method, self.lower_A, self.upper_B)
        )


def lower_bound_via_dual(Bg: float, Bh: float) -> BoundEstimate:
    """Two-sided estimate from Bessel bounds of a dual pair: A >= 1/B_h, B <= B_g."""
    if not (Bg > 0.0 and Bh > 0.0):
        raise DomainError("Bessel bounds must be positive, got %r, %r" % (Bg, Bh))
    return BoundEstimate(lower_A=1.0 / Bh, upper_B=float(Bg))


def positivity_sweep(w: Window, p: LatticeParams, m: int, grid_size: int = 4096) -> float:
    """Minimum of |G_m(x)| (elimination path) over a midpoint grid of [-a/2, a/2].

    Requires ``classify(p) = T(m)``; raises :class:`InvariantViolationError`
    with a witness point when the minimum is not strictly positive.
    """
    m = _check_m(m)
    label = classify(p)
    if not (label.kind == "t" and label.m == m):
        raise RegionError(
            "positivity sweep requires parameters in band T(%d); classify gave %s" % (m, label)
        )
    N, a, b, inv_b = p.kernel_floats()
    n = 2 * m - 1
    xs = _midpoint_grid(a, grid_size)
    best = math.inf
    witness = None
    step = max(1, _CHUNK_ENTRIES // (n * n))
    for s in range(0, grid_size, step):
        xc = xs[s : s + step]
        dets = _kernels.det_batch(gram_matrices(w, p, m, xc))
        i = int(np.argmin(dets))
        if dets[i] < best:
            best = float(dets[i])
            witness = float(xc[i])
    if not (best > 0.0):
        raise InvariantViolationError(
            "determinant not strictly positive: |G_m(%r)| = %r" % (witness, best),
            witness_x=witness,
        )
    return best


@dataclass(frozen=True)
class CrosscheckReport:
    max_rel_deviation: float
    worst_x: float
    rel_tol: float
    grid_size: int
    passed: bool

    def to_text(self) -> str:
        return (
            "kind = det_crosscheck\ngrid_size = %d\nrel_tol = %r\n"
            "max_rel_deviation = %r\nworst_x = %r\npass = %s\n"
            % (
                self.grid_size,
                self.rel_tol,
                self.max_rel_deviation,
                self.worst_x,
                "true" if self.passed else "false",
            )
        )


def oracle_crosscheck(
    w: Window,
    p: LatticeParams,
    m: int,
    grid_size: int = 4096,
    rel_tol: float = 1e-12,
) -> CrosscheckReport:
    """Closed-form determinant vs elimination over a midpoint grid.

    Deviation at x is ``|formula - direct| / max(1, |direct|)``; the report
    passes when the maximum stays within ``rel_tol``.
    """
    m = _check_m(m)
    label = classify(p)
    if not (label.kind == "t" and label.m == m):
        raise RegionError(
            "crosscheck requires parameters in band T(%d); classify gave %s" % (m, label)
        )
    require_band(p, m)
    N, a, b, inv_b = p.kernel_floats()
    n = 2 * m - 1
    xs = _midpoint_grid(a, grid_size)
    worst = -1.0
    worst_x = 0.0
    step = max(1, _CHUNK_ENTRIES // (n * n))
    for s in range(0, grid_size, step):
        xc = xs[s : s + step]
        direct = _kernels.det_batch(gram_matrices(w, p, m, xc))
        formula = det_formula_sweep(w, p, m, xc)
        dev = np.abs(formula - direct) / np.maximum(1.0, np.abs(direct))
        i = int(np.argmax(dev))
        if dev[i] > worst:
            worst = float(dev[i])
            worst_x = float(xc[i])
    return CrosscheckReport(
        max_rel_deviation=worst,
        worst_x=worst_x,
        rel_tol=float(rel_tol),
        grid_size=grid_size,
        passed=worst <= rel_tol,
    )
