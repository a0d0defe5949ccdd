"""Compactly supported even windows.

Two kinds are supported:

* cardinal B-splines ``g_N`` (N-fold convolution power of the unit
  indicator), built exactly as piecewise polynomials with rational
  coefficients and lowered to float arrays for the kernels;
* tabulated windows given by samples on the left half-support
  ``[-N/2, 0]`` and extended to the right half by evenness.

Evaluation conventions (shared with :mod:`gaborspline._kernels`):

* the support test is symbolic: ``|x|`` is compared against the half-width,
  so values outside the support are exactly 0;
* every evaluation is performed at ``-|x|``, which makes evenness exact;
* pieces are half-open ``[left, right)``, the last piece is closed, and a
  breakpoint belongs to the piece on its right.

All window objects are immutable after construction and every operation
here is pure, so they are safe to share across worker threads/processes.
"""

from __future__ import annotations

import csv
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import DomainError

__all__ = [
    "PiecewisePolynomial",
    "Window",
    "MembershipReport",
    "make_bspline",
    "make_tabulated",
    "load_window_csv",
    "eval_window",
    "second_difference",
    "check_membership_VNa",
]

DEFAULT_MEMBERSHIP_GRID = 4096
DEFAULT_MEMBERSHIP_TOL = 1e-12


# ---------------------------------------------------------------------------
# exact piecewise polynomials (rational coefficients, local coordinates)
# ---------------------------------------------------------------------------

def _poly_eval(coeffs, u):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * u + c
    return acc


def _poly_shift(coeffs, s):
    """Coefficients of ``p(u + s)`` given those of ``p(u)`` (exact)."""
    n = len(coeffs)
    out = [Fraction(0)] * n
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        for i in range(j + 1):
            out[i] += c * math.comb(j, i) * s ** (j - i)
    return out


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Exact piecewise polynomial supported on ``[-h, h]``.

    ``pieces[i]`` holds the coefficients (constant term first) of the
    polynomial in the local coordinate ``x - breakpoints[i]``, valid on
    ``[breakpoints[i], breakpoints[i+1])``.
    """

    breakpoints: tuple
    pieces: tuple
    support_halfwidth: Fraction

    def evaluate_exact(self, x):
        x = Fraction(x)
        if x < -self.support_halfwidth or x > self.support_halfwidth:
            return Fraction(0)
        i = bisect_right(self.breakpoints, x) - 1
        i = min(max(i, 0), len(self.pieces) - 1)
        return _poly_eval(self.pieces[i], x - self.breakpoints[i])

    def integral(self):
        total = Fraction(0)
        for i, p in enumerate(self.pieces):
            w = self.breakpoints[i + 1] - self.breakpoints[i]
            anti = [c / (j + 1) for j, c in enumerate(p)]
            total += _poly_eval([Fraction(0)] + anti, w)
        return total

    def convolve_unit_box(self):
        """Exact convolution with the indicator of ``[-1/2, 1/2]``."""
        half = Fraction(1, 2)
        bks = self.breakpoints
        antis = []
        c = Fraction(0)
        for i, p in enumerate(self.pieces):
            anti = [c] + [ci / (j + 1) for j, ci in enumerate(p)]
            antis.append(anti)
            c = _poly_eval(anti, bks[i + 1] - bks[i])
        mass = c

        def antideriv_poly(y):
            # polynomial in u for the running integral evaluated at y + u,
            # valid while y + u stays inside one piece of the antiderivative
            if y < bks[0]:
                return [Fraction(0)]
            if y >= bks[-1]:
                return [mass]
            i = bisect_right(bks, y) - 1
            i = min(i, len(self.pieces) - 1)
            return _poly_shift(antis[i], y - bks[i])

        new_bks = sorted({t - half for t in bks} | {t + half for t in bks})
        new_pieces = []
        for left in new_bks[:-1]:
            hi = antideriv_poly(left + half)
            lo = antideriv_poly(left - half)
            deg = max(len(hi), len(lo))
            hi = hi + [Fraction(0)] * (deg - len(hi))
            lo = lo + [Fraction(0)] * (deg - len(lo))
            new_pieces.append(tuple(h - l for h, l in zip(hi, lo)))
        return PiecewisePolynomial(
            breakpoints=tuple(new_bks),
            pieces=tuple(new_pieces),
            support_halfwidth=self.support_halfwidth + half,
        )

    def as_float_arrays(self):
        breaks = np.array([float(b) for b in self.breakpoints], dtype=np.float64)
        width = max(len(p) for p in self.pieces)
        coeffs = np.zeros((len(self.pieces), width), dtype=np.float64)
        for i, p in enumerate(self.pieces):
            for j, c in enumerate(p):
                coeffs[i, j] = float(c)
        return breaks, coeffs


# ---------------------------------------------------------------------------
# windows
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Window:
    """Even, real-valued window supported on ``[-h, h]``.

    ``breaks``/``coeffs`` are the lowered float piece arrays consumed by the
    kernels.  ``order`` is the spline order N for B-spline windows, and
    ``pp`` keeps the exact rational construction around for verification.
    """

    kind: str
    support_halfwidth: float
    breaks: np.ndarray = field(repr=False)
    coeffs: np.ndarray = field(repr=False)
    order: int | None = None
    pp: PiecewisePolynomial | None = field(default=None, repr=False)

    @property
    def support_length(self) -> float:
        return 2.0 * self.support_halfwidth

    def __call__(self, x):
        return eval_window(self, x)

    def eval_many(self, xs):
        return _kernels.eval_many(self.breaks, self.coeffs, self.support_halfwidth, xs)


def make_bspline(N) -> Window:
    """Cardinal B-spline of order ``N`` (degree ``N - 1``, support ``[-N/2, N/2]``).

    Built by repeated exact convolution of the unit indicator with itself:
    each step integrates the previous piecewise polynomial over a sliding
    unit box via its rational antiderivative.
    """
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)):
        raise DomainError("spline order must be a positive integer, got %r" % (N,))
    if N < 1:
        raise DomainError("spline order must be >= 1, got %d" % N)
    pp = PiecewisePolynomial(
        breakpoints=(Fraction(-1, 2), Fraction(1, 2)),
        pieces=((Fraction(1),),),
        support_halfwidth=Fraction(1, 2),
    )
    for _ in range(int(N) - 1):
        pp = pp.convolve_unit_box()
    breaks, coeffs = pp.as_float_arrays()
    return Window(
        kind="bspline",
        support_halfwidth=float(pp.support_halfwidth),
        breaks=breaks,
        coeffs=coeffs,
        order=int(N),
        pp=pp,
    )


def make_tabulated(xs, values, support_halfwidth) -> Window:
    """Window from samples on ``[-h, 0]``, linearly interpolated, mirrored.

    Samples must be strictly increasing in x and lie inside ``[-h, 0]``;
    the function is held constant between the support edge and the first
    sample (and between the last sample and 0) when samples do not reach
    the ends.
    """
    half = float(support_halfwidth)
    if not (half > 0.0 and math.isfinite(half)):
        raise DomainError("support halfwidth must be positive and finite")
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(values, dtype=np.float64)
    if xs.ndim != 1 or xs.shape != ys.shape or xs.size == 0:
        raise DomainError("need matching non-empty 1-d sample arrays")
    if not (np.isfinite(xs).all() and np.isfinite(ys).all()):
        raise DomainError("samples must be finite")
    if np.any(np.diff(xs) <= 0):
        raise DomainError("sample positions must be strictly increasing")
    if xs[0] < -half or xs[-1] > 0.0:
        raise DomainError("sample positions must lie in [-halfwidth, 0]")

    lefts = []
    pieces = []
    if xs[0] > -half:
        lefts.append(-half)
        pieces.append((ys[0], 0.0))
    for i in range(xs.size - 1):
        slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
        lefts.append(xs[i])
        pieces.append((ys[i], slope))
    if xs[-1] < 0.0:
        lefts.append(xs[-1])
        pieces.append((ys[-1], 0.0))
    if not pieces:  # single sample exactly at x = 0
        lefts.append(-half)
        pieces.append((ys[0], 0.0))
    breaks = np.array(lefts + [0.0], dtype=np.float64)
    coeffs = np.array(pieces, dtype=np.float64)
    return Window(
        kind="tabulated",
        support_halfwidth=half,
        breaks=breaks,
        coeffs=coeffs,
    )


def load_window_csv(path, support_length) -> Window:
    """Load a tabulated window from a two-column CSV ``(x, value)`` with header.

    Sample positions must lie in ``[-N/2, 0]`` where ``N = support_length``
    is declared by the caller (CLI flag); the right half is mirrored.
    """
    N = float(support_length)
    if not (N > 0.0 and math.isfinite(N)):
        raise DomainError("support length must be positive and finite")
    xs = []
    ys = []
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DomainError("empty window CSV: %s" % path)
    for irow, row in enumerate(rows):
        if len(row) < 2:
            raise DomainError("window CSV row %d needs two columns" % irow)
        try:
            x = float(row[0])
            y = float(row[1])
        except ValueError:
            if irow == 0:
                continue  # header
            raise DomainError("bad number in window CSV row %d" % irow) from None
        xs.append(x)
        ys.append(y)
    if not xs:
        raise DomainError("window CSV has no data rows: %s" % path)
    order = np.argsort(xs, kind="stable")
    xs = np.asarray(xs, dtype=np.float64)[order]
    ys = np.asarray(ys, dtype=np.float64)[order]
    return make_tabulated(xs, ys, N / 2.0)


def eval_window(w: Window, x) -> float:
    """Value of the window at ``x``; exactly 0 whenever ``|x|`` exceeds the support."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("window argument must be finite, got %r" % x)
    return _kernels.eval_one(w.breaks, w.coeffs, w.support_halfwidth, x)


def second_difference(w: Window, a, x) -> float:
    """g(x) - 2 g(x - a) + g(x - 2a)."""
    a = float(a)
    x = float(x)
    if not (a > 0.0 and math.isfinite(a)):
        raise DomainError("step a must be positive and finite")
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    v = w.eval_many(np.array([x, x - a, x - 2.0 * a]))
    return float(v[0] - 2.0 * v[1] + v[2])


# ---------------------------------------------------------------------------
# membership in the generalized-spline class
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MembershipReport:
    """Outcome of the sampled class checks for a window and shift ``a``.

    ``worst_violation`` is the largest excess over the allowed tolerance
    among all failing checks (0 when everything passes; a strictness
    failure with zero numeric excess reports the smallest positive float).
    """

    a1_pass: bool
    a2_pass: bool
    a3_pass: bool
    worst_violation: float
    witness_points: tuple

    @property
    def passed(self) -> bool:
        return self.a1_pass and self.a2_pass and self.a3_pass


def check_membership_VNa(
    w: Window,
    a,
    grid_points: int = DEFAULT_MEMBERSHIP_GRID,
    tol: float = DEFAULT_MEMBERSHIP_TOL,
) -> MembershipReport:
    """Sampled check of the three class conditions for shift ``a``.

    * symmetry: ``|g(x) - g(-x)| <= tol`` on a grid over ``[0, N/2]``;
    * strict increase of consecutive samples on ``[-N/2, 0]``;
    * nonnegative second difference ``g(x) - 2 g(x-a) + g(x-2a) >= -tol``
      on ``[-N/2, -N/4 + 3a/4]`` when ``a < N/3``, else on ``[-N/2, 0]``
      plus the single point ``-N/4 + 3a/4``.

    Witness points are recorded for every failing sample.
    """
    a = float(a)
    half = w.support_halfwidth
    N = 2.0 * half
    if not (0.0 < a < N):
        raise DomainError("shift a must satisfy 0 < a < %g, got %g" % (N, a))
    if grid_points < 2:
        raise DomainError("grid_points must be >= 2")
    if tol < 0.0:
        raise DomainError("tol must be nonnegative")

    witnesses = []
    violations = [0.0]
    tiny = math.ulp(0.0)

    # (A1) evenness
    xs = np.linspace(0.0, half, grid_points)
    asym = np.abs(w.eval_many(xs) - w.eval_many(-xs))
    a1_bad = asym > tol
    a1_pass = not bool(a1_bad.any())
    if not a1_pass:
        witnesses.extend(xs[a1_bad].tolist())
        violations.append(float(asym.max() - tol))

    # (A2) strict increase on the left half-support
    ts = np.linspace(-half, 0.0, grid_points)
    diffs = np.diff(w.eval_many(ts))
    a2_bad = diffs <= 0.0
    a2_pass = not bool(a2_bad.any())
    if not a2_pass:
        witnesses.extend(ts[1:][a2_bad].tolist())
        violations.append(max(float(-diffs.min()), tiny))

    # (A3) nonnegative second difference on the branch-dependent region
    x_star = -N / 4.0 + 0.75 * a
    if a < N / 3.0:
        xs3 = np.linspace(-half, x_star, grid_points)
    else:
        xs3 = np.append(np.linspace(-half, 0.0, grid_points), x_star)
    d2 = (
        w.eval_many(xs3)
        - 2.0 * w.eval_many(xs3 - a)
        + w.eval_many(xs3 - 2.0 * a)
    )
    a3_bad = d2 < -tol
    a3_pass = not bool(a3_bad.any())
    if not a3_pass:
        witnesses.extend(xs3[a3_bad].tolist())
        violations.append(float(-(d2.min()) - tol))

    worst = max(violations)
    if (a1_pass and a2_pass and a3_pass):
        worst = 0.0
    elif worst <= 0.0:
        worst = tiny
    return MembershipReport(
        a1_pass=a1_pass,
        a2_pass=a2_pass,
        a3_pass=a3_pass,
        worst_violation=worst,
        witness_points=tuple(witnesses),
    )
