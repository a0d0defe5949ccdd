"""Classification of lattice parameters ``(a, b)`` for a window of support length N.

The frame-guaranteeing bands ``T(m)`` tile the strip ``0 < a < N/2``,
``0 < b < 2/N``: for each ``a`` the b-axis splits into contiguous intervals

    m = 1:   b in (0, 2/(N+a)]
    m >= 2:  b in (2(m-1)/(N+(2m-3)a), 2m/(N+(2m-1)a)],
             provided N(m-2)/(2m-3) < a < N/2,

all subject to the strict cap ``b < 2/N``.  Outside the bands the labels are

    NotFrame(DensityViolation)  when a*b >= 1,
    NotFrame(ShiftTooLarge)     when a >= N (and a*b < 1),
    LargeShift                  when N/2 <= a < N and b < 1/a
                                (a frame region for windows positive on the
                                open support),
    Unknown                     everywhere else; in particular for
                                a < N/2, 2/N <= b, a*b < 1 nothing is claimed.

All predicates are plain rational formulas, so passing exact ``Fraction``
values for a and b (the CLI accepts "p/q" strings) makes the half-open
boundary decisions exact.  Everything here is pure; region maps can be
assembled row-parallel with a deterministic result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError

__all__ = [
    "LatticeParams",
    "RegionLabel",
    "TmInterval",
    "RegionMap",
    "tm_bounds",
    "classify",
    "m_index",
    "region_map",
    "region_map_to_csv",
    "region_map_to_svg",
]


def _is_finite_positive(v) -> bool:
    if isinstance(v, Fraction):
        return v > 0
    try:
        f = float(v)
    except (TypeError, OverflowError):
        return False
    return math.isfinite(f) and f > 0.0


@dataclass(frozen=True)
class LatticeParams:
    """Support length N, time shift a, frequency shift b (all > 0).

    Fields may be floats or exact ``Fraction`` values; classification
    arithmetic follows the field types.
    """

    N: object
    a: object
    b: object

    def __post_init__(self):
        for name in ("N", "a", "b"):
            if not _is_finite_positive(getattr(self, name)):
                raise DomainError("%s must be positive and finite, got %r" % (name, getattr(self, name)))

    def kernel_floats(self):
        """(N, a, b, 1/b) as floats, the single conversion point for kernels."""
        N = float(self.N)
        a = float(self.a)
        b = float(self.b)
        return N, a, b, 1.0 / b


@dataclass(frozen=True)
class RegionLabel:
    kind: str  # "not_frame" | "t" | "large_shift" | "unknown"
    m: int | None = None
    reason: str | None = None  # "DensityViolation" | "ShiftTooLarge"

    @staticmethod
    def not_frame(reason: str) -> "RegionLabel":
        return RegionLabel(kind="not_frame", reason=reason)

    @staticmethod
    def t(m: int) -> "RegionLabel":
        return RegionLabel(kind="t", m=int(m))

    @staticmethod
    def large_shift() -> "RegionLabel":
        return RegionLabel(kind="large_shift")

    @staticmethod
    def unknown() -> "RegionLabel":
        return RegionLabel(kind="unknown")

    @property
    def is_frame_guaranteed(self) -> bool:
        return self.kind in ("t", "large_shift")

    def __str__(self) -> str:
        if self.kind == "not_frame":
            return "NotFrame(%s)" % self.reason
        if self.kind == "t":
            return "T(%d)" % self.m
        if self.kind == "large_shift":
            return "LargeShift"
        return "Unknown"

    def csv_fields(self):
        """(label, m) pair for CSV export; m is empty unless a T band."""
        if self.kind == "t":
            return "T", str(self.m)
        return str(self), ""


@dataclass(frozen=True)
class TmInterval:
    """A b-interval ``(b_lo, b_hi]`` (or ``(b_lo, b_hi)`` when the 2/N cap trims it)."""

    b_lo: object
    b_hi: object
    hi_inclusive: bool = True

    def contains(self, b) -> bool:
        if not (self.b_lo < b):
            return False
        return b <= self.b_hi if self.hi_inclusive else b < self.b_hi


def _a_lower(N, m: int):
    # below this the band does not reach shift a; increases to N/2 with m
    return N * (m - 2) / (2 * m - 3)


def _b_upper(N, a, m: int):
    return 2 * m / (N + (2 * m - 1) * a)


def tm_bounds(N, a, m: int):
    """The b-interval of band ``m`` at shift ``a``, or None.

    For ``m = 1`` the interval is ``(0, 2/(N+a)]`` whenever ``0 < a < N/2``;
    for ``m >= 2`` it is ``(2(m-1)/(N+(2m-3)a), 2m/(N+(2m-1)a)]`` whenever
    ``N(m-2)/(2m-3) < a < N/2``.  The strict cap ``b < 2/N`` is applied to
    the returned interval; None is returned when the shift condition fails
    or the interval is empty after the cap.
    """
    if m < 1:
        raise DomainError("band index m must be >= 1")
    if not (0 < a and a < N / 2):
        return None
    if m == 1:
        lo = 0
    else:
        if not (_a_lower(N, m) < a):
            return None
        lo = _b_upper(N, a, m - 1)
    hi = _b_upper(N, a, m)
    cap = 2 / N
    if hi < cap:
        return TmInterval(b_lo=lo, b_hi=hi, hi_inclusive=True)
    if lo < cap:
        return TmInterval(b_lo=lo, b_hi=cap, hi_inclusive=False)
    return None


def _scan_m(N, a, b):
    """Index of the band containing ``(a, b)``, or None.

    The band intervals are contiguous in b (the upper endpoint of band m is
    the lower endpoint of band m+1), so the candidate index solves
    ``b <= 2m/(N + (2m-1)a)`` for the smallest m; the closed form is checked
    against the literal interval predicates of the neighbouring indices to
    stay robust at boundaries.
    """
    if not (0 < a and a < N / 2):
        return None
    if not (0 < b and b < 2 / N):
        return None
    # smallest m with b <= hi_m  <=>  m >= b (N - a) / (2 (1 - a b))
    est = b * (N - a) / (2 * (1 - a * b))
    m0 = max(1, math.ceil(est))
    for m in (m0 - 1, m0, m0 + 1):
        if m < 1:
            continue
        itv = tm_bounds(N, a, m)
        if itv is not None and itv.contains(b):
            return m
    return None


def classify(p: LatticeParams) -> RegionLabel:
    """Classify lattice parameters; precedence NotFrame, LargeShift, T bands.

    ``a*b >= 1`` always yields NotFrame(DensityViolation) regardless of the
    other tests; Unknown is an honest label (no frame claim either way).
    """
    N, a, b = p.N, p.a, p.b
    if a * b >= 1:
        return RegionLabel.not_frame("DensityViolation")
    if a >= N:
        return RegionLabel.not_frame("ShiftTooLarge")
    if a >= N / 2:
        if b < 1 / a:
            return RegionLabel.large_shift()
        return RegionLabel.unknown()
    m = _scan_m(N, a, b)
    if m is not None:
        return RegionLabel.t(m)
    return RegionLabel.unknown()


def m_index(p: LatticeParams):
    """Band index m when ``classify(p)`` is T(m), else None."""
    label = classify(p)
    return label.m if label.kind == "t" else None


@dataclass(frozen=True, eq=False)
class RegionMap:
    N: float
    a_axis: np.ndarray
    b_axis: np.ndarray
    labels: tuple  # labels[i][j] classifies (a_axis[i], b_axis[j])


def region_map(N, a_max, b_max, res: int) -> RegionMap:
    """Classify the ``res x res`` grid of cell-center points over ``(0, a_max] x (0, b_max]``."""
    if res < 2:
        raise DomainError("resolution must be >= 2")
    N = float(N)
    a_max = float(a_max)
    b_max = float(b_max)
    if not (N > 0 and a_max > 0 and b_max > 0):
        raise DomainError("N, a_max, b_max must be positive")
    a_axis = (np.arange(res) + 0.5) * (a_max / res)
    b_axis = (np.arange(res) + 0.5) * (b_max / res)
    labels = tuple(
        tuple(classify(LatticeParams(N, float(a), float(b))) for b in b_axis)
        for a in a_axis
    )
    return RegionMap(N=N, a_axis=a_axis, b_axis=b_axis, labels=labels)


def region_map_to_csv(rm: RegionMap, path) -> None:
    """Write ``a,b,label,m`` rows (m empty unless a T band); byte-deterministic."""
    lines = ["a,b,label,m"]
    for i in range(rm.a_axis.size):
        a_txt = repr(float(rm.a_axis[i]))
        for j in range(rm.b_axis.size):
            label, m_txt = rm.labels[i][j].csv_fields()
            lines.append("%s,%s,%s,%s" % (a_txt, repr(float(rm.b_axis[j])), label, m_txt))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


_SVG_COLORS = {
    "not_frame": "red",
    "t1": "green",
    "t2": "magenta",
    "t3+": "cyan",
    "large_shift": "yellow",
    "unknown": "white",
}


def _svg_key(label: RegionLabel) -> str:
    if label.kind == "t":
        if label.m == 1:
            return "t1"
        if label.m == 2:
            return "t2"
        return "t3+"
    return label.kind


def region_map_to_svg(rm: RegionMap, path, cell_px: int = 4) -> None:
    """Fixed-palette heat map: red NotFrame, green T(1), magenta T(2),
    cyan T(m>=3), yellow LargeShift, white Unknown.  Runs of equal labels
    along the a-axis are merged into single rectangles."""
    res_a = rm.a_axis.size
    res_b = rm.b_axis.size
    legend_h = 26
    width = res_a * cell_px
    height = res_b * cell_px + legend_h
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d">' % (width, height, width, height),
        '<rect x="0" y="0" width="%d" height="%d" fill="white"/>' % (width, height),
    ]
    for j in range(res_b):
        y = (res_b - 1 - j) * cell_px  # b grows upwards
        i = 0
        while i < res_a:
            key = _svg_key(rm.labels[i][j])
            run = 1
            while i + run < res_a and _svg_key(rm.labels[i + run][j]) == key:
                run += 1
            color = _SVG_COLORS[key]
            if color != "white":
                parts.append(
                    '<rect x="%d" y="%d" width="%d" height="%d" fill="%s"/>'
                    % (i * cell_px, y, run * cell_px, cell_px, color)
                )
            i += run
    x = 2
    y = res_b * cell_px + 6
    for key, text in (
        ("not_frame", "NotFrame"),
        ("t1", "T(1)"),
        ("t2", "T(2)"),
        ("t3+", "T(m>=3)"),
        ("large_shift", "LargeShift"),
        ("unknown", "Unknown"),
    ):
        parts.append(
            '<rect x="%d" y="%d" width="12" height="12" fill="%s" stroke="black" stroke-width="0.5"/>'
            % (x, y, _SVG_COLORS[key])
        )
        parts.append(
            '<text x="%d" y="%d" font-size="10" font-family="sans-serif">%s</text>'
            % (x + 15, y + 10, text)
        )
        x += 15 + 8 * len(text) + 12
    parts.append("</svg>")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(parts))
        fh.write("\n")
