"""Shared parameter-sampling helpers for the test suite."""

from gaborspline import LatticeParams, classify, tm_bounds

INTERIOR_FRACTIONS = ((0.35, 0.5), (0.6, 0.25), (0.85, 0.75))


def sample_band_params(N, m, fractions=INTERIOR_FRACTIONS):
    """Deterministic parameter points strictly inside band T(m).

    Each (fa, fb) pair picks the shift at fraction fa of the band's a-range
    and the frequency at fraction fb of the (cap-trimmed) b-interval.
    """
    a_lo = 0.0 if m == 1 else N * (m - 2) / (2 * m - 3)
    a_hi = N / 2
    out = []
    for fa, fb in fractions:
        a = a_lo + fa * (a_hi - a_lo)
        itv = tm_bounds(N, a, m)
        assert itv is not None, (N, m, a)
        b = float(itv.b_lo) + fb * (float(itv.b_hi) - float(itv.b_lo))
        p = LatticeParams(N, a, b)
        label = classify(p)
        assert label.kind == "t" and label.m == m, (N, m, a, b, str(label))
        out.append(p)
    return out


def grid_cell_index(value, axis_max, res):
    """Index of the region-map cell containing ``value``."""
    return min(int(value / (axis_max / res)), res - 1)
