import numpy as np
import pytest

from gaborspline import LatticeParams, build_gram, det_direct, make_bspline, solve_dual_at


@pytest.fixture(scope="session")
def splines():
    return {N: make_bspline(N) for N in range(1, 7)}


@pytest.fixture(scope="session")
def g2(splines):
    return splines[2]


@pytest.fixture(scope="session")
def t3_points():
    """Two reference parameter points inside band T(3) for N = 2."""
    return (
        LatticeParams(2, 0.9, 8.0 / 9.0),
        LatticeParams(2, 0.75, 35.0 / 36.0),
    )


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels(splines):
    # trigger JIT compilation once so timed sections measure steady state
    p = LatticeParams(2, 0.9, 8.0 / 9.0)
    det_direct(build_gram(splines[2], p, 3, 0.0))
    solve_dual_at(splines[2], p, 3, -0.1)
    splines[2].eval_many(np.linspace(-1, 1, 8))
