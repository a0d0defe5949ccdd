"""Gabor frame machinery for compactly supported spline-type windows.

Classify lattice parameters into frame-guaranteeing bands, assemble the
window sample matrix G_m(x), evaluate its determinant by closed forms and
by an elimination oracle, construct the unique compactly supported dual
window, and certify duality numerically.
"""

from ._kernels import BACKEND
from .dual import (
    DualWindow,
    JumpReport,
    build_dual,
    discontinuity_probe,
    dual_to_csv,
    dual_value_cramer,
    load_dual_csv,
    solve_dual_at,
)
from .errors import (
    DomainError,
    GaborSplineError,
    InvariantViolationError,
    RegionError,
    SingularMatrixError,
    StructuralError,
)
from .gram import (
    BlockDecomposition,
    CaseLabel,
    GramMatrix,
    PRODUCT_CASE,
    SM_CASE,
    block_decompose,
    build_gram,
    det_direct,
    det_formula,
    det_formula_sweep,
    gram_to_csv,
    locate_case,
    submatrix_det_2x2,
)
from .regions import (
    LatticeParams,
    RegionLabel,
    RegionMap,
    TmInterval,
    classify,
    m_index,
    region_map,
    region_map_to_csv,
    region_map_to_svg,
    tm_bounds,
)
from .verify import (
    BoundEstimate,
    CrosscheckReport,
    DualityReport,
    bessel_bound_walnut,
    duality_residual,
    lower_bound_via_dual,
    oracle_crosscheck,
    positivity_sweep,
)
from .windows import (
    MembershipReport,
    PiecewisePolynomial,
    Window,
    check_membership_VNa,
    eval_window,
    load_window_csv,
    make_bspline,
    make_tabulated,
    second_difference,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    # errors
    "GaborSplineError",
    "DomainError",
    "RegionError",
    "StructuralError",
    "SingularMatrixError",
    "InvariantViolationError",
    # windows
    "PiecewisePolynomial",
    "Window",
    "MembershipReport",
    "make_bspline",
    "make_tabulated",
    "load_window_csv",
    "eval_window",
    "second_difference",
    "check_membership_VNa",
    # regions
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
    # gram
    "GramMatrix",
    "BlockDecomposition",
    "CaseLabel",
    "PRODUCT_CASE",
    "SM_CASE",
    "build_gram",
    "block_decompose",
    "det_direct",
    "locate_case",
    "submatrix_det_2x2",
    "det_formula",
    "det_formula_sweep",
    "gram_to_csv",
    # dual
    "DualWindow",
    "JumpReport",
    "solve_dual_at",
    "build_dual",
    "dual_value_cramer",
    "discontinuity_probe",
    "dual_to_csv",
    "load_dual_csv",
    # verify
    "DualityReport",
    "BoundEstimate",
    "CrosscheckReport",
    "duality_residual",
    "bessel_bound_walnut",
    "lower_bound_via_dual",
    "positivity_sweep",
    "oracle_crosscheck",
]
