"""The curvature hierarchy: double duals, (p,q)-curvatures, Lovelock tensors, p-curvatures."""
from .core import (
    AlgebraicCurvature,
    CurvatureHierarchy,
    DecompositionResult,
    PreconditionError,
    constant_curvature,
    dd_star_p,
    dd_star_p_contraction,
    decompose,
    decompose_general,
    duality_defect,
    einstein,
    hierarchy,
    invert_from_ddstar2,
    product_curvature,
    random_algebraic_curvature,
    random_symmetric,
    ricci,
    ruse_lanczos,
    ruse_lanczos_2,
    same_weyl_expansion,
    scal,
    schouten,
    spanning_set,
    trace_free_part,
    traceless_ricci,
    weyl,
)
from .pq import (
    d_of_n,
    d_of_n_brute,
    decomposition_defect,
    effective_p_threshold,
    effective_p_threshold_brute,
    gauss_bonnet,
    greub_vanstone_defect,
    h4_closed_form,
    hereditary_defect,
    iota_lemma_check,
    iota_lemma_defect,
    lanczos_defect,
    lovelock,
    lovelock4_via_composition,
    parent_field_lhs,
    pq_curvature,
    riemann_power,
)
from .planes import (
    check_orthonormal,
    cp_curvature,
    p_curvature,
    p_curvature_formula,
    random_orthonormal_frame,
    scal_from_s2,
    sectional,
)
