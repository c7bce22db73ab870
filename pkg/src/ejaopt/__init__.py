"""Spectral computations and commutation certificates for optimization
over eigenvalue orbits in Euclidean Jordan algebras."""

from .algebra import (
    DEFAULT_TOL,
    AlgebraError,
    Automorphism,
    ConvergenceError,
    Element,
    ProductAlgebra,
    RealDiagonal,
    SpectralDecomposition,
    SpinFactor,
    SymMatrix,
    algebra_from_dict,
    algebra_to_dict,
    apply_automorphism,
    eigenvalues,
    element_from_dict,
    element_to_dict,
    inner,
    is_simple,
    jordan_product,
    l_operator,
    norm,
    operator_commute,
    peirce_project,
    product_algebra,
    random_automorphism,
    random_element,
    spectral_decompose,
    strongly_operator_commute,
    sym_from_matrix,
    sym_to_matrix,
    synthesize_from_frame,
    trace,
    unit,
    zero,
)
from .condition import ConditionReport, condition_report, minimize_condition_norm_orbit, phi
from .majorization import (
    MajorizationVerdict,
    kyfan_holds,
    lidskii_holds,
    majorizes,
    sort_desc,
    submajorizes,
    t_transform_sample,
)
from .orbit import (
    Certificate,
    CounterexampleReport,
    EigenvalueOrbit,
    FiniteSpectralSet,
    InfeasibleError,
    OrbitProblem,
    SearchParams,
    Solution,
    SolverError,
    WeakOrbit,
    certify,
    counterexample_no_strong,
    local_search_orbit,
    orbit_components,
    permutation_oracle,
    problem_from_dict,
    rotation_curve,
    rotation_generator,
    solve_orbit_global,
    solve_problem,
    solve_spectral_set_global,
    solve_weak_orbit_global,
    weak_orbit_reps,
)
from .schur import (
    DomainError,
    SymmetricFunction,
    affine_compose,
    builtin,
    check_strict_schur_convex,
    eval_spectral,
)

__version__ = "0.1.0"
