"""Finite Jacobi matrices: spectra, Green functions, the two-spectra inverse
problem and a symbolic calculus for the index of determinacy."""

from .config import DEFAULT, ToleranceConfig
from .corpus import CorpusSpec, generate_corpus
from .determinacy import (
    INDET_NEXTREMAL,
    INDET_NOT_NEXTREMAL,
    Classification,
    DetClass,
    MeasureDescriptor,
    apply_add_masses,
    apply_change_weights,
    apply_finite_rank,
    apply_move_masses,
    apply_poly_multiply,
    classify,
    transfer_rho_n,
    transfer_sigma_n,
)
from .errors import JacobiError
from .green import (
    GreenDecomposition,
    HerglotzRational,
    decompose,
    green,
    green_to_jacobi,
    m_minus,
    m_plus,
    neg_inverse,
    sigma_mu,
    verify_gkk,
    weyl_m,
)
from .inverse import (
    InverseProblem,
    InverseSolution,
    PerturbationParams,
    build_perturbed,
    forward_problem,
    gamma_of,
    green_from_spectra,
    green_measure_from_spectra,
    m_frak,
    recover_theta,
    solve_inverse,
    verify_solution,
)
from .measures import (
    DiscreteMeasure,
    borel_transform,
    favard,
    moments,
    push_forward_pi_sq,
    spectral_measure,
)
from .tridiag import (
    EigenSystem,
    JacobiMatrix,
    build_jacobi,
    cyclic_test,
    eigensystem,
    first_kind_poly,
    first_kind_polys,
    poly_zeros,
    truncate_minus,
    truncate_plus,
)

__version__ = "0.1.0"
