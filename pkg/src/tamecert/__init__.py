"""Certified tame-module synthesis for finitely generated nilpotent
groups of class 2: subdirect decomposition into generalized Heisenberg
factors, exact module constructions, invariant bounds as cone unions, and
replayable certificates that the assembled module is tame and is the
largest nilpotent normal subgroup of the split extension."""

from .delta import (
    DeltaBound,
    SimplicialCone,
    contains_line,
    heisenberg_delta_bound,
    induced_transfer,
    min_twice_membership,
    pullback_bound,
    tameness_certificate,
    union_bounds,
)
from .groups import (
    ClassTwoData,
    FactorDecomposition,
    GroupDataError,
    HeisenbergGroup,
    commutation_form_rho,
    decompose_subdirect,
    finite_index_symplectic_subgroup,
    symplectic_basis_lift,
    validate,
)
from .linalg import Subspace, kernel, smith_normal_form
from .modules import (
    CertificateError,
    FinitePresentation,
    HeisenbergModule,
    build_module,
    fitting_certificate,
    hnn_tower,
    split_extension_presentation,
    verify_annihilators,
    verify_group_relations,
)
from .pipeline import ProblemError, ProblemSpec, parse_problem, run_pipeline
from .symplectic import (
    SymplecticBasis,
    SymplecticSpace,
    associated_subspaces,
    avoid_vector,
    integer_symplectic_normal_form,
    k_mu,
    lagrangian_avoiding,
    simultaneous_complement_basis,
)
from .verify import verify_report

__version__ = "0.1.0"
