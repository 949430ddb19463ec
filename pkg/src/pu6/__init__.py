"""Tri-Hamiltonian toolkit for the sixth-order Pais-Uhlenbeck oscillator."""

from .core import (
    DIM,
    CanonicalState,
    Degeneracy,
    FrequencyTriple,
    PoissonTensor,
    PUParams,
    QuadraticForm,
    as_state,
    canonical_hamiltonian,
    flow_operator,
    frequencies_from_params,
    frequency_triple,
    gradient,
    hamiltonian_form,
    ostrogradsky_map,
    params_from_frequencies,
    poisson_bracket,
    poisson_tensor,
)
from .dynamics import (
    ExactSolution,
    InteractionSpec,
    Trajectory,
    conservation_drift,
    divergent_mode_present,
    exact_trajectory,
    integrate_rk4,
    interaction_field_jacobian,
    lie_derivative_residual,
    solve_exact,
    trajectory_csv,
)
from .errors import (
    ComplexBranch,
    ComplexFrequencies,
    ConfigError,
    DegenerateFrequencies,
    EquivalenceFailure,
    GammaZero,
    InvalidPermutation,
    NonFinite,
    Pu6Error,
    SingularCombination,
    SingularModeMatrix,
    ZeroDenominator,
    ZeroKinetic,
)
from .hierarchy import (
    CombinationCoeffs,
    HierarchyMatrix,
    coeffs_dual,
    coeffs_from_tensor,
    combined_flow,
    combined_form,
    flow_expansion_coefficients,
    hamiltonian_n_closed,
    hamiltonian_n_recursive,
    hierarchy_coefficients,
    hierarchy_matrix,
)
from .positivity import (
    AxisSpec,
    GridSpec,
    PositiveBlock,
    PositivityVerdict,
    RegionScanResult,
    block_symmetry_action,
    hamiltonian_n_blocks,
    hbar_prefactors,
    positive_block,
    positivity_verdict,
    region_scan,
    tensor_weight_polynomials,
)
from .representations import (
    KINDS,
    EquivalenceReport,
    Rep3DParams,
    Representation,
    StateProjection,
    build_representation,
    equivalence_check,
    legendre_hamiltonian,
    phase_space_map,
    project_state,
    representation_positivity,
    second_order_residual,
    ta1_radicand,
    tc1_radicand,
    transformed_coefficients,
)
from .verification import CheckResult, run_invariant_suite, suite_passed

__version__ = "0.1.0"
