"""Finite-group convolution, Fourier analysis, and block-encoding toolkit."""

from .errors import (
    DegenerateFilterError,
    GroupAxiomError,
    GroupConvError,
    IllConditionedProblemError,
    IncompatibleSignalError,
    IrrepsUnavailableError,
    NormalizationError,
    SingularOperationError,
    ZeroOutputError,
)
from .groups import (
    FamilyTag,
    FiniteGroup,
    GroupElement,
    PermutationMatrix,
    left_regular,
    load_cayley,
    make_cyclic,
    make_dihedral,
    make_product,
    parse_group_spec,
    right_regular,
)
from .representations import (
    FourierCoefficients,
    FourierMatrix,
    Irrep,
    classical_fourier,
    classical_fourier_inverse,
    fourier_apply,
    fourier_matrix,
    irrep_dims,
    irreps,
    max_irrep_dim,
)
from .convolution import (
    ConditionData,
    EquivarianceResult,
    GroupSignal,
    OperationMatrix,
    OperationVariant,
    check_equivariance,
    condition_data,
    convolve_direct,
    convolve_fourier,
    operation_matrix,
    translate_right,
    variant_coefficients,
)
from .block_encoding import (
    ApplicationResult,
    BlockEncoding,
    DigitalToAnalogPlan,
    apply_block_encoding,
    digital_to_analog,
    fourier_block_encoding,
    lcu_block_encoding,
    prep_unitary,
    unitary_dilation,
    worst_case_success_probability,
)
from .deconvolution import (
    DeconvolutionResult,
    InversePolynomial,
    SvtDeconvolutionResult,
    build_inverse_polynomial,
    deconvolve_exact,
    deconvolve_svt,
    svt_apply,
)
from .integral import (
    ConvergenceRecord,
    IntegralSolution,
    PeriodicKernel,
    apply_forward,
    benchmark_exact,
    benchmark_h,
    benchmark_rhs,
    build_filter,
    column_sum,
    condition_bound,
    convergence_slope,
    convergence_study,
    error_metric,
    exp_manhattan_kernel,
    grid_group,
    grid_points,
    manhattan_periodic,
    solve_integral_equation,
    stability_margin,
)
from .serialization import (
    read_signal,
    write_fourier,
    write_matrix,
    write_signal,
)

__all__ = [name for name in dir() if not name.startswith("_")]
