"""Star products on Grassmann algebras: Clifford and Moyal products, Berezin calculus,
spin dynamics and the discretized fermionic propagator."""
from .berezin import (
    GaussianParityWarning,
    berezin_integrate,
    delta_function,
    gaussian_pair_integral,
    grassmann_fourier,
    integrate_sets,
    inverse_grassmann_fourier,
    linear_substitution,
    sift,
    star_under_integral,
    triple,
)
from .exterior import (
    AlgebraSignature,
    Multivector,
    SignatureMismatch,
    grade_project,
    left_derivative,
    relabel,
    reversion,
    right_derivative,
    substitute,
    wedge,
)
from .path_integral import (
    SliceLattice,
    compose_propagators,
    discretized_propagator,
    greens_function_delta_form,
    greens_function_fourier_form,
    greens_function_integral_form,
    propagate,
)
from .phasespace import (
    PhaseSpaceMultivector,
    PhaseSpacePolynomial,
    combined_star,
    landau_split,
    moyal_star,
)
from .spin import (
    DegenerateHamiltonian,
    SpinHamiltonian,
    Spinor,
    evolve_generator,
    holomorphic_decomposition,
    iso_complex_to_real,
    iso_even_cl3_to_cl2,
    ladder_operators,
    operator_lift,
    real_ladder,
    rotate,
    rotor,
    scalar_product,
    spinor_eigen_residual,
    spinor_to_tuple,
    star_exponential,
    tuple_to_spinor,
    validate_spin_hamiltonian,
    wave_function_evolve,
    wigner_from_spinor,
    wigner_projectors,
)
from .star import (
    clifford_star,
    clifford_star_integral,
    inner_product,
    n_fold_star,
    outer_product,
    star_anticommutator,
    star_commutator,
    star_exp_series,
)

__version__ = "0.1.0"
