//! Distances between distribution functions, the moment functionals, and
//! numerical checks of the estimates behind the replacement argument.

mod derivatives;
mod functionals;
mod interpolation;
mod metrics;
mod perturbation;
mod swap;

pub use derivatives::{
    directional_derivative, entry_matrix, estimate_l2, finite_difference_partials, partial_scaling,
    partials_max_relative_error, resolvent_partial, resolvent_partials, second_partial_ceiling, stieltjes_of_entries,
    third_partial_ceiling, ScalingFit, FD_STEP,
};
pub use functionals::{lindeberg_sum, truncate, variance_deviation};
pub use interpolation::{gaussian_interpolation_check, InterpolationCheck, L2_SAMPLES, MIN_REPLICATES};
pub use metrics::{kolmogorov_distance, levy_distance, LEVY_TOL};
pub use perturbation::{
    perturbation_bound, perturbation_bound_check, perturbation_rhs, PerturbationCheck, PERTURBATION_SLACK,
};
pub use swap::{swap_decomposition, SwapOptions, SwapReport, SWAP_MAX_ORDER};
