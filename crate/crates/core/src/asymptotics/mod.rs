//! Large-`n` behaviour of `T_n`: the log-periodic function `H*`, its mean
//! `1 / ln 2` and the tiny amplitude of its oscillation.

mod kernel;
mod profile;
mod series;
mod summation;

pub use kernel::{g_tilde_numeric, integrate, logistic_kernel, KERNEL_HALF_WIDTH};
pub use profile::{
    alpha_closed_form, alpha_exponential, compute_alpha, compute_alpha_with, oscillation_profile,
    oscillation_profile_extended, poisson_reconstruction, AlphaReport, OscillationProfile, MIN_PROFILE_SAMPLES,
};
pub use series::{h_star, h_star_extended, h_tilde, Fixed, EXTENDED_BITS};
pub use summation::{sum_smallest_first, CompensatedSum};
