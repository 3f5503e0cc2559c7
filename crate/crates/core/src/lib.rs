//! Hermite-coordinate calculus for near-Gaussian laws on additive Gaussian
//! noise channels.
//!
//! A Gaussian input perturbed in a normalized Hermite direction stays in the
//! same family under noise addition, scaling and convolution, with closed-form
//! coefficient updates; entropy and KL divergence then reduce to quadratic
//! expressions in the coefficients up to higher-order remainders. The crate
//! implements that algebra exactly, backs it with quadrature oracles, and
//! applies it to three channel problems:
//!
//! - [`interference`]: the symmetric two-user interference channel under
//!   treating interference as noise, its degree-k gain functions and the four
//!   decision thresholds over the interference coefficient,
//! - [`fading_bc`]: the degraded broadcast channel with coherent fading,
//!   where a perturbed superposition code can beat every Gaussian one,
//! - [`shamai_laroia`]: counter-examples to the strong Shamai-Laroia
//!   conjecture on the Gaussian ISI channel.
//!
//! The `hermite-coords` binary exposes the analyses as subcommands; see the
//! repository README.

pub mod algebra;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod fading_bc;
pub mod hermite;
pub mod interference;
pub mod quad;
pub mod roots;
pub mod shamai_laroia;
pub mod verify;

pub use algebra::{
    cross_coefficient, smooth, tilde_coeffs, PerturbationCoeffs, PerturbedDensity, POSITIVITY_TOL,
};
pub use entropy::{
    entropy_gap_numeric, entropy_numeric, entropy_quadratic, gaussian_entropy, kl_numeric,
    kl_quadratic, perturbation_norm,
};
pub use error::{Error, Result};
pub use hermite::{gaussian_density, hermite, hermite_normalized, MAX_DEGREE};
pub use quad::QuadratureSpec;
