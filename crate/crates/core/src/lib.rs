//! Optimal quantum spatial search on a closed spin ring with `1/r^α` couplings.
//!
//! The crate is split along the physics:
//!
//! * [`specfun`] – zeta family, gamma, polylogarithm/Lerch and the asymptotic
//!   kernels `f`, `g₀`, `g_m`, `h` used by every analytic prediction.
//! * [`spectrum`] – the circulant hopping Hamiltonian in the single-excitation
//!   sector, its exact (FFT) and asymptotic spectrum and the rescaled gap.
//! * [`analytics`] – spectral sums `S_q`, amplitude `ν`, asymptotic fidelity
//!   `F_∞`, their closed-form approximations and the spectral condition.
//! * [`dynamics`] – the search Hamiltonian `γH + |w⟩⟨w|`, the optimal hopping
//!   rate, dense and Chebyshev propagation, peak extraction and dephasing
//!   ensembles.
//! * [`harness`] – resumable parameter sweeps and figure-data emission.
//!
//! All numerical code is generic over a [`Real`] scalar (`f32` or `f64`); the
//! aliases at the bottom of this file fix the double-precision instances used by
//! the harness and the command line.

// `!(x > 0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference values in tests are quoted at the precision they were computed to
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod analytics;
pub mod dynamics;
mod error;
pub mod harness;
pub(crate) mod numeric;
pub mod optimize;
mod real;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
pub use numeric::fit_power_law;
pub use real::Real;

pub type ChainSpec64 = spectrum::ChainSpec<f64>;
pub type Spectrum64 = spectrum::Spectrum<f64>;
pub type AsymptoticReport64 = analytics::AsymptoticReport<f64>;
pub type SearchProblem64 = dynamics::SearchProblem<f64>;
pub type FidelityTrace64 = dynamics::FidelityTrace<f64>;
pub type SearchResult64 = dynamics::SearchResult<f64>;
pub type NoiseSpec64 = dynamics::NoiseSpec<f64>;
pub type EnsembleResult64 = dynamics::EnsembleResult<f64>;

pub type ChainSpec32 = spectrum::ChainSpec<f32>;
pub type Spectrum32 = spectrum::Spectrum<f32>;
