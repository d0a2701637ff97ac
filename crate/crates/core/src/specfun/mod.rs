//! Special functions and the asymptotic spectral kernels.
//!
//! Everything here is a pure function of its arguments. Infinite series stop
//! once the next term drops below a tolerance (machine precision for the zeta
//! family, [`KernelParams::tail_tol`] for the kernels) and give up with
//! [`Error::NonConvergence`](crate::Error::NonConvergence) after
//! [`SERIES_TERM_CAP`] terms.

mod gamma;
mod harmonic;
mod kernels;
mod polylog;
mod zeta;

pub use gamma::{gamma_fn, ln_gamma};
pub use harmonic::{harmonic_expansion, harmonic_number};
pub use kernels::{f_alpha, f_over_g0, g0, gm, h_kernel, pair_expansion, KernelParams};
pub use polylog::{lerch_phi, polylog_pair, polylog_pair_with, polylog_unit, PolylogRoute};
pub use zeta::{hurwitz_zeta, hurwitz_zeta_expansion, riemann_zeta};

/// Hard cap on the number of terms summed by any series in this module.
pub const SERIES_TERM_CAP: usize = 1_000_000;

/// Whether `x` is within a few ulps of an integer; used to route the
/// integer-order special cases.
pub(crate) fn near_integer<T: crate::Real>(x: T) -> Option<i64> {
    let r = x.round();
    if (x - r).abs() <= T::lit(64.0) * T::epsilon() * r.abs().max(T::one()) {
        r.to_i64()
    } else {
        None
    }
}
