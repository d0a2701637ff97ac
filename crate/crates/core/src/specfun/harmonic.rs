//! Generalised harmonic numbers `H_{N,s} = Σ_{j=1}^{N} j^{−s}`.

use crate::error::Error;
use crate::numeric::compensated_sum;
use crate::{Real, Result};

use super::near_integer;
use super::zeta::riemann_zeta;

fn check(n_half: usize, s: f64) -> Result<()> {
    if n_half == 0 {
        return Err(Error::InvalidInput("harmonic number needs N >= 1".into()));
    }
    if near_integer(s) == Some(1) {
        return Err(Error::Pole {
            function: "harmonic_number",
            at: 1.0,
        });
    }
    Ok(())
}

/// Exact partial sum `Σ_{j=1}^{N} j^{−s}`, accumulated from the smallest term
/// up with compensation.
pub fn harmonic_number<T: Real>(n_half: usize, s: T) -> Result<T> {
    check(n_half, s.to_f64_lossy())?;
    let terms = (1..=n_half).rev().map(|j| T::from_usize_lossy(j).powf(-s));
    if s >= T::zero() {
        Ok(compensated_sum(terms))
    } else {
        // terms grow with j; sum small to large
        Ok(compensated_sum(
            (1..=n_half).map(|j| T::from_usize_lossy(j).powf(-s)),
        ))
    }
}

/// Euler–Maclaurin form `ζ(s) + N^{1−s}/(1−s) + N^{−s}/2 − (s/12) N^{−s−1}`.
pub fn harmonic_expansion<T: Real>(n_half: usize, s: T) -> Result<T> {
    check(n_half, s.to_f64_lossy())?;
    let n = T::from_usize_lossy(n_half);
    Ok(
        riemann_zeta(s)? + n.powf(T::one() - s) / (T::one() - s) + T::half() * n.powf(-s)
            - s / T::lit(12.0) * n.powf(-s - T::one()),
    )
}
