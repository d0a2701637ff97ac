//! The asymptotic kernels of the rescaled spectrum.
//!
//! With θ = 2πk/n the polylogarithm pair splits as
//! `Li_α(e^{iθ}) + Li_α(e^{-iθ}) = 2ζ(α) − f(α) h(α, n/k)` where
//! `h(α, r) = (g₀/f) r^{1−α} + Σ_m (g_m/f) r^{−2m}`.

use crate::error::{domain, Error};
use crate::{Real, Result};

use super::gamma::{gamma_fn, ln_gamma};
use super::near_integer;
use super::zeta::riemann_zeta;

/// Series controls for [`h_kernel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams<T> {
    pub alpha: T,
    /// Truncation order of the `m`-series.
    pub m_max: usize,
    /// Absolute tolerance on the first neglected term.
    pub tail_tol: T,
}

impl<T: Real> KernelParams<T> {
    pub fn new(alpha: T) -> Self {
        Self {
            alpha,
            m_max: 60,
            tail_tol: T::lit(1e-12).max(T::lit(16.0) * T::epsilon()),
        }
    }

    pub fn with_series(alpha: T, m_max: usize, tail_tol: T) -> Result<Self> {
        if m_max == 0 {
            return Err(Error::InvalidInput(
                "KernelParams: m_max must be >= 1".into(),
            ));
        }
        if !(tail_tol > T::zero()) {
            return Err(Error::InvalidInput(
                "KernelParams: tail_tol must be > 0".into(),
            ));
        }
        Ok(Self {
            alpha,
            m_max,
            tail_tol,
        })
    }
}

/// `f(α) = (4 − 2^{2−α}) ζ(α)`, the width `λ_n − λ_{n/2}` of the infinite-ring
/// spectrum.
pub fn f_alpha<T: Real>(alpha: T) -> Result<T> {
    if near_integer(alpha) == Some(1) {
        return Err(Error::Pole {
            function: "f_alpha",
            at: 1.0,
        });
    }
    Ok((T::lit(4.0) - T::two().powf(T::two() - alpha)) * riemann_zeta(alpha)?)
}

/// `g₀(α) = −2^α π^{α−1} sin(απ/2) Γ(1−α)`.
///
/// Odd positive integers are genuine poles. At even positive integers the zero
/// of the sine cancels the pole of Γ; near those points the equivalent form
/// `−ζ(α)/ζ(1−α)` (from the functional equation) is used instead.
pub fn g0<T: Real>(alpha: T) -> Result<T> {
    let nearest = alpha.round();
    if nearest >= T::one() {
        let k = nearest.to_i64().unwrap_or(0);
        let close = (alpha - nearest).abs() < T::lit(0.25);
        if k % 2 == 1 && (alpha - nearest).abs() <= T::lit(64.0) * T::epsilon() * nearest {
            return Err(Error::Pole {
                function: "g0",
                at: k as f64,
            });
        }
        if k % 2 == 0 && close {
            return Ok(-riemann_zeta(alpha)? / riemann_zeta(T::one() - alpha)?);
        }
    }
    let pi = T::PI();
    Ok(-T::two().powf(alpha)
        * pi.powf(alpha - T::one())
        * (alpha * pi / T::two()).sin()
        * gamma_fn(T::one() - alpha)?)
}

/// `g_m(α) = −2 ζ(α − 2m) (2πi)^{2m} / (2m)!`, which is real.
///
/// Once `α − 2m` is well negative the zeta factor is expanded through the
/// functional equation and the powers of 2π cancel analytically, leaving
/// `−2 (2π)^α/π · sin(απ/2) · Γ(1+2m−α)/Γ(1+2m) · ζ(1+2m−α)`, which stays
/// finite for any `m`.
pub fn gm<T: Real>(alpha: T, m: usize) -> Result<T> {
    if m == 0 {
        return Err(Error::InvalidInput("gm: m must be >= 1".into()));
    }
    let two_m = T::from_usize_lossy(2 * m);
    let s = alpha - two_m;
    if near_integer(s) == Some(1) {
        return Err(Error::Pole {
            function: "gm",
            at: alpha.to_f64_lossy(),
        });
    }
    if s < -T::half() {
        let pi = T::PI();
        let log_ratio = ln_gamma(T::one() + two_m - alpha)? - ln_gamma(T::one() + two_m)?;
        return Ok(-T::two() * T::TAU().powf(alpha) / pi
            * (alpha * pi / T::two()).sin()
            * log_ratio.exp()
            * riemann_zeta(T::one() + two_m - alpha)?);
    }
    // (2πi)^{2m} = (−1)^m (2π)^{2m}
    let sign = if m.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    };
    let mut inv_fact = T::one();
    for j in 1..=2 * m {
        inv_fact = inv_fact * T::TAU() / T::from_usize_lossy(j);
    }
    Ok(-T::two() * riemann_zeta(s)? * sign * inv_fact)
}

/// `f(α)/g₀(α) = −(4 − 2^{2−α}) ζ(1−α)` via the functional equation; finite
/// on the whole of (1, 3).
pub fn f_over_g0<T: Real>(alpha: T) -> Result<T> {
    Ok(-(T::lit(4.0) - T::two().powf(T::two() - alpha)) * riemann_zeta(T::one() - alpha)?)
}

/// `f(α)·h(α, r) = g₀ r^{1−α} + Σ_{m≥1} g_m r^{−2m}`, without the division
/// by `f` (so it also works where `f` vanishes).
fn fh_series<T: Real>(alpha: T, ratio: T, m_max: usize, tail_tol: T, scale: T) -> Result<T> {
    let mut sum = g0(alpha)? * ratio.powf(T::one() - alpha);
    let inv_r2 = (ratio * ratio).recip();
    let mut rpow = T::one();
    let mut last = T::infinity();
    for m in 1..=m_max {
        rpow = rpow * inv_r2;
        let term = gm(alpha, m)? * rpow;
        sum = sum + term;
        if (term / scale).abs() < tail_tol {
            return Ok(sum);
        }
        if m > 2 && term.abs() >= last {
            return Err(Error::NonConvergence {
                what: "h_kernel",
                terms: m,
                tail: (term / scale).abs().to_f64_lossy(),
            });
        }
        last = term.abs();
    }
    Err(Error::NonConvergence {
        what: "h_kernel",
        terms: m_max,
        tail: (last / scale).to_f64_lossy(),
    })
}

/// The kernel `h(α, r)` with `r = n/k ≥ 2`.
pub fn h_kernel<T: Real>(params: &KernelParams<T>, ratio: T) -> Result<T> {
    let alpha = params.alpha;
    if near_integer(alpha) == Some(1) {
        return Err(Error::Pole {
            function: "h_kernel",
            at: 1.0,
        });
    }
    if !(ratio >= T::two()) {
        return Err(domain(
            "h_kernel",
            "expansion needs n/k >= 2",
            ratio.to_f64_lossy(),
        ));
    }
    let f = f_alpha(alpha)?;
    if f == T::zero() {
        return Err(domain(
            "h_kernel",
            "f(alpha) vanishes",
            alpha.to_f64_lossy(),
        ));
    }
    Ok(fh_series(alpha, ratio, params.m_max, params.tail_tol, f)? / f)
}

/// `Li_α(e^{iθ}) + Li_α(e^{−iθ})` from the small-angle expansion, for `θ ∈
/// (0, π]` and `α` not a positive odd integer.
pub fn pair_expansion<T: Real>(alpha: T, theta: T, params: &KernelParams<T>) -> Result<T> {
    if !(theta > T::zero() && theta <= T::PI()) {
        return Err(domain(
            "pair_expansion",
            "theta must lie in (0, pi]",
            theta.to_f64_lossy(),
        ));
    }
    let ratio = T::TAU() / theta;
    let zeta = riemann_zeta(alpha)?;
    let scale = zeta.abs().max(T::one());
    Ok(T::two() * zeta - fh_series(alpha, ratio, params.m_max, params.tail_tol, scale)?)
}
