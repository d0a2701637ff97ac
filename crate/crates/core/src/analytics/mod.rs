//! Search-optimality analytics built on the rescaled spectrum.
//!
//! `S_q = (1/n) Σ_{i<n} (1 − λ̃_i)^{−q}` controls the dominant two-level
//! approximation of the search: the amplitude is `ν = S₁/√S₂`, the
//! asymptotic peak fidelity `F_∞ = ν²` and the peak time about
//! `(π/2)√(n/F_∞)`. The barred quantities are the large-`n` closed forms for
//! `1 < α < 3`.

mod probe;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error};
use crate::numeric::compensated_sum;
use crate::specfun::{f_over_g0, riemann_zeta};
use crate::spectrum::{eigenvalues_exact, gap_asymptotic, ChainSpec, Spectrum};
use crate::{Real, Result};

pub use probe::{convergence_probe, ConvergenceProbe};

/// `S_q = (1/n) Σ_{i=1}^{n−1} (1 − λ̃_i)^{−q}`, the top eigenvalue excluded.
pub fn s_q<T: Real>(spectrum: &Spectrum<T>, q: u32) -> Result<T> {
    if q == 0 {
        return Err(Error::InvalidInput("s_q: q must be >= 1".into()));
    }
    let n = spectrum.n();
    let lt = &spectrum.rescaled()[..n - 1];
    if lt.iter().any(|&l| !(l < T::one())) {
        return Err(Error::Degenerate(
            "s_q: an eigenvalue below the top has rescaled value 1",
        ));
    }
    let qi = q as i32;
    let sum = compensated_sum(lt.iter().map(|&l| (T::one() - l).powi(-qi)));
    Ok(sum / T::from_usize_lossy(n))
}

fn check_long_range<T: Real>(function: &'static str, alpha: T) -> Result<()> {
    if !(alpha > T::one() && alpha < T::lit(3.0)) {
        return Err(domain(
            function,
            "needs 1 < alpha < 3",
            alpha.to_f64_lossy(),
        ));
    }
    Ok(())
}

/// Closed form
/// `S̄_q = 2 (f/g₀)^q (n^{qα−q−1} ζ(qα−q) + 2^{qα−q−1}/(1 + q − qα))`.
///
/// Refused within `10⁻³` of the pole `α = 1 + 1/q`.
pub fn s_q_bar<T: Real>(chain: &ChainSpec<T>, q: u32) -> Result<T> {
    let a = chain.alpha();
    check_long_range("s_q_bar", a)?;
    if q == 0 {
        return Err(Error::InvalidInput("s_q_bar: q must be >= 1".into()));
    }
    let qt = T::from_u32(q).unwrap();
    let pole = T::one() + qt.recip();
    if (a - pole).abs() < T::lit(1e-3) {
        return Err(Error::Pole {
            function: "s_q_bar",
            at: pole.to_f64_lossy(),
        });
    }
    let e = qt * a - qt - T::one();
    let bracket = chain.size().powf(e) * riemann_zeta(qt * a - qt)? + T::two().powf(e) / (-e);
    Ok(T::two() * f_over_g0(a)?.powi(q as i32) * bracket)
}

/// `(ν, F_∞) = (S₁/√S₂, ν²)`.
pub fn amplitude_and_fidelity<T: Real>(spectrum: &Spectrum<T>) -> Result<(T, T)> {
    let s1 = s_q(spectrum, 1)?;
    let s2 = s_q(spectrum, 2)?;
    let nu = s1 / s2.sqrt();
    Ok((nu, nu * nu))
}

/// Closed form
/// `ν̄ = √2 (n^{α−2} ζ(α−1) + 2^{α−2}/(2−α)) / √(n^{2α−3} ζ(2α−2) + 2^{2α−3}/(3−2α))`
/// for `1 < α < 1.5`.
pub fn nu_bar<T: Real>(chain: &ChainSpec<T>) -> Result<T> {
    let a = chain.alpha();
    if !(a > T::one() && a < T::lit(1.5)) {
        return Err(domain("nu_bar", "needs 1 < alpha < 1.5", a.to_f64_lossy()));
    }
    let n = chain.size();
    let two = T::two();
    let num = n.powf(a - two) * riemann_zeta(a - T::one())? + two.powf(a - two) / (two - a);
    let e = two * a - T::lit(3.0);
    let den = n.powf(e) * riemann_zeta(two * a - two)? + two.powf(e) / (-e);
    Ok(two.sqrt() * num / den.sqrt())
}

/// `lim_{n→∞} ν̄² = (3 − 2α)/(2 − α)²` on `1 < α ≤ 1.5`.
pub fn f_inf_limit<T: Real>(alpha: T) -> Result<T> {
    if !(alpha > T::one() && alpha <= T::lit(1.5)) {
        return Err(domain(
            "f_inf_limit",
            "needs 1 < alpha <= 1.5",
            alpha.to_f64_lossy(),
        ));
    }
    let d = T::two() - alpha;
    Ok((T::lit(3.0) - T::two() * alpha) / (d * d))
}

/// Where an [`InsetPoint`] value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InsetSource {
    /// `α ≤ 1`: the gap stays finite, so search is asymptotically perfect.
    AsymptoticArgument,
    /// `1 < α ≤ 1.5`: the closed-form limit.
    ClosedForm,
    /// `α > 1.5`: the limit has reached zero.
    BeyondTransition,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct InsetPoint<T> {
    pub alpha: T,
    pub value: T,
    pub source: InsetSource,
}

/// The asymptotic fidelity over the whole `α` axis: 1 up to `α = 1`,
/// [`f_inf_limit`] on the transition, 0 beyond.
pub fn inset_value<T: Real>(alpha: T) -> Result<InsetPoint<T>> {
    if !(alpha >= T::zero()) {
        return Err(domain(
            "inset_value",
            "alpha must be >= 0",
            alpha.to_f64_lossy(),
        ));
    }
    let (value, source) = if alpha <= T::one() {
        (T::one(), InsetSource::AsymptoticArgument)
    } else if alpha <= T::lit(1.5) {
        (f_inf_limit(alpha)?, InsetSource::ClosedForm)
    } else {
        (T::zero(), InsetSource::BeyondTransition)
    };
    Ok(InsetPoint {
        alpha,
        value,
        source,
    })
}

/// `T = (π/2) √(n/F_∞)`.
pub fn predicted_time<T: Real>(chain: &ChainSpec<T>, f_inf: T) -> Result<T> {
    if !(f_inf > T::zero() && f_inf <= T::one() + T::lit(1e-12)) {
        return Err(domain(
            "predicted_time",
            "f_inf must lie in (0, 1]",
            f_inf.to_f64_lossy(),
        ));
    }
    Ok(T::FRAC_PI_2() * (chain.size() / f_inf).sqrt())
}

/// Which gap feeds [`spectral_condition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapSource {
    #[default]
    Exact,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SpectralCondition<T> {
    pub holds: bool,
    /// `Δ √n / c`; the condition holds when this is at least 1.
    pub margin: T,
    pub delta: T,
    pub source: GapSource,
}

/// Checks `Δ ≥ c n^{−1/2}`.
pub fn spectral_condition<T: Real>(
    chain: &ChainSpec<T>,
    c: T,
    source: GapSource,
) -> Result<SpectralCondition<T>> {
    if !(c > T::zero()) {
        return Err(Error::InvalidInput(format!(
            "spectral condition constant must be > 0, got {c}"
        )));
    }
    let delta = match source {
        GapSource::Exact => eigenvalues_exact(chain)?.gap(),
        GapSource::Asymptotic => gap_asymptotic(chain)?,
    };
    let margin = delta * chain.size().sqrt() / c;
    Ok(SpectralCondition {
        holds: margin >= T::one(),
        margin,
        delta,
        source,
    })
}

/// Everything the analytics know about one `(n, α)` point. Closed forms are
/// `None` outside their range of validity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct AsymptoticReport<T> {
    pub n: usize,
    pub alpha: T,
    pub delta_exact: T,
    pub delta_asym: Option<T>,
    pub s1: T,
    pub s2: T,
    pub nu: T,
    pub f_inf: T,
    pub s1_bar: Option<T>,
    pub s2_bar: Option<T>,
    pub nu_bar: Option<T>,
    pub f_inf_bar: Option<T>,
    pub f_inf_limit: T,
    pub f_inf_limit_source: InsetSource,
    pub t_pred: T,
}

impl<T: Real> AsymptoticReport<T> {
    pub fn new(chain: &ChainSpec<T>) -> Result<Self> {
        let spectrum = eigenvalues_exact(chain)?;
        Self::from_spectrum(chain, &spectrum)
    }

    /// Builds the report from an already computed spectrum of `chain`.
    pub fn from_spectrum(chain: &ChainSpec<T>, spectrum: &Spectrum<T>) -> Result<Self> {
        let s1 = s_q(spectrum, 1)?;
        let s2 = s_q(spectrum, 2)?;
        let nu = s1 / s2.sqrt();
        let f_inf = nu * nu;
        let nu_bar = nu_bar(chain).ok();
        let inset = inset_value(chain.alpha())?;
        Ok(Self {
            n: chain.n(),
            alpha: chain.alpha(),
            delta_exact: spectrum.gap(),
            delta_asym: gap_asymptotic(chain).ok(),
            s1,
            s2,
            nu,
            f_inf,
            s1_bar: s_q_bar(chain, 1).ok(),
            s2_bar: s_q_bar(chain, 2).ok(),
            nu_bar,
            f_inf_bar: nu_bar.map(|v| v * v),
            f_inf_limit: inset.value,
            f_inf_limit_source: inset.source,
            t_pred: predicted_time(chain, f_inf)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn chain(n: usize, alpha: f64) -> ChainSpec<f64> {
        ChainSpec::new(n, alpha).unwrap()
    }

    #[test]
    fn complete_graph_sums() {
        let n = 100;
        let s = eigenvalues_exact(&chain(n, 0.0)).unwrap();
        for q in 1..=3 {
            assert_relative_eq!(s_q(&s, q).unwrap(), 0.99, max_relative = 1e-12);
        }
        let (nu, f) = amplitude_and_fidelity(&s).unwrap();
        assert_relative_eq!(nu, 0.99_f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(f, 0.99, max_relative = 1e-12);
        assert!(s_q(&s, 0).is_err());
    }

    #[test]
    fn s1_close_to_closed_form() {
        let c = chain(4096, 1.25);
        let s = eigenvalues_exact(&c).unwrap();
        let exact = s_q(&s, 1).unwrap();
        let bar = s_q_bar(&c, 1).unwrap();
        assert!(((exact - bar) / exact).abs() < 0.10);
    }

    #[test]
    fn s_bar_poles_and_domain() {
        assert!(matches!(
            s_q_bar(&chain(64, 2.0), 1),
            Err(Error::Pole { .. })
        ));
        assert!(matches!(
            s_q_bar(&chain(64, 1.5005), 2),
            Err(Error::Pole { .. })
        ));
        assert!(s_q_bar(&chain(64, 0.5), 1).is_err());
        assert!(s_q_bar(&chain(64, 1.51), 2).is_ok());
    }

    #[test]
    fn s1_bar_settles_below_two() {
        let a = s_q_bar(&chain(4096, 1.3), 1).unwrap();
        let b = s_q_bar(&chain(8192, 1.3), 1).unwrap();
        let c = s_q_bar(&chain(16384, 1.3), 1).unwrap();
        assert!((c - b).abs() < (b - a).abs());
    }

    #[test]
    fn limit_values() {
        assert_relative_eq!(
            f_inf_limit(1.25_f64).unwrap(),
            0.5 / 0.5625,
            max_relative = 1e-15
        );
        assert_eq!(f_inf_limit(1.5_f64).unwrap(), 0.0);
        assert!((f_inf_limit(1.0_f64 + 1e-13).unwrap() - 1.0).abs() < 1e-12);
        assert!(f_inf_limit(1.0_f64).is_err());
        assert!(f_inf_limit(1.6_f64).is_err());
    }

    #[test]
    fn inset_covers_the_axis() {
        assert_eq!(inset_value(0.3_f64).unwrap().value, 1.0);
        assert_eq!(
            inset_value(1.0_f64).unwrap().source,
            InsetSource::AsymptoticArgument
        );
        assert_eq!(
            inset_value(1.2_f64).unwrap().source,
            InsetSource::ClosedForm
        );
        assert_eq!(inset_value(2.0_f64).unwrap().value, 0.0);
    }

    #[test]
    fn nu_bar_domain_and_accuracy() {
        assert!(nu_bar(&chain(64, 1.0)).is_err());
        assert!(nu_bar(&chain(64, 1.5)).is_err());
        let c = chain(4096, 1.25);
        let (nu, _) = amplitude_and_fidelity(&eigenvalues_exact(&c).unwrap()).unwrap();
        assert!(((nu_bar(&c).unwrap() - nu) / nu).abs() < 0.10);
    }

    #[test]
    fn predicted_time_values() {
        let c = chain(100, 1.0);
        assert_relative_eq!(
            predicted_time(&c, 1.0).unwrap(),
            std::f64::consts::FRAC_PI_2 * 10.0
        );
        assert_relative_eq!(
            predicted_time(&c, 0.25).unwrap(),
            std::f64::consts::PI * 10.0
        );
        assert!(predicted_time(&c, 0.0).is_err());
    }

    #[test]
    fn spectral_condition_layout() {
        let s = spectral_condition(&chain(10_000, 0.5), 0.5, GapSource::Exact).unwrap();
        assert!(s.holds);
        for n in [1_000usize, 10_000, 100_000, 1_000_000] {
            assert!(
                spectral_condition(&chain(n, 1.2), 1.0, GapSource::Asymptotic)
                    .unwrap()
                    .holds
            );
        }
        assert!(
            !spectral_condition(&chain(1_000_000, 2.0), 1.0, GapSource::Asymptotic)
                .unwrap()
                .holds
        );
        assert!(spectral_condition(&chain(64, 1.0), 0.0, GapSource::Exact).is_err());
    }

    #[test]
    fn report_fields() {
        let c = chain(4096, 1.25);
        let r = AsymptoticReport::new(&c).unwrap();
        assert!(r.f_inf > 0.0 && r.f_inf <= 1.0);
        assert_relative_eq!(
            r.t_pred,
            std::f64::consts::FRAC_PI_2 * (4096.0 / r.f_inf).sqrt()
        );
        assert!(((r.f_inf - r.f_inf_bar.unwrap()) / r.f_inf).abs() < 0.10);
        let r1 = AsymptoticReport::new(&chain(256, 1.0)).unwrap();
        assert!(r1.delta_asym.is_none() && r1.nu_bar.is_none());
        let json = serde_json::to_string(&r).unwrap();
        let back: AsymptoticReport<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
