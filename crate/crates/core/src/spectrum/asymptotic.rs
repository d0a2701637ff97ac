//! Closed forms and large-`n` expansions of the ring spectrum.

use crate::error::{domain, Error};
use crate::specfun::{f_alpha, g0, h_kernel, hurwitz_zeta, riemann_zeta, KernelParams};
use crate::{Real, Result};

use super::ChainSpec;

fn not_alpha_one<T: Real>(function: &'static str, alpha: T) -> Result<()> {
    if (alpha - T::one()).abs() <= T::lit(64.0) * T::epsilon() {
        return Err(Error::Pole { function, at: 1.0 });
    }
    Ok(())
}

/// `λ_n = 2ζ(α) − 2ζ(α, n)`.
pub fn top_eigenvalue_closed_form<T: Real>(chain: &ChainSpec<T>) -> Result<T> {
    let a = chain.alpha();
    not_alpha_one("top_eigenvalue_closed_form", a)?;
    Ok(T::two() * (riemann_zeta(a)? - hurwitz_zeta(a, chain.size())?))
}

/// `λ_{n/2} = 2^{1−α} [2ζ(α) − ζ(α, n/2) − 2^α ζ(α) + ζ(α, (n+1)/2)]`, even `n`.
pub fn half_eigenvalue_closed_form<T: Real>(chain: &ChainSpec<T>) -> Result<T> {
    let a = chain.alpha();
    not_alpha_one("half_eigenvalue_closed_form", a)?;
    if !chain.n().is_multiple_of(2) {
        return Err(domain(
            "half_eigenvalue_closed_form",
            "n must be even",
            chain.n() as f64,
        ));
    }
    let n = chain.size();
    let z = riemann_zeta(a)?;
    Ok(T::two().powf(T::one() - a)
        * (T::two() * z - hurwitz_zeta(a, n / T::two())? - T::two().powf(a) * z
            + hurwitz_zeta(a, (n + T::one()) / T::two())?))
}

fn gap_domain<T: Real>(function: &'static str, alpha: T) -> Result<()> {
    not_alpha_one(function, alpha)?;
    if alpha >= T::lit(3.0) {
        return Err(domain(
            function,
            "expansion holds only for alpha < 3",
            alpha.to_f64_lossy(),
        ));
    }
    Ok(())
}

/// Large-`n` rescaled gap
/// `Δ ∼ 1 − (1 − (g₀/f) x)/(1 − (2/f) x/(α − 1))` with `x = n^{1−α}`.
///
/// Both fractions are cleared of `f`, so `α = 0` (where `f = 0`) gives the
/// exact `Δ = 1`.
pub fn gap_asymptotic<T: Real>(chain: &ChainSpec<T>) -> Result<T> {
    let a = chain.alpha();
    gap_domain("gap_asymptotic", a)?;
    let x = chain.size().powf(T::one() - a);
    let f = f_alpha(a)?;
    let num = f - g0(a)? * x;
    let den = f - T::two() * x / (a - T::one());
    Ok(T::one() - num / den)
}

/// Large-`n` rescaled eigenvalue
/// `λ̃_k ∼ (1 − h(α, n/k))/(1 − (2/f) n^{1−α}/(α − 1))` for `k ≤ n/2`.
pub fn rescaled_eigenvalue_asymptotic<T: Real>(chain: &ChainSpec<T>, k: usize) -> Result<T> {
    let a = chain.alpha();
    gap_domain("rescaled_eigenvalue_asymptotic", a)?;
    if k == 0 || 2 * k > chain.n() {
        return Err(domain(
            "rescaled_eigenvalue_asymptotic",
            "needs 1 <= k <= n/2",
            k as f64,
        ));
    }
    let params = KernelParams::new(a);
    let h = h_kernel(&params, chain.size() / T::from_usize_lossy(k))?;
    let x = chain.size().powf(T::one() - a);
    let f = f_alpha(a)?;
    Ok((T::one() - h) / (T::one() - T::two() / f * x / (a - T::one())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::eigenvalues_exact;
    use approx::assert_relative_eq;

    #[test]
    fn closed_forms_match_fft() {
        for &alpha in &[0.5_f64, 1.5, 2.5] {
            for &n in &[64usize, 1024] {
                let chain = ChainSpec::new(n, alpha).unwrap();
                let s = eigenvalues_exact(&chain).unwrap();
                let top = top_eigenvalue_closed_form(&chain).unwrap();
                let half = half_eigenvalue_closed_form(&chain).unwrap();
                assert_relative_eq!(top, s.lambda(n), max_relative = 1e-8);
                assert_relative_eq!(half, s.lambda(n / 2), max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn closed_form_domains() {
        let c = ChainSpec::new(64, 1.0_f64).unwrap();
        assert!(top_eigenvalue_closed_form(&c).is_err());
        let odd = ChainSpec::new(65, 1.5_f64).unwrap();
        assert!(half_eigenvalue_closed_form(&odd).is_err());
    }

    #[test]
    fn gap_asymptotic_domain() {
        assert!(gap_asymptotic(&ChainSpec::new(100, 1.0_f64).unwrap()).is_err());
        assert!(gap_asymptotic(&ChainSpec::new(100, 3.0_f64).unwrap()).is_err());
        assert_eq!(
            gap_asymptotic(&ChainSpec::new(100, 0.0_f64).unwrap()).unwrap(),
            1.0
        );
    }

    #[test]
    fn short_range_gap_halves_under_doubling() {
        let d1 = gap_asymptotic(&ChainSpec::new(1000, 2.0_f64).unwrap()).unwrap();
        let d2 = gap_asymptotic(&ChainSpec::new(2000, 2.0_f64).unwrap()).unwrap();
        assert!((d2 / d1 - 0.5).abs() < 0.01);
    }

    #[test]
    fn gap_asymptotic_close_to_exact_at_ten_thousand() {
        for &alpha in &[0.5_f64, 1.2, 2.0] {
            let chain = ChainSpec::new(10_000, alpha).unwrap();
            let exact = eigenvalues_exact(&chain).unwrap().gap();
            let asym = gap_asymptotic(&chain).unwrap();
            assert!(((asym - exact) / exact).abs() < 0.01, "alpha = {alpha}");
        }
    }

    #[test]
    fn long_range_gap_limit() {
        // Δ → 1 − 2^{α−1}π^{α−1}(1−α) sin(απ/2) Γ(1−α) at α = 0.5
        let alpha = 0.5_f64;
        let pi = std::f64::consts::PI;
        let limit = 1.0
            - 2f64.powf(alpha - 1.0)
                * pi.powf(alpha - 1.0)
                * (1.0 - alpha)
                * (alpha * pi / 2.0).sin()
                * crate::specfun::gamma_fn(1.0 - alpha).unwrap();
        assert_relative_eq!(limit, 0.75, max_relative = 1e-12);
        let a = gap_asymptotic(&ChainSpec::new(1_000_000, alpha).unwrap()).unwrap();
        let b = gap_asymptotic(&ChainSpec::new(100_000_000, alpha).unwrap()).unwrap();
        assert!((b - limit).abs() < (a - limit).abs());
        assert!((b - limit).abs() < 1e-3 && b > 0.0 && b < 1.0);
    }

    #[test]
    fn first_rescaled_eigenvalue_prediction() {
        let chain = ChainSpec::new(1024, 1.2_f64).unwrap();
        let s = eigenvalues_exact(&chain).unwrap();
        let pred = rescaled_eigenvalue_asymptotic(&chain, 1).unwrap();
        assert!(((pred - s.lambda_tilde(1)) / s.lambda_tilde(1)).abs() < 0.01);
        assert!(rescaled_eigenvalue_asymptotic(&chain, 513).is_err());
    }
}
