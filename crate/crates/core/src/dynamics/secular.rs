//! The optimal hopping rate `γ*`.
//!
//! Without noise `H = γC + |w⟩⟨w|` is a rank-one update of a circulant, so
//! every eigenvalue `E` that feels the marking solves
//! `1 = (1/n) Σ_k 1/(E − γλ_k)`. The two largest roots bracket `γλ_n` and are
//! found in `O(n)` each, which makes the gap scan cheap at any `n`.

use crate::error::Error;
use crate::optimize::golden_section;
use crate::spectrum::{eigenvalues_exact, ChainSpec, Spectrum};
use crate::{Real, Result};

const SCAN_POINTS: usize = 33;

/// Outcome of the `γ*` search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaStar<T> {
    pub gamma: T,
    /// Analytic seed `γ₀ = (1/n) Σ_{k<n} 1/(λ_n − λ_k)`.
    pub seed: T,
    /// `E₁ − E₂` at `γ*`.
    pub gap: T,
}

/// Root of a decreasing function on `(lo, hi)` whose values at the ends are
/// `+∞` and negative (or `−∞`): safeguarded Newton with bisection.
fn decreasing_root<T: Real>(phi: impl Fn(T) -> (T, T), mut lo: T, mut hi: T) -> T {
    let mut x = lo + (hi - lo) / T::two();
    for _ in 0..300 {
        let (v, dv) = phi(x);
        if v == T::zero() {
            return x;
        }
        if v > T::zero() {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= T::lit(4.0) * T::epsilon() * lo.abs().max(hi.abs()) {
            break;
        }
        let newton = x - v / dv;
        x = if newton > lo && newton < hi && dv < T::zero() {
            newton
        } else {
            lo + (hi - lo) / T::two()
        };
    }
    x
}

/// The two largest eigenvalues `(E₁, E₂)` of `γC + |w⟩⟨w|`.
pub fn top_two_energies<T: Real>(spectrum: &Spectrum<T>, gamma: T) -> (T, T) {
    let (u1, u2) = top_two_shifted(&gaps(spectrum), spectrum.n(), gamma);
    let base = gamma * spectrum.lambda_max();
    (base + u1, base + u2)
}

fn gaps<T: Real>(spectrum: &Spectrum<T>) -> Vec<T> {
    let top = spectrum.lambda_max();
    spectrum.raw()[..spectrum.n() - 1]
        .iter()
        .map(|&l| top - l)
        .collect()
}

/// Roots measured from `γλ_n`: `u₁ ∈ (0, 1]` and `u₂ ∈ (−γ min gap, 0)`.
fn top_two_shifted<T: Real>(gaps: &[T], n: usize, gamma: T) -> (T, T) {
    let inv_n = T::from_usize_lossy(n).recip();
    let phi = |u: T| {
        let mut v = u.recip();
        let mut dv = -(u * u).recip();
        for &g in gaps {
            let d = (u + gamma * g).recip();
            v = v + d;
            dv = dv - d * d;
        }
        (v * inv_n - T::one(), dv * inv_n)
    };
    let u1 = decreasing_root(phi, T::zero(), T::one());
    let g_min = gaps.iter().cloned().fold(T::infinity(), T::min);
    let u2 = decreasing_root(phi, -gamma * g_min, T::zero());
    (u1, u2)
}

/// `γ*` minimising the gap `E₁ − E₂` of the two largest eigenvalues of the
/// noiseless search Hamiltonian. The result does not depend on the marked
/// site.
///
/// A geometric scan of `[γ₀/4, 4γ₀]` locates the minimum, which is then
/// refined by golden-section search to a bracket of `10⁻⁶ γ₀`. A minimum on
/// the bracket edge or a scan that is not unimodal is reported with the scan.
pub fn gamma_star<T: Real>(chain: &ChainSpec<T>) -> Result<GammaStar<T>> {
    let spectrum = eigenvalues_exact(chain)?;
    let n = spectrum.n();
    let g = gaps(&spectrum);
    let width = spectrum.lambda_max() - spectrum.lambda_min();
    let seed = crate::analytics::s_q(&spectrum, 1)? / width;
    let gap_at = |gamma: T| {
        let (u1, u2) = top_two_shifted(&g, n, gamma);
        u1 - u2
    };

    let lo = seed / T::lit(4.0);
    let ratio = T::lit(16.0).powf(T::from_usize_lossy(SCAN_POINTS - 1).recip());
    let scan: Vec<(T, T)> = (0..SCAN_POINTS)
        .map(|i| {
            let gamma = lo * ratio.powi(i as i32);
            (gamma, gap_at(gamma))
        })
        .collect();
    let report = |reason: &str| Error::Optimization {
        what: "gamma_star",
        reason: reason.to_string(),
        scan: scan
            .iter()
            .map(|&(a, b)| (a.to_f64_lossy(), b.to_f64_lossy()))
            .collect(),
    };
    let best = (0..SCAN_POINTS)
        .min_by(|&a, &b| {
            scan[a]
                .1
                .partial_cmp(&scan[b].1)
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap();
    if best == 0 || best == SCAN_POINTS - 1 {
        return Err(report("gap minimum lies on the edge of [seed/4, 4 seed]"));
    }
    let slack = T::lit(1e-12);
    let descending = scan[..=best]
        .windows(2)
        .all(|w| w[1].1 <= w[0].1 * (T::one() + slack));
    let ascending = scan[best..]
        .windows(2)
        .all(|w| w[1].1 >= w[0].1 * (T::one() - slack));
    if !(descending && ascending) {
        return Err(report("gap is not unimodal in [seed/4, 4 seed]"));
    }
    let m = golden_section(
        gap_at,
        scan[best - 1].0,
        scan[best + 1].0,
        T::lit(1e-6) * seed,
        500,
    )?;
    Ok(GammaStar {
        gamma: m.x,
        seed,
        gap: m.value,
    })
}
