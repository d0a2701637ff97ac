//! Polylogarithm and Lerch transcendent on the unit circle `z = e^{iθ}`.
//!
//! `Φ(z, α, a) = Σ_{j≥0} z^j (j + a)^{−α}` is summed directly until
//! `(a + N)|1 − z| ≥ 40`, after which the remainder `z^N Φ(z, α, a + N)` is
//! taken from its large-`a` expansion
//! `Σ_k C(−α, k) a^{−α−k} Σ_j j^k z^j`, the inner (Abel) sums being
//! `z A_k(z)/(1 − z)^{k+1}` with `A_k` the Eulerian polynomials.

use num_complex::Complex;

use crate::error::{domain, Error};
use crate::{Real, Result};

use super::kernels::{pair_expansion, KernelParams};
use super::{near_integer, SERIES_TERM_CAP};

const TAIL_RADIUS: f64 = 40.0;
const TAIL_ORDER_CAP: usize = 80;

/// How [`polylog_pair_with`] evaluates `Li_α(e^{iθ}) + Li_α(e^{−iθ})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PolylogRoute {
    /// Closed form at `α = 1`, small-angle expansion for small `θ`, direct
    /// summation otherwise.
    #[default]
    Auto,
    Direct,
    Expansion,
}

/// `Σ_{j≥0} z^j j^k` for `k = 0..=order`, Abel-summed.
fn power_sums<T: Real>(z: Complex<T>, order: usize) -> Vec<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    let inv = (one - z).inv();
    let mut out = Vec::with_capacity(order + 1);
    out.push(inv);
    // Eulerian numbers E(k, m), m = 0..k-1
    let mut euler: Vec<T> = vec![T::one()];
    let mut inv_pow = inv * inv;
    for k in 1..=order {
        if k > 1 {
            let mut next = vec![T::zero(); k];
            for m in 0..k {
                let mut v = T::zero();
                if m < k - 1 {
                    v = v + T::from_usize_lossy(m + 1) * euler[m];
                }
                if m >= 1 {
                    v = v + T::from_usize_lossy(k - m) * euler[m - 1];
                }
                next[m] = v;
            }
            euler = next;
            inv_pow = inv_pow * inv;
        }
        let mut poly = Complex::new(T::zero(), T::zero());
        for &c in euler.iter().rev() {
            poly = poly * z + c;
        }
        out.push(z * poly * inv_pow);
    }
    out
}

/// Large-`a` expansion of `Φ(e^{iθ}, α, a)`, valid when `a|1 − z| ≫ 1`.
fn lerch_tail<T: Real>(z: Complex<T>, alpha: T, a: T) -> Result<Complex<T>> {
    let sums = power_sums(z, TAIL_ORDER_CAP);
    let mut coeff = T::one();
    let mut apow = a.powf(-alpha);
    let mut total = sums[0] * apow;
    // On symmetric points (z = −1) every other power sum vanishes, so both
    // the stopping and the divergence tests look at the last two terms.
    let mut last = total.norm();
    let mut before = T::infinity();
    for (k, mk) in sums.iter().enumerate().skip(1) {
        let kk = T::from_usize_lossy(k);
        coeff = coeff * (-alpha - kk + T::one()) / kk;
        if coeff == T::zero() {
            return Ok(total);
        }
        apow = apow / a;
        let term = *mk * (coeff * apow);
        let size = term.norm();
        let recent = last.max(before);
        if size.max(last) > recent.max(before) && k > 2 {
            // asymptotic series started to diverge; the previous terms bound the error
            if recent > T::lit(1e3) * T::epsilon() * total.norm() {
                return Err(Error::NonConvergence {
                    what: "lerch_phi tail",
                    terms: k,
                    tail: recent.to_f64_lossy(),
                });
            }
            return Ok(total);
        }
        total = total + term;
        if size.max(last) <= T::epsilon() * total.norm() {
            return Ok(total);
        }
        before = last;
        last = size;
    }
    Err(Error::NonConvergence {
        what: "lerch_phi tail",
        terms: TAIL_ORDER_CAP,
        tail: last.to_f64_lossy(),
    })
}

fn lerch_real_shift<T: Real>(theta: T, alpha: T, a: T) -> Result<Complex<T>> {
    let chord = T::two() * (theta / T::two()).sin().abs();
    if !(chord > T::zero()) {
        return Err(domain(
            "lerch_phi",
            "z = 1 is excluded",
            theta.to_f64_lossy(),
        ));
    }
    let radius = T::lit(TAIL_RADIUS);
    let needed = (radius / chord - a).ceil().max(T::zero());
    if needed > T::from_usize_lossy(SERIES_TERM_CAP) {
        return Err(Error::NonConvergence {
            what: "lerch_phi",
            terms: SERIES_TERM_CAP,
            tail: (a + T::from_usize_lossy(SERIES_TERM_CAP))
                .powf(-alpha)
                .to_f64_lossy()
                / chord.to_f64_lossy(),
        });
    }
    let n0 = needed.to_usize().unwrap_or(0);
    let mut head = Complex::new(T::zero(), T::zero());
    // sum the head from the far end so the small terms go in first
    for j in (0..n0).rev() {
        let jt = T::from_usize_lossy(j);
        let w = (a + jt).powf(-alpha);
        let ang = theta * jt;
        head = head + Complex::new(ang.cos() * w, ang.sin() * w);
    }
    let z = Complex::new(theta.cos(), theta.sin());
    let shift_angle = theta * T::from_usize_lossy(n0);
    let zn = Complex::new(shift_angle.cos(), shift_angle.sin());
    Ok(head + zn * lerch_tail(z, alpha, a + T::from_usize_lossy(n0))?)
}

/// Lerch transcendent `Φ(e^{iθ}, α, n) = Σ_{j≥0} e^{ijθ} (j + n)^{−α}`.
pub fn lerch_phi<T: Real>(theta: T, alpha: T, n: usize) -> Result<Complex<T>> {
    if n == 0 {
        return Err(Error::InvalidInput("lerch_phi: n must be >= 1".into()));
    }
    if alpha < T::zero() {
        return Err(domain(
            "lerch_phi",
            "alpha must be >= 0",
            alpha.to_f64_lossy(),
        ));
    }
    lerch_real_shift(theta, alpha, T::from_usize_lossy(n))
}

/// `Li_α(e^{iθ})`.
pub fn polylog_unit<T: Real>(alpha: T, theta: T) -> Result<Complex<T>> {
    let z = Complex::new(theta.cos(), theta.sin());
    Ok(z * lerch_phi(theta, alpha, 1)?)
}

/// Folds `θ` into `(0, π]`; the pair is even and `2π`-periodic.
fn fold_angle<T: Real>(theta: T) -> Result<T> {
    let tau = T::TAU();
    let mut t = theta % tau;
    if t < T::zero() {
        t = t + tau;
    }
    if t > T::PI() {
        t = tau - t;
    }
    if !(t > T::zero()) {
        return Err(domain(
            "polylog_pair",
            "theta must not be a multiple of 2 pi",
            theta.to_f64_lossy(),
        ));
    }
    Ok(t)
}

/// `Li_α(e^{iθ}) + Li_α(e^{−iθ})` by the automatic route.
pub fn polylog_pair<T: Real>(alpha: T, theta: T) -> Result<T> {
    polylog_pair_with(alpha, theta, PolylogRoute::Auto, &KernelParams::new(alpha))
}

/// `Li_α(e^{iθ}) + Li_α(e^{−iθ})` by an explicit route. The expansion route
/// is unavailable at odd positive integer `α`, where its kernels have poles.
pub fn polylog_pair_with<T: Real>(
    alpha: T,
    theta: T,
    route: PolylogRoute,
    params: &KernelParams<T>,
) -> Result<T> {
    if alpha < T::zero() {
        return Err(domain(
            "polylog_pair",
            "alpha must be >= 0",
            alpha.to_f64_lossy(),
        ));
    }
    let t = fold_angle(theta)?;
    let odd = near_integer(alpha).is_some_and(|k| k % 2 == 1);
    let route = match route {
        PolylogRoute::Auto => {
            if near_integer(alpha) == Some(1) {
                // Li₁(z) = −ln(1 − z)
                return Ok(-T::two() * (T::two() * (t / T::two()).sin()).ln());
            }
            // the expansion cancels two large terms when α is near 1
            if !odd && (alpha - T::one()).abs() > T::lit(0.05) && t < T::half() {
                PolylogRoute::Expansion
            } else {
                PolylogRoute::Direct
            }
        }
        r => r,
    };
    match route {
        PolylogRoute::Expansion => {
            if odd {
                return Err(Error::Pole {
                    function: "polylog_pair expansion",
                    at: alpha.to_f64_lossy(),
                });
            }
            pair_expansion(alpha, t, params)
        }
        _ => Ok(T::two() * polylog_unit(alpha, t)?.re),
    }
}
