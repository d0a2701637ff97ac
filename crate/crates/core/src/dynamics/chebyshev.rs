//! Chebyshev expansion of `e^{−iHt}` with FFT-based matrix–vector products.
//!
//! With the spectrum of `H` inside `[b − a, b + a]`,
//! `e^{−iHt} = e^{−ibt} Σ_k (2 − δ_{k0}) (−i)^k J_k(at) T_k((H − b)/a)`.
//! The Bessel coefficients fall off faster than exponentially once
//! `k > at`; the series is cut where they drop below `10⁻¹⁴`. The bounds come
//! from Weyl's inequality, `γλ_min + min D ≤ E ≤ γλ_max + max D`, padded by
//! one percent. Because `|T_k(x)| ≤ 1` on `[−1, 1]`, any growth of
//! `‖T_k(Ĥ)ψ‖` beyond `‖ψ‖` means the bounds were wrong and is reported.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::Error;
use crate::spectrum::eigenvalues_exact;
use crate::{Real, Result};

use super::{FidelityTrace, SearchProblem};

const BOUND_PADDING: f64 = 0.01;
const COEFF_CUTOFF: f64 = 1e-14;
const NORM_SLACK: f64 = 1e-6;

/// `J_0(x) … J_K(x)` by Miller's backward recurrence, normalised with
/// `J_0 + 2 Σ J_{2k} = 1`, where `K` is the first order beyond `x` whose
/// magnitude drops below `cutoff`.
pub(crate) fn bessel_sequence(x: f64, cutoff: f64) -> Vec<f64> {
    if x == 0.0 {
        return vec![1.0];
    }
    let x = x.abs();
    let start = (x + 20.0 * x.cbrt() + 60.0).ceil() as usize;
    let start = start + start % 2;
    let mut j = vec![0.0; start + 2];
    j[start] = 1e-300;
    for k in (1..=start).rev() {
        j[k - 1] = 2.0 * k as f64 / x * j[k] - j[k + 1];
        if j[k - 1].abs() > 1e250 {
            for v in j[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let norm = j[0] + 2.0 * j.iter().skip(2).step_by(2).sum::<f64>();
    let mut out: Vec<f64> = j[..=start].iter().map(|v| v / norm).collect();
    let cut = (1..out.len())
        .find(|&k| k as f64 > x && out[k].abs() < cutoff && out[k - 1].abs() < cutoff)
        .unwrap_or(out.len());
    out.truncate(cut);
    out
}

/// Reusable propagator for one search problem.
pub struct ChebyshevPropagator<T: Real> {
    n: usize,
    /// `γλ/n` in FFT-bin order (bin 0 is the top eigenvalue).
    bins: Vec<T>,
    diag: Vec<T>,
    center: T,
    half_width: T,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    cutoff: f64,
}

impl<T: Real> ChebyshevPropagator<T> {
    pub fn new(problem: &SearchProblem<T>) -> Result<Self> {
        Self::build(problem, None)
    }

    /// Uses the given spectral bounds instead of the Weyl estimate.
    pub fn with_bounds(problem: &SearchProblem<T>, lower: T, upper: T) -> Result<Self> {
        if !(upper > lower) {
            return Err(Error::InvalidInput(
                "spectral bounds must satisfy lower < upper".into(),
            ));
        }
        Self::build(problem, Some((lower, upper)))
    }

    fn build(problem: &SearchProblem<T>, bounds: Option<(T, T)>) -> Result<Self> {
        let chain = problem.chain();
        let n = chain.n();
        let spectrum = eigenvalues_exact(chain)?;
        let gamma = problem.gamma();
        let inv_n = T::from_usize_lossy(n).recip();
        let raw = spectrum.raw();
        let mut bins = Vec::with_capacity(n);
        bins.push(gamma * raw[n - 1] * inv_n);
        bins.extend(raw[..n - 1].iter().map(|&l| gamma * l * inv_n));
        let diag = problem.diagonal();
        let (lower, upper) = bounds.unwrap_or_else(|| {
            let dmin = diag.iter().cloned().fold(T::infinity(), T::min);
            let dmax = diag.iter().cloned().fold(T::neg_infinity(), T::max);
            let lo = gamma * spectrum.lambda_min() + dmin;
            let hi = gamma * spectrum.lambda_max() + dmax;
            let pad = (hi - lo) * T::lit(BOUND_PADDING);
            (lo - pad, hi + pad)
        });
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            bins,
            diag,
            center: (upper + lower) / T::two(),
            half_width: (upper - lower) / T::two(),
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            cutoff: COEFF_CUTOFF.max(T::epsilon().to_f64_lossy()),
        })
    }

    /// `out = (H v − b v)/a`.
    fn apply(&self, v: &[Complex<T>], out: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        out.copy_from_slice(v);
        self.forward.process_with_scratch(out, scratch);
        for (x, &l) in out.iter_mut().zip(&self.bins) {
            *x = *x * l;
        }
        self.inverse.process_with_scratch(out, scratch);
        let inv_a = self.half_width.recip();
        for ((o, &x), &d) in out.iter_mut().zip(v).zip(&self.diag) {
            *o = (*o + x * (d - self.center)) * inv_a;
        }
    }

    /// `ψ ← e^{−iHt} ψ`.
    pub fn propagate(&self, psi: &mut [Complex<T>], t: T) -> Result<()> {
        if t == T::zero() {
            return Ok(());
        }
        let n = self.n;
        let coeffs = bessel_sequence((self.half_width * t).to_f64_lossy(), self.cutoff);
        let ref_norm: T = psi.iter().map(|z| z.norm_sqr()).sum();
        let limit = ref_norm * (T::one() + T::lit(NORM_SLACK));
        let mut scratch = vec![
            Complex::new(T::zero(), T::zero());
            self.forward
                .get_inplace_scratch_len()
                .max(self.inverse.get_inplace_scratch_len())
        ];
        let mut prev: Vec<Complex<T>> = psi.to_vec();
        let mut cur = vec![Complex::new(T::zero(), T::zero()); n];
        let mut next = vec![Complex::new(T::zero(), T::zero()); n];
        let mut acc: Vec<Complex<T>> = prev.iter().map(|&x| x * T::lit(coeffs[0])).collect();
        // (−i)^k cycles through 1, −i, −1, i
        let phase = |k: usize, c: T| match k % 4 {
            0 => Complex::new(c, T::zero()),
            1 => Complex::new(T::zero(), -c),
            2 => Complex::new(-c, T::zero()),
            _ => Complex::new(T::zero(), c),
        };
        if coeffs.len() > 1 {
            self.apply(&prev, &mut cur, &mut scratch);
            let c1 = phase(1, T::lit(2.0 * coeffs[1]));
            for (a, &x) in acc.iter_mut().zip(&cur) {
                *a = *a + x * c1;
            }
        }
        for (k, &jk) in coeffs.iter().enumerate().skip(2) {
            self.apply(&cur, &mut next, &mut scratch);
            let mut norm = T::zero();
            for (nx, &pv) in next.iter_mut().zip(&prev) {
                *nx = *nx * T::two() - pv;
                norm = norm + nx.norm_sqr();
            }
            if !(norm <= limit) {
                return Err(Error::SpectralBound {
                    drift: (norm / ref_norm).sqrt().to_f64_lossy() - 1.0,
                });
            }
            let ck = phase(k, T::lit(2.0 * jk));
            for (a, &x) in acc.iter_mut().zip(&next) {
                *a = *a + x * ck;
            }
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);
        }
        let rot = Complex::from_polar(T::one(), -self.center * t);
        for (p, a) in psi.iter_mut().zip(acc) {
            *p = a * rot;
        }
        Ok(())
    }

    /// The uniform initial state `|s⟩`.
    pub fn initial_state(&self) -> Vec<Complex<T>> {
        vec![Complex::new(T::from_usize_lossy(self.n).sqrt().recip(), T::zero()); self.n]
    }
}

/// `F(t)` at `t = 0, dt, 2dt, … ≤ t_max`, stepping the state by `dt`.
pub fn evolve_chebyshev<T: Real>(
    problem: &SearchProblem<T>,
    t_max: T,
    dt_report: T,
) -> Result<FidelityTrace<T>> {
    if !(dt_report > T::zero()) || !(t_max >= T::zero()) {
        return Err(Error::InvalidInput(
            "need dt_report > 0 and t_max >= 0".into(),
        ));
    }
    let prop = ChebyshevPropagator::new(problem)?;
    let steps = (t_max / dt_report + T::lit(1e-9))
        .floor()
        .to_usize()
        .unwrap_or(0);
    let w = problem.marked() - 1;
    let mut psi = prop.initial_state();
    let mut times = Vec::with_capacity(steps + 1);
    let mut fidelities = Vec::with_capacity(steps + 1);
    times.push(T::zero());
    fidelities.push(T::from_usize_lossy(problem.chain().n()).recip());
    for k in 1..=steps {
        prop.propagate(&mut psi, dt_report)?;
        times.push(dt_report * T::from_usize_lossy(k));
        fidelities.push(psi[w].norm_sqr().min(T::one()));
    }
    Ok(FidelityTrace { times, fidelities })
}
