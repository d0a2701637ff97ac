//! Finite-`n` probes of the convergence of `S_q`.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::specfun::{f_alpha, g0, h_kernel, KernelParams};
use crate::spectrum::{eigenvalues_exact, ChainSpec};
use crate::{fit_power_law, Real, Result};

use super::s_q;

/// Number of doublings of `n` used for the Cauchy test and the slope fit.
const DOUBLINGS: usize = 4;
/// Successive relative change below which the `S_q` sequence counts as
/// converged.
const CAUCHY_TOL: f64 = 1e-2;

/// Split of the kernel `h(α, n/k) = A + B` into the leading power
/// `A = (g₀/f)(n/k)^{1−α}` and the remainder series `B`, evaluated at
/// `k = 1` and `k = n/2`, together with the behaviour of `S_q` under doubling
/// of `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceProbe {
    pub alpha: f64,
    pub q: u32,
    /// `(k, A)` at `k = 1` and `k = n/2`.
    pub a_at_k: Vec<(usize, f64)>,
    /// `(k, B)` at the same `k`.
    pub b_at_k: Vec<(usize, f64)>,
    /// Smallest and largest `B` by magnitude; `B` grows monotonically in `k`
    /// from about zero at `k = 1` to `1 − A` at `k = n/2`.
    pub b_min: f64,
    pub b_max: f64,
    pub b_in_unit_interval: bool,
    /// `qα − q − 1`, the growth exponent of `S_q` when positive.
    pub divergence_exponent: f64,
    /// `(n, S_q)` for `n, 2n, 4n, ...`.
    pub s_q_sequence: Vec<(usize, f64)>,
    pub relative_changes: Vec<f64>,
    /// Every successive relative change is below `10⁻²`.
    pub cauchy: bool,
    /// Least-squares slope of `ln S_q` against `ln n` over the sequence.
    pub fitted_exponent: f64,
}

pub fn convergence_probe<T: Real>(chain: &ChainSpec<T>, q: u32) -> Result<ConvergenceProbe> {
    let a = chain.alpha();
    if !(a > T::one() && a < T::lit(3.0)) {
        return Err(crate::error::domain(
            "convergence_probe",
            "needs 1 < alpha < 3",
            a.to_f64_lossy(),
        ));
    }
    if q == 0 {
        return Err(Error::InvalidInput(
            "convergence_probe: q must be >= 1".into(),
        ));
    }
    let qt = T::from_u32(q).unwrap();
    let pole = T::one() + qt.recip();
    if (a - pole).abs() < T::lit(1e-3) {
        return Err(Error::Pole {
            function: "convergence_probe",
            at: pole.to_f64_lossy(),
        });
    }
    let n = chain.n();
    let params = KernelParams::new(a);
    let ratio_a = g0(a)? / f_alpha(a)?;
    let mut a_at_k = Vec::new();
    let mut b_at_k = Vec::new();
    for k in [1, n / 2] {
        let r = chain.size() / T::from_usize_lossy(k);
        let lead = ratio_a * r.powf(T::one() - a);
        let rest = h_kernel(&params, r)? - lead;
        a_at_k.push((k, lead.to_f64_lossy()));
        b_at_k.push((k, rest.to_f64_lossy()));
    }
    let bs: Vec<f64> = b_at_k.iter().map(|&(_, b)| b).collect();
    let by_size = |x: &&f64, y: &&f64| x.abs().total_cmp(&y.abs());
    let b_min = *bs.iter().min_by(by_size).unwrap();
    let b_max = *bs.iter().max_by(by_size).unwrap();
    let b_in_unit_interval = bs.iter().all(|b| b.abs() > 0.0 && b.abs() < 1.0);

    let mut s_q_sequence = Vec::with_capacity(DOUBLINGS + 1);
    for j in 0..=DOUBLINGS {
        let m = n << j;
        let spec = eigenvalues_exact(&ChainSpec::new(m, a)?)?;
        s_q_sequence.push((m, s_q(&spec, q)?.to_f64_lossy()));
    }
    let relative_changes: Vec<f64> = s_q_sequence
        .windows(2)
        .map(|w| ((w[1].1 - w[0].1) / w[0].1).abs())
        .collect();
    let cauchy = relative_changes.iter().all(|&c| c < CAUCHY_TOL);
    let xs: Vec<f64> = s_q_sequence.iter().map(|&(m, _)| m as f64).collect();
    let ys: Vec<f64> = s_q_sequence.iter().map(|&(_, s)| s).collect();
    let (_, fitted_exponent) = fit_power_law(&xs, &ys);

    Ok(ConvergenceProbe {
        alpha: a.to_f64_lossy(),
        q,
        a_at_k,
        b_at_k,
        b_min,
        b_max,
        b_in_unit_interval,
        divergence_exponent: (qt * a - qt - T::one()).to_f64_lossy(),
        s_q_sequence,
        relative_changes,
        cauchy,
        fitted_exponent,
    })
}
