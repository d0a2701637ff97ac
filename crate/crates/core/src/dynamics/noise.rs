//! Ensembles with static Gaussian local-field noise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::spectrum::ChainSpec;
use crate::{Real, Result};

use super::chebyshev::ChebyshevPropagator;
use super::dense::DenseEvolution;
use super::{FidelityTrace, Method, SearchProblem};

/// Gaussian noise on every site's local field, fixed in time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct NoiseSpec<T> {
    pub sigma: T,
    pub realizations: usize,
    pub seed: u64,
}

impl<T: Real> NoiseSpec<T> {
    pub fn new(sigma: T, realizations: usize, seed: u64) -> Result<Self> {
        if !(sigma >= T::zero()) || !sigma.is_finite() {
            return Err(Error::InvalidInput(format!(
                "noise sigma must be finite and >= 0, got {sigma}"
            )));
        }
        if realizations == 0 {
            return Err(Error::InvalidInput(
                "need at least one noise realization".into(),
            ));
        }
        Ok(Self {
            sigma,
            realizations,
            seed,
        })
    }
}

/// Site offsets for realization `r`: ChaCha8 seeded with `seed`, stream `r`,
/// one draw per site in order. The pair `(seed, r)` alone fixes the result.
pub fn noise_diagonal<T: Real>(n: usize, sigma: T, seed: u64, r: u64) -> Vec<T> {
    if sigma == T::zero() {
        return vec![T::zero(); n];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r);
    let normal = Normal::new(0.0, sigma.to_f64_lossy()).expect("sigma checked finite and positive");
    (0..n).map(|_| T::lit(normal.sample(&mut rng))).collect()
}

/// Pointwise mean over realizations, plus per-realization peak statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct EnsembleResult<T> {
    pub mean: FidelityTrace<T>,
    /// Pointwise standard deviation across realizations.
    pub std: Vec<T>,
    /// `(t, F)` at the largest sample of the mean trace.
    pub mean_peak: (T, T),
    /// Largest sample of each realization.
    pub realization_peaks: Vec<T>,
    pub realization_peak_mean: T,
    pub realization_peak_std: T,
}

fn run_one<T: Real>(
    problem: &SearchProblem<T>,
    times: &[T],
    method: Method,
    dense_cap: usize,
) -> Result<Vec<T>> {
    match method {
        Method::Dense => Ok(DenseEvolution::new(problem, dense_cap)?
            .trace(times)
            .fidelities),
        Method::Chebyshev => {
            let prop = ChebyshevPropagator::new(problem)?;
            let mut psi = prop.initial_state();
            let w = problem.marked() - 1;
            let mut now = T::zero();
            let mut out = Vec::with_capacity(times.len());
            for &t in times {
                if t < now {
                    return Err(Error::InvalidInput(
                        "chebyshev ensembles need increasing times".into(),
                    ));
                }
                if t == T::zero() {
                    out.push(T::from_usize_lossy(problem.chain().n()).recip());
                    continue;
                }
                prop.propagate(&mut psi, t - now)?;
                now = t;
                out.push(psi[w].norm_sqr().min(T::one()));
            }
            Ok(out)
        }
    }
}

fn mean_std<T: Real>(xs: impl Iterator<Item = T>, count: usize) -> (T, T) {
    // Welford's update: identical inputs give back exactly that value, which a
    // sum divided by the count does not
    let (mut mean, mut m2) = (T::zero(), T::zero());
    for (k, x) in xs.enumerate() {
        let d = x - mean;
        mean = mean + d / T::from_usize_lossy(k + 1);
        m2 = m2 + d * (x - mean);
    }
    (mean, (m2 / T::from_usize_lossy(count)).sqrt())
}

/// Evolves `noise.realizations` noisy copies of the search (realizations in
/// parallel) and averages `F(t)` pointwise. Results do not depend on the
/// number of threads.
pub fn noisy_ensemble<T: Real>(
    chain: &ChainSpec<T>,
    gamma: T,
    w: usize,
    noise: &NoiseSpec<T>,
    times: &[T],
    method: Method,
    dense_cap: usize,
) -> Result<EnsembleResult<T>> {
    if times.is_empty() {
        return Err(Error::InvalidInput(
            "ensemble needs at least one time".into(),
        ));
    }
    let base = SearchProblem::new(*chain, gamma, w)?;
    let traces: Vec<Vec<T>> = (1..=noise.realizations as u64)
        .into_par_iter()
        .map(|r| {
            let d = noise_diagonal(chain.n(), noise.sigma, noise.seed, r);
            let p = base.clone().with_noise(d)?;
            run_one(&p, times, method, dense_cap)
        })
        .collect::<Result<_>>()?;

    let count = traces.len();
    let mut mean = Vec::with_capacity(times.len());
    let mut std = Vec::with_capacity(times.len());
    for i in 0..times.len() {
        let (m, s) = mean_std(traces.iter().map(|tr| tr[i]), count);
        mean.push(m);
        std.push(s);
    }
    let mean = FidelityTrace {
        times: times.to_vec(),
        fidelities: mean,
    };
    let mean_peak = mean.peak().expect("times is non-empty");
    let realization_peaks: Vec<T> = traces
        .iter()
        .map(|tr| tr.iter().cloned().fold(T::neg_infinity(), T::max))
        .collect();
    let (pm, ps) = mean_std(realization_peaks.iter().cloned(), count);
    Ok(EnsembleResult {
        mean,
        std,
        mean_peak,
        realization_peaks,
        realization_peak_mean: pm,
        realization_peak_std: ps,
    })
}
