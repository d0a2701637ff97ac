//! The circulant hopping Hamiltonian in the single-excitation sector.
//!
//! Eigenvalues are indexed `k = 1..n` with `k = n` the top of the spectrum
//! (the uniform state). Storage is zero-based (`k − 1`); every accessor here
//! takes the one-based `k`.

mod asymptotic;

use realfft::RealFftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::numeric::{compensated_sum, root_of_unity};
use crate::{Real, Result};

pub use asymptotic::{
    gap_asymptotic, half_eigenvalue_closed_form, rescaled_eigenvalue_asymptotic,
    top_eigenvalue_closed_form,
};

/// A closed ring of `n` spins with couplings `1/d^α` along both arcs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChain<T>", bound = "T: Real")]
pub struct ChainSpec<T> {
    n: usize,
    alpha: T,
}

#[derive(Deserialize)]
#[serde(bound = "T: Real")]
struct RawChain<T> {
    n: usize,
    alpha: T,
}

impl<T: Real> TryFrom<RawChain<T>> for ChainSpec<T> {
    type Error = Error;
    fn try_from(raw: RawChain<T>) -> Result<Self> {
        Self::new(raw.n, raw.alpha)
    }
}

impl<T: Real> ChainSpec<T> {
    pub fn new(n: usize, alpha: T) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInput(format!(
                "ring needs n >= 3 spins, got {n}"
            )));
        }
        if !(alpha >= T::zero()) || !alpha.is_finite() {
            return Err(Error::InvalidInput(format!(
                "alpha must be finite and >= 0, got {alpha}"
            )));
        }
        Ok(Self { n, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// `n` as a scalar.
    pub fn size(&self) -> T {
        T::from_usize_lossy(self.n)
    }
}

/// `c_d = 1/d^α + 1/(n−d)^α` for `d = 1..n−1` (index `d − 1`).
pub fn coupling_row<T: Real>(chain: &ChainSpec<T>) -> Vec<T> {
    let n = chain.n;
    let a = chain.alpha;
    let mut row = vec![T::zero(); n - 1];
    // fill the first half and mirror, so c_d = c_{n−d} holds bit for bit
    for d in 1..=n / 2 {
        let c = T::from_usize_lossy(d).powf(-a) + T::from_usize_lossy(n - d).powf(-a);
        row[d - 1] = c;
        row[n - d - 1] = c;
    }
    row
}

/// Raw and rescaled eigenvalues of the ring.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    lambda: Vec<T>,
    lambda_tilde: Vec<T>,
    k_max: usize,
    lambda_min_index: usize,
}

impl<T: Real> Spectrum<T> {
    /// Builds the spectrum from raw eigenvalues listed for `k = 1..n`, the top
    /// one last.
    pub fn from_raw(lambda: Vec<T>) -> Result<Self> {
        let n = lambda.len();
        if n < 3 {
            return Err(Error::InvalidInput(
                "spectrum needs at least 3 eigenvalues".into(),
            ));
        }
        let mut min_i = 0;
        for (i, &l) in lambda.iter().enumerate() {
            if l < lambda[min_i] {
                min_i = i;
            }
        }
        let top = lambda[n - 1];
        if lambda.iter().any(|&l| l > top) {
            return Err(Error::InvalidInput(
                "the k = n eigenvalue must be the largest".into(),
            ));
        }
        let lo = lambda[min_i];
        let width = top - lo;
        if !(width > T::zero()) {
            return Err(Error::Degenerate("spectrum: max equals min"));
        }
        let mut lambda_tilde: Vec<T> = lambda.iter().map(|&l| (l - lo) / width).collect();
        lambda_tilde[n - 1] = T::one();
        lambda_tilde[min_i] = T::zero();
        Ok(Self {
            lambda,
            lambda_tilde,
            k_max: n,
            lambda_min_index: min_i + 1,
        })
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    /// `λ_k`, one-based.
    pub fn lambda(&self, k: usize) -> T {
        self.lambda[k - 1]
    }

    /// `λ̃_k`, one-based.
    pub fn lambda_tilde(&self, k: usize) -> T {
        self.lambda_tilde[k - 1]
    }

    /// All `λ_k` in order `k = 1..n`.
    pub fn raw(&self) -> &[T] {
        &self.lambda
    }

    /// All `λ̃_k` in order `k = 1..n`.
    pub fn rescaled(&self) -> &[T] {
        &self.lambda_tilde
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn lambda_min_index(&self) -> usize {
        self.lambda_min_index
    }

    pub fn lambda_max(&self) -> T {
        self.lambda[self.k_max - 1]
    }

    pub fn lambda_min(&self) -> T {
        self.lambda[self.lambda_min_index - 1]
    }

    /// Rescaled gap `Δ = 1 − λ̃_{n−1}`.
    pub fn gap(&self) -> T {
        T::one() - self.lambda_tilde(self.n() - 1)
    }
}

/// Eigenvalues via a real-input FFT of the circulant row, `O(n log n)`.
pub fn eigenvalues_exact<T: Real>(chain: &ChainSpec<T>) -> Result<Spectrum<T>> {
    Spectrum::from_raw(eigenvalues_fft(chain))
}

/// The raw FFT eigenvalues, `k = 1..n`.
pub(crate) fn eigenvalues_fft<T: Real>(chain: &ChainSpec<T>) -> Vec<T> {
    let n = chain.n;
    let mut planner = RealFftPlanner::<T>::new();
    let fft = planner.plan_fft_forward(n);
    let mut input = fft.make_input_vec();
    input[1..].copy_from_slice(&coupling_row(chain));
    let mut output = fft.make_output_vec();
    fft.process(&mut input, &mut output)
        .expect("buffer sizes come from the plan");
    // bin m holds λ_m (bin 0 is k = n); mirror the upper half exactly
    let mut lambda = vec![T::zero(); n];
    for k in 1..n {
        let m = k.min(n - k);
        lambda[k - 1] = output[m].re;
    }
    lambda[n - 1] = output[0].re;
    lambda
}

/// Eigenvalues by direct summation `λ_k = Σ_d c_d cos(2πkd/n)`, `O(n²)`; the
/// oracle for [`eigenvalues_exact`].
pub fn eigenvalues_direct<T: Real>(chain: &ChainSpec<T>) -> Result<Spectrum<T>> {
    let n = chain.n;
    let row = coupling_row(chain);
    let lambda = (1..=n)
        .map(|k| {
            compensated_sum(
                row.iter()
                    .enumerate()
                    .map(|(i, &c)| c * root_of_unity::<T>((k * (i + 1)) as u64, n as u64).0),
            )
        })
        .collect();
    Spectrum::from_raw(lambda)
}

/// `1 − λ̃_{n−1}`.
pub fn spectral_gap_exact<T: Real>(spectrum: &Spectrum<T>) -> T {
    spectrum.gap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn chain_validation() {
        assert!(ChainSpec::new(2, 1.0_f64).is_err());
        assert!(ChainSpec::new(3, -0.1_f64).is_err());
        assert!(ChainSpec::new(3, f64::NAN).is_err());
        assert!(ChainSpec::new(3, 0.0_f64).is_ok());
        let bad: std::result::Result<ChainSpec<f64>, _> =
            serde_json::from_str(r#"{"n":2,"alpha":1.0}"#);
        assert!(bad.is_err());
        let ok: ChainSpec<f64> = serde_json::from_str(r#"{"n":8,"alpha":1.5}"#).unwrap();
        assert_eq!(ok, ChainSpec::new(8, 1.5).unwrap());
    }

    #[test]
    fn coupling_rows() {
        let c = coupling_row(&ChainSpec::new(10, 0.0_f64).unwrap());
        assert!(c.iter().all(|&x| x == 2.0));
        let c = coupling_row(&ChainSpec::new(4, 1.0_f64).unwrap());
        assert_relative_eq!(c[0], 4.0 / 3.0);
        assert_relative_eq!(c[1], 1.0);
        assert_relative_eq!(c[2], 4.0 / 3.0);
        let c = coupling_row(&ChainSpec::new(12, 60.0_f64).unwrap());
        assert!((c[0] - 1.0).abs() < 1e-15 && c[5] < 1e-15);
    }

    #[test]
    fn complete_graph_spectrum() {
        let n = 50;
        let s = eigenvalues_exact(&ChainSpec::new(n, 0.0_f64).unwrap()).unwrap();
        assert_relative_eq!(s.lambda(n), 2.0 * (n as f64 - 1.0), max_relative = 1e-14);
        for k in 1..n {
            assert!((s.lambda(k) + 2.0).abs() < 1e-12);
            assert!(s.lambda_tilde(k).abs() < 1e-12);
        }
        assert_eq!(spectral_gap_exact(&s), 1.0);
    }

    #[test]
    fn rescaled_endpoints_and_minimum_location() {
        let s = eigenvalues_exact(&ChainSpec::new(64, 1.3_f64).unwrap()).unwrap();
        assert_eq!(s.lambda_tilde(64), 1.0);
        assert_eq!(s.lambda_min_index(), 32);
        assert_eq!(s.lambda_tilde(32), 0.0);
        let odd = eigenvalues_exact(&ChainSpec::new(65, 1.3_f64).unwrap()).unwrap();
        assert!(odd.lambda_min_index() == 32 || odd.lambda_min_index() == 33);
        assert_eq!(odd.lambda(32), odd.lambda(33));
    }

    #[test]
    fn from_raw_guards() {
        assert!(matches!(
            Spectrum::from_raw(vec![1.0_f64; 4]),
            Err(Error::Degenerate(_))
        ));
        assert!(Spectrum::from_raw(vec![3.0_f64, 0.0, 1.0]).is_err());
        assert!(Spectrum::from_raw(vec![0.0_f64, 1.0]).is_err());
    }

    #[test]
    fn small_ring_by_hand() {
        // n = 3, α = 1: every pair at distance 1, c = 1 + 1/2
        let s = eigenvalues_direct(&ChainSpec::new(3, 1.0_f64).unwrap()).unwrap();
        assert_relative_eq!(s.lambda(3), 3.0, max_relative = 1e-15);
        assert_relative_eq!(s.lambda(1), -1.5, max_relative = 1e-15);
    }

    #[test]
    fn single_precision_instance() {
        let s = eigenvalues_exact(&ChainSpec::new(256, 1.0_f32).unwrap()).unwrap();
        let d = eigenvalues_exact(&ChainSpec::new(256, 1.0_f64).unwrap()).unwrap();
        assert!(((s.gap() as f64) - d.gap()).abs() < 1e-4);
    }
}
