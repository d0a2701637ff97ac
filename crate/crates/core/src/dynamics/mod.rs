//! Spatial search by continuous-time quantum walk on the ring.
//!
//! The search Hamiltonian is `H = γ C + |w⟩⟨w| + D`, with `C` the circulant
//! hopping matrix, `w` the marked site and `D` an optional diagonal of local
//! field offsets (dephasing noise). The walker starts in the uniform state
//! `|s⟩`. Since every coupling is positive, `|s⟩` is the top eigenvector of
//! `C` and the search happens in the two largest eigenvalues of `H`.

mod chebyshev;
mod dense;
mod eigen;
mod noise;
mod peak;
mod secular;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::spectrum::{coupling_row, ChainSpec};
use crate::{Real, Result};

pub use chebyshev::{evolve_chebyshev, ChebyshevPropagator};
pub use dense::{evolve_dense, DenseEvolution};
pub use eigen::{eigen_full, eigen_probes, EigenProbes, SymmetricMatrix};
pub use noise::{noise_diagonal, noisy_ensemble, EnsembleResult, NoiseSpec};
pub use peak::{find_peak, PeakOptions};
pub use secular::{gamma_star, top_two_energies, GammaStar};

/// Largest `n` for which a dense `n × n` Hamiltonian is built by default.
pub const DEFAULT_DENSE_CAP: usize = 8192;

/// Propagation back end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Full diagonalisation, `O(n³)` once and `O(n)` per time point.
    Dense,
    /// Chebyshev expansion of `e^{−iHt}` with FFT matrix–vector products.
    Chebyshev,
}

impl Method {
    /// Dense up to `cap`, Chebyshev beyond.
    pub fn for_size(n: usize, cap: usize) -> Self {
        if n <= cap {
            Method::Dense
        } else {
            Method::Chebyshev
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Dense => "dense",
            Method::Chebyshev => "chebyshev",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Method::Dense),
            "chebyshev" => Ok(Method::Chebyshev),
            other => Err(Error::InvalidInput(format!(
                "unknown method {other:?} (dense|chebyshev)"
            ))),
        }
    }
}

/// One search instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchProblem<T> {
    chain: ChainSpec<T>,
    gamma: T,
    w: usize,
    noise_diag: Option<Vec<T>>,
}

impl<T: Real> SearchProblem<T> {
    /// `w` is one-based.
    pub fn new(chain: ChainSpec<T>, gamma: T, w: usize) -> Result<Self> {
        if !(gamma > T::zero()) || !gamma.is_finite() {
            return Err(Error::InvalidInput(format!(
                "gamma must be finite and > 0, got {gamma}"
            )));
        }
        if w == 0 || w > chain.n() {
            return Err(Error::InvalidInput(format!(
                "marked site {w} outside 1..={}",
                chain.n()
            )));
        }
        Ok(Self {
            chain,
            gamma,
            w,
            noise_diag: None,
        })
    }

    pub fn with_noise(mut self, noise_diag: Vec<T>) -> Result<Self> {
        if noise_diag.len() != self.chain.n() {
            return Err(Error::InvalidInput(format!(
                "noise diagonal has {} entries for n = {}",
                noise_diag.len(),
                self.chain.n()
            )));
        }
        self.noise_diag = Some(noise_diag);
        Ok(self)
    }

    pub fn chain(&self) -> &ChainSpec<T> {
        &self.chain
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn marked(&self) -> usize {
        self.w
    }

    pub fn noise_diag(&self) -> Option<&[T]> {
        self.noise_diag.as_deref()
    }

    /// Diagonal of `H`: the marking field plus any noise.
    pub fn diagonal(&self) -> Vec<T> {
        let mut d = self
            .noise_diag
            .clone()
            .unwrap_or_else(|| vec![T::zero(); self.chain.n()]);
        d[self.w - 1] = d[self.w - 1] + T::one();
        d
    }
}

/// Sampled fidelity `F(t) = |⟨w|e^{−iHt}|s⟩|²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FidelityTrace<T> {
    pub times: Vec<T>,
    pub fidelities: Vec<T>,
}

impl<T: Real> FidelityTrace<T> {
    /// Sample with the largest fidelity (the first one on ties).
    pub fn peak(&self) -> Option<(T, T)> {
        let mut best: Option<(T, T)> = None;
        for (&t, &f) in self.times.iter().zip(&self.fidelities) {
            if best.is_none_or(|(_, bf)| f > bf) {
                best = Some((t, f));
            }
        }
        best
    }
}

/// Peak of the fidelity in the search window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SearchResult<T> {
    pub t_star: T,
    pub f_star: T,
    pub gamma_used: T,
    pub method: Method,
    /// Searched interval `(0, t_max)`.
    pub window: (T, T),
    /// The maximum sat at the window edge even after doubling the window.
    pub boundary_warning: bool,
}

/// Dense `γ C + |w⟩⟨w| + D`, refused above `dense_cap`.
pub fn build_search_hamiltonian<T: Real>(
    problem: &SearchProblem<T>,
    dense_cap: usize,
) -> Result<SymmetricMatrix<T>> {
    let n = problem.chain.n();
    if n > dense_cap {
        return Err(Error::DenseCap { n, cap: dense_cap });
    }
    let row: Vec<T> = coupling_row(&problem.chain)
        .into_iter()
        .map(|c| problem.gamma * c)
        .collect();
    let diag = problem.diagonal();
    let mut data = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = if i == j {
                diag[i]
            } else {
                row[(j + n - i) % n - 1]
            };
        }
    }
    Ok(SymmetricMatrix::from_row_major_unchecked(n, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problem_validation() {
        let c = ChainSpec::new(8, 1.0_f64).unwrap();
        assert!(SearchProblem::new(c, 0.0, 1).is_err());
        assert!(SearchProblem::new(c, 0.1, 0).is_err());
        assert!(SearchProblem::new(c, 0.1, 9).is_err());
        let p = SearchProblem::new(c, 0.1, 8).unwrap();
        assert!(p.clone().with_noise(vec![0.0; 7]).is_err());
        assert!(p.with_noise(vec![0.0; 8]).is_ok());
    }

    #[test]
    fn three_site_hamiltonian() {
        let p = SearchProblem::new(ChainSpec::new(3, 1.0_f64).unwrap(), 1.0, 1).unwrap();
        let h = build_search_hamiltonian(&p, DEFAULT_DENSE_CAP).unwrap();
        assert_eq!(h.get(0, 0), 1.0);
        assert_eq!(h.get(1, 1), 0.0);
        for (i, j) in [(0, 1), (0, 2), (1, 2), (2, 1)] {
            assert_eq!(h.get(i, j), 1.5);
        }
    }

    #[test]
    fn trace_and_symmetry() {
        let noise: Vec<f64> = (0..10).map(|i| 0.01 * i as f64).collect();
        let p = SearchProblem::new(ChainSpec::new(10, 0.7_f64).unwrap(), 0.3, 4)
            .unwrap()
            .with_noise(noise.clone())
            .unwrap();
        let h = build_search_hamiltonian(&p, DEFAULT_DENSE_CAP).unwrap();
        assert!((h.trace() - 1.0 - noise.iter().sum::<f64>()).abs() < 1e-14);
        let again = SymmetricMatrix::from_row_major(10, h.as_slice().to_vec());
        assert!(again.is_ok());
    }

    #[test]
    fn dense_cap_is_enforced() {
        let p = SearchProblem::new(ChainSpec::new(20, 1.0_f64).unwrap(), 0.1, 1).unwrap();
        assert!(matches!(
            build_search_hamiltonian(&p, 10),
            Err(Error::DenseCap { .. })
        ));
    }

    #[test]
    fn method_parsing() {
        assert_eq!("dense".parse::<Method>().unwrap(), Method::Dense);
        assert!("qr".parse::<Method>().is_err());
        assert_eq!(Method::for_size(9000, DEFAULT_DENSE_CAP), Method::Chebyshev);
        assert_eq!(Method::Chebyshev.to_string(), "chebyshev");
    }
}
