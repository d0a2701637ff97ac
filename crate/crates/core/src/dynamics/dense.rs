//! Propagation by full diagonalisation.

use crate::{Real, Result};

use super::eigen::eigen_probes;
use super::{build_search_hamiltonian, FidelityTrace, SearchProblem};

/// Eigen-data of `H` needed for `F(t)`: energies and the overlaps of each
/// eigenvector with `|s⟩` and `|w⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseEvolution<T> {
    n: usize,
    energies: Vec<T>,
    overlap_s: Vec<T>,
    overlap_w: Vec<T>,
    amp: Vec<T>,
}

impl<T: Real> DenseEvolution<T> {
    pub fn new(problem: &SearchProblem<T>, dense_cap: usize) -> Result<Self> {
        let n = problem.chain().n();
        let h = build_search_hamiltonian(problem, dense_cap)?;
        let s = vec![T::from_usize_lossy(n).sqrt().recip(); n];
        let mut w = vec![T::zero(); n];
        w[problem.marked() - 1] = T::one();
        let ep = eigen_probes(h, &[s, w])?;
        let overlap_s: Vec<T> = (0..n).map(|m| ep.overlap(m, 0)).collect();
        let overlap_w: Vec<T> = (0..n).map(|m| ep.overlap(m, 1)).collect();
        let amp = overlap_s
            .iter()
            .zip(&overlap_w)
            .map(|(&a, &b)| a * b)
            .collect();
        Ok(Self {
            n,
            energies: ep.energies,
            overlap_s,
            overlap_w,
            amp,
        })
    }

    /// Eigenvalues of `H`, ascending.
    pub fn energies(&self) -> &[T] {
        &self.energies
    }

    /// `(⟨s|m⟩, ⟨w|m⟩)` for the `m`-th eigenvector (ascending energy order).
    pub fn overlaps(&self, m: usize) -> (T, T) {
        (self.overlap_s[m], self.overlap_w[m])
    }

    /// `F(t) = |Σ_m ⟨w|m⟩⟨m|s⟩ e^{−iE_m t}|²`; `F(0) = 1/n` is returned
    /// exactly.
    pub fn fidelity(&self, t: T) -> T {
        if t == T::zero() {
            return T::from_usize_lossy(self.n).recip();
        }
        let (mut re, mut im) = (T::zero(), T::zero());
        for (&e, &a) in self.energies.iter().zip(&self.amp) {
            let (s, c) = (e * t).sin_cos();
            re = re + a * c;
            im = im - a * s;
        }
        (re * re + im * im).min(T::one())
    }

    pub fn trace(&self, times: &[T]) -> FidelityTrace<T> {
        FidelityTrace {
            times: times.to_vec(),
            fidelities: times.iter().map(|&t| self.fidelity(t)).collect(),
        }
    }
}

/// `F(t)` on `times` by full diagonalisation.
pub fn evolve_dense<T: Real>(
    problem: &SearchProblem<T>,
    times: &[T],
    dense_cap: usize,
) -> Result<FidelityTrace<T>> {
    if times.iter().any(|&t| !(t >= T::zero())) {
        return Err(crate::Error::InvalidInput(
            "times must be nonnegative".into(),
        ));
    }
    Ok(DenseEvolution::new(problem, dense_cap)?.trace(times))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{eigen_full, DEFAULT_DENSE_CAP};
    use crate::spectrum::ChainSpec;
    use num_complex::Complex;

    fn problem(n: usize, alpha: f64, gamma: f64, w: usize) -> SearchProblem<f64> {
        SearchProblem::new(ChainSpec::new(n, alpha).unwrap(), gamma, w).unwrap()
    }

    #[test]
    fn initial_overlap() {
        let d = DenseEvolution::new(&problem(37, 1.0, 0.02, 5), DEFAULT_DENSE_CAP).unwrap();
        assert_eq!(d.fidelity(0.0), 1.0 / 37.0);
        assert!((d.fidelity(1e-300) - 1.0 / 37.0).abs() < 1e-14);
    }

    #[test]
    fn unitarity() {
        let p = problem(64, 1.0, 0.03, 1);
        let h = build_search_hamiltonian(&p, DEFAULT_DENSE_CAP).unwrap();
        let n = 64;
        let (e, v) = eigen_full(h).unwrap();
        let s = 1.0 / (n as f64).sqrt();
        let cs: Vec<f64> = (0..n)
            .map(|m| (0..n).map(|j| v[j * n + m] * s).sum())
            .collect();
        for t in [0.0, 1.3, 17.0, 250.0] {
            let norm: f64 = (0..n)
                .map(|j| {
                    (0..n)
                        .map(|m| Complex::from_polar(cs[m] * v[j * n + m], -e[m] * t))
                        .sum::<Complex<f64>>()
                        .norm_sqr()
                })
                .sum();
            assert!((norm - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn marked_site_relabelling() {
        let a = DenseEvolution::new(&problem(40, 1.1, 0.02, 1), DEFAULT_DENSE_CAP).unwrap();
        let b = DenseEvolution::new(&problem(40, 1.1, 0.02, 20), DEFAULT_DENSE_CAP).unwrap();
        for (x, y) in a.energies().iter().zip(b.energies()) {
            assert!((x - y).abs() < 1e-12);
        }
        for t in [3.0, 9.0, 30.0] {
            assert!((a.fidelity(t) - b.fidelity(t)).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_negative_times() {
        assert!(evolve_dense(&problem(8, 1.0, 0.1, 1), &[-1.0], DEFAULT_DENSE_CAP).is_err());
    }
}
