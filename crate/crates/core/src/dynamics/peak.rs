//! Peak extraction in the first search window.

use num_complex::Complex;

use crate::analytics::amplitude_and_fidelity;
use crate::optimize::golden_section;
use crate::spectrum::eigenvalues_exact;
use crate::{Real, Result};

use super::chebyshev::ChebyshevPropagator;
use super::dense::DenseEvolution;
use super::{Method, SearchProblem, SearchResult, DEFAULT_DENSE_CAP};

/// Controls for [`find_peak`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakOptions {
    /// Window length in units of `(π/2)√(n/F̂)`.
    pub window_factor: f64,
    pub coarse_points: usize,
    /// `None` picks dense up to `dense_cap` and Chebyshev beyond.
    pub method: Option<Method>,
    pub dense_cap: usize,
}

impl Default for PeakOptions {
    fn default() -> Self {
        Self {
            window_factor: 1.5,
            coarse_points: 400,
            method: None,
            dense_cap: DEFAULT_DENSE_CAP,
        }
    }
}

/// Fidelity evaluated on a grid and at single points.
trait Oracle<T: Real> {
    fn grid(&mut self, dt: T, points: usize) -> Result<Vec<T>>;
    fn at(&mut self, t: T) -> Result<T>;
}

impl<T: Real> Oracle<T> for DenseEvolution<T> {
    fn grid(&mut self, dt: T, points: usize) -> Result<Vec<T>> {
        Ok((0..=points)
            .map(|i| self.fidelity(dt * T::from_usize_lossy(i)))
            .collect())
    }

    fn at(&mut self, t: T) -> Result<T> {
        Ok(self.fidelity(t))
    }
}

struct ChebyshevOracle<T: Real> {
    prop: ChebyshevPropagator<T>,
    w: usize,
    n: usize,
    /// State at `checkpoint.0`, the propagation origin for [`Oracle::at`].
    checkpoint: (T, Vec<Complex<T>>),
}

impl<T: Real> Oracle<T> for ChebyshevOracle<T> {
    fn grid(&mut self, dt: T, points: usize) -> Result<Vec<T>> {
        let mut psi = self.prop.initial_state();
        let mut out = vec![T::from_usize_lossy(self.n).recip()];
        for _ in 0..points {
            self.prop.propagate(&mut psi, dt)?;
            out.push(psi[self.w].norm_sqr().min(T::one()));
        }
        Ok(out)
    }

    fn at(&mut self, t: T) -> Result<T> {
        if t == T::zero() {
            return Ok(T::from_usize_lossy(self.n).recip());
        }
        let (t0, psi0) = if t >= self.checkpoint.0 {
            (self.checkpoint.0, self.checkpoint.1.clone())
        } else {
            (T::zero(), self.prop.initial_state())
        };
        let mut psi = psi0;
        self.prop.propagate(&mut psi, t - t0)?;
        Ok(psi[self.w].norm_sqr().min(T::one()))
    }
}

impl<T: Real> ChebyshevOracle<T> {
    fn set_checkpoint(&mut self, t: T) -> Result<()> {
        let mut psi = self.prop.initial_state();
        self.prop.propagate(&mut psi, t)?;
        self.checkpoint = (t, psi);
        Ok(())
    }
}

/// Coarse scan plus golden-section refinement of the global maximum.
/// Returns `(t, F, at_edge)`.
fn scan_window<T: Real, O: Oracle<T>>(
    oracle: &mut O,
    t_max: T,
    points: usize,
    before_refine: &mut dyn FnMut(&mut O, T) -> Result<()>,
) -> Result<(T, T, bool)> {
    let dt = t_max / T::from_usize_lossy(points);
    let values = oracle.grid(dt, points)?;
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    let at_edge = best == points;
    let lo = dt * T::from_usize_lossy(best.saturating_sub(1));
    let hi = dt * T::from_usize_lossy((best + 1).min(points));
    before_refine(oracle, lo)?;
    let centre = dt * T::from_usize_lossy(best.max(1));
    let mut failure = None;
    let refined = golden_section(
        |t| match oracle.at(t) {
            Ok(f) => -f,
            Err(e) => {
                failure.get_or_insert(e);
                T::zero()
            }
        },
        lo,
        hi,
        T::lit(1e-6) * centre,
        500,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    if -refined.value >= values[best] {
        Ok((refined.x, -refined.value, at_edge))
    } else {
        Ok((dt * T::from_usize_lossy(best), values[best], at_edge))
    }
}

/// Peak fidelity and its time in `(0, window_factor·(π/2)√(n/F̂)]`, where
/// `F̂` is the analytic `F_∞` (or 1/4 if that is unavailable). If the
/// maximum sits on the window edge the window is doubled once; if it is
/// still there, the result carries a boundary warning.
pub fn find_peak<T: Real>(
    problem: &SearchProblem<T>,
    options: &PeakOptions,
) -> Result<SearchResult<T>> {
    if !(options.window_factor >= 1.0) || options.coarse_points < 200 {
        return Err(crate::Error::InvalidInput(
            "find_peak needs window_factor >= 1 and coarse_points >= 200".into(),
        ));
    }
    let chain = problem.chain();
    let n = chain.n();
    let f_hat = eigenvalues_exact(chain)
        .and_then(|s| amplitude_and_fidelity(&s))
        .map(|(_, f)| f)
        .ok()
        .filter(|f| *f > T::zero())
        .unwrap_or(T::lit(0.25));
    let base = T::lit(options.window_factor) * T::FRAC_PI_2() * (chain.size() / f_hat).sqrt();
    let method = options
        .method
        .unwrap_or(Method::for_size(n, options.dense_cap));

    let run = |t_max: T| -> Result<(T, T, bool)> {
        match method {
            Method::Dense => {
                let mut d = DenseEvolution::new(problem, options.dense_cap)?;
                scan_window(&mut d, t_max, options.coarse_points, &mut |_, _| Ok(()))
            }
            Method::Chebyshev => {
                let prop = ChebyshevPropagator::new(problem)?;
                let psi = prop.initial_state();
                let mut o = ChebyshevOracle {
                    prop,
                    w: problem.marked() - 1,
                    n,
                    checkpoint: (T::zero(), psi),
                };
                scan_window(&mut o, t_max, options.coarse_points, &mut |o, t| {
                    o.set_checkpoint(t)
                })
            }
        }
    };

    let mut t_max = base;
    let (mut t_star, mut f_star, mut at_edge) = run(t_max)?;
    if at_edge {
        t_max = base * T::two();
        (t_star, f_star, at_edge) = run(t_max)?;
    }
    Ok(SearchResult {
        t_star,
        f_star,
        gamma_used: problem.gamma(),
        method,
        window: (T::zero(), t_max),
        boundary_warning: at_edge,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::predicted_time;
    use crate::dynamics::gamma_star;
    use crate::spectrum::ChainSpec;

    #[test]
    fn tiny_ring() {
        let chain = ChainSpec::new(3, 1.0_f64).unwrap();
        let p = SearchProblem::new(chain, 0.3, 1).unwrap();
        let r = find_peak(&p, &PeakOptions::default()).unwrap();
        assert!(r.f_star >= 1.0 / 3.0 && r.t_star.is_finite());
    }

    #[test]
    fn peak_near_prediction() {
        let chain = ChainSpec::new(256, 1.0_f64).unwrap();
        let g = gamma_star(&chain).unwrap().gamma;
        let p = SearchProblem::new(chain, g, 1).unwrap();
        let r = find_peak(&p, &PeakOptions::default()).unwrap();
        let s = eigenvalues_exact(&chain).unwrap();
        let (_, f_inf) = amplitude_and_fidelity(&s).unwrap();
        let t_pred = predicted_time(&chain, f_inf).unwrap();
        assert!(((r.t_star - t_pred) / t_pred).abs() < 0.10);
        assert!((r.f_star - f_inf).abs() < 0.05);
        assert!(!r.boundary_warning && r.method == Method::Dense);
    }

    #[test]
    fn chebyshev_peak_matches_dense() {
        let chain = ChainSpec::new(96, 0.8_f64).unwrap();
        let g = gamma_star(&chain).unwrap().gamma;
        let p = SearchProblem::new(chain, g, 5).unwrap();
        let d = find_peak(&p, &PeakOptions::default()).unwrap();
        let c = find_peak(
            &p,
            &PeakOptions {
                method: Some(Method::Chebyshev),
                ..Default::default()
            },
        )
        .unwrap();
        assert!((d.f_star - c.f_star).abs() < 1e-9);
        assert!(((d.t_star - c.t_star) / d.t_star).abs() < 1e-4);
    }

    #[test]
    fn option_validation() {
        let p = SearchProblem::new(ChainSpec::new(8, 1.0_f64).unwrap(), 0.1, 1).unwrap();
        let bad = PeakOptions {
            coarse_points: 10,
            ..Default::default()
        };
        assert!(find_peak(&p, &bad).is_err());
    }
}
