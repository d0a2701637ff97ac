//! CSV data behind each figure panel, one file per curve.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytics::{amplitude_and_fidelity, inset_value, nu_bar, predicted_time, s_q, s_q_bar};
use crate::dynamics::{gamma_star, noisy_ensemble, Method, NoiseSpec, DEFAULT_DENSE_CAP};
use crate::error::Error;
use crate::spectrum::{eigenvalues_exact, gap_asymptotic, ChainSpec};
use crate::Result;

use super::output::{config_hash, CsvTable};
use super::sweep::{doubling_range, SweepRecord};

/// Figure panels with data emitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    /// Peak time against `n`, per `α`, with the predicted time.
    Fig1a,
    /// Peak fidelity against `n` (and `1/n`), per `α`, with `F_∞`.
    Fig1b,
    /// Asymptotic fidelity across `α`.
    Inset,
    /// Spectral gap against `n`, per `α`, with the `n^{-1/2}` reference.
    Fig2,
    /// Noise-averaged fidelity traces, per noise strength.
    Fig3,
    /// `S₁` and its closed form against `n`, per `α`.
    Sm4,
    /// `ν` and its closed form against `α`, per `n`.
    Sm5,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::Fig1a,
        FigureId::Fig1b,
        FigureId::Inset,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Sm4,
        FigureId::Sm5,
    ];

    /// Whether the panel is built from sweep records rather than computed
    /// directly.
    pub fn needs_records(self) -> bool {
        matches!(self, FigureId::Fig1a | FigureId::Fig1b)
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FigureId::Fig1a => "fig1a",
            FigureId::Fig1b => "fig1b",
            FigureId::Inset => "inset",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Sm4 => "sm4",
            FigureId::Sm5 => "sm5",
        })
    }
}

impl FromStr for FigureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown figure {s:?} (fig1a|fig1b|inset|fig2|fig3|sm4|sm5)"
                ))
            })
    }
}

/// Grid overrides. Anything left `None` falls back to the panel's default.
///
/// For `fig3` the first entry of `ns` and `alphas` (if given) replaces the
/// default `n = 256`, `α = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureParams {
    pub alphas: Option<Vec<f64>>,
    pub ns: Option<Vec<usize>>,
    pub sigmas: Option<Vec<f64>>,
    pub realizations: usize,
    pub seed: u64,
    pub dense_cap: usize,
    /// Samples per `fig3` trace.
    pub time_points: usize,
}

impl Default for FigureParams {
    fn default() -> Self {
        Self {
            alphas: None,
            ns: None,
            sigmas: None,
            realizations: 100,
            seed: 0,
            dense_cap: DEFAULT_DENSE_CAP,
            time_points: 400,
        }
    }
}

fn steps(lo: f64, step: f64, count: usize) -> Vec<f64> {
    // rounded so that file names and rows read 1.02 rather than 1.0200000000000002
    (0..count)
        .map(|i| ((lo + step * i as f64) * 1e9).round() / 1e9)
        .collect()
}

/// `n` log-spaced over `[10², 10⁶]`, five points per decade.
fn log_ns() -> Vec<usize> {
    (0..=20)
        .map(|i| 10f64.powf(2.0 + i as f64 / 5.0).round() as usize)
        .collect()
}

impl FigureParams {
    /// The grids actually used for `id`.
    pub fn resolved(&self, id: FigureId) -> FigureParams {
        let (alphas, ns, sigmas): (Vec<f64>, Vec<usize>, Vec<f64>) = match id {
            FigureId::Fig1a | FigureId::Fig1b => (
                vec![0.5, 0.8, 1.0, 1.2, 1.4],
                doubling_range(64, 2048),
                vec![],
            ),
            FigureId::Inset => (steps(0.0, 0.01, 201), vec![], vec![]),
            FigureId::Fig2 => (vec![0.5, 1.0, 1.2, 1.4, 1.6, 2.0], log_ns(), vec![]),
            FigureId::Fig3 => (vec![1.0], vec![256], vec![0.0, 0.01, 0.02, 0.05]),
            FigureId::Sm4 => (
                vec![1.25, 1.5, 1.75, 2.5],
                doubling_range(64, 65536),
                vec![],
            ),
            FigureId::Sm5 => (steps(1.02, 0.02, 50), vec![256, 1024, 4096], vec![]),
        };
        let mut out = self.clone();
        out.alphas = Some(self.alphas.clone().unwrap_or(alphas));
        out.ns = Some(self.ns.clone().unwrap_or(ns));
        out.sigmas = Some(self.sigmas.clone().unwrap_or(sigmas));
        if id == FigureId::Fig3 {
            out.alphas.as_mut().unwrap().truncate(1);
            out.ns.as_mut().unwrap().truncate(1);
        }
        out
    }
}

fn file(dir: &Path, stem: &str, key: &str, value: impl fmt::Display) -> PathBuf {
    dir.join(format!("{stem}_{key}_{value}.csv"))
}

fn find(records: &[SweepRecord], alpha: f64, n: usize) -> Option<&SweepRecord> {
    records
        .iter()
        .find(|r| r.n == n && r.alpha.to_bits() == alpha.to_bits())
}

/// Writes the CSV files for `id` into `out_dir` and returns their paths.
///
/// `fig1a` and `fig1b` are assembled from sweep `records`; every grid point
/// must be present or a [`Error::MissingInput`] lists the absent ones. The
/// other panels are computed on the spot.
pub fn emit_figure_data(
    id: FigureId,
    params: &FigureParams,
    out_dir: &Path,
    records: Option<&[SweepRecord]>,
) -> Result<Vec<PathBuf>> {
    let p = params.resolved(id);
    let alphas = p.alphas.clone().unwrap();
    let ns = p.ns.clone().unwrap();
    if alphas.is_empty() || (id != FigureId::Inset && ns.is_empty()) {
        return Err(Error::InvalidInput(format!("{id}: empty grid")));
    }
    let hash = config_hash(&(id, &p))?;
    let mut written = Vec::new();

    match id {
        FigureId::Fig1a | FigureId::Fig1b => {
            let Some(records) = records else {
                return Err(Error::MissingInput(format!("{id} needs sweep records")));
            };
            let missing: Vec<String> = alphas
                .iter()
                .flat_map(|&a| ns.iter().map(move |&n| (a, n)))
                .filter(|&(a, n)| find(records, a, n).is_none())
                .map(|(a, n)| format!("(n={n}, alpha={a})"))
                .collect();
            if !missing.is_empty() {
                return Err(Error::MissingInput(format!(
                    "{id}: no sweep record for {}",
                    missing.join(", ")
                )));
            }
            for &a in &alphas {
                let mut t = if id == FigureId::Fig1a {
                    CsvTable::new(&[("n", "spins"), ("t_star", "1/field"), ("t_pred", "1/field")])
                } else {
                    CsvTable::new(&[
                        ("n", "spins"),
                        ("inv_n", "1/spins"),
                        ("f_star", "probability"),
                        ("f_inf", "probability"),
                    ])
                };
                for &n in &ns {
                    let r = find(records, a, n).unwrap();
                    if id == FigureId::Fig1a {
                        t.push(vec![n.into(), r.t_star.into(), r.t_pred.into()]);
                    } else {
                        t.push(vec![
                            n.into(),
                            (1.0 / n as f64).into(),
                            r.f_star.into(),
                            r.f_inf.into(),
                        ]);
                    }
                }
                let path = file(out_dir, &id.to_string(), "alpha", a);
                t.note("alpha", a).write(&path, &hash)?;
                written.push(path);
            }
        }
        FigureId::Inset => {
            let mut t = CsvTable::new(&[
                ("alpha", "1"),
                ("f_inf_bar_limit", "probability"),
                ("source", "-"),
            ]);
            for &a in &alphas {
                let v = inset_value(a)?;
                let source = serde_json::to_value(v.source)?;
                t.push(vec![
                    a.into(),
                    v.value.into(),
                    source.as_str().unwrap_or_default().into(),
                ]);
            }
            let path = out_dir.join("inset.csv");
            t.write(&path, &hash)?;
            written.push(path);
        }
        FigureId::Fig2 => {
            for &a in &alphas {
                let mut t = CsvTable::new(&[
                    ("n", "spins"),
                    ("delta_asym", "1"),
                    ("delta_exact", "1"),
                    ("n_pow_minus_half", "1"),
                ]);
                for &n in &ns {
                    let chain = ChainSpec::new(n, a)?;
                    let exact = eigenvalues_exact(&chain)?.gap();
                    t.push(vec![
                        n.into(),
                        gap_asymptotic(&chain).ok().into(),
                        exact.into(),
                        (n as f64).powf(-0.5).into(),
                    ]);
                }
                let path = file(out_dir, "fig2", "alpha", a);
                t.note("alpha", a).write(&path, &hash)?;
                written.push(path);
            }
        }
        FigureId::Fig3 => {
            let (n, a) = (ns[0], alphas[0]);
            let chain = ChainSpec::new(n, a)?;
            let (_, f_inf) = amplitude_and_fidelity(&eigenvalues_exact(&chain)?)?;
            let t_max = 2.0 * predicted_time(&chain, f_inf)?;
            let k = p.time_points.max(1);
            let times: Vec<f64> = (0..=k).map(|i| t_max * i as f64 / k as f64).collect();
            let gamma = gamma_star(&chain)?.gamma;
            let method = Method::for_size(n, p.dense_cap);
            for &sigma in p.sigmas.as_deref().unwrap() {
                let noise = NoiseSpec::new(sigma, p.realizations, p.seed)?;
                let e = noisy_ensemble(&chain, gamma, 1, &noise, &times, method, p.dense_cap)?;
                let mut t = CsvTable::new(&[
                    ("t", "1/field"),
                    ("f_mean", "probability"),
                    ("f_std", "probability"),
                ]);
                for (i, &time) in e.mean.times.iter().enumerate() {
                    t.push(vec![
                        time.into(),
                        e.mean.fidelities[i].into(),
                        e.std[i].into(),
                    ]);
                }
                let path = file(out_dir, "fig3", "sigma", sigma);
                t.note("n", n)
                    .note("alpha", a)
                    .note("gamma", gamma)
                    .note("sigma", sigma)
                    .note("realizations", p.realizations)
                    .note("seed", p.seed)
                    .write(&path, &hash)?;
                written.push(path);
            }
        }
        FigureId::Sm4 => {
            for &a in &alphas {
                let mut t = CsvTable::new(&[("n", "spins"), ("s1", "1"), ("s1_bar", "1")]);
                for &n in &ns {
                    let chain = ChainSpec::new(n, a)?;
                    let s1 = s_q(&eigenvalues_exact(&chain)?, 1)?;
                    t.push(vec![n.into(), s1.into(), s_q_bar(&chain, 1).ok().into()]);
                }
                let path = file(out_dir, "sm4", "alpha", a);
                t.note("alpha", a).write(&path, &hash)?;
                written.push(path);
            }
        }
        FigureId::Sm5 => {
            for &n in &ns {
                let mut t =
                    CsvTable::new(&[("alpha", "1"), ("nu", "amplitude"), ("nu_bar", "amplitude")]);
                for &a in &alphas {
                    let chain = ChainSpec::new(n, a)?;
                    let (nu, _) = amplitude_and_fidelity(&eigenvalues_exact(&chain)?)?;
                    t.push(vec![a.into(), nu.into(), nu_bar(&chain).ok().into()]);
                }
                let path = file(out_dir, "sm5", "n", n);
                t.note("n", n).write(&path, &hash)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}
