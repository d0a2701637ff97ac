//! Resumable `(n, α)` sweeps.
//!
//! Layout of the output directory:
//!
//! * `records.jsonl` – one JSON record per finished point. New points are
//!   appended as they finish (the journal that makes an interrupted sweep
//!   resumable); at the end the file is rewritten sorted by `α` then `n`.
//! * `errors.jsonl` – points that failed in the latest run, with the error.
//! * `sweep.csv` – the records of the plan's grid, sorted.
//! * `timings.csv` – wall time per computed point (not deterministic).

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::AsymptoticReport;
use crate::dynamics::{
    find_peak, gamma_star, noisy_ensemble, Method, NoiseSpec, PeakOptions, SearchProblem,
    DEFAULT_DENSE_CAP,
};
use crate::error::Error;
use crate::spectrum::{eigenvalues_exact, ChainSpec};
use crate::Result;

use super::output::{config_hash, write_atomic, Cell, CsvTable};

/// `lo, 2lo, 4lo, … ≤ hi`.
pub fn doubling_range(lo: usize, hi: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = lo.max(1);
    while n <= hi {
        out.push(n);
        n *= 2;
    }
    out
}

/// A sweep over the grid `alphas × ns`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub alphas: Vec<f64>,
    pub ns: Vec<usize>,
    /// Dephasing noise. Every point uses `base_seed` for its realizations; the
    /// seed inside the noise settings is ignored.
    pub noise: Option<NoiseSpec<f64>>,
    pub auto_gamma: bool,
    /// Hopping rate when `auto_gamma` is off.
    pub gamma: Option<f64>,
    pub marked: usize,
    pub dense_cap: usize,
    pub window_factor: f64,
    pub coarse_points: usize,
    pub base_seed: u64,
    #[serde(skip)]
    pub out_dir: PathBuf,
    #[serde(skip)]
    pub workers: usize,
}

impl SweepPlan {
    pub fn new(alphas: Vec<f64>, ns: Vec<usize>, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            alphas,
            ns,
            noise: None,
            auto_gamma: true,
            gamma: None,
            marked: 1,
            dense_cap: DEFAULT_DENSE_CAP,
            window_factor: 1.5,
            coarse_points: 400,
            base_seed: 0,
            out_dir: out_dir.into(),
            workers: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(m.to_string()));
        if self.alphas.is_empty() || self.ns.is_empty() {
            return bad("sweep needs at least one alpha and one n");
        }
        if self.ns.iter().any(|&n| n < 3) {
            return bad("every n must be >= 3");
        }
        if self.alphas.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return bad("every alpha must be finite and >= 0");
        }
        if self.workers == 0 {
            return bad("workers must be >= 1");
        }
        if !self.auto_gamma && !self.gamma.is_some_and(|g| g > 0.0) {
            return bad("give a positive gamma or enable auto_gamma");
        }
        Ok(())
    }

    /// Hash of everything that affects a single point's result (the grid,
    /// worker count and output directory excluded).
    pub fn point_hash(&self) -> Result<String> {
        let mut p = self.clone();
        p.alphas.clear();
        p.ns.clear();
        config_hash(&p)
    }

    /// Hash of the whole plan, grid included.
    pub fn hash(&self) -> Result<String> {
        config_hash(self)
    }

    /// Grid points sorted by `α`, then `n`, duplicates removed.
    pub fn grid(&self) -> Vec<(f64, usize)> {
        let mut g: Vec<(f64, usize)> = self
            .alphas
            .iter()
            .flat_map(|&a| self.ns.iter().map(move |&n| (a, n)))
            .collect();
        g.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        g.dedup_by(|x, y| x.0.to_bits() == y.0.to_bits() && x.1 == y.1);
        g
    }
}

/// Result for one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: usize,
    pub alpha: f64,
    pub gamma_used: f64,
    pub t_star: f64,
    pub f_star: f64,
    pub delta_exact: f64,
    pub delta_asym: Option<f64>,
    pub s1: f64,
    pub s2: f64,
    pub nu: f64,
    pub f_inf: f64,
    pub f_inf_bar: Option<f64>,
    pub t_pred: f64,
    pub method: Method,
    pub seed: u64,
    pub boundary_warning: bool,
    /// [`SweepPlan::point_hash`] of the producing plan.
    pub config_hash: String,
    /// Kept out of the record files so they stay reproducible; see
    /// `timings.csv`.
    #[serde(skip)]
    pub wall_time_s: f64,
}

impl SweepRecord {
    fn key(&self) -> (u64, usize) {
        (self.alpha.to_bits(), self.n)
    }
}

/// A grid point that could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub n: usize,
    pub alpha: f64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    /// Records of the plan's grid, sorted by `α` then `n`.
    pub records: Vec<SweepRecord>,
    pub failures: Vec<PointFailure>,
    /// How many points were computed in this run (the rest were resumed).
    pub computed: usize,
}

/// Evaluates one `(n, α)` point: `γ*` (or the fixed `γ`), the search peak and
/// the analytic report.
pub fn compute_point(
    plan: &SweepPlan,
    n: usize,
    alpha: f64,
    point_hash: &str,
) -> Result<SweepRecord> {
    let start = Instant::now();
    let chain = ChainSpec::new(n, alpha)?;
    let spectrum = eigenvalues_exact(&chain)?;
    let report = AsymptoticReport::from_spectrum(&chain, &spectrum)?;
    let gamma = if plan.auto_gamma {
        gamma_star(&chain)?.gamma
    } else {
        plan.gamma.expect("validated")
    };
    let method = Method::for_size(n, plan.dense_cap);
    let (t_star, f_star, boundary_warning) = match &plan.noise {
        None => {
            let problem = SearchProblem::new(chain, gamma, plan.marked)?;
            let options = PeakOptions {
                window_factor: plan.window_factor,
                coarse_points: plan.coarse_points,
                method: Some(method),
                dense_cap: plan.dense_cap,
            };
            let r = find_peak(&problem, &options)?;
            (r.t_star, r.f_star, r.boundary_warning)
        }
        Some(noise) => {
            let spec = NoiseSpec::new(noise.sigma, noise.realizations, plan.base_seed)?;
            let t_max = plan.window_factor * report.t_pred;
            let k = plan.coarse_points;
            let times: Vec<f64> = (0..=k).map(|i| t_max * i as f64 / k as f64).collect();
            let e = noisy_ensemble(
                &chain,
                gamma,
                plan.marked,
                &spec,
                &times,
                method,
                plan.dense_cap,
            )?;
            let (t, f) = e.mean_peak;
            (t, f, t == t_max)
        }
    };
    Ok(SweepRecord {
        n,
        alpha,
        gamma_used: gamma,
        t_star,
        f_star,
        delta_exact: report.delta_exact,
        delta_asym: report.delta_asym,
        s1: report.s1,
        s2: report.s2,
        nu: report.nu,
        f_inf: report.f_inf,
        f_inf_bar: report.f_inf_bar,
        t_pred: report.t_pred,
        method,
        seed: plan.base_seed,
        boundary_warning,
        config_hash: point_hash.to_string(),
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Reads a journal, skipping a torn last line left by an interruption.
fn load_records(path: &Path) -> Result<Vec<SweepRecord>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for line in BufReader::new(fs::File::open(path)?).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if let Ok(r) = serde_json::from_str::<SweepRecord>(&line) {
            out.push(r);
        }
    }
    Ok(out)
}

fn sweep_table(records: &[SweepRecord]) -> CsvTable {
    let mut t = CsvTable::new(&[
        ("n", "spins"),
        ("alpha", "1"),
        ("gamma_used", "1"),
        ("t_star", "1/field"),
        ("f_star", "probability"),
        ("delta_exact", "1"),
        ("delta_asym", "1"),
        ("s1", "1"),
        ("s2", "1"),
        ("nu", "1"),
        ("f_inf", "probability"),
        ("f_inf_bar", "probability"),
        ("t_pred", "1/field"),
        ("method", "-"),
        ("seed", "-"),
    ]);
    for r in records {
        t.push(vec![
            r.n.into(),
            r.alpha.into(),
            r.gamma_used.into(),
            r.t_star.into(),
            r.f_star.into(),
            r.delta_exact.into(),
            r.delta_asym.into(),
            r.s1.into(),
            r.s2.into(),
            r.nu.into(),
            r.f_inf.into(),
            r.f_inf_bar.into(),
            r.t_pred.into(),
            Cell::Text(r.method.to_string()),
            r.seed.into(),
        ]);
    }
    t
}

fn jsonl<S: Serialize>(items: &[S]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for it in items {
        serde_json::to_writer(&mut out, it)?;
        out.push(b'\n');
    }
    Ok(out)
}

/// Runs (or resumes) a sweep. Points already present in `records.jsonl` are
/// not recomputed; failing points are listed in `errors.jsonl` and in the
/// outcome while the rest of the sweep carries on.
pub fn run_sweep(plan: &SweepPlan) -> Result<SweepOutcome> {
    plan.validate()?;
    fs::create_dir_all(&plan.out_dir)?;
    let point_hash = plan.point_hash()?;
    let records_path = plan.out_dir.join("records.jsonl");

    let mut known: BTreeMap<(u64, usize), SweepRecord> = BTreeMap::new();
    for r in load_records(&records_path)? {
        if r.config_hash != point_hash {
            return Err(Error::InvalidInput(format!(
                "{} holds records of a different configuration; use another output directory",
                records_path.display()
            )));
        }
        known.insert(r.key(), r);
    }
    let pending: Vec<(f64, usize)> = plan
        .grid()
        .into_iter()
        .filter(|&(a, n)| !known.contains_key(&(a.to_bits(), n)))
        .collect();

    let journal = Mutex::new(
        OpenOptions::new()
            .create(true)
            .append(true)
            .open(&records_path)?,
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let results: Vec<(f64, usize, Result<SweepRecord>)> = pool.install(|| {
        pending
            .par_iter()
            .map(|&(alpha, n)| {
                let r = compute_point(plan, n, alpha, &point_hash);
                if let Ok(rec) = &r {
                    let mut line = serde_json::to_vec(rec).expect("records serialise");
                    line.push(b'\n');
                    let mut f = journal.lock().unwrap_or_else(|p| p.into_inner());
                    // a failed journal write only costs resumability
                    let _ = f.write_all(&line).and_then(|_| f.flush());
                }
                (alpha, n, r)
            })
            .collect()
    });
    drop(journal);

    let computed = pending.len();
    let mut failures = Vec::new();
    let mut timings = Vec::new();
    for (alpha, n, r) in results {
        match r {
            Ok(rec) => {
                timings.push((rec.n, rec.alpha, rec.wall_time_s));
                known.insert(rec.key(), rec);
            }
            Err(e) => failures.push(PointFailure {
                n,
                alpha,
                error: e.to_string(),
            }),
        }
    }

    let mut all: Vec<SweepRecord> = known.into_values().collect();
    all.sort_by(|x, y| x.alpha.total_cmp(&y.alpha).then(x.n.cmp(&y.n)));
    write_atomic(&records_path, &jsonl(&all)?)?;
    write_atomic(&plan.out_dir.join("errors.jsonl"), &jsonl(&failures)?)?;

    let grid: std::collections::BTreeSet<(u64, usize)> =
        plan.grid().iter().map(|&(a, n)| (a.to_bits(), n)).collect();
    let records: Vec<SweepRecord> = all
        .into_iter()
        .filter(|r| grid.contains(&r.key()))
        .collect();
    sweep_table(&records)
        .note("alphas", format!("{:?}", plan.alphas))
        .note("ns", format!("{:?}", plan.ns))
        .write(&plan.out_dir.join("sweep.csv"), &plan.hash()?)?;

    if !timings.is_empty() {
        let path = plan.out_dir.join("timings.csv");
        let fresh = !path.exists();
        let mut f = OpenOptions::new().create(true).append(true).open(&path)?;
        if fresh {
            writeln!(f, "n,alpha,wall_time_s")?;
        }
        for (n, a, t) in timings {
            writeln!(f, "{n},{a},{t}")?;
        }
    }

    Ok(SweepOutcome {
        records,
        failures,
        computed,
    })
}
