mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use lrsearch::analytics::{spectral_condition, AsymptoticReport, GapSource};
use lrsearch::dynamics::{
    evolve_chebyshev, evolve_dense, find_peak, gamma_star, noisy_ensemble, Method, NoiseSpec,
    PeakOptions, SearchProblem, DEFAULT_DENSE_CAP,
};
use lrsearch::harness::{
    config_hash, emit_figure_data, run_sweep, write_atomic, CsvTable, FigureId, FigureParams,
    SweepPlan,
};
use lrsearch::specfun;
use lrsearch::spectrum::{eigenvalues_exact, gap_asymptotic, ChainSpec};
use lrsearch::{Error, Result};

use config::{ConfigFile, Resolver};

const WORKERS_ENV: &str = "LRSEARCH_WORKERS";
const OUT_ENV: &str = "LRSEARCH_OUT";

/// Quantum spatial search on rings with power-law XY couplings.
#[derive(Parser, Debug)]
#[command(name = "lrsearch", version)]
struct Cli {
    /// Settings file (JSON object or `key = value` lines); flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed for noise realizations.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (also LRSEARCH_WORKERS).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output directory (also LRSEARCH_OUT).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact single-excitation spectrum.
    Spectrum(ChainArgs),
    /// Spectral sums, fidelity and time predictions.
    Analytics(AnalyticsArgs),
    /// Run one search and record the fidelity trace.
    Search(SearchArgs),
    /// Resumable sweep over an (n, alpha) grid.
    Sweep(SweepArgs),
    /// Write the CSV data for one figure panel.
    Figure(FigureArgs),
    /// Evaluate a special function (for cross-checks).
    #[command(hide = true)]
    SpecfunProbe(ProbeArgs),
}

#[derive(Args, Debug)]
struct ChainArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args, Debug)]
struct AnalyticsArgs {
    #[command(flatten)]
    chain: ChainArgs,
    /// Constant in the spectral condition `Δ ≥ c/√n`.
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long, conflicts_with = "auto_gamma")]
    gamma: Option<f64>,
    /// Use the optimal hopping rate.
    #[arg(long)]
    auto_gamma: bool,
    /// Marked site, 1-based.
    #[arg(long)]
    marked: Option<usize>,
    /// Trace length in units of the predicted search time.
    #[arg(long)]
    t_max_factor: Option<f64>,
    /// Samples in the trace.
    #[arg(long)]
    time_points: Option<usize>,
    #[arg(long)]
    noise_sigma: Option<f64>,
    #[arg(long)]
    realizations: Option<usize>,
    /// dense or chebyshev; by default dense up to --dense-cap.
    #[arg(long)]
    method: Option<Method>,
    #[arg(long)]
    dense_cap: Option<usize>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Comma-separated exponents.
    #[arg(long)]
    alphas: Option<String>,
    /// Comma-separated sizes, or `lo..hi` for powers-of-two doubling.
    #[arg(long)]
    ns: Option<String>,
    #[arg(long, conflicts_with = "auto_gamma")]
    gamma: Option<f64>,
    #[arg(long)]
    auto_gamma: bool,
    #[arg(long)]
    marked: Option<usize>,
    #[arg(long)]
    noise_sigma: Option<f64>,
    #[arg(long)]
    realizations: Option<usize>,
    #[arg(long)]
    dense_cap: Option<usize>,
    #[arg(long)]
    window_factor: Option<f64>,
    #[arg(long)]
    coarse_points: Option<usize>,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// fig1a, fig1b, inset, fig2, fig3, sm4 or sm5.
    id: FigureId,
    #[arg(long)]
    alphas: Option<String>,
    #[arg(long)]
    ns: Option<String>,
    /// Noise strengths for fig3.
    #[arg(long)]
    sigmas: Option<String>,
    #[arg(long)]
    realizations: Option<usize>,
    #[arg(long)]
    time_points: Option<usize>,
    #[arg(long)]
    dense_cap: Option<usize>,
}

#[derive(Args, Debug)]
struct ProbeArgs {
    /// zeta, hurwitz, gamma, polylog, f, g0, f-over-g0 or h.
    function: String,
    /// Arguments: zeta s | hurwitz s a | gamma x | polylog alpha theta |
    /// f alpha | g0 alpha | f-over-g0 alpha | h alpha ratio.
    #[arg(allow_negative_numbers = true)]
    args: Vec<f64>,
}

/// Settings shared by every subcommand.
struct Global {
    seed: u64,
    workers: Option<usize>,
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Numerical(String),
    Partial(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            e if e.is_numerical() => Failure::Numerical(e.to_string()),
            Error::InvalidInput(m) => Failure::Usage(m),
            e => Failure::Other(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}\n\nUsage: lrsearch [OPTIONS] <COMMAND>\nFor more information, try '--help'.");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Partial(m)) => {
            eprintln!("{m}");
            ExitCode::from(3)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let r = Resolver { file: &file };
    let global = Global {
        seed: r.or("seed", cli.seed, 0)?,
        workers: r.with_env("workers", cli.workers, WORKERS_ENV)?,
        out: r
            .with_env::<String>("out", cli.out.map(|p| p.display().to_string()), OUT_ENV)?
            .map(PathBuf::from),
    };
    if global.workers == Some(0) {
        return Err(Failure::Usage("--workers must be >= 1".into()));
    }
    if let Some(w) = global.workers {
        // read by rayon when its global pool starts, which has not happened yet
        std::env::set_var("RAYON_NUM_THREADS", w.to_string());
    }
    match cli.command {
        Command::Spectrum(a) => spectrum(&r, &global, a),
        Command::Analytics(a) => analytics(&r, &global, a),
        Command::Search(a) => search(&r, &global, a),
        Command::Sweep(a) => sweep(&r, &global, a),
        Command::Figure(a) => figure(&r, &global, a),
        Command::SpecfunProbe(a) => probe(a),
    }
}

fn chain(r: &Resolver, a: &ChainArgs) -> Result<ChainSpec<f64>> {
    ChainSpec::new(r.required("n", a.n)?, r.required("alpha", a.alpha)?)
}

fn print_json(v: &serde_json::Value) -> Result<String> {
    let s = serde_json::to_string_pretty(v)?;
    println!("{s}");
    Ok(s)
}

fn out_dir(g: &Global) -> Result<Option<&Path>> {
    if let Some(d) = &g.out {
        std::fs::create_dir_all(d)?;
    }
    Ok(g.out.as_deref())
}

fn spectrum(r: &Resolver, g: &Global, a: ChainArgs) -> std::result::Result<(), Failure> {
    let chain = chain(r, &a)?;
    let s = eigenvalues_exact(&chain)?;
    let summary = json!({
        "n": chain.n(),
        "alpha": chain.alpha(),
        "lambda_max": s.lambda_max(),
        "lambda_min": s.lambda_min(),
        "lambda_min_index": s.lambda_min_index(),
        "gap": s.gap(),
        "gap_asymptotic": gap_asymptotic(&chain).ok(),
    });
    let text = print_json(&summary)?;
    if let Some(dir) = out_dir(g)? {
        let hash =
            config_hash(&json!({"command": "spectrum", "n": chain.n(), "alpha": chain.alpha()}))?;
        let mut t = CsvTable::new(&[("k", "-"), ("lambda", "coupling"), ("lambda_tilde", "1")]);
        for k in 1..=chain.n() {
            t.push(vec![k.into(), s.lambda(k).into(), s.lambda_tilde(k).into()]);
        }
        t.note("n", chain.n())
            .note("alpha", chain.alpha())
            .write(&dir.join("spectrum.csv"), &hash)?;
        write_atomic(&dir.join("spectrum.json"), text.as_bytes())?;
    }
    Ok(())
}

fn analytics(r: &Resolver, g: &Global, a: AnalyticsArgs) -> std::result::Result<(), Failure> {
    let chain = chain(r, &a.chain)?;
    let c = r.or("c", a.c, 1.0)?;
    let report = AsymptoticReport::new(&chain)?;
    let cond = spectral_condition(&chain, c, GapSource::Exact)?;
    let mut v = serde_json::to_value(&report).map_err(Error::from)?;
    v["spectral_condition"] =
        json!({"c": c, "holds": cond.holds, "margin": cond.margin, "delta": cond.delta});
    let text = print_json(&v)?;
    if let Some(dir) = out_dir(g)? {
        write_atomic(&dir.join("analytics.json"), text.as_bytes())?;
    }
    Ok(())
}

fn search(r: &Resolver, g: &Global, a: SearchArgs) -> std::result::Result<(), Failure> {
    let chain = chain(r, &a.chain)?;
    let auto = r.switch("auto_gamma", a.auto_gamma)?;
    let gamma = match (auto, r.opt("gamma", a.gamma)?) {
        (true, _) => gamma_star(&chain)?.gamma,
        (false, Some(g)) => g,
        (false, None) => return Err(Failure::Usage("give --gamma or --auto-gamma".into())),
    };
    let marked = r.or("marked", a.marked, 1)?;
    let factor = r.or("t_max_factor", a.t_max_factor, 2.0)?;
    let points = r.or("time_points", a.time_points, 400)?.max(1);
    let dense_cap = r.or("dense_cap", a.dense_cap, DEFAULT_DENSE_CAP)?;
    let method = r.or("method", a.method, Method::for_size(chain.n(), dense_cap))?;
    let sigma = r.or("noise_sigma", a.noise_sigma, 0.0)?;
    let realizations = r.or("realizations", a.realizations, 1)?;
    if factor.is_nan() || factor <= 0.0 {
        return Err(Failure::Usage("--t-max-factor must be positive".into()));
    }

    let report = AsymptoticReport::new(&chain)?;
    let t_max = factor * report.t_pred;
    let times: Vec<f64> = (0..=points)
        .map(|i| t_max * i as f64 / points as f64)
        .collect();
    let noisy = sigma > 0.0;
    let (t_star, f_star, trace, std) = if noisy {
        let noise = NoiseSpec::new(sigma, realizations, g.seed)?;
        let e = noisy_ensemble(&chain, gamma, marked, &noise, &times, method, dense_cap)?;
        (e.mean_peak.0, e.mean_peak.1, e.mean, Some(e.std))
    } else {
        let problem = SearchProblem::new(chain, gamma, marked)?;
        let peak = find_peak(
            &problem,
            &PeakOptions {
                method: Some(method),
                dense_cap,
                ..Default::default()
            },
        )?;
        let trace = match method {
            Method::Dense => evolve_dense(&problem, &times, dense_cap)?,
            Method::Chebyshev => evolve_chebyshev(&problem, t_max, t_max / points as f64)?,
        };
        (peak.t_star, peak.f_star, trace, None)
    };

    let result = json!({
        "n": chain.n(),
        "alpha": chain.alpha(),
        "gamma": gamma,
        "marked": marked,
        "t_star": t_star,
        "f_star": f_star,
        "t_pred": report.t_pred,
        "f_inf": report.f_inf,
        "method": method,
        "noise_sigma": sigma,
        "realizations": if noisy { realizations } else { 0 },
        "seed": g.seed,
    });
    let text = print_json(&result)?;
    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(Error::from)?;
    let hash = config_hash(&result)?;
    let mut t = match std {
        Some(_) => CsvTable::new(&[
            ("t", "1/field"),
            ("f_mean", "probability"),
            ("f_std", "probability"),
        ]),
        None => CsvTable::new(&[("t", "1/field"), ("f_mean", "probability")]),
    };
    for (i, &time) in trace.times.iter().enumerate() {
        let mut row = vec![time.into(), trace.fidelities[i].into()];
        if let Some(s) = &std {
            row.push(s[i].into());
        }
        t.push(row);
    }
    t.note("n", chain.n())
        .note("alpha", chain.alpha())
        .note("gamma", gamma)
        .note("noise_sigma", sigma)
        .note("seed", g.seed)
        .write(&dir.join("trace.csv"), &hash)?;
    write_atomic(&dir.join("result.json"), text.as_bytes())?;
    Ok(())
}

fn sweep_plan(r: &Resolver, g: &Global, a: &SweepArgs, out: PathBuf) -> Result<SweepPlan> {
    let alphas = r
        .reals("alphas", a.alphas.clone())?
        .ok_or_else(|| Error::InvalidInput("--alphas is required".into()))?;
    let ns = r
        .sizes("ns", a.ns.clone())?
        .ok_or_else(|| Error::InvalidInput("--ns is required".into()))?;
    let mut plan = SweepPlan::new(alphas, ns, out);
    plan.gamma = r.opt("gamma", a.gamma)?;
    plan.auto_gamma = r.switch("auto_gamma", a.auto_gamma)? || plan.gamma.is_none();
    plan.marked = r.or("marked", a.marked, 1)?;
    plan.dense_cap = r.or("dense_cap", a.dense_cap, DEFAULT_DENSE_CAP)?;
    plan.window_factor = r.or("window_factor", a.window_factor, plan.window_factor)?;
    plan.coarse_points = r.or("coarse_points", a.coarse_points, plan.coarse_points)?;
    plan.base_seed = g.seed;
    plan.workers = g.workers.unwrap_or(1);
    if let Some(sigma) = r.opt("noise_sigma", a.noise_sigma)? {
        plan.noise = Some(NoiseSpec::new(
            sigma,
            r.or("realizations", a.realizations, 100)?,
            g.seed,
        )?);
    }
    Ok(plan)
}

fn sweep(r: &Resolver, g: &Global, a: SweepArgs) -> std::result::Result<(), Failure> {
    let out = g.out.clone().unwrap_or_else(|| PathBuf::from("sweep"));
    let plan = sweep_plan(r, g, &a, out)?;
    let outcome = run_sweep(&plan)?;
    println!(
        "{} records ({} computed), {} failures; output in {}",
        outcome.records.len(),
        outcome.computed,
        outcome.failures.len(),
        plan.out_dir.display()
    );
    if outcome.failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Partial(format!(
            "{} grid points failed; see {}",
            outcome.failures.len(),
            plan.out_dir.join("errors.jsonl").display()
        )))
    }
}

fn figure(r: &Resolver, g: &Global, a: FigureArgs) -> std::result::Result<(), Failure> {
    let out = g.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
    let params = FigureParams {
        alphas: r.reals("alphas", a.alphas.clone())?,
        ns: r.sizes("ns", a.ns.clone())?,
        sigmas: r.reals("sigmas", a.sigmas.clone())?,
        realizations: r.or("realizations", a.realizations, 100)?,
        seed: g.seed,
        dense_cap: r.or("dense_cap", a.dense_cap, DEFAULT_DENSE_CAP)?,
        time_points: r.or("time_points", a.time_points, 400)?,
    };
    let records = if a.id.needs_records() {
        let grid = params.resolved(a.id);
        let mut plan = SweepPlan::new(grid.alphas.unwrap(), grid.ns.unwrap(), out.join("sweep"));
        plan.dense_cap = params.dense_cap;
        plan.base_seed = g.seed;
        plan.workers = g.workers.unwrap_or(1);
        let outcome = run_sweep(&plan)?;
        if !outcome.failures.is_empty() {
            let keys: Vec<String> = outcome
                .failures
                .iter()
                .map(|f| format!("(n={}, alpha={}): {}", f.n, f.alpha, f.error))
                .collect();
            return Err(Failure::Partial(format!(
                "sweep points failed: {}",
                keys.join("; ")
            )));
        }
        Some(outcome.records)
    } else {
        None
    };
    for path in emit_figure_data(a.id, &params, &out, records.as_deref())? {
        println!("{}", path.display());
    }
    Ok(())
}

fn probe(a: ProbeArgs) -> std::result::Result<(), Failure> {
    let want = |k: usize| -> Result<()> {
        if a.args.len() == k {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "{} takes {k} argument(s), got {}",
                a.function,
                a.args.len()
            )))
        }
    };
    let x = &a.args;
    let value = match a.function.as_str() {
        "zeta" => want(1).and_then(|_| specfun::riemann_zeta(x[0]))?,
        "hurwitz" => want(2).and_then(|_| specfun::hurwitz_zeta(x[0], x[1]))?,
        "gamma" => want(1).and_then(|_| specfun::gamma_fn(x[0]))?,
        "polylog" => want(2).and_then(|_| specfun::polylog_pair(x[0], x[1]))?,
        "f" => want(1).and_then(|_| specfun::f_alpha(x[0]))?,
        "g0" => want(1).and_then(|_| specfun::g0(x[0]))?,
        "f-over-g0" => want(1).and_then(|_| specfun::f_over_g0(x[0]))?,
        "h" => want(2).and_then(|_| {
            let params = specfun::KernelParams::new(x[0]);
            specfun::h_kernel(&params, x[1])
        })?,
        other => return Err(Failure::Usage(format!("unknown function {other:?}"))),
    };
    print_json(&json!({"function": a.function, "args": a.args, "value": value}))?;
    Ok(())
}
