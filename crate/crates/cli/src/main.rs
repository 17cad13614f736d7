//! Batch experiment driver: configures and runs the Monte Carlo and
//! deterministic spectral experiments, emitting CSV tables plus a JSON run
//! manifest (written last, as the commit marker).

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use girko_core::ensembles::sample_matrix;
use girko_core::montecarlo::{self, RunManifest, MAX_FAILURE_RATE};
use girko_core::rng::SeedStream;
use girko_core::{mde, stats, verify, Field};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use config::{
    merge_config, parse_complex, parse_domain, parse_ensemble, parse_linear_grid, parse_s_grid,
    parse_shift, resolve_seed,
};
use output::{write_csv, write_manifest, write_plot_script, Cell, OutputBundle};

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration → exit 2.
    Config(String),
    /// Numerical or IO failure → exit 3.
    Failure(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Failure(m) => write!(f, "failure: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "girko-lab", version, about = "Spectral-statistics experiments for shifted i.i.d. matrices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// JSON config file; explicit flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV/manifest files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Trial-parallelism width (output bytes are identical for any value).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Also emit a matplotlib script next to the CSV.
    #[arg(long, global = true)]
    plot_script: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Smallest-singular-value tail probabilities P[Nλ_k ≤ s].
    Tails(TailsArgs),
    /// Expected eigenvalue count in a small disk.
    Wegner(WegnerArgs),
    /// Diagonal overlap sums over a domain.
    Overlaps(OverlapsArgs),
    /// Normalized-overlap distribution vs the inverse-Gamma(2) law.
    OverlapShape(ShapeArgs),
    /// Mean number of real eigenvalues of a real ensemble.
    RealCount(RealCountArgs),
    /// E|⟨(X+A−z)^{-1}⟩|^{2−δ₁}.
    ResolventMoment(MomentArgs),
    /// Log-determinant identity residual for one sampled matrix.
    GirkoCheck(GirkoArgs),
    /// Self-consistent density of states over an x-grid.
    MdeDensity(MdeArgs),
    /// Boolean bulk-membership mask over a z-grid.
    BulkMap(BulkArgs),
    /// Deterministic identity suite; exits non-zero if any invariant fails.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("config error: --workers must be ≥ 1");
            return ExitCode::from(2);
        }
        if rayon::ThreadPoolBuilder::new().num_threads(w).build_global().is_err() {
            eprintln!("failure: worker pool already initialized");
            return ExitCode::from(3);
        }
    }
    let mut bundle = OutputBundle::default();
    let res = dispatch(&cli, &mut bundle);
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            bundle.discard();
            match e {
                CliError::Config(_) => ExitCode::from(2),
                CliError::Failure(_) => ExitCode::from(3),
            }
        }
    }
}

fn dispatch(cli: &Cli, bundle: &mut OutputBundle) -> Result<(), CliError> {
    std::fs::create_dir_all(&cli.out_dir)
        .map_err(|e| CliError::Failure(format!("{}: {e}", cli.out_dir.display())))?;
    match &cli.cmd {
        Cmd::Tails(a) => run_tails(cli, a, bundle),
        Cmd::Wegner(a) => run_wegner(cli, a, bundle),
        Cmd::Overlaps(a) => run_overlaps(cli, a, bundle),
        Cmd::OverlapShape(a) => run_shape(cli, a, bundle),
        Cmd::RealCount(a) => run_real_count(cli, a, bundle),
        Cmd::ResolventMoment(a) => run_moment(cli, a, bundle),
        Cmd::GirkoCheck(a) => run_girko(cli, a, bundle),
        Cmd::MdeDensity(a) => run_mde_density(cli, a, bundle),
        Cmd::BulkMap(a) => run_bulk_map(cli, a, bundle),
        Cmd::Verify => run_verify_cmd(),
    }
}

fn finish_manifest(
    cli: &Cli,
    bundle: &mut OutputBundle,
    experiment: &str,
    config: Value,
    seed: u64,
    started: Instant,
    trials: u64,
    failures: u64,
) -> Result<(), CliError> {
    let manifest = RunManifest {
        experiment: experiment.to_string(),
        config,
        master_seed: seed,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_s: started.elapsed().as_secs_f64(),
        workers: rayon::current_num_threads(),
        trials,
        failures,
    };
    if manifest.failure_rate() > MAX_FAILURE_RATE {
        return Err(CliError::Failure(format!(
            "{} of {} trials failed (rate {:.2e} > {MAX_FAILURE_RATE:.0e})",
            failures,
            trials,
            manifest.failure_rate()
        )));
    }
    let path = cli.out_dir.join(format!("{experiment}_manifest.json"));
    write_manifest(&path, &manifest)?;
    bundle.manifest_path = Some(path);
    Ok(())
}

// ── tails ──────────────────────────────────────────────────────────────────

#[derive(Args)]
struct TailsArgs {
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Shift location, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Deterministic shift A: `zero` or a dense-shift JSON path.
    #[arg(long)]
    a: Option<String>,
    /// `geom:lo:hi:count` or `lin:lo:hi:count` on the Nλ scale.
    #[arg(long)]
    s_grid: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Slope-fit window `lo:hi` (default: grid range clipped to s ≤ 1).
    #[arg(long)]
    window: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
struct TailsCfg {
    ensemble: String,
    n: usize,
    k: usize,
    z: String,
    a: String,
    s_grid: String,
    trials: u64,
    seed: Option<u64>,
    window: Option<String>,
}

impl Default for TailsCfg {
    fn default() -> Self {
        TailsCfg {
            ensemble: "ginibre-complex".into(),
            n: 64,
            k: 1,
            z: "0".into(),
            a: "zero".into(),
            s_grid: "geom:0.05:1.0:13".into(),
            trials: 10_000,
            seed: None,
            window: None,
        }
    }
}

fn opt<T: Serialize>(key: &'static str, v: &Option<T>, out: &mut Vec<(&'static str, Value)>) {
    if let Some(v) = v {
        out.push((key, serde_json::to_value(v).expect("flag serialization")));
    }
}

fn run_tails(cli: &Cli, a: &TailsArgs, bundle: &mut OutputBundle) -> Result<(), CliError> {
    let mut ov = Vec::new();
    opt("ensemble", &a.ensemble, &mut ov);
    opt("n", &a.n, &mut ov);
    opt("k", &a.k, &mut ov);
    opt("z", &a.z, &mut ov);
    opt("a", &a.a, &mut ov);
    opt("s_grid", &a.s_grid, &mut ov);
    opt("trials", &a.trials, &mut ov);
    opt("seed", &a.seed, &mut ov);
    opt("window", &a.window, &mut ov);
    let cfg: TailsCfg = merge_config(cli.config.as_deref(), ov)?;

    let ensemble = parse_ensemble(&cfg.ensemble, cfg.n)?;
    let z = parse_complex(&cfg.z)?;
    let shift = parse_shift(&cfg.a, cfg.n)?;
    let s_grid = parse_s_grid(&cfg.s_grid)?;
    let seed = resolve_seed(cfg.seed)?;
    let beta = if ensemble.field == Field::Real { 1 } else { 2 };
    let tail_cfg = montecarlo::TailConfig {
        ensemble,
        shift,
        z_re: z.re,
        z_im: z.im,
        k: cfg.k,
        s_grid: s_grid.clone(),
        trials: cfg.trials,
        master_seed: seed,
        beta,
    };
    tail_cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;

    let started = Instant::now();
    let est = montecarlo::run_tail(&tail_cfg).map_err(|e| CliError::Failure(e.to_string()))?;
    let window = match &cfg.window {
        Some(w) => {
            let parts: Vec<&str> = w.split(':').collect();
            let bad = || CliError::Config(format!("window `{w}`: expected `lo:hi`"));
            let [lo, hi] = parts.as_slice() else { return Err(bad()) };
            (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?)
        }
        None => (s_grid[0], s_grid.last().unwrap().min(1.0)),
    };
    let fit = montecarlo::fit_slope(&est, window).ok();

    let csv = cli.out_dir.join("tails.csv");
    let rows: Vec<Vec<Cell>> = (0..est.s_grid.len())
        .map(|i| {
            vec![
                est.s_grid[i].into(),
                est.counts[i].into(),
                est.trials.into(),
                est.p_hat[i].into(),
                est.ci_lo[i].into(),
                est.ci_hi[i].into(),
            ]
        })
        .collect();
    write_csv(&csv, &["s", "count", "trials", "p_hat", "ci_lo", "ci_hi"], &rows)?;
    bundle.csv_paths.push(csv.clone());
    if cli.plot_script {
        let p = cli.out_dir.join("tails_plot.py");
        write_plot_script(&p, &csv, "s", &["p_hat", "ci_lo", "ci_hi"], true, "tail probabilities")?;
        bundle.plot_path = Some(p);
    }
    let echo = json!({
        "params": serde_json::to_value(&cfg).unwrap(),
        "fit": fit,
        "eta_grid": est.eta_grid,
        "interlacing": { "checks": est.interlacing_checks, "failures": est.interlacing_failures },
    });
    finish_manifest(cli, bundle, "tails", echo, seed, started, cfg.trials, est.failures)
}

// ── wegner ─────────────────────────────────────────────────────────────────

#[derive(Args)]
struct WegnerArgs {
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Disk radius (default N^(-3/4)).
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
struct WegnerCfg {
    ensemble: String,
    n: usize,
    a: String,
    z: String,
    r: Option<f64>,
    trials: u64,
    seed: Option<u64>,
}

impl Default for WegnerCfg {
    fn default() -> Self {
        WegnerCfg {
            ensemble: "ginibre-complex".into(),
            n: 128,
            a: "zero".into(),
            z: "0".into(),
            r: None,
            trials: 5000,
            seed: None,
        }
    }
}

fn run_wegner(cli: &Cli, a: &WegnerArgs, bundle: &mut OutputBundle) -> Result<(), CliError> {
    let mut ov = Vec::new();
    opt("ensemble", &a.ensemble, &mut ov);
    opt("n", &a.n, &mut ov);
    opt("a", &a.a, &mut ov);
    opt("z", &a.z, &mut ov);
    opt("r", &a.r, &mut ov);
    opt("trials", &a.trials, &mut ov);
    opt("seed", &a.seed, &mut ov);
    let cfg: WegnerCfg = merge_config(cli.config.as_deref(), ov)?;

    let ensemble = parse_ensemble(&cfg.ensemble, cfg.n)?;
    let shift = parse_shift(&cfg.a, cfg.n)?;
    let z = parse_complex(&cfg.z)?;
    let r = cfg.r.unwrap_or((cfg.n as f64).powf(-0.75));
    let seed = resolve_seed(cfg.seed)?;

    let started = Instant::now();
    let est = montecarlo::run_wegner(&ensemble, &shift, z, r, cfg.trials, seed)
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let csv = cli.out_dir.join("wegner.csv");
    write_csv(
        &csv,
        &["z_re", "z_im", "r", "mean_count", "norm_density", "ci_lo", "ci_hi"],
        &[vec![
            est.z_re.into(),
            est.z_im.into(),
            est.r.into(),
            est.mean_count.into(),
            est.normalized_density.into(),
            est.ci_lo.into(),
            est.ci_hi.into(),
        ]],
    )?;
    bundle.csv_paths.push(csv);
    let echo = json!({ "params": serde_json::to_value(&cfg).unwrap(), "r_effective": r });
    finish_manifest(cli, bundle, "wegner", echo, seed, started, cfg.trials, est.failures)
}

// ── overlaps ───────────────────────────────────────────────────────────────

#[derive(Args)]
struct OverlapsArgs {
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    a: Option<String>,
    /// `disk:re,im,r` or `square:re,im,half`.
    #[arg(long)]
    domain: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
struct OverlapsCfg {
    ensemble: String,
    n: usize,
    a: String,
    domain: String,
    trials: u64,
    seed: Option<u64>,
}

impl Default for OverlapsCfg {
    fn default() -> Self {
        OverlapsCfg {
            ensemble: "ginibre-complex".into(),
            n: 64,
            a: "zero".into(),
            domain: "disk:0,0,0.2".into(),
            trials: 2000,
            seed: None,
        }
    }
}

fn run_overlaps(cli: &Cli, a: &OverlapsArgs, bundle: &mut OutputBundle) -> Result<(), CliError> {
    let mut ov = Vec::new();
    opt("ensemble", &a.ensemble, &mut ov);
    opt("n", &a.n, &mut ov);
    opt("a", &a.a, &mut ov);
    opt("domain", &a.domain, &mut ov);
    opt("trials", &a.trials, &mut ov);
    opt("seed", &a.seed, &mut ov);
    let cfg: OverlapsCfg = merge_config(cli.config.as_deref(), ov)?;

    let ensemble = parse_ensemble(&cfg.ensemble, cfg.n)?;
    let shift = parse_shift(&cfg.a, cfg.n)?;
    let domain = parse_domain(&cfg.domain)?;
    let seed = resolve_seed(cfg.seed)?;

    let started = Instant::now();
    let rep = montecarlo::run_overlap_sum(&ensemble, &shift, domain, cfg.trials, seed)
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let csv = cli.out_dir.join("overlaps.csv");
    let rows: Vec<Vec<Cell>> = rep
        .per_trial_sums
        .iter()
        .enumerate()
        .map(|(t, s)| vec![(t as u64).into(), (*s).into()])
        .collect();
    write_csv(&csv, &["trial", "sum_oii"], &rows)?;
    bundle.csv_paths.push(csv);
    let echo = json!({
        "params": serde_json::to_value(&cfg).unwrap(),
        "mean_sum": rep.mean_sum,
        "median_of_means": rep.median_of_means,
        "conditional_mean": rep.conditional_mean,
        "conditional_ratio": rep.conditional_ratio,
        "enclosed_total": rep.enclosed_total,
        "domain_area": domain.area(),
    });
    finish_manifest(cli, bundle, "overlaps", echo, seed, started, cfg.trials, rep.failures)
}

// ── overlap shape ──────────────────────────────────────────────────────────

#[derive(Args)]
struct ShapeArgs {
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
struct ShapeCfg {
    ensemble: String,
    n: usize,
    z: String,
    samples: usize,
    seed: Option<u64>,
}

impl Default for ShapeCfg {
    fn default() -> Self {
        ShapeCfg {
            ensemble: "ginibre-complex".into(),
            n: 64,
            z: "0".into(),
            samples: 5000,
            seed: None,
        }
    }
}

fn run_shape(cli: &Cli, a: &ShapeArgs, bundle: &mut OutputBundle) -> Result<(), CliError> {
    let mut ov = Vec::new();
    opt("ensemble", &a.ensemble, &mut ov);
    opt("n", &a.n, &mut ov);
    opt("z", &a.z, &mut ov);
    opt("samples", &a.samples, &mut ov);
    opt("seed", &a.seed, &mut ov);
    let cfg: ShapeCfg = merge_config(cli.config.as_deref(), ov)?;

    let ensemble = parse_ensemble(&cfg.ensemble, cfg.n)?;
    let z = parse_complex(&cfg.z)?;
    let seed = resolve_seed(cfg.seed)?;

    let started = Instant::now();
    let rep = montecarlo::run_overlap_shape(&ensemble, z, cfg.samples, seed)
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let csv = cli.out_dir.join("overlap_shape.csv");
    let m = rep.samples.len() as f64;
    let rows: Vec<Vec<Cell>> = rep
        .samples
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            vec![
                y.into(),
                ((i + 1) as f64 / m).into(),
                montecarlo::inverse_gamma2_cdf(y).into(),
            ]
        })
        .collect();
    write_csv(&csv, &["y", "empirical_cdf", "reference_cdf"], &rows)?;
    bundle.csv_paths.push(csv.clone());
    if cli.plot_script {
        let p = cli.out_dir.join("overlap_shape_plot.py");
        write_plot_script(&p, &csv, "y", &["empirical_cdf", "reference_cdf"], false, "normalized overlap CDF")?;
        bundle.plot_path = Some(p);
    }
    let echo = json!({
        "params": serde_json::to_value(&cfg).unwrap(),
        "ks": rep.ks,
        "n_samples": rep.n_samples,
    });
    finish_manifest(cli, bundle, "overlap_shape", echo, seed, started, rep.trials, rep.failures)
}

// ── real count ─────────────────────────────────────────────────────────────

#[derive(Args)]
struct RealCountArgs {
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
struct RealCountCfg {
    ensemble: String,
    n: usize,
    trials: u64,
    seed: Option<u64>,
}

impl Default for RealCountCfg {
    fn default() -> Self {
        RealCountCfg { ensemble: "ginibre-real".into(), n: 64, trials: 2000, seed: None }
    }
}

fn run_real_count(cli: &Cli, a: &RealCountArgs, bundle: &mut OutputBundle) -> Result<(), CliError> {
    let mut ov = Vec::new();
    opt("ensemble", &a.ensemble, &mut ov);
    opt("n", &a.n, &mut ov);
    opt("trials", &a.trials, &mut ov);
    opt("seed", &a.seed, &mut ov);
    let cfg: RealCountCfg = merge_config(cli.config.as_deref(), ov)?;

    let ensemble = parse_ensemble(&cfg.ensemble, cfg.n)?;
    let seed = resolve_seed(cfg.seed)?;

    let started = Instant::now();
    let est = montecarlo::run_real_count(&ensemble, cfg.trials, seed)
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let csv = cli.out_dir.join("real_count.csv");
    write_csv(
        &csv,
        &["n", "trials", "mean_count", "normalized_count"],
        &[vec![
            (cfg.n as u64).into(),
            est.trials.into(),
            est.mean_count.into(),
            est.normalized_count.into(),
        ]],
    )?;
    bundle.csv_paths.push(csv);
    let echo = json!({ "params": serde_json::to_value(&cfg).unwrap() });
    finish_manifest(cli, bundle, "real_count", echo, seed, started, cfg.trials, est.failures)
}

// ── resolvent moment ───────────────────────────────────────────────────────

#[derive(Args)]
struct MomentArgs {
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long)]
    delta1: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
struct MomentCfg {
    ensemble: String,
    n: usize,
    a: String,
    z: String,
    delta1: f64,
    trials: u64,
    seed: Option<u64>,
}

impl Default for MomentCfg {
    fn default() -> Self {
        MomentCfg {
            ensemble: "ginibre-complex".into(),
            n: 64,
            a: "zero".into(),
            z: "0".into(),
            delta1: 0.5,
            trials: 5000,
            seed: None,
        }
    }
}

fn run_moment(cli: &Cli, a: &MomentArgs, bundle: &mut OutputBundle) -> Result<(), CliError> {
    let mut ov = Vec::new();
    opt("ensemble", &a.ensemble, &mut ov);
    opt("n", &a.n, &mut ov);
    opt("a", &a.a, &mut ov);
    opt("z", &a.z, &mut ov);
    opt("delta1", &a.delta1, &mut ov);
    opt("trials", &a.trials, &mut ov);
    opt("seed", &a.seed, &mut ov);
    let cfg: MomentCfg = merge_config(cli.config.as_deref(), ov)?;

    let ensemble = parse_ensemble(&cfg.ensemble, cfg.n)?;
    let shift = parse_shift(&cfg.a, cfg.n)?;
    let z = parse_complex(&cfg.z)?;
    let seed = resolve_seed(cfg.seed)?;
    if !(0.0 < cfg.delta1 && cfg.delta1 <= 1.0) {
        return Err(CliError::Config(format!("delta1 = {} outside (0, 1]", cfg.delta1)));
    }

    let started = Instant::now();
    let est = montecarlo::run_resolvent_moment(&ensemble, &shift, z, cfg.delta1, cfg.trials, seed)
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let csv = cli.out_dir.join("resolvent_moment.csv");
    write_csv(
        &csv,
        &["z_re", "z_im", "power", "moment", "ci_lo", "ci_hi", "trials"],
        &[vec![
            z.re.into(),
            z.im.into(),
            est.power.into(),
            est.moment.into(),
            est.ci_lo.into(),
            est.ci_hi.into(),
            est.trials.into(),
        ]],
    )?;
    bundle.csv_paths.push(csv);
    let echo = json!({ "params": serde_json::to_value(&cfg).unwrap() });
    finish_manifest(cli, bundle, "resolvent_moment", echo, seed, started, cfg.trials, est.failures)
}

// ── girko check ────────────────────────────────────────────────────────────

#[derive(Args)]
struct GirkoArgs {
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Bump centre, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    z0: Option<String>,
    #[arg(long)]
    r: Option<f64>,
    /// Midpoint-grid resolution per axis.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
struct GirkoCfg {
    ensemble: String,
    n: usize,
    z0: String,
    r: f64,
    grid: usize,
    seed: Option<u64>,
}

impl Default for GirkoCfg {
    fn default() -> Self {
        GirkoCfg {
            ensemble: "ginibre-complex".into(),
            n: 4,
            z0: "0".into(),
            r: 0.5,
            grid: 160,
            seed: None,
        }
    }
}

fn run_girko(cli: &Cli, a: &GirkoArgs, bundle: &mut OutputBundle) -> Result<(), CliError> {
    let mut ov = Vec::new();
    opt("ensemble", &a.ensemble, &mut ov);
    opt("n", &a.n, &mut ov);
    opt("z0", &a.z0, &mut ov);
    opt("r", &a.r, &mut ov);
    opt("grid", &a.grid, &mut ov);
    opt("seed", &a.seed, &mut ov);
    let cfg: GirkoCfg = merge_config(cli.config.as_deref(), ov)?;

    let ensemble = parse_ensemble(&cfg.ensemble, cfg.n)?;
    let z0 = parse_complex(&cfg.z0)?;
    let seed = resolve_seed(cfg.seed)?;

    let started = Instant::now();
    let b = sample_matrix(&ensemble, &mut SeedStream::new(seed, 0));
    let rep = stats::girko_residual(&b, z0, cfg.r, cfg.grid)
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let csv = cli.out_dir.join("girko_check.csv");
    write_csv(
        &csv,
        &["grid_n", "lhs", "rhs", "abs_err", "rel_err"],
        &[vec![
            (rep.grid_n as u64).into(),
            rep.lhs.into(),
            rep.rhs.into(),
            rep.abs_err.into(),
            rep.rel_err.into(),
        ]],
    )?;
    bundle.csv_paths.push(csv);
    let echo = json!({ "params": serde_json::to_value(&cfg).unwrap() });
    finish_manifest(cli, bundle, "girko_check", echo, seed, started, 1, 0)
}

// ── MDE density ────────────────────────────────────────────────────────────

#[derive(Args)]
struct MdeArgs {
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// `lo:hi:count` grid of spectral positions.
    #[arg(long, allow_hyphen_values = true)]
    x_grid: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
struct MdeCfg {
    a: String,
    n: usize,
    z: String,
    x_grid: String,
}

impl Default for MdeCfg {
    fn default() -> Self {
        MdeCfg { a: "zero".into(), n: 8, z: "0".into(), x_grid: "-3:3:601".into() }
    }
}

fn run_mde_density(cli: &Cli, a: &MdeArgs, bundle: &mut OutputBundle) -> Result<(), CliError> {
    let mut ov = Vec::new();
    opt("a", &a.a, &mut ov);
    opt("n", &a.n, &mut ov);
    opt("z", &a.z, &mut ov);
    opt("x_grid", &a.x_grid, &mut ov);
    let cfg: MdeCfg = merge_config(cli.config.as_deref(), ov)?;

    let shift = parse_shift(&cfg.a, cfg.n)?;
    let amat = girko_core::ensembles::build_shift(&shift, cfg.n)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let z = parse_complex(&cfg.z)?;
    let xs = parse_linear_grid(&cfg.x_grid)?;

    let started = Instant::now();
    let prob = mde::MdeProblem::new(&amat, z).map_err(|e| CliError::Failure(e.to_string()))?;
    let mut rows = Vec::with_capacity(xs.len());
    for &x in &xs {
        let rho = mde::scdos_at(&prob, x, mde::ETA0)
            .map_err(|e| CliError::Failure(format!("x = {x}: {e}")))?;
        rows.push(vec![x.into(), rho.into()]);
    }
    let csv = cli.out_dir.join("mde_density.csv");
    write_csv(&csv, &["x", "rho"], &rows)?;
    bundle.csv_paths.push(csv.clone());
    if cli.plot_script {
        let p = cli.out_dir.join("mde_density_plot.py");
        write_plot_script(&p, &csv, "x", &["rho"], false, "self-consistent density of states")?;
        bundle.plot_path = Some(p);
    }
    let echo = json!({ "params": serde_json::to_value(&cfg).unwrap() });
    finish_manifest(cli, bundle, "mde_density", echo, 0, started, 0, 0)
}

// ── bulk map ───────────────────────────────────────────────────────────────

#[derive(Args)]
struct BulkArgs {
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    tau: Option<f64>,
    /// Grid resolution per axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Half-width of the square z-window (default ‖A‖ + 1.5).
    #[arg(long)]
    extent: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default)]
struct BulkCfg {
    a: String,
    n: usize,
    tau: f64,
    grid: usize,
    extent: Option<f64>,
}

impl Default for BulkCfg {
    fn default() -> Self {
        BulkCfg { a: "zero".into(), n: 8, tau: 0.2, grid: 101, extent: None }
    }
}

fn run_bulk_map(cli: &Cli, a: &BulkArgs, bundle: &mut OutputBundle) -> Result<(), CliError> {
    let mut ov = Vec::new();
    opt("a", &a.a, &mut ov);
    opt("n", &a.n, &mut ov);
    opt("tau", &a.tau, &mut ov);
    opt("grid", &a.grid, &mut ov);
    opt("extent", &a.extent, &mut ov);
    let cfg: BulkCfg = merge_config(cli.config.as_deref(), ov)?;
    if !(0.0 < cfg.tau && cfg.tau < 1.0) {
        return Err(CliError::Config(format!("tau = {} outside (0, 1)", cfg.tau)));
    }
    if cfg.grid < 2 {
        return Err(CliError::Config("grid must be ≥ 2".into()));
    }

    let shift = parse_shift(&cfg.a, cfg.n)?;
    let amat = girko_core::ensembles::build_shift(&shift, cfg.n)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let extent = cfg.extent.unwrap_or(shift.norm_bound() + 1.5);

    let started = Instant::now();
    let mut rows = Vec::with_capacity(cfg.grid * cfg.grid);
    for i in 0..cfg.grid {
        let re = -extent + 2.0 * extent * i as f64 / (cfg.grid - 1) as f64;
        for j in 0..cfg.grid {
            let im = -extent + 2.0 * extent * j as f64 / (cfg.grid - 1) as f64;
            let q = mde::in_bulk(&amat, num_complex::Complex64::new(re, im), cfg.tau)
                .map_err(|e| CliError::Failure(e.to_string()))?;
            rows.push(vec![
                re.into(),
                im.into(),
                Cell::Int(u64::from(q.in_bulk)),
                q.value.into(),
            ]);
        }
    }
    let csv = cli.out_dir.join("bulk_map.csv");
    write_csv(&csv, &["z_re", "z_im", "in_bulk", "value"], &rows)?;
    bundle.csv_paths.push(csv);
    let echo = json!({ "params": serde_json::to_value(&cfg).unwrap(), "extent": extent });
    finish_manifest(cli, bundle, "bulk_map", echo, 0, started, 0, 0)
}

// ── verify ─────────────────────────────────────────────────────────────────

fn run_verify_cmd() -> Result<(), CliError> {
    let results = verify::run_verify();
    let mut failed = 0usize;
    for r in &results {
        println!("{} {} — {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail);
        if !r.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(CliError::Failure(format!("{failed} invariant(s) failed")));
    }
    println!("all {} invariants hold", results.len());
    Ok(())
}
