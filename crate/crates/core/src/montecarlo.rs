//! Reproducible statistical experiments: smallest-singular-value tails,
//! local eigenvalue density, overlap sums and shapes, real-eigenvalue counts,
//! and resolvent moments, all driven by a counter-based RNG so results are
//! bit-identical regardless of worker count.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::ensembles::{build_shift, sample_matrix, EnsembleSpec, ShiftSpec};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{Field, Matrix};
use crate::rng::SeedStream;
use crate::stats;

/// Fraction of failed trials above which a run is considered invalid.
pub const MAX_FAILURE_RATE: f64 = 1e-3;
const MOM_BLOCKS: usize = 20;

fn shifted_sample(
    ensemble: &EnsembleSpec,
    shift: &Matrix,
    z: Complex64,
    master_seed: u64,
    trial: u64,
) -> Result<Matrix> {
    let mut stream = SeedStream::new(master_seed, trial);
    let x = sample_matrix(ensemble, &mut stream);
    let mut b = x.add(shift)?;
    if z != Complex64::new(0.0, 0.0) {
        b.field = Field::Complex;
        for i in 0..b.rows {
            let v = b.get(i, i) - z;
            b.set(i, i, v);
        }
    }
    Ok(b)
}

// ── tails ──────────────────────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailConfig {
    pub ensemble: EnsembleSpec,
    pub shift: ShiftSpec,
    /// Shift location z; λ_k below are singular values of X + A − z.
    pub z_re: f64,
    pub z_im: f64,
    /// 1-based singular-value index (λ_1 is the smallest).
    pub k: usize,
    /// Ascending thresholds on the dimensionless Nλ scale.
    pub s_grid: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    /// 1 for real X, 2 for complex X.
    pub beta: u8,
}

impl TailConfig {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.z_re, self.z_im)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > self.ensemble.n {
            return Err(Error::InvalidParameter(format!("k = {} out of range", self.k)));
        }
        if self.s_grid.is_empty()
            || self.s_grid.windows(2).any(|w| w[1] <= w[0])
            || self.s_grid[0] <= 0.0
            || *self.s_grid.last().unwrap() > 2.0
        {
            return Err(Error::InvalidParameter("s_grid must be ascending in (0, 2]".into()));
        }
        if self.trials < 100 {
            return Err(Error::InvalidParameter("trials must be ≥ 100".into()));
        }
        let expect = if self.ensemble.field == Field::Real { 1 } else { 2 };
        if self.beta != expect {
            return Err(Error::InvalidParameter(format!(
                "beta = {} inconsistent with a {:?} ensemble",
                self.beta, self.ensemble.field
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub window: (f64, f64),
    pub points: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailEstimate {
    pub s_grid: Vec<f64>,
    /// η = s/N actually used for each grid point.
    pub eta_grid: Vec<f64>,
    pub counts: Vec<u64>,
    pub trials: u64,
    pub p_hat: Vec<f64>,
    pub ci_lo: Vec<f64>,
    pub ci_hi: Vec<f64>,
    pub failures: u64,
    pub interlacing_checks: u64,
    pub interlacing_failures: u64,
    pub fit: Option<SlopeFit>,
}

/// Estimate P[Nλ_k^z ≤ s] over the configured s-grid.
pub fn run_tail(cfg: &TailConfig) -> Result<TailEstimate> {
    cfg.validate()?;
    let n = cfg.ensemble.n;
    let shift = build_shift(&cfg.shift, n)?;
    let z = cfg.z();
    let per_trial: Vec<Result<(f64, Option<bool>)>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let b = shifted_sample(&cfg.ensemble, &shift, z, cfg.master_seed, t)?;
            let sv = linalg::singular_values(&b)?;
            let lam_k = n as f64 * sv[cfg.k - 1];
            // spot-check minor interlacing on 1% of trials
            let inter = if t % 100 == 0 {
                Some(stats::interlacing_report(&b, &[], 0)?.ok)
            } else {
                None
            };
            Ok((lam_k, inter))
        })
        .collect();

    let mut counts = vec![0u64; cfg.s_grid.len()];
    let mut failures = 0u64;
    let mut checks = 0u64;
    let mut check_failures = 0u64;
    for r in per_trial {
        match r {
            Ok((lam_k, inter)) => {
                for (i, &s) in cfg.s_grid.iter().enumerate() {
                    if lam_k <= s {
                        counts[i] += 1;
                    }
                }
                if let Some(ok) = inter {
                    checks += 1;
                    if !ok {
                        check_failures += 1;
                    }
                }
            }
            Err(_) => failures += 1,
        }
    }
    let good = cfg.trials - failures;
    if good == 0 {
        return Err(Error::NumericalFailure("every trial failed".into()));
    }
    let mut p_hat = Vec::new();
    let mut ci_lo = Vec::new();
    let mut ci_hi = Vec::new();
    for &c in &counts {
        p_hat.push(c as f64 / good as f64);
        let (lo, hi) = clopper_pearson(c, good, 0.05);
        ci_lo.push(lo);
        ci_hi.push(hi);
    }
    Ok(TailEstimate {
        s_grid: cfg.s_grid.clone(),
        eta_grid: cfg.s_grid.iter().map(|s| s / n as f64).collect(),
        counts,
        trials: good,
        p_hat,
        ci_lo,
        ci_hi,
        failures,
        interlacing_checks: checks,
        interlacing_failures: check_failures,
        fit: None,
    })
}

/// Weighted least squares of log p̂ against log s over [s_lo, s_hi], with
/// delta-method weights n·p/(1−p); cells with fewer than 5 hits are dropped.
pub fn fit_slope(est: &TailEstimate, window: (f64, f64)) -> Result<SlopeFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut ws = Vec::new();
    for (i, &s) in est.s_grid.iter().enumerate() {
        if s < window.0 - 1e-12 || s > window.1 + 1e-12 || est.counts[i] < 5 {
            continue;
        }
        let p = est.p_hat[i];
        if p >= 1.0 {
            continue;
        }
        xs.push(s.ln());
        ys.push(p.ln());
        ws.push(est.trials as f64 * p / (1.0 - p));
    }
    if xs.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "{} usable grid points in [{}, {}], need 4",
            xs.len(),
            window.0,
            window.1
        )));
    }
    // normal equations for [slope, intercept]
    let (mut sxx, mut sx, mut s1, mut sxy, mut sy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..xs.len() {
        let w = ws[i];
        sxx += w * xs[i] * xs[i];
        sx += w * xs[i];
        s1 += w;
        sxy += w * xs[i] * ys[i];
        sy += w * ys[i];
    }
    let det = sxx * s1 - sx * sx;
    if det.abs() < 1e-300 {
        return Err(Error::InsufficientData("degenerate design matrix".into()));
    }
    let slope = (s1 * sxy - sx * sy) / det;
    let intercept = (sxx * sy - sx * sxy) / det;
    let stderr = (s1 / det).sqrt();
    Ok(SlopeFit { slope, intercept, stderr, window, points: xs.len() })
}

/// Parametric-bootstrap stderr of the fitted slope: resample each cell count
/// as Binomial(trials, p̂) and refit.
pub fn bootstrap_slope_stderr(
    est: &TailEstimate,
    window: (f64, f64),
    resamples: usize,
    seed: u64,
) -> Result<f64> {
    let mut slopes = Vec::with_capacity(resamples);
    for r in 0..resamples {
        let mut stream = SeedStream::new(seed, r as u64);
        let mut boot = est.clone();
        for i in 0..boot.counts.len() {
            let p = est.p_hat[i];
            let mut c = 0u64;
            for _ in 0..est.trials {
                if stream.next_open01() < p {
                    c += 1;
                }
            }
            boot.counts[i] = c;
            boot.p_hat[i] = c as f64 / est.trials as f64;
        }
        if let Ok(f) = fit_slope(&boot, window) {
            slopes.push(f.slope);
        }
    }
    if slopes.len() < resamples / 2 {
        return Err(Error::InsufficientData("bootstrap refits mostly failed".into()));
    }
    let m = slopes.iter().sum::<f64>() / slopes.len() as f64;
    let var = slopes.iter().map(|s| (s - m).powi(2)).sum::<f64>() / (slopes.len() - 1) as f64;
    Ok(var.sqrt())
}

// ── local density (Wegner) ─────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WegnerEstimate {
    pub z_re: f64,
    pub z_im: f64,
    pub r: f64,
    /// Estimate of E N_{z,r}.
    pub mean_count: f64,
    /// mean_count / (N r²).
    pub normalized_density: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub trials: u64,
    pub failures: u64,
}

/// Mean number of eigenvalues of X + A in the disk D(z, r).
pub fn run_wegner(
    ensemble: &EnsembleSpec,
    shift: &ShiftSpec,
    z: Complex64,
    r: f64,
    trials: u64,
    seed: u64,
) -> Result<WegnerEstimate> {
    let n = ensemble.n;
    if r < 0.0 || r > 1.0 / (n as f64).sqrt() + 1e-12 {
        return Err(Error::InvalidParameter(format!("r = {r} outside [0, N^(-1/2)]")));
    }
    let a = build_shift(shift, n)?;
    let per_trial: Vec<Result<u64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let b = shifted_sample(ensemble, &a, Complex64::new(0.0, 0.0), seed, t)?;
            let sigma = linalg::complex_eigenvalues(&b)?;
            Ok(sigma.iter().filter(|s| (*s - z).norm() <= r).count() as u64)
        })
        .collect();
    let mut counts = Vec::new();
    let mut failures = 0u64;
    for c in per_trial {
        match c {
            Ok(v) => counts.push(v as f64),
            Err(_) => failures += 1,
        }
    }
    if counts.is_empty() {
        return Err(Error::NumericalFailure("every trial failed".into()));
    }
    let good = counts.len() as f64;
    let mean = counts.iter().sum::<f64>() / good;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (good - 1.0).max(1.0);
    let half = 1.96 * (var / good).sqrt();
    let norm = n as f64 * r * r;
    let density = if norm > 0.0 { mean / norm } else { 0.0 };
    Ok(WegnerEstimate {
        z_re: z.re,
        z_im: z.im,
        r,
        mean_count: mean,
        normalized_density: density,
        ci_lo: (mean - half).max(0.0),
        ci_hi: mean + half,
        trials: counts.len() as u64,
        failures,
    })
}

// ── overlap sums and shape ─────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    Disk { re: f64, im: f64, r: f64 },
    /// Axis-aligned square of half-side `half` centred at (re, im).
    Square { re: f64, im: f64, half: f64 },
}

impl Domain {
    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            Domain::Disk { re, im, r } => (z - Complex64::new(re, im)).norm() <= r,
            Domain::Square { re, im, half } => {
                (z.re - re).abs() <= half && (z.im - im).abs() <= half
            }
        }
    }

    pub fn area(&self) -> f64 {
        match *self {
            Domain::Disk { r, .. } => std::f64::consts::PI * r * r,
            Domain::Square { half, .. } => 4.0 * half * half,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OverlapReport {
    pub domain: Domain,
    pub per_trial_sums: Vec<f64>,
    pub mean_sum: f64,
    /// Heavy-tail-robust companion of `mean_sum` (20 blocks).
    pub median_of_means: f64,
    pub enclosed_total: u64,
    /// E[O_ii | σ_i ∈ D].
    pub conditional_mean: f64,
    /// Mean of O_ii/(N(1−|σ_i|²)) over enclosed eigenvalues; ≈ 1 in the bulk.
    pub conditional_ratio: f64,
    /// Sample of O_ii/(N(1−|σ_i|²)) for shape tests.
    pub normalized_samples: Vec<f64>,
    pub trials: u64,
    pub failures: u64,
}

pub fn median_of_means(samples: &[f64], blocks: usize) -> f64 {
    if samples.is_empty() {
        return f64::NAN;
    }
    let blocks = blocks.min(samples.len()).max(1);
    let mut means = Vec::with_capacity(blocks);
    let base = samples.len() / blocks;
    let rem = samples.len() % blocks;
    let mut start = 0;
    for b in 0..blocks {
        let len = base + usize::from(b < rem);
        let blk = &samples[start..start + len];
        means.push(blk.iter().sum::<f64>() / blk.len() as f64);
        start += len;
    }
    means.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = means.len();
    if m % 2 == 1 {
        means[m / 2]
    } else {
        0.5 * (means[m / 2 - 1] + means[m / 2])
    }
}

/// Per-trial Σ_{σ_i ∈ D} O_ii for X + A, with heavy-tail-robust summaries.
pub fn run_overlap_sum(
    ensemble: &EnsembleSpec,
    shift: &ShiftSpec,
    domain: Domain,
    trials: u64,
    seed: u64,
) -> Result<OverlapReport> {
    let n = ensemble.n;
    let a = build_shift(shift, n)?;
    let per_trial: Vec<Result<(f64, Vec<(f64, f64)>)>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let b = shifted_sample(ensemble, &a, Complex64::new(0.0, 0.0), seed, t)?;
            let d = linalg::complex_eig(&b, 1e-12)?;
            let o = stats::overlaps(&d);
            let mut sum = 0.0;
            let mut inside = Vec::new();
            for i in 0..n {
                if domain.contains(d.sigma[i]) {
                    let oii = o.o.get(i, i).re;
                    sum += oii;
                    let denom = n as f64 * (1.0 - d.sigma[i].norm_sqr());
                    inside.push((oii, if denom > 0.0 { oii / denom } else { f64::NAN }));
                }
            }
            Ok((sum, inside))
        })
        .collect();
    let mut sums = Vec::new();
    let mut raw = Vec::new();
    let mut normed = Vec::new();
    let mut failures = 0u64;
    for r in per_trial {
        match r {
            Ok((s, inside)) => {
                sums.push(s);
                for (oii, q) in inside {
                    raw.push(oii);
                    if q.is_finite() {
                        normed.push(q);
                    }
                }
            }
            Err(_) => failures += 1,
        }
    }
    if sums.is_empty() {
        return Err(Error::NumericalFailure("every trial failed".into()));
    }
    let mean_sum = sums.iter().sum::<f64>() / sums.len() as f64;
    let cond = if raw.is_empty() { 0.0 } else { raw.iter().sum::<f64>() / raw.len() as f64 };
    let ratio = if normed.is_empty() {
        0.0
    } else {
        normed.iter().sum::<f64>() / normed.len() as f64
    };
    Ok(OverlapReport {
        domain,
        mean_sum,
        median_of_means: median_of_means(&sums, MOM_BLOCKS),
        enclosed_total: raw.len() as u64,
        conditional_mean: cond,
        conditional_ratio: ratio,
        normalized_samples: normed,
        per_trial_sums: sums,
        trials,
        failures,
    })
}

/// P(Y ≤ y) for Y = 1/G, G ~ Gamma(2, 1): (1 + 1/y)·e^{−1/y}.
pub fn inverse_gamma2_cdf(y: f64) -> f64 {
    if y <= 0.0 {
        0.0
    } else {
        (1.0 + 1.0 / y) * (-1.0 / y).exp()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShapeReport {
    pub ks: f64,
    pub n_samples: usize,
    /// Sorted normalized overlaps underlying the KS statistic.
    pub samples: Vec<f64>,
    pub trials: u64,
    pub failures: u64,
}

/// Kolmogorov–Smirnov distance between the empirical law of
/// O_ii/(N(1−|σ_i|²)) near z and the inverse-Gamma(2) limit.
pub fn run_overlap_shape(
    ensemble: &EnsembleSpec,
    z: Complex64,
    samples: usize,
    seed: u64,
) -> Result<ShapeReport> {
    if ensemble.field != Field::Complex {
        return Err(Error::InvalidParameter("shape test requires a complex ensemble".into()));
    }
    if z.norm() > 0.5 {
        return Err(Error::InvalidParameter(format!("|z| = {} > 0.5", z.norm())));
    }
    if samples < 500 {
        return Err(Error::InsufficientSamples { got: samples, need: 500 });
    }
    let n = ensemble.n;
    // collection radius around z; stays inside the bulk for |z| ≤ 0.5
    let radius = 0.4;
    let expected_per_trial = (n as f64 * radius * radius).max(1.0);
    let mut collected: Vec<f64> = Vec::new();
    let mut trial_base = 0u64;
    let mut failures = 0u64;
    while collected.len() < samples {
        let batch = (((samples - collected.len()) as f64 / expected_per_trial).ceil() as u64)
            .max(8);
        let report = run_overlap_sum(
            ensemble,
            &ShiftSpec::Scalar(Complex64::new(0.0, 0.0)),
            Domain::Disk { re: z.re, im: z.im, r: radius },
            batch,
            seed.wrapping_add(trial_base),
        )?;
        failures += report.failures;
        collected.extend(report.normalized_samples);
        trial_base += batch;
        if trial_base > 1_000_000 {
            return Err(Error::InsufficientSamples { got: collected.len(), need: samples });
        }
    }
    collected.truncate(samples);
    collected.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = collected.len() as f64;
    let mut ks = 0.0f64;
    for (i, &y) in collected.iter().enumerate() {
        let f = inverse_gamma2_cdf(y);
        ks = ks.max((f - i as f64 / m).abs()).max(((i + 1) as f64 / m - f).abs());
    }
    Ok(ShapeReport { ks, n_samples: collected.len(), samples: collected, trials: trial_base, failures })
}

// ── real-eigenvalue count ──────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealCountEstimate {
    /// E_N / √N.
    pub normalized_count: f64,
    pub mean_count: f64,
    pub trials: u64,
    pub failures: u64,
}

/// Mean number of real eigenvalues of X, reported as E_N/√N.
pub fn run_real_count(
    ensemble: &EnsembleSpec,
    trials: u64,
    seed: u64,
) -> Result<RealCountEstimate> {
    let n = ensemble.n;
    let zero = ShiftSpec::Scalar(Complex64::new(0.0, 0.0));
    let a = build_shift(&zero, n)?;
    let per_trial: Vec<Result<u64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let b = shifted_sample(ensemble, &a, Complex64::new(0.0, 0.0), seed, t)?;
            let tol = 1e-9 * linalg::operator_norm(&b);
            let sigma = linalg::complex_eigenvalues(&b)?;
            Ok(sigma.iter().filter(|s| s.im.abs() <= tol).count() as u64)
        })
        .collect();
    let mut total = 0u64;
    let mut good = 0u64;
    let mut failures = 0u64;
    for c in per_trial {
        match c {
            Ok(v) => {
                total += v;
                good += 1;
            }
            Err(_) => failures += 1,
        }
    }
    if good == 0 {
        return Err(Error::NumericalFailure("every trial failed".into()));
    }
    let mean = total as f64 / good as f64;
    Ok(RealCountEstimate {
        normalized_count: mean / (n as f64).sqrt(),
        mean_count: mean,
        trials: good,
        failures,
    })
}

// ── resolvent moment ───────────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub moment: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub power: f64,
    pub trials: u64,
    pub failures: u64,
}

/// E |⟨(X + A − z)^{-1}⟩|^{2−δ₁} with a percentile-bootstrap CI.
pub fn run_resolvent_moment(
    ensemble: &EnsembleSpec,
    shift: &ShiftSpec,
    z: Complex64,
    delta1: f64,
    trials: u64,
    seed: u64,
) -> Result<MomentEstimate> {
    if !(0.0 < delta1 && delta1 <= 1.0) {
        return Err(Error::InvalidParameter(format!("delta1 = {delta1} outside (0, 1]")));
    }
    let power = 2.0 - delta1;
    let n = ensemble.n;
    let a = build_shift(shift, n)?;
    let per_trial: Vec<Result<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let b = shifted_sample(ensemble, &a, Complex64::new(0.0, 0.0), seed, t)?;
            let sigma = linalg::complex_eigenvalues(&b)?;
            let tr: Complex64 =
                sigma.iter().map(|s| Complex64::new(1.0, 0.0) / (s - z)).sum::<Complex64>()
                    / n as f64;
            Ok(tr.norm().powf(power))
        })
        .collect();
    let mut vals = Vec::new();
    let mut failures = 0u64;
    for v in per_trial {
        match v {
            Ok(x) => vals.push(x),
            Err(_) => failures += 1,
        }
    }
    if vals.is_empty() {
        return Err(Error::NumericalFailure("every trial failed".into()));
    }
    let m = vals.len();
    let moment = vals.iter().sum::<f64>() / m as f64;
    // percentile bootstrap, 200 resamples
    let mut boots = Vec::with_capacity(200);
    for r in 0..200u64 {
        let mut stream = SeedStream::new(seed ^ 0x9e37_79b9_7f4a_7c15, r);
        let mut acc = 0.0;
        for _ in 0..m {
            let idx = (stream.next_u64() % m as u64) as usize;
            acc += vals[idx];
        }
        boots.push(acc / m as f64);
    }
    boots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(MomentEstimate {
        moment,
        ci_lo: boots[4],
        ci_hi: boots[194],
        power,
        trials: m as u64,
        failures,
    })
}

// ── plumbing ───────────────────────────────────────────────────────────────

/// Exact 1−α binomial confidence interval via Beta quantiles.
pub fn clopper_pearson(k: u64, n: u64, alpha: f64) -> (f64, f64) {
    assert!(k <= n && n > 0, "need 0 ≤ k ≤ n, n > 0");
    let (kf, nf) = (k as f64, n as f64);
    let lo = if k == 0 {
        0.0
    } else {
        Beta::new(kf, nf - kf + 1.0).unwrap().inverse_cdf(alpha / 2.0)
    };
    let hi = if k == n {
        1.0
    } else {
        Beta::new(kf + 1.0, nf - kf).unwrap().inverse_cdf(1.0 - alpha / 2.0)
    };
    (lo, hi)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub config: serde_json::Value,
    pub master_seed: u64,
    pub code_version: String,
    pub wall_time_s: f64,
    pub workers: usize,
    pub trials: u64,
    pub failures: u64,
}

impl RunManifest {
    pub fn failure_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.failures as f64 / self.trials as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::Dist;

    fn ginibre(field: Field, n: usize) -> EnsembleSpec {
        EnsembleSpec::new(field, Dist::Gaussian, n)
    }

    fn zero_shift() -> ShiftSpec {
        ShiftSpec::Scalar(Complex64::new(0.0, 0.0))
    }

    #[test]
    fn clopper_pearson_edges_and_table() {
        let (lo, _) = clopper_pearson(0, 50, 0.05);
        assert_eq!(lo, 0.0);
        let (_, hi) = clopper_pearson(50, 50, 0.05);
        assert_eq!(hi, 1.0);
        let (lo, hi) = clopper_pearson(5, 100, 0.05);
        assert!((lo - 0.0164).abs() < 1e-3, "lo = {lo}");
        assert!((hi - 0.1128).abs() < 1e-3, "hi = {hi}");
    }

    #[test]
    fn fit_slope_exact_power_laws() {
        let s_grid: Vec<f64> = (1..=8).map(|i| 0.1 * i as f64).collect();
        let trials = 1_000_000u64;
        let mk = |f: &dyn Fn(f64) -> f64| {
            let counts: Vec<u64> = s_grid.iter().map(|&s| (f(s) * trials as f64) as u64).collect();
            let p_hat: Vec<f64> = counts.iter().map(|&c| c as f64 / trials as f64).collect();
            TailEstimate {
                s_grid: s_grid.clone(),
                eta_grid: s_grid.iter().map(|s| s / 64.0).collect(),
                counts,
                trials,
                p_hat: p_hat.clone(),
                ci_lo: p_hat.clone(),
                ci_hi: p_hat,
                failures: 0,
                interlacing_checks: 0,
                interlacing_failures: 0,
                fit: None,
            }
        };
        let est = mk(&|s| s * s);
        let f = fit_slope(&est, (0.05, 1.0)).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-3, "slope {}", f.slope);
        let est = mk(&|s| 0.3 * s * s * s);
        let f = fit_slope(&est, (0.05, 1.0)).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-3);
        assert!((f.intercept - 0.3f64.ln()).abs() < 1e-2);
    }

    #[test]
    fn fit_slope_insufficient_data() {
        let est = TailEstimate {
            s_grid: vec![0.1, 0.2, 0.3],
            eta_grid: vec![0.0; 3],
            counts: vec![10, 20, 30],
            trials: 100,
            p_hat: vec![0.1, 0.2, 0.3],
            ci_lo: vec![0.0; 3],
            ci_hi: vec![1.0; 3],
            failures: 0,
            interlacing_checks: 0,
            interlacing_failures: 0,
            fit: None,
        };
        assert!(matches!(fit_slope(&est, (0.05, 1.0)), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn bootstrap_stderr_agrees_with_analytic() {
        let s_grid: Vec<f64> = (1..=8).map(|i| 0.1 * i as f64).collect();
        let trials = 10_000u64;
        let mut stream = SeedStream::new(99, 0);
        let counts: Vec<u64> = s_grid
            .iter()
            .map(|&s| {
                let p = s * s;
                (0..trials).filter(|_| stream.next_open01() < p).count() as u64
            })
            .collect();
        let p_hat: Vec<f64> = counts.iter().map(|&c| c as f64 / trials as f64).collect();
        let est = TailEstimate {
            s_grid,
            eta_grid: vec![0.0; 8],
            counts,
            trials,
            p_hat: p_hat.clone(),
            ci_lo: p_hat.clone(),
            ci_hi: p_hat,
            failures: 0,
            interlacing_checks: 0,
            interlacing_failures: 0,
            fit: None,
        };
        let f = fit_slope(&est, (0.05, 1.0)).unwrap();
        let boot = bootstrap_slope_stderr(&est, (0.05, 1.0), 200, 7).unwrap();
        assert!(boot < 2.0 * f.stderr && f.stderr < 2.0 * boot, "boot {boot} analytic {}", f.stderr);
    }

    #[test]
    fn tail_validation_rejects_bad_configs() {
        let mut cfg = TailConfig {
            ensemble: ginibre(Field::Complex, 8),
            shift: zero_shift(),
            z_re: 0.0,
            z_im: 0.0,
            k: 1,
            s_grid: vec![0.1, 0.5, 1.0],
            trials: 200,
            master_seed: 1,
            beta: 2,
        };
        cfg.validate().unwrap();
        cfg.trials = 50;
        assert!(cfg.validate().is_err());
        cfg.trials = 200;
        cfg.beta = 1;
        assert!(cfg.validate().is_err());
        cfg.beta = 2;
        cfg.s_grid = vec![0.5, 0.1];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn tail_estimate_is_monotone_with_valid_cis() {
        let cfg = TailConfig {
            ensemble: ginibre(Field::Complex, 16),
            shift: zero_shift(),
            z_re: 0.0,
            z_im: 0.0,
            k: 1,
            s_grid: vec![0.1, 0.3, 0.6, 1.0, 1.5],
            trials: 300,
            master_seed: 4,
            beta: 2,
        };
        let est = run_tail(&cfg).unwrap();
        for w in est.p_hat.windows(2) {
            assert!(w[1] >= w[0]);
        }
        for i in 0..est.p_hat.len() {
            assert!(est.ci_lo[i] <= est.p_hat[i] && est.p_hat[i] <= est.ci_hi[i]);
        }
        assert_eq!(est.failures, 0);
        assert!(est.interlacing_checks > 0 && est.interlacing_failures == 0);
        // determinism
        let est2 = run_tail(&cfg).unwrap();
        assert_eq!(est.counts, est2.counts);
    }

    #[test]
    fn wegner_zero_radius_and_far_z() {
        let e = ginibre(Field::Complex, 16);
        let w = run_wegner(&e, &zero_shift(), Complex64::new(0.0, 0.0), 0.0, 150, 5).unwrap();
        assert_eq!(w.mean_count, 0.0);
        let r = 16f64.powf(-0.75);
        let far = run_wegner(&e, &zero_shift(), Complex64::new(2.0, 0.0), r, 150, 5).unwrap();
        assert!(far.mean_count <= 1e-3);
        assert!(run_wegner(&e, &zero_shift(), Complex64::new(0.0, 0.0), 0.5, 100, 5).is_err());
    }

    #[test]
    fn median_of_means_robust_to_outlier() {
        let mut xs = vec![1.0; 100];
        xs[3] = 1e6;
        let m = median_of_means(&xs, 20);
        assert!((m - 1.0).abs() < 1e-9);
        assert!((median_of_means(&[2.0, 4.0], 20) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn near_normal_overlaps_sum_to_count() {
        // A = diag, X scaled to 1e-3 noise: every O_ii ≈ 1
        let n = 8;
        let diag: Vec<Complex64> =
            (0..n).map(|i| Complex64::new(3.0 * i as f64 + 1.0, 0.0)).collect();
        let shift = ShiftSpec::Diagonal(diag);
        let spec = ginibre(Field::Complex, n);
        let domain = Domain::Disk { re: 1.0, im: 0.0, r: 1.2 };
        let rep = run_overlap_sum(&spec, &shift, domain, 100, 11).unwrap();
        let per_enclosed = rep.enclosed_total as f64 / rep.trials as f64;
        assert!(rep.mean_sum >= per_enclosed - 1e-9, "sum {} count {per_enclosed}", rep.mean_sum);
        assert!(rep.per_trial_sums.len() == 100);
    }

    #[test]
    fn inverse_gamma2_cdf_against_quadrature() {
        // P(Y ≤ y) = P(G ≥ 1/y) = 1 − ∫_0^{1/y} t e^{−t} dt, Simpson oracle
        for &y in &[0.3, 0.7, 1.0, 2.5, 10.0, 1e6] {
            let a = 1.0 / y;
            let m = 200_000;
            let h = a / m as f64;
            let f = |t: f64| t * (-t).exp();
            let mut s = f(0.0) + f(a);
            for i in 1..m {
                let t = i as f64 * h;
                s += f(t) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            let integral = s * h / 3.0;
            let diff = (inverse_gamma2_cdf(y) - (1.0 - integral)).abs();
            assert!(diff <= 1e-10, "y = {y}: diff {diff:.2e}");
        }
        assert_eq!(inverse_gamma2_cdf(0.0), 0.0);
        assert!((inverse_gamma2_cdf(1e12) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn shape_requires_enough_samples_and_complex_field() {
        let e = ginibre(Field::Complex, 16);
        assert!(matches!(
            run_overlap_shape(&e, Complex64::new(0.0, 0.0), 100, 1),
            Err(Error::InsufficientSamples { .. })
        ));
        let r = ginibre(Field::Real, 16);
        assert!(run_overlap_shape(&r, Complex64::new(0.0, 0.0), 500, 1).is_err());
        assert!(run_overlap_shape(&e, Complex64::new(0.7, 0.0), 500, 1).is_err());
    }

    #[test]
    fn real_count_two_by_two_probability() {
        let e = ginibre(Field::Real, 2);
        let est = run_real_count(&e, 2000, 21).unwrap();
        // eigenvalues of a real 2×2 are both real or a conjugate pair
        let p_both = est.mean_count / 2.0;
        assert!((0.6..=0.8).contains(&p_both), "P(both real) = {p_both}");
    }

    #[test]
    fn complex_spectrum_has_no_real_eigenvalues() {
        let e = ginibre(Field::Complex, 16);
        let est = run_real_count(&e, 300, 31).unwrap();
        assert!(est.normalized_count <= 0.05, "E_N/√N = {}", est.normalized_count);
    }

    #[test]
    fn resolvent_moment_outside_spectrum() {
        let e = ginibre(Field::Complex, 32);
        let est =
            run_resolvent_moment(&e, &zero_shift(), Complex64::new(2.0, 0.0), 0.5, 400, 9).unwrap();
        // ⟨(x−2)^{-1}⟩ → −1/2 outside the disk, so the 1.5-moment → 0.354
        assert!((est.moment - 0.354).abs() <= 0.05, "moment {}", est.moment);
        assert!(est.ci_lo <= est.moment && est.moment <= est.ci_hi);
        // monotone in decreasing δ₁ (Lyapunov)
        let hi =
            run_resolvent_moment(&e, &zero_shift(), Complex64::new(2.0, 0.0), 0.1, 400, 9).unwrap();
        assert!(hi.moment <= est.moment + 1e-12);
        assert!(run_resolvent_moment(&e, &zero_shift(), Complex64::new(2.0, 0.0), 1.5, 100, 9)
            .is_err());
    }
}
