//! Experiment configuration: JSON files overridden by CLI flags, with the
//! effective values echoed verbatim into the run manifest.

use std::path::Path;

use girko_core::ensembles::{load_dense_shift, Dist, EnsembleSpec, ShiftSpec};
use girko_core::Field;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::CliError;

/// Load an optional JSON config file, overlay explicit flag values, and
/// deserialize into the command's typed config (missing keys take defaults).
pub fn merge_config<T: DeserializeOwned>(
    file: Option<&Path>,
    overrides: Vec<(&str, Value)>,
) -> Result<T, CliError> {
    let mut map = match file {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("config file {}: {e}", p.display())))?;
            match serde_json::from_str::<Value>(&text) {
                Ok(Value::Object(m)) => m,
                Ok(_) => {
                    return Err(CliError::Config(format!(
                        "config file {} must hold a JSON object",
                        p.display()
                    )))
                }
                Err(e) => {
                    return Err(CliError::Config(format!("config file {}: {e}", p.display())))
                }
            }
        }
        None => Map::new(),
    };
    for (key, value) in overrides {
        map.insert(key.to_string(), value);
    }
    serde_json::from_value(Value::Object(map)).map_err(|e| CliError::Config(e.to_string()))
}

/// "ginibre-real", "uniform-complex", "bernoulli-real", "cauchy-complex", …
pub fn parse_ensemble(name: &str, n: usize) -> Result<EnsembleSpec, CliError> {
    let (dist_s, field_s) = name
        .rsplit_once('-')
        .ok_or_else(|| CliError::Config(format!("ensemble `{name}`: expected <dist>-<field>")))?;
    let dist = match dist_s {
        "ginibre" | "gaussian" => Dist::Gaussian,
        "uniform" => Dist::Uniform,
        "bernoulli" | "smoothed-bernoulli" => Dist::SmoothedBernoulli,
        "cauchy" => Dist::Cauchy,
        other => return Err(CliError::Config(format!("ensemble `{name}`: unknown distribution `{other}`"))),
    };
    let field = match field_s {
        "real" => Field::Real,
        "complex" => Field::Complex,
        other => return Err(CliError::Config(format!("ensemble `{name}`: unknown field `{other}`"))),
    };
    if n == 0 {
        return Err(CliError::Config("n must be positive".into()));
    }
    Ok(EnsembleSpec::new(field, dist, n))
}

/// "re,im" or a lone "re".
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    let bad = || CliError::Config(format!("z `{s}`: expected `re` or `re,im`"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, 0.0)),
        [re, im] => Ok(Complex64::new(
            re.trim().parse().map_err(|_| bad())?,
            im.trim().parse().map_err(|_| bad())?,
        )),
        _ => Err(bad()),
    }
}

/// "zero" or a dense-shift JSON path.
pub fn parse_shift(a: &str, n: usize) -> Result<ShiftSpec, CliError> {
    if a == "zero" {
        return Ok(ShiftSpec::Scalar(Complex64::new(0.0, 0.0)));
    }
    if let Some(rest) = a.strip_prefix("scalar:") {
        return Ok(ShiftSpec::Scalar(parse_complex(rest)?));
    }
    let m = load_dense_shift(Path::new(a))
        .map_err(|e| CliError::Config(format!("shift `{a}`: {e}")))?;
    if m.rows != n || m.cols != n {
        return Err(CliError::Config(format!(
            "shift `{a}` is {}×{} but n = {n}",
            m.rows, m.cols
        )));
    }
    Ok(ShiftSpec::Dense(m))
}

/// "lo:hi:count", linearly spaced, inclusive of both ends.
pub fn parse_linear_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Config(format!("grid `{s}`: expected `lo:hi:count`"));
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else { return Err(bad()) };
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    let count: usize = count.parse().map_err(|_| bad())?;
    if count < 2 || hi <= lo {
        return Err(bad());
    }
    let h = (hi - lo) / (count - 1) as f64;
    Ok((0..count).map(|i| lo + i as f64 * h).collect())
}

/// "geom:lo:hi:count" or "lin:lo:hi:count".
pub fn parse_s_grid(s: &str) -> Result<Vec<f64>, CliError> {
    if let Some(rest) = s.strip_prefix("geom:") {
        let lin = parse_linear_grid(rest)?;
        if lin[0] <= 0.0 {
            return Err(CliError::Config(format!("s-grid `{s}`: geometric grid needs lo > 0")));
        }
        let (lo, hi) = (lin[0], *lin.last().unwrap());
        let count = lin.len();
        let ratio = (hi / lo).powf(1.0 / (count - 1) as f64);
        return Ok((0..count).map(|i| lo * ratio.powi(i as i32)).collect());
    }
    if let Some(rest) = s.strip_prefix("lin:") {
        return parse_linear_grid(rest);
    }
    Err(CliError::Config(format!("s-grid `{s}`: expected `geom:lo:hi:count` or `lin:lo:hi:count`")))
}

/// "disk:re,im,r" or "square:re,im,half".
pub fn parse_domain(s: &str) -> Result<girko_core::montecarlo::Domain, CliError> {
    use girko_core::montecarlo::Domain;
    let bad = || CliError::Config(format!("domain `{s}`: expected `disk:re,im,r` or `square:re,im,half`"));
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    let nums: Vec<f64> = rest
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [re, im, size] = nums.as_slice() else { return Err(bad()) };
    match kind {
        "disk" => Ok(Domain::Disk { re: *re, im: *im, r: *size }),
        "square" => Ok(Domain::Square { re: *re, im: *im, half: *size }),
        _ => Err(bad()),
    }
}

/// Master seed: explicit flag/config value, else GIRKO_LAB_SEED, else 1.
pub fn resolve_seed(explicit: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = explicit {
        return Ok(s);
    }
    match std::env::var("GIRKO_LAB_SEED") {
        Ok(v) => v
            .parse()
            .map_err(|_| CliError::Config(format!("GIRKO_LAB_SEED `{v}` is not a u64"))),
        Err(_) => Ok(1),
    }
}
