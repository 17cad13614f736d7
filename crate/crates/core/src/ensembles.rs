//! Samplers for i.i.d. noise matrices with bounded-density entry laws, and
//! deterministic shift matrices, with counter-based reproducible seeding.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Field, Matrix};
use crate::rng::SeedStream;

/// Entry law of √N·X_11. All non-Cauchy laws are centered with unit variance
/// (per complex entry; components carry half the variance each).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dist {
    Gaussian,
    Uniform,
    /// Symmetric spikes at ±μ convolved with a centered uniform of total
    /// width `SMOOTHED_BERNOULLI_WIDTH`; μ is placed so the variance is
    /// exactly 1 while the density stays exactly 1/(2w).
    SmoothedBernoulli,
    Cauchy,
}

pub const SMOOTHED_BERNOULLI_WIDTH: f64 = 0.1;

/// Absolute moments of the entry law, or an explicit infinite marker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Moments {
    /// Second and fourth absolute moments of √N·X_11.
    Finite { m2: f64, m4: f64 },
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub field: Field,
    pub dist: Dist,
    pub n: usize,
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Field::Real => s.serialize_str("real"),
            Field::Complex => s.serialize_str("complex"),
        }
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let t = String::deserialize(d)?;
        match t.as_str() {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(serde::de::Error::custom(format!("unknown field tag {other:?}"))),
        }
    }
}

impl EnsembleSpec {
    pub fn new(field: Field, dist: Dist, n: usize) -> Self {
        EnsembleSpec { field, dist, n }
    }

    /// Sup of the density of each real component of √N·X_11.
    pub fn density_bound(&self) -> f64 {
        let w = SMOOTHED_BERNOULLI_WIDTH;
        match (self.dist, self.field) {
            (Dist::Gaussian, Field::Real) => 1.0 / (2.0 * std::f64::consts::PI).sqrt(),
            // component ~ N(0, 1/2)
            (Dist::Gaussian, Field::Complex) => 1.0 / std::f64::consts::PI.sqrt(),
            (Dist::Uniform, Field::Real) => 1.0 / (2.0 * 3f64.sqrt()),
            // component uniform with variance 1/2 → half-width √(3/2)
            (Dist::Uniform, Field::Complex) => 1.0 / (2.0 * 1.5f64.sqrt()),
            (Dist::SmoothedBernoulli, Field::Real) => 1.0 / (2.0 * w),
            // component is the real law scaled by 1/√2
            (Dist::SmoothedBernoulli, Field::Complex) => 2f64.sqrt() / (2.0 * w),
            (Dist::Cauchy, _) => 1.0 / std::f64::consts::PI,
        }
    }

    pub fn moments(&self) -> Moments {
        let w2 = SMOOTHED_BERNOULLI_WIDTH * SMOOTHED_BERNOULLI_WIDTH;
        let mu2 = 1.0 - w2 / 12.0;
        // E s⁴ of the real smoothed-Bernoulli law
        let sb_m4 = mu2 * mu2 + 6.0 * mu2 * w2 / 12.0 + w2 * w2 / 80.0;
        match (self.dist, self.field) {
            (Dist::Cauchy, _) => Moments::Infinite,
            (Dist::Gaussian, Field::Real) => Moments::Finite { m2: 1.0, m4: 3.0 },
            (Dist::Gaussian, Field::Complex) => Moments::Finite { m2: 1.0, m4: 2.0 },
            (Dist::Uniform, Field::Real) => Moments::Finite { m2: 1.0, m4: 9.0 / 5.0 },
            // E|x|⁴ = 2E c⁴ + 2(E c²)² with c uniform of variance 1/2
            (Dist::Uniform, Field::Complex) => Moments::Finite { m2: 1.0, m4: 1.4 },
            (Dist::SmoothedBernoulli, Field::Real) => Moments::Finite { m2: 1.0, m4: sb_m4 },
            (Dist::SmoothedBernoulli, Field::Complex) => Moments::Finite { m2: 1.0, m4: sb_m4 / 2.0 + 0.5 },
        }
    }

    /// CDF of one real component of √N·X_11 (used by goodness-of-fit tests).
    pub fn component_cdf(&self, x: f64) -> f64 {
        let scale = match self.field {
            Field::Real => 1.0,
            Field::Complex => 2f64.sqrt(), // component = real law / √2
        };
        match self.dist {
            Dist::Gaussian => phi(x * scale),
            Dist::Uniform => {
                let a = 3f64.sqrt() / scale;
                ((x + a) / (2.0 * a)).clamp(0.0, 1.0)
            }
            Dist::SmoothedBernoulli => {
                let w = SMOOTHED_BERNOULLI_WIDTH;
                let mu = (1.0 - w * w / 12.0).sqrt();
                let u = |c: f64, y: f64| ((y - (c - w / 2.0)) / w).clamp(0.0, 1.0);
                let y = x * scale;
                0.5 * u(-mu, y) + 0.5 * u(mu, y)
            }
            Dist::Cauchy => 0.5 + (x * scale).atan() / std::f64::consts::PI,
        }
    }

    /// One real draw of the unscaled entry law (√N scale).
    fn draw_component_law(&self, stream: &mut SeedStream) -> f64 {
        match self.dist {
            Dist::Gaussian => stream.next_gauss_pair().0,
            Dist::Uniform => {
                let a = 3f64.sqrt();
                stream.next_uniform(-a, a)
            }
            Dist::SmoothedBernoulli => {
                let w = SMOOTHED_BERNOULLI_WIDTH;
                let mu = (1.0 - w * w / 12.0).sqrt();
                let sign = if stream.next_open01() < 0.5 { -1.0 } else { 1.0 };
                sign * mu + stream.next_uniform(-w / 2.0, w / 2.0)
            }
            Dist::Cauchy => stream.next_cauchy(),
        }
    }

    /// One entry of √N·X.
    fn draw_entry(&self, stream: &mut SeedStream) -> Complex64 {
        match self.field {
            Field::Real => Complex64::new(self.draw_component_law(stream), 0.0),
            Field::Complex => {
                if self.dist == Dist::Gaussian {
                    let (a, b) = stream.next_gauss_pair();
                    Complex64::new(a, b) / 2f64.sqrt()
                } else if self.dist == Dist::Cauchy {
                    Complex64::new(stream.next_cauchy(), stream.next_cauchy())
                } else {
                    let a = self.draw_component_law(stream);
                    let b = self.draw_component_law(stream);
                    Complex64::new(a, b) / 2f64.sqrt()
                }
            }
        }
    }
}

fn phi(x: f64) -> f64 {
    0.5 * (1.0 + statrs::function::erf::erf(x / 2f64.sqrt()))
}

/// Sample an N×N matrix with i.i.d. entries per `spec`, scaled by 1/√N.
pub fn sample_matrix(spec: &EnsembleSpec, stream: &mut SeedStream) -> Matrix {
    let n = spec.n;
    let scale = 1.0 / (n as f64).sqrt();
    Matrix::from_fn(spec.field, n, n, |_, _| spec.draw_entry(stream) * scale)
}

// ── deterministic shifts ────────────────────────────────────────────────────

#[derive(Debug, Clone, PartialEq)]
pub enum ShiftSpec {
    Scalar(Complex64),
    Diagonal(Vec<Complex64>),
    Dense(Matrix),
}

/// Wire form of [`ShiftSpec`]: `{"kind": "scalar", "re": .., "im": ..}`,
/// `{"kind": "diagonal", "entries": [[re, im], ..]}`, or
/// `{"kind": "dense", "file": {..}}`.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ShiftSpecRepr {
    Scalar { re: f64, im: f64 },
    Diagonal { entries: Vec<[f64; 2]> },
    Dense { file: DenseShiftFile },
}

impl Serialize for ShiftSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            ShiftSpec::Scalar(z) => ShiftSpecRepr::Scalar { re: z.re, im: z.im },
            ShiftSpec::Diagonal(d) => ShiftSpecRepr::Diagonal {
                entries: d.iter().map(|z| [z.re, z.im]).collect(),
            },
            ShiftSpec::Dense(m) => ShiftSpecRepr::Dense { file: DenseShiftFile::from_matrix(m) },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ShiftSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match ShiftSpecRepr::deserialize(d)? {
            ShiftSpecRepr::Scalar { re, im } => ShiftSpec::Scalar(Complex64::new(re, im)),
            ShiftSpecRepr::Diagonal { entries } => ShiftSpec::Diagonal(
                entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
            ),
            ShiftSpecRepr::Dense { file } => {
                ShiftSpec::Dense(file.to_matrix().map_err(serde::de::Error::custom)?)
            }
        })
    }
}

impl ShiftSpec {
    /// Operator-norm bound of the built matrix.
    pub fn norm_bound(&self) -> f64 {
        match self {
            ShiftSpec::Scalar(z) => z.norm(),
            ShiftSpec::Diagonal(d) => d.iter().map(|z| z.norm()).fold(0.0, f64::max),
            ShiftSpec::Dense(m) => crate::linalg::operator_norm(m),
        }
    }
}

/// Materialize the shift as a dense N×N matrix.
pub fn build_shift(spec: &ShiftSpec, n: usize) -> Result<Matrix> {
    match spec {
        ShiftSpec::Scalar(z) => {
            let f = if z.im == 0.0 { Field::Real } else { Field::Complex };
            Ok(Matrix::from_fn(f, n, n, |i, j| if i == j { *z } else { Complex64::new(0.0, 0.0) }))
        }
        ShiftSpec::Diagonal(d) => {
            if d.len() != n {
                return Err(Error::DimensionMismatch(format!("diagonal length {} vs n {}", d.len(), n)));
            }
            Ok(Matrix::from_fn(Field::Complex, n, n, |i, j| {
                if i == j {
                    d[i]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }))
        }
        ShiftSpec::Dense(m) => {
            if m.rows != n || m.cols != n {
                return Err(Error::DimensionMismatch(format!("dense shift {}×{} vs n {}", m.rows, m.cols, n)));
            }
            Ok(m.clone())
        }
    }
}

/// On-disk dense shift: { "rows": N, "cols": N, "complex": bool,
/// "entries": [[re, im], ...] } row-major.
#[derive(Debug, Serialize, Deserialize)]
pub struct DenseShiftFile {
    pub rows: usize,
    pub cols: usize,
    pub complex: bool,
    pub entries: Vec<[f64; 2]>,
}

impl DenseShiftFile {
    pub fn from_matrix(m: &Matrix) -> Self {
        DenseShiftFile {
            rows: m.rows,
            cols: m.cols,
            complex: m.field == Field::Complex,
            entries: m.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::InvalidInput(format!(
                "shift file declares {}×{} but carries {} entries",
                self.rows,
                self.cols,
                self.entries.len()
            )));
        }
        let field = if self.complex { Field::Complex } else { Field::Real };
        Ok(Matrix::from_fn(field, self.rows, self.cols, |i, j| {
            let e = self.entries[i * self.cols + j];
            Complex64::new(e[0], e[1])
        }))
    }
}

pub fn load_dense_shift(path: &std::path::Path) -> Result<Matrix> {
    let text = std::fs::read_to_string(path)?;
    let file: DenseShiftFile = serde_json::from_str(&text)?;
    file.to_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic() {
        let spec = EnsembleSpec::new(Field::Complex, Dist::Gaussian, 16);
        let a = sample_matrix(&spec, &mut SeedStream::new(9, 4));
        let b = sample_matrix(&spec, &mut SeedStream::new(9, 4));
        assert_eq!(a, b);
        let c = sample_matrix(&spec, &mut SeedStream::new(9, 5));
        assert_ne!(a, c);
    }

    #[test]
    fn normalized_trace_near_one() {
        let spec = EnsembleSpec::new(Field::Complex, Dist::Gaussian, 64);
        let x = sample_matrix(&spec, &mut SeedStream::new(1, 0));
        let g = x.matmul(&x.adjoint()).unwrap();
        let t = g.avg_trace().re;
        assert!((t - 1.0).abs() < 0.15, "normalized trace {t}");
    }

    #[test]
    fn density_bounds_match_closed_forms() {
        let g = EnsembleSpec::new(Field::Real, Dist::Gaussian, 8);
        assert!((g.density_bound() - 1.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-15);
        let u = EnsembleSpec::new(Field::Real, Dist::Uniform, 8);
        assert!((u.density_bound() - 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-15);
        let c = EnsembleSpec::new(Field::Real, Dist::Cauchy, 8);
        assert!((c.density_bound() - 1.0 / std::f64::consts::PI).abs() < 1e-15);
        let sb = EnsembleSpec::new(Field::Real, Dist::SmoothedBernoulli, 8);
        assert!((sb.density_bound() - 5.0).abs() < 1e-15);
        assert_eq!(c.moments(), Moments::Infinite);
    }

    #[test]
    fn cauchy_median_of_modulus() {
        let spec = EnsembleSpec::new(Field::Real, Dist::Cauchy, 32);
        let mut s = SeedStream::new(3, 0);
        let n = 10_000;
        let mut v: Vec<f64> = (0..n).map(|_| spec.draw_entry(&mut s).norm()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let med = v[n / 2];
        assert!((med - 1.0).abs() < 0.05, "median {med}");
    }

    #[test]
    fn scalar_shift_builds_diagonal() {
        let z = Complex64::new(1.0, 1.0);
        let m = build_shift(&ShiftSpec::Scalar(z), 2).unwrap();
        assert_eq!(m.get(0, 0), z);
        assert_eq!(m.get(1, 1), z);
        assert_eq!(m.get(0, 1), Complex64::new(0.0, 0.0));
        let zero = build_shift(&ShiftSpec::Scalar(Complex64::new(0.0, 0.0)), 3).unwrap();
        assert_eq!(zero.frobenius_norm(), 0.0);
    }

    #[test]
    fn dense_shift_round_trips_through_json() {
        let m = Matrix::from_complex_rows(&[
            vec![Complex64::new(1.0, 2.0), Complex64::new(0.0, -1.0)],
            vec![Complex64::new(3.5, 0.0), Complex64::new(-2.0, 0.25)],
        ]);
        let file = DenseShiftFile::from_matrix(&m);
        let text = serde_json::to_string(&file).unwrap();
        let back: DenseShiftFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
    }

    #[test]
    fn complex_entries_have_vanishing_second_pseudo_moment() {
        // E[(√N X_11)²] → 0 for complex specs (both components ≤ 0.05).
        for dist in [Dist::Gaussian, Dist::Uniform, Dist::SmoothedBernoulli] {
            let spec = EnsembleSpec::new(Field::Complex, dist, 8);
            let mut s = SeedStream::new(77, 0);
            let n = 100_000;
            let mut acc = Complex64::new(0.0, 0.0);
            for _ in 0..n {
                let e = spec.draw_entry(&mut s);
                acc += e * e;
            }
            acc /= n as f64;
            assert!(acc.re.abs() <= 0.05 && acc.im.abs() <= 0.05, "{dist:?}: E x² = {acc}");
        }
    }

    #[test]
    fn chi_square_goodness_of_fit() {
        // 20 equiprobable bins from the analytic component CDF, 1e5 draws,
        // significance 0.01 (χ²_{19} critical value 36.191).
        for (dist, field) in [
            (Dist::Gaussian, Field::Real),
            (Dist::Gaussian, Field::Complex),
            (Dist::Uniform, Field::Real),
            (Dist::SmoothedBernoulli, Field::Real),
            (Dist::SmoothedBernoulli, Field::Complex),
            (Dist::Cauchy, Field::Real),
        ] {
            let spec = EnsembleSpec::new(field, dist, 8);
            let mut s = SeedStream::new(123, 1);
            let bins = 20usize;
            let mut counts = vec![0usize; bins];
            let n = 100_000;
            for _ in 0..n {
                let e = spec.draw_entry(&mut s);
                let u = spec.component_cdf(e.re);
                let b = ((u * bins as f64) as usize).min(bins - 1);
                counts[b] += 1;
            }
            let expect = n as f64 / bins as f64;
            let chi2: f64 = counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
            assert!(chi2 < 36.191, "{dist:?}/{field:?}: χ² = {chi2}");
        }
    }
}
