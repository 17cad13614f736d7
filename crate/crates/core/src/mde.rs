//! Scalar-reduced solver for the self-consistent resolvent equation of the
//! doubled Hermitian form, the self-consistent density of states, bulk-domain
//! membership, spectral quantiles, and the deterministic overlap profile.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{Field, Matrix};

pub const ETA0: f64 = 1e-6;
const MAX_ITER: usize = 10_000;

#[derive(Debug, Clone)]
pub struct MdeSolution {
    pub w: Complex64,
    /// Self-consistent scalar m = ⟨M⟩ with Im m > 0.
    pub m: Complex64,
    /// Fixed-point defect |m − ⟨(Z − m)^{-1}⟩|.
    pub residual: f64,
    /// π^{-1}·Im m.
    pub scdos: f64,
}

/// The fixed-point problem for one deterministic shift: everything depends on
/// A − z only through its singular values, so they are computed once.
#[derive(Debug, Clone)]
pub struct MdeProblem {
    /// Singular values of A − z.
    pub svals: Vec<f64>,
    pub n: usize,
}

impl MdeProblem {
    pub fn new(a: &Matrix, z: Complex64) -> Result<Self> {
        let mut shifted = a.clone();
        if z.im != 0.0 {
            shifted.field = Field::Complex;
        }
        for i in 0..a.rows {
            let v = shifted.get(i, i) - z;
            shifted.set(i, i, v);
        }
        Ok(MdeProblem { svals: linalg::singular_values(&shifted)?, n: a.rows })
    }

    /// ⟨(Z − m)^{-1}⟩ = (1/N)·Σ_i ζ/(s_i² − ζ²), ζ = w + m.
    fn apply(&self, w: Complex64, m: Complex64) -> Complex64 {
        let zeta = w + m;
        let mut s = Complex64::new(0.0, 0.0);
        for &si in &self.svals {
            s += zeta / (Complex64::new(si * si, 0.0) - zeta * zeta);
        }
        s / self.n as f64
    }

    /// d/dm ⟨(Z − m)^{-1}⟩ = (1/N)·Σ_i (s_i² + ζ²)/(s_i² − ζ²)².
    fn apply_prime(&self, w: Complex64, m: Complex64) -> Complex64 {
        let zeta = w + m;
        let z2 = zeta * zeta;
        let mut s = Complex64::new(0.0, 0.0);
        for &si in &self.svals {
            let d = Complex64::new(si * si, 0.0) - z2;
            s += (Complex64::new(si * si, 0.0) + z2) / (d * d);
        }
        s / self.n as f64
    }

    /// Damped fixed-point iteration in the upper half-plane, finished by
    /// Newton steps once inside the contraction basin (the damped map alone
    /// crawls at rate 1 − O(√η) near the spectral edge).
    pub fn solve(&self, w: Complex64, tol: f64) -> Result<MdeSolution> {
        if w.im <= 0.0 {
            return Err(Error::InvalidParameter(format!("Im w must be positive, got {}", w.im)));
        }
        let mut m = Complex64::new(0.0, 1.0);
        let mut alpha = 0.5f64;
        let mut prev_res = f64::INFINITY;
        let mut worse = 0usize;
        let coarse = tol.max(1e-6);
        for _ in 0..MAX_ITER {
            let f = self.apply(w, m);
            let res = (f - m).norm();
            if res <= coarse {
                break;
            }
            if res > prev_res {
                worse += 1;
                if worse >= 3 {
                    alpha = (alpha * 0.5).max(1e-3);
                    worse = 0;
                }
            } else {
                worse = 0;
            }
            prev_res = res;
            m = m * (1.0 - alpha) + f * alpha;
            if m.im <= 0.0 {
                // Stay on the Stieltjes branch.
                m = Complex64::new(m.re, 1e-12);
            }
        }
        // Newton on g(m) = F(m) − m from the damped estimate.
        for _ in 0..60 {
            let g = self.apply(w, m) - m;
            if g.norm() <= tol {
                break;
            }
            let gp = self.apply_prime(w, m) - Complex64::new(1.0, 0.0);
            if gp.norm() < 1e-300 {
                break;
            }
            let next = m - g / gp;
            if !(next.re.is_finite() && next.im.is_finite()) || next.im <= 0.0 {
                break;
            }
            m = next;
        }
        let residual = (self.apply(w, m) - m).norm();
        if residual > tol {
            return Err(Error::NonConvergence(residual));
        }
        Ok(MdeSolution { w, m, residual, scdos: m.im / std::f64::consts::PI })
    }
}

/// Solve at one spectral parameter.
pub fn solve_mde(a: &Matrix, z: Complex64, w: Complex64, tol: f64) -> Result<MdeSolution> {
    MdeProblem::new(a, z)?.solve(w, tol)
}

/// Materialize the full 2N×2N matrix M = (Z − m·I)^{-1}, Z being the doubled
/// Hermitian form of A−z with −w on the diagonal.
pub fn mde_full_matrix(a: &Matrix, z: Complex64, sol: &MdeSolution) -> Result<Matrix> {
    let mut shifted = a.clone();
    shifted.field = Field::Complex;
    for i in 0..a.rows {
        let v = shifted.get(i, i) - z;
        shifted.set(i, i, v);
    }
    let mut zmat = linalg::doubled_hermitian(&shifted);
    let zeta = sol.w + sol.m;
    for i in 0..zmat.rows {
        let v = zmat.get(i, i) - zeta;
        zmat.set(i, i, v);
    }
    linalg::linear_solve(&zmat, &Matrix::identity(Field::Complex, zmat.rows), 1e-12)
}

/// Boundary density ρ^z(x) ≈ π^{-1}·Im m(x + i·eta0), with one Richardson
/// step (eta0, eta0/2) when the surrogate is not yet settled.
pub fn scdos(a: &Matrix, z: Complex64, x: f64, eta0: f64) -> Result<f64> {
    let prob = MdeProblem::new(a, z)?;
    scdos_at(&prob, x, eta0)
}

pub fn scdos_at(prob: &MdeProblem, x: f64, eta0: f64) -> Result<f64> {
    if eta0 <= 0.0 {
        return Err(Error::InvalidParameter(format!("eta0 must be positive, got {eta0}")));
    }
    let r1 = prob.solve(Complex64::new(x, eta0), 1e-13)?.scdos;
    let r2 = prob.solve(Complex64::new(x, eta0 / 2.0), 1e-13)?.scdos;
    if (r1 - r2).abs() > 1e-4 {
        // First-order Richardson extrapolation toward η → 0.
        Ok((2.0 * r2 - r1).max(0.0))
    } else {
        Ok(r2.max(0.0))
    }
}

#[derive(Debug, Clone)]
pub struct BulkQuery {
    pub tau: f64,
    /// ⟨((A−z)(A−z)† + τ²)^{-1}⟩.
    pub value: f64,
    pub in_bulk: bool,
}

/// Bulk membership: z lies in the τ-bulk iff the value exceeds 1.
pub fn in_bulk(a: &Matrix, z: Complex64, tau: f64) -> Result<BulkQuery> {
    if tau <= 0.0 {
        return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
    }
    let prob = MdeProblem::new(a, z)?;
    let value = prob.svals.iter().map(|s| 1.0 / (s * s + tau * tau)).sum::<f64>() / prob.n as f64;
    Ok(BulkQuery { tau, value, in_bulk: value > 1.0 })
}

#[derive(Debug, Clone)]
pub struct OverlapProfile {
    /// γ_i: the i-th N-quantile of the density (mass i/(2N) on [0, γ_i]).
    pub gamma: Vec<f64>,
    /// q_i = ⟨Im[M(γ_i)]F⟩/⟨Im M(γ_i)⟩, F the lower-left block indicator.
    pub q: Vec<Complex64>,
}

/// Deterministic overlap profile at the first `count` quantiles.
pub fn overlap_profile(a: &Matrix, z: Complex64, count: usize) -> Result<OverlapProfile> {
    let n = a.rows;
    if count == 0 || count > n {
        return Err(Error::InvalidParameter(format!("count must be in 1..=N, got {count}")));
    }
    let prob = MdeProblem::new(a, z)?;
    let upper = prob.svals.last().copied().unwrap_or(0.0) + 2.5;

    // Cumulative mass table on [0, upper] by the trapezoid rule on a fine grid.
    let grid_n = 2000usize;
    let h = upper / grid_n as f64;
    let mut rho = Vec::with_capacity(grid_n + 1);
    for i in 0..=grid_n {
        rho.push(scdos_at(&prob, i as f64 * h, ETA0)?);
    }
    let mut cum = vec![0.0; grid_n + 1];
    for i in 1..=grid_n {
        cum[i] = cum[i - 1] + 0.5 * (rho[i - 1] + rho[i]) * h;
    }

    let mut gamma = Vec::with_capacity(count);
    for i in 1..=count {
        let target = i as f64 / (2.0 * n as f64);
        if target > cum[grid_n] {
            return Err(Error::QuantileOutOfSupport);
        }
        // Invert the monotone table by bisection + linear interpolation.
        let mut lo = 0usize;
        let mut hi = grid_n;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if cum[mid] < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let frac = if cum[hi] > cum[lo] { (target - cum[lo]) / (cum[hi] - cum[lo]) } else { 0.5 };
        gamma.push((lo as f64 + frac) * h);
    }

    let mut q = Vec::with_capacity(count);
    for &g in &gamma {
        let sol = prob.solve(Complex64::new(g, ETA0), 1e-12)?;
        let full = mde_full_matrix(a, z, &sol)?;
        // Im M = (M − M†)/2i; ⟨Im M F⟩ reduces to the normalized trace of the
        // upper-right block of Im M.
        let dim = full.rows;
        let mut tr12 = Complex64::new(0.0, 0.0);
        let mut tr = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let a12 = full.get(k, k + n);
            let a21 = full.get(k + n, k);
            tr12 += (a12 - a21.conj()) / Complex64::new(0.0, 2.0);
        }
        for k in 0..dim {
            let d = full.get(k, k);
            tr += (d - d.conj()) / Complex64::new(0.0, 2.0);
        }
        q.push(tr12 / tr);
    }
    Ok(OverlapProfile { gamma, q })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn semicircle_fixed_point_closed_form() {
        let a = Matrix::zeros(Field::Complex, 8, 8);
        for eta in [1.0, 0.1, 1e-3] {
            let sol = solve_mde(&a, c(0.0, 0.0), c(0.0, eta), 1e-13).unwrap();
            let expect = c(0.0, (-eta + (eta * eta + 4.0).sqrt()) / 2.0);
            assert!((sol.m - expect).norm() < 1e-11, "eta {eta}: {} vs {expect}", sol.m);
            assert!(sol.residual <= 1e-12);
            assert!(sol.m.im > 0.0);
        }
    }

    #[test]
    fn unitary_case_matches_cubic_root() {
        // s_i ≡ 1: m = ζ/(1−ζ²) with ζ = w + m.
        let a = Matrix::identity(Field::Complex, 6);
        let w = c(0.2, 0.3);
        let sol = solve_mde(&a, c(0.0, 0.0), w, 1e-13).unwrap();
        let zeta = w + sol.m;
        let implied = zeta / (Complex64::new(1.0, 0.0) - zeta * zeta);
        assert!((sol.m - implied).norm() < 1e-11);
    }

    #[test]
    fn semicircle_density_at_zero() {
        let a = Matrix::zeros(Field::Complex, 4, 4);
        let rho = scdos(&a, c(0.0, 0.0), 0.0, ETA0).unwrap();
        assert!((rho - 1.0 / std::f64::consts::PI).abs() < 1e-5, "rho(0) = {rho}");
        // edges
        for x in [2.0, -2.0] {
            let r = scdos(&a, c(0.0, 0.0), x, ETA0).unwrap();
            assert!(r <= 1e-2, "rho({x}) = {r}");
        }
        // symmetry
        let rp = scdos(&a, c(0.0, 0.0), 0.7, ETA0).unwrap();
        let rm = scdos(&a, c(0.0, 0.0), -0.7, ETA0).unwrap();
        assert!((rp - rm).abs() < 1e-10);
    }

    #[test]
    fn invalid_parameters_rejected() {
        let a = Matrix::zeros(Field::Complex, 4, 4);
        assert!(solve_mde(&a, c(0.0, 0.0), c(0.0, -1.0), 1e-12).is_err());
        assert!(in_bulk(&a, c(0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn stieltjes_mass_one() {
        let a = Matrix::identity(Field::Complex, 5);
        let eta = 1e6;
        let sol = solve_mde(&a, c(0.3, 0.0), c(0.0, eta), 1e-13).unwrap();
        let prod = sol.m * c(0.0, eta);
        assert!((prod - c(-1.0, 0.0)).norm() < 1e-6, "m·iη = {prod}");
    }

    #[test]
    fn bulk_disk_for_zero_shift() {
        let a = Matrix::zeros(Field::Complex, 4, 4);
        let q = in_bulk(&a, c(0.0, 0.0), 0.5).unwrap();
        assert!((q.value - 4.0).abs() < 1e-12);
        assert!(q.in_bulk);
        // boundary |z|² = 1 − τ²
        let r = (1.0f64 - 0.25).sqrt();
        assert!(in_bulk(&a, c(r - 1e-3, 0.0), 0.5).unwrap().in_bulk);
        assert!(!in_bulk(&a, c(r + 1e-3, 0.0), 0.5).unwrap().in_bulk);
        // τ ≥ 1 never in bulk
        assert!(!in_bulk(&a, c(0.0, 0.0), 1.1).unwrap().in_bulk);
    }

    #[test]
    fn scdos_integrates_to_one() {
        let a = Matrix::identity(Field::Complex, 3);
        let prob = MdeProblem::new(&a, c(0.0, 0.0)).unwrap();
        // symmetric density: twice the [0, upper] mass
        let upper = 3.5;
        let steps = 2800; // √-edge of the density needs a fine trapezoid step
        let h = upper / steps as f64;
        let mut total = 0.0;
        let mut prev = scdos_at(&prob, 0.0, ETA0).unwrap();
        for i in 1..=steps {
            let cur = scdos_at(&prob, i as f64 * h, ETA0).unwrap();
            total += 0.5 * (prev + cur) * h;
            prev = cur;
        }
        assert!((2.0 * total - 1.0).abs() < 1e-4, "mass {}", 2.0 * total);
    }

    #[test]
    fn overlap_profile_zero_shift_is_real_and_monotone() {
        let a = Matrix::zeros(Field::Complex, 16, 16);
        let prof = overlap_profile(&a, c(0.0, 0.0), 4).unwrap();
        for win in prof.gamma.windows(2) {
            assert!(win[0] < win[1]);
        }
        for qi in &prof.q {
            assert!(qi.im.abs() <= 1e-8, "q not real: {qi}");
        }
    }
}
