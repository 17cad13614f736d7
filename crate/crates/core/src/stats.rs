//! Deterministic per-matrix statistics: eigenvector overlaps, contour
//! projectors, the log-determinant identity for linear eigenvalue statistics,
//! variational condition-number probes, Weyl/interlacing reports, phase
//! floors, and the genuinely-complex-vector lower bound.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitization::minor;
use crate::linalg::{self, SpectralDecomposition};
use crate::matrix::{vec_dot, vec_norm, Field, Matrix};

/// O_ij = (l_i† l_j)(r_j† r_i); the diagonal is real and ≥ 1 and √O_ii is the
/// condition number of σ_i.
#[derive(Debug, Clone)]
pub struct OverlapMatrix {
    pub o: Matrix,
}

impl OverlapMatrix {
    pub fn diag(&self) -> Vec<f64> {
        (0..self.o.rows).map(|i| self.o.get(i, i).re).collect()
    }
}

pub fn overlaps(d: &SpectralDecomposition) -> OverlapMatrix {
    let n = d.sigma.len();
    let lcols: Vec<Vec<Complex64>> = (0..n).map(|j| d.left.column(j)).collect();
    let rcols: Vec<Vec<Complex64>> = (0..n).map(|j| d.right.column(j)).collect();
    let o = Matrix::from_fn(Field::Complex, n, n, |i, j| {
        vec_dot(&lcols[i], &lcols[j]) * vec_dot(&rcols[j], &rcols[i])
    });
    OverlapMatrix { o }
}

/// −(1/2πi)·∮_{|w−z0|=r} (B−w)^{-1} dw by the trapezoid rule; equals the sum
/// of spectral dyads r_i l_i† over the enclosed eigenvalues.
pub fn contour_projector(b: &Matrix, z0: Complex64, r: f64, npts: usize) -> Result<Matrix> {
    if r <= 0.0 || npts == 0 {
        return Err(Error::InvalidParameter("contour needs r > 0 and npts > 0".into()));
    }
    let sigma = linalg::complex_eigenvalues(b)?;
    let limit = 0.05 * r;
    for s in &sigma {
        let dist = ((s - z0).norm() - r).abs();
        if dist < limit {
            return Err(Error::ContourTooClose { dist, limit });
        }
    }
    let n = b.rows;
    let mut acc = Matrix::zeros(Field::Complex, n, n);
    for j in 0..npts {
        let th = 2.0 * std::f64::consts::PI * j as f64 / npts as f64;
        let e = Complex64::new(th.cos(), th.sin());
        let w = z0 + e * r;
        let mut shifted = b.clone();
        shifted.field = Field::Complex;
        for i in 0..n {
            let v = shifted.get(i, i) - w;
            shifted.set(i, i, v);
        }
        let inv = linalg::linear_solve(&shifted, &Matrix::identity(Field::Complex, n), 1e-12)?;
        let scaled = inv.scale(e * (-r / npts as f64));
        acc = acc.add(&scaled)?;
    }
    Ok(acc)
}

/// Recommended node count for a circle of radius r around part of B's
/// spectrum: exponential quadrature convergence with a stiffness floor.
pub fn contour_npts(b_norm: f64, r: f64) -> usize {
    64usize.max(16 * (b_norm / r).ceil() as usize)
}

/// |σ_i − z|/λ_1(B−z) at z = σ_i + radius·(±1, ±i), averaged over the four
/// compass directions, for each radius; converges to √O_ii as radius → 0.
pub fn variational_condition(b: &Matrix, i: usize, radii: &[f64]) -> Result<Vec<f64>> {
    let sigma = linalg::complex_eigenvalues(b)?;
    if i >= sigma.len() {
        return Err(Error::IndexOutOfRange(format!("eigenvalue {i} of {}", sigma.len())));
    }
    let opnorm = linalg::operator_norm(b);
    let mut min_gap = f64::INFINITY;
    for a in 0..sigma.len() {
        for c in a + 1..sigma.len() {
            min_gap = min_gap.min((sigma[a] - sigma[c]).norm());
        }
    }
    let threshold = linalg::DEGENERACY_REL_GAP * opnorm;
    if sigma.len() > 1 && min_gap < threshold {
        return Err(Error::DegenerateSpectrum { gap: min_gap, threshold });
    }
    let s = sigma[i];
    let dirs = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];
    let n = b.rows;
    let mut out = Vec::with_capacity(radii.len());
    for &rad in radii {
        let mut acc = 0.0;
        for d in dirs {
            let z = s + d * rad;
            let mut shifted = b.clone();
            shifted.field = Field::Complex;
            for t in 0..n {
                let v = shifted.get(t, t) - z;
                shifted.set(t, t, v);
            }
            let lam1 = linalg::singular_values(&shifted)?[0];
            acc += rad / lam1;
        }
        out.push(acc / 4.0);
    }
    Ok(out)
}

// ── log-determinant identity for linear eigenvalue statistics ──────────────

/// Radial bump: f0(u) = exp(1 − 1/(1−|u|²)) for |u| < 1, else 0.
pub fn bump(u: Complex64) -> f64 {
    let t = u.norm_sqr();
    if t < 1.0 {
        (1.0 - 1.0 / (1.0 - t)).exp()
    } else {
        0.0
    }
}

/// Laplacian of the bump: with t = |u|² and g = f0, Δf0 = 4(t·g″(t) + g′(t))
/// where g′ = −g/(1−t)² and g″ = g·(1/(1−t)⁴ − 2/(1−t)³).
pub fn bump_laplacian(u: Complex64) -> f64 {
    let t = u.norm_sqr();
    if t >= 0.999_999_9 {
        return 0.0;
    }
    let g = (1.0 - 1.0 / (1.0 - t)).exp();
    let om = 1.0 - t;
    let gp = -g / (om * om);
    let gpp = g * (1.0 / (om * om * om * om) - 2.0 / (om * om * om));
    4.0 * (t * gpp + gp)
}

#[derive(Debug, Clone)]
pub struct GirkoReport {
    /// Σ_i f(σ_i).
    pub lhs: f64,
    /// (1/2π)·Σ_grid Δf(z_g)·Σ_i log λ_i^{z_g}·cell_area.
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub grid_n: usize,
}

/// Validate the log-determinant representation of Σf(σ_i) for the bump
/// f = f0((·−z0)/r) on a grid_n×grid_n midpoint grid covering the support.
pub fn girko_residual(b: &Matrix, z0: Complex64, r: f64, grid_n: usize) -> Result<GirkoReport> {
    if r <= 0.0 || grid_n < 2 {
        return Err(Error::InvalidParameter("bump needs r > 0 and grid_n ≥ 2".into()));
    }
    let sigma = linalg::complex_eigenvalues(b)?;
    let lhs: f64 = sigma.iter().map(|s| bump((s - z0) / r)).sum();

    let n = b.rows;
    let h = 2.0 * r / grid_n as f64;
    let cell = h * h;
    let mut rhs = 0.0;
    for gi in 0..grid_n {
        let x = z0.re - r + (gi as f64 + 0.5) * h;
        for gj in 0..grid_n {
            let y = z0.im - r + (gj as f64 + 0.5) * h;
            let zg = Complex64::new(x, y);
            let lap = bump_laplacian((zg - z0) / r) / (r * r);
            if lap == 0.0 {
                continue;
            }
            let mut shifted = b.clone();
            shifted.field = Field::Complex;
            for t in 0..n {
                let v = shifted.get(t, t) - zg;
                shifted.set(t, t, v);
            }
            let sv = linalg::singular_values(&shifted)?;
            if sv[0] < 1e-14 {
                return Err(Error::GridUnderflow(sv[0]));
            }
            let logdet: f64 = sv.iter().map(|l| l.ln()).sum();
            rhs += lap * logdet;
        }
    }
    rhs *= cell / (2.0 * std::f64::consts::PI);
    let abs_err = (lhs - rhs).abs();
    let rel_err = abs_err / lhs.abs().max(f64::MIN_POSITIVE);
    Ok(GirkoReport { lhs, rhs, abs_err, rel_err, grid_n })
}

// ── ordering inequalities ──────────────────────────────────────────────────

#[derive(Debug, Clone)]
pub struct MarginReport {
    pub ok: bool,
    /// Per-k log-margins; non-negative when the inequality holds.
    pub margins: Vec<f64>,
}

/// Π_{i≤k} |σ_i − z| ≥ Π_{i≤k} λ_i^z for every k, with σ sorted by |σ_i − z|
/// ascending; margins are differences of log-products.
pub fn weyl_report(b: &Matrix, z: Complex64) -> Result<MarginReport> {
    let sigma = linalg::complex_eigenvalues(b)?;
    let mut dist: Vec<f64> = sigma.iter().map(|s| (s - z).norm()).collect();
    dist.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut shifted = b.clone();
    shifted.field = Field::Complex;
    for t in 0..b.rows {
        let v = shifted.get(t, t) - z;
        shifted.set(t, t, v);
    }
    let lam = linalg::singular_values(&shifted)?;
    let mut margins = Vec::with_capacity(b.rows);
    let mut ls = 0.0f64;
    let mut ll = 0.0f64;
    for k in 0..b.rows {
        ls += dist[k].ln();
        ll += lam[k].ln();
        let m = if ls == f64::NEG_INFINITY && ll == f64::NEG_INFINITY {
            0.0 // both products vanish
        } else {
            ls - ll
        };
        margins.push(m);
    }
    let ok = margins.iter().all(|&m| m >= -1e-9);
    Ok(MarginReport { ok, margins })
}

/// Cauchy interlacing of the row-minor chain: λ_k^{(I∪{i})} ≤ λ_k^{(I)} ≤
/// λ_{k+1}^{(I∪{i})} with the spectra padded by their structural zeros.
pub fn interlacing_report(b: &Matrix, idx: &[usize], i: usize) -> Result<MarginReport> {
    if idx.contains(&i) {
        return Err(Error::IndexOutOfRange(format!("row {i} already removed")));
    }
    if i >= b.rows {
        return Err(Error::IndexOutOfRange(format!("row {i} of {}", b.rows)));
    }
    let outer = minor(b, idx)?;
    let mut with_i = idx.to_vec();
    with_i.push(i);
    let inner = minor(b, &with_i)?;
    let mut lam_outer = vec![0.0; idx.len()];
    lam_outer.extend(linalg::singular_values(&outer)?);
    let mut lam_inner = vec![0.0; with_i.len()];
    lam_inner.extend(linalg::singular_values(&inner)?);
    let n = b.rows;
    let mut margins = Vec::new();
    for k in 0..n {
        margins.push(lam_outer[k] - lam_inner[k]); // ≥ 0
        if k + 1 < n {
            margins.push(lam_inner[k + 1] - lam_outer[k]); // ≥ 0
        }
    }
    let tol = 1e-10 * (1.0 + linalg::operator_norm(b));
    let ok = margins.iter().all(|&m| m >= -tol);
    Ok(MarginReport { ok, margins })
}

// ── phase geometry ─────────────────────────────────────────────────────────

#[derive(Debug, Clone)]
pub struct PhaseFloor {
    pub floor: f64,
    pub theta_star: f64,
}

/// min_θ ‖Re[e^{iθ}v]‖ as the smallest singular value of the N×2 real matrix
/// [Re v | Im v], with the minimizing phase from its right singular vector.
pub fn phase_floor(v: &[Complex64]) -> Result<PhaseFloor> {
    let nn = vec_norm(v);
    if (nn - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput(format!("phase_floor expects a unit vector, ‖v‖ = {nn}")));
    }
    let m = Matrix::from_fn(Field::Real, v.len(), 2, |i, j| {
        Complex64::new(if j == 0 { v[i].re } else { v[i].im }, 0.0)
    });
    let sv = linalg::svd(&m, 1e-12)?;
    let floor = sv.values[0];
    // the kernel of a real matrix is real up to a common phase
    let (r0, r1) = (sv.right_v.get(0, 0), sv.right_v.get(1, 0));
    let lead = if r0.norm() >= r1.norm() { r0 } else { r1 };
    let phase = lead / lead.norm();
    let x = (r0 / phase).re;
    let y = (r1 / phase).re;
    // Re[e^{iθ}v] = (Re v)·cosθ − (Im v)·sinθ, so the minimizing direction
    // (cosθ, −sinθ) is the smallest right singular vector.
    let theta_star = (-y).atan2(x);
    Ok(PhaseFloor { floor, theta_star })
}

#[derive(Debug, Clone)]
pub struct RealShiftReport {
    /// min_θ ‖Re[e^{iθ}v]‖².
    pub lhs: f64,
    /// (1/5)·λ_1(B)²·‖J^{(1)}Y w‖²/(‖J^{(1)}Y‖+‖B‖)⁴.
    pub rhs: f64,
    pub ok: bool,
}

/// Quantitative genuine-complexity of the null vector of J^{(1)}(Y + iB) for
/// real Y, B with B non-singular.
pub fn real_shift_bound_check(y: &Matrix, b_im: &Matrix) -> Result<RealShiftReport> {
    let lam1_b = linalg::singular_values(b_im)?[0];
    if lam1_b <= 1e-8 {
        return Err(Error::InvalidParameter(format!(
            "imaginary part must be non-singular (λ₁ = {lam1_b:.3e})"
        )));
    }
    let ymat = y.clone();
    let complex_sum = Matrix::from_fn(Field::Complex, y.rows, y.cols, |i, j| {
        ymat.get(i, j) + Complex64::new(0.0, 1.0) * b_im.get(i, j)
    });
    let j1_sum = minor(&complex_sum, &[0])?;
    let v = linalg::kernel_vector(&j1_sum, 1e-10)?;
    let j1_b = minor(b_im, &[0])?;
    let w = linalg::kernel_vector(&j1_b, 1e-10)?;
    let j1_y = minor(y, &[0])?;
    let yw = j1_y.matvec(&w)?;
    let denom = linalg::operator_norm(&j1_y) + linalg::operator_norm(b_im);
    let rhs = 0.2 * lam1_b * lam1_b * vec_norm(&yw).powi(2) / denom.powi(4);
    let lhs = phase_floor(&v)?.floor.powi(2);
    Ok(RealShiftReport { lhs, rhs, ok: lhs >= rhs - 1e-12 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_matrix, Dist, EnsembleSpec};
    use crate::rng::SeedStream;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_complex(n: usize, seed: u64) -> Matrix {
        sample_matrix(&EnsembleSpec::new(Field::Complex, Dist::Gaussian, n), &mut SeedStream::new(seed, 0))
    }

    #[test]
    fn triangular_two_by_two_overlaps() {
        let mut b = Matrix::from_real_rows(&[vec![1.0, 3.0], vec![0.0, 2.0]]);
        b.field = Field::Complex;
        let d = linalg::complex_eig(&b, 1e-12).unwrap();
        let o = overlaps(&d);
        assert!((o.o.get(0, 0) - c(10.0, 0.0)).norm() < 1e-9, "O_11 = {}", o.o.get(0, 0));
        assert!((o.o.get(1, 1) - c(10.0, 0.0)).norm() < 1e-9);
        assert!((o.o.get(0, 1) - c(-9.0, 0.0)).norm() < 1e-9);
        assert!((o.o.get(1, 0) - c(-9.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn normal_matrix_overlaps_are_identity() {
        let b = Matrix::from_fn(Field::Complex, 3, 3, |i, j| {
            if i == j {
                c(i as f64, 1.0 + i as f64)
            } else {
                c(0.0, 0.0)
            }
        });
        let d = linalg::complex_eig(&b, 1e-12).unwrap();
        let o = overlaps(&d);
        for i in 0..3 {
            assert!((o.o.get(i, i) - c(1.0, 0.0)).norm() < 1e-10);
            for j in 0..3 {
                if i != j {
                    assert!(o.o.get(i, j).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn overlaps_scale_invariant() {
        let b = random_complex(5, 8);
        let d1 = linalg::complex_eig(&b, 1e-12).unwrap();
        let d2 = linalg::complex_eig(&b.scale(c(-2.5, 0.7)), 1e-12).unwrap();
        let o1 = overlaps(&d1);
        let o2 = overlaps(&d2);
        let mut d1s = o1.diag();
        let mut d2s = o2.diag();
        d1s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        d2s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in d1s.iter().zip(&d2s) {
            assert!((a - b).abs() < 1e-10 * a.max(1.0));
        }
    }

    #[test]
    fn projector_isolates_normal_eigenvalue() {
        let b = Matrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]]);
        let p = contour_projector(&b, c(1.0, 0.0), 0.4, 64).unwrap();
        let e11 = Matrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        assert!(p.sub(&e11).unwrap().max_abs() < 1e-8);
        // empty contour
        let p0 = contour_projector(&b, c(5.0, 0.0), 0.4, 64).unwrap();
        assert!(p0.max_abs() < 1e-8);
    }

    #[test]
    fn projector_norm_squared_matches_overlap() {
        let b = random_complex(8, 17);
        let d = linalg::complex_eig(&b, 1e-12).unwrap();
        let o = overlaps(&d);
        // find an eigenvalue whose distance to the rest exceeds a workable radius
        let mut target = None;
        for i in 0..8 {
            let gap = (0..8)
                .filter(|&j| j != i)
                .map(|j| (d.sigma[i] - d.sigma[j]).norm())
                .fold(f64::INFINITY, f64::min);
            if gap > 0.25 {
                target = Some((i, 0.1));
                break;
            }
        }
        let (i, r) = target.expect("an isolated eigenvalue in the test draw");
        let npts = contour_npts(linalg::operator_norm(&b), r);
        let p = contour_projector(&b, d.sigma[i], r, npts).unwrap();
        let pn = linalg::operator_norm(&p);
        let oii = o.o.get(i, i).re;
        assert!((pn * pn - oii).abs() < 1e-6 * oii, "‖P‖² = {} vs O_ii = {}", pn * pn, oii);
    }

    #[test]
    fn projector_contour_too_close_rejected() {
        let b = Matrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]]);
        assert!(matches!(
            contour_projector(&b, c(0.0, 0.0), 1.0, 64),
            Err(Error::ContourTooClose { .. })
        ));
    }

    #[test]
    fn variational_ratios_approach_condition_number() {
        let mut b = Matrix::from_real_rows(&[vec![1.0, 3.0], vec![0.0, 2.0]]);
        b.field = Field::Complex;
        let ratios = variational_condition(&b, 0, &[1e-3, 1e-4, 1e-5]).unwrap();
        let target = 10f64.sqrt();
        assert!((ratios[2] - target).abs() / target < 0.01, "ratio {} vs {target}", ratios[2]);
        // normal input → ratios → 1
        let d = Matrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]]);
        let rn = variational_condition(&d, 0, &[1e-4]).unwrap();
        assert!((rn[0] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn bump_laplacian_matches_finite_differences() {
        let h = 1e-4;
        for &(x, y) in &[(0.2, 0.1), (-0.5, 0.3), (0.0, 0.0), (0.6, -0.6)] {
            let u = c(x, y);
            let lap = bump_laplacian(u);
            let fd = (bump(c(x + h, y)) + bump(c(x - h, y)) + bump(c(x, y + h)) + bump(c(x, y - h))
                - 4.0 * bump(u))
                / (h * h);
            assert!((lap - fd).abs() < 1e-5 * (1.0 + lap.abs()), "at {u}: {lap} vs {fd}");
        }
    }

    #[test]
    fn weyl_inequality_on_random_draws() {
        for seed in 0..20 {
            let b = random_complex(8, 1000 + seed);
            let rep = weyl_report(&b, c(0.3, -0.2)).unwrap();
            assert!(rep.ok, "violation at seed {seed}: {:?}", rep.margins);
        }
    }

    #[test]
    fn weyl_equality_for_normal_input() {
        let b = Matrix::from_fn(Field::Complex, 3, 3, |i, j| {
            if i == j {
                c(1.0 + i as f64, -(i as f64))
            } else {
                c(0.0, 0.0)
            }
        });
        let rep = weyl_report(&b, c(0.1, 0.2)).unwrap();
        for m in &rep.margins {
            assert!(m.abs() <= 1e-10, "margin {m}");
        }
    }

    #[test]
    fn weyl_degenerate_products() {
        let b = Matrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        let rep = weyl_report(&b, c(0.0, 0.0)).unwrap();
        assert!(rep.ok);
        assert_eq!(rep.margins[0], 0.0);
    }

    #[test]
    fn interlacing_holds_on_random_chain() {
        for n in [4usize, 8, 16] {
            let b = random_complex(n, 300 + n as u64);
            let rep = interlacing_report(&b, &[], 0).unwrap();
            assert!(rep.ok);
            let rep2 = interlacing_report(&b, &[0], 1).unwrap();
            assert!(rep2.ok);
        }
        let id = Matrix::identity(Field::Real, 4);
        assert!(interlacing_report(&id, &[], 2).unwrap().ok);
        assert!(interlacing_report(&id, &[1], 1).is_err());
    }

    #[test]
    fn phase_floor_closed_forms() {
        // real vector → floor 0
        let v: Vec<Complex64> = vec![c(0.6, 0.0), c(0.8, 0.0)];
        let pf = phase_floor(&v).unwrap();
        assert!(pf.floor < 1e-12);
        // (1, i)/√2 → floor 1/√2
        let s = 0.5f64.sqrt();
        let v = vec![c(s, 0.0), c(0.0, s)];
        let pf = phase_floor(&v).unwrap();
        assert!((pf.floor - s).abs() < 1e-12);
    }

    #[test]
    fn phase_floor_matches_brute_force() {
        for seed in 0..10u64 {
            let mut stream = SeedStream::new(40 + seed, 0);
            let mut v: Vec<Complex64> = (0..6)
                .map(|_| {
                    let (a, b) = stream.next_gauss_pair();
                    c(a, b)
                })
                .collect();
            let nn = vec_norm(&v);
            for x in &mut v {
                *x /= nn;
            }
            let pf = phase_floor(&v).unwrap();
            let mut brute = f64::INFINITY;
            for t in 0..10_000 {
                let th = 2.0 * std::f64::consts::PI * t as f64 / 10_000.0;
                let norm2: f64 = v
                    .iter()
                    .map(|z| (z * c(th.cos(), th.sin())).re.powi(2))
                    .sum();
                brute = brute.min(norm2.sqrt());
            }
            assert!((pf.floor - brute).abs() < 1e-6, "seed {seed}: {} vs {brute}", pf.floor);
            // theta_star attains the floor
            let at: f64 = v
                .iter()
                .map(|z| (z * c(pf.theta_star.cos(), pf.theta_star.sin())).re.powi(2))
                .sum::<f64>()
                .sqrt();
            assert!((at - pf.floor).abs() < 1e-10);
        }
    }

    #[test]
    fn real_shift_bound_zero_y() {
        let n = 6;
        let b_im = Matrix::identity(Field::Real, n);
        let y = Matrix::zeros(Field::Real, n, n);
        // Y = 0 makes J^{(1)}(Y+iB) = i·J^{(1)}B rank-deficient only in the
        // kernel direction; right side vanishes.
        let rep = real_shift_bound_check(&y, &b_im).unwrap();
        assert_eq!(rep.rhs, 0.0);
        assert!(rep.ok);
    }

    #[test]
    fn real_shift_bound_random_sweep() {
        for seed in 0..25u64 {
            for n in [8usize, 16] {
                let y = sample_matrix(
                    &EnsembleSpec::new(Field::Real, Dist::Gaussian, n),
                    &mut SeedStream::new(500 + seed, 0),
                );
                let b_im = sample_matrix(
                    &EnsembleSpec::new(Field::Real, Dist::Gaussian, n),
                    &mut SeedStream::new(900 + seed, 1),
                );
                if linalg::singular_values(&b_im).unwrap()[0] <= 1e-8 {
                    continue;
                }
                let rep = real_shift_bound_check(&y, &b_im).unwrap();
                assert!(rep.ok, "violation at seed {seed}, n {n}: lhs {} rhs {}", rep.lhs, rep.rhs);
                assert!(rep.rhs > 0.0);
            }
        }
    }

    #[test]
    fn girko_identity_small_draw() {
        let b = random_complex(4, 7);
        let rep = girko_residual(&b, c(0.0, 0.0), 0.5, 80).unwrap();
        assert!(rep.rel_err <= 1e-2, "rel_err {}", rep.rel_err);
        // bump far from the spectrum → both sides ≈ 0
        let far = girko_residual(&b, c(40.0, 0.0), 0.5, 80).unwrap();
        assert!(far.lhs == 0.0 && far.abs_err <= 1e-3);
    }
}
