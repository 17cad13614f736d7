//! Deterministic property suite: exact identities of the linear-algebra,
//! hermitization, MDE, and spectral-statistics layers at fixed small sizes.
//! Every check is seeded, so the suite either always passes or always fails
//! for a given build.

use num_complex::Complex64;

use crate::ensembles::{sample_matrix, Dist, EnsembleSpec};
use crate::hermitization::{self, q_spectral_matrix, schur_minor_report};
use crate::linalg;
use crate::matrix::{vec_norm, Field, Matrix};
use crate::mde;
use crate::rng::SeedStream;
use crate::stats;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    /// Worst observed residual/margin and the tolerance it was held to.
    pub detail: String,
}

fn check(name: &'static str, worst: f64, tol: f64) -> CheckResult {
    CheckResult {
        name,
        pass: worst <= tol,
        detail: format!("worst {worst:.3e} (tol {tol:.1e})"),
    }
}

fn draw(field: Field, n: usize, seed: u64) -> Matrix {
    sample_matrix(&EnsembleSpec::new(field, Dist::Gaussian, n), &mut SeedStream::new(seed, 0))
}

/// Haar-distributed unitary via Gram–Schmidt on a Gaussian matrix.
fn haar_unitary(n: usize, seed: u64) -> Matrix {
    let g = draw(Field::Complex, n, seed);
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| g.column(j)).collect();
    for j in 0..n {
        for i in 0..j {
            let proj = crate::matrix::vec_dot(&cols[i], &cols[j]);
            for t in 0..n {
                let v = cols[i][t];
                cols[j][t] -= proj * v;
            }
        }
        let nn = vec_norm(&cols[j]);
        for t in 0..n {
            cols[j][t] /= nn;
        }
    }
    Matrix::from_fn(Field::Complex, n, n, |i, j| cols[j][i])
}

fn biorthogonality() -> CheckResult {
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let b = draw(Field::Complex, 16, 100 + seed);
        match linalg::complex_eig(&b, 1e-12) {
            Ok(d) => {
                let gram = d.left.adjoint().matmul(&d.right).unwrap();
                let dev = gram.sub(&Matrix::identity(Field::Complex, 16)).unwrap().max_abs();
                worst = worst.max(dev).max(d.residual);
            }
            Err(_) => worst = f64::INFINITY,
        }
    }
    check("bi-orthogonality l_i†r_j = δ_ij", worst, 1e-8)
}

fn svd_hermitization_agreement() -> CheckResult {
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let b = draw(Field::Complex, 12, 200 + seed);
        let z = Complex64::new(0.2, -0.1);
        let sys = match hermitization::singular_system(&b, z) {
            Ok(s) => s,
            Err(_) => return check("SVD ↔ hermitization eigenvalues", f64::INFINITY, 1e-12),
        };
        let h = hermitization::hermitize(&b, z);
        let eig = match linalg::hermitian_eig(&h.h, 1e-12) {
            Ok(e) => e,
            Err(_) => return check("SVD ↔ hermitization eigenvalues", f64::INFINITY, 1e-12),
        };
        for (i, &lam) in sys.values.iter().enumerate() {
            // eigenvalues come ascending: −λ_k … −λ_1, λ_1 … λ_k
            let pos = eig.values[12 + i];
            let neg = eig.values[11 - i];
            worst = worst.max((pos - lam).abs()).max((neg + lam).abs());
        }
    }
    check("SVD ↔ hermitization eigenvalues", worst, 1e-12)
}

fn schur_minor_identity() -> CheckResult {
    let mut worst = 0.0f64;
    for seed in 0..50u64 {
        let field = if seed % 2 == 0 { Field::Complex } else { Field::Real };
        let b = draw(field, 6, 300 + seed);
        let j = (seed % 3) as usize;
        let eta = [0.5, 0.1, 0.02][(seed % 5 % 3) as usize];
        match schur_minor_report(&b, j, eta) {
            Ok(rep) => worst = worst.max(rep.residual),
            Err(_) => worst = f64::INFINITY,
        }
    }
    check("Schur minor identity (50 × 6×6)", worst, 1e-9)
}

fn interlacing_and_weyl() -> CheckResult {
    let mut violations = 0usize;
    for seed in 0..200u64 {
        let field = if seed % 2 == 0 { Field::Complex } else { Field::Real };
        let b = draw(field, 8, 400 + seed);
        let ok_i = stats::interlacing_report(&b, &[], (seed % 8) as usize)
            .map(|r| r.ok)
            .unwrap_or(false);
        let z = Complex64::new(0.3, 0.1 * (seed % 5) as f64);
        let ok_w = stats::weyl_report(&b, z).map(|r| r.ok).unwrap_or(false);
        if !(ok_i && ok_w) {
            violations += 1;
        }
    }
    check("interlacing + Weyl (200 draws)", violations as f64, 0.0)
}

fn contour_projector_dyads() -> CheckResult {
    let mut worst = 0.0f64;
    let mut tested = 0usize;
    for seed in 0..40u64 {
        if tested >= 10 {
            break;
        }
        let b = draw(Field::Complex, 8, 500 + seed);
        let d = match linalg::complex_eig(&b, 1e-12) {
            Ok(d) => d,
            Err(_) => continue,
        };
        // most isolated eigenvalue
        let (mut best, mut gap) = (0usize, 0.0f64);
        for i in 0..8 {
            let g = (0..8)
                .filter(|&j| j != i)
                .map(|j| (d.sigma[i] - d.sigma[j]).norm())
                .fold(f64::INFINITY, f64::min);
            if g > gap {
                gap = g;
                best = i;
            }
        }
        if gap < 0.15 {
            continue;
        }
        let r = gap / 3.0;
        let npts = stats::contour_npts(linalg::operator_norm(&b), r);
        let p = match stats::contour_projector(&b, d.sigma[best], r, npts) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let rc = d.right.column(best);
        let lc = d.left.column(best);
        let dyad = Matrix::from_fn(Field::Complex, 8, 8, |i, j| rc[i] * lc[j].conj());
        worst = worst.max(p.sub(&dyad).unwrap().max_abs());
        tested += 1;
    }
    if tested < 10 {
        return CheckResult {
            name: "contour projector = spectral dyad",
            pass: false,
            detail: format!("only {tested}/10 usable draws"),
        };
    }
    check("contour projector = spectral dyad", worst, 1e-6)
}

fn realification_homomorphism() -> CheckResult {
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let a = draw(Field::Complex, 6, 600 + seed);
        let b = draw(Field::Complex, 6, 700 + seed);
        let lhs = linalg::realify(&a.matmul(&b).unwrap());
        let rhs = linalg::realify(&a).matmul(&linalg::realify(&b)).unwrap();
        worst = worst.max(lhs.sub(&rhs).unwrap().max_abs());
        let sum = linalg::realify(&a.add(&b).unwrap());
        let sum2 = linalg::realify(&a).add(&linalg::realify(&b)).unwrap();
        worst = worst.max(sum.sub(&sum2).unwrap().max_abs());
        let adj = linalg::realify(&a.adjoint());
        let tr = linalg::realify(&a).transpose();
        worst = worst.max(adj.sub(&tr).unwrap().max_abs());
    }
    check("realification homomorphism", worst, 1e-13)
}

fn q_matrix_bounds() -> CheckResult {
    let mut worst = 0.0f64; // worst violation margin, 0 when all hold
    for seed in 0..100u64 {
        let n = 8;
        let k = 1 + (seed % 3) as usize;
        let u = haar_unitary(n, 800 + seed);
        let (_q, m) = match q_spectral_matrix(&u, k) {
            Ok(r) => r,
            Err(_) => return check("spectral Q-matrix bounds (100 Haar draws)", f64::INFINITY, 1e-8),
        };
        // m ascending, length 2k
        worst = worst.max(m[2 * k - 1] - 1.0);
        worst = worst.max(1.0 / ((k + 1) as f64).sqrt() - m[k]);
        let frob: f64 = m.iter().map(|x| x * x).sum();
        worst = worst.max((frob - k as f64).abs());
    }
    check("spectral Q-matrix bounds (100 Haar draws)", worst, 1e-8)
}

fn real_shift_lower_bound() -> CheckResult {
    let mut violations = 0usize;
    let mut tested = 0usize;
    let mut seed = 0u64;
    while tested < 100 && seed < 300 {
        let y = draw(Field::Real, 8, 900 + seed);
        let b_im = draw(Field::Real, 8, 1200 + seed);
        seed += 1;
        match stats::real_shift_bound_check(&y, &b_im) {
            Ok(rep) => {
                tested += 1;
                if !rep.ok {
                    violations += 1;
                }
            }
            Err(_) => continue, // near-singular imaginary part: precondition fails
        }
    }
    if tested < 100 {
        return CheckResult {
            name: "genuinely-complex lower bound (100 draws)",
            pass: false,
            detail: format!("only {tested}/100 usable draws"),
        };
    }
    check("genuinely-complex lower bound (100 draws)", violations as f64, 0.0)
}

fn phase_floor_brute_force() -> CheckResult {
    let mut worst = 0.0f64;
    for seed in 0..100u64 {
        let mut stream = SeedStream::new(1500 + seed, 0);
        let mut v: Vec<Complex64> = (0..6)
            .map(|_| {
                let (a, b) = stream.next_gauss_pair();
                Complex64::new(a, b)
            })
            .collect();
        let nn = vec_norm(&v);
        for x in &mut v {
            *x /= nn;
        }
        let pf = match stats::phase_floor(&v) {
            Ok(p) => p,
            Err(_) => return check("phase floor SVD vs brute force", f64::INFINITY, 1e-6),
        };
        let mut brute = f64::INFINITY;
        for t in 0..20_000 {
            let th = 2.0 * std::f64::consts::PI * t as f64 / 20_000.0;
            let e = Complex64::new(th.cos(), th.sin());
            let norm2: f64 = v.iter().map(|z| (z * e).re.powi(2)).sum();
            brute = brute.min(norm2.sqrt());
        }
        worst = worst.max((pf.floor - brute).abs());
    }
    check("phase floor SVD vs brute force", worst, 1e-6)
}

fn mde_semicircle() -> CheckResult {
    let a = Matrix::zeros(Field::Complex, 32, 32);
    let z = Complex64::new(0.0, 0.0);
    match mde::scdos(&a, z, 0.0, mde::ETA0) {
        Ok(r) => check("MDE semicircle ρ(0) = 1/π", (r - 1.0 / std::f64::consts::PI).abs(), 1e-5),
        Err(_) => check("MDE semicircle ρ(0) = 1/π", f64::INFINITY, 1e-5),
    }
}

fn mde_fixed_point_residual() -> CheckResult {
    let mut worst = 0.0f64;
    for (seed, n) in [(0u64, 16usize), (1, 32)] {
        let a = draw(Field::Complex, n, 1600 + seed);
        for &eta in &[1.0, 0.1, 1e-3] {
            match mde::solve_mde(&a, Complex64::new(0.3, 0.1), Complex64::new(0.0, eta), 1e-13) {
                Ok(sol) => worst = worst.max(sol.residual),
                Err(_) => worst = f64::INFINITY,
            }
        }
    }
    check("MDE fixed-point residual", worst, 1e-12)
}

/// Run every deterministic identity check; each entry reports pass/fail with
/// its worst residual.
pub fn run_verify() -> Vec<CheckResult> {
    vec![
        biorthogonality(),
        svd_hermitization_agreement(),
        schur_minor_identity(),
        interlacing_and_weyl(),
        contour_projector_dyads(),
        realification_homomorphism(),
        q_matrix_bounds(),
        real_shift_lower_bound(),
        phase_floor_brute_force(),
        mde_semicircle(),
        mde_fixed_point_residual(),
    ]
}

pub fn all_pass(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_suite_passes() {
        let results = run_verify();
        for r in &results {
            assert!(r.pass, "{}: {}", r.name, r.detail);
        }
        assert!(all_pass(&results));
    }
}
