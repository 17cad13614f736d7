//! The 2N×2N doubled Hermitian form of B−z, its resolvent traces, row-minor
//! operators, the Schur-complement minor identity, and the realified
//! projector-of-unitary singular value bounds.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, SingularSystem};
use crate::matrix::{vec_dot, vec_norm, Field, Matrix};

/// H_z = [[0, B−z], [(B−z)†, 0]], Hermitian with zero diagonal blocks;
/// its spectrum is ± the singular values of B−z.
#[derive(Debug, Clone)]
pub struct Hermitization {
    pub base: Matrix,
    pub z: Complex64,
    pub h: Matrix,
}

pub fn hermitize(b: &Matrix, z: Complex64) -> Hermitization {
    let shifted = shift(b, z);
    Hermitization { base: b.clone(), z, h: linalg::doubled_hermitian(&shifted) }
}

fn shift(b: &Matrix, z: Complex64) -> Matrix {
    let mut out = b.clone();
    if z.im != 0.0 {
        out.field = Field::Complex;
    }
    for i in 0..b.rows.min(b.cols) {
        let v = out.get(i, i) - z;
        out.set(i, i, v);
    }
    out
}

/// SVD of B − z with both singular vector families.
pub fn singular_system(b: &Matrix, z: Complex64) -> Result<SingularSystem> {
    linalg::svd(&shift(b, z), 1e-10)
}

/// ⟨G_z(iη)⟩ = (i/N)·Σ_i η/((λ_i^z)² + η²): normalized resolvent trace of the
/// doubled form at spectral parameter iη, purely imaginary with Im > 0.
pub fn resolvent_trace(b: &Matrix, z: Complex64, eta: f64) -> Result<Complex64> {
    if eta <= 0.0 {
        return Err(Error::InvalidParameter(format!("eta must be positive, got {eta}")));
    }
    let vals = linalg::singular_values(&shift(b, z))?;
    let n = b.rows as f64;
    let s: f64 = vals.iter().map(|l| eta / (l * l + eta * eta)).sum();
    Ok(Complex64::new(0.0, s / n))
}

/// J^{(I)}·B: rows of B with indices in `idx` (0-based) removed.
pub fn minor(b: &Matrix, idx: &[usize]) -> Result<Matrix> {
    for &i in idx {
        if i >= b.rows {
            return Err(Error::IndexOutOfRange(format!("row {i} of {}", b.rows)));
        }
    }
    let keep: Vec<usize> = (0..b.rows).filter(|i| !idx.contains(i)).collect();
    Ok(Matrix::from_fn(b.field, keep.len(), b.cols, |i, j| b.get(keep[i], j)))
}

/// Both sides of the Schur-complement identity for the first diagonal
/// resolvent entry of the (j−1)-row minor chain:
///   1/G^{(j-1)}_{jj} = −iη − i·Σ_i c_i^{(j)} |w_i^{(j)}|².
#[derive(Debug, Clone)]
pub struct SchurMinorReport {
    /// Removed row (0-based; the identity is evaluated at this row's entry).
    pub j: usize,
    pub eta: f64,
    /// c_i^{(j)} = Nη/((Nλ_i^{(j)})² + (Nη)²), non-increasing.
    pub c: Vec<f64>,
    /// Components of U^{(j)}(b^{(j)} + a^{(j)}).
    pub w: Vec<Complex64>,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

/// Validate the Schur-complement minor identity at row `j` (0-based). The
/// case j = 0 is the primitive one; larger j reduces to it by a row
/// permutation, which is how this routine evaluates it.
pub fn schur_minor_report(b: &Matrix, j: usize, eta: f64) -> Result<SchurMinorReport> {
    if eta <= 0.0 {
        return Err(Error::InvalidParameter(format!("eta must be positive, got {eta}")));
    }
    if j >= b.rows {
        return Err(Error::IndexOutOfRange(format!("row {j} of {}", b.rows)));
    }
    let n = b.rows;
    // Permute rows so the target row and its predecessors sit on top; the
    // singular values of every minor in the chain are unchanged.
    let bp = if j == 0 {
        b.clone()
    } else {
        let order: Vec<usize> = (0..j).chain(std::iter::once(j)).chain(j + 1..n).collect();
        Matrix::from_fn(b.field, n, b.cols, |i, c| b.get(order[i], c))
    };
    let nrows = j + 1; // rows 0..j are "removed" in the chain; row j is probed

    // Left side: first diagonal resolvent entry of the hermitization of the
    // (j-row-removed) matrix.
    let m1 = minor(&bp, &(0..j).collect::<Vec<_>>())?;
    let h1 = linalg::doubled_hermitian(&m1);
    let dim = h1.rows;
    let mut shifted = h1;
    for i in 0..dim {
        let v = shifted.get(i, i) - Complex64::new(0.0, eta);
        shifted.set(i, i, v);
    }
    let e0 = Matrix::from_fn(Field::Complex, dim, 1, |i, _| {
        Complex64::new(if i == 0 { 1.0 } else { 0.0 }, 0.0)
    });
    let x = linalg::linear_solve(&shifted, &e0, 1e-12)?;
    let lhs = Complex64::new(1.0, 0.0) / x.get(0, 0);

    // Right side from the minor with row j removed as well.
    let m2 = minor(&bp, &(0..nrows).collect::<Vec<_>>())?;
    let sv = linalg::svd(&m2, 1e-10)?;
    // Kernel basis of the (N−j−1)×N minor: orthonormal completion of the
    // right singular family.
    let vs: Vec<Vec<Complex64>> = (0..sv.values.len()).map(|i| sv.right_v.column(i)).collect();
    let kernel = complete_kernel(&vs, n, nrows);

    let row: Vec<Complex64> = (0..n).map(|c| bp.get(j, c).conj()).collect(); // (b+a)/√N = B† e_j
    let scale = (n as f64).sqrt();
    let ba: Vec<Complex64> = row.iter().map(|v| v * scale).collect();

    let mut lambda = vec![0.0; nrows];
    lambda.extend(sv.values.iter());
    // with unit right singular vectors, a √2 weight on the singular rows
    // would cancel against half-normalized v-blocks; here both stay unit,
    // so every row enters with weight 1
    let mut w = Vec::with_capacity(n);
    for v in kernel.iter().chain(vs.iter()) {
        w.push(vec_dot(v, &ba));
    }
    let nn = n as f64;
    let c: Vec<f64> = lambda
        .iter()
        .map(|l| nn * eta / ((nn * l) * (nn * l) + (nn * eta) * (nn * eta)))
        .collect();
    let sum: f64 = c.iter().zip(&w).map(|(ci, wi)| ci * wi.norm_sqr()).sum();
    let rhs = Complex64::new(0.0, -eta - sum);
    let residual = (lhs - rhs).norm();
    Ok(SchurMinorReport { j, eta, c, w, lhs, rhs, residual })
}

fn complete_kernel(have: &[Vec<Complex64>], dim: usize, count: usize) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = have.to_vec();
    let mut out = Vec::with_capacity(count);
    let mut t = 0usize;
    while out.len() < count && t < dim + count {
        let mut cand = vec![Complex64::new(0.0, 0.0); dim];
        cand[t % dim] = Complex64::new(1.0, 0.0);
        for b in &basis {
            let p = vec_dot(b, &cand);
            for (c, bb) in cand.iter_mut().zip(b) {
                *c -= p * bb;
            }
        }
        let nn = vec_norm(&cand);
        if nn > 1e-7 {
            let v: Vec<Complex64> = cand.into_iter().map(|x| x / nn).collect();
            basis.push(v.clone());
            out.push(v);
        }
        t += 1;
    }
    out
}

/// Realified top-k-row compression of a unitary: the 2k×N real matrix
/// [[Re U_{1..k,·}], [Im U_{1..k,·}]] and its ascending singular values.
pub fn q_spectral_matrix(u: &Matrix, k: usize) -> Result<(Matrix, Vec<f64>)> {
    let n = u.rows;
    if !u.is_square() {
        return Err(Error::InvalidInput("q_spectral_matrix requires a square input".into()));
    }
    if 2 * k > n || k == 0 {
        return Err(Error::InvalidInput(format!("need 1 ≤ 2k ≤ N, got k={k}, N={n}")));
    }
    let defect = u
        .adjoint()
        .matmul(u)?
        .sub(&Matrix::identity(Field::Complex, n))?
        .max_abs();
    if defect > 1e-10 {
        return Err(Error::NonUnitary(defect));
    }
    let q = Matrix::from_fn(Field::Real, 2 * k, n, |i, j| {
        let v = u.get(i % k, j);
        Complex64::new(if i < k { v.re } else { v.im }, 0.0)
    });
    let m = linalg::singular_values(&q)?;
    Ok((q, m))
}

/// Deterministic count bound: |{i : λ_i^z ≤ η}| ≤ 2Nη·Im⟨G_z(iη)⟩.
pub fn eigenvalue_count_bound(b: &Matrix, z: Complex64, eta: f64) -> Result<(usize, f64)> {
    let vals = linalg::singular_values(&shift(b, z))?;
    let count = vals.iter().filter(|&&l| l <= eta).count();
    let g = resolvent_trace(b, z, eta)?;
    Ok((count, 2.0 * b.rows as f64 * eta * g.im))
}
