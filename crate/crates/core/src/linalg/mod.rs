//! Dense decompositions: Hermitian eigensolver, SVD (routed through the
//! doubled Hermitian form), non-normal eigendecomposition with bi-orthogonal
//! left/right pairs, kernel vectors, realification, and LU solves.

mod bidiag;
mod hessenberg;
mod tridiag;

pub use bidiag::{operator_norm, singular_values};
pub use hessenberg::{hessenberg, hessenberg_eigenvalues, HessenbergLu};
pub use tridiag::{symtrid_ql, symtrid_values, tridiagonalize};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{vec_dot, vec_norm, Field, Matrix};
use crate::rng::mix64;

/// Degeneracy threshold multiplier for non-normal eigendecompositions.
pub const DEGENERACY_REL_GAP: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// Ascending real eigenvalues.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, aligned with `values`.
    pub vectors: Matrix,
    /// max_i ‖H v_i − μ_i v_i‖ / ‖H‖.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct SingularSystem {
    /// Ascending non-negative singular values λ_1 ≤ … ≤ λ_k, k = min(m,n).
    pub values: Vec<f64>,
    /// Unit left singular vectors (m×k columns).
    pub left_u: Matrix,
    /// Unit right singular vectors (n×k columns).
    pub right_v: Matrix,
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Eigenvalues ordered by (re, im).
    pub sigma: Vec<Complex64>,
    /// Unit right eigenvectors as columns.
    pub right: Matrix,
    /// Left eigenvectors as columns, scaled so l_i† r_i = 1.
    pub left: Matrix,
    /// ‖Σ σ_i r_i l_i† − B‖_F / ‖B‖_F.
    pub residual: f64,
}

/// Full spectrum of a Hermitian matrix with an orthonormal eigenbasis.
pub fn hermitian_eig(h: &Matrix, tol: f64) -> Result<EigenSystem> {
    if !h.is_square() {
        return Err(Error::InvalidInput("hermitian_eig requires a square matrix".into()));
    }
    let norm = h.frobenius_norm();
    if h.hermitian_defect() > tol * norm.max(1.0) {
        return Err(Error::InvalidInput(format!(
            "matrix is not Hermitian within tolerance (defect {:.3e})",
            h.hermitian_defect()
        )));
    }
    let n = h.rows;
    let (mut d, mut e, q) = tridiagonalize(h);
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    symtrid_ql(&mut d, &mut e, Some(&mut z))?;

    // Sort ascending, permuting the tridiagonal eigenvector columns.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();

    // vectors = Q · Z[:, order]
    let mut vectors = Matrix::zeros(Field::Complex, n, n);
    for (jj, &src) in order.iter().enumerate() {
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                s += q.get(i, k) * z[k * n + src];
            }
            vectors.set(i, jj, s);
        }
    }

    let mut residual: f64 = 0.0;
    for j in 0..n {
        let col = vectors.column(j);
        let hv = h.matvec(&col)?;
        let r: f64 = hv
            .iter()
            .zip(&col)
            .map(|(a, b)| (a - b * values[j]).norm_sqr())
            .sum::<f64>()
            .sqrt();
        residual = residual.max(r / norm.max(f64::MIN_POSITIVE));
    }
    Ok(EigenSystem { values, vectors, residual })
}

/// Doubled Hermitian form [[0, B], [B†, 0]] of an arbitrary m×n matrix.
pub fn doubled_hermitian(b: &Matrix) -> Matrix {
    let (m, n) = (b.rows, b.cols);
    Matrix::from_fn(Field::Complex, m + n, m + n, |i, j| {
        if i < m && j >= m {
            b.get(i, j - m)
        } else if i >= m && j < m {
            b.get(j, i - m).conj()
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Full SVD via the doubled Hermitian form: its positive spectrum carries the
/// singular values and its eigenvector blocks carry both vector families.
pub fn svd(b: &Matrix, tol: f64) -> Result<SingularSystem> {
    if !b.all_finite() {
        return Err(Error::InvalidInput("svd requires finite entries".into()));
    }
    let (m, n) = (b.rows, b.cols);
    let k = m.min(n);
    let h = doubled_hermitian(b);
    let eig = hermitian_eig(&h, tol.max(1e-12))?;
    let norm = b.frobenius_norm();
    let ztol = 64.0 * f64::EPSILON * norm.max(1.0);

    // The top k eigenvalues of the symmetric spectrum are the singular values.
    let mut values = Vec::with_capacity(k);
    let mut us: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    let mut vs: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    let mut pending_zero = 0usize;
    for idx in m + n - k..m + n {
        let lam = eig.values[idx].max(0.0);
        values.push(lam);
        if lam > ztol {
            let w = eig.vectors.column(idx);
            let mut u: Vec<Complex64> = w[..m].to_vec();
            let mut v: Vec<Complex64> = w[m..].to_vec();
            let (un, vn) = (vec_norm(&u), vec_norm(&v));
            for x in &mut u {
                *x /= un;
            }
            for x in &mut v {
                *x /= vn;
            }
            // Common phase chosen from v's largest entry; B v = λ u is preserved.
            let phase = dominant_phase(&v);
            us.push(u.iter().map(|x| x * phase.conj()).collect());
            vs.push(v.iter().map(|x| x * phase.conj()).collect());
        } else {
            pending_zero += 1;
        }
    }
    if pending_zero > 0 {
        // Numerically zero singular values: any orthonormal completion of the
        // two families is a valid set of singular vectors (B v = 0 = λ u).
        let u_extra = complete_basis(&us, m, pending_zero);
        let v_extra = complete_basis(&vs, n, pending_zero);
        for (u, v) in u_extra.into_iter().zip(v_extra).rev() {
            us.insert(0, u);
            vs.insert(0, v);
        }
    }
    let left_u = Matrix::from_fn(Field::Complex, m, k, |i, j| us[j][i]);
    let right_v = Matrix::from_fn(Field::Complex, n, k, |i, j| vs[j][i]);
    Ok(SingularSystem { values, left_u, right_v })
}

/// Orthonormal vectors extending `have` (each unit, mutually orthonormal) by
/// `count` more, chosen deterministically from the standard basis.
fn complete_basis(have: &[Vec<Complex64>], dim: usize, count: usize) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = have.to_vec();
    let mut extra = Vec::with_capacity(count);
    for t in 0..dim {
        if extra.len() == count {
            break;
        }
        let mut cand = vec![Complex64::new(0.0, 0.0); dim];
        cand[t] = Complex64::new(1.0, 0.0);
        for b in &basis {
            let p = vec_dot(b, &cand);
            for (c, bb) in cand.iter_mut().zip(b) {
                *c -= p * bb;
            }
        }
        let nn = vec_norm(&cand);
        if nn > 0.5 {
            for c in &mut cand {
                *c /= nn;
            }
            basis.push(cand.clone());
            extra.push(cand);
        }
    }
    // The completion always succeeds for consistent dimensions; fall back to a
    // second sweep with a lower acceptance threshold if the grid was unlucky.
    let mut t = 0;
    while extra.len() < count && t < dim {
        let mut cand = vec![Complex64::new(0.0, 0.0); dim];
        cand[t] = Complex64::new(1.0, 0.0);
        for b in &basis {
            let p = vec_dot(b, &cand);
            for (c, bb) in cand.iter_mut().zip(b) {
                *c -= p * bb;
            }
        }
        let nn = vec_norm(&cand);
        if nn > 1e-6 {
            for c in &mut cand {
                *c /= nn;
            }
            basis.push(cand.clone());
            extra.push(cand);
        }
        t += 1;
    }
    extra
}

fn dominant_phase(v: &[Complex64]) -> Complex64 {
    let mut best = 0usize;
    let mut mx = -1.0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > mx {
            mx = z.norm();
            best = i;
        }
    }
    if mx > 0.0 {
        v[best] / mx
    } else {
        Complex64::new(1.0, 0.0)
    }
}

/// Eigenvalues only (no vectors) of a general square matrix.
pub fn complex_eigenvalues(b: &Matrix) -> Result<Vec<Complex64>> {
    if !b.is_square() {
        return Err(Error::InvalidInput("eigenvalues require a square matrix".into()));
    }
    let (mut h, _) = hessenberg(b, false);
    let mut vals = hessenberg_eigenvalues(&mut h)?;
    vals.sort_by(cmp_complex);
    Ok(vals)
}

fn cmp_complex(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap())
}

/// Full non-normal eigendecomposition with bi-orthogonal left/right pairs.
/// Right vectors have unit norm; left vectors satisfy l_i† r_i = 1.
pub fn complex_eig(b: &Matrix, tol: f64) -> Result<SpectralDecomposition> {
    if !b.is_square() {
        return Err(Error::InvalidInput("complex_eig requires a square matrix".into()));
    }
    let n = b.rows;
    let opnorm = operator_norm(b).max(f64::MIN_POSITIVE);
    let (h0, q) = hessenberg(b, true);
    let mut work = h0.clone();
    let mut sigma = hessenberg_eigenvalues(&mut work)?;
    sigma.sort_by(cmp_complex);

    // Simple-spectrum guard.
    let threshold = DEGENERACY_REL_GAP * opnorm;
    let mut min_gap = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            min_gap = min_gap.min((sigma[i] - sigma[j]).norm());
        }
    }
    if n > 1 && min_gap < threshold {
        return Err(Error::DegenerateSpectrum { gap: min_gap, threshold });
    }

    let mut right = Matrix::zeros(Field::Complex, n, n);
    let mut left = Matrix::zeros(Field::Complex, n, n);
    let start = seed_vector(n);
    let _ = tol;
    for (j, &s) in sigma.iter().enumerate() {
        let shifted = shift_diag(&h0, s);
        let lu = HessenbergLu::new(&shifted, f64::EPSILON * opnorm * 1e-3);
        let y = inverse_iterate(&shifted, &lu, &start, false, opnorm)?;
        let w = inverse_iterate(&shifted, &lu, &start, true, opnorm)?;
        let mut r = q.matvec(&y)?;
        let mut l = q.matvec(&w)?;
        // Phase convention: largest-magnitude entry of r real positive.
        let ph = dominant_phase(&r);
        r = r.iter().map(|x| x * ph.conj()).collect();
        let rn = vec_norm(&r);
        r = r.iter().map(|x| x / rn).collect();
        let ip = vec_dot(&l, &r);
        if ip.norm() < 1e-14 {
            return Err(Error::NumericalFailure(format!(
                "left/right pair {j} nearly orthogonal (|l†r| = {:.3e})",
                ip.norm()
            )));
        }
        l = l.iter().map(|x| x / ip.conj()).collect();
        for i in 0..n {
            right.set(i, j, r[i]);
            left.set(i, j, l[i]);
        }
    }

    // Reconstruction residual ‖Σ σ_i r_i l_i† − B‖_F / ‖B‖_F.
    let mut recon = Matrix::zeros(Field::Complex, n, n);
    for j in 0..n {
        for i in 0..n {
            let rij = right.get(i, j) * sigma[j];
            for kk in 0..n {
                let v = recon.get(i, kk) + rij * left.get(kk, j).conj();
                recon.set(i, kk, v);
            }
        }
    }
    let residual = recon.sub(b)?.frobenius_norm() / b.frobenius_norm().max(f64::MIN_POSITIVE);
    Ok(SpectralDecomposition { sigma, right, left, residual })
}

fn shift_diag(h: &Matrix, s: Complex64) -> Matrix {
    let mut out = h.clone();
    for i in 0..h.rows {
        let d = out.get(i, i) - s;
        out.set(i, i, d);
    }
    out
}

/// Deterministic generic start vector for inverse iteration.
fn seed_vector(n: usize) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(n);
    for i in 0..n {
        let a = mix64(0x9e37_79b9_7f4a_7c15, i as u64, 0);
        let b = mix64(0x9e37_79b9_7f4a_7c15, i as u64, 1);
        let re = (a >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
        let im = (b >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
        v.push(Complex64::new(re, im));
    }
    let nn = vec_norm(&v);
    v.into_iter().map(|x| x / nn).collect()
}

fn inverse_iterate(
    shifted: &Matrix,
    lu: &HessenbergLu,
    start: &[Complex64],
    adjoint: bool,
    opnorm: f64,
) -> Result<Vec<Complex64>> {
    let mut y = start.to_vec();
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for _ in 0..5 {
        let next = if adjoint { lu.solve_adjoint(&y) } else { lu.solve(&y) };
        let nn = vec_norm(&next);
        if !nn.is_finite() || nn == 0.0 {
            break;
        }
        y = next.into_iter().map(|x| x / nn).collect();
        let resid = if adjoint {
            let m = shifted.adjoint();
            vec_norm(&m.matvec(&y)?)
        } else {
            vec_norm(&shifted.matvec(&y)?)
        };
        let rel = resid / opnorm;
        if best.as_ref().map_or(true, |(b, _)| rel < *b) {
            best = Some((rel, y.clone()));
        }
        if rel <= 1e-13 {
            break;
        }
    }
    match best {
        Some((rel, v)) if rel <= 1e-7 => Ok(v),
        Some((rel, _)) => Err(Error::NumericalFailure(format!(
            "inverse iteration stalled at relative residual {rel:.3e}"
        ))),
        None => Err(Error::NumericalFailure("inverse iteration produced no iterate".into())),
    }
}

/// Unit null vector of a full-row-rank (N−1)×N matrix.
pub fn kernel_vector(m: &Matrix, tol: f64) -> Result<Vec<Complex64>> {
    if m.rows + 1 != m.cols {
        return Err(Error::InvalidInput(format!(
            "kernel_vector expects (N−1)×N, got {}×{}",
            m.rows, m.cols
        )));
    }
    let g = m.adjoint().matmul(m)?;
    let eig = hermitian_eig(&g, 1e-10)?;
    // Ascending eigenvalues of M†M: index 0 is the kernel direction, index 1
    // the squared smallest nonzero singular value.
    let second = eig.values[1].max(0.0).sqrt();
    if second < tol {
        return Err(Error::RankDeficient(second));
    }
    let mut v = eig.vectors.column(0);
    let ph = dominant_phase(&v);
    v = v.iter().map(|x| x * ph.conj()).collect();
    let nn = vec_norm(&v);
    Ok(v.into_iter().map(|x| x / nn).collect())
}

/// [[Re M, −Im M], [Im M, Re M]] as a real matrix of doubled dimensions.
pub fn realify(m: &Matrix) -> Matrix {
    let (r, c) = (m.rows, m.cols);
    Matrix::from_fn(Field::Real, 2 * r, 2 * c, |i, j| {
        let v = m.get(i % r, j % c);
        let val = match (i >= r, j >= c) {
            (false, false) | (true, true) => v.re,
            (false, true) => -v.im,
            (true, false) => v.im,
        };
        Complex64::new(val, 0.0)
    })
}

/// Stacked (Re v; Im v) of a complex vector.
pub fn realify_vec(v: &[Complex64]) -> Vec<f64> {
    v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect()
}

/// Dense LU solve with partial pivoting; rhs may have several columns.
pub fn linear_solve(m: &Matrix, rhs: &Matrix, _tol: f64) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::InvalidInput("linear_solve requires a square matrix".into()));
    }
    if m.rows != rhs.rows {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs rhs {}x{}",
            m.rows, m.cols, rhs.rows, rhs.cols
        )));
    }
    let n = m.rows;
    let idx = |i: usize, j: usize| i * n + j;
    let mut a: Vec<Complex64> = m.entries().to_vec();
    let mut x = rhs.clone();
    x.field = Field::Complex;
    let floor = f64::EPSILON * m.frobenius_norm() * 1e-3;
    for k in 0..n {
        let mut piv = k;
        let mut mx = a[idx(k, k)].norm();
        for i in k + 1..n {
            if a[idx(i, k)].norm() > mx {
                mx = a[idx(i, k)].norm();
                piv = i;
            }
        }
        if mx <= floor {
            return Err(Error::SingularSystem(format!("pivot {mx:.3e} underflows at column {k}")));
        }
        if piv != k {
            for j in 0..n {
                a.swap(idx(k, j), idx(piv, j));
            }
            for j in 0..x.cols {
                let t = x.get(k, j);
                x.set(k, j, x.get(piv, j));
                x.set(piv, j, t);
            }
        }
        let p = a[idx(k, k)];
        for i in k + 1..n {
            let f = a[idx(i, k)] / p;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let t = a[idx(k, j)] * f;
                a[idx(i, j)] -= t;
            }
            for j in 0..x.cols {
                let t = x.get(k, j) * f;
                x.set(i, j, x.get(i, j) - t);
            }
        }
    }
    for j in 0..x.cols {
        for i in (0..n).rev() {
            let mut s = x.get(i, j);
            for kk in i + 1..n {
                s -= a[idx(i, kk)] * x.get(kk, j);
            }
            x.set(i, j, s / a[idx(i, i)]);
        }
    }
    Ok(x)
}
