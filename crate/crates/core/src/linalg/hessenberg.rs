//! Complex Hessenberg reduction, shifted QR eigenvalues, and inverse-iteration
//! eigenvectors for general (non-normal) square matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{Field, Matrix};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 40;

/// Unitary reduction B = Q H Q† with H upper Hessenberg.
/// When `accumulate` is false Q is returned as an empty 0×0 matrix.
pub fn hessenberg(b: &Matrix, accumulate: bool) -> (Matrix, Matrix) {
    let n = b.rows;
    let mut h = b.clone();
    h.field = Field::Complex;
    let mut q = if accumulate { Matrix::identity(Field::Complex, n) } else { Matrix::zeros(Field::Complex, 0, 0) };

    for k in 0..n.saturating_sub(2) {
        let xnorm = (k + 1..n).map(|i| h.get(i, k).norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = h.get(k + 1, k);
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h.get(i, k)).collect();
        v[0] -= alpha;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn < f64::EPSILON * xnorm {
            continue;
        }
        for z in &mut v {
            *z /= vn;
        }
        // H ← P H P, P = I − 2vv† on rows/cols k+1..
        for j in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for (t, vt) in v.iter().enumerate() {
                s += vt.conj() * h.get(k + 1 + t, j);
            }
            for (t, vt) in v.iter().enumerate() {
                let val = h.get(k + 1 + t, j) - 2.0 * vt * s;
                h.set(k + 1 + t, j, val);
            }
        }
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for (t, vt) in v.iter().enumerate() {
                s += h.get(i, k + 1 + t) * vt;
            }
            for (t, vt) in v.iter().enumerate() {
                let val = h.get(i, k + 1 + t) - 2.0 * s * vt.conj();
                h.set(i, k + 1 + t, val);
            }
        }
        if accumulate {
            for i in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for (t, vt) in v.iter().enumerate() {
                    s += q.get(i, k + 1 + t) * vt;
                }
                for (t, vt) in v.iter().enumerate() {
                    let val = q.get(i, k + 1 + t) - 2.0 * s * vt.conj();
                    q.set(i, k + 1 + t, val);
                }
            }
        }
    }
    // Clean the structural zeros below the subdiagonal.
    for i in 0..n {
        for j in 0..i.saturating_sub(1) {
            h.set(i, j, Complex64::new(0.0, 0.0));
        }
    }
    (h, q)
}

/// Eigenvalues of an upper Hessenberg matrix by explicit single-shift QR with
/// Wilkinson shifts. Destroys `h`.
pub fn hessenberg_eigenvalues(h: &mut Matrix) -> Result<Vec<Complex64>> {
    let n = h.rows;
    let norm = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut vals = vec![Complex64::new(0.0, 0.0); n];
    let mut hi = n; // active block is rows lo..hi
    let mut iter = 0usize;

    while hi > 0 {
        // Find the active block start, deflating converged subdiagonals.
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h.get(lo - 1, lo - 1).norm() + h.get(lo, lo).norm();
            let s = if s == 0.0 { norm } else { s };
            if h.get(lo, lo - 1).norm() <= f64::EPSILON * s {
                h.set(lo, lo - 1, Complex64::new(0.0, 0.0));
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            vals[hi - 1] = h.get(hi - 1, hi - 1);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::NumericalFailure(format!(
                "QR iteration exceeded {MAX_SWEEPS_PER_EIGENVALUE} sweeps on block [{lo},{hi})"
            )));
        }
        let shift = if iter % 10 == 0 {
            // Exceptional shift to break symmetric stalls.
            let m = h.get(hi - 1, hi - 2).norm() + if hi >= 3 { h.get(hi - 2, hi - 3).norm() } else { 0.0 };
            h.get(hi - 1, hi - 1) + Complex64::new(0.75 * m, 0.0)
        } else {
            wilkinson_shift(h, hi)
        };

        // Explicit shifted QR sweep on the active block via Givens rotations.
        for i in lo..hi {
            let d = h.get(i, i) - shift;
            h.set(i, i, d);
        }
        let mut rots: Vec<(Complex64, Complex64)> = Vec::with_capacity(hi - lo - 1);
        for i in lo..hi - 1 {
            let a = h.get(i, i);
            let b = h.get(i + 1, i);
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                (a / r, b / r)
            };
            // rows i, i+1 ← G† · rows
            for j in i..hi {
                let x = h.get(i, j);
                let y = h.get(i + 1, j);
                h.set(i, j, c.conj() * x + s.conj() * y);
                h.set(i + 1, j, -s * x + c * y);
            }
            rots.push((c, s));
        }
        for (i, (c, s)) in (lo..hi - 1).zip(rots.iter()) {
            // cols i, i+1 ← cols · G
            let top = lo; // block-local similarity keeps the rest of H intact
            for r_i in top..(i + 2).min(hi) {
                let x = h.get(r_i, i);
                let y = h.get(r_i, i + 1);
                h.set(r_i, i, x * c + y * s);
                h.set(r_i, i + 1, -x * s.conj() + y * c.conj());
            }
        }
        for i in lo..hi {
            let d = h.get(i, i) + shift;
            h.set(i, i, d);
        }
    }
    Ok(vals)
}

fn wilkinson_shift(h: &Matrix, hi: usize) -> Complex64 {
    let a = h.get(hi - 2, hi - 2);
    let b = h.get(hi - 2, hi - 1);
    let c = h.get(hi - 1, hi - 2);
    let d = h.get(hi - 1, hi - 1);
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let l1 = (tr + disc) / 2.0;
    let l2 = (tr - disc) / 2.0;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// LU factorization of an upper Hessenberg matrix with adjacent-row partial
/// pivoting; supports solves with M and Mᵀ in O(n²).
pub struct HessenbergLu {
    n: usize,
    u: Vec<Complex64>, // row-major upper triangle
    mult: Vec<Complex64>,
    swap: Vec<bool>,
}

impl HessenbergLu {
    /// Factor M = (upper Hessenberg); tiny pivots are bumped to keep the
    /// factorization usable for inverse iteration.
    pub fn new(m: &Matrix, pivot_floor: f64) -> Self {
        let n = m.rows;
        let mut u: Vec<Complex64> = m.entries().to_vec();
        let idx = |i: usize, j: usize| i * n + j;
        let mut mult = vec![Complex64::new(0.0, 0.0); n.saturating_sub(1)];
        let mut swap = vec![false; n.saturating_sub(1)];
        for k in 0..n.saturating_sub(1) {
            if u[idx(k + 1, k)].norm() > u[idx(k, k)].norm() {
                swap[k] = true;
                for j in k..n {
                    u.swap(idx(k, j), idx(k + 1, j));
                }
            }
            let mut piv = u[idx(k, k)];
            if piv.norm() < pivot_floor {
                piv = Complex64::new(pivot_floor, 0.0);
                u[idx(k, k)] = piv;
            }
            let m_k = u[idx(k + 1, k)] / piv;
            mult[k] = m_k;
            u[idx(k + 1, k)] = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                let t = u[idx(k, j)] * m_k;
                u[idx(k + 1, j)] -= t;
            }
        }
        if n > 0 {
            let last = idx(n - 1, n - 1);
            if u[last].norm() < pivot_floor {
                u[last] = Complex64::new(pivot_floor, 0.0);
            }
        }
        HessenbergLu { n, u, mult, swap }
    }

    /// Solve M x = b.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let idx = |i: usize, j: usize| i * n + j;
        let mut x = b.to_vec();
        for k in 0..n.saturating_sub(1) {
            if self.swap[k] {
                x.swap(k, k + 1);
            }
            let t = x[k] * self.mult[k];
            x[k + 1] -= t;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.u[idx(i, j)] * x[j];
            }
            x[i] = s / self.u[idx(i, i)];
        }
        x
    }

    /// Solve Mᵀ x = b (plain transpose, no conjugation).
    pub fn solve_transposed(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let idx = |i: usize, j: usize| i * n + j;
        // M = F U with F the inverse of the elimination sequence; Mᵀ = Uᵀ Fᵀ.
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.u[idx(j, i)] * y[j];
            }
            y[i] = s / self.u[idx(i, i)];
        }
        // x = E_0ᵀ … E_{n-2}ᵀ y with E_k = L_k P_k.
        for k in (0..n.saturating_sub(1)).rev() {
            let t = y[k + 1] * self.mult[k];
            y[k] -= t;
            if self.swap[k] {
                y.swap(k, k + 1);
            }
        }
        y
    }

    /// Solve M† x = b.
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        let conj_b: Vec<Complex64> = b.iter().map(|z| z.conj()).collect();
        self.solve_transposed(&conj_b).into_iter().map(|z| z.conj()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::vec_norm;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn triangular_eigenvalues_are_diagonal() {
        let mut h = Matrix::from_real_rows(&[vec![1.0, 3.0], vec![0.0, 2.0]]);
        h.field = Field::Complex;
        let mut vals = hessenberg_eigenvalues(&mut h).unwrap();
        vals.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((vals[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((vals[1] - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rotation_matrix_has_imaginary_pair() {
        // [[0,-1],[1,0]] → ±i
        let b = Matrix::from_real_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]);
        let (mut h, _) = hessenberg(&b, false);
        let mut vals = hessenberg_eigenvalues(&mut h).unwrap();
        vals.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((vals[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((vals[1] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn hessenberg_similarity_preserved() {
        let b = Matrix::from_fn(Field::Complex, 5, 5, |i, j| c(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64));
        let (h, q) = hessenberg(&b, true);
        let lhs = q.matmul(&h).unwrap().matmul(&q.adjoint()).unwrap();
        assert!(lhs.sub(&b).unwrap().frobenius_norm() < 1e-12 * b.frobenius_norm().max(1.0));
        // unitarity
        let qtq = q.adjoint().matmul(&q).unwrap();
        assert!(qtq.sub(&Matrix::identity(Field::Complex, 5)).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn hessenberg_lu_solves_both_orientations() {
        let m = Matrix::from_fn(Field::Complex, 4, 4, |i, j| {
            if i > j + 1 {
                c(0.0, 0.0)
            } else {
                c((i as f64 + 1.0) * 0.3 + j as f64, (j as f64 - i as f64) * 0.2)
            }
        });
        let lu = HessenbergLu::new(&m, 1e-300);
        let b: Vec<Complex64> = (0..4).map(|i| c(1.0 + i as f64, -0.5 * i as f64)).collect();
        let x = lu.solve(&b);
        let r = m.matvec(&x).unwrap();
        let err: f64 = r.iter().zip(&b).map(|(a, bb)| (a - bb).norm_sqr()).sum::<f64>().sqrt();
        assert!(err < 1e-11, "direct solve residual {err}");

        let xt = lu.solve_adjoint(&b);
        let mt = m.adjoint();
        let rt = mt.matvec(&xt).unwrap();
        let errt: f64 = rt.iter().zip(&b).map(|(a, bb)| (a - bb).norm_sqr()).sum::<f64>().sqrt();
        assert!(errt < 1e-11, "adjoint solve residual {errt}");
        assert!(vec_norm(&xt) > 0.0);
    }
}
