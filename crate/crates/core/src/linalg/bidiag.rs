//! Values-only singular values via Householder bidiagonalization followed by
//! the zero-diagonal tridiagonal form whose spectrum is ± the singular values.

use num_complex::Complex64;

use crate::error::Result;
use crate::matrix::Matrix;

/// Singular values of an arbitrary matrix, ascending. Much cheaper than a
/// full decomposition; used by the Monte Carlo hot loops.
pub fn singular_values(b: &Matrix) -> Result<Vec<f64>> {
    let (m, n) = (b.rows, b.cols);
    if m == 0 || n == 0 {
        return Ok(vec![]);
    }
    let (d, e) = if m >= n { bidiagonalize(b) } else { bidiagonalize(&b.adjoint()) };
    let k = d.len();
    // Zero-diagonal tridiagonal of size 2k with couplings (d1,e1,d2,e2,…,dk);
    // its eigenvalues are exactly ± the singular values.
    let mut off = Vec::with_capacity(2 * k - 1);
    for i in 0..k {
        off.push(d[i]);
        if i + 1 < k {
            off.push(e[i]);
        }
    }
    let vals = super::tridiag::symtrid_values(vec![0.0; 2 * k], off)?;
    let mut sv: Vec<f64> = vals[k..].iter().map(|v| v.max(0.0)).collect();
    sv.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(sv)
}

/// Largest singular value.
pub fn operator_norm(b: &Matrix) -> f64 {
    singular_values(b).map(|sv| sv.last().copied().unwrap_or(0.0)).unwrap_or_else(|_| b.frobenius_norm())
}

/// Upper bidiagonalization of an m×n matrix with m ≥ n; only the magnitudes
/// of the diagonal and superdiagonal are returned (phases do not affect
/// singular values).
fn bidiagonalize(b: &Matrix) -> (Vec<f64>, Vec<f64>) {
    let (m, n) = (b.rows, b.cols);
    let mut a: Vec<Complex64> = b.entries().to_vec();
    let idx = |i: usize, j: usize| i * n + j;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];

    for k in 0..n {
        // Left Householder: zero column k below the diagonal.
        let xnorm = (k..m).map(|i| a[idx(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if xnorm > 0.0 {
            let x0 = a[idx(k, k)];
            let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
            let alpha = -phase * xnorm;
            let mut v: Vec<Complex64> = (k..m).map(|i| a[idx(i, k)]).collect();
            v[0] -= alpha;
            let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if vn > f64::EPSILON * xnorm {
                for z in &mut v {
                    *z /= vn;
                }
                for j in k..n {
                    let mut s = Complex64::new(0.0, 0.0);
                    for (t, vt) in v.iter().enumerate() {
                        s += vt.conj() * a[idx(k + t, j)];
                    }
                    for (t, vt) in v.iter().enumerate() {
                        a[idx(k + t, j)] -= 2.0 * vt * s;
                    }
                }
            }
        }
        d[k] = a[idx(k, k)].norm();

        // Right Householder: zero row k beyond the superdiagonal.
        if k + 1 < n {
            let rnorm = (k + 1..n).map(|j| a[idx(k, j)].norm_sqr()).sum::<f64>().sqrt();
            if rnorm > 0.0 {
                // Reflect the conjugated row: r·H = (H·r†)†.
                let x0 = a[idx(k, k + 1)].conj();
                let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
                let alpha = -phase * rnorm;
                let mut v: Vec<Complex64> = (k + 1..n).map(|j| a[idx(k, j)].conj()).collect();
                v[0] -= alpha;
                let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if vn > f64::EPSILON * rnorm {
                    for z in &mut v {
                        *z /= vn;
                    }
                    // A ← A (I − 2vv†) on rows k..m, cols k+1..n
                    for i in k..m {
                        let mut s = Complex64::new(0.0, 0.0);
                        for (t, vt) in v.iter().enumerate() {
                            s += a[idx(i, k + 1 + t)] * vt;
                        }
                        for (t, vt) in v.iter().enumerate() {
                            a[idx(i, k + 1 + t)] -= 2.0 * s * vt.conj();
                        }
                    }
                }
            }
            e[k] = a[idx(k, k + 1)].norm();
        }
    }
    (d, e)
}
