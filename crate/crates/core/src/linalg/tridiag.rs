//! Householder tridiagonalization of Hermitian matrices and implicit-shift QL
//! iteration on the resulting real symmetric tridiagonal form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{Field, Matrix};

const MAX_SWEEPS: usize = 40;

/// Reduce a Hermitian matrix to real symmetric tridiagonal form T = Q† H Q.
/// Returns (diag, offdiag, Q) with offdiag[i] coupling i and i+1.
pub fn tridiagonalize(h: &Matrix) -> (Vec<f64>, Vec<f64>, Matrix) {
    let n = h.rows;
    let mut a = h.clone();
    let mut q = Matrix::identity(Field::Complex, n);

    for k in 0..n.saturating_sub(2) {
        // Householder vector annihilating column k below row k+1.
        let x: Vec<Complex64> = (k + 1..n).map(|i| a.get(i, k)).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm < f64::EPSILON * xnorm {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        apply_householder_both(&mut a, &v, k + 1);
        apply_householder_right(&mut q, &v, k + 1);
    }

    // Phase-scale to make the subdiagonal real and non-negative.
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut phase = vec![Complex64::new(1.0, 0.0); n];
    for i in 0..n {
        d[i] = a.get(i, i).re;
    }
    for i in 0..n.saturating_sub(1) {
        // conj(phase[i+1])·a[i+1,i]·phase[i] = |a[i+1,i]| ≥ 0
        let s = a.get(i + 1, i) * phase[i];
        let m = s.norm();
        e[i] = m;
        phase[i + 1] = if m > 0.0 { s / m } else { Complex64::new(1.0, 0.0) };
    }
    // H = (Q·D) T (Q·D)† with D = diag(phase).
    for j in 0..n {
        for i in 0..n {
            let v = q.get(i, j) * phase[j];
            q.set(i, j, v);
        }
    }
    (d, e, q)
}

/// A ← P A P with P = I − 2vv† acting on rows/cols `off..`.
fn apply_householder_both(a: &mut Matrix, v: &[Complex64], off: usize) {
    let n = a.rows;
    // Left: A ← A − 2 v (v† A)
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        let mut s = Complex64::new(0.0, 0.0);
        for (t, vt) in v.iter().enumerate() {
            s += vt.conj() * a.get(off + t, j);
        }
        w[j] = s;
    }
    for (t, vt) in v.iter().enumerate() {
        for j in 0..n {
            let val = a.get(off + t, j) - 2.0 * vt * w[j];
            a.set(off + t, j, val);
        }
    }
    // Right: A ← A − 2 (A v) v†
    for i in 0..n {
        let mut s = Complex64::new(0.0, 0.0);
        for (t, vt) in v.iter().enumerate() {
            s += a.get(i, off + t) * vt;
        }
        w[i] = s;
    }
    for i in 0..n {
        for (t, vt) in v.iter().enumerate() {
            let val = a.get(i, off + t) - 2.0 * w[i] * vt.conj();
            a.set(i, off + t, val);
        }
    }
}

/// Q ← Q (I − 2vv†) acting on columns `off..`.
fn apply_householder_right(q: &mut Matrix, v: &[Complex64], off: usize) {
    let n = q.rows;
    for i in 0..n {
        let mut s = Complex64::new(0.0, 0.0);
        for (t, vt) in v.iter().enumerate() {
            s += q.get(i, off + t) * vt;
        }
        for (t, vt) in v.iter().enumerate() {
            let val = q.get(i, off + t) - 2.0 * s * vt.conj();
            q.set(i, off + t, val);
        }
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix. `z`, when present,
/// is an n×n row-major real matrix accumulating the rotations (start from
/// identity to get the tridiagonal eigenvectors).
pub fn symtrid_ql(d: &mut [f64], e: &mut Vec<f64>, mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e.push(0.0); // sentinel at e[n-1]
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                e.pop();
                return Err(Error::NumericalFailure(format!(
                    "tridiagonal QL exceeded {MAX_SWEEPS} sweeps at index {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut i = m;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(zz) = z.as_deref_mut() {
                    for k in 0..n {
                        f = zz[k * n + i + 1];
                        zz[k * n + i + 1] = s * zz[k * n + i] + c * f;
                        zz[k * n + i] = c * zz[k * n + i] - s * f;
                    }
                }
            }
            if r == 0.0 && i > l {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    e.pop();
    Ok(())
}

/// Eigenvalues only, ascending.
pub fn symtrid_values(mut d: Vec<f64>, mut e: Vec<f64>) -> Result<Vec<f64>> {
    symtrid_ql(&mut d, &mut e, None)?;
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(d)
}
