//! Dense symmetric eigensolver: Householder reduction to tridiagonal form
//! followed by the implicit-shift QL iteration.
//!
//! Eigenvalues come back sorted descending; eigenvectors, when requested,
//! are the matching columns of an orthogonal matrix.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct SymmetricEigen<S> {
    pub values: Vec<S>,
    /// Column `j` is the eigenvector of `values[j]`.
    pub vectors: Option<Matrix<S>>,
}

impl<S: Scalar> SymmetricEigen<S> {
    /// `max_j ‖A v_j − λ_j v_j‖`, or `None` when vectors were not computed.
    pub fn max_residual(&self, a: &Matrix<S>) -> Option<S> {
        let v = self.vectors.as_ref()?;
        let n = a.rows();
        let mut worst = S::zero();
        for (j, &lambda) in self.values.iter().enumerate() {
            let mut norm = S::zero();
            for i in 0..n {
                let av: S = (0..n).map(|k| a[(i, k)] * v[(k, j)]).sum();
                let r = av - lambda * v[(i, j)];
                norm += r * r;
            }
            worst = worst.max(norm.sqrt());
        }
        Some(worst)
    }
}

/// Frobenius norm.
pub fn frobenius_norm<S: Scalar>(a: &Matrix<S>) -> S {
    a.as_slice().iter().map(|&x| x * x).sum::<S>().sqrt()
}

/// Full eigendecomposition of a symmetric matrix.
pub fn symmetric_eigen<S: Scalar>(a: &Matrix<S>, want_vectors: bool) -> Result<SymmetricEigen<S>> {
    if !a.is_square() {
        return Err(Error::SizeMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let n = a.rows();
    let tol = S::epsilon().sqrt() * (S::one() + frobenius_norm(a));
    for i in 0..n {
        for j in 0..i {
            if (a[(i, j)] - a[(j, i)]).abs() > tol {
                return Err(Error::Domain(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    if n == 0 {
        return Ok(SymmetricEigen {
            values: Vec::new(),
            vectors: want_vectors.then(|| Matrix::zeros(0, 0)),
        });
    }
    let mut v: Vec<S> = a.as_slice().to_vec();
    let mut d = vec![S::zero(); n];
    let mut e = vec![S::zero(); n];
    tred2(n, &mut v, &mut d, &mut e, want_vectors);
    let rows = if want_vectors { n } else { 0 };
    if !want_vectors {
        v.clear();
    }
    tql2(&mut d, &mut e, &mut v, rows)?;
    let order = descending_order(&d);
    let values = order.iter().map(|&j| d[j]).collect();
    let vectors = want_vectors.then(|| Matrix::from_fn(n, n, |i, j| v[i * n + order[j]]));
    Ok(SymmetricEigen { values, vectors })
}

/// All eigenvalues of a symmetric matrix, descending.
pub fn eigenvalues<S: Scalar>(a: &Matrix<S>) -> Result<Vec<S>> {
    Ok(symmetric_eigen(a, false)?.values)
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off[i]` couples `i` and `i + 1`), descending, along
/// with the last component of each matching unit eigenvector.
pub fn tridiagonal_eigen_last_row<S: Scalar>(diag: &[S], off: &[S]) -> Result<(Vec<S>, Vec<S>)> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n.max(1), "off-diagonal length");
    let mut d = diag.to_vec();
    // tql2 expects the subdiagonal in e[1..]
    let mut e = vec![S::zero(); n];
    e[1..].copy_from_slice(off);
    let mut last = vec![S::zero(); n];
    if n > 0 {
        last[n - 1] = S::one();
    }
    tql2(&mut d, &mut e, &mut last, 1)?;
    let order = descending_order(&d);
    Ok((
        order.iter().map(|&j| d[j]).collect(),
        order.iter().map(|&j| last[j]).collect(),
    ))
}

fn descending_order<S: Scalar>(d: &[S]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| d[b].partial_cmp(&d[a]).unwrap_or(std::cmp::Ordering::Equal));
    order
}

/// Householder tridiagonalization of the row-major symmetric `v` (n×n).
/// On exit `d` is the diagonal, `e[1..]` the subdiagonal, and `v` the
/// accumulated orthogonal transform when `accumulate` is set.
fn tred2<S: Scalar>(n: usize, v: &mut [S], d: &mut [S], e: &mut [S], accumulate: bool) {
    let idx = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = S::zero();
        let mut h = S::zero();
        for &x in &d[..i] {
            scale += x.abs();
        }
        if scale == S::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = S::zero();
                v[idx(j, i)] = S::zero();
            }
        } else {
            for x in &mut d[..i] {
                *x /= scale;
                h += *x * *x;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > S::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for x in &mut e[..i] {
                *x = S::zero();
            }
            for j in 0..i {
                f = d[j];
                v[idx(j, i)] = f;
                g = e[j] + v[idx(j, j)] * f;
                for k in j + 1..i {
                    g += v[idx(k, j)] * d[k];
                    e[k] += v[idx(k, j)] * f;
                }
                e[j] = g;
            }
            f = S::zero();
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[idx(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = S::zero();
            }
        }
        d[i] = h;
    }
    if !accumulate {
        for j in 0..n {
            d[j] = v[idx(j, j)];
        }
        e[0] = S::zero();
        return;
    }
    for i in 0..n - 1 {
        v[idx(n - 1, i)] = v[idx(i, i)];
        v[idx(i, i)] = S::one();
        let h = d[i + 1];
        if h != S::zero() {
            for k in 0..=i {
                d[k] = v[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = S::zero();
                for k in 0..=i {
                    g += v[idx(k, i + 1)] * v[idx(k, j)];
                }
                for k in 0..=i {
                    v[idx(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[idx(k, i + 1)] = S::zero();
        }
    }
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
        v[idx(n - 1, j)] = S::zero();
    }
    v[idx(n - 1, n - 1)] = S::one();
    e[0] = S::zero();
}

/// Implicit-shift QL on the tridiagonal `(d, e[1..])`. The Givens rotations
/// are applied to the columns of the `rows × n` row-major block `v`, so
/// passing the last row of the identity yields the last eigenvector
/// components at O(n) cost per rotation.
fn tql2<S: Scalar>(d: &mut [S], e: &mut [S], v: &mut [S], rows: usize) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = S::zero();
    let eps = S::epsilon();
    let two = S::one() + S::one();
    let max_iter = 30 * n.max(10);
    let mut f = S::zero();
    let mut tst1 = S::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > max_iter {
                    return Err(Error::NotConverged {
                        iterations: iter,
                        residual: e[l].abs().to_f64_lossy(),
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(S::one());
                if p < S::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in &mut d[l + 2..] {
                    *x -= h;
                }
                f += h;

                p = d[m];
                let mut c = S::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = S::zero();
                let mut s2 = S::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..rows {
                        let row = &mut v[k * n..(k + 1) * n];
                        let hk = row[i + 1];
                        row[i + 1] = s * row[i] + c * hk;
                        row[i] = c * row[i] - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = S::zero();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: usize, seed: u64) -> Matrix<f64> {
        // deterministic pseudo-random symmetric matrix
        let mut state = seed;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let x = next();
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
        m
    }

    #[test]
    fn matches_nalgebra() {
        for (n, seed) in [(1, 1), (2, 2), (5, 3), (17, 4), (60, 5)] {
            let m = sym(n, seed);
            let ours = symmetric_eigen(&m, true).unwrap();
            let na = nalgebra::DMatrix::from_row_slice(n, n, m.as_slice());
            let mut theirs: Vec<f64> = na.symmetric_eigen().eigenvalues.iter().copied().collect();
            theirs.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (a, b) in ours.values.iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-12, "n={n}: {a} vs {b}");
            }
            assert!(ours.max_residual(&m).unwrap() < 1e-12 * (1.0 + frobenius_norm(&m)));
            let values_only = eigenvalues(&m).unwrap();
            for (a, b) in values_only.iter().zip(&ours.values) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn known_spectra() {
        // path on 5 vertices: 2cos(jπ/6)
        let p = Matrix::from_fn(5, 5, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 });
        let vals = eigenvalues(&p).unwrap();
        for (j, v) in vals.iter().enumerate() {
            let expect = 2.0 * ((j + 1) as f64 * std::f64::consts::PI / 6.0).cos();
            assert!((v - expect).abs() < 1e-13);
        }
        // J_4 has eigenvalues 4, 0, 0, 0
        let j4 = Matrix::from_fn(4, 4, |_, _| 1.0f64);
        let vals = eigenvalues(&j4).unwrap();
        assert!((vals[0] - 4.0).abs() < 1e-13);
        assert!(vals[1..].iter().all(|v| v.abs() < 1e-13));
        assert!(eigenvalues(&Matrix::<f64>::zeros(0, 0)).unwrap().is_empty());
    }

    #[test]
    fn single_precision() {
        let m = sym(12, 9);
        let lo: Matrix<f32> = m.map(|&x| x as f32);
        let a = eigenvalues(&lo).unwrap();
        let b = eigenvalues(&m).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((*x as f64 - y).abs() < 1e-4);
        }
    }

    #[test]
    fn tridiagonal_last_row() {
        let diag = [2.0f64, 1.0, 3.0, 0.5];
        let off = [0.5f64, -1.0, 0.25];
        let (vals, last) = tridiagonal_eigen_last_row(&diag, &off).unwrap();
        let t = Matrix::from_fn(4, 4, |i, j| {
            if i == j {
                diag[i]
            } else if i.abs_diff(j) == 1 {
                off[i.min(j)]
            } else {
                0.0
            }
        });
        let full = symmetric_eigen(&t, true).unwrap();
        let vecs = full.vectors.unwrap();
        for j in 0..4 {
            assert!((vals[j] - full.values[j]).abs() < 1e-13);
            assert!((last[j].abs() - vecs[(3, j)].abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(symmetric_eigen(&m, false).is_err());
        assert!(symmetric_eigen(&Matrix::<f64>::zeros(2, 3), false).is_err());
    }
}
