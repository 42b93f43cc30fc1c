//! Matrix-free Lanczos for the top eigenvalue of a symmetric operator on
//! the orthogonal complement of the all-ones vector.
//!
//! For a `d`-regular graph the all-ones vector is the Perron vector, so the
//! result is `λ₂` (or `d` again when the graph is disconnected). Every
//! Krylov vector is projected off the all-ones direction and fully
//! reorthogonalized (two passes) against the basis.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dense::tridiagonal_eigen_last_row;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

pub const DEFAULT_SEED: u64 = 42;

/// A real symmetric linear operator.
pub trait SymmetricOperator<S: Scalar>: Sync {
    fn dim(&self) -> usize;

    /// `y ← A x`.
    fn apply(&self, x: &[S], y: &mut [S]);
}

impl<S: Scalar> SymmetricOperator<S> for Matrix<S> {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn apply(&self, x: &[S], y: &mut [S]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanczosConfig {
    /// Krylov basis size cap.
    pub max_basis: usize,
    /// Required `|θ_j − θ_{j−c}| / max(|θ_j|, 1)`.
    pub ritz_tol: f64,
    /// Required residual `β_j |y_j|`, relative to `scale`.
    pub residual_tol: f64,
    /// Ritz values are checked every `check_every` steps.
    pub check_every: usize,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            max_basis: 600,
            ritz_tol: 1e-10,
            residual_tol: 1e-8,
            check_every: 4,
            seed: DEFAULT_SEED,
        }
    }
}

impl LanczosConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanczosResult {
    pub value: f64,
    /// Residual norm estimate `‖A y − θ y‖` of the returned Ritz pair.
    pub residual: f64,
    pub iterations: usize,
    pub restarts: usize,
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn norm<S: Scalar>(a: &[S]) -> S {
    dot(a, a).sqrt()
}

fn remove_mean<S: Scalar>(v: &mut [S]) {
    let n = S::from_usize(v.len()).expect("length fits the scalar");
    let mean = v.iter().copied().sum::<S>() / n;
    for x in v.iter_mut() {
        *x -= mean;
    }
}

fn orthogonalize<S: Scalar>(w: &mut [S], basis: &[Vec<S>]) {
    for _ in 0..2 {
        remove_mean(w);
        for q in basis {
            let c = dot(w, q);
            for (x, &y) in w.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
    }
}

/// A seeded random unit vector orthogonal to all-ones and to `basis`,
/// or `None` when that complement is numerically empty.
fn fresh_vector<S: Scalar>(dim: usize, basis: &[Vec<S>], rng: &mut ChaCha8Rng) -> Option<Vec<S>> {
    let mut v: Vec<S> = (0..dim)
        .map(|_| S::from_f64_lossy(rng.gen_range(-1.0..1.0)))
        .collect();
    let before = norm(&v);
    orthogonalize(&mut v, basis);
    let nv = norm(&v);
    if nv <= before * S::from_f64_lossy(1e3) * S::epsilon() {
        return None;
    }
    for x in v.iter_mut() {
        *x /= nv;
    }
    Some(v)
}

/// Largest eigenvalue of `op` restricted to the complement of all-ones.
///
/// `scale` sets the absolute size of the residual test (the degree of a
/// regular graph).
pub fn top_eigenvalue_deflated<S: Scalar, A: SymmetricOperator<S> + ?Sized>(
    op: &A,
    scale: f64,
    config: &LanczosConfig,
) -> Result<LanczosResult> {
    let dim = op.dim();
    if dim < 2 {
        return Err(Error::Domain(
            "the complement of all-ones is empty for a single vertex".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let cap = config.max_basis.min(dim - 1).max(1);
    let scale = scale.abs().max(1.0);

    let mut basis: Vec<Vec<S>> = Vec::new();
    let mut alphas: Vec<S> = Vec::new();
    let mut betas: Vec<S> = Vec::new();
    let mut q = fresh_vector(dim, &basis, &mut rng)
        .ok_or_else(|| Error::Domain("no start vector".into()))?;
    let mut w = vec![S::zero(); dim];
    let mut prev_theta: Option<f64> = None;
    let mut restarts = 0;

    loop {
        op.apply(&q, &mut w);
        let alpha = dot(&w, &q);
        basis.push(std::mem::take(&mut q));
        alphas.push(alpha);
        orthogonalize(&mut w, &basis);
        let beta = norm(&w);
        let j = basis.len();

        let breakdown = beta.to_f64_lossy() <= 1e-10 * scale;
        let full = j >= cap;
        if breakdown || full || j.is_multiple_of(config.check_every) {
            let (theta, last) = tridiagonal_eigen_last_row(&alphas, &betas)?;
            let top = theta[0].to_f64_lossy();
            let residual = (beta * last[0]).abs().to_f64_lossy();
            let settled = prev_theta
                .map(|p| (top - p).abs() <= config.ritz_tol * top.abs().max(1.0))
                .unwrap_or(false);
            prev_theta = Some(top);
            let small = residual <= config.residual_tol * scale;
            if (settled && small) || (full && small) {
                return Ok(LanczosResult {
                    value: top,
                    residual,
                    iterations: j,
                    restarts,
                });
            }
            if full {
                return Err(Error::NotConverged {
                    iterations: j,
                    residual,
                });
            }
            if breakdown {
                // invariant subspace; continue from a fresh direction
                match fresh_vector(dim, &basis, &mut rng) {
                    Some(v) => {
                        q = v;
                        betas.push(S::zero());
                        restarts += 1;
                        continue;
                    }
                    None => {
                        return Ok(LanczosResult {
                            value: top,
                            residual,
                            iterations: j,
                            restarts,
                        })
                    }
                }
            }
        }
        betas.push(beta);
        q = w.iter().map(|&x| x / beta).collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::eigenvalues;

    fn cycle(n: usize) -> Matrix<f64> {
        Matrix::from_fn(n, n, |i, j| {
            if (i + 1) % n == j || (j + 1) % n == i {
                1.0
            } else {
                0.0
            }
        })
    }

    #[test]
    fn cycle_second_eigenvalue() {
        for n in [5usize, 12, 40] {
            let r = top_eigenvalue_deflated(&cycle(n), 2.0, &LanczosConfig::default()).unwrap();
            let expect = 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
            assert!((r.value - expect).abs() < 1e-9, "n={n}: {}", r.value);
        }
    }

    #[test]
    fn complete_graph_breaks_down_immediately() {
        // K_6: λ₂ = −1 with multiplicity 5
        let k6 = Matrix::from_fn(6, 6, |i, j| if i == j { 0.0 } else { 1.0 });
        let r = top_eigenvalue_deflated(&k6, 5.0, &LanczosConfig::default()).unwrap();
        assert!((r.value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn disconnected_graph_returns_degree() {
        // two disjoint triangles
        let m = Matrix::from_fn(
            6,
            6,
            |i, j| if i != j && i / 3 == j / 3 { 1.0 } else { 0.0 },
        );
        let r = top_eigenvalue_deflated(&m, 2.0, &LanczosConfig::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn agrees_with_dense_on_random_regular_like_matrix() {
        // circulant with several offsets: regular, all-ones is an eigenvector
        let n = 64;
        let offs = [1usize, 5, 11];
        let m = Matrix::from_fn(n, n, |i, j| {
            let d = (i + n - j) % n;
            if offs.iter().any(|&o| d == o || d == n - o) {
                1.0
            } else {
                0.0
            }
        });
        let dense = eigenvalues(&m).unwrap();
        let r = top_eigenvalue_deflated(&m, 6.0, &LanczosConfig::default()).unwrap();
        assert!((r.value - dense[1]).abs() < 1e-9);
        let again = top_eigenvalue_deflated(&m, 6.0, &LanczosConfig::default()).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn single_precision_run() {
        let m: Matrix<f32> = cycle(10).map(|&x| x as f32);
        let cfg = LanczosConfig {
            ritz_tol: 1e-5,
            residual_tol: 1e-4,
            ..LanczosConfig::default()
        };
        let r = top_eigenvalue_deflated(&m, 2.0, &cfg).unwrap();
        let expect = 2.0 * (std::f64::consts::PI / 5.0).cos();
        assert!((r.value - expect).abs() < 1e-4);
    }

    #[test]
    fn iteration_cap_reports_failure() {
        let cfg = LanczosConfig {
            max_basis: 3,
            ..LanczosConfig::default()
        };
        let err = top_eigenvalue_deflated(&cycle(200), 2.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::NotConverged { .. }));
    }
}
