//! Quotient matrices of the left coset partition, computed by counting.
//!
//! `b_st = |{τ ∈ T_k : τ(t) = s}|`. The second eigenvalue and the full
//! spectrum have closed forms in terms of a handful of these counts.

use serde::{Deserialize, Serialize};

use crate::dense::eigenvalues;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::sets::{derive_tk, ConnectionSet, StabilizerScope};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientMatrix {
    k: usize,
    /// Moved points labelling rows and columns.
    points: Vec<usize>,
    entries: Matrix<i64>,
}

impl QuotientMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn entries(&self) -> &Matrix<i64> {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    /// `b_st` by point labels.
    pub fn get(&self, s: usize, t: usize) -> i64 {
        let pos = |p: usize| {
            self.points
                .iter()
                .position(|&x| x == p)
                .unwrap_or_else(|| panic!("point {p} is not a label"))
        };
        self.entries[(pos(s), pos(t))]
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries.is_symmetric()
    }

    pub fn row_sums(&self) -> Vec<i64> {
        self.entries.row_sums()
    }

    /// Dense spectrum, descending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        eigenvalues(&self.entries.to_scalar::<f64>())
    }

    /// Dense second eigenvalue.
    pub fn lambda2(&self) -> Result<f64> {
        let spec = self.spectrum()?;
        spec.get(1)
            .copied()
            .ok_or_else(|| Error::Domain("a 1×1 quotient has no λ₂".into()))
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        self.entries.write_csv(out)
    }
}

/// `B^(k)` on `[n]` for an already filtered `T_k`.
pub fn quotient_matrix(n: usize, tk: &ConnectionSet) -> Result<QuotientMatrix> {
    quotient_matrix_in(&StabilizerScope::full(n), tk)
}

/// Quotient over the moved points of `scope`; `tk` must lie in the scope.
pub fn quotient_matrix_in(scope: &StabilizerScope, tk: &ConnectionSet) -> Result<QuotientMatrix> {
    if tk.degree() != scope.degree() {
        return Err(Error::SizeMismatch {
            expected: scope.degree(),
            found: tk.degree(),
        });
    }
    if let Some(tau) = tk.iter().find(|t| !scope.contains(t)) {
        return Err(Error::ScopeViolation {
            element: tau.to_string(),
            point: scope.violation(tau).unwrap_or(0),
        });
    }
    let points = scope.moved_points();
    let q = points.len();
    let mut entries = Matrix::zeros(q, q);
    let mut index = vec![usize::MAX; scope.degree() + 1];
    for (a, &p) in points.iter().enumerate() {
        index[p] = a;
    }
    for tau in tk.iter() {
        for (col, &t) in points.iter().enumerate() {
            entries[(index[tau.image(t)], col)] += 1;
        }
    }
    Ok(QuotientMatrix {
        k: tk.provenance().depth(),
        points,
        entries,
    })
}

fn check_depth(n: usize, k: usize) -> Result<()> {
    if k + 2 > n {
        return Err(Error::Hypothesis(format!(
            "the closed forms need k + 2 <= n, got k = {k}, n = {n}"
        )));
    }
    Ok(())
}

/// `|T_k ∩ Γ_{k+1}| − |T_k ∩ Γ_{k+2,k+1}|` for an already filtered `T_k`.
pub fn lambda2_counting(tk: &ConnectionSet, k: usize) -> Result<i64> {
    check_depth(tk.degree(), k)?;
    Ok(tk.count_fixing(k + 1) as i64 - tk.count_mapping(k + 2, k + 1) as i64)
}

/// The counting value of `λ₂(B^(k))` for `T`.
pub fn quotient_lambda2_closed_form(n: usize, t: &ConnectionSet, k: usize) -> Result<i64> {
    if t.degree() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: t.degree(),
        });
    }
    lambda2_counting(&derive_tk(t, k), k)
}

/// Closed-form spectrum of `B^(k)`: `|T_k|` once, `−b₁₂` with multiplicity
/// `k − 1`, `b_{k+1,k+1} − b_{k+1,k+2}` with multiplicity `n − k − 1`, and
/// `μ` once. At `k = 0` only the first and third terms occur (`n − 1`
/// copies of `b₁₁ − b₁₂`), since `μ` would duplicate `|T|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSpectrum {
    pub n: usize,
    pub k: usize,
    pub top: i64,
    pub minus_b12: i64,
    pub diag_minus_off: i64,
    pub mu: Option<i64>,
}

impl QuotientSpectrum {
    /// `(eigenvalue, multiplicity)` pairs with zero multiplicities dropped.
    pub fn pairs(&self) -> Vec<(i64, usize)> {
        let mut out = vec![(self.top, 1)];
        if self.k >= 2 {
            out.push((self.minus_b12, self.k - 1));
        }
        out.push((self.diag_minus_off, self.n - self.k - 1));
        if let Some(mu) = self.mu {
            out.push((mu, 1));
        }
        out
    }

    /// All eigenvalues repeated by multiplicity, descending.
    pub fn expanded(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self
            .pairs()
            .into_iter()
            .flat_map(|(x, m)| std::iter::repeat_n(x, m))
            .collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn trace(&self) -> i64 {
        self.pairs().iter().map(|&(x, m)| x * m as i64).sum()
    }

    /// `λ₂ = b_{k+1,k+1} − b_{k+1,k+2}`.
    pub fn lambda2(&self) -> i64 {
        self.diag_minus_off
    }

    /// `μ ≤ λ₂` and `−b₁₂ ≤ λ₂` whenever those eigenvalues occur.
    pub fn ordering_holds(&self) -> bool {
        let mu_ok = self.mu.is_none_or(|mu| mu <= self.diag_minus_off);
        let b12_ok = self.k < 2 || self.minus_b12 <= self.diag_minus_off;
        mu_ok && b12_ok
    }
}

/// Closed-form spectrum for an already filtered `T_k` in degree `n`.
pub fn quotient_spectrum_from_counts(tk: &ConnectionSet, k: usize) -> Result<QuotientSpectrum> {
    let n = tk.degree();
    check_depth(n, k)?;
    let b = |s: usize, t: usize| tk.count_mapping(t, s) as i64;
    let top = tk.len() as i64;
    if k == 0 {
        return Ok(QuotientSpectrum {
            n,
            k,
            top,
            minus_b12: -b(1, 2),
            diag_minus_off: b(1, 1) - b(1, 2),
            mu: None,
        });
    }
    let (d, o) = (b(k + 1, k + 1), b(k + 1, k + 2));
    let mu = d + (n - k - 1) as i64 * o - (n - k) as i64 * b(k + 1, 1);
    Ok(QuotientSpectrum {
        n,
        k,
        top,
        minus_b12: -b(1, 2),
        diag_minus_off: d - o,
        mu: Some(mu),
    })
}

pub fn quotient_spectrum_closed_form(
    n: usize,
    t: &ConnectionSet,
    k: usize,
) -> Result<QuotientSpectrum> {
    if t.degree() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: t.degree(),
        });
    }
    quotient_spectrum_from_counts(&derive_tk(t, k), k)
}

/// Weighted Laplacian of the permutation graph `Per(T)`: edge `{s, t}`
/// carries weight `b_st`.
pub fn permutation_graph_laplacian(n: usize, t: &ConnectionSet) -> Result<Matrix<i64>> {
    let b = quotient_matrix(n, t)?;
    let w = b.entries();
    Ok(Matrix::from_fn(n, n, |s, u| {
        if s == u {
            (0..n).filter(|&x| x != s).map(|x| w[(s, x)]).sum()
        } else {
            -w[(s, u)]
        }
    }))
}

/// Whether `B = |T|·I − L(Per(T))` holds entrywise.
pub fn laplacian_identity_holds(n: usize, t: &ConnectionSet) -> Result<bool> {
    let b = quotient_matrix(n, t)?;
    let l = permutation_graph_laplacian(n, t)?;
    let rhs = Matrix::<i64>::identity(n)
        .scale(t.len() as i64)
        .checked_sub(&l)?;
    Ok(&rhs == b.entries())
}

/// `M_n`: quotient of the permutahedron (adjacent transpositions).
pub fn permutahedron_quotient(n: usize) -> Matrix<i64> {
    let n_i = n as i64;
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            if i == 0 || i == n - 1 {
                n_i - 2
            } else {
                n_i - 3
            }
        } else if i.abs_diff(j) == 1 {
            1
        } else {
            0
        }
    })
}

/// `B_n`: quotient of `FJ(n, 2)`.
pub fn fj2_quotient(n: usize) -> Matrix<i64> {
    let n_i = n as i64;
    Matrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 if i == 0 || i == n - 1 => (n_i * n_i - n_i - 6) / 2,
        0 if i == 1 || i == n - 2 => (n_i * n_i - 3 * n_i - 2) / 2,
        0 => (n_i * n_i - 3 * n_i - 6) / 2,
        1 => n_i - 2,
        2 => 2,
        _ => 0,
    })
}

/// `B_n^(1)`: quotient of `FJ₁(n, 2)`.
pub fn fj1_quotient(n: usize) -> Matrix<i64> {
    assert!(n >= 4, "B_n^(1) needs n >= 4");
    let n_i = n as i64;
    let mut m = Matrix::zeros(n, n);
    m[(0, 1)] = n_i - 2;
    m[(0, 2)] = 2;
    m[(1, 0)] = n_i - 2;
    m[(1, 1)] = 1;
    m[(1, 2)] = 1;
    m[(2, 0)] = 2;
    m[(2, 1)] = 1;
    for i in 2..n {
        m[(i, i)] = if i == n - 1 {
            n_i - 1
        } else if i == 2 {
            n_i - 4
        } else {
            n_i - 2
        };
        if i + 1 < n {
            m[(i, i + 1)] = 1;
            m[(i + 1, i)] = 1;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{build_connection_set, reducible_set, rp2_subsets, FamilyIndex};

    fn family(n: usize, tags: &[u8]) -> ConnectionSet {
        build_connection_set(n, FamilyIndex::new(tags).unwrap()).unwrap()
    }

    #[test]
    fn transpositions_on_s7() {
        let t = family(7, &[1]);
        let b = quotient_matrix(7, &t).unwrap();
        for s in 1..=7 {
            for u in 1..=7 {
                assert_eq!(b.get(s, u), if s == u { 15 } else { 1 });
            }
        }
        assert!(b.is_symmetric());
        assert_eq!(b.row_sums(), vec![21; 7]);
        assert_eq!(quotient_lambda2_closed_form(7, &t, 0).unwrap(), 14);
        assert_eq!(quotient_lambda2_closed_form(7, &t, 1).unwrap(), 5);
        let spec = b.spectrum().unwrap();
        assert!((spec[0] - 21.0).abs() < 1e-12);
        assert!(spec[1..].iter().all(|x| (x - 14.0).abs() < 1e-12));
    }

    #[test]
    fn closed_form_matches_dense_small() {
        for n in [5usize, 7] {
            for fam in FamilyIndex::all() {
                if fam.min_degree() > n {
                    continue;
                }
                let t = build_connection_set(n, fam).unwrap();
                for k in 0..fam.max_support() {
                    if k + 2 > n {
                        continue;
                    }
                    let cs = quotient_spectrum_closed_form(n, &t, k).unwrap();
                    let tk = derive_tk(&t, k);
                    let b = quotient_matrix(n, &tk).unwrap();
                    assert_eq!(cs.trace(), b.entries().trace());
                    let dense = b.spectrum().unwrap();
                    for (x, y) in cs.expanded().iter().zip(&dense) {
                        assert!((*x as f64 - y).abs() < 1e-9, "{fam} k={k}: {x} vs {y}");
                    }
                    assert!(cs.ordering_holds(), "{fam} k={k}");
                }
            }
        }
    }

    #[test]
    fn k_zero_spectrum_shape() {
        let t = family(6, &[1, 2]);
        let cs = quotient_spectrum_closed_form(6, &t, 0).unwrap();
        assert_eq!(
            cs.pairs(),
            vec![(t.len() as i64, 1), (cs.diag_minus_off, 5)]
        );
        assert!(quotient_spectrum_closed_form(3, &family(3, &[1]), 2).is_err());
    }

    #[test]
    fn laplacian_identity() {
        for fam in FamilyIndex::all() {
            let t = build_connection_set(6, fam).unwrap();
            assert!(laplacian_identity_holds(6, &t).unwrap());
        }
        let l = permutation_graph_laplacian(5, &family(5, &[1])).unwrap();
        let spec = eigenvalues(&l.to_scalar::<f64>()).unwrap();
        assert!(spec[..4].iter().all(|x| (x - 5.0).abs() < 1e-12));
        assert!(spec[4].abs() < 1e-12);
    }

    #[test]
    fn reducible_quotients_match_displays() {
        for n in 4..=7 {
            let rp1 = reducible_set(n, 1).unwrap();
            assert_eq!(
                quotient_matrix(n, &rp1).unwrap().entries(),
                &permutahedron_quotient(n)
            );
            let rp2 = reducible_set(n, 2).unwrap();
            assert_eq!(
                quotient_matrix(n, &rp2).unwrap().entries(),
                &fj2_quotient(n),
                "n={n}"
            );
            let (first, _) = rp2_subsets(n).unwrap();
            assert_eq!(
                quotient_matrix(n, &first).unwrap().entries(),
                &fj1_quotient(n),
                "n={n}"
            );
        }
    }

    #[test]
    fn scoped_quotient() {
        let t = family(7, &[1]);
        let scope = StabilizerScope::fixing_tail(7, 2).unwrap();
        let b = quotient_matrix_in(&scope, &t.restrict(&scope)).unwrap();
        assert_eq!(b.size(), 5);
        assert_eq!(b.row_sums(), vec![10; 5]);
        assert!(quotient_matrix_in(&scope, &t).is_err());
    }
}
