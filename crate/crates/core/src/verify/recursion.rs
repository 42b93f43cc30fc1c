//! The recursion behind the induction on `n`: with `Γ^(i)` the subgroup
//! fixing `n−i+1..n` and `B^(k,i)` the quotient of
//! `G_{k,i} = Cay(Γ^(i), T_k ∩ Γ^(i))`,
//!
//! * `λ₂(B^(k,i)) − λ₂(B^(k,i+1)) = λ₂(B^(k+1,i))` for `k ≤ m−2`, and
//!   `= |T_m|` for `k = m−1`;
//! * `H_{k+1,i} = Cay(Γ^(i) ∩ Γ_{k+1}, T_k ∩ Γ_{k+1} ∩ Γ^(i))` is isomorphic
//!   to `G_{k,i+1}` by conjugation with the transposition `(k+1, n−i)`.
//!
//! `a = n − m` is the largest value the symmetric group admits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_graph, dense_spectrum};
use crate::perm::{conjugate, Permutation, VertexIndex};
use crate::quotient::{lambda2_counting, quotient_matrix_in};
use crate::sets::{build_connection_set, derive_tk, ConnectionSet, FamilyIndex, StabilizerScope};

use super::sweep::ROUNDING_TOL;

/// Graphs up to this order get the explicit edge-map check.
const EDGE_MAP_MAX_VERTICES: u64 = 720;
/// Graphs up to this order also get a dense spectrum comparison.
const SPECTRUM_MAX_VERTICES: u64 = 120;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferenceCheck {
    pub k: usize,
    pub i: usize,
    /// `λ₂(B^(k,i)) − λ₂(B^(k,i+1))`.
    pub difference: i64,
    /// `λ₂(B^(k+1,i))`, or `|T_m|` when `k = m−1`.
    pub expected: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsomorphismCheck {
    pub k: usize,
    pub i: usize,
    /// `|T_k ∩ Γ_{k+1} ∩ Γ^(i)|`.
    pub h_valency: usize,
    /// `|T_k ∩ Γ^(i+1)|`.
    pub g_valency: usize,
    /// Conjugation by `σ` carries one connection set onto the other.
    pub sets_correspond: bool,
    /// `γ ↦ σγσ` maps every neighbourhood onto a neighbourhood.
    pub edge_map: Option<bool>,
    pub spectra_match: Option<bool>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecursionReport {
    pub n: usize,
    pub family: FamilyIndex,
    pub m: usize,
    pub a: usize,
    /// `λ₂(B^(k,i))` indexed `[k][i]`, `0 ≤ k ≤ m−1`, `0 ≤ i ≤ a−1`.
    pub lambda2: Vec<Vec<i64>>,
    /// Every dense quotient `λ₂` is an integer equal to the counting value.
    pub counting_agrees: bool,
    pub differences: Vec<DifferenceCheck>,
    pub isomorphisms: Vec<IsomorphismCheck>,
    pub holds: bool,
}

fn quotient_lambda2(
    tk_i: &ConnectionSet,
    scope: &StabilizerScope,
    k: usize,
) -> Result<(i64, bool)> {
    let dense = quotient_matrix_in(scope, tk_i)?.lambda2()?;
    let counted = lambda2_counting(tk_i, k)?;
    let rounded = dense.round();
    let agrees = (dense - rounded).abs() < ROUNDING_TOL && rounded as i64 == counted;
    Ok((rounded as i64, agrees))
}

/// Runs both identities. Graph-level checks (edge map, spectra) are limited
/// to small scopes; larger cases are checked on connection sets alone.
pub fn verify_recursion_identities(n: usize, family: FamilyIndex) -> Result<RecursionReport> {
    let t = build_connection_set(n, family)?;
    let m = family.max_support();
    if m > n {
        return Err(Error::Domain(format!("family {family} needs n >= {m}")));
    }
    let a = n - m;
    let tails: Vec<StabilizerScope> = (0..a)
        .map(|i| StabilizerScope::fixing_tail(n, i))
        .collect::<Result<_>>()?;

    let mut lambda2 = vec![Vec::with_capacity(a); m];
    let mut counting_agrees = true;
    for k in 0..m {
        let tk = derive_tk(&t, k);
        for scope in &tails {
            let (l2, ok) = quotient_lambda2(&tk.restrict(scope), scope, k)?;
            counting_agrees &= ok;
            lambda2[k].push(l2);
        }
    }

    let t_m = derive_tk(&t, m).len() as i64;
    let mut differences = Vec::new();
    for k in 0..m {
        for i in 0..a.saturating_sub(1) {
            let difference = lambda2[k][i] - lambda2[k][i + 1];
            let expected = if k + 1 == m { t_m } else { lambda2[k + 1][i] };
            differences.push(DifferenceCheck {
                k,
                i,
                difference,
                expected,
                holds: difference == expected,
            });
        }
    }

    let mut isomorphisms = Vec::new();
    for k in 0..m {
        let tk = derive_tk(&t, k);
        for i in 0..a.saturating_sub(1) {
            isomorphisms.push(check_isomorphism(n, &tk, k, i)?);
        }
    }

    let holds = counting_agrees
        && differences.iter().all(|d| d.holds)
        && isomorphisms.iter().all(|c| c.holds);
    Ok(RecursionReport {
        n,
        family,
        m,
        a,
        lambda2,
        counting_agrees,
        differences,
        isomorphisms,
        holds,
    })
}

fn check_isomorphism(n: usize, tk: &ConnectionSet, k: usize, i: usize) -> Result<IsomorphismCheck> {
    let h_scope = StabilizerScope::fixing_tail(n, i)?.fixing(k + 1);
    let g_scope = StabilizerScope::fixing_tail(n, i + 1)?;
    let h_set = tk.restrict(&h_scope);
    let g_set = tk.restrict(&g_scope);
    let sigma = Permutation::from_cycles(n, &[vec![k + 1, n - i]])?;

    let mut image: Vec<Permutation> = h_set
        .iter()
        .map(|p| conjugate(p, &sigma))
        .collect::<Result<_>>()?;
    image.sort();
    let sets_correspond = image.as_slice() == g_set.elements();

    let order = h_scope.order();
    let edge_map = if sets_correspond && order <= EDGE_MAP_MAX_VERTICES {
        Some(edge_map_holds(&h_scope, &h_set, &g_scope, &g_set, &sigma)?)
    } else {
        None
    };
    let spectra_match = if sets_correspond && order <= SPECTRUM_MAX_VERTICES {
        let hs = dense_spectrum(&build_graph(&h_scope, &h_set)?)?;
        let gs = dense_spectrum(&build_graph(&g_scope, &g_set)?)?;
        Some(hs.len() == gs.len() && hs.iter().zip(&gs).all(|(x, y)| (x - y).abs() < 1e-9))
    } else {
        None
    };
    Ok(IsomorphismCheck {
        k,
        i,
        h_valency: h_set.len(),
        g_valency: g_set.len(),
        sets_correspond,
        holds: sets_correspond && edge_map != Some(false) && spectra_match != Some(false),
        edge_map,
        spectra_match,
    })
}

fn edge_map_holds(
    h_scope: &StabilizerScope,
    h_set: &ConnectionSet,
    g_scope: &StabilizerScope,
    g_set: &ConnectionSet,
    sigma: &Permutation,
) -> Result<bool> {
    let h = build_graph(h_scope, h_set)?;
    let g = build_graph(g_scope, g_set)?;
    if h.vertex_count() != g.vertex_count() {
        return Ok(false);
    }
    let phi =
        |v: VertexIndex| -> Result<VertexIndex> { g.index_of(&conjugate(&h.element(v)?, sigma)?) };
    for v in 0..h.vertex_count() as u64 {
        let v = VertexIndex(v);
        let mut mapped: Vec<VertexIndex> = h
            .neighbors(v)?
            .into_iter()
            .map(phi)
            .collect::<Result<_>>()?;
        let mut expected = g.neighbors(phi(v)?)?;
        mapped.sort();
        expected.sort();
        if mapped != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpositions_at_seven() {
        // m = 2, a = 5: a 2 × 5 table
        let r = verify_recursion_identities(7, FamilyIndex::new(&[1]).unwrap()).unwrap();
        assert_eq!((r.m, r.a), (2, 5));
        assert!(r.holds, "{r:?}");
        // B^(0,i) is the quotient of Cay(S_{7−i}, transpositions): λ₂ = C(7−i,2) − (7−i)
        let row0: Vec<i64> = (0..5)
            .map(|i| {
                let d = 7 - i as i64;
                d * (d - 1) / 2 - d
            })
            .collect();
        assert_eq!(r.lambda2[0], row0);
        // the k = m−1 difference is |T_2| = |T_m|
        let last: Vec<&DifferenceCheck> = r.differences.iter().filter(|d| d.k == 1).collect();
        assert!(last.iter().all(|d| d.expected == 1));
        // H_{1,i} and G_{0,i+1} share a valency
        for c in &r.isomorphisms {
            assert_eq!(c.h_valency, c.g_valency);
        }
        assert!(r.isomorphisms.iter().any(|c| c.spectra_match == Some(true)));
    }

    #[test]
    fn no_range_when_support_fills_the_degree() {
        let r =
            verify_recursion_identities(7, FamilyIndex::new(&[1, 2, 3, 4, 5, 6]).unwrap()).unwrap();
        assert_eq!(r.a, 2);
        assert!(r.holds);
        assert_eq!(r.differences.len(), 5);
    }
}
