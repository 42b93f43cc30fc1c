//! Independent checks against known spectra: the two transposition
//! corollaries, the interchange-process oracle (spectral gap of a
//! transposition Cayley graph equals the algebraic connectivity of its
//! transposition graph), and the hypercube/prism examples of the
//! partition bound.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sweep::ROUNDING_TOL;
use super::{all_outcomes, Outcome};
use crate::bounds::{hypercube, prism, random_matching, SimpleGraph};
use crate::error::{Error, Result};
use crate::graph::{build_graph, dense_spectrum, lanczos_lambda2, CayleyGraph, MAX_DENSE_VERTICES};
use crate::lanczos::LanczosConfig;
use crate::perm::Permutation;
use crate::sets::{ConnectionSet, Provenance, StabilizerScope};

/// Tolerance of the interchange-process comparison.
pub const ALDOUS_TOL: f64 = 1e-8;
/// Tolerance of the hypercube and prism comparisons.
pub const EXAMPLE_TOL: f64 = 1e-9;

/// `λ₂` of a connected Cayley graph: dense when small, Lanczos otherwise.
fn cayley_lambda2(g: &CayleyGraph, config: &LanczosConfig) -> Result<f64> {
    if g.vertex_count() <= MAX_DENSE_VERTICES.min(720) {
        Ok(dense_spectrum(g)?[1])
    } else {
        Ok(lanczos_lambda2(g, config)?.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TranspositionGraphKind {
    Path,
    Star,
    Complete,
    /// A uniform labelled tree from a random Prüfer sequence.
    RandomTree,
    /// A random spanning tree plus each remaining edge with probability 1/3.
    RandomGraph,
}

/// Edges `{p, q}` (1-based, `p < q`) of a transposition graph on `[n]`.
pub fn transposition_edges(
    kind: TranspositionGraphKind,
    n: usize,
    seed: u64,
) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = match kind {
        TranspositionGraphKind::Path => (1..n).map(|i| (i, i + 1)).collect(),
        TranspositionGraphKind::Star => (2..=n).map(|j| (1, j)).collect(),
        TranspositionGraphKind::Complete => (1..=n)
            .flat_map(|p| (p + 1..=n).map(move |q| (p, q)))
            .collect(),
        TranspositionGraphKind::RandomTree => prufer_tree(n, &mut rng),
        TranspositionGraphKind::RandomGraph => {
            let mut e = prufer_tree(n, &mut rng);
            for p in 1..=n {
                for q in p + 1..=n {
                    if !e.contains(&(p, q)) && rng.gen_bool(1.0 / 3.0) {
                        e.push((p, q));
                    }
                }
            }
            e
        }
    };
    edges.sort_unstable();
    edges
}

fn prufer_tree(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(1..=n)).collect();
    let mut degree = vec![1usize; n + 1];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in &seq {
        let leaf = (1..=n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf.min(s), leaf.max(s)));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (1..=n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// The connection set of transpositions `(p, q)` for the given edges.
pub fn transposition_set(n: usize, edges: &[(usize, usize)]) -> Result<ConnectionSet> {
    let elems = edges
        .iter()
        .map(|&(p, q)| Permutation::from_cycles(n, &[vec![p, q]]))
        .collect::<Result<Vec<_>>>()?;
    ConnectionSet::new(n, elems, Provenance::Explicit { depth: 0 })
}

fn transposition_graph(t: &ConnectionSet) -> Result<SimpleGraph> {
    let n = t.degree();
    let mut edges = Vec::with_capacity(t.len());
    for tau in t.iter() {
        let support: Vec<usize> = tau.support().into_iter().collect();
        if support.len() != 2 {
            return Err(Error::Domain(format!("{tau} is not a transposition")));
        }
        edges.push((support[0] - 1, support[1] - 1));
    }
    SimpleGraph::from_edges(n, &edges)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AldousCheck {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    /// `|T| − λ₂(Cay(S_n, T))`.
    pub spectral_gap: f64,
    /// Second-smallest Laplacian eigenvalue of `Tra(T)`.
    pub algebraic_connectivity: f64,
    pub holds: bool,
}

/// Compares the spectral gap of `Cay(S_n, T)` with the algebraic
/// connectivity of the transposition graph. `T` must consist of
/// transpositions forming a connected graph on `[n]`.
pub fn verify_aldous_oracle(t: &ConnectionSet, config: &LanczosConfig) -> Result<AldousCheck> {
    let n = t.degree();
    let tra = transposition_graph(t)?;
    if !tra.is_connected() {
        return Err(Error::Hypothesis(
            "the transposition graph is disconnected".into(),
        ));
    }
    let g = build_graph(&StabilizerScope::full(n), t)?;
    let spectral_gap = t.len() as f64 - cayley_lambda2(&g, config)?;
    let algebraic_connectivity = tra.algebraic_connectivity()?;
    let edges = t
        .iter()
        .map(|tau| {
            let s: Vec<usize> = tau.support().into_iter().collect();
            (s[0], s[1])
        })
        .collect();
    Ok(AldousCheck {
        n,
        edges,
        spectral_gap,
        algebraic_connectivity,
        holds: (spectral_gap - algebraic_connectivity).abs() < ALDOUS_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryRow {
    pub n: usize,
    /// `λ₂` for all transpositions.
    pub complete_lambda2: f64,
    pub complete_gap: f64,
    /// `λ₂` for the star transpositions `(1, j)`.
    pub star_lambda2: f64,
    pub star_gap: f64,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub rows: Vec<CorollaryRow>,
    pub outcome: Outcome,
}

fn rounds_to(x: f64, target: i64) -> bool {
    (x - x.round()).abs() < ROUNDING_TOL && x.round() as i64 == target
}

/// Spectral gaps `n` (all transpositions) and `1` (star) for each `n`.
pub fn verify_corollaries(ns: &[usize], config: &LanczosConfig) -> Result<CorollaryReport> {
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        if !(3..=7).contains(&n) {
            return Err(Error::Domain(format!(
                "corollary checks need 3 <= n <= 7, got {n}"
            )));
        }
        let complete = transposition_set(
            n,
            &transposition_edges(TranspositionGraphKind::Complete, n, 0),
        )?;
        let star = transposition_set(n, &transposition_edges(TranspositionGraphKind::Star, n, 0))?;
        let scope = StabilizerScope::full(n);
        let complete_lambda2 = cayley_lambda2(&build_graph(&scope, &complete)?, config)?;
        let star_lambda2 = cayley_lambda2(&build_graph(&scope, &star)?, config)?;
        let complete_gap = complete.len() as f64 - complete_lambda2;
        let star_gap = star.len() as f64 - star_lambda2;
        let ok = rounds_to(complete_gap, n as i64)
            && rounds_to(star_gap, 1)
            && rounds_to(star_lambda2, n as i64 - 2);
        rows.push(CorollaryRow {
            n,
            complete_lambda2,
            complete_gap,
            star_lambda2,
            star_gap,
            outcome: Outcome::from_bool(ok),
        });
    }
    let outcome = all_outcomes(rows.iter().map(|r| r.outcome));
    Ok(CorollaryReport { rows, outcome })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypercubeRow {
    pub d: usize,
    /// `None` for the identity matching, else the shuffle seed.
    pub matching_seed: Option<u64>,
    pub lambda2: f64,
    pub expected: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrismRow {
    pub n: usize,
    pub lambda2: f64,
    pub expected: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example24Report {
    pub hypercubes: Vec<HypercubeRow>,
    pub prisms: Vec<PrismRow>,
    pub outcome: Outcome,
}

/// Random matchings tried per hypercube dimension besides the identity.
const RANDOM_MATCHINGS: u64 = 3;

/// Two copies of `Q_d` joined by a perfect matching have `λ₂ = d − 1`;
/// the prism `C_n □ K₂` has `λ₂ = 2cos(2π/n) + 1` for `n ≥ 4`.
///
/// Hypercube pairs use the dense solver. Prisms use band reduction, which
/// is orthogonal like the dense solver but quadratic rather than cubic in `n`.
pub fn verify_example24(
    dims: impl IntoIterator<Item = usize>,
    cycle_lengths: impl IntoIterator<Item = usize>,
) -> Result<Example24Report> {
    let mut hypercubes = Vec::new();
    for d in dims {
        if !(1..=8).contains(&d) {
            return Err(Error::Domain(format!(
                "hypercube dimension {d} not in 1..=8"
            )));
        }
        let q = hypercube(d);
        let size = 1usize << d;
        let seeds = std::iter::once(None).chain((1..=RANDOM_MATCHINGS).map(Some));
        for matching_seed in seeds {
            let matching = match matching_seed {
                None => (0..size).collect(),
                Some(s) => random_matching(size, s),
            };
            let lambda2 = q.twin_with_matching(&matching)?.lambda2()?;
            let expected = d as f64 - 1.0;
            hypercubes.push(HypercubeRow {
                d,
                matching_seed,
                lambda2,
                expected,
                holds: (lambda2 - expected).abs() < EXAMPLE_TOL,
            });
        }
    }
    let mut prisms = Vec::new();
    for n in cycle_lengths {
        if !(4..=512).contains(&n) {
            return Err(Error::Domain(format!("prism length {n} not in 4..=512")));
        }
        let lambda2 = prism(n).lambda2_banded()?;
        let expected = 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos() + 1.0;
        prisms.push(PrismRow {
            n,
            lambda2,
            expected,
            holds: (lambda2 - expected).abs() < EXAMPLE_TOL,
        });
    }
    let outcome = all_outcomes(
        hypercubes
            .iter()
            .map(|r| r.holds)
            .chain(prisms.iter().map(|r| r.holds))
            .map(Outcome::from_bool),
    );
    Ok(Example24Report {
        hypercubes,
        prisms,
        outcome,
    })
}

/// `count` seeded transposition sets on `[n]` with connected transposition
/// graphs, alternating random trees and random graphs.
pub fn random_connected_transposition_sets(
    n: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<ConnectionSet>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds = [
        TranspositionGraphKind::RandomTree,
        TranspositionGraphKind::RandomGraph,
    ];
    (0..count)
        .map(|_| {
            let kind = *kinds.choose(&mut rng).expect("non-empty");
            transposition_set(n, &transposition_edges(kind, n, rng.gen()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prufer_trees_are_spanning_trees() {
        for seed in 0..20 {
            let e = transposition_edges(TranspositionGraphKind::RandomTree, 7, seed);
            assert_eq!(e.len(), 6);
            let g = SimpleGraph::from_edges(
                7,
                &e.iter().map(|&(p, q)| (p - 1, q - 1)).collect::<Vec<_>>(),
            )
            .unwrap();
            assert!(g.is_connected());
        }
    }

    #[test]
    fn path_oracle_at_five() {
        let t =
            transposition_set(5, &transposition_edges(TranspositionGraphKind::Path, 5, 0)).unwrap();
        let c = verify_aldous_oracle(&t, &LanczosConfig::default()).unwrap();
        let expected = 2.0 - 2.0 * (std::f64::consts::PI / 5.0).cos();
        assert!((c.spectral_gap - expected).abs() < 1e-9);
        assert!(c.holds);
    }

    #[test]
    fn disconnected_transposition_graph_is_rejected() {
        let t = transposition_set(4, &[(1, 2), (3, 4)]).unwrap();
        assert!(matches!(
            verify_aldous_oracle(&t, &LanczosConfig::default()),
            Err(Error::Hypothesis(_))
        ));
        let not_transpositions =
            ConnectionSet::from_cycle_strings(4, &["(1,2,3)", "(1,3,2)"]).unwrap();
        assert!(verify_aldous_oracle(&not_transpositions, &LanczosConfig::default()).is_err());
    }

    #[test]
    fn small_corollaries() {
        let r = verify_corollaries(&[3, 4, 5], &LanczosConfig::default()).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);
        assert!((r.rows[0].complete_gap - 3.0).abs() < 1e-9);
    }

    #[test]
    fn example_values() {
        let r = verify_example24([2, 4], [4, 6, 17]).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);
        assert!((r.prisms[1].lambda2 - 2.0).abs() < 1e-9);
        assert_eq!(r.hypercubes.len(), 8);
    }
}
