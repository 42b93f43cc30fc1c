//! Matrix-free Cayley graphs on pointwise stabilizers of `S_n`.
//!
//! Vertices are the elements of the scope, indexed by the Lehmer rank of
//! their restriction to the moved points (relabelled `0..m` in increasing
//! order), so the identity is vertex 0. The neighbours of `γ` are `γ∘τ`
//! for `τ ∈ T` (apply `τ` first), which makes the left cosets
//! `{γ : γ(j) = i}` an equitable partition for every connection set.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::dense::eigenvalues;
use crate::error::{Error, Result};
use crate::lanczos::{top_eigenvalue_deflated, LanczosConfig, LanczosResult, SymmetricOperator};
use crate::matrix::Matrix;
use crate::perm::{rank0, unrank_into, Permutation, VertexIndex};
use crate::scalar::Scalar;
use crate::sets::{ConnectionSet, StabilizerScope};

/// Largest vertex count handled at all (`8!`).
pub const MAX_GRAPH_VERTICES: u64 = 40_320;

/// Largest vertex count for dense eigendecomposition.
pub const MAX_DENSE_VERTICES: usize = 2_000;

/// Above this many stored entries (`|V|·|T|`) the matvec composes on the fly
/// instead of keeping translation tables.
const MAX_TABLE_ENTRIES: usize = 60_000_000;

const CHUNK: usize = 256;

/// Shared translation tables `v ↦ rank(π_v ∘ τ)`, keyed by the local images
/// of `τ`. Tables only depend on the local permutation, so one cache serves
/// every scope with the same number of moved points.
#[derive(Default)]
pub struct TranslationCache {
    tables: Mutex<HashMap<Box<[u8]>, Arc<[u32]>>>,
}

impl TranslationCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.tables.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get_or_build(&self, local: &[u8]) -> Arc<[u32]> {
        if let Some(t) = self.tables.lock().expect("cache lock").get(local) {
            return Arc::clone(t);
        }
        let table = build_translation(local);
        let mut map = self.tables.lock().expect("cache lock");
        Arc::clone(map.entry(local.into()).or_insert(table))
    }
}

fn next_permutation(p: &mut [u8]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len())
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn build_translation(local: &[u8]) -> Arc<[u32]> {
    let m = local.len();
    let mut pi: Vec<u8> = (0..m as u8).collect();
    let mut img = vec![0u8; m];
    let mut out = Vec::with_capacity(crate::perm::factorial(m) as usize);
    loop {
        for (slot, &t) in img.iter_mut().zip(local) {
            *slot = pi[t as usize];
        }
        out.push(rank0(&img) as u32);
        if !next_permutation(&mut pi) {
            break;
        }
    }
    out.into()
}

pub struct CayleyGraph {
    scope: StabilizerScope,
    connection: ConnectionSet,
    /// Moved points of the scope, 0-based, increasing.
    moved: Vec<usize>,
    /// `local_pos[p] = a` when `moved[a] = p`.
    local_pos: Vec<u8>,
    /// Local images of each connection element.
    local: Vec<Vec<u8>>,
    vertex_count: usize,
    cache: Option<Arc<TranslationCache>>,
    tables: OnceLock<Vec<Arc<[u32]>>>,
    table_limit: usize,
}

impl std::fmt::Debug for CayleyGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CayleyGraph")
            .field("scope", &self.scope.to_string())
            .field("degree", &self.connection.len())
            .field("vertex_count", &self.vertex_count)
            .finish()
    }
}

/// `Cay(scope, T)`; every element of `T` must fix the scope's fixed points.
pub fn build_graph(scope: &StabilizerScope, t: &ConnectionSet) -> Result<CayleyGraph> {
    CayleyGraph::build(scope, t, None)
}

/// [`build_graph`] with translation tables shared through `cache`.
pub fn build_graph_cached(
    scope: &StabilizerScope,
    t: &ConnectionSet,
    cache: &Arc<TranslationCache>,
) -> Result<CayleyGraph> {
    CayleyGraph::build(scope, t, Some(Arc::clone(cache)))
}

impl CayleyGraph {
    fn build(
        scope: &StabilizerScope,
        t: &ConnectionSet,
        cache: Option<Arc<TranslationCache>>,
    ) -> Result<Self> {
        let n = scope.degree();
        if t.degree() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: t.degree(),
            });
        }
        let order = scope.order();
        if order > MAX_GRAPH_VERTICES {
            return Err(Error::CapExceeded {
                what: "Cayley graph vertex count",
                size: order as usize,
                cap: MAX_GRAPH_VERTICES as usize,
            });
        }
        for tau in t.iter() {
            if let Some(point) = scope.violation(tau) {
                return Err(Error::ScopeViolation {
                    element: tau.to_string(),
                    point,
                });
            }
        }
        let moved: Vec<usize> = scope.moved_points().iter().map(|p| p - 1).collect();
        let mut local_pos = vec![u8::MAX; n];
        for (a, &p) in moved.iter().enumerate() {
            local_pos[p] = a as u8;
        }
        let local = t
            .iter()
            .map(|tau| {
                let img = tau.images0();
                moved.iter().map(|&p| local_pos[img[p] as usize]).collect()
            })
            .collect();
        Ok(Self {
            scope: scope.clone(),
            connection: t.clone(),
            moved,
            local_pos,
            local,
            vertex_count: order as usize,
            cache,
            tables: OnceLock::new(),
            table_limit: MAX_TABLE_ENTRIES,
        })
    }

    pub fn degree(&self) -> usize {
        self.scope.degree()
    }

    pub fn scope(&self) -> &StabilizerScope {
        &self.scope
    }

    pub fn connection(&self) -> &ConnectionSet {
        &self.connection
    }

    /// Valency `|T|`.
    pub fn valency(&self) -> usize {
        self.connection.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// The group element at vertex `v`.
    pub fn element(&self, v: VertexIndex) -> Result<Permutation> {
        if v.0 >= self.vertex_count as u64 {
            return Err(Error::Range {
                index: v.0,
                n: self.degree(),
                order: self.vertex_count as u64,
            });
        }
        let mut pi = vec![0u8; self.moved.len()];
        unrank_into(v.0, &mut pi);
        let mut images: Vec<u8> = (0..self.degree() as u8).collect();
        for (a, &p) in self.moved.iter().enumerate() {
            images[p] = self.moved[pi[a] as usize] as u8;
        }
        Ok(Permutation::from_images0(images))
    }

    /// The vertex of a scope element.
    pub fn index_of(&self, p: &Permutation) -> Result<VertexIndex> {
        if p.degree() != self.degree() {
            return Err(Error::SizeMismatch {
                expected: self.degree(),
                found: p.degree(),
            });
        }
        if let Some(point) = self.scope.violation(p) {
            return Err(Error::ScopeViolation {
                element: p.to_string(),
                point,
            });
        }
        let img = p.images0();
        let local: Vec<u8> = self
            .moved
            .iter()
            .map(|&q| self.local_pos[img[q] as usize])
            .collect();
        Ok(VertexIndex(rank0(&local)))
    }

    /// Neighbours of `v`, one per connection element, in connection order.
    pub fn neighbors(&self, v: VertexIndex) -> Result<Vec<VertexIndex>> {
        if v.0 >= self.vertex_count as u64 {
            return Err(Error::Range {
                index: v.0,
                n: self.degree(),
                order: self.vertex_count as u64,
            });
        }
        let m = self.moved.len();
        let mut pi = vec![0u8; m];
        unrank_into(v.0, &mut pi);
        let mut img = vec![0u8; m];
        Ok(self
            .local
            .iter()
            .map(|t| {
                for (slot, &a) in img.iter_mut().zip(t) {
                    *slot = pi[a as usize];
                }
                VertexIndex(rank0(&img))
            })
            .collect())
    }

    fn uses_tables(&self) -> bool {
        self.vertex_count.saturating_mul(self.local.len()) <= self.table_limit
    }

    fn tables(&self) -> &[Arc<[u32]>] {
        self.tables.get_or_init(|| {
            self.local
                .par_iter()
                .map(|t| match &self.cache {
                    Some(c) => c.get_or_build(t),
                    None => build_translation(t),
                })
                .collect()
        })
    }

    /// Connected iff a breadth-first search from the identity reaches every vertex.
    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.vertex_count];
        let mut components = 0;
        let mut queue = VecDeque::new();
        let tables = self.uses_tables().then(|| self.tables());
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                let next: Vec<usize> = match tables {
                    Some(t) => t.iter().map(|tab| tab[v] as usize).collect(),
                    None => self
                        .neighbors(VertexIndex(v as u64))
                        .expect("vertex in range")
                        .into_iter()
                        .map(|w| w.0 as usize)
                        .collect(),
                };
                for w in next {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        components
    }

    /// Dense adjacency matrix; needs `vertex_count <= MAX_DENSE_VERTICES`.
    pub fn adjacency_matrix<S: Scalar>(&self) -> Result<Matrix<S>> {
        if self.vertex_count > MAX_DENSE_VERTICES {
            return Err(Error::CapExceeded {
                what: "dense adjacency vertex count",
                size: self.vertex_count,
                cap: MAX_DENSE_VERTICES,
            });
        }
        let mut a = Matrix::zeros(self.vertex_count, self.vertex_count);
        for v in 0..self.vertex_count {
            for w in self.neighbors(VertexIndex(v as u64))? {
                a[(v, w.0 as usize)] += S::one();
            }
        }
        Ok(a)
    }

    /// Adjacency lists, for handing the graph to generic graph routines.
    pub fn adjacency_lists(&self) -> Result<Vec<Vec<usize>>> {
        (0..self.vertex_count)
            .map(|v| {
                Ok(self
                    .neighbors(VertexIndex(v as u64))?
                    .into_iter()
                    .map(|w| w.0 as usize)
                    .collect())
            })
            .collect()
    }
}

impl<S: Scalar> SymmetricOperator<S> for CayleyGraph {
    fn dim(&self) -> usize {
        self.vertex_count
    }

    /// `y[v] = Σ_τ x[v∘τ]`, summed in connection order for every `v`, so the
    /// result does not depend on how rayon splits the chunks.
    fn apply(&self, x: &[S], y: &mut [S]) {
        if self.uses_tables() {
            let tables = self.tables();
            y.par_chunks_mut(CHUNK).enumerate().for_each(|(c, ys)| {
                let base = c * CHUNK;
                ys.fill(S::zero());
                for tab in tables {
                    let idx = &tab[base..base + ys.len()];
                    for (yv, &w) in ys.iter_mut().zip(idx) {
                        *yv += x[w as usize];
                    }
                }
            });
        } else {
            let m = self.moved.len();
            y.par_chunks_mut(CHUNK).enumerate().for_each(|(c, ys)| {
                let mut pi = vec![0u8; m];
                let mut img = vec![0u8; m];
                for (o, yv) in ys.iter_mut().enumerate() {
                    unrank_into((c * CHUNK + o) as u64, &mut pi);
                    let mut acc = S::zero();
                    for t in &self.local {
                        for (slot, &a) in img.iter_mut().zip(t) {
                            *slot = pi[a as usize];
                        }
                        acc += x[rank0(&img) as usize];
                    }
                    *yv = acc;
                }
            });
        }
    }
}

/// All adjacency eigenvalues, descending (dense; small graphs only).
pub fn dense_spectrum(g: &CayleyGraph) -> Result<Vec<f64>> {
    eigenvalues(&g.adjacency_matrix::<f64>()?)
}

/// Largest adjacency eigenvalue orthogonal to the all-ones vector: `λ₂` for
/// a connected graph and the valency for a disconnected one.
pub fn lanczos_lambda2(g: &CayleyGraph, config: &LanczosConfig) -> Result<LanczosResult> {
    lanczos_lambda2_as::<f64>(g, config)
}

/// [`lanczos_lambda2`] in a chosen floating type.
pub fn lanczos_lambda2_as<S: Scalar>(
    g: &CayleyGraph,
    config: &LanczosConfig,
) -> Result<LanczosResult> {
    if g.vertex_count() < 2 {
        return Err(Error::Domain("λ₂ needs at least two vertices".into()));
    }
    top_eigenvalue_deflated::<S, _>(g, g.valency() as f64, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;
    use crate::sets::{build_connection_set, FamilyIndex};

    fn fam(tags: &[u8]) -> FamilyIndex {
        FamilyIndex::new(tags).unwrap()
    }

    #[test]
    fn transpositions_on_s3() {
        let t = build_connection_set(3, fam(&[1])).unwrap();
        let g = build_graph(&StabilizerScope::full(3), &t).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.valency(), 3);
        assert!(g.is_connected());
        let spec = dense_spectrum(&g).unwrap();
        let expect = [3.0, 0.0, 0.0, 0.0, 0.0, -3.0];
        for (a, b) in spec.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn vertex_indexing_round_trips() {
        let scope = StabilizerScope::full(6).fixing(2).fixing(5);
        let t = build_connection_set(6, fam(&[1])).unwrap().restrict(&scope);
        let g = build_graph(&scope, &t).unwrap();
        assert_eq!(g.vertex_count(), 24);
        assert_eq!(g.element(VertexIndex(0)).unwrap(), Permutation::identity(6));
        for v in 0..24 {
            let p = g.element(VertexIndex(v)).unwrap();
            assert!(scope.contains(&p));
            assert_eq!(g.index_of(&p).unwrap(), VertexIndex(v));
        }
        assert!(g.element(VertexIndex(24)).is_err());
        let outside = Permutation::parse_cycles(6, "(1,2)").unwrap();
        assert!(matches!(
            g.index_of(&outside),
            Err(Error::ScopeViolation { point: 2, .. })
        ));
    }

    #[test]
    fn neighbors_follow_the_edge_rule() {
        let t = build_connection_set(4, fam(&[1, 2])).unwrap();
        let g = build_graph(&StabilizerScope::full(4), &t).unwrap();
        for v in [0u64, 5, 17, 23] {
            let gamma = g.element(VertexIndex(v)).unwrap();
            let nb = g.neighbors(VertexIndex(v)).unwrap();
            assert_eq!(nb.len(), t.len());
            for (tau, w) in t.iter().zip(&nb) {
                let expect = gamma.compose(tau).unwrap();
                assert_eq!(g.element(*w).unwrap(), expect);
            }
        }
    }

    #[test]
    fn scope_violation_is_reported() {
        let t = build_connection_set(5, fam(&[1])).unwrap();
        let err = build_graph(&StabilizerScope::fixing_point(5, 3), &t).unwrap_err();
        assert!(matches!(err, Error::ScopeViolation { .. }));
    }

    #[test]
    fn connectivity() {
        let scope = StabilizerScope::full(5);
        let g1 = build_graph(&scope, &build_connection_set(5, fam(&[1])).unwrap()).unwrap();
        assert!(g1.is_connected());
        let g2 = build_graph(&scope, &build_connection_set(5, fam(&[2])).unwrap()).unwrap();
        assert!(!g2.is_connected());
        assert_eq!(g2.component_count(), 2);
    }

    #[test]
    fn all_classes_on_s7_degree() {
        let t = build_connection_set(7, FamilyIndex::all()[62]).unwrap();
        assert_eq!(t.len(), 1330);
        let g = build_graph(&StabilizerScope::full(7), &t).unwrap();
        assert_eq!(g.vertex_count(), 5040);
        assert_eq!(g.neighbors(VertexIndex(1234)).unwrap().len(), 1330);
    }

    #[test]
    fn matvec_matches_dense_and_cache() {
        let t = build_connection_set(5, fam(&[1, 4])).unwrap();
        let scope = StabilizerScope::full(5);
        let g = build_graph(&scope, &t).unwrap();
        let cache = Arc::new(TranslationCache::new());
        let gc = build_graph_cached(&scope, &t, &cache).unwrap();
        let a = g.adjacency_matrix::<f64>().unwrap();
        assert!(a.is_symmetric());
        let x: Vec<f64> = (0..120).map(|i| ((i * 37 % 11) as f64) - 5.0).collect();
        let mut y1 = vec![0.0; 120];
        let mut y2 = vec![0.0; 120];
        let mut y3 = vec![0.0; 120];
        SymmetricOperator::apply(&a, &x, &mut y1);
        SymmetricOperator::apply(&g, &x, &mut y2);
        SymmetricOperator::apply(&gc, &x, &mut y3);
        assert_eq!(y1, y2);
        assert_eq!(y2, y3);
        assert_eq!(cache.len(), t.len());
    }

    #[test]
    fn on_the_fly_matvec_matches_tables() {
        let t = build_connection_set(5, fam(&[1, 3])).unwrap();
        let mut g = build_graph(&StabilizerScope::full(5), &t).unwrap();
        g.table_limit = 0;
        let x: Vec<f64> = (0..120).map(|i| (i as f64).sin()).collect();
        let mut table = vec![0.0; 120];
        SymmetricOperator::apply(&g, &x, &mut table);
        let a = g.adjacency_lists().unwrap();
        let direct: Vec<f64> = a.iter().map(|nb| nb.iter().map(|&w| x[w]).sum()).collect();
        for (p, q) in table.iter().zip(&direct) {
            assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn lanczos_small_examples() {
        let cfg = LanczosConfig::default();
        let s4 = StabilizerScope::full(4);
        let all = build_graph(&s4, &build_connection_set(4, fam(&[1])).unwrap()).unwrap();
        assert!((lanczos_lambda2(&all, &cfg).unwrap().value - 2.0).abs() < 1e-8);
        let star = ConnectionSet::from_cycle_strings(4, &["(1,2)", "(1,3)", "(1,4)"]).unwrap();
        let star = build_graph(&s4, &star).unwrap();
        assert!((lanczos_lambda2(&star, &cfg).unwrap().value - 2.0).abs() < 1e-8);
        let dis = build_graph(
            &StabilizerScope::full(5),
            &build_connection_set(5, fam(&[2])).unwrap(),
        )
        .unwrap();
        assert!((lanczos_lambda2(&dis, &cfg).unwrap().value - 20.0).abs() < 1e-8);
    }

    #[test]
    fn block_subgraph_is_the_stabilizer_graph() {
        // G[{γ : γ(3) = 2}] ≅ Cay(Γ_3, T ∩ Γ_3) via γ ↦ σ⁻¹γ with σ = (2,3)
        let n = 5;
        let t = build_connection_set(n, fam(&[1, 2])).unwrap();
        let scope = StabilizerScope::fixing_point(n, 3);
        let h = build_graph(&scope, &t.restrict(&scope)).unwrap();
        let g = build_graph(&StabilizerScope::full(n), &t).unwrap();
        let sigma = Permutation::parse_cycles(n, "(2,3)").unwrap();
        let block: Vec<Permutation> = all_permutations(n)
            .unwrap()
            .into_iter()
            .filter(|p| p.maps(3, 2))
            .collect();
        assert_eq!(block.len(), h.vertex_count());
        for p in &block {
            let mut inside: Vec<Permutation> = g
                .neighbors(g.index_of(p).unwrap())
                .unwrap()
                .into_iter()
                .map(|w| g.element(w).unwrap())
                .filter(|q| q.maps(3, 2))
                .map(|q| sigma.compose(&q).unwrap())
                .collect();
            let hv = h.index_of(&sigma.compose(p).unwrap()).unwrap();
            let mut from_h: Vec<Permutation> = h
                .neighbors(hv)
                .unwrap()
                .into_iter()
                .map(|w| h.element(w).unwrap())
                .collect();
            inside.sort();
            from_h.sort();
            assert_eq!(inside, from_h);
        }
    }
}
