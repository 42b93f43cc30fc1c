//! Plain undirected graphs and the partition-based eigenvalue bound:
//! an eigenvector summing to zero on every block of a partition whose
//! blocks induce regular subgraphs of one common degree has eigenvalue at
//! most `max λ₂(G[V_i]) + λ₂(G₁)`, where `G₁` drops the edges inside blocks.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dense::{eigenvalues, tridiagonal_eigen_last_row};
use crate::error::{Error, Result};
use crate::graph::{build_graph, CayleyGraph};
use crate::matrix::Matrix;
use crate::partition::{coset_partition, Side};
use crate::perm::VertexIndex;
use crate::quotient::quotient_matrix;
use crate::sets::{ConnectionSet, StabilizerScope};

/// Tolerance for matching quotient eigenvalues against graph eigenvalues.
pub const LIFT_TOL: f64 = 1e-6;

/// Undirected graph as sorted adjacency lists (parallel edges allowed).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Adjacency lists must be symmetric.
    pub fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Result<Self> {
        for list in &mut adj {
            list.sort_unstable();
        }
        let g = Self { adj };
        for (v, list) in g.adj.iter().enumerate() {
            for &w in list {
                let back = g
                    .adj
                    .get(w)
                    .map_or(0, |l| l.iter().filter(|&&x| x == v).count());
                let forth = list.iter().filter(|&&x| x == w).count();
                if back != forth {
                    return Err(Error::Domain(format!("edge {v}-{w} is not symmetric")));
                }
            }
        }
        Ok(g)
    }

    pub fn from_cayley(g: &CayleyGraph) -> Result<Self> {
        Self::from_adjacency(g.adjacency_lists()?)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        let n = self.adj.len();
        if a >= n || b >= n || a == b {
            return Err(Error::Domain(format!("bad edge {a}-{b} on {n} vertices")));
        }
        self.adj[a].push(b);
        self.adj[b].push(a);
        self.adj[a].sort_unstable();
        self.adj[b].sort_unstable();
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// The common degree, if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.adj.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn adjacency_matrix(&self) -> Matrix<f64> {
        let n = self.adj.len();
        let mut a = Matrix::zeros(n, n);
        for (v, list) in self.adj.iter().enumerate() {
            for &w in list {
                a[(v, w)] += 1.0;
            }
        }
        a
    }

    pub fn laplacian_matrix(&self) -> Matrix<f64> {
        let a = self.adjacency_matrix();
        Matrix::from_fn(a.rows(), a.cols(), |i, j| {
            let d = if i == j {
                self.adj[i].len() as f64
            } else {
                0.0
            };
            d - a[(i, j)]
        })
    }

    /// Adjacency spectrum, descending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        eigenvalues(&self.adjacency_matrix())
    }

    /// Second-largest adjacency eigenvalue counting multiplicity.
    pub fn lambda2(&self) -> Result<f64> {
        self.spectrum()?
            .get(1)
            .copied()
            .ok_or_else(|| Error::Domain("λ₂ needs at least two vertices".into()))
    }

    /// Second-smallest Laplacian eigenvalue.
    pub fn algebraic_connectivity(&self) -> Result<f64> {
        let spec = eigenvalues(&self.laplacian_matrix())?;
        let n = spec.len();
        if n < 2 {
            return Err(Error::Domain(
                "algebraic connectivity needs two vertices".into(),
            ));
        }
        Ok(spec[n - 2])
    }

    /// Adjacency spectrum, descending, by Givens band reduction in
    /// breadth-first order followed by the tridiagonal QL iteration.
    /// Linear in the vertex count for graphs of small bandwidth such as
    /// cycles and prisms; the same values as [`spectrum`](Self::spectrum).
    pub fn banded_spectrum(&self) -> Result<Vec<f64>> {
        let n = self.adj.len();
        if n == 0 {
            return Ok(Vec::new());
        }
        let order = self.bfs_order();
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut band = 0;
        let mut a = Matrix::<f64>::zeros(n, n);
        for v in 0..n {
            for &w in &self.adj[v] {
                a[(pos[v], pos[w])] += 1.0;
                band = band.max(pos[v].abs_diff(pos[w]));
            }
        }
        // reduce the bandwidth one step at a time, chasing each bulge down
        for b in (2..=band).rev() {
            for j in 0..n {
                let (mut row, mut col) = (j + b, j);
                while row < n {
                    if a[(row, col)] != 0.0 {
                        rotate_away(&mut a, row, col, b);
                    }
                    (row, col) = (row + b, row - 1);
                }
            }
        }
        let diag: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
        let off: Vec<f64> = (1..n).map(|i| a[(i, i - 1)]).collect();
        Ok(tridiagonal_eigen_last_row(&diag, &off)?.0)
    }

    /// `λ₂` from [`banded_spectrum`](Self::banded_spectrum).
    pub fn lambda2_banded(&self) -> Result<f64> {
        self.banded_spectrum()?
            .get(1)
            .copied()
            .ok_or_else(|| Error::Domain("λ₂ needs at least two vertices".into()))
    }

    fn bfs_order(&self) -> Vec<usize> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            order.push(start);
            let mut head = order.len() - 1;
            while head < order.len() {
                let v = order[head];
                head += 1;
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        order.push(w);
                    }
                }
            }
        }
        order
    }

    /// The subgraph induced on `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.adj.len()];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter(|&&w| pos[w] != usize::MAX)
                    .map(|&w| pos[w])
                    .collect()
            })
            .collect();
        Self { adj }
    }

    /// Same vertex set, keeping only edges between different blocks.
    pub fn without_block_edges(&self, block_of: &[usize]) -> Self {
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(v, l)| {
                l.iter()
                    .copied()
                    .filter(|&w| block_of[w] != block_of[v])
                    .collect()
            })
            .collect();
        Self { adj }
    }

    /// Two copies of `self` joined by the perfect matching `v ↔ n + matching[v]`.
    pub fn twin_with_matching(&self, matching: &[usize]) -> Result<Self> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        if matching.len() != n
            || matching
                .iter()
                .any(|&m| m >= n || std::mem::replace(&mut seen[m], true))
        {
            return Err(Error::Domain("matching is not a bijection".into()));
        }
        let mut adj: Vec<Vec<usize>> = self.adj.clone();
        adj.extend(
            self.adj
                .iter()
                .map(|l| l.iter().map(|&w| w + n).collect::<Vec<_>>()),
        );
        for (v, &m) in matching.iter().enumerate() {
            adj[v].push(n + m);
            adj[n + m].push(v);
        }
        Self::from_adjacency(adj)
    }
}

/// Rotation in the plane `(row − 1, row)` zeroing `a[row][col]`, applied on
/// both sides. Only the band of half-width `b + 1` around the plane is touched.
fn rotate_away(a: &mut Matrix<f64>, row: usize, col: usize, b: usize) {
    let n = a.rows();
    let p = row - 1;
    let (x, y) = (a[(p, col)], a[(row, col)]);
    let r = x.hypot(y);
    let (c, s) = (x / r, y / r);
    let lo = p.saturating_sub(b + 1);
    let hi = (row + b + 2).min(n);
    for k in lo..hi {
        let (u, v) = (a[(p, k)], a[(row, k)]);
        a[(p, k)] = c * u + s * v;
        a[(row, k)] = -s * u + c * v;
    }
    for k in lo..hi {
        let (u, v) = (a[(k, p)], a[(k, row)]);
        a[(k, p)] = c * u + s * v;
        a[(k, row)] = -s * u + c * v;
    }
    a[(row, col)] = 0.0;
    a[(col, row)] = 0.0;
}

/// The `d`-dimensional hypercube `Q_d`.
pub fn hypercube(d: usize) -> SimpleGraph {
    let n = 1usize << d;
    let adj = (0..n)
        .map(|v| (0..d).map(|b| v ^ (1 << b)).collect())
        .collect();
    SimpleGraph::from_adjacency(adj).expect("hypercube is symmetric")
}

/// The cycle `C_n`, `n >= 3`.
pub fn cycle(n: usize) -> SimpleGraph {
    assert!(n >= 3, "C_n needs n >= 3");
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    SimpleGraph::from_edges(n, &edges).expect("valid cycle")
}

/// The prism `C_n □ K₂`.
pub fn prism(n: usize) -> SimpleGraph {
    let ident: Vec<usize> = (0..n).collect();
    cycle(n)
        .twin_with_matching(&ident)
        .expect("identity matching")
}

/// A seeded uniformly random bijection of `0..n`.
pub fn random_matching(n: usize, seed: u64) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    v
}

/// Removes quotient eigenvalues from the graph spectrum with multiplicity.
/// Returns the remaining graph eigenvalues, or `None` when some quotient
/// eigenvalue has no partner within `tol`.
pub fn spectrum_minus(graph: &[f64], quotient: &[f64], tol: f64) -> Option<Vec<f64>> {
    let mut used = vec![false; graph.len()];
    for &q in quotient {
        let best = graph
            .iter()
            .enumerate()
            .filter(|&(i, &g)| !used[i] && (g - q).abs() <= tol)
            .min_by(|a, b| (a.1 - q).abs().total_cmp(&(b.1 - q).abs()))?
            .0;
        used[best] = true;
    }
    Some(
        graph
            .iter()
            .zip(used)
            .filter(|&(_, u)| !u)
            .map(|(&g, _)| g)
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    /// `max_i λ₂(G[V_i])`.
    pub block_lambda2: f64,
    /// `λ₂(G₁)`.
    pub remainder_lambda2: f64,
    pub bound: f64,
    /// Largest graph eigenvalue outside the quotient multiset.
    pub max_outside: Option<f64>,
    pub holds: bool,
}

/// `max λ₂(G[V_i]) + λ₂(G₁)` for a partition given as a block label per
/// vertex. Blocks of a single vertex contribute nothing.
pub fn partition_bound(g: &SimpleGraph, block_of: &[usize]) -> Result<(f64, f64)> {
    let q = block_of.iter().copied().max().map_or(0, |b| b + 1);
    let mut blocks = vec![Vec::new(); q];
    for (v, &b) in block_of.iter().enumerate() {
        blocks[b].push(v);
    }
    let mut degree = None;
    let mut block_l2 = f64::NEG_INFINITY;
    for block in blocks.iter().filter(|b| !b.is_empty()) {
        let sub = g.induced(block);
        let d = sub.regular_degree().ok_or_else(|| {
            Error::Hypothesis("a block does not induce a regular subgraph".into())
        })?;
        if *degree.get_or_insert(d) != d {
            return Err(Error::Hypothesis(
                "blocks induce subgraphs of different degrees".into(),
            ));
        }
        if block.len() >= 2 {
            block_l2 = block_l2.max(sub.lambda2()?);
        }
    }
    if block_l2 == f64::NEG_INFINITY {
        block_l2 = 0.0;
    }
    let g1 = g.without_block_edges(block_of);
    Ok((block_l2, g1.lambda2()?))
}

/// Checks the bound for every eigenvalue of `g` outside the spectrum of
/// the quotient of the equitable partition `block_of`, which must have a
/// constant diagonal.
pub fn corollary_bound_check(g: &SimpleGraph, block_of: &[usize]) -> Result<BoundCheck> {
    let q = block_of.iter().copied().max().map_or(0, |b| b + 1);
    let mut rows: Vec<Option<Vec<f64>>> = vec![None; q];
    for v in 0..g.vertex_count() {
        let mut counts = vec![0.0; q];
        for &w in g.neighbors(v) {
            counts[block_of[w]] += 1.0;
        }
        match &rows[block_of[v]] {
            None => rows[block_of[v]] = Some(counts),
            Some(r) if *r != counts => {
                return Err(Error::Hypothesis(format!(
                    "partition is not equitable at vertex {v}"
                )))
            }
            Some(_) => {}
        }
    }
    let rows: Vec<Vec<f64>> = rows
        .into_iter()
        .map(|r| r.unwrap_or_else(|| vec![0.0; q]))
        .collect();
    let diag = rows.first().map_or(0.0, |r| r[0]);
    if rows.iter().enumerate().any(|(i, r)| r[i] != diag) {
        return Err(Error::Hypothesis(
            "quotient diagonal is not constant".into(),
        ));
    }
    let quotient = Matrix::from_rows(&rows)?;
    finish_check(g, block_of, &eigenvalues(&quotient)?)
}

fn finish_check(g: &SimpleGraph, block_of: &[usize], quotient_spec: &[f64]) -> Result<BoundCheck> {
    let (block_lambda2, remainder_lambda2) = partition_bound(g, block_of)?;
    let bound = block_lambda2 + remainder_lambda2;
    let outside = spectrum_minus(&g.spectrum()?, quotient_spec, LIFT_TOL)
        .ok_or_else(|| Error::Hypothesis("quotient eigenvalues do not lift to the graph".into()))?;
    let max_outside = outside.iter().copied().reduce(f64::max);
    let holds = max_outside.is_none_or(|m| m <= bound + 1e-9);
    Ok(BoundCheck {
        block_lambda2,
        remainder_lambda2,
        bound,
        max_outside,
        holds,
    })
}

/// For `Cay(S_n, T)`: every eigenvalue outside the left-coset quotient is at
/// most `λ₂(Cay(Γ_k, T ∩ Γ_k)) + λ₂(Cay(S_n, T \ Γ_k))`, evaluated on the
/// partition `{γ : γ(k) = j}`.
pub fn cayley_bound_check(t: &ConnectionSet, k: usize) -> Result<BoundCheck> {
    let n = t.degree();
    let g = build_graph(&StabilizerScope::full(n), t)?;
    let simple = SimpleGraph::from_cayley(&g)?;
    let right = coset_partition(&g, k, Side::Right)?;
    let block_of: Vec<usize> = (0..g.vertex_count())
        .map(|v| right.block_of(VertexIndex(v as u64)))
        .collect();
    let quotient = quotient_matrix(n, t)?.spectrum()?;
    finish_check(&simple, &block_of, &quotient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{build_connection_set, derive_tk, FamilyIndex};

    #[test]
    fn banded_spectrum_matches_dense() {
        let mut graphs: Vec<SimpleGraph> = (3..40).map(prism).collect();
        graphs.push(hypercube(5));
        graphs.push(
            hypercube(3)
                .twin_with_matching(&random_matching(8, 3))
                .unwrap(),
        );
        for g in &graphs {
            let spec = g.spectrum().unwrap();
            let banded = g.banded_spectrum().unwrap();
            assert_eq!(spec.len(), banded.len());
            for (x, y) in spec.iter().zip(&banded) {
                assert!((x - y).abs() < 1e-11, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn hypercube_second_eigenvalue() {
        for d in 1..=6 {
            let q = hypercube(d);
            assert_eq!(q.regular_degree(), Some(d));
            assert!((q.lambda2().unwrap() - (d as f64 - 2.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn hypercube_twins_attain_the_lower_bound() {
        for d in 1..=5 {
            let q = hypercube(d);
            let n = q.vertex_count();
            for seed in 0..3 {
                let m = if seed == 0 {
                    (0..n).collect()
                } else {
                    random_matching(n, seed)
                };
                let g = q.twin_with_matching(&m).unwrap();
                assert!((g.lambda2().unwrap() - (d as f64 - 1.0)).abs() < 1e-9);
                let blocks: Vec<usize> = (0..2 * n).map(|v| v / n).collect();
                let check = corollary_bound_check(&g, &blocks).unwrap();
                assert!(check.holds);
            }
        }
    }

    #[test]
    fn prisms_attain_the_upper_bound() {
        for n in [4usize, 5, 6, 9, 30] {
            let expect = 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos() + 1.0;
            assert!((prism(n).lambda2().unwrap() - expect).abs() < 1e-9, "n={n}");
        }
        // the formula needs n >= 4: the triangular prism has λ₂ = 1
        assert!((prism(3).lambda2().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_difference() {
        let rest = spectrum_minus(&[3.0, 1.0, 1.0, -1.0], &[1.0, 3.0], 1e-9).unwrap();
        assert_eq!(rest, vec![1.0, -1.0]);
        assert!(spectrum_minus(&[3.0, 1.0], &[2.0], 1e-9).is_none());
    }

    #[test]
    fn hypotheses_are_enforced() {
        // path on 3 vertices split as {0,1},{2}: blocks of degrees 1 and 0
        let p = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            partition_bound(&p, &[0, 0, 1]),
            Err(Error::Hypothesis(_))
        ));
        let c = cycle(6);
        assert!(matches!(
            corollary_bound_check(&c, &[0, 0, 0, 1, 1, 2]),
            Err(Error::Hypothesis(_))
        ));
        assert!(SimpleGraph::from_edges(2, &[(0, 0)]).is_err());
        assert!(hypercube(2).twin_with_matching(&[0, 0, 1, 2]).is_err());
    }

    #[test]
    fn cayley_bound_on_s4() {
        for fam in FamilyIndex::all() {
            if fam.min_degree() > 4 {
                continue;
            }
            let t = build_connection_set(4, fam).unwrap();
            for k in 1..=fam.max_support().min(4) {
                let tk = derive_tk(&t, k - 1);
                if tk.is_empty() {
                    continue;
                }
                let check = cayley_bound_check(&tk, k).unwrap();
                assert!(check.holds, "{fam} k={k}: {check:?}");
            }
        }
    }

    #[test]
    fn laplacian_of_complete_graph() {
        let edges: Vec<(usize, usize)> = (0..5)
            .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
            .collect();
        let k5 = SimpleGraph::from_edges(5, &edges).unwrap();
        assert!((k5.algebraic_connectivity().unwrap() - 5.0).abs() < 1e-12);
        assert!(k5.is_connected());
        assert!(!SimpleGraph::empty(2).is_connected());
    }
}
