//! Coset partitions of a Cayley graph and the equitability test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::CayleyGraph;
use crate::matrix::Matrix;
use crate::perm::VertexIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Blocks `{γ : γ(j) = i}` over `j`, for a fixed target `i`.
    Left,
    /// Blocks `{γ : γ(i) = j}` over `j`, for a fixed source `i`.
    Right,
}

/// A partition of the vertices into one block per moved point of the scope.
#[derive(Debug, Clone)]
pub struct CosetPartition {
    side: Side,
    point: usize,
    /// Block labels: the moved points, increasing.
    labels: Vec<usize>,
    block_of: Vec<u16>,
}

impl CosetPartition {
    pub fn side(&self) -> Side {
        self.side
    }

    /// The fixed point `i` of the decomposition.
    pub fn point(&self) -> usize {
        self.point
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn block_count(&self) -> usize {
        self.labels.len()
    }

    /// Index into [`labels`](Self::labels) of the block holding `v`.
    pub fn block_of(&self, v: VertexIndex) -> usize {
        self.block_of[v.0 as usize] as usize
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.labels.len()];
        for &b in &self.block_of {
            sizes[b as usize] += 1;
        }
        sizes
    }

    pub fn block(&self, b: usize) -> Vec<VertexIndex> {
        self.block_of
            .iter()
            .enumerate()
            .filter(|&(_, &x)| x as usize == b)
            .map(|(v, _)| VertexIndex(v as u64))
            .collect()
    }
}

/// Decomposition of the vertex set by where `point` goes (right) or what
/// lands on it (left).
pub fn coset_partition(g: &CayleyGraph, point: usize, side: Side) -> Result<CosetPartition> {
    let n = g.degree();
    if point == 0 || point > n || g.scope().is_fixed(point) {
        return Err(Error::Domain(format!(
            "point {point} is not moved by {}",
            g.scope()
        )));
    }
    let labels = g.scope().moved_points();
    let mut label_index = vec![u16::MAX; n + 1];
    for (b, &p) in labels.iter().enumerate() {
        label_index[p] = b as u16;
    }
    let mut block_of = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        let gamma = g.element(VertexIndex(v as u64))?;
        let j = match side {
            Side::Left => gamma.inverse().image(point),
            Side::Right => gamma.image(point),
        };
        block_of.push(label_index[j]);
    }
    Ok(CosetPartition {
        side,
        point,
        labels,
        block_of,
    })
}

/// The first vertex whose neighbour count into some block differs from
/// that of the first vertex of its own block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquitableViolation {
    pub vertex: u64,
    /// Label of the block the count refers to.
    pub block: usize,
    pub expected: i64,
    pub found: i64,
}

/// The quotient matrix when `p` is equitable, indexed by block labels;
/// otherwise the first violation in vertex order.
pub fn check_equitable(
    g: &CayleyGraph,
    p: &CosetPartition,
) -> Result<std::result::Result<Matrix<i64>, EquitableViolation>> {
    let q = p.block_count();
    let mut rows: Vec<Option<Vec<i64>>> = vec![None; q];
    let mut counts = vec![0i64; q];
    for v in 0..g.vertex_count() {
        let vi = VertexIndex(v as u64);
        counts.fill(0);
        for w in g.neighbors(vi)? {
            counts[p.block_of(w)] += 1;
        }
        let b = p.block_of(vi);
        match &rows[b] {
            None => rows[b] = Some(counts.clone()),
            Some(expected) => {
                if let Some(c) = (0..q).find(|&c| expected[c] != counts[c]) {
                    return Ok(Err(EquitableViolation {
                        vertex: v as u64,
                        block: p.labels[c],
                        expected: expected[c],
                        found: counts[c],
                    }));
                }
            }
        }
    }
    let rows: Vec<Vec<i64>> = rows
        .into_iter()
        .map(|r| r.unwrap_or_else(|| vec![0; q]))
        .collect();
    Ok(Ok(Matrix::from_rows(&rows)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::sets::{build_connection_set, ConnectionSet, FamilyIndex, StabilizerScope};

    #[test]
    fn left_blocks_are_equal_cosets() {
        let t = build_connection_set(5, FamilyIndex::new(&[1]).unwrap()).unwrap();
        let g = build_graph(&StabilizerScope::full(5), &t).unwrap();
        let p = coset_partition(&g, 3, Side::Left).unwrap();
        assert_eq!(p.block_sizes(), vec![24; 5]);
        // the identity sits in block j = i
        assert_eq!(p.labels()[p.block_of(VertexIndex(0))], 3);
        assert!(coset_partition(&g, 6, Side::Left).is_err());
    }

    #[test]
    fn left_partition_is_equitable_for_non_normal_sets() {
        let t = ConnectionSet::from_cycle_strings(4, &["(1,2)", "(2,3)", "(3,4)"]).unwrap();
        let g = build_graph(&StabilizerScope::full(4), &t).unwrap();
        for i in 1..=4 {
            let p = coset_partition(&g, i, Side::Left).unwrap();
            let b = check_equitable(&g, &p).unwrap().unwrap();
            // the permutahedron quotient is the tridiagonal M_4
            assert_eq!(
                b.to_rows(),
                vec![
                    vec![2, 1, 0, 0],
                    vec![1, 1, 1, 0],
                    vec![0, 1, 1, 1],
                    vec![0, 0, 1, 2]
                ]
            );
        }
    }

    #[test]
    fn right_partition_can_fail() {
        let t = ConnectionSet::from_cycle_strings(4, &["(1,2)", "(2,3)", "(3,4)"]).unwrap();
        let g = build_graph(&StabilizerScope::full(4), &t).unwrap();
        let p = coset_partition(&g, 1, Side::Right).unwrap();
        let v = check_equitable(&g, &p).unwrap().unwrap_err();
        assert_ne!(v.expected, v.found);
    }

    #[test]
    fn scoped_partition() {
        let scope = StabilizerScope::fixing_tail(6, 2).unwrap();
        let t = build_connection_set(6, FamilyIndex::new(&[1, 2]).unwrap())
            .unwrap()
            .restrict(&scope);
        let g = build_graph(&scope, &t).unwrap();
        let p = coset_partition(&g, 1, Side::Left).unwrap();
        assert_eq!(p.labels(), &[1, 2, 3, 4]);
        assert_eq!(p.block_sizes(), vec![6; 4]);
        assert!(check_equitable(&g, &p).unwrap().is_ok());
        assert!(coset_partition(&g, 5, Side::Left).is_err());
    }
}
