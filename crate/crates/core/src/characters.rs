//! Irreducible characters of `S_n` and exact spectra of normal Cayley graphs.
//!
//! Character values come from the Murnaghan–Nakayama rule evaluated on
//! beta-sets: removing a border strip of length `r` from `λ` is the same as
//! sliding one bead of the beta-set down by `r` onto a free position, and
//! the strip height is the number of beads jumped over. All arithmetic is
//! exact integer arithmetic.
//!
//! For a conjugation-closed `T`, the eigenvalue attached to `χ_λ` is
//! `Σ_{μ ⊆ T} |C_μ| χ_λ(μ) / χ_λ(1)` with multiplicity `χ_λ(1)²`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{factorial, CycleType};
use crate::sets::FamilyIndex;

/// Largest degree for which a full character table is built.
pub const MAX_TABLE_DEGREE: usize = 12;

/// An integer partition, parts in weakly decreasing order.
///
/// Ordered so that `[n]` comes first and `[1, ..., 1]` last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPartition {
    parts: Vec<usize>,
}

impl IntPartition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        parts.retain(|&p| p > 0);
        if parts.is_empty() {
            return Err(Error::Domain("empty partition".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Centralizer order `z_μ = Π i^{m_i} m_i!`.
    pub fn centralizer_order(&self) -> u64 {
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        for &p in &self.parts {
            *counts.entry(p).or_default() += 1;
        }
        counts
            .into_iter()
            .map(|(part, m)| (part as u64).pow(m as u32) * factorial(m as usize))
            .product()
    }

    /// Size of the conjugacy class with this cycle type.
    pub fn class_size(&self) -> u64 {
        factorial(self.size()) / self.centralizer_order()
    }
}

impl Ord for IntPartition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.parts.cmp(&self.parts)
    }
}

impl PartialOrd for IntPartition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl From<&CycleType> for IntPartition {
    fn from(ct: &CycleType) -> Self {
        IntPartition {
            parts: ct.parts().to_vec(),
        }
    }
}

impl fmt::Display for IntPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "[{}]", p.join(","))
    }
}

/// All partitions of `n`, from `[n]` down to `[1, ..., 1]`.
pub fn partitions(n: usize) -> Vec<IntPartition> {
    fn rec(remaining: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<IntPartition>) {
        if remaining == 0 {
            out.push(IntPartition { parts: cur.clone() });
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            cur.push(p);
            rec(remaining - p, p, cur, out);
            cur.pop();
        }
    }
    assert!(n >= 1, "partitions of 0 are not indexed");
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Memoized Murnaghan–Nakayama evaluator keyed by `(λ, μ-suffix)`.
#[derive(Default)]
pub struct MnEvaluator {
    memo: HashMap<(Vec<usize>, Vec<usize>), i64>,
}

impl MnEvaluator {
    pub fn new() -> Self {
        Self::default()
    }

    /// `χ_λ(μ)`.
    pub fn character(&mut self, lambda: &IntPartition, mu: &IntPartition) -> Result<i64> {
        if lambda.size() != mu.size() {
            return Err(Error::Domain(format!(
                "partitions {lambda} and {mu} have different sizes"
            )));
        }
        Ok(self.eval(&lambda.parts, &mu.parts))
    }

    fn eval(&mut self, lambda: &[usize], mu: &[usize]) -> i64 {
        if mu.is_empty() {
            return i64::from(lambda.is_empty());
        }
        let key = (lambda.to_vec(), mu.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let r = mu[0];
        let len = lambda.len();
        let beads: Vec<usize> = lambda
            .iter()
            .enumerate()
            .map(|(i, &p)| p + (len - 1 - i))
            .collect();
        let mut total = 0i64;
        for (idx, &b) in beads.iter().enumerate() {
            if b < r || beads.contains(&(b - r)) {
                continue;
            }
            let target = b - r;
            let jumped = beads.iter().filter(|&&x| x > target && x < b).count();
            let mut moved = beads.clone();
            moved[idx] = target;
            moved.sort_unstable_by(|a, b| b.cmp(a));
            let shape: Vec<usize> = moved
                .iter()
                .enumerate()
                .map(|(i, &x)| x - (len - 1 - i))
                .filter(|&p| p > 0)
                .collect();
            let sign = if jumped % 2 == 0 { 1 } else { -1 };
            total += sign * self.eval(&shape, &mu[1..]);
        }
        self.memo.insert(key, total);
        total
    }
}

/// `χ_λ(μ)` by the Murnaghan–Nakayama rule.
pub fn mn_character(lambda: &IntPartition, mu: &IntPartition) -> Result<i64> {
    MnEvaluator::new().character(lambda, mu)
}

/// The character table of `S_n`: rows `λ`, columns `μ`, both in
/// [`partitions`] order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharacterTable {
    n: usize,
    partitions: Vec<IntPartition>,
    values: Vec<Vec<i64>>,
    class_sizes: Vec<u64>,
}

impl CharacterTable {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn partitions(&self) -> &[IntPartition] {
        &self.partitions
    }

    pub fn value(&self, row: usize, col: usize) -> i64 {
        self.values[row][col]
    }

    pub fn row(&self, row: usize) -> &[i64] {
        &self.values[row]
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.class_sizes
    }

    /// Position of `μ` among the columns.
    pub fn index_of(&self, mu: &IntPartition) -> Option<usize> {
        self.partitions.binary_search(mu).ok()
    }

    /// `χ_λ(1)` for every row.
    pub fn dimensions(&self) -> Vec<i64> {
        // the identity class [1^n] is the last column
        let last = self.partitions.len() - 1;
        self.values.iter().map(|row| row[last]).collect()
    }

    /// `Σ_μ |C_μ| χ_a(μ) χ_b(μ)`, which must be `n!·[a = b]`.
    pub fn inner_product(&self, a: usize, b: usize) -> i128 {
        self.class_sizes
            .iter()
            .zip(self.values[a].iter().zip(&self.values[b]))
            .map(|(&c, (&x, &y))| c as i128 * x as i128 * y as i128)
            .sum()
    }

    /// Writes the table as CSV: a header of class labels, one row per `λ`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["lambda".to_string()];
        header.extend(self.partitions.iter().map(IntPartition::to_string));
        w.write_record(&header)?;
        let mut sizes = vec!["class_size".to_string()];
        sizes.extend(self.class_sizes.iter().map(u64::to_string));
        w.write_record(&sizes)?;
        for (lambda, row) in self.partitions.iter().zip(&self.values) {
            let mut rec = vec![lambda.to_string()];
            rec.extend(row.iter().map(i64::to_string));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn character_table(n: usize) -> Result<CharacterTable> {
    if n == 0 || n > MAX_TABLE_DEGREE {
        return Err(Error::CapExceeded {
            what: "character table degree",
            size: n,
            cap: MAX_TABLE_DEGREE,
        });
    }
    let parts = partitions(n);
    let mut mn = MnEvaluator::new();
    let values = parts
        .iter()
        .map(|l| parts.iter().map(|m| mn.eval(&l.parts, &m.parts)).collect())
        .collect();
    let class_sizes = parts.iter().map(IntPartition::class_size).collect();
    Ok(CharacterTable {
        n,
        partitions: parts,
        values,
        class_sizes,
    })
}

/// An exact spectrum as `(eigenvalue, multiplicity)` pairs, largest first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSpectrum {
    pairs: Vec<(i64, u64)>,
}

/// Second-largest eigenvalue counting multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecondEigenvalue {
    pub value: i64,
    /// The largest eigenvalue is repeated, so `λ₂ = λ₁`; a connected
    /// regular graph never does this.
    pub top_repeated: bool,
}

impl ExactSpectrum {
    /// Merges equal eigenvalues and sorts descending; zero multiplicities are dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, u64)>) -> Self {
        let mut merged: BTreeMap<i64, u64> = BTreeMap::new();
        for (v, m) in pairs {
            if m > 0 {
                *merged.entry(v).or_default() += m;
            }
        }
        Self {
            pairs: merged.into_iter().rev().collect(),
        }
    }

    pub fn pairs(&self) -> &[(i64, u64)] {
        &self.pairs
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.pairs.iter().map(|p| p.1).sum()
    }

    pub fn largest(&self) -> Option<(i64, u64)> {
        self.pairs.first().copied()
    }

    /// Every eigenvalue repeated by multiplicity, descending.
    pub fn expanded(&self) -> Vec<i64> {
        self.pairs
            .iter()
            .flat_map(|&(v, m)| std::iter::repeat_n(v, m as usize))
            .collect()
    }

    /// JSON list of `{"eigenvalue": .., "multiplicity": ..}` objects.
    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Entry {
            eigenvalue: i64,
            multiplicity: u64,
        }
        let entries: Vec<Entry> = self
            .pairs
            .iter()
            .map(|&(eigenvalue, multiplicity)| Entry {
                eigenvalue,
                multiplicity,
            })
            .collect();
        Ok(serde_json::to_string(&entries)?)
    }
}

/// Spectrum of `Cay(S_n, ∪ classes)` for an arbitrary list of distinct
/// cycle types (each a conjugacy class of `S_n`).
pub fn normal_spectrum_for_types(
    table: &CharacterTable,
    types: &[CycleType],
) -> Result<ExactSpectrum> {
    let mut cols = Vec::with_capacity(types.len());
    for ct in types {
        let mu = IntPartition::from(ct);
        let col = table
            .index_of(&mu)
            .ok_or_else(|| Error::Domain(format!("{mu} is not a class of S_{}", table.n)))?;
        if mu.parts.iter().all(|&p| p == 1) {
            return Err(Error::Domain(
                "the identity class cannot be a connection set".into(),
            ));
        }
        cols.push(col);
    }
    let dims = table.dimensions();
    let mut pairs = Vec::with_capacity(dims.len());
    for (row, &dim) in dims.iter().enumerate() {
        let numerator: i64 = cols
            .iter()
            .map(|&c| table.class_sizes[c] as i64 * table.values[row][c])
            .sum();
        if numerator % dim != 0 {
            return Err(Error::NonIntegralEigenvalue {
                numerator,
                denominator: dim,
            });
        }
        pairs.push((numerator / dim, (dim * dim) as u64));
    }
    Ok(ExactSpectrum::from_pairs(pairs))
}

/// Spectrum of the normal Cayley graph `Cay(S_n, ∪_{i ∈ family} C^(i))`.
pub fn normal_spectrum(n: usize, family: FamilyIndex) -> Result<ExactSpectrum> {
    let types = family
        .members()
        .map(|c| c.cycle_type(n))
        .collect::<Result<Vec<_>>>()?;
    normal_spectrum_for_types(&character_table(n)?, &types)
}

/// Second-largest eigenvalue counting multiplicity.
pub fn lambda2_exact(spec: &ExactSpectrum) -> Result<SecondEigenvalue> {
    if spec.total_multiplicity() < 2 {
        return Err(Error::Domain(
            "λ₂ needs a spectrum with at least two eigenvalues".into(),
        ));
    }
    let (top, mult) = spec.pairs[0];
    if mult > 1 {
        Ok(SecondEigenvalue {
            value: top,
            top_repeated: true,
        })
    } else {
        Ok(SecondEigenvalue {
            value: spec.pairs[1].0,
            top_repeated: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(p: &[usize]) -> IntPartition {
        IntPartition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(1), vec![part(&[1])]);
        let counts: Vec<usize> = (1..=10).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert!(partitions(7).iter().all(|p| p.size() == 7));
        let p = partitions(6);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn trivial_sign_and_standard_characters() {
        for mu in partitions(6) {
            assert_eq!(mn_character(&part(&[6]), &mu).unwrap(), 1);
            let sign = if (6 - mu.parts().len()) % 2 == 0 {
                1
            } else {
                -1
            };
            assert_eq!(mn_character(&part(&[1; 6]), &mu).unwrap(), sign);
            let fixed = mu.parts().iter().filter(|&&x| x == 1).count() as i64;
            assert_eq!(mn_character(&part(&[5, 1]), &mu).unwrap(), fixed - 1);
        }
        assert_eq!(
            mn_character(&part(&[6, 1]), &part(&[2, 1, 1, 1, 1, 1])).unwrap(),
            4
        );
        assert!(mn_character(&part(&[3]), &part(&[2, 1, 1])).is_err());
    }

    #[test]
    fn small_tables() {
        let t3 = character_table(3).unwrap();
        assert_eq!(t3.dimensions(), vec![1, 2, 1]);
        let t7 = character_table(7).unwrap();
        let sq: i64 = t7.dimensions().iter().map(|d| d * d).sum();
        assert_eq!(sq, 5040);
        let sizes: Vec<u64> = [
            &[2, 1, 1, 1, 1, 1][..],
            &[3, 1, 1, 1, 1],
            &[2, 2, 1, 1, 1],
            &[4, 1, 1, 1],
            &[3, 2, 1, 1],
            &[5, 1, 1],
        ]
        .iter()
        .map(|p| t7.class_sizes()[t7.index_of(&part(p)).unwrap()])
        .collect();
        assert_eq!(sizes, vec![21, 70, 105, 210, 420, 504]);
        assert!(character_table(13).is_err());
    }

    #[test]
    fn orthogonality_up_to_ten() {
        for n in 1..=10 {
            let t = character_table(n).unwrap();
            let order = factorial(n) as i128;
            for a in 0..t.partitions().len() {
                for b in 0..t.partitions().len() {
                    let expect = if a == b { order } else { 0 };
                    assert_eq!(t.inner_product(a, b), expect, "n={n} rows {a},{b}");
                }
            }
        }
    }

    #[test]
    fn transposition_graph_on_s3() {
        let spec = normal_spectrum(3, FamilyIndex::new(&[1]).unwrap()).unwrap();
        assert_eq!(spec.pairs(), &[(3, 1), (0, 4), (-3, 1)]);
        assert_eq!(lambda2_exact(&spec).unwrap().value, 0);
    }

    #[test]
    fn transposition_graph_on_s7() {
        let spec = normal_spectrum(7, FamilyIndex::new(&[1]).unwrap()).unwrap();
        assert_eq!(spec.largest(), Some((21, 1)));
        let l2 = lambda2_exact(&spec).unwrap();
        assert_eq!(l2.value, 14);
        assert!(!l2.top_repeated);
        assert_eq!(spec.total_multiplicity(), 5040);
    }

    #[test]
    fn disconnected_family_repeats_top() {
        let spec = normal_spectrum(7, FamilyIndex::new(&[2]).unwrap()).unwrap();
        let l2 = lambda2_exact(&spec).unwrap();
        assert!(l2.top_repeated);
        assert_eq!(l2.value, 70);
        assert!(lambda2_exact(&ExactSpectrum::from_pairs([(1, 1)])).is_err());
    }

    #[test]
    fn spectrum_json_and_csv() {
        let spec = ExactSpectrum::from_pairs([(0, 4), (3, 1), (-3, 1)]);
        assert_eq!(
            spec.to_json().unwrap(),
            r#"[{"eigenvalue":3,"multiplicity":1},{"eigenvalue":0,"multiplicity":4},{"eigenvalue":-3,"multiplicity":1}]"#
        );
        let mut buf = Vec::new();
        character_table(3).unwrap().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "lambda,[3],\"[2,1]\",\"[1,1,1]\"\nclass_size,2,3,1\n[3],1,1,1\n\"[2,1]\",-1,0,2\n\"[1,1,1]\",1,-1,1\n"
        );
    }
}
