//! Permutations of `[n] = {1, ..., n}`.
//!
//! A [`Permutation`] is stored in one-line notation. Every public function
//! speaks 1-based points; the 0-based storage never escapes this module.
//!
//! Composition convention: `compose(p, q)` is "apply `q`, then `p`", i.e.
//! `compose(p, q)(j) = p(q(j))`. The exponent notation `j^σ` used in the
//! docs means `σ(j)`, the point `j` is mapped to.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest degree for which whole groups are enumerated as graph vertices.
pub const MAX_ENUMERATION_DEGREE: usize = 8;
/// Largest degree accepted by the quotient-only computations.
pub const MAX_DEGREE: usize = 64;
/// Largest degree whose group order fits a `u64` rank.
pub const MAX_RANK_DEGREE: usize = 20;

/// A bijection of `[n]` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u8]>,
}

/// Lehmer-code rank of a permutation, in `[0, n!)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexIndex(pub u64);

/// Cycle lengths of a permutation, fixed points included, in descending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    /// Builds a cycle type from arbitrary positive parts.
    pub fn from_parts(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::Domain(format!("invalid cycle type {parts:?}")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    /// Cycle type `[lengths..., 1, ..., 1]` of degree `n`.
    pub fn with_fixed_points(n: usize, lengths: &[usize]) -> Result<Self> {
        let moved: usize = lengths.iter().sum();
        if moved > n {
            return Err(Error::Domain(format!(
                "cycle lengths {lengths:?} do not fit in degree {n}"
            )));
        }
        let mut parts = lengths.to_vec();
        parts.extend(std::iter::repeat_n(1, n - moved));
        Self::from_parts(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn fixed_points(&self) -> usize {
        self.parts.iter().filter(|&&p| p == 1).count()
    }

    /// Size of the support of any permutation of this type.
    pub fn support_size(&self) -> usize {
        self.parts.iter().filter(|&&p| p > 1).sum()
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i64 {
        let transpositions: usize = self.parts.iter().map(|p| p - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_DEGREE).contains(&n), "degree {n} out of range");
        Self {
            images: (0..n as u8).collect(),
        }
    }

    /// Builds a permutation from 1-based one-line notation.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::InvalidPermutation(format!(
                "degree {n} out of range"
            )));
        }
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &img in images {
            if img == 0 || img > n || seen[img - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of [1..{n}]"
                )));
            }
            seen[img - 1] = true;
            out.push((img - 1) as u8);
        }
        Ok(Self {
            images: out.into_boxed_slice(),
        })
    }

    /// Builds a permutation of degree `n` from disjoint 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::InvalidPermutation(format!(
                "degree {n} out of range"
            )));
        }
        let mut images: Vec<u8> = (0..n as u8).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for &p in cycle {
                if p == 0 || p > n {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} outside [1..{n}]"
                    )));
                }
                if used[p - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} appears in more than one cycle"
                    )));
                }
                used[p - 1] = true;
            }
            for (i, &p) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                images[p - 1] = (next - 1) as u8;
            }
        }
        Ok(Self {
            images: images.into_boxed_slice(),
        })
    }

    /// Parses cycle notation such as `"(1,2)(4,5)"`; `"()"` is the identity.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self> {
        Self::from_cycles(n, &parse_cycle_list(text)?)
    }

    pub(crate) fn from_images0(images: Vec<u8>) -> Self {
        debug_assert!(is_bijection0(&images));
        Self {
            images: images.into_boxed_slice(),
        }
    }

    pub(crate) fn images0(&self) -> &[u8] {
        &self.images
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `j^σ` for a 1-based point `j`.
    pub fn image(&self, j: usize) -> usize {
        self.images[j - 1] as usize + 1
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(j, &i)| j == i as usize)
    }

    pub fn fixes(&self, j: usize) -> bool {
        self.image(j) == j
    }

    /// Whether `t^σ = s`.
    pub fn maps(&self, t: usize, s: usize) -> bool {
        self.image(t) == s
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|(j, &i)| *j != i as usize)
            .map(|(j, _)| j + 1)
            .collect()
    }

    pub fn support_len(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(j, &i)| *j != i as usize)
            .count()
    }

    /// Non-trivial cycles, each starting at its smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j + 1);
                j = self.images[j] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut parts = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                len += 1;
                j = self.images[j] as usize;
            }
            parts.push(len);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    pub fn is_even(&self) -> bool {
        self.cycle_type().sign() == 1
    }

    /// Order of the permutation as a group element.
    pub fn order(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycle_type()
            .parts()
            .iter()
            .fold(1, |acc, &p| acc / gcd(acc, p) * p)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.degree()];
        for (j, &i) in self.images.iter().enumerate() {
            inv[i as usize] = j as u8;
        }
        Self::from_images0(inv)
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        compose(self, other)
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        Self::from_images0(
            other
                .images
                .iter()
                .map(|&j| self.images[j as usize])
                .collect(),
        )
    }

    pub fn rank(&self) -> VertexIndex {
        rank(self)
    }
}

fn is_bijection0(images: &[u8]) -> bool {
    let mut seen = vec![false; images.len()];
    images.iter().all(|&i| {
        let i = i as usize;
        i < seen.len() && !std::mem::replace(&mut seen[i], true)
    })
}

fn parse_cycle_list(text: &str) -> Result<Vec<Vec<usize>>> {
    let text = text.trim();
    let mut cycles = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
        let close = open
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
        let body = open[..close].trim();
        if !body.is_empty() {
            let cycle = body
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad point {s:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        rest = open[close + 1..].trim_start();
    }
    Ok(cycles)
}

/// `p ∘ q`: apply `q`, then `p`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    if p.degree() != q.degree() {
        return Err(Error::SizeMismatch {
            expected: p.degree(),
            found: q.degree(),
        });
    }
    Ok(p.compose_unchecked(q))
}

pub fn inverse(p: &Permutation) -> Permutation {
    p.inverse()
}

pub fn support(p: &Permutation) -> BTreeSet<usize> {
    p.support()
}

pub fn cycle_type(p: &Permutation) -> CycleType {
    p.cycle_type()
}

/// Conjugate of `p` by `s`: `s⁻¹ p s` read left to right (apply `s⁻¹`, then
/// `p`, then `s`), which as a function is `s ∘ p ∘ s⁻¹`.
///
/// The support of the result is `s(support(p))`, so conjugating `(1,2)` by
/// any `s` with `1 ↦ 3` and `2 ↦ 5` gives `(3,5)`.
pub fn conjugate(p: &Permutation, s: &Permutation) -> Result<Permutation> {
    compose(s, &compose(p, &s.inverse())?)
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Lehmer-code rank; the identity has rank 0 and the order-reversing
/// permutation has rank `n! - 1`.
pub fn rank(p: &Permutation) -> VertexIndex {
    VertexIndex(rank0(p.images0()))
}

pub(crate) fn rank0(images: &[u8]) -> u64 {
    let n = images.len();
    assert!(n <= MAX_RANK_DEGREE, "rank needs n <= {MAX_RANK_DEGREE}");
    let mut r = 0u64;
    for i in 0..n {
        let smaller = images[i + 1..].iter().filter(|&&x| x < images[i]).count() as u64;
        r = r * (n - i) as u64 + smaller;
    }
    r
}

pub fn unrank(index: VertexIndex, n: usize) -> Result<Permutation> {
    if n == 0 || n > MAX_RANK_DEGREE {
        return Err(Error::Domain(format!(
            "unrank needs 1 <= n <= {MAX_RANK_DEGREE}"
        )));
    }
    let order = factorial(n);
    if index.0 >= order {
        return Err(Error::Range {
            index: index.0,
            n,
            order,
        });
    }
    let mut images = vec![0u8; n];
    unrank_into(index.0, &mut images);
    Ok(Permutation::from_images0(images))
}

pub(crate) fn unrank_into(mut index: u64, out: &mut [u8]) {
    let n = out.len();
    let mut digits = vec![0usize; n];
    for i in (0..n).rev() {
        let base = (n - i) as u64;
        digits[i] = (index % base) as usize;
        index /= base;
    }
    let mut available: Vec<u8> = (0..n as u8).collect();
    for (slot, d) in out.iter_mut().zip(digits) {
        *slot = available.remove(d);
    }
}

/// All permutations of degree `n` in rank order.
pub fn all_permutations(n: usize) -> Result<Vec<Permutation>> {
    if n == 0 || n > MAX_ENUMERATION_DEGREE {
        return Err(Error::CapExceeded {
            what: "full group enumeration degree",
            size: n,
            cap: MAX_ENUMERATION_DEGREE,
        });
    }
    Ok(all_permutations_unbounded(n))
}

/// All permutations of `0..n` in rank order, without the enumeration cap.
pub(crate) fn all_permutations_unbounded(n: usize) -> Vec<Permutation> {
    (0..factorial(n))
        .map(|r| {
            let mut images = vec![0u8; n];
            unrank_into(r, &mut images);
            Permutation::from_images0(images)
        })
        .collect()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in S_{}", self.degree())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    /// Accepts a 1-based one-line array, or a cycle string whose degree is
    /// the largest point mentioned.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            OneLine(Vec<usize>),
            Cycles(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::OneLine(v) => Permutation::from_one_line(&v).map_err(serde::de::Error::custom),
            Repr::Cycles(s) => {
                let cycles = parse_cycle_list(&s).map_err(serde::de::Error::custom)?;
                let n = cycles.iter().flatten().copied().max().unwrap_or(1);
                Permutation::from_cycles(n, &cycles).map_err(serde::de::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn compose_follows_right_to_left() {
        // (1,2) after (2,3): 1->1->2, 2->3->3, 3->2->1
        let p = compose(&c(3, "(1,2)"), &c(3, "(2,3)")).unwrap();
        assert_eq!(p, c(3, "(1,2,3)"));
        assert_eq!(p.cycle_type().parts(), &[3]);
    }

    #[test]
    fn compose_rejects_mismatched_degrees() {
        let err = compose(&Permutation::identity(3), &Permutation::identity(4)).unwrap_err();
        assert!(matches!(err, Error::SizeMismatch { .. }));
    }

    #[test]
    fn identity_and_inverse_laws() {
        let q = c(5, "(1,4,2)(3,5)");
        assert_eq!(compose(&Permutation::identity(5), &q).unwrap(), q);
        assert!(compose(&q, &q.inverse()).unwrap().is_identity());
        assert_eq!(c(4, "(2,4)").inverse(), c(4, "(2,4)"));
        assert_eq!(c(3, "(1,2,3)").inverse(), c(3, "(1,3,2)"));
    }

    #[test]
    fn support_and_cycle_type() {
        assert!(Permutation::identity(4).support().is_empty());
        let p = c(5, "(1,2)(4,5)");
        assert_eq!(
            p.support().into_iter().collect::<Vec<_>>(),
            vec![1, 2, 4, 5]
        );
        assert_eq!(Permutation::identity(4).cycle_type().parts(), &[1, 1, 1, 1]);
        assert_eq!(c(5, "(1,2,3)(4,5)").cycle_type().parts(), &[3, 2]);
        assert_eq!(c(6, "(1,2,3,4)").order(), 4);
    }

    #[test]
    fn conjugation_relabels_support() {
        let s = Permutation::from_one_line(&[3, 5, 1, 2, 4]).unwrap();
        let got = conjugate(&c(5, "(1,2)"), &s).unwrap();
        assert_eq!(got, c(5, "(3,5)"));
        assert_eq!(
            conjugate(&c(5, "(1,2)"), &Permutation::identity(5)).unwrap(),
            c(5, "(1,2)")
        );
        assert!(conjugate(&Permutation::identity(5), &s)
            .unwrap()
            .is_identity());
    }

    #[test]
    fn rank_extremes() {
        assert_eq!(rank(&Permutation::identity(6)), VertexIndex(0));
        let last = unrank(VertexIndex(factorial(5) - 1), 5).unwrap();
        assert_eq!(last.one_line(), vec![5, 4, 3, 2, 1]);
        assert!(matches!(
            unrank(VertexIndex(120), 5),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn rank_order_is_lexicographic() {
        let all = all_permutations(4).unwrap();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn parsing_and_display() {
        assert_eq!(c(4, "()").to_string(), "()");
        assert_eq!(c(5, " (4,5) (1,2) ").to_string(), "(1,2)(4,5)");
        assert!(Permutation::parse_cycles(3, "(1,2)(2,3)").is_err());
        assert!(Permutation::parse_cycles(3, "(1,4)").is_err());
        assert!(Permutation::from_one_line(&[1, 1, 2]).is_err());
    }

    #[test]
    fn json_is_one_based() {
        let t = c(3, "(1,2)");
        assert_eq!(serde_json::to_string(&t).unwrap(), "[2,1,3]");
        let back: Permutation = serde_json::from_str("[2,1,3]").unwrap();
        assert_eq!(back, t);
        let from_cycles: Permutation = serde_json::from_str("\"(1,2)(4,5)\"").unwrap();
        assert_eq!(from_cycles.one_line(), vec![2, 1, 3, 5, 4]);
    }
}
