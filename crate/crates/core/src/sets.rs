//! Connection sets: the conjugacy classes `C^(1)..C^(6)`, their filtered
//! subsets `T_k` and `R_k`, the reducible-permutation sets `RP^(r)`, and
//! stabilizer scopes.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{self, factorial, CycleType, Permutation, MAX_DEGREE, MAX_ENUMERATION_DEGREE};

/// One of the six conjugacy classes of `S_n` with support at most five.
///
/// | tag | cycle type            |
/// |-----|-----------------------|
/// | 1   | `(p,q)`               |
/// | 2   | `(p,q,r)`             |
/// | 3   | `(p,q)(r,s)`          |
/// | 4   | `(p,q,r,s)`           |
/// | 5   | `(p,q,r)(s,t)`        |
/// | 6   | `(p,q,r,s,t)`         |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct ClassId(u8);

impl ClassId {
    pub const ALL: [ClassId; 6] = [
        ClassId(1),
        ClassId(2),
        ClassId(3),
        ClassId(4),
        ClassId(5),
        ClassId(6),
    ];

    pub fn new(tag: u8) -> Result<Self> {
        if (1..=6).contains(&tag) {
            Ok(Self(tag))
        } else {
            Err(Error::Domain(format!("class tag {tag} not in 1..=6")))
        }
    }

    pub fn tag(self) -> u8 {
        self.0
    }

    /// Non-trivial cycle lengths of the class.
    pub fn cycle_lengths(self) -> &'static [usize] {
        match self.0 {
            1 => &[2],
            2 => &[3],
            3 => &[2, 2],
            4 => &[4],
            5 => &[3, 2],
            _ => &[5],
        }
    }

    /// Number of points every element moves; also the smallest valid degree.
    pub fn support_size(self) -> usize {
        self.cycle_lengths().iter().sum()
    }

    pub fn cycle_type(self, n: usize) -> Result<CycleType> {
        self.check_degree(n)?;
        CycleType::with_fixed_points(n, self.cycle_lengths())
    }

    pub fn is_odd(self) -> bool {
        matches!(self.0, 1 | 4 | 5)
    }

    fn check_degree(self, n: usize) -> Result<()> {
        if n < self.support_size() {
            Err(Error::ClassDomain {
                class: self.0,
                n,
                min_n: self.support_size(),
            })
        } else {
            Ok(())
        }
    }
}

impl TryFrom<u8> for ClassId {
    type Error = Error;
    fn try_from(tag: u8) -> Result<Self> {
        ClassId::new(tag)
    }
}

impl From<ClassId> for u8 {
    fn from(c: ClassId) -> u8 {
        c.0
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C^({})", self.0)
    }
}

/// A nonempty set of class tags, the index set `I_T` of `T = ∪ C^(i)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct FamilyIndex(u8);

/// Subsets of class tags whose union generates only a proper subgroup.
const DISCONNECTED: [&[u8]; 7] = [&[2], &[3], &[6], &[2, 3], &[2, 6], &[3, 6], &[2, 3, 6]];

/// Connected families for which the quotient does not carry `λ₂` on `S_7`.
const EXCLUDED: [&[u8]; 15] = [
    &[1, 3],
    &[1, 6],
    &[4, 6],
    &[1, 2, 3],
    &[1, 2, 6],
    &[1, 3, 6],
    &[1, 4, 6],
    &[2, 4, 6],
    &[3, 4, 6],
    &[1, 2, 3, 6],
    &[1, 2, 4, 6],
    &[1, 3, 4, 6],
    &[2, 3, 4, 6],
    &[2, 3, 5, 6],
    &[1, 2, 3, 4, 6],
];

impl FamilyIndex {
    pub fn new(tags: &[u8]) -> Result<Self> {
        let mut mask = 0u8;
        for &t in tags {
            ClassId::new(t)?;
            mask |= 1 << (t - 1);
        }
        if mask == 0 {
            return Err(Error::Domain("a family needs at least one class".into()));
        }
        Ok(Self(mask))
    }

    pub fn members(self) -> impl Iterator<Item = ClassId> {
        (1..=6u8)
            .filter(move |t| self.0 & (1 << (t - 1)) != 0)
            .map(ClassId)
    }

    pub fn tags(self) -> Vec<u8> {
        self.members().map(ClassId::tag).collect()
    }

    pub fn contains(self, class: ClassId) -> bool {
        self.0 & (1 << (class.0 - 1)) != 0
    }

    /// `m = max |supp(τ)|` over the family.
    pub fn max_support(self) -> usize {
        self.members().map(ClassId::support_size).max().unwrap_or(0)
    }

    /// Smallest degree on which every member class exists.
    pub fn min_degree(self) -> usize {
        self.max_support()
    }

    /// All 63 nonempty families in ascending mask order.
    pub fn all() -> Vec<FamilyIndex> {
        (1u8..64).map(FamilyIndex).collect()
    }

    /// The 56 families whose Cayley graphs on `S_n` are connected.
    pub fn connected() -> Vec<FamilyIndex> {
        Self::all()
            .into_iter()
            .filter(|f| f.is_connected())
            .collect()
    }

    /// Whether the union contains an odd class, i.e. generates `S_n`.
    pub fn is_connected(self) -> bool {
        !DISCONNECTED.iter().any(|d| Self::new(d).unwrap() == self)
    }

    /// The 15 connected families on which the quotient bound is not attained.
    pub fn excluded() -> Vec<FamilyIndex> {
        EXCLUDED.iter().map(|t| Self::new(t).unwrap()).collect()
    }

    pub fn is_excluded(self) -> bool {
        EXCLUDED.iter().any(|t| Self::new(t).unwrap() == self)
    }

    /// The 41 connected, non-excluded families.
    pub fn allowed() -> Vec<FamilyIndex> {
        Self::connected()
            .into_iter()
            .filter(|f| !f.is_excluded())
            .collect()
    }
}

impl TryFrom<Vec<u8>> for FamilyIndex {
    type Error = Error;
    fn try_from(v: Vec<u8>) -> Result<Self> {
        FamilyIndex::new(&v)
    }
}

impl From<FamilyIndex> for Vec<u8> {
    fn from(f: FamilyIndex) -> Vec<u8> {
        f.tags()
    }
}

impl FromStr for FamilyIndex {
    type Err = Error;
    /// Parses a comma-separated tag list such as `"1,2,5"`.
    fn from_str(s: &str) -> Result<Self> {
        let tags = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u8>()
                    .map_err(|e| Error::Parse(format!("bad class tag {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        FamilyIndex::new(&tags)
    }
}

impl fmt::Display for FamilyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tags: Vec<String> = self.tags().iter().map(u8::to_string).collect();
        write!(f, "{{{}}}", tags.join(","))
    }
}

impl fmt::Debug for FamilyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FamilyIndex{self}")
    }
}

/// Where a connection set came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// `T_k` of a class union (`depth = 0` is `T` itself).
    Family { family: FamilyIndex, depth: usize },
    /// `R_k` of a class union.
    Remainder { family: FamilyIndex, depth: usize },
    /// `RP^(r)` or one of its listed subsets.
    Reducible { r: usize },
    /// Supplied directly, possibly filtered to `depth`.
    Explicit { depth: usize },
}

impl Provenance {
    /// Filter depth `k`; zero for reducible sets.
    pub fn depth(&self) -> usize {
        match *self {
            Provenance::Family { depth, .. }
            | Provenance::Remainder { depth, .. }
            | Provenance::Explicit { depth } => depth,
            Provenance::Reducible { .. } => 0,
        }
    }
}

/// An inverse-closed subset of `S_n` not containing the identity.
///
/// Iteration order is rank order.
#[derive(Clone)]
pub struct ConnectionSet {
    n: usize,
    elems: Vec<Permutation>,
    lookup: HashSet<Permutation>,
    provenance: Provenance,
}

impl ConnectionSet {
    /// Validates and wraps an explicit set.
    pub fn new(n: usize, elems: Vec<Permutation>, provenance: Provenance) -> Result<Self> {
        for p in &elems {
            if p.degree() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: p.degree(),
                });
            }
            if p.is_identity() {
                return Err(Error::Domain("connection set contains the identity".into()));
            }
        }
        let set = Self::from_parts(n, elems, provenance);
        if let Some(p) = set.elems.iter().find(|p| !set.contains(&p.inverse())) {
            return Err(Error::Domain(format!(
                "connection set is not inverse-closed: {p} has no inverse"
            )));
        }
        Ok(set)
    }

    /// Explicit set from cycle strings.
    pub fn from_cycle_strings(n: usize, cycles: &[&str]) -> Result<Self> {
        let elems = cycles
            .iter()
            .map(|s| Permutation::parse_cycles(n, s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, elems, Provenance::Explicit { depth: 0 })
    }

    fn from_parts(n: usize, mut elems: Vec<Permutation>, provenance: Provenance) -> Self {
        elems.sort_unstable();
        elems.dedup();
        let lookup = elems.iter().cloned().collect();
        Self {
            n,
            elems,
            lookup,
            provenance,
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.lookup.contains(p)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Permutation> {
        self.elems.iter()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elems
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Subset selected by a predicate that is invariant under inversion.
    pub fn filter(&self, keep: impl Fn(&Permutation) -> bool, provenance: Provenance) -> Self {
        let elems = self.elems.iter().filter(|p| keep(p)).cloned().collect();
        Self::from_parts(self.n, elems, provenance)
    }

    pub fn union(&self, other: &Self, provenance: Provenance) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let elems = self
            .elems
            .iter()
            .chain(other.elems.iter())
            .cloned()
            .collect();
        Ok(Self::from_parts(self.n, elems, provenance))
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.filter(|p| !other.contains(p), self.provenance.clone())
    }

    /// `T ∩ scope`.
    pub fn restrict(&self, scope: &StabilizerScope) -> Self {
        self.filter(|p| scope.contains(p), self.provenance.clone())
    }

    /// `max |supp(τ)|`, zero for the empty set.
    pub fn max_support(&self) -> usize {
        self.elems
            .iter()
            .map(Permutation::support_len)
            .max()
            .unwrap_or(0)
    }

    /// `|T ∩ Γ_j|`: elements fixing `j`.
    pub fn count_fixing(&self, j: usize) -> usize {
        self.elems.iter().filter(|p| p.fixes(j)).count()
    }

    /// `|T ∩ Γ_{t,s}|`: elements mapping `t` to `s`.
    pub fn count_mapping(&self, t: usize, s: usize) -> usize {
        self.elems.iter().filter(|p| p.maps(t, s)).count()
    }

    /// Whether `s T s⁻¹ = T`.
    pub fn is_invariant_under(&self, s: &Permutation) -> bool {
        self.elems
            .iter()
            .all(|p| self.contains(&perm::conjugate(p, s).expect("same degree")))
    }

    /// Closed under conjugation by all of `S_n` (checked on generators).
    pub fn is_conjugation_closed(&self) -> bool {
        if self.n < 2 {
            return true;
        }
        let swap = Permutation::parse_cycles(self.n, "(1,2)").unwrap();
        let cycle: Vec<usize> = (1..=self.n).collect();
        let rotate = Permutation::from_cycles(self.n, &[cycle]).unwrap();
        self.is_invariant_under(&swap) && self.is_invariant_under(&rotate)
    }

    pub fn cycle_strings(&self) -> Vec<String> {
        self.elems.iter().map(Permutation::to_string).collect()
    }

    /// JSON array of cycle strings.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.cycle_strings())?)
    }
}

impl PartialEq for ConnectionSet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.elems == other.elems
    }
}

impl fmt::Debug for ConnectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConnectionSet")
            .field("n", &self.n)
            .field("len", &self.elems.len())
            .field("provenance", &self.provenance)
            .finish()
    }
}

/// A pointwise stabilizer in `S_n`: the permutations fixing every declared point.
///
/// Covers `S_n` itself, `Γ^(i)` (fixing `n-i+1..n`), `Γ_k`, and their
/// intersections.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StabilizerScope {
    n: usize,
    fixed: Vec<bool>,
}

impl StabilizerScope {
    pub fn full(n: usize) -> Self {
        assert!((1..=MAX_DEGREE).contains(&n));
        Self {
            n,
            fixed: vec![false; n],
        }
    }

    /// `Γ^(i)`: fixes each of the last `i` points.
    pub fn fixing_tail(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::Domain(format!("Γ^({i}) needs i < n = {n}")));
        }
        Ok(Self::full(n).fixing_all((n - i + 1..=n).collect::<Vec<_>>().as_slice()))
    }

    /// `Γ_k`: fixes the point `k`.
    pub fn fixing_point(n: usize, k: usize) -> Self {
        Self::full(n).fixing(k)
    }

    pub fn fixing(mut self, point: usize) -> Self {
        self.fixed[point - 1] = true;
        self
    }

    pub fn fixing_all(mut self, points: &[usize]) -> Self {
        for &p in points {
            self.fixed[p - 1] = true;
        }
        self
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (1..=self.n).filter(|&p| self.fixed[p - 1]).collect()
    }

    pub fn moved_points(&self) -> Vec<usize> {
        (1..=self.n).filter(|&p| !self.fixed[p - 1]).collect()
    }

    pub fn is_fixed(&self, point: usize) -> bool {
        self.fixed[point - 1]
    }

    /// Group order `(n - #fixed)!`.
    pub fn order(&self) -> u64 {
        factorial(self.moved_points().len())
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.n && self.fixed_points().iter().all(|&j| p.fixes(j))
    }

    /// First fixed point moved by `p`, if any.
    pub fn violation(&self, p: &Permutation) -> Option<usize> {
        self.fixed_points().into_iter().find(|&j| !p.fixes(j))
    }
}

impl fmt::Display for StabilizerScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fixed = self.fixed_points();
        if fixed.is_empty() {
            write!(f, "S_{}", self.n)
        } else {
            let pts: Vec<String> = fixed.iter().map(usize::to_string).collect();
            write!(f, "Stab_S{}({})", self.n, pts.join(","))
        }
    }
}

/// Derangements of `0..s` with the given non-trivial cycle lengths.
fn derangement_patterns(lengths: &[usize]) -> Vec<Vec<u8>> {
    let s: usize = lengths.iter().sum();
    let target = CycleType::from_parts(lengths.to_vec()).unwrap();
    perm::all_permutations_unbounded(s)
        .into_iter()
        .filter(|p| p.cycle_type() == target)
        .map(|p| p.images0().to_vec())
        .collect()
}

/// Calls `visit` on every `k`-subset of `0..n` in lexicographic order.
fn for_each_combination(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All elements of `S_n` with the given non-trivial cycle lengths, built by
/// placing each pattern on each support set.
pub fn class_by_cycle_lengths(n: usize, lengths: &[usize]) -> Result<Vec<Permutation>> {
    let s: usize = lengths.iter().sum();
    if s > n {
        return Err(Error::Domain(format!(
            "cycle lengths {lengths:?} exceed n = {n}"
        )));
    }
    if s == 0 {
        return Ok(vec![Permutation::identity(n)]);
    }
    let patterns = derangement_patterns(lengths);
    let mut out = Vec::new();
    for_each_combination(n, s, |support| {
        for pat in &patterns {
            let mut images: Vec<u8> = (0..n as u8).collect();
            for (a, &b) in pat.iter().enumerate() {
                images[support[a]] = support[b as usize] as u8;
            }
            out.push(Permutation::from_images0(images));
        }
    });
    Ok(out)
}

/// `C^(i)` in `S_n`.
pub fn conjugacy_class(n: usize, id: ClassId) -> Result<ConnectionSet> {
    id.check_degree(n)?;
    let elems = class_by_cycle_lengths(n, id.cycle_lengths())?;
    let family = FamilyIndex::new(&[id.tag()])?;
    Ok(ConnectionSet::from_parts(
        n,
        elems,
        Provenance::Family { family, depth: 0 },
    ))
}

/// `C_k^(i)`: elements of `C^(i)` moving each of `1..=k`.
pub fn filtered_class(n: usize, id: ClassId, k: usize) -> Result<ConnectionSet> {
    if k > n {
        return Err(Error::Domain(format!("filter depth {k} exceeds n = {n}")));
    }
    Ok(derive_tk(&conjugacy_class(n, id)?, k))
}

/// `T = ∪_{i ∈ I_T} C^(i)`.
pub fn build_connection_set(n: usize, family: FamilyIndex) -> Result<ConnectionSet> {
    let mut elems = Vec::new();
    for id in family.members() {
        id.check_degree(n)?;
        elems.extend(class_by_cycle_lengths(n, id.cycle_lengths())?);
    }
    Ok(ConnectionSet::from_parts(
        n,
        elems,
        Provenance::Family { family, depth: 0 },
    ))
}

fn with_depth(p: &Provenance, depth: usize) -> Provenance {
    match p {
        Provenance::Family { family, .. } | Provenance::Remainder { family, .. } => {
            Provenance::Family {
                family: *family,
                depth,
            }
        }
        Provenance::Reducible { r } => Provenance::Reducible { r: *r },
        Provenance::Explicit { .. } => Provenance::Explicit { depth },
    }
}

/// `T_k`: elements of `T` whose support contains `{1, ..., k}`.
pub fn derive_tk(t: &ConnectionSet, k: usize) -> ConnectionSet {
    let k = k.min(t.n);
    t.filter(
        |p| (1..=k).all(|j| !p.fixes(j)),
        with_depth(&t.provenance, k),
    )
}

/// `T_k` by the recurrence `T_j = T_{j-1} \ (T_{j-1} ∩ Γ_j)`.
pub fn derive_tk_recurrence(t: &ConnectionSet, k: usize) -> ConnectionSet {
    let mut cur = t.filter(|_| true, with_depth(&t.provenance, 0));
    for j in 1..=k.min(t.n) {
        cur = cur.filter(|p| !p.fixes(j), with_depth(&t.provenance, j));
    }
    cur
}

/// `R_k = T_{k-1} ∩ Γ_k`: elements moving `1..k-1` and fixing `k`.
pub fn derive_rk(t: &ConnectionSet, k: usize) -> Result<ConnectionSet> {
    if k == 0 || k > t.n {
        return Err(Error::Domain(format!("R_k needs 1 <= k <= n, got k = {k}")));
    }
    let prev = derive_tk(t, k - 1);
    let provenance = match t.provenance {
        Provenance::Family { family, .. } => Provenance::Remainder { family, depth: k },
        ref other => with_depth(other, k),
    };
    Ok(prev.filter(|p| p.fixes(k), provenance))
}

/// Whether `T` generates `S_n`, i.e. `Cay(S_n, T)` is connected.
///
/// Conjugation-closed sets use the parity criterion (the only normal
/// subgroup containing an odd permutation is `S_n` itself); other sets fall
/// back to a breadth-first search of the group, which needs
/// `n <= MAX_ENUMERATION_DEGREE`.
pub fn generates_sn(t: &ConnectionSet) -> Result<bool> {
    if t.n == 1 {
        return Ok(true);
    }
    if t.is_empty() {
        return Ok(false);
    }
    if t.is_conjugation_closed() {
        return Ok(t.iter().any(|p| !p.is_even()));
    }
    if t.n > MAX_ENUMERATION_DEGREE {
        return Err(Error::CapExceeded {
            what: "BFS generation check degree",
            size: t.n,
            cap: MAX_ENUMERATION_DEGREE,
        });
    }
    let order = factorial(t.n) as usize;
    let mut seen = vec![false; order];
    let mut queue = VecDeque::new();
    let id = Permutation::identity(t.n);
    seen[perm::rank0(id.images0()) as usize] = true;
    queue.push_back(id);
    let mut reached = 1;
    while let Some(g) = queue.pop_front() {
        for tau in t.iter() {
            let h = g.compose_unchecked(tau);
            let r = perm::rank0(h.images0()) as usize;
            if !seen[r] {
                seen[r] = true;
                reached += 1;
                queue.push_back(h);
            }
        }
    }
    Ok(reached == order)
}

/// Number of blocks in the finest partition of `[n]` into contiguous
/// intervals each mapped onto itself.
///
/// `σ` fixes `{1..b}` setwise iff `max(σ(1..b)) = b`.
pub fn contiguous_block_count(p: &Permutation) -> usize {
    let mut max = 0u8;
    let mut blocks = 0;
    for (b, &img) in p.images0().iter().enumerate() {
        max = max.max(img);
        if max as usize == b {
            blocks += 1;
        }
    }
    blocks
}

/// Permutations of `0..b` forming a single contiguous block.
fn indecomposable_patterns(b: usize) -> Vec<Vec<u8>> {
    perm::all_permutations_unbounded(b)
        .into_iter()
        .filter(|p| contiguous_block_count(p) == 1)
        .map(|p| p.images0().to_vec())
        .collect()
}

/// `RP^(r)`: the `(n - r)`-reducible permutations of `S_n`.
///
/// Built block by block: a composition of `n` into `n - r` intervals, each
/// carrying an indecomposable permutation of its length.
pub fn reducible_set(n: usize, r: usize) -> Result<ConnectionSet> {
    if r == 0 || r >= n {
        return Err(Error::Domain(format!(
            "RP^(r) needs 1 <= r < n, got r = {r}, n = {n}"
        )));
    }
    if n > MAX_DEGREE || r + 1 > MAX_ENUMERATION_DEGREE {
        return Err(Error::CapExceeded {
            what: "reducible-set block size",
            size: r + 1,
            cap: MAX_ENUMERATION_DEGREE,
        });
    }
    let patterns: Vec<Vec<Vec<u8>>> = (0..=r + 1).map(indecomposable_patterns_or_empty).collect();
    let mut out = Vec::new();
    let mut images: Vec<u8> = (0..n as u8).collect();
    fill_blocks(0, r, n, &patterns, &mut images, &mut out);
    Ok(ConnectionSet::from_parts(
        n,
        out,
        Provenance::Reducible { r },
    ))
}

fn indecomposable_patterns_or_empty(b: usize) -> Vec<Vec<u8>> {
    if b == 0 {
        Vec::new()
    } else {
        indecomposable_patterns(b)
    }
}

fn fill_blocks(
    pos: usize,
    excess: usize,
    n: usize,
    patterns: &[Vec<Vec<u8>>],
    images: &mut Vec<u8>,
    out: &mut Vec<Permutation>,
) {
    if pos == n {
        if excess == 0 {
            out.push(Permutation::from_images0(images.clone()));
        }
        return;
    }
    for b in 1..=(excess + 1).min(n - pos) {
        for pat in &patterns[b] {
            for (a, &img) in pat.iter().enumerate() {
                images[pos + a] = (pos + img as usize) as u8;
            }
            fill_blocks(pos + b, excess - (b - 1), n, patterns, images, out);
        }
    }
    for (a, slot) in images[pos..].iter_mut().enumerate() {
        *slot = (pos + a) as u8;
    }
}

/// `RP^(r)` by scanning all of `S_n` with [`contiguous_block_count`].
pub fn reducible_set_by_scan(n: usize, r: usize) -> Result<ConnectionSet> {
    if r == 0 || r >= n {
        return Err(Error::Domain(format!(
            "RP^(r) needs 1 <= r < n, got r = {r}, n = {n}"
        )));
    }
    let elems = perm::all_permutations(n)?
        .into_iter()
        .filter(|p| contiguous_block_count(p) == n - r)
        .collect();
    Ok(ConnectionSet::from_parts(
        n,
        elems,
        Provenance::Reducible { r },
    ))
}

/// The three listed pieces `Q^(1), Q^(2), Q^(3)` of `RP^(2)`.
pub fn q_sets(n: usize) -> Result<[ConnectionSet; 3]> {
    if n < 3 {
        return Err(Error::Domain(format!("Q sets need n >= 3, got {n}")));
    }
    let mut q1 = Vec::new();
    let mut q2 = Vec::new();
    let mut q3 = Vec::new();
    for i in 1..=n - 2 {
        q1.push(Permutation::from_cycles(n, &[vec![i, i + 1, i + 2]])?);
        q1.push(Permutation::from_cycles(n, &[vec![i, i + 2, i + 1]])?);
        q2.push(Permutation::from_cycles(n, &[vec![i, i + 2]])?);
    }
    for i in 1..n.saturating_sub(2) {
        for j in i + 2..n {
            q3.push(Permutation::from_cycles(
                n,
                &[vec![i, i + 1], vec![j, j + 1]],
            )?);
        }
    }
    let prov = || Provenance::Reducible { r: 2 };
    Ok([
        ConnectionSet::from_parts(n, q1, prov()),
        ConnectionSet::from_parts(n, q2, prov()),
        ConnectionSet::from_parts(n, q3, prov()),
    ])
}

/// `(RP₁^(2), RP₂^(2))` as listed: the elements of `RP^(2)` moving 1, and
/// those of them also moving `n`.
pub fn rp2_subsets(n: usize) -> Result<(ConnectionSet, ConnectionSet)> {
    if n < 4 {
        return Err(Error::Domain(format!("RP_1^(2) needs n >= 4, got {n}")));
    }
    let mut first = vec![
        Permutation::parse_cycles(n, "(1,2,3)")?,
        Permutation::parse_cycles(n, "(1,3,2)")?,
        Permutation::parse_cycles(n, "(1,3)")?,
    ];
    for j in 3..n {
        first.push(Permutation::from_cycles(n, &[vec![1, 2], vec![j, j + 1]])?);
    }
    let second = vec![Permutation::from_cycles(n, &[vec![1, 2], vec![n - 1, n]])?];
    let prov = || Provenance::Reducible { r: 2 };
    Ok((
        ConnectionSet::from_parts(n, first, prov()),
        ConnectionSet::from_parts(n, second, prov()),
    ))
}

/// Points of `[n]` listed as a set, for messages.
pub fn point_set(points: &BTreeSet<usize>) -> String {
    let v: Vec<String> = points.iter().map(usize::to_string).collect();
    format!("{{{}}}", v.join(","))
}
