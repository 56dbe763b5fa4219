//! Finite T0 spaces, bases of subsets, and hierarchies of k-partitions.
//!
//! A finite T0 space is a partial order on `0..n` whose open sets are the
//! up-sets, so continuous maps are exactly the monotone ones. Subsets are
//! bitmasks over at most 64 points.

mod family;
mod report;
mod search;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forest::Forest;

pub use family::{
    diff_sequence_to_family, family_defines, family_to_diff_sequence, is_monotone, is_reduced,
    monotonize, reduce_family, Definition, NodeSets, PFamily,
};
pub use report::{hierarchy_report, Constituent, HierarchyReport, LevelSource};
pub use search::{dh_membership, dh_witness, fh_membership, fh_witness, FamilyMode};

/// Soft limits for exhaustive enumeration over all k-partitions.
pub const MAX_POINTS: usize = 5;
pub const MAX_COLORS: u8 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("relation is not antisymmetric: {0} and {1} are distinct but mutually below")]
    NotAntisymmetric(usize, usize),
    #[error("point {point} out of range for a space of {n} points")]
    PointOutOfRange { point: usize, n: usize },
    #[error("spaces are limited to 64 points, got {0}")]
    TooManyPoints(usize),
    #[error("base is not closed under {op}: {a} and {b}")]
    NotClosed {
        op: &'static str,
        a: SubSet,
        b: SubSet,
    },
    #[error("base does not contain the empty set")]
    MissingEmpty,
    #[error("omega-base level {level} does not contain level {prev} and its complements")]
    NotGraded { level: usize, prev: usize },
    #[error("omega-base has no levels")]
    EmptyOmegaBase,
    #[error("forest has nesting level {needed} but only {available} base levels are given")]
    LevelMismatch { needed: usize, available: usize },
    #[error("forest must be color-labeled here")]
    NotFlat,
    #[error("set {set} is not in the base at level {level}")]
    NotInBase { set: SubSet, level: usize },
    #[error("the whole space is not in the base")]
    WholeSpaceMissing,
    #[error("base level {0} lacks the reduction property")]
    NoReduction(usize),
    #[error("malformed family: {0}")]
    Family(String),
    #[error("forest is not an alternating chain rooted at color 0")]
    NotCanonicalChain,
    #[error("partition has {got} points, space has {want}")]
    PartitionSize { got: usize, want: usize },
    #[error("label {label} is out of range for k = {k}")]
    LabelOutOfRange { label: u8, k: u8 },
    #[error("{what} exceeds the enumeration guard ({limit}); pass the override to proceed")]
    SizeGuard { what: &'static str, limit: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubSet(pub u64);

impl SubSet {
    pub const EMPTY: SubSet = SubSet(0);

    pub fn full(n: usize) -> SubSet {
        if n >= 64 {
            SubSet(u64::MAX)
        } else {
            SubSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(x: usize) -> SubSet {
        SubSet(1 << x)
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(pts: I) -> SubSet {
        SubSet(pts.into_iter().fold(0, |m, x| m | (1 << x)))
    }

    pub fn contains(self, x: usize) -> bool {
        self.0 >> x & 1 == 1
    }

    pub fn union(self, o: SubSet) -> SubSet {
        SubSet(self.0 | o.0)
    }

    pub fn inter(self, o: SubSet) -> SubSet {
        SubSet(self.0 & o.0)
    }

    pub fn minus(self, o: SubSet) -> SubSet {
        SubSet(self.0 & !o.0)
    }

    pub fn complement(self, n: usize) -> SubSet {
        SubSet::full(n).minus(self)
    }

    pub fn is_subset(self, o: SubSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_disjoint(self, o: SubSet) -> bool {
        self.0 & o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn points(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&x| self.contains(x))
    }
}

impl fmt::Display for SubSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.points().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", pts.join(","))
    }
}

impl Serialize for SubSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.points())
    }
}

impl<'de> Deserialize<'de> for SubSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pts = Vec::<usize>::deserialize(d)?;
        if let Some(&x) = pts.iter().find(|&&x| x >= 64) {
            return Err(serde::de::Error::custom(format!("point {x} out of range")));
        }
        Ok(SubSet::from_points(pts))
    }
}

/// A partial order on `0..n`, stored as the up-set of each point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    n: usize,
    up: Vec<SubSet>,
}

/// `{"points": n, "le": [[i, j], ...]}`; the reflexive-transitive closure
/// of `le` is taken.
#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    points: usize,
    le: Vec<[usize; 2]>,
}

impl FiniteSpace {
    pub fn new(n: usize, le: &[(usize, usize)]) -> Result<FiniteSpace, SpaceError> {
        if n > 64 {
            return Err(SpaceError::TooManyPoints(n));
        }
        let mut up: Vec<SubSet> = (0..n).map(SubSet::singleton).collect();
        for &(i, j) in le {
            for x in [i, j] {
                if x >= n {
                    return Err(SpaceError::PointOutOfRange { point: x, n });
                }
            }
            up[i] = up[i].union(SubSet::singleton(j));
        }
        // transitive closure
        loop {
            let mut changed = false;
            for i in 0..n {
                let closed = up[i].points().fold(up[i], |acc, j| acc.union(up[j]));
                if closed != up[i] {
                    up[i] = closed;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if up[i].contains(j) && up[j].contains(i) {
                    return Err(SpaceError::NotAntisymmetric(i, j));
                }
            }
        }
        Ok(FiniteSpace { n, up })
    }

    pub fn chain(n: usize) -> FiniteSpace {
        let le: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FiniteSpace::new(n, &le).expect("chain")
    }

    pub fn antichain(n: usize) -> FiniteSpace {
        FiniteSpace::new(n, &[]).expect("antichain")
    }

    /// Two bottoms `0, 1` below two tops `2, 3`.
    pub fn diamond() -> FiniteSpace {
        FiniteSpace::new(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).expect("diamond")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn up_of(&self, i: usize) -> SubSet {
        self.up[i]
    }

    pub fn is_up_set(&self, s: SubSet) -> bool {
        s.points().all(|x| self.up[x].is_subset(s))
    }

    /// All open sets of the Alexandrov topology.
    pub fn up_sets(&self) -> Base {
        // unions of principal up-sets, closed by iteration
        let mut sets: BTreeSet<SubSet> = BTreeSet::from([SubSet::EMPTY]);
        for &u in &self.up {
            let new: Vec<SubSet> = sets.iter().map(|s| s.union(u)).collect();
            sets.extend(new);
        }
        Base {
            n: self.n,
            sets: sets.into_iter().collect(),
        }
    }

    /// Ordered pairs `(i, j)` with `i < j` in the order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && self.le(i, j))
            .collect()
    }

    /// The same order with points renamed by `perm` (point `i` becomes `perm[i]`).
    pub fn relabel(&self, perm: &[usize]) -> FiniteSpace {
        let le: Vec<_> = self
            .strict_pairs()
            .into_iter()
            .map(|(i, j)| (perm[i], perm[j]))
            .collect();
        FiniteSpace::new(self.n, &le).expect("relabeling preserves the order")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SpaceRepr {
            points: self.n,
            le: self
                .strict_pairs()
                .into_iter()
                .map(|(i, j)| [i, j])
                .collect(),
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<FiniteSpace, String> {
        let r: SpaceRepr = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
        let le: Vec<_> = r.le.iter().map(|p| (p[0], p[1])).collect();
        FiniteSpace::new(r.points, &le).map_err(|e| e.to_string())
    }
}

/// All partial orders on `n` points up to isomorphism.
pub fn all_posets(n: usize) -> Vec<FiniteSpace> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let le: Vec<_> = (0..pairs.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| pairs[b])
            .collect();
        let Ok(sp) = FiniteSpace::new(n, &le) else {
            continue;
        };
        // only closed relations, so each order is met once per labeling
        if sp.strict_pairs().len() != le.len() {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut v: Vec<_> = sp
                    .strict_pairs()
                    .iter()
                    .map(|&(i, j)| (p[i], p[j]))
                    .collect();
                v.sort();
                v
            })
            .min()
            .unwrap_or_default();
        if seen.insert(canon) {
            out.push(sp);
        }
    }
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// A family of subsets closed under pairwise union and intersection and
/// containing the empty set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Base {
    n: usize,
    sets: Vec<SubSet>,
}

impl Base {
    /// Validates closure.
    pub fn new(n: usize, sets: impl IntoIterator<Item = SubSet>) -> Result<Base, SpaceError> {
        let sets: BTreeSet<SubSet> = sets.into_iter().collect();
        let full = SubSet::full(n);
        if let Some(&s) = sets.iter().find(|s| !s.is_subset(full)) {
            let x = s.minus(full).points().next().unwrap_or(n);
            return Err(SpaceError::PointOutOfRange { point: x, n });
        }
        if !sets.contains(&SubSet::EMPTY) {
            return Err(SpaceError::MissingEmpty);
        }
        for &a in &sets {
            for &b in &sets {
                if !sets.contains(&a.union(b)) {
                    return Err(SpaceError::NotClosed { op: "union", a, b });
                }
                if !sets.contains(&a.inter(b)) {
                    return Err(SpaceError::NotClosed {
                        op: "intersection",
                        a,
                        b,
                    });
                }
            }
        }
        Ok(Base {
            n,
            sets: sets.into_iter().collect(),
        })
    }

    /// Least base containing `seed`.
    pub fn close(n: usize, seed: impl IntoIterator<Item = SubSet>) -> Base {
        let mut sets: BTreeSet<SubSet> = seed.into_iter().collect();
        sets.insert(SubSet::EMPTY);
        loop {
            let cur: Vec<SubSet> = sets.iter().copied().collect();
            let before = sets.len();
            for &a in &cur {
                for &b in &cur {
                    sets.insert(a.union(b));
                    sets.insert(a.inter(b));
                }
            }
            if sets.len() == before {
                break;
            }
        }
        Base {
            n,
            sets: sets.into_iter().collect(),
        }
    }

    pub fn powerset(n: usize) -> Base {
        Base {
            n,
            sets: (0..(1u64 << n)).map(SubSet).collect(),
        }
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[SubSet] {
        &self.sets
    }

    pub fn contains(&self, s: SubSet) -> bool {
        self.sets.binary_search(&s).is_ok()
    }

    pub fn contains_whole_space(&self) -> bool {
        self.contains(SubSet::full(self.n))
    }

    /// Disjoint `A' ⊆ a`, `B' ⊆ b` in the base with `A' ∪ B' = a ∪ b`.
    pub fn reduce_pair(&self, a: SubSet, b: SubSet) -> Option<(SubSet, SubSet)> {
        let u = a.union(b);
        self.sets.iter().filter(|s| s.is_subset(a)).find_map(|&a1| {
            let b1 = u.minus(a1);
            (b1.is_subset(b) && self.contains(b1)).then_some((a1, b1))
        })
    }

    /// Pairwise reduction property; finite sequences follow by iterating
    /// [`Base::reduce_seq`].
    pub fn has_reduction_property(&self) -> bool {
        self.sets
            .iter()
            .all(|&a| self.sets.iter().all(|&b| self.reduce_pair(a, b).is_some()))
    }

    /// Pairwise disjoint `D_i ⊆ A_i` from the base with the same union, by
    /// splitting off one set at a time.
    pub fn reduce_seq(&self, seq: &[SubSet]) -> Option<Vec<SubSet>> {
        match seq {
            [] => Some(Vec::new()),
            [a] => Some(vec![*a]),
            [a, rest @ ..] => {
                let tail = rest.iter().fold(SubSet::EMPTY, |u, s| u.union(*s));
                let (d, r) = self.reduce_pair(*a, tail)?;
                let restricted: Vec<SubSet> = rest.iter().map(|s| s.inter(r)).collect();
                let mut out = vec![d];
                out.extend(self.reduce_seq(&restricted)?);
                Some(out)
            }
        }
    }

    pub fn complements(&self) -> impl Iterator<Item = SubSet> + '_ {
        self.sets.iter().map(|s| s.complement(self.n))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.sets).expect("serializable")
    }

    /// Reads a list of sets, each a list of points. The list must already be
    /// closed under union and intersection.
    pub fn from_json(n: usize, v: &serde_json::Value) -> Result<Base, SpaceError> {
        let sets: Vec<SubSet> =
            serde_json::from_value(v.clone()).map_err(|e| SpaceError::Family(e.to_string()))?;
        Base::new(n, sets)
    }
}

/// A graded sequence of bases, each containing its predecessor and the
/// predecessor's complements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaBase {
    levels: Vec<Base>,
}

impl OmegaBase {
    pub fn new(levels: Vec<Base>) -> Result<OmegaBase, SpaceError> {
        if levels.is_empty() {
            return Err(SpaceError::EmptyOmegaBase);
        }
        for (j, w) in levels.windows(2).enumerate() {
            if w[0].points() != w[1].points() {
                return Err(SpaceError::Family("levels over different spaces".into()));
            }
            let ok = w[0]
                .sets()
                .iter()
                .copied()
                .chain(w[0].complements())
                .all(|s| w[1].contains(s));
            if !ok {
                return Err(SpaceError::NotGraded {
                    level: j + 1,
                    prev: j,
                });
            }
        }
        Ok(OmegaBase { levels })
    }

    /// `L_0 = base`, `L_{j+1}` the closure of `L_j` and its complements.
    pub fn generate(base: Base, len: usize) -> OmegaBase {
        let mut levels = vec![base];
        while levels.len() < len {
            let prev = levels.last().expect("nonempty");
            let seed: Vec<SubSet> = prev
                .sets()
                .iter()
                .copied()
                .chain(prev.complements())
                .collect();
            levels.push(Base::close(prev.points(), seed));
        }
        OmegaBase { levels }
    }

    pub fn levels(&self) -> &[Base] {
        &self.levels
    }

    pub fn points(&self) -> usize {
        self.levels[0].points()
    }
}

/// A total map from points to colors `0..k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KPartition {
    labels: Vec<u8>,
    #[serde(skip)]
    k: u8,
}

impl KPartition {
    pub fn new(labels: Vec<u8>, k: u8) -> Result<KPartition, SpaceError> {
        if let Some(&l) = labels.iter().find(|&&l| l >= k) {
            return Err(SpaceError::LabelOutOfRange { label: l, k });
        }
        Ok(KPartition { labels, k })
    }

    /// The characteristic 2-partition of `set`.
    pub fn from_set(n: usize, set: SubSet) -> KPartition {
        KPartition {
            labels: (0..n).map(|x| set.contains(x) as u8).collect(),
            k: 2,
        }
    }

    /// Every k-partition of `n` points in lexicographic order.
    pub fn all(n: usize, k: u8) -> Vec<KPartition> {
        let total = (k as usize).pow(n as u32);
        (0..total)
            .map(|mut code| {
                let mut labels = vec![0u8; n];
                for l in labels.iter_mut().rev() {
                    *l = (code % k as usize) as u8;
                    code /= k as usize;
                }
                KPartition { labels, k }
            })
            .collect()
    }

    /// Reads `"0110"`, `[0, 1, 1, 0]` or `{"labels": [0, 1, 1, 0]}`; without an explicit `k` the number
    /// of colors is one more than the largest label, and at least 2.
    pub fn parse(src: &str, k: Option<u8>) -> Result<KPartition, SpaceError> {
        let src = src.trim();
        let json = |e: serde_json::Error| SpaceError::Family(e.to_string());
        let labels: Vec<u8> = if src.starts_with('[') {
            serde_json::from_str(src).map_err(json)?
        } else if src.starts_with('{') {
            #[derive(Deserialize)]
            struct Repr {
                labels: Vec<u8>,
            }
            serde_json::from_str::<Repr>(src).map_err(json)?.labels
        } else {
            src.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| SpaceError::Family(format!("bad partition digit {c:?}")))
                })
                .collect::<Result<_, _>>()?
        };
        let k = k.unwrap_or_else(|| labels.iter().max().map_or(2, |&m| (m + 1).max(2)));
        KPartition::new(labels, k)
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, x: usize) -> u8 {
        self.labels[x]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// `A_i`, the points labeled `i`.
    pub fn part(&self, i: u8) -> SubSet {
        SubSet::from_points((0..self.labels.len()).filter(|&x| self.labels[x] == i))
    }

    /// `A ∘ f` for a map given as a point table.
    pub fn compose(&self, f: &[usize]) -> KPartition {
        KPartition {
            labels: f.iter().map(|&y| self.labels[y]).collect(),
            k: self.k,
        }
    }
}

impl fmt::Display for KPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.labels {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// `⋃{A_β ∖ ⋃_{γ<β} A_γ : β < n, parity(β) ≠ parity(n)}` for `n = sets.len()`.
pub fn difference_kernel(sets: &[SubSet]) -> SubSet {
    let n = sets.len();
    let mut below = SubSet::EMPTY;
    let mut out = SubSet::EMPTY;
    for (beta, &a) in sets.iter().enumerate() {
        if beta % 2 != n % 2 {
            out = out.union(a.minus(below));
        }
        below = below.union(a);
    }
    out
}

pub(crate) fn require_flat(f: &Forest) -> Result<(), SpaceError> {
    if f.nesting_level() > 1 {
        Err(SpaceError::NotFlat)
    } else {
        Ok(())
    }
}

pub fn guard(n: usize, k: u8, override_guard: bool) -> Result<(), SpaceError> {
    if override_guard {
        return Ok(());
    }
    if n > MAX_POINTS {
        return Err(SpaceError::SizeGuard {
            what: "number of points",
            limit: MAX_POINTS,
        });
    }
    if k > MAX_COLORS {
        return Err(SpaceError::SizeGuard {
            what: "number of colors",
            limit: MAX_COLORS as usize,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(pts: &[usize]) -> SubSet {
        SubSet::from_points(pts.iter().copied())
    }

    #[test]
    fn close_base_examples() {
        assert_eq!(Base::close(3, []).sets(), &[SubSet::EMPTY]);
        let chain = FiniteSpace::chain(2).up_sets();
        assert_eq!(Base::close(2, chain.sets().iter().copied()), chain);
        let b = Base::close(2, [s(&[0]), s(&[1])]);
        assert_eq!(b.sets(), &[s(&[]), s(&[0]), s(&[1]), s(&[0, 1])]);
    }

    #[test]
    fn up_set_examples() {
        assert_eq!(
            FiniteSpace::chain(2).up_sets().sets(),
            &[s(&[]), s(&[1]), s(&[0, 1])]
        );
        assert_eq!(FiniteSpace::antichain(2).up_sets(), Base::powerset(2));
        assert_eq!(FiniteSpace::diamond().up_sets().sets().len(), 7);
    }

    #[test]
    fn base_validation() {
        assert_eq!(Base::new(2, [s(&[0])]), Err(SpaceError::MissingEmpty));
        assert!(matches!(
            Base::new(2, [s(&[]), s(&[0]), s(&[1])]),
            Err(SpaceError::NotClosed { op: "union", .. })
        ));
        assert!(Base::new(2, [s(&[]), s(&[1]), s(&[0, 1])]).is_ok());
    }

    #[test]
    fn space_validation() {
        assert_eq!(
            FiniteSpace::new(2, &[(0, 1), (1, 0)]),
            Err(SpaceError::NotAntisymmetric(0, 1))
        );
        let sp = FiniteSpace::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(sp.le(0, 2));
        let back = FiniteSpace::from_json(&sp.to_json()).unwrap();
        assert_eq!(back, sp);
    }

    #[test]
    fn poset_counts() {
        // unlabeled posets: 1, 1, 2, 5, 16
        let counts: Vec<usize> = (0..=4).map(|n| all_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16]);
    }

    #[test]
    fn difference_kernel_examples() {
        assert_eq!(difference_kernel(&[s(&[0, 2])]), s(&[0, 2]));
        assert_eq!(difference_kernel(&[s(&[0]), s(&[0, 1])]), s(&[1]));
        let (a0, a1, a2) = (s(&[0]), s(&[1, 2]), s(&[0, 2, 3]));
        assert_eq!(
            difference_kernel(&[a0, a1, a2]),
            a0.union(a2.minus(a0.union(a1)))
        );
        assert_eq!(difference_kernel(&[]), SubSet::EMPTY);
    }

    #[test]
    fn reduction_examples() {
        assert!(Base::powerset(3).has_reduction_property());
        for n in 1..=4 {
            assert!(FiniteSpace::chain(n).up_sets().has_reduction_property());
        }
        let d = FiniteSpace::diamond();
        let ups = d.up_sets();
        assert!(!ups.has_reduction_property());
        assert!(ups.reduce_pair(d.up_of(0), d.up_of(1)).is_none());
    }

    #[test]
    fn reduce_sequences_of_three() {
        let b = Base::powerset(3);
        let seq = [s(&[0, 1]), s(&[1, 2]), s(&[0, 2])];
        let d = b.reduce_seq(&seq).unwrap();
        assert!(d.iter().zip(&seq).all(|(x, a)| x.is_subset(*a)));
        assert!(d[0].is_disjoint(d[1]) && d[0].is_disjoint(d[2]) && d[1].is_disjoint(d[2]));
        assert_eq!(d[0].union(d[1]).union(d[2]), SubSet::full(3));
    }

    #[test]
    fn omega_base_validation() {
        let ups = FiniteSpace::chain(2).up_sets();
        assert!(OmegaBase::new(vec![ups.clone(), Base::powerset(2)]).is_ok());
        assert_eq!(
            OmegaBase::new(vec![ups.clone(), ups.clone()]),
            Err(SpaceError::NotGraded { level: 1, prev: 0 })
        );
        let g = OmegaBase::generate(ups, 3);
        assert_eq!(g.levels()[1], Base::powerset(2));
    }

    #[test]
    fn partitions() {
        assert_eq!(KPartition::all(2, 2).len(), 4);
        assert_eq!(KPartition::all(3, 3).len(), 27);
        let a = KPartition::new(vec![0, 1, 1], 2).unwrap();
        assert_eq!(a.part(1), s(&[1, 2]));
        assert!(KPartition::new(vec![0, 2], 2).is_err());
        assert_eq!(a.compose(&[2, 0, 0]).labels(), &[1, 0, 0]);
    }

    #[test]
    fn partition_parse() {
        let a = KPartition::parse("0120", None).unwrap();
        assert_eq!((a.k(), a.len(), a.get(2)), (3, 4, 2));
        assert_eq!(KPartition::parse("[1, 0]", None).unwrap().k(), 2);
        assert_eq!(KPartition::parse("00", None).unwrap().k(), 2);
        let j = serde_json::to_string(&KPartition::parse("102", None).unwrap()).unwrap();
        assert_eq!(j, r#"{"labels":[1,0,2]}"#);
        assert_eq!(KPartition::parse(&j, None).unwrap().labels(), &[1, 0, 2]);
        assert!(KPartition::parse("02", Some(2)).is_err());
        assert!(KPartition::parse("0x", None).is_err());
    }

    #[test]
    fn base_from_json() {
        let v = serde_json::json!([[], [1], [0, 1]]);
        assert_eq!(
            Base::from_json(2, &v).unwrap(),
            FiniteSpace::chain(2).up_sets()
        );
        assert!(Base::from_json(2, &serde_json::json!([[0], [1]])).is_err());
    }
}
