use serde::{Deserialize, Serialize};

use super::{Base, KPartition, SpaceError, SubSet};
use crate::forest::{Forest, Label, Tree};

/// Sets attached to one node. `inner` holds the family over the node's
/// label forest, one entry per label node in pre-order; at the last level it
/// is empty. A color label below the last level is read as `s(color)` and
/// carries a one-entry inner family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSets {
    pub set: SubSet,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inner: Vec<NodeSets>,
}

impl NodeSets {
    pub fn flat(set: SubSet) -> NodeSets {
        NodeSets {
            set,
            inner: Vec::new(),
        }
    }
}

/// A family over a forest and `levels` bases; `nodes` follows the
/// pre-order of `forest.nodes()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PFamily {
    pub forest: Forest,
    pub levels: usize,
    pub nodes: Vec<NodeSets>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Definition {
    Defines(KPartition),
    /// Components with colors `a != b` share `point`.
    Conflict {
        point: usize,
        colors: (u8, u8),
    },
    Uncovered {
        point: usize,
    },
}

/// Pre-order view of a forest with parent links and strict descendants.
pub(crate) struct Shape<'a> {
    pub nodes: Vec<&'a Tree>,
    pub parent: Vec<Option<usize>>,
    pub desc: Vec<Vec<usize>>,
}

impl<'a> Shape<'a> {
    pub fn of(f: &'a Forest) -> Shape<'a> {
        fn walk<'a>(
            t: &'a Tree,
            p: Option<usize>,
            nodes: &mut Vec<&'a Tree>,
            parent: &mut Vec<Option<usize>>,
        ) {
            let id = nodes.len();
            nodes.push(t);
            parent.push(p);
            for c in &t.children.trees {
                walk(c, Some(id), nodes, parent);
            }
        }
        let (mut nodes, mut parent) = (Vec::new(), Vec::new());
        for t in &f.trees {
            walk(t, None, &mut nodes, &mut parent);
        }
        let n = nodes.len();
        let mut desc = vec![Vec::new(); n];
        for q in 0..n {
            let mut cur = parent[q];
            while let Some(p) = cur {
                desc[p].push(q);
                cur = parent[p];
            }
        }
        Shape {
            nodes,
            parent,
            desc,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn comparable(&self, p: usize, q: usize) -> bool {
        p == q || self.desc[p].contains(&q) || self.desc[q].contains(&p)
    }

    /// `B̃_p = B_p ∖ ⋃{B_q : q < p}`.
    pub fn component(&self, sets: &[SubSet], p: usize) -> SubSet {
        self.desc[p]
            .iter()
            .fold(sets[p], |acc, &q| acc.minus(sets[q]))
    }
}

/// The forest a node's inner family ranges over, or `None` at the last level.
pub(crate) fn label_forest(label: &Label, j: usize, levels: usize) -> Option<Forest> {
    (j + 1 < levels).then(|| label.to_forest())
}

fn fam_err<T>(msg: impl Into<String>) -> Result<T, SpaceError> {
    Err(SpaceError::Family(msg.into()))
}

impl PFamily {
    pub fn flat(forest: Forest, sets: &[SubSet]) -> PFamily {
        PFamily {
            forest,
            levels: 1,
            nodes: sets.iter().map(|&s| NodeSets::flat(s)).collect(),
        }
    }

    /// Shape and chain condition at every level.
    pub fn validate(&self) -> Result<(), SpaceError> {
        if self.levels == 0 {
            return fam_err("a family needs at least one level");
        }
        if self.forest.nesting_level() > self.levels {
            return Err(SpaceError::LevelMismatch {
                needed: self.forest.nesting_level(),
                available: self.levels,
            });
        }
        validate_level(&self.forest, &self.nodes, 0, self.levels)
    }

    /// Every set at tuple depth `j` lies in `bases[j]`.
    pub fn check_bases(&self, bases: &[Base]) -> Result<(), SpaceError> {
        if bases.len() < self.levels {
            return Err(SpaceError::LevelMismatch {
                needed: self.levels,
                available: bases.len(),
            });
        }
        fn go(nodes: &[NodeSets], j: usize, bases: &[Base]) -> Result<(), SpaceError> {
            for ns in nodes {
                if !bases[j].contains(ns.set) {
                    return Err(SpaceError::NotInBase {
                        set: ns.set,
                        level: j,
                    });
                }
                go(&ns.inner, j + 1, bases)?;
            }
            Ok(())
        }
        go(&self.nodes, 0, bases)
    }

    pub fn top_sets(&self) -> Vec<SubSet> {
        self.nodes.iter().map(|n| n.set).collect()
    }

    /// Final components with their colors.
    pub fn components(&self) -> Vec<(SubSet, u8)> {
        let mut out = Vec::new();
        collect_components(&self.forest, &self.nodes, 0, self.levels, &mut out);
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

fn validate_level(
    f: &Forest,
    nodes: &[NodeSets],
    j: usize,
    levels: usize,
) -> Result<(), SpaceError> {
    let shape = Shape::of(f);
    if shape.len() != nodes.len() {
        return fam_err(format!(
            "level {j}: forest {f} has {} nodes but {} sets are given",
            shape.len(),
            nodes.len()
        ));
    }
    let sets: Vec<SubSet> = nodes.iter().map(|n| n.set).collect();
    for (p, t) in shape.nodes.iter().enumerate() {
        match label_forest(&t.label, j, levels) {
            None => {
                if t.label.as_color().is_none() {
                    return fam_err(format!("level {j}: nested label at the last level"));
                }
                if !nodes[p].inner.is_empty() {
                    return fam_err(format!("level {j}: inner sets at the last level"));
                }
            }
            Some(g) => {
                let comp = shape.component(&sets, p);
                let union = nodes[p]
                    .inner
                    .iter()
                    .fold(SubSet::EMPTY, |u, n| u.union(n.set));
                validate_level(&g, &nodes[p].inner, j + 1, levels)?;
                if union != comp {
                    return fam_err(format!(
                        "level {j}: inner sets of node {p} cover {union}, component is {comp}"
                    ));
                }
            }
        }
    }
    Ok(())
}

fn collect_components(
    f: &Forest,
    nodes: &[NodeSets],
    j: usize,
    levels: usize,
    out: &mut Vec<(SubSet, u8)>,
) {
    let shape = Shape::of(f);
    let sets: Vec<SubSet> = nodes.iter().map(|n| n.set).collect();
    for (p, t) in shape.nodes.iter().enumerate() {
        match label_forest(&t.label, j, levels) {
            None => out.push((shape.component(&sets, p), t.label.as_color().unwrap_or(0))),
            Some(g) => collect_components(&g, &nodes[p].inner, j + 1, levels, out),
        }
    }
}

/// The k-partition defined by a family on `points` points, or the first
/// obstruction found.
pub fn family_defines(fam: &PFamily, points: usize, k: u8) -> Result<Definition, SpaceError> {
    fam.validate()?;
    let comps = fam.components();
    if let Some(&(_, c)) = comps.iter().find(|(_, c)| *c >= k) {
        return Err(SpaceError::LabelOutOfRange { label: c, k });
    }
    let mut labels: Vec<Option<u8>> = vec![None; points];
    for &(set, c) in &comps {
        for x in set.points() {
            if x >= points {
                return Err(SpaceError::PointOutOfRange {
                    point: x,
                    n: points,
                });
            }
            match labels[x] {
                Some(d) if d != c => {
                    return Ok(Definition::Conflict {
                        point: x,
                        colors: (d.min(c), d.max(c)),
                    })
                }
                _ => labels[x] = Some(c),
            }
        }
    }
    match labels.iter().position(Option::is_none) {
        Some(x) => Ok(Definition::Uncovered { point: x }),
        None => Ok(Definition::Defines(KPartition::new(
            labels.into_iter().flatten().collect(),
            k,
        )?)),
    }
}

/// Chain depths of `T_n`: `Some(n)` iff `f` is the alternating chain with
/// root color 0.
fn chain_length(f: &Forest) -> Option<usize> {
    let [t] = f.trees.as_slice() else { return None };
    let mut cur = t;
    let mut depth = 0;
    loop {
        if cur.label != Label::Color((depth % 2) as u8) {
            return None;
        }
        match cur.children.trees.as_slice() {
            [] => return Some(depth),
            [c] => {
                cur = c;
                depth += 1;
            }
            _ => return None,
        }
    }
}

/// `A_β = ⋃{B_p : rk(p) ≤ β}` for `β < n` over a `T_n`-family, so that
/// `D_n(A_0, ..., A_{n-1})` is the union of the color-1 components.
pub fn family_to_diff_sequence(fam: &PFamily) -> Result<Vec<SubSet>, SpaceError> {
    let n = chain_length(&fam.forest).ok_or(SpaceError::NotCanonicalChain)?;
    if fam.levels != 1 || fam.nodes.len() != n + 1 {
        return Err(SpaceError::NotFlat);
    }
    // node at depth d has rank n - d
    let mut out = Vec::with_capacity(n);
    let mut acc = SubSet::EMPTY;
    for beta in 0..n {
        acc = acc.union(fam.nodes[n - beta].set);
        out.push(acc);
    }
    Ok(out)
}

/// Root gets the whole space, the rank-β node gets `A_β`.
pub fn diff_sequence_to_family(seq: &[SubSet], base: &Base) -> Result<PFamily, SpaceError> {
    let whole = SubSet::full(base.points());
    if !base.contains(whole) {
        return Err(SpaceError::WholeSpaceMissing);
    }
    if let Some(&set) = seq.iter().find(|s| !base.contains(**s)) {
        return Err(SpaceError::NotInBase { set, level: 0 });
    }
    let n = seq.len();
    let forest = crate::canonical::t_flat(n, crate::canonical::Polarity::Plain).into_forest();
    let mut sets = vec![whole];
    sets.extend((0..n).rev().map(|beta| seq[beta]));
    Ok(PFamily::flat(forest, &sets))
}

fn monotonize_level(f: &Forest, nodes: &[NodeSets]) -> Vec<NodeSets> {
    let shape = Shape::of(f);
    (0..shape.len())
        .map(|p| NodeSets {
            set: shape.desc[p]
                .iter()
                .fold(nodes[p].set, |u, &q| u.union(nodes[q].set)),
            inner: nodes[p].inner.clone(),
        })
        .collect()
}

/// `C_p = ⋃{B_q : q ≤ p}` at the top level. Components are unchanged.
pub fn monotonize(fam: &PFamily) -> PFamily {
    PFamily {
        forest: fam.forest.clone(),
        levels: fam.levels,
        nodes: monotonize_level(&fam.forest, &fam.nodes),
    }
}

fn check_levels(
    f: &Forest,
    nodes: &[NodeSets],
    j: usize,
    levels: usize,
    pred: &dyn Fn(&Shape, &[SubSet]) -> bool,
) -> bool {
    let shape = Shape::of(f);
    let sets: Vec<SubSet> = nodes.iter().map(|n| n.set).collect();
    pred(&shape, &sets)
        && shape
            .nodes
            .iter()
            .enumerate()
            .all(|(p, t)| match label_forest(&t.label, j, levels) {
                None => true,
                Some(g) => check_levels(&g, &nodes[p].inner, j + 1, levels, pred),
            })
}

fn monotone_pred(shape: &Shape, sets: &[SubSet]) -> bool {
    (0..shape.len()).all(|q| shape.parent[q].is_none_or(|p| sets[q].is_subset(sets[p])))
}

/// Child sets inside parent sets, at every level.
pub fn is_monotone(fam: &PFamily) -> bool {
    check_levels(&fam.forest, &fam.nodes, 0, fam.levels, &monotone_pred)
}

/// Monotone with incomparable nodes disjoint, at every level.
pub fn is_reduced(fam: &PFamily) -> bool {
    check_levels(&fam.forest, &fam.nodes, 0, fam.levels, &|shape, sets| {
        monotone_pred(shape, sets)
            && (0..shape.len()).all(|p| {
                (p + 1..shape.len()).all(|q| shape.comparable(p, q) || sets[p].is_disjoint(sets[q]))
            })
    })
}

/// A reduced family defining the same partial partition, by monotonizing
/// and then disjointifying siblings top-down. At nested levels inner
/// families are restricted to the new components and reduced in turn.
pub fn reduce_family(fam: &PFamily, bases: &[Base]) -> Result<PFamily, SpaceError> {
    fam.validate()?;
    fam.check_bases(bases)?;
    for (j, b) in bases.iter().enumerate().take(fam.levels) {
        if !b.has_reduction_property() {
            return Err(SpaceError::NoReduction(j));
        }
    }
    let nodes = reduce_level(&fam.forest, &fam.nodes, 0, fam.levels, bases)?;
    Ok(PFamily {
        forest: fam.forest.clone(),
        levels: fam.levels,
        nodes,
    })
}

fn reduce_level(
    f: &Forest,
    nodes: &[NodeSets],
    j: usize,
    levels: usize,
    bases: &[Base],
) -> Result<Vec<NodeSets>, SpaceError> {
    let shape = Shape::of(f);
    let mono = monotonize_level(f, nodes);
    let mut sets: Vec<SubSet> = mono.iter().map(|n| n.set).collect();
    let roots: Vec<usize> = (0..shape.len())
        .filter(|&p| shape.parent[p].is_none())
        .collect();
    let mut groups = vec![roots];
    while let Some(group) = groups.pop() {
        let current: Vec<SubSet> = group.iter().map(|&p| sets[p]).collect();
        let reduced = bases[j]
            .reduce_seq(&current)
            .ok_or(SpaceError::NoReduction(j))?;
        for (&p, d) in group.iter().zip(reduced) {
            sets[p] = d;
            let children: Vec<usize> = (0..shape.len())
                .filter(|&q| shape.parent[q] == Some(p))
                .collect();
            for &c in &children {
                sets[c] = sets[c].inter(d);
            }
            if !children.is_empty() {
                groups.push(children);
            }
        }
    }
    let mut out = Vec::with_capacity(shape.len());
    for (p, t) in shape.nodes.iter().enumerate() {
        let inner = match label_forest(&t.label, j, levels) {
            None => Vec::new(),
            Some(g) => {
                let comp = shape.component(&sets, p);
                let restricted: Vec<NodeSets> =
                    mono[p].inner.iter().map(|n| restrict(n, comp)).collect();
                reduce_level(&g, &restricted, j + 1, levels, bases)?
            }
        };
        out.push(NodeSets {
            set: sets[p],
            inner,
        });
    }
    Ok(out)
}

fn restrict(n: &NodeSets, to: SubSet) -> NodeSets {
    NodeSets {
        set: n.set.inter(to),
        inner: n.inner.iter().map(|m| restrict(m, to)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{difference_kernel, FiniteSpace};
    use crate::term::parse_term;

    fn s(pts: &[usize]) -> SubSet {
        SubSet::from_points(pts.iter().copied())
    }

    fn f(t: &str) -> Forest {
        parse_term(t).unwrap()
    }

    #[test]
    fn t1_family_on_chain() {
        let fam = PFamily::flat(f("0*1"), &[s(&[0, 1]), s(&[1])]);
        let d = family_defines(&fam, 2, 2).unwrap();
        assert_eq!(
            d,
            Definition::Defines(KPartition::new(vec![0, 1], 2).unwrap())
        );
    }

    #[test]
    fn obstructions() {
        let fam = PFamily::flat(f("0|1"), &[s(&[0, 1]), s(&[1])]);
        assert_eq!(
            family_defines(&fam, 2, 2).unwrap(),
            Definition::Conflict {
                point: 1,
                colors: (0, 1)
            }
        );
        let empty = PFamily::flat(Forest::bottom(), &[]);
        assert_eq!(
            family_defines(&empty, 1, 2).unwrap(),
            Definition::Uncovered { point: 0 }
        );
        let bad = PFamily::flat(f("0*1"), &[s(&[0])]);
        assert!(matches!(
            family_defines(&bad, 2, 2),
            Err(SpaceError::Family(_))
        ));
    }

    #[test]
    fn nested_chain_condition() {
        // s(0|1) with root X and inner sets A_0, A_1
        let fam = PFamily {
            forest: f("s(0|1)"),
            levels: 2,
            nodes: vec![NodeSets {
                set: s(&[0, 1, 2]),
                inner: vec![NodeSets::flat(s(&[0])), NodeSets::flat(s(&[1, 2]))],
            }],
        };
        assert_eq!(
            family_defines(&fam, 3, 2).unwrap(),
            Definition::Defines(KPartition::new(vec![0, 1, 1], 2).unwrap())
        );
        let mut broken = fam.clone();
        broken.nodes[0].inner[1].set = s(&[1]);
        assert!(broken.validate().is_err());
    }

    #[test]
    fn diff_sequence_round_trip() {
        let fam = PFamily::flat(f("0*1"), &[s(&[0, 1]), s(&[1])]);
        let seq = family_to_diff_sequence(&fam).unwrap();
        assert_eq!(seq, vec![s(&[1])]);
        let ups = FiniteSpace::chain(2).up_sets();
        let back = diff_sequence_to_family(&seq, &ups).unwrap();
        assert_eq!(back, fam);

        let constant = PFamily::flat(f("0"), &[s(&[0, 1])]);
        assert_eq!(
            family_to_diff_sequence(&constant).unwrap(),
            Vec::<SubSet>::new()
        );
        assert_eq!(difference_kernel(&[]), SubSet::EMPTY);

        let b = Base::powerset(3);
        let seq = vec![s(&[0]), s(&[0, 1]), s(&[0, 1, 2])];
        let fam = diff_sequence_to_family(&seq, &b).unwrap();
        let Definition::Defines(a) = family_defines(&fam, 3, 2).unwrap() else {
            panic!()
        };
        assert_eq!(a.part(1), difference_kernel(&seq));
        assert_eq!(family_to_diff_sequence(&fam).unwrap(), seq);
    }

    #[test]
    fn diff_sequence_rejects_non_base_sets() {
        let ups = FiniteSpace::chain(2).up_sets();
        assert!(matches!(
            diff_sequence_to_family(&[s(&[0])], &ups),
            Err(SpaceError::NotInBase { .. })
        ));
    }

    #[test]
    fn reduce_disjointifies() {
        let b = Base::powerset(3);
        let fam = PFamily::flat(f("0|0*1"), &[s(&[0, 1]), s(&[1, 2]), s(&[2])]);
        let before = family_defines(&fam, 3, 2).unwrap();
        let red = reduce_family(&fam, &[b]).unwrap();
        assert!(is_reduced(&red));
        assert_eq!(family_defines(&red, 3, 2).unwrap(), before);
    }

    #[test]
    fn reduce_requires_the_property() {
        let d = FiniteSpace::diamond();
        let fam = PFamily::flat(f("0"), &[SubSet::full(4)]);
        assert_eq!(
            reduce_family(&fam, &[d.up_sets()]),
            Err(SpaceError::NoReduction(0))
        );
    }

    #[test]
    fn json_round_trip() {
        let fam = PFamily {
            forest: f("s(0|1)"),
            levels: 2,
            nodes: vec![NodeSets {
                set: s(&[0, 1]),
                inner: vec![NodeSets::flat(s(&[0])), NodeSets::flat(s(&[1]))],
            }],
        };
        let back: PFamily = serde_json::from_value(fam.to_json()).unwrap();
        assert_eq!(back, fam);
    }
}
