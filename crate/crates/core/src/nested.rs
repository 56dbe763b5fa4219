//! Iterated forests as k-labeled n-preorders.
//!
//! A forest of nesting level at most `n` flattens to the set of tuples
//! `(p_0, ..., p_{n-1})` with `p_0` a node of `P` and each `p_{i+1}` a node
//! of the label of `p_i`, where a color `i` is read as the singleton `s(i)`.
//! `p ≤_i r` iff the tuples agree before position `i` and `p_i ≤ r_i`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forest::{Forest, Label, Tree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NestedError {
    #[error("l is defined on forests of nesting level at least 2, got level {0}")]
    LevelTooLow(usize),
    #[error("forest has nesting level {level}, more than the requested {n}")]
    LevelOverflow { level: usize, n: usize },
    #[error("an n-preorder needs n >= 1")]
    NoLayers,
    #[error("layer {layer}: {msg}")]
    Layer { layer: usize, msg: String },
    #[error("s(⊥) is not a label")]
    EmptyLabel,
}

/// Elements `0..len` with `n` preorders and a coloring. `tuples` records the
/// node paths when the structure came from [`flatten`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledNPreorder {
    pub labels: Vec<u8>,
    /// `le[i][x][y]` is `x ≤_i y`.
    pub le: Vec<Vec<Vec<bool>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tuples: Vec<Vec<usize>>,
}

impl LabeledNPreorder {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn layers(&self) -> usize {
        self.le.len()
    }

    /// Each layer a preorder, the last a partial order, and `≤_{i+1}`
    /// inside `≡_i`.
    pub fn validate(&self) -> Result<(), NestedError> {
        let m = self.len();
        let n = self.layers();
        if n == 0 {
            return Err(NestedError::NoLayers);
        }
        let err = |layer: usize, msg: String| Err(NestedError::Layer { layer, msg });
        for (i, rel) in self.le.iter().enumerate() {
            if rel.len() != m || rel.iter().any(|r| r.len() != m) {
                return err(i, "relation has the wrong dimensions".into());
            }
            for x in 0..m {
                if !rel[x][x] {
                    return err(i, format!("not reflexive at {x}"));
                }
                for y in 0..m {
                    for z in 0..m {
                        if rel[x][y] && rel[y][z] && !rel[x][z] {
                            return err(i, format!("not transitive at {x}, {y}, {z}"));
                        }
                    }
                    if i + 1 < n && self.le[i + 1][x][y] && !(rel[x][y] && rel[y][x]) {
                        return err(i + 1, format!("{x} ≤ {y} but they differ on layer {i}"));
                    }
                    if i + 1 == n && x != y && rel[x][y] && rel[y][x] {
                        return err(i, format!("last layer is not antisymmetric at {x}, {y}"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// The singleton tree labeled `q`.
pub fn s_embed(q: Label) -> Forest {
    Forest::singleton(q)
}

/// `s(F)` for a forest `F`; a single childless color collapses to itself.
pub fn s_embed_forest(f: &Forest) -> Result<Forest, NestedError> {
    if f.is_empty() {
        return Err(NestedError::EmptyLabel);
    }
    Ok(Forest::singleton(Label::nested(f.clone())))
}

/// Join of all labels occurring in `P`, colors read as `s(i)`.
pub fn l_join(p: &Forest) -> Result<Forest, NestedError> {
    let level = p.nesting_level();
    if level < 2 {
        return Err(NestedError::LevelTooLow(level));
    }
    let labels: Vec<Forest> = p.nodes().iter().map(|t| t.label.to_forest()).collect();
    Ok(Forest::join_many(&labels))
}

/// Pre-order node list with the (reflexive) tree order.
fn poset_of(f: &Forest) -> (Vec<&Tree>, Vec<Vec<bool>>) {
    fn walk<'a>(
        t: &'a Tree,
        anc: &mut Vec<usize>,
        nodes: &mut Vec<&'a Tree>,
        pairs: &mut Vec<(usize, usize)>,
    ) {
        let id = nodes.len();
        nodes.push(t);
        for &a in anc.iter() {
            pairs.push((id, a));
        }
        anc.push(id);
        for c in &t.children.trees {
            walk(c, anc, nodes, pairs);
        }
        anc.pop();
    }
    let (mut nodes, mut pairs) = (Vec::new(), Vec::new());
    for t in &f.trees {
        walk(t, &mut Vec::new(), &mut nodes, &mut pairs);
    }
    let m = nodes.len();
    let mut le = vec![vec![false; m]; m];
    for (x, row) in le.iter_mut().enumerate() {
        row[x] = true;
    }
    for (x, y) in pairs {
        le[x][y] = true;
    }
    (nodes, le)
}

/// Elements of the flattening as node paths with their colors.
fn tuples(f: &Forest, n: usize) -> Vec<(Vec<usize>, u8)> {
    let (nodes, _) = poset_of(f);
    let mut out = Vec::new();
    for (i, t) in nodes.iter().enumerate() {
        if n == 1 {
            let c = t.label.as_color().expect("level checked");
            out.push((vec![i], c));
        } else {
            for (mut rest, c) in tuples(&t.label.to_forest(), n - 1) {
                rest.insert(0, i);
                out.push((rest, c));
            }
        }
    }
    out
}

/// The object `P°` over `n` layers, padding shallow labels by `i = s(i)`.
pub fn flatten(p: &Forest, n: usize) -> Result<LabeledNPreorder, NestedError> {
    if n == 0 {
        return Err(NestedError::NoLayers);
    }
    let level = p.nesting_level();
    if level > n {
        return Err(NestedError::LevelOverflow { level, n });
    }
    let elems = tuples(p, n);
    let m = elems.len();
    let mut le = vec![vec![vec![false; m]; m]; n];
    for (a, (pa, _)) in elems.iter().enumerate() {
        for (b, (pb, _)) in elems.iter().enumerate() {
            // walk the common prefix, comparing in the forest at each depth
            let mut forest = p.clone();
            for i in 0..n {
                let (nodes, order) = poset_of(&forest);
                le[i][a][b] = order[pa[i]][pb[i]];
                if pa[i] != pb[i] {
                    break;
                }
                if i + 1 < n {
                    forest = nodes[pa[i]].label.to_forest();
                }
            }
        }
    }
    Ok(LabeledNPreorder {
        labels: elems.iter().map(|(_, c)| *c).collect(),
        tuples: elems.into_iter().map(|(t, _)| t).collect(),
        le,
    })
}

/// The object `X⁺`: the quotient of `≤_0` as a forest, each class labeled by
/// the unflattening of its remaining layers.
pub fn unflatten(x: &LabeledNPreorder) -> Result<Forest, NestedError> {
    x.validate()?;
    let all: Vec<usize> = (0..x.len()).collect();
    build(x, &all, 0)
}

fn build(x: &LabeledNPreorder, elems: &[usize], layer: usize) -> Result<Forest, NestedError> {
    let rel = &x.le[layer];
    let last = layer + 1 == x.layers();
    // equivalence classes of ≤_layer
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &e in elems {
        match classes.iter_mut().find(|c| rel[c[0]][e] && rel[e][c[0]]) {
            Some(c) => c.push(e),
            None => classes.push(vec![e]),
        }
    }
    let k = classes.len();
    let lt = |a: usize, b: usize| a != b && rel[classes[a][0]][classes[b][0]];
    // parent = least class strictly above; the classes above must form a chain
    let mut parent = vec![None; k];
    for a in 0..k {
        let above: Vec<usize> = (0..k).filter(|&b| lt(a, b)).collect();
        for &b in &above {
            for &c in &above {
                if b != c && !lt(b, c) && !lt(c, b) {
                    return Err(NestedError::Layer {
                        layer,
                        msg: format!(
                            "quotient is not a forest: two incomparable classes above element {}",
                            classes[a][0]
                        ),
                    });
                }
            }
        }
        parent[a] = above
            .iter()
            .copied()
            .find(|&b| above.iter().all(|&c| c == b || lt(b, c)));
    }
    let mut labels = Vec::with_capacity(k);
    for class in &classes {
        let label = if last {
            Label::Color(x.labels[class[0]])
        } else {
            Label::nested(build(x, class, layer + 1)?)
        };
        labels.push(label);
    }
    fn tree(a: usize, parent: &[Option<usize>], labels: &[Label]) -> Tree {
        let children = (0..parent.len())
            .filter(|&b| parent[b] == Some(a))
            .map(|b| tree(b, parent, labels))
            .collect();
        Tree::wrap(labels[a].clone(), Forest::new(children))
    }
    Ok(Forest::new(
        (0..k)
            .filter(|&a| parent[a].is_none())
            .map(|a| tree(a, &parent, &labels))
            .collect(),
    ))
}

/// A label-preserving map monotone for every layer, by backtracking.
/// Structures with different layer counts are compared after padding the
/// shallower one with equality layers.
pub fn has_morphism(x: &LabeledNPreorder, y: &LabeledNPreorder) -> bool {
    let n = x.layers().max(y.layers());
    let rel = |s: &LabeledNPreorder, i: usize, a: usize, b: usize| {
        if i < s.layers() {
            s.le[i][a][b]
        } else {
            a == b
        }
    };
    let m = x.len();
    let mut image = vec![usize::MAX; m];
    fn go(
        a: usize,
        image: &mut Vec<usize>,
        x: &LabeledNPreorder,
        y: &LabeledNPreorder,
        n: usize,
        rel: &dyn Fn(&LabeledNPreorder, usize, usize, usize) -> bool,
    ) -> bool {
        if a == image.len() {
            return true;
        }
        for b in 0..y.len() {
            if y.labels[b] != x.labels[a] {
                continue;
            }
            let ok = (0..a).all(|p| {
                (0..n).all(|i| {
                    (!rel(x, i, p, a) || rel(y, i, image[p], b))
                        && (!rel(x, i, a, p) || rel(y, i, b, image[p]))
                })
            });
            if ok {
                image[a] = b;
                if go(a + 1, image, x, y, n, rel) {
                    return true;
                }
            }
        }
        false
    }
    go(0, &mut image, x, y, n, &rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{h_equiv, h_leq};
    use crate::term::parse_term;

    fn f(t: &str) -> Forest {
        parse_term(t).unwrap()
    }

    #[test]
    fn levels() {
        assert_eq!(f("0|1").nesting_level(), 1);
        assert_eq!(f("s(0*1)").nesting_level(), 2);
        assert_eq!(f("(0*1)*2").nesting_level(), 2);
        assert_eq!(Forest::bottom().nesting_level(), 0);
    }

    #[test]
    fn s_and_l() {
        assert_eq!(s_embed(Label::Color(0)), f("0"));
        for q in ["0*1", "0|1*0", "s(0|1)"] {
            let q = f(q);
            let s = s_embed_forest(&q).unwrap();
            assert!(h_equiv(&l_join(&s).unwrap(), &q));
        }
        let chain = Tree::wrap(Label::nested(f("0*1")), f("s(1|0)")).into_forest();
        assert!(h_equiv(&l_join(&chain).unwrap(), &f("0*1|1|0")));
        assert_eq!(l_join(&f("0*1")), Err(NestedError::LevelTooLow(1)));
        assert!(h_leq(&f("s(0|1)"), &f("s(0*1)")));
        assert!(h_leq(&f("0*1|1*0"), &f("0*1*0")));
    }

    #[test]
    fn flatten_examples() {
        let x = flatten(&f("0"), 1).unwrap();
        assert_eq!(x.labels, vec![0]);
        let y = flatten(&f("s(0|1)"), 2).unwrap();
        assert_eq!(y.len(), 2);
        assert!(y.le[0][0][1] && y.le[0][1][0]);
        assert!(!y.le[1][0][1] && !y.le[1][1][0]);
        assert_eq!(unflatten(&y).unwrap(), f("s(0|1)"));
        // padding: a flat forest over two layers
        let z = flatten(&f("0*1"), 2).unwrap();
        assert_eq!(z.len(), 2);
        assert!(h_equiv(&unflatten(&z).unwrap(), &f("0*1")));
        assert!(matches!(
            flatten(&f("s(0*1)"), 1),
            Err(NestedError::LevelOverflow { level: 2, n: 1 })
        ));
    }

    #[test]
    fn unflatten_rejects_non_forests() {
        // two incomparable classes above a bottom element
        let le0 = vec![
            vec![true, true, true],
            vec![false, true, false],
            vec![false, false, true],
        ];
        let x = LabeledNPreorder {
            labels: vec![0, 0, 0],
            le: vec![le0],
            tuples: Vec::new(),
        };
        assert!(matches!(
            unflatten(&x),
            Err(NestedError::Layer { layer: 0, .. })
        ));
    }

    #[test]
    fn round_trip_and_morphisms() {
        let corpus = crate::corpus::nested_forests(4, 2, 2);
        for p in &corpus {
            let x = flatten(p, 2).unwrap();
            assert!(h_equiv(&unflatten(&x).unwrap(), p), "{p}");
        }
        for p in corpus.iter().take(40) {
            for q in corpus.iter().take(40) {
                let (x, y) = (flatten(p, 2).unwrap(), flatten(q, 2).unwrap());
                assert_eq!(has_morphism(&x, &y), h_leq(p, q), "{p} vs {q}");
            }
        }
    }
}
