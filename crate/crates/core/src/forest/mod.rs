//! Finite labeled forests and the h-preorder.
//!
//! A [`Forest`] is a finite sequence of [`Tree`]s; a tree is a root label
//! over a forest of children. The root is the greatest element of its tree,
//! so children sit below their parent. Labels are either colors `0..k` or,
//! in the iterated setting, nested forests compared by the h-preorder
//! itself. The empty forest is the bottom element `⊥`.
//!
//! The color `i` and the singleton forest `s(i)` denote the same label;
//! [`Label::nested`] collapses the latter into the former so that the two
//! never coexist structurally.

mod hom;
mod meet;
mod normalize;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use hom::{h_equiv, h_leq, label_leq, HomChecker};
pub use meet::{label_meet, meet, meet_decomposition, meet_many};
pub use normalize::{normalize, normalize_label, normalize_tree};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Color(u8),
    Nested(Forest),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    pub label: Label,
    pub children: Forest,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Forest {
    pub trees: Vec<Tree>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForestError {
    #[error("rank of the empty forest is undefined")]
    EmptyRank,
    #[error("color {color} is out of range for k = {k}")]
    ColorOutOfRange { color: u8, k: u8 },
    #[error("nested label is the empty forest")]
    EmptyNestedLabel,
    #[error("k must satisfy 2 <= k, got {0}")]
    BadK(u8),
}

impl Label {
    /// Label carried by a nested forest, identifying `s(i)` with `i`.
    pub fn nested(f: Forest) -> Label {
        if let [t] = f.trees.as_slice() {
            if let (Label::Color(c), true) = (&t.label, t.children.is_empty()) {
                return Label::Color(*c);
            }
        }
        Label::Nested(f)
    }

    pub fn as_color(&self) -> Option<u8> {
        match self {
            Label::Color(c) => Some(*c),
            Label::Nested(_) => None,
        }
    }

    /// The label viewed as a forest: `Color(i)` becomes `s(i)`.
    pub fn to_forest(&self) -> Forest {
        match self {
            Label::Color(c) => Forest::leaf(*c),
            Label::Nested(f) => f.clone(),
        }
    }

    /// 0 for colors, otherwise the nesting level of the label forest.
    pub fn level(&self) -> usize {
        match self {
            Label::Color(_) => 0,
            Label::Nested(f) => f.nesting_level(),
        }
    }

    pub fn swap_colors(&self, a: u8, b: u8) -> Label {
        match self {
            Label::Color(c) if *c == a => Label::Color(b),
            Label::Color(c) if *c == b => Label::Color(a),
            Label::Color(c) => Label::Color(*c),
            Label::Nested(f) => Label::Nested(f.swap_colors(a, b)),
        }
    }
}

impl From<u8> for Label {
    fn from(c: u8) -> Self {
        Label::Color(c)
    }
}

impl Tree {
    pub fn leaf(label: impl Into<Label>) -> Tree {
        Tree {
            label: label.into(),
            children: Forest::bottom(),
        }
    }

    /// Adjoins a new root labeled `label` above `children`.
    pub fn wrap(label: impl Into<Label>, children: Forest) -> Tree {
        Tree {
            label: label.into(),
            children,
        }
    }

    /// Length in edges of the longest root-to-leaf path.
    pub fn rank(&self) -> usize {
        self.children
            .trees
            .iter()
            .map(|c| 1 + c.rank())
            .max()
            .unwrap_or(0)
    }

    /// Nodes of this tree, not counting nodes inside nested labels.
    pub fn node_count(&self) -> usize {
        1 + self.children.node_count()
    }

    /// Nodes including those of every nested label.
    pub fn total_size(&self) -> usize {
        let label = match &self.label {
            Label::Color(_) => 0,
            Label::Nested(f) => f.total_size(),
        };
        1 + label + self.children.total_size()
    }

    /// Pre-order walk over the nodes of this tree (labels not entered).
    pub fn nodes(&self) -> Vec<&Tree> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a Tree, out: &mut Vec<&'a Tree>) {
            out.push(t);
            for c in &t.children.trees {
                go(c, out);
            }
        }
        go(self, &mut out);
        out
    }

    pub fn swap_colors(&self, a: u8, b: u8) -> Tree {
        Tree {
            label: self.label.swap_colors(a, b),
            children: self.children.swap_colors(a, b),
        }
    }

    pub fn into_forest(self) -> Forest {
        Forest { trees: vec![self] }
    }
}

impl Forest {
    /// The empty forest `⊥`.
    pub fn bottom() -> Forest {
        Forest { trees: Vec::new() }
    }

    /// The singleton tree with a color label.
    pub fn leaf(c: u8) -> Forest {
        Tree::leaf(c).into_forest()
    }

    /// `s(q)`: the singleton tree labeled by `q`.
    pub fn singleton(label: Label) -> Forest {
        Tree::leaf(label).into_forest()
    }

    pub fn new(trees: Vec<Tree>) -> Forest {
        Forest { trees }
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Disjoint union.
    pub fn join(&self, other: &Forest) -> Forest {
        let mut trees = self.trees.clone();
        trees.extend(other.trees.iter().cloned());
        Forest { trees }
    }

    pub fn join_many<'a, I: IntoIterator<Item = &'a Forest>>(forests: I) -> Forest {
        Forest {
            trees: forests
                .into_iter()
                .flat_map(|f| f.trees.iter().cloned())
                .collect(),
        }
    }

    pub fn tree_components(&self) -> &[Tree] {
        &self.trees
    }

    pub fn rank(&self) -> Result<usize, ForestError> {
        self.trees
            .iter()
            .map(Tree::rank)
            .max()
            .ok_or(ForestError::EmptyRank)
    }

    pub fn node_count(&self) -> usize {
        self.trees.iter().map(Tree::node_count).sum()
    }

    pub fn total_size(&self) -> usize {
        self.trees.iter().map(Tree::total_size).sum()
    }

    /// 0 for `⊥`, 1 for color-labeled forests, and one more than the
    /// deepest nested label otherwise.
    pub fn nesting_level(&self) -> usize {
        self.nodes()
            .iter()
            .map(|t| 1 + t.label.level())
            .max()
            .unwrap_or(0)
    }

    pub fn nodes(&self) -> Vec<&Tree> {
        self.trees.iter().flat_map(Tree::nodes).collect()
    }

    pub fn swap_colors(&self, a: u8, b: u8) -> Forest {
        Forest {
            trees: self.trees.iter().map(|t| t.swap_colors(a, b)).collect(),
        }
    }

    /// Interchanges colors 0 and 1 everywhere, at every nesting depth.
    pub fn bar(&self) -> Forest {
        self.swap_colors(0, 1)
    }

    /// Largest color occurring anywhere, nested labels included.
    pub fn max_color(&self) -> Option<u8> {
        self.nodes()
            .into_iter()
            .filter_map(|t| match &t.label {
                Label::Color(c) => Some(*c),
                Label::Nested(f) => f.max_color(),
            })
            .max()
    }

    /// Checks colors against `k` and that no nested label is empty.
    pub fn validate(&self, k: u8) -> Result<(), ForestError> {
        if k < 2 {
            return Err(ForestError::BadK(k));
        }
        for t in self.nodes() {
            match &t.label {
                Label::Color(c) if *c >= k => {
                    return Err(ForestError::ColorOutOfRange { color: *c, k })
                }
                Label::Color(_) => {}
                Label::Nested(f) if f.is_empty() => return Err(ForestError::EmptyNestedLabel),
                Label::Nested(f) => f.validate(k)?,
            }
        }
        Ok(())
    }

    /// Graphviz drawing, one node per tree node, edges from parent to child.
    pub fn to_dot(&self) -> String {
        fn go(t: &Tree, parent: Option<usize>, next: &mut usize, out: &mut String) {
            let id = *next;
            *next += 1;
            let label = match &t.label {
                Label::Color(c) => c.to_string(),
                Label::Nested(f) => format!("({})", crate::term::print_term(f)),
            };
            out.push_str(&format!(
                "  n{id} [label=\"{}\"];\n",
                label.replace('"', "\\\"")
            ));
            if let Some(p) = parent {
                out.push_str(&format!("  n{p} -> n{id};\n"));
            }
            for c in &t.children.trees {
                go(c, Some(id), next, out);
            }
        }
        let mut out = String::from("digraph forest {\n");
        let mut next = 0;
        for t in &self.trees {
            go(t, None, &mut next, &mut out);
        }
        out.push_str("}\n");
        out
    }

    /// Trees for the join-irreducible decomposition: true iff the
    /// normal form has a single component.
    pub fn is_join_irreducible(&self) -> bool {
        normalize(self).trees.len() == 1
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::term::print_term(self))
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::term::print_tree(self))
    }
}

/// JSON shape of a tree: `{"label": int | [tree...], "children": [tree...]}`.
#[derive(Serialize, Deserialize)]
struct TreeRepr {
    label: LabelRepr,
    children: Vec<TreeRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LabelRepr {
    Color(u8),
    Nested(Vec<TreeRepr>),
}

impl From<&Tree> for TreeRepr {
    fn from(t: &Tree) -> Self {
        TreeRepr {
            label: match &t.label {
                Label::Color(c) => LabelRepr::Color(*c),
                Label::Nested(f) => LabelRepr::Nested(f.trees.iter().map(Into::into).collect()),
            },
            children: t.children.trees.iter().map(Into::into).collect(),
        }
    }
}

impl From<TreeRepr> for Tree {
    fn from(r: TreeRepr) -> Self {
        Tree {
            label: match r.label {
                LabelRepr::Color(c) => Label::Color(c),
                LabelRepr::Nested(ts) => Label::nested(Forest {
                    trees: ts.into_iter().map(Into::into).collect(),
                }),
            },
            children: Forest {
                trees: r.children.into_iter().map(Into::into).collect(),
            },
        }
    }
}

impl Serialize for Tree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TreeRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        TreeRepr::deserialize(d).map(Into::into)
    }
}

impl Serialize for Forest {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.trees.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Forest {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Vec::<Tree>::deserialize(d).map(|trees| Forest { trees })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn f(s: &str) -> Forest {
        parse_term(s).unwrap()
    }

    #[test]
    fn dot_export() {
        let d = f("(0*1)*(1|0)").to_dot();
        assert!(d.contains("n0 [label=\"(0*1)\"];"));
        assert_eq!(d.matches("->").count(), 2);
        assert_eq!(Forest::bottom().to_dot(), "digraph forest {\n}\n");
    }

    #[test]
    fn rank_examples() {
        assert_eq!(f("0").rank(), Ok(0));
        assert_eq!(f("0*1").rank(), Ok(1));
        assert_eq!(f("0*1*0").rank(), Ok(2));
        assert_eq!(f("0|1*0*1").rank(), Ok(2));
        assert_eq!(Forest::bottom().rank(), Err(ForestError::EmptyRank));
    }

    #[test]
    fn join_and_wrap() {
        let g = f("0*1");
        assert_eq!(g.join(&Forest::bottom()), g);
        assert_eq!(Tree::wrap(0, Forest::bottom()).into_forest(), f("0"));
        assert_eq!(Tree::wrap(0, f("1|2")).into_forest(), f("0*(1⊔2)"));
        assert_eq!(f("0|1").tree_components(), &[Tree::leaf(0), Tree::leaf(1)]);
    }

    #[test]
    fn identification_of_singletons() {
        assert_eq!(Label::nested(Forest::leaf(1)), Label::Color(1));
        assert!(matches!(Label::nested(f("0*1")), Label::Nested(_)));
        assert!(matches!(Label::nested(f("0|1")), Label::Nested(_)));
    }

    #[test]
    fn validation() {
        assert!(f("0*(1|2)").validate(3).is_ok());
        assert_eq!(
            f("0*(1|2)").validate(2),
            Err(ForestError::ColorOutOfRange { color: 2, k: 2 })
        );
        let bad = Tree::leaf(Label::Nested(Forest::bottom())).into_forest();
        assert_eq!(bad.validate(2), Err(ForestError::EmptyNestedLabel));
    }

    #[test]
    fn json_shape() {
        let g = f("(0*1)*2");
        let js = serde_json::to_string(&g).unwrap();
        assert_eq!(
            js,
            r#"[{"label":[{"label":0,"children":[{"label":1,"children":[]}]}],"children":[{"label":2,"children":[]}]}]"#
        );
        let back: Forest = serde_json::from_str(&js).unwrap();
        assert_eq!(back, g);
        let bot: Forest = serde_json::from_str("[]").unwrap();
        assert!(bot.is_empty());
    }

    #[test]
    fn join_irreducibility() {
        assert!(f("0*1").is_join_irreducible());
        assert!(!f("0|1").is_join_irreducible());
        assert!(f("0|0").is_join_irreducible());
        assert!(f("0*1 | 1").is_join_irreducible());
    }

    #[test]
    fn nesting_levels() {
        assert_eq!(Forest::bottom().nesting_level(), 0);
        assert_eq!(f("0|1").nesting_level(), 1);
        assert_eq!(f("s(0*1)").nesting_level(), 2);
        assert_eq!(
            Tree::wrap(Label::nested(f("0*1")), f("2"))
                .into_forest()
                .nesting_level(),
            2
        );
        assert_eq!(f("s(s(0*1))").nesting_level(), 3);
    }
}
