use std::collections::HashMap;
use std::marker::PhantomData;

use super::{Forest, Label, Tree};

/// Decides the h-preorder by the root-embedding recursion, memoized on
/// node identity. One checker per query; tables are not shared.
///
/// `S` root-embeds at `t` iff the labels are ordered and every child
/// subtree of `S` maps into the subtree rooted at `t` (including `t`
/// itself). `S ≤_h` the subtree at `t` iff `S` root-embeds at some node
/// of it.
///
/// Inputs are borrowed for the checker's lifetime so no node can move
/// while its address is a memo key.
#[derive(Default)]
pub struct HomChecker<'a> {
    embeds: HashMap<(usize, usize), bool>,
    below: HashMap<(usize, usize), bool>,
    labels: HashMap<(usize, usize), bool>,
    _inputs: PhantomData<&'a Forest>,
}

fn addr<T>(x: &T) -> usize {
    x as *const T as usize
}

impl<'a> HomChecker<'a> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn forest_leq(&mut self, f: &'a Forest, g: &'a Forest) -> bool {
        f.trees
            .iter()
            .all(|s| g.trees.iter().any(|t| self.tree_below(s, t)))
    }

    /// `s ≤_h` the subtree rooted at `t`.
    pub fn tree_below(&mut self, s: &'a Tree, t: &'a Tree) -> bool {
        let key = (addr(s), addr(t));
        if let Some(&v) = self.below.get(&key) {
            return v;
        }
        let v = self.root_embeds(s, t) || t.children.trees.iter().any(|u| self.tree_below(s, u));
        self.below.insert(key, v);
        v
    }

    fn root_embeds(&mut self, s: &'a Tree, t: &'a Tree) -> bool {
        let key = (addr(s), addr(t));
        if let Some(&v) = self.embeds.get(&key) {
            return v;
        }
        let v = self.label_leq(&s.label, &t.label)
            && s.children.trees.iter().all(|c| self.tree_below(c, t));
        self.embeds.insert(key, v);
        v
    }

    pub fn label_leq(&mut self, a: &'a Label, b: &'a Label) -> bool {
        match (a, b) {
            (Label::Color(i), Label::Color(j)) => i == j,
            _ => {
                let key = (addr(a), addr(b));
                if let Some(&v) = self.labels.get(&key) {
                    return v;
                }
                let v = match (a, b) {
                    (Label::Nested(f), Label::Nested(g)) => self.forest_leq(f, g),
                    // s(i) maps onto a single node of g
                    (Label::Color(_), Label::Nested(g)) => {
                        g.nodes().into_iter().any(|u| self.label_leq(a, &u.label))
                    }
                    // f ≤_h s(j) iff every node of f sits below j
                    (Label::Nested(f), Label::Color(_)) => {
                        f.nodes().into_iter().all(|u| self.label_leq(&u.label, b))
                    }
                    (Label::Color(_), Label::Color(_)) => unreachable!(),
                };
                self.labels.insert(key, v);
                v
            }
        }
    }
}

pub fn h_leq(f: &Forest, g: &Forest) -> bool {
    HomChecker::new().forest_leq(f, g)
}

pub fn h_equiv(f: &Forest, g: &Forest) -> bool {
    let mut hc = HomChecker::new();
    hc.forest_leq(f, g) && hc.forest_leq(g, f)
}

pub fn label_leq(a: &Label, b: &Label) -> bool {
    HomChecker::new().label_leq(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn f(s: &str) -> Forest {
        parse_term(s).unwrap()
    }

    #[test]
    fn bottom_is_least() {
        for g in ["0", "0*1", "1|2*0", "⊥"] {
            assert!(h_leq(&Forest::bottom(), &f(g)));
        }
        assert!(!h_leq(&f("0"), &Forest::bottom()));
    }

    #[test]
    fn small_examples() {
        assert!(!h_leq(&f("0"), &f("1")));
        assert!(!h_leq(&f("0*1"), &f("0|1")));
        assert!(h_leq(&f("0|1"), &f("0*1")));
        assert!(h_equiv(&f("0|0"), &f("0")));
        assert!(h_equiv(&f("0*0*1"), &f("0*1")));
        assert!(h_equiv(&f("0*1"), &f("0*1")));
    }

    #[test]
    fn children_may_map_onto_their_parent_image() {
        assert!(h_leq(&f("0*0"), &f("0")));
        assert!(h_leq(&f("0*(0|0*0)"), &f("0")));
        assert!(h_leq(&f("0*(0|1)"), &f("0*1")));
        assert!(!h_leq(&f("0*(1|2)"), &f("0*1")));
        assert!(h_leq(&f("0*(0|1)"), &f("1*0*1")));
    }

    #[test]
    fn nested_labels() {
        // s(q) ≤ s(q') iff q ≤ q'
        assert!(h_leq(&f("s(0|1)"), &f("s(0*1)")));
        assert!(!h_leq(&f("s(0*1)"), &f("s(0|1)")));
        // colors sit below any nested label containing them
        assert!(h_leq(&f("0"), &f("s(0*1)")));
        assert!(!h_leq(&f("s(0*1)"), &f("0")));
        assert!(h_leq(&f("s(0|0)"), &f("0")));
        assert!(h_leq(&f("(0|1)*0"), &f("(0*1)*0")));
    }

    #[test]
    fn upper_bound_of_join() {
        let a = f("0*1|2");
        let b = f("1*(0|2)");
        let j = a.join(&b);
        assert!(h_leq(&a, &j));
        assert!(h_leq(&b, &j));
    }
}
