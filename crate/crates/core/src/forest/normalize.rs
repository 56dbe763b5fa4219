use super::hom::HomChecker;
use super::{Forest, Label, Tree};

/// Canonical representative of the h-equivalence class of `f`.
///
/// Components are normalized bottom-up: labels first, then children. A
/// child whose label is h-below its parent's is contracted into the parent,
/// sibling subtrees dominated by another sibling are dropped, and the
/// survivors are sorted by the structural order.
pub fn normalize(f: &Forest) -> Forest {
    let trees = f.trees.iter().map(normalize_tree).collect();
    prune_and_sort(trees)
}

pub fn normalize_label(l: &Label) -> Label {
    match l {
        Label::Color(c) => Label::Color(*c),
        Label::Nested(f) => Label::nested(normalize(f)),
    }
}

pub fn normalize_tree(t: &Tree) -> Tree {
    let label = normalize_label(&t.label);
    let mut children: Vec<Tree> = t.children.trees.iter().map(normalize_tree).collect();
    loop {
        // the checker memoizes by address, so compare in place before moving
        let mut hc = HomChecker::new();
        let below: Vec<bool> = children
            .iter()
            .map(|c| hc.label_leq(&c.label, &label))
            .collect();
        let mut contracted = Vec::with_capacity(children.len());
        let mut changed = false;
        for (c, below) in children.into_iter().zip(below) {
            if below {
                contracted.extend(c.children.trees);
                changed = true;
            } else {
                contracted.push(c);
            }
        }
        children = contracted;
        if !changed {
            break;
        }
    }
    Tree {
        label,
        children: prune_and_sort(children),
    }
}

/// Drops every tree h-below another one; among equivalent trees the
/// structurally least survives.
fn prune_and_sort(mut trees: Vec<Tree>) -> Forest {
    trees.sort();
    trees.dedup();
    let mut hc = HomChecker::new();
    let n = trees.len();
    let keep: Vec<bool> = (0..n)
        .map(|i| {
            !(0..n).any(|j| {
                j != i
                    && hc.tree_below(&trees[i], &trees[j])
                    && (j < i || !hc.tree_below(&trees[j], &trees[i]))
            })
        })
        .collect();
    Forest {
        trees: trees
            .into_iter()
            .zip(keep)
            .filter_map(|(t, k)| k.then_some(t))
            .collect(),
    }
}
