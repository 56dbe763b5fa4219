//! Exhaustive and random generators of forests for oracle sweeps.

use std::collections::BTreeSet;

use rand::Rng;

use crate::forest::{normalize, Forest, Label, Tree};

/// Every structurally distinct color-labeled forest with at most
/// `max_nodes` nodes over colors `0..k`, `⊥` included. Components are kept
/// in sorted order so multisets are listed once.
pub fn flat_forests(max_nodes: usize, k: u8) -> Vec<Forest> {
    let labels: Vec<Label> = (0..k).map(Label::Color).collect();
    let by_size = forests_by_size(max_nodes, |_| {
        labels.iter().map(|l| (l.clone(), 0)).collect()
    });
    by_size.into_iter().flatten().collect()
}

/// Normal forms of [`flat_forests`], deduplicated.
pub fn normalized_flat_forests(max_nodes: usize, k: u8) -> Vec<Forest> {
    dedup_normal(flat_forests(max_nodes, k))
}

/// Forests whose total size (nodes inside nested labels included) is at
/// most `max_size` and whose nesting level is at most `max_level`.
pub fn nested_forests(max_size: usize, max_level: usize, k: u8) -> Vec<Forest> {
    nested_by_size(max_size, max_level, k)
        .into_iter()
        .flatten()
        .collect()
}

pub fn dedup_normal(v: Vec<Forest>) -> Vec<Forest> {
    let set: BTreeSet<Forest> = v.iter().map(normalize).collect();
    set.into_iter().collect()
}

fn nested_by_size(max_size: usize, max_level: usize, k: u8) -> Vec<Vec<Forest>> {
    if max_level <= 1 {
        let labels: Vec<Label> = (0..k).map(Label::Color).collect();
        return forests_by_size(max_size, |_| {
            labels.iter().map(|l| (l.clone(), 0)).collect()
        });
    }
    let inner = nested_by_size(max_size.saturating_sub(1), max_level - 1, k);
    forests_by_size(max_size, |budget| {
        let mut out: Vec<(Label, usize)> = (0..k).map(|c| (Label::Color(c), 0)).collect();
        for (size, fs) in inner.iter().enumerate().take(budget + 1).skip(1) {
            for f in fs {
                if let Label::Nested(_) = Label::nested(f.clone()) {
                    out.push((Label::Nested(f.clone()), size));
                }
            }
        }
        out
    })
}

/// `labels(b)` yields `(label, label size)` pairs with label size `<= b`.
/// Result index `n` holds forests of total size exactly `n`.
fn forests_by_size<L>(max: usize, labels: L) -> Vec<Vec<Forest>>
where
    L: Fn(usize) -> Vec<(Label, usize)>,
{
    let mut trees: Vec<Vec<Tree>> = vec![Vec::new(); max + 1];
    let mut forests: Vec<Vec<Forest>> = vec![Vec::new(); max + 1];
    forests[0].push(Forest::bottom());
    for n in 1..=max {
        for (label, lsize) in labels(n - 1) {
            if lsize > n - 1 {
                continue;
            }
            for children in &forests[n - 1 - lsize] {
                trees[n].push(Tree::wrap(label.clone(), children.clone()));
            }
        }
        trees[n].sort();
        let mut acc = Vec::new();
        multisets(&trees, n, n, None, &mut Vec::new(), &mut acc);
        forests[n] = acc;
    }
    forests
}

/// Sorted multisets of trees with sizes summing to `left`, each component no
/// larger than the previous one in (size, structure) order.
fn multisets(
    trees: &[Vec<Tree>],
    left: usize,
    max_size: usize,
    max_idx: Option<usize>,
    cur: &mut Vec<Tree>,
    out: &mut Vec<Forest>,
) {
    if left == 0 {
        out.push(Forest::new(cur.clone()));
        return;
    }
    for size in (1..=left.min(max_size)).rev() {
        let bound = if size == max_size {
            max_idx.map_or(trees[size].len(), |i| i + 1)
        } else {
            trees[size].len()
        };
        for i in 0..bound {
            cur.push(trees[size][i].clone());
            multisets(trees, left - size, size, Some(i), cur, out);
            cur.pop();
        }
    }
}

/// A random color-labeled forest with `1..=max_nodes` nodes.
pub fn random_flat_forest<R: Rng>(rng: &mut R, max_nodes: usize, k: u8) -> Forest {
    let n = rng.gen_range(1..=max_nodes.max(1));
    let mut parents: Vec<Option<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let p = if i == 0 || rng.gen_bool(0.3) {
            None
        } else {
            Some(rng.gen_range(0..i))
        };
        parents.push(p);
    }
    let labels: Vec<Label> = (0..n).map(|_| Label::Color(rng.gen_range(0..k))).collect();
    assemble(&parents, labels)
}

/// A random forest of nesting level at most `max_level`, built from random
/// flat shapes whose labels are recursively random forests.
pub fn random_nested_forest<R: Rng>(
    rng: &mut R,
    max_nodes: usize,
    max_level: usize,
    k: u8,
) -> Forest {
    let shape = random_flat_forest(rng, max_nodes, k);
    if max_level <= 1 {
        return shape;
    }
    relabel(&shape, &mut |c| {
        if rng.gen_bool(0.5) {
            Label::Color(c)
        } else {
            let inner =
                random_nested_forest(rng, max_nodes.saturating_sub(1).max(1), max_level - 1, k);
            Label::nested(inner)
        }
    })
}

fn relabel(f: &Forest, g: &mut impl FnMut(u8) -> Label) -> Forest {
    Forest::new(
        f.trees
            .iter()
            .map(|t| Tree {
                label: match &t.label {
                    Label::Color(c) => g(*c),
                    other => other.clone(),
                },
                children: relabel(&t.children, g),
            })
            .collect(),
    )
}

fn assemble(parents: &[Option<usize>], labels: Vec<Label>) -> Forest {
    fn build(i: usize, parents: &[Option<usize>], labels: &[Label]) -> Tree {
        let children = (0..parents.len())
            .filter(|&j| parents[j] == Some(i))
            .map(|j| build(j, parents, labels))
            .collect();
        Tree::wrap(labels[i].clone(), Forest::new(children))
    }
    Forest::new(
        (0..parents.len())
            .filter(|&i| parents[i].is_none())
            .map(|i| build(i, parents, &labels))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_counts() {
        // unlabeled rooted forests: 1, 1, 2, 4, 9
        assert_eq!(flat_forests(4, 1).len(), 1 + 1 + 2 + 4 + 9);
        let two = flat_forests(2, 2);
        // ⊥; 0; 1; 0*0, 0*1, 1*0, 1*1; 0|0, 0|1, 1|1
        assert_eq!(two.len(), 10);
        let set: BTreeSet<_> = flat_forests(5, 2).into_iter().collect();
        assert_eq!(set.len(), flat_forests(5, 2).len());
    }

    #[test]
    fn nested_respect_bounds() {
        for f in nested_forests(5, 2, 2) {
            assert!(f.total_size() <= 5);
            assert!(f.nesting_level() <= 2);
        }
        assert!(nested_forests(4, 2, 2)
            .iter()
            .any(|f| f.nesting_level() == 2));
    }
}
