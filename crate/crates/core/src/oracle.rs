//! Brute-force reference procedures.
//!
//! Nothing here calls the recursive checkers, the meet recursion, or the
//! family search it is used to validate; each routine enumerates maps,
//! families, or sequences directly.

use crate::forest::{Forest, Label};
use crate::space::{Base, KPartition, SubSet};

/// A forest flattened to explicit nodes with the order relation.
struct Nodes<'a> {
    labels: Vec<&'a Label>,
    /// `le[i][j]`: node `i` lies below or at node `j`.
    le: Vec<Vec<bool>>,
}

impl<'a> Nodes<'a> {
    fn of(f: &'a Forest) -> Nodes<'a> {
        let mut labels = Vec::new();
        let mut parent: Vec<Option<usize>> = Vec::new();
        let mut stack: Vec<(&'a crate::forest::Tree, Option<usize>)> =
            f.trees.iter().rev().map(|t| (t, None)).collect();
        while let Some((t, p)) = stack.pop() {
            let id = labels.len();
            labels.push(&t.label);
            parent.push(p);
            for c in t.children.trees.iter().rev() {
                stack.push((c, Some(id)));
            }
        }
        let n = labels.len();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            let mut cur = Some(i);
            while let Some(j) = cur {
                row[j] = true;
                cur = parent[j];
            }
        }
        Nodes { labels, le }
    }
}

/// Label order by brute force: colors by equality, nested labels through
/// [`brute_h_leq`], and a color `i` as the singleton `s(i)`.
pub fn brute_label_leq(a: &Label, b: &Label) -> bool {
    match (a, b) {
        (Label::Color(i), Label::Color(j)) => i == j,
        _ => brute_h_leq(&a.to_forest(), &b.to_forest()),
    }
}

/// Exists a monotone label-respecting map, found by depth-first enumeration
/// of partial maps. Label compatibility is tabulated up front; monotonicity
/// is checked against every previously assigned node.
pub fn brute_h_leq(f: &Forest, g: &Forest) -> bool {
    let src = Nodes::of(f);
    let dst = Nodes::of(g);
    let cand: Vec<Vec<usize>> = src
        .labels
        .iter()
        .map(|a| {
            (0..dst.labels.len())
                .filter(|&j| brute_label_leq(a, dst.labels[j]))
                .collect()
        })
        .collect();
    let mut image = vec![usize::MAX; src.labels.len()];
    fn go(i: usize, src: &Nodes, dst: &Nodes, cand: &[Vec<usize>], image: &mut [usize]) -> bool {
        if i == image.len() {
            return true;
        }
        for &j in &cand[i] {
            let ok = (0..i).all(|p| {
                (!src.le[p][i] || dst.le[image[p]][j]) && (!src.le[i][p] || dst.le[j][image[p]])
            });
            if ok {
                image[i] = j;
                if go(i + 1, src, dst, cand, image) {
                    return true;
                }
            }
        }
        false
    }
    go(0, &src, &dst, &cand, &mut image)
}

/// Counts every function between node sets and keeps those that are monotone
/// and label-respecting. Exponential; for forests of a handful of nodes.
pub fn count_morphisms(f: &Forest, g: &Forest) -> usize {
    let src = Nodes::of(f);
    let dst = Nodes::of(g);
    let (n, m) = (src.labels.len(), dst.labels.len());
    if n == 0 {
        return 1;
    }
    if m == 0 {
        return 0;
    }
    let mut image = vec![0usize; n];
    let mut count = 0;
    loop {
        let labels_ok = (0..n).all(|i| brute_label_leq(src.labels[i], dst.labels[image[i]]));
        let mono = (0..n).all(|a| (0..n).all(|b| !src.le[a][b] || dst.le[image[a]][image[b]]));
        if labels_ok && mono {
            count += 1;
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == n {
                return count;
            }
            image[pos] += 1;
            if image[pos] < m {
                break;
            }
            image[pos] = 0;
            pos += 1;
        }
    }
}

pub fn brute_h_equiv(f: &Forest, g: &Forest) -> bool {
    brute_h_leq(f, g) && brute_h_leq(g, f)
}

/// Every set expressible as `D_n(A_0, ..., A_{n-1})` with `A_i` in the base,
/// by enumerating all sequences.
pub fn difference_image(n: usize, base: &Base) -> Vec<SubSet> {
    let sets: Vec<SubSet> = base.sets().to_vec();
    let mut out = std::collections::BTreeSet::new();
    let mut idx = vec![0usize; n];
    if sets.is_empty() {
        return Vec::new();
    }
    loop {
        let mut seen = SubSet::EMPTY;
        let mut acc = SubSet::EMPTY;
        for (beta, &i) in idx.iter().enumerate() {
            let a = sets[i];
            if beta % 2 != n % 2 {
                acc = acc.union(a.minus(seen));
            }
            seen = seen.union(a);
        }
        out.insert(acc);
        let mut pos = 0;
        loop {
            if pos == n {
                return out.into_iter().collect();
            }
            idx[pos] += 1;
            if idx[pos] < sets.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Flat-forest membership by enumerating every assignment of base sets to
/// nodes and evaluating the induced partition directly.
pub fn brute_dh_membership(a: &KPartition, forest: &Forest, base: &Base) -> bool {
    let nodes = Nodes::of(forest);
    let colors: Vec<u8> = nodes
        .labels
        .iter()
        .map(|l| l.as_color().expect("flat forest"))
        .collect();
    let n = colors.len();
    let sets = base.sets();
    let universe = SubSet::full(a.len());
    if n == 0 {
        return a.is_empty();
    }
    let mut idx = vec![0usize; n];
    loop {
        let b: Vec<SubSet> = idx.iter().map(|&i| sets[i]).collect();
        let cover = b.iter().fold(SubSet::EMPTY, |u, s| u.union(*s));
        if cover == universe {
            let mut ok = true;
            'points: for x in 0..a.len() {
                for p in 0..n {
                    let lower = (0..n)
                        .filter(|&q| q != p && nodes.le[q][p])
                        .fold(SubSet::EMPTY, |u, q| u.union(b[q]));
                    if b[p].minus(lower).contains(x) && colors[p] != a.get(x) {
                        ok = false;
                        break 'points;
                    }
                }
            }
            if ok {
                return true;
            }
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return false;
            }
            idx[pos] += 1;
            if idx[pos] < sets.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
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
    fn counts_small_morphisms() {
        // 0|1 -> 0*1: 0 to root, 1 to child
        assert_eq!(count_morphisms(&f("0|1"), &f("0*1")), 1);
        assert_eq!(count_morphisms(&f("0*1"), &f("0|1")), 0);
        // 0*0 -> 0*0: (root, child) to (r,r), (r,c)... child below root
        assert_eq!(count_morphisms(&f("0*0"), &f("0*0")), 3);
        assert_eq!(count_morphisms(&Forest::bottom(), &f("0")), 1);
    }

    #[test]
    fn search_agrees_with_counting() {
        let all = crate::corpus::flat_forests(3, 2);
        for a in &all {
            for b in &all {
                assert_eq!(brute_h_leq(a, b), count_morphisms(a, b) > 0, "{a} vs {b}");
            }
        }
    }
}
