//! Wadge-like reducibility of k-partitions on finite spaces, where the
//! continuous maps are the monotone ones.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::par;
use crate::space::{guard, FiniteSpace, KPartition, SpaceError};

/// Budget on `|Y|^|X|` for map enumeration without the override.
pub const MAX_MAP_CANDIDATES: usize = 1 << 20;

/// Every monotone map `X → Y` as a point table, in lexicographic order.
pub fn monotone_maps(
    x: &FiniteSpace,
    y: &FiniteSpace,
    override_guard: bool,
) -> Result<Vec<Vec<usize>>, SpaceError> {
    let total = (y.len() as f64).powi(x.len() as i32);
    if !override_guard && total > MAX_MAP_CANDIDATES as f64 {
        return Err(SpaceError::SizeGuard {
            what: "number of candidate maps",
            limit: MAX_MAP_CANDIDATES,
        });
    }
    let mut out = Vec::new();
    let mut image = vec![0usize; x.len()];
    fn go(
        a: usize,
        image: &mut Vec<usize>,
        x: &FiniteSpace,
        y: &FiniteSpace,
        out: &mut Vec<Vec<usize>>,
    ) {
        if a == image.len() {
            out.push(image.clone());
            return;
        }
        for b in 0..y.len() {
            let ok = (0..a)
                .all(|p| (!x.le(p, a) || y.le(image[p], b)) && (!x.le(a, p) || y.le(b, image[p])));
            if ok {
                image[a] = b;
                go(a + 1, image, x, y, out);
            }
        }
    }
    go(0, &mut image, x, y, &mut out);
    Ok(out)
}

/// `A = B ∘ f` for some monotone `f : X → X`.
pub fn wadge_leq(a: &KPartition, b: &KPartition, x: &FiniteSpace) -> Result<bool, SpaceError> {
    wadge_leq_between(a, x, b, x)
}

/// `A = B ∘ f` for some monotone `f : X → Y`, with `A` on `X` and `B` on `Y`.
pub fn wadge_leq_between(
    a: &KPartition,
    x: &FiniteSpace,
    b: &KPartition,
    y: &FiniteSpace,
) -> Result<bool, SpaceError> {
    for (p, s) in [(a, x), (b, y)] {
        if p.len() != s.len() {
            return Err(SpaceError::PartitionSize {
                got: p.len(),
                want: s.len(),
            });
        }
    }
    // search the map directly, pruning on labels
    let mut image = vec![0usize; x.len()];
    fn go(
        i: usize,
        image: &mut Vec<usize>,
        a: &KPartition,
        x: &FiniteSpace,
        b: &KPartition,
        y: &FiniteSpace,
    ) -> bool {
        if i == image.len() {
            return true;
        }
        for t in 0..y.len() {
            if b.get(t) != a.get(i) {
                continue;
            }
            let ok = (0..i)
                .all(|p| (!x.le(p, i) || y.le(image[p], t)) && (!x.le(i, p) || y.le(t, image[p])));
            if ok {
                image[i] = t;
                if go(i + 1, image, a, x, b, y) {
                    return true;
                }
            }
        }
        false
    }
    Ok(go(0, &mut image, a, x, b, y))
}

/// Wadge degrees of all k-partitions of a space.
#[derive(Clone, Debug, Serialize)]
pub struct DegreePoset {
    pub points: usize,
    pub k: u8,
    /// Each degree lists its members; the first is the representative.
    pub degrees: Vec<Vec<String>>,
    /// `[i, j]` with `i != j` and degree `i` reducible to degree `j`.
    pub order: Vec<[usize; 2]>,
}

#[allow(clippy::needless_range_loop)]
pub fn degree_poset(
    x: &FiniteSpace,
    k: u8,
    override_guard: bool,
) -> Result<DegreePoset, SpaceError> {
    guard(x.len(), k, override_guard)?;
    let parts = KPartition::all(x.len(), k);
    let maps = monotone_maps(x, x, override_guard)?;
    let m = parts.len();
    // row a: which b satisfy a ≤ b
    let rows: Vec<Vec<bool>> = par::map(&parts, |a| {
        let mut row = vec![false; m];
        for f in &maps {
            for (j, b) in parts.iter().enumerate() {
                if !row[j] && &b.compose(f) == a {
                    row[j] = true;
                }
            }
        }
        row
    });
    let mut uf: Vec<usize> = (0..m).collect();
    fn find(uf: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while uf[r] != r {
            r = uf[r];
        }
        let mut c = i;
        while uf[c] != r {
            let next = uf[c];
            uf[c] = r;
            c = next;
        }
        r
    }
    for a in 0..m {
        for b in (a + 1)..m {
            if rows[a][b] && rows[b][a] {
                let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
                uf[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for a in 0..m {
        let r = find(&mut uf, a);
        classes.entry(r).or_default().push(a);
    }
    let classes: Vec<Vec<usize>> = classes.into_values().collect();
    let mut order = Vec::new();
    for (i, ci) in classes.iter().enumerate() {
        for (j, cj) in classes.iter().enumerate() {
            if i != j && rows[ci[0]][cj[0]] {
                order.push([i, j]);
            }
        }
    }
    Ok(DegreePoset {
        points: x.len(),
        k,
        degrees: classes
            .iter()
            .map(|c| c.iter().map(|&a| parts[a].to_string()).collect())
            .collect(),
        order,
    })
}

impl DegreePoset {
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.order.contains(&[i, j])
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !(0..self.len()).any(|j| j != i && self.leq(j, i)))
            .collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !(0..self.len()).any(|j| j != i && self.leq(i, j)))
            .collect()
    }

    /// Covering pairs of the order.
    pub fn hasse(&self) -> Vec<[usize; 2]> {
        self.order
            .iter()
            .copied()
            .filter(|&[i, j]| {
                !(0..self.len()).any(|c| c != i && c != j && self.leq(i, c) && self.leq(c, j))
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph degrees {\n  rankdir=BT;\n");
        for (i, d) in self.degrees.iter().enumerate() {
            let _ = writeln!(out, "  d{i} [label=\"{}\"];", d.join(", "));
        }
        for [i, j] in self.hasse() {
            let _ = writeln!(out, "  d{i} -> d{j};");
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(l: &[u8]) -> KPartition {
        KPartition::new(l.to_vec(), 2).unwrap()
    }

    #[test]
    fn map_counts() {
        let c2 = FiniteSpace::chain(2);
        assert_eq!(monotone_maps(&c2, &c2, false).unwrap().len(), 3);
        assert_eq!(
            monotone_maps(&c2, &FiniteSpace::chain(1), false)
                .unwrap()
                .len(),
            1
        );
        let a2 = FiniteSpace::antichain(2);
        assert_eq!(monotone_maps(&a2, &a2, false).unwrap().len(), 4);
    }

    #[test]
    fn reducibility_examples() {
        let c2 = FiniteSpace::chain(2);
        for a in KPartition::all(2, 2) {
            assert!(wadge_leq(&a, &a, &c2).unwrap());
            for i in 0..2u8 {
                let constant = part(&[i, i]);
                assert_eq!(
                    wadge_leq(&constant, &a, &c2).unwrap(),
                    a.labels().contains(&i)
                );
            }
        }
        let (lo, hi) = (part(&[1, 0]), part(&[0, 1]));
        assert!(!wadge_leq(&lo, &hi, &c2).unwrap());
        assert!(!wadge_leq(&hi, &lo, &c2).unwrap());
    }

    #[test]
    fn degree_examples() {
        let d = degree_poset(&FiniteSpace::chain(1), 2, false).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.order.is_empty());
        let d = degree_poset(&FiniteSpace::chain(2), 2, false).unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(d.minimal().len(), 2);
        assert_eq!(d.maximal().len(), 2);
        let d = degree_poset(&FiniteSpace::antichain(2), 2, false).unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.to_dot().contains("->"));
    }

    #[test]
    fn cross_space() {
        let (c2, one) = (FiniteSpace::chain(2), FiniteSpace::chain(1));
        assert!(wadge_leq_between(&part(&[1, 1]), &c2, &part(&[1]), &one).unwrap());
        assert!(!wadge_leq_between(&part(&[0, 1]), &c2, &part(&[1]), &one).unwrap());
    }
}
