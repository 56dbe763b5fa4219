use std::collections::HashMap;

use super::family::{label_forest, NodeSets, PFamily, Shape};
use super::{require_flat, Base, KPartition, OmegaBase, SpaceError, SubSet};
use crate::forest::{Forest, Label};

/// Which families the search may return.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyMode {
    Any,
    /// Child sets inside parent sets.
    Monotone,
    /// Monotone, and incomparable nodes get disjoint sets.
    Reduced,
}

/// `A ∈ L(P)` for a color-labeled forest over one base.
pub fn dh_membership(a: &KPartition, p: &Forest, base: &Base) -> Result<bool, SpaceError> {
    Ok(dh_witness(a, p, base, FamilyMode::Any)?.is_some())
}

pub fn dh_witness(
    a: &KPartition,
    p: &Forest,
    base: &Base,
    mode: FamilyMode,
) -> Result<Option<PFamily>, SpaceError> {
    require_flat(p)?;
    witness(a, p, std::slice::from_ref(base), 1, mode)
}

/// `A ∈ L(P)` over the first `max(1, nesting_level(P))` levels of an
/// omega-base.
pub fn fh_membership(a: &KPartition, p: &Forest, lb: &OmegaBase) -> Result<bool, SpaceError> {
    Ok(fh_witness(a, p, lb, FamilyMode::Any)?.is_some())
}

pub fn fh_witness(
    a: &KPartition,
    p: &Forest,
    lb: &OmegaBase,
    mode: FamilyMode,
) -> Result<Option<PFamily>, SpaceError> {
    let levels = p.nesting_level().max(1);
    if levels > lb.levels().len() {
        return Err(SpaceError::LevelMismatch {
            needed: levels,
            available: lb.levels().len(),
        });
    }
    witness(a, p, lb.levels(), levels, mode)
}

fn witness(
    a: &KPartition,
    p: &Forest,
    bases: &[Base],
    levels: usize,
    mode: FamilyMode,
) -> Result<Option<PFamily>, SpaceError> {
    let n = bases[0].points();
    if a.len() != n {
        return Err(SpaceError::PartitionSize {
            got: a.len(),
            want: n,
        });
    }
    let colors = p.max_color().map_or(0, |c| c + 1).max(a.k());
    let padded: Vec<Forest> = (0..colors).map(Forest::leaf).collect();
    let mut search = Search {
        bases: &bases[..levels],
        target: a,
        mode,
        padded: &padded,
        memo: HashMap::new(),
    };
    let whole = SubSet::full(n);
    Ok(search.solve(p, 0, whole).map(|nodes| PFamily {
        forest: p.clone(),
        levels,
        nodes,
    }))
}

struct Search<'a> {
    bases: &'a [Base],
    target: &'a KPartition,
    mode: FamilyMode,
    /// `s(c)` for color labels read one level up.
    padded: &'a [Forest],
    memo: HashMap<(usize, usize, SubSet), Option<Vec<NodeSets>>>,
}

impl<'a> Search<'a> {
    /// A family over `g` at level `j` whose sets lie in `universe`, cover it,
    /// and whose final components agree with the target.
    fn solve(&mut self, g: &'a Forest, j: usize, universe: SubSet) -> Option<Vec<NodeSets>> {
        let key = (g as *const Forest as usize, j, universe);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let shape = Shape::of(g);
        let cands: Vec<SubSet> = self.bases[j]
            .sets()
            .iter()
            .copied()
            .filter(|s| s.is_subset(universe))
            .collect();
        let m = shape.len();
        let mut sets = vec![SubSet::EMPTY; m];
        let mut inner: Vec<Vec<NodeSets>> = vec![Vec::new(); m];
        let found = self.assign(&shape, j, universe, &cands, m, &mut sets, &mut inner);
        let out = found.then(|| {
            sets.iter()
                .zip(inner)
                .map(|(&set, inner)| NodeSets { set, inner })
                .collect()
        });
        self.memo.insert(key, out.clone());
        out
    }

    /// Assigns nodes `left - 1` down to 0, i.e. children before parents.
    #[allow(clippy::too_many_arguments)]
    fn assign(
        &mut self,
        shape: &Shape<'a>,
        j: usize,
        universe: SubSet,
        cands: &[SubSet],
        left: usize,
        sets: &mut [SubSet],
        inner: &mut [Vec<NodeSets>],
    ) -> bool {
        if left == 0 {
            return sets.iter().fold(SubSet::EMPTY, |u, s| u.union(*s)) == universe;
        }
        let p = left - 1;
        let m = shape.len();
        let lower = shape.desc[p]
            .iter()
            .fold(SubSet::EMPTY, |u, &q| u.union(sets[q]));
        let children = shape.desc[p]
            .iter()
            .filter(|&&q| shape.parent[q] == Some(p));
        let need = match self.mode {
            FamilyMode::Any => SubSet::EMPTY,
            _ => children.fold(SubSet::EMPTY, |u, &q| u.union(sets[q])),
        };
        let avoid = match self.mode {
            FamilyMode::Reduced => (left..m)
                .filter(|q| !shape.desc[p].contains(q))
                .fold(SubSet::EMPTY, |u, q| u.union(sets[q])),
            _ => SubSet::EMPTY,
        };
        let label = &shape.nodes[p].label;
        let up = label_forest(label, j, self.bases.len());
        for &s in cands {
            if !need.is_subset(s) || !s.is_disjoint(avoid) {
                continue;
            }
            let comp = s.minus(lower);
            let sub = match &up {
                None => {
                    let c = label.as_color().expect("nested label at the last level");
                    if !comp.is_subset(self.target.part(c)) {
                        continue;
                    }
                    Vec::new()
                }
                Some(_) => {
                    let padded = self.padded;
                    let sub_forest = match label {
                        Label::Color(c) => &padded[*c as usize],
                        Label::Nested(h) => h,
                    };
                    match self.solve(sub_forest, j + 1, comp) {
                        Some(v) => v,
                        None => continue,
                    }
                }
            };
            sets[p] = s;
            inner[p] = sub;
            if self.assign(shape, j, universe, cands, p, sets, inner) {
                return true;
            }
        }
        sets[p] = SubSet::EMPTY;
        inner[p] = Vec::new();
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::family::{family_defines, is_monotone, is_reduced, Definition};
    use crate::space::FiniteSpace;
    use crate::term::parse_term;

    fn f(t: &str) -> Forest {
        parse_term(t).unwrap()
    }

    fn part(labels: &[u8]) -> KPartition {
        KPartition::new(labels.to_vec(), 2).unwrap()
    }

    #[test]
    fn chain_examples() {
        let ups = FiniteSpace::chain(2).up_sets();
        assert!(dh_membership(&part(&[0, 1]), &f("0*1"), &ups).unwrap());
        assert!(!dh_membership(&part(&[1, 0]), &f("0*1"), &ups).unwrap());
        assert!(dh_membership(&part(&[1, 0]), &f("1*0"), &ups).unwrap());
        for n in 1..4 {
            for c in 0..2u8 {
                let a = KPartition::new(vec![c; n], 2).unwrap();
                let sp = FiniteSpace::antichain(n).up_sets();
                assert!(dh_membership(&a, &Forest::leaf(c), &sp).unwrap());
            }
        }
    }

    #[test]
    fn witnesses_define_the_target() {
        let ups = FiniteSpace::chain(3).up_sets();
        let a = part(&[0, 1, 0]);
        for mode in [FamilyMode::Any, FamilyMode::Monotone, FamilyMode::Reduced] {
            let w = dh_witness(&a, &f("0*1*0"), &ups, mode).unwrap().unwrap();
            assert_eq!(
                family_defines(&w, 3, 2).unwrap(),
                Definition::Defines(a.clone())
            );
            w.check_bases(std::slice::from_ref(&ups)).unwrap();
            if mode != FamilyMode::Any {
                assert!(is_monotone(&w));
            }
            if mode == FamilyMode::Reduced {
                assert!(is_reduced(&w));
            }
        }
    }

    #[test]
    fn nested_examples() {
        let ups = FiniteSpace::chain(2).up_sets();
        let lb = OmegaBase::new(vec![ups.clone(), Base::powerset(2)]).unwrap();
        for a in KPartition::all(2, 2) {
            assert!(fh_membership(&a, &f("s(0|1)"), &lb).unwrap());
            for p in ["0*1", "1*0", "0|1", "0"] {
                assert_eq!(
                    fh_membership(&a, &f(p), &lb).unwrap(),
                    dh_membership(&a, &f(p), &ups).unwrap()
                );
            }
        }
        assert!(!fh_membership(&part(&[1, 0]), &f("0|1"), &lb).unwrap());
        let w = fh_witness(&part(&[1, 0]), &f("s(0|1)"), &lb, FamilyMode::Any)
            .unwrap()
            .unwrap();
        assert_eq!(
            family_defines(&w, 2, 2).unwrap(),
            Definition::Defines(part(&[1, 0]))
        );
        assert!(matches!(
            fh_membership(&part(&[0, 0]), &f("s(s(0*1))"), &lb),
            Err(SpaceError::LevelMismatch {
                needed: 3,
                available: 2
            })
        ));
    }

    #[test]
    fn agrees_with_brute_force() {
        let forests = crate::corpus::normalized_flat_forests(3, 2);
        for sp in crate::space::all_posets(3) {
            let ups = sp.up_sets();
            for a in KPartition::all(3, 2) {
                for p in &forests {
                    assert_eq!(
                        dh_membership(&a, p, &ups).unwrap(),
                        crate::oracle::brute_dh_membership(&a, p, &ups),
                        "{p} {a}"
                    );
                }
            }
        }
    }
}
