use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use super::{dh_membership, fh_membership, guard, Base, KPartition, OmegaBase, SpaceError};
use crate::forest::{h_equiv, h_leq, Forest};
use crate::par;

#[derive(Clone, Debug)]
pub enum LevelSource {
    Base(Base),
    Omega(OmegaBase),
}

impl LevelSource {
    pub fn points(&self) -> usize {
        match self {
            LevelSource::Base(b) => b.points(),
            LevelSource::Omega(o) => o.points(),
        }
    }

    pub fn member(&self, a: &KPartition, p: &Forest) -> Result<bool, SpaceError> {
        match self {
            LevelSource::Base(b) => dh_membership(a, p, b),
            LevelSource::Omega(o) => fh_membership(a, p, o),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Level {
    pub forest: String,
    pub members: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Constituent {
    /// Indices into the forest list, one per h-equivalence class.
    pub antichain: Vec<usize>,
    pub members: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchyReport {
    pub points: usize,
    pub k: u8,
    pub total: usize,
    pub levels: Vec<Level>,
    /// `[i, j]` with `i != j` and `L(P_i) ⊆ L(P_j)`.
    pub inclusions: Vec<[usize; 2]>,
    pub constituents: Vec<Constituent>,
}

/// Levels of the given forests over all k-partitions, their inclusions, and
/// the constituents of the hierarchy indexed by the forests under `≤_h`.
pub fn hierarchy_report(
    src: &LevelSource,
    forests: &[Forest],
    k: u8,
    override_guard: bool,
) -> Result<HierarchyReport, SpaceError> {
    let n = src.points();
    guard(n, k, override_guard)?;
    let parts = KPartition::all(n, k);
    let mut member_sets: Vec<BTreeSet<usize>> = Vec::with_capacity(forests.len());
    for p in forests {
        let flags = par::map(&parts, |a| src.member(a, p));
        let mut set = BTreeSet::new();
        for (i, r) in flags.into_iter().enumerate() {
            if r? {
                set.insert(i);
            }
        }
        member_sets.push(set);
    }
    let show = |set: &BTreeSet<usize>| {
        set.iter()
            .map(|&i| parts[i].to_string())
            .collect::<Vec<_>>()
    };

    let m = forests.len();
    let mut inclusions = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i != j && member_sets[i].is_subset(&member_sets[j]) {
                inclusions.push([i, j]);
            }
        }
    }

    // one representative per h-equivalence class, least index first
    let mut rep: Vec<usize> = (0..m).collect();
    for i in 0..m {
        if let Some(j) = (0..i).find(|&j| rep[j] == j && h_equiv(&forests[i], &forests[j])) {
            rep[i] = j;
        }
    }
    let classes: Vec<usize> = (0..m).filter(|&i| rep[i] == i).collect();
    let leq = |a: usize, b: usize| h_leq(&forests[a], &forests[b]);

    // group each member by the minimal classes of its level set
    let mut groups: BTreeMap<Vec<usize>, BTreeSet<usize>> = BTreeMap::new();
    let union: BTreeSet<usize> = member_sets.iter().flatten().copied().collect();
    for &x in &union {
        let s: Vec<usize> = classes
            .iter()
            .copied()
            .filter(|&c| member_sets[c].contains(&x))
            .collect();
        let mins: Vec<usize> = s
            .iter()
            .copied()
            .filter(|&c| !s.iter().any(|&d| d != c && leq(d, c) && !leq(c, d)))
            .collect();
        groups.entry(mins).or_default().insert(x);
    }
    let constituents = groups
        .into_iter()
        .map(|(antichain, set)| Constituent {
            members: show(&set),
            antichain,
        })
        .collect();

    Ok(HierarchyReport {
        points: n,
        k,
        total: parts.len(),
        levels: forests
            .iter()
            .zip(&member_sets)
            .map(|(f, s)| Level {
                forest: f.to_string(),
                members: show(s),
            })
            .collect(),
        inclusions,
        constituents,
    })
}

impl HierarchyReport {
    /// `C_a = ⋂{L(p) : p ∈ a} ∖ ⋃{L(q) : q not above any element of a}`,
    /// for checking the grouping against the definition.
    pub fn constituent_by_formula(
        &self,
        antichain: &[usize],
        forests: &[Forest],
    ) -> BTreeSet<String> {
        let sets: Vec<BTreeSet<String>> = self
            .levels
            .iter()
            .map(|l| l.members.iter().cloned().collect())
            .collect();
        let mut acc = match antichain.first() {
            Some(&p) => sets[p].clone(),
            None => return BTreeSet::new(),
        };
        for &p in &antichain[1..] {
            acc = acc.intersection(&sets[p]).cloned().collect();
        }
        for q in 0..forests.len() {
            let above = antichain.iter().any(|&p| h_leq(&forests[p], &forests[q]));
            if !above {
                acc = acc.difference(&sets[q]).cloned().collect();
            }
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    /// Hasse diagram of level inclusion; forests with equal levels share a
    /// node.
    pub fn to_dot(&self) -> String {
        let m = self.levels.len();
        let mut node_of = vec![usize::MAX; m];
        let mut nodes: Vec<Vec<usize>> = Vec::new();
        for i in 0..m {
            match (0..i).find(|&j| self.levels[j].members == self.levels[i].members) {
                Some(j) => {
                    node_of[i] = node_of[j];
                    nodes[node_of[j]].push(i);
                }
                None => {
                    node_of[i] = nodes.len();
                    nodes.push(vec![i]);
                }
            }
        }
        let sub = |a: usize, b: usize| {
            let (x, y) = (
                &self.levels[nodes[a][0]].members,
                &self.levels[nodes[b][0]].members,
            );
            a != b && x.iter().all(|e| y.contains(e))
        };
        let mut out = String::from("digraph levels {\n  rankdir=BT;\n");
        for (id, members) in nodes.iter().enumerate() {
            let names: Vec<&str> = members
                .iter()
                .map(|&i| self.levels[i].forest.as_str())
                .collect();
            let size = self.levels[members[0]].members.len();
            let _ = writeln!(out, "  n{id} [label=\"{} ({size})\"];", names.join(" = "));
        }
        for a in 0..nodes.len() {
            for b in 0..nodes.len() {
                if sub(a, b) && !(0..nodes.len()).any(|c| sub(a, c) && sub(c, b)) {
                    let _ = writeln!(out, "  n{a} -> n{b};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}
