//! Canonical 2-trees `T_α`, `T̄_α` for flat and nested forests, and
//! classification of 2-forests against them.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forest::{h_equiv, Forest, Label, Tree};
use crate::ordinal::Ordinal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Plain,
    Bar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    T,
    TBar,
    TJoinTBar,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalName {
    pub kind: Kind,
    pub index: Ordinal,
}

impl CanonicalName {
    pub fn new(kind: Kind, index: Ordinal) -> CanonicalName {
        CanonicalName { kind, index }
    }

    pub fn representative(&self) -> Forest {
        let t = t_nested(&self.index, Polarity::Plain);
        match self.kind {
            Kind::T => t,
            Kind::TBar => t.bar(),
            Kind::TJoinTBar => t.join(&t.bar()),
        }
    }
}

impl fmt::Display for CanonicalName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.index;
        match self.kind {
            Kind::T => write!(f, "T_{a}"),
            Kind::TBar => write!(f, "T̄_{a}"),
            Kind::TJoinTBar => write!(f, "T_{a}⊔T̄_{a}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonicalError {
    #[error("the empty forest has no canonical name")]
    Empty,
    #[error("classification needs a color-labeled forest")]
    NotFlat,
    #[error("classification needs colors 0 and 1 only, found {0}")]
    NotTwoColored(u8),
    #[error("classified {name} but the representative is not h-equivalent to the input")]
    Unverified { name: String },
}

/// `T_0 = 0`, `T_{n+1} = p_0(T̄_n)`; the bar polarity swaps 0 and 1.
pub fn t_flat(n: usize, pol: Polarity) -> Tree {
    // the chain read from the leaf up alternates colors
    let first = match pol {
        Polarity::Plain => 0u8,
        Polarity::Bar => 1,
    };
    let leaf_color = (first as usize + n) % 2;
    let mut t = Tree::leaf(leaf_color as u8);
    for depth in (0..n).rev() {
        let c = ((first as usize + depth) % 2) as u8;
        t = Tree::wrap(c, t.into_forest());
    }
    t
}

fn star(head: Forest, children: Forest) -> Forest {
    Tree::wrap(Label::nested(head), children).into_forest()
}

/// `T_α` for a notation `α` in Cantor normal form over `Ω`.
///
/// ```text
/// T_n                   flat alternating chain
/// T_{β+1}               0*(T_β ⊔ T̄_β)              β ≥ Ω
/// T_{Ω^γ}               s(T_γ)                     γ ≥ 1
/// T_{Ω^γ(δ+1)}          T_γ*T̄_{Ω^γ δ}
/// T_{β+Ω^γ}             T_γ*(T_β ⊔ T̄_β)            β's exponents > γ
/// T_{β+Ω^γ(δ+1)}        T_γ*T̄_{β+Ω^γ δ}
/// ```
///
/// Coefficients are finite, so every notation falls under one of these
/// cases and no infinite join is ever needed.
pub fn t_nested(a: &Ordinal, pol: Polarity) -> Forest {
    let t = t_plain(a);
    match pol {
        Polarity::Plain => t,
        Polarity::Bar => t.bar(),
    }
}

fn t_plain(a: &Ordinal) -> Forest {
    if let Some(n) = a.as_finite() {
        return t_flat(n as usize, Polarity::Plain).into_forest();
    }
    let (beta, last) = a.split_last().expect("nonzero");
    let (gamma, c) = (&last.exponent, last.coefficient);
    let lower = beta.add(&Ordinal::monomial(gamma.clone(), c - 1));
    if gamma.is_zero() {
        // a = lower + 1 with lower ≥ Ω
        let t = t_plain(&lower);
        return Tree::wrap(0, t.join(&t.bar())).into_forest();
    }
    let head = t_plain(gamma);
    match (beta.is_zero(), c) {
        (true, 1) => Forest::singleton(Label::nested(head)),
        (false, 1) => {
            let t = t_plain(&beta);
            star(head, t.join(&t.bar()))
        }
        _ => star(head, t_plain(&lower).bar()),
    }
}

/// `t_plain(a).total_size()` without building the tree.
fn plain_size(a: &Ordinal, memo: &mut HashMap<Ordinal, usize>) -> usize {
    if let Some(n) = a.as_finite() {
        return n as usize + 1;
    }
    if let Some(&v) = memo.get(a) {
        return v;
    }
    let (beta, last) = a.split_last().expect("nonzero");
    let (gamma, c) = (&last.exponent, last.coefficient);
    let lower = beta.add(&Ordinal::monomial(gamma.clone(), c - 1));
    let v = if gamma.is_zero() {
        1 + 2 * plain_size(&lower, memo)
    } else {
        let head = plain_size(gamma, memo);
        match (beta.is_zero(), c) {
            (true, 1) => 1 + head,
            (false, 1) => 1 + head + 2 * plain_size(&beta, memo),
            _ => 1 + head + plain_size(&lower, memo),
        }
    };
    memo.insert(a.clone(), v);
    v
}

/// Label changes along the longest-alternating root-to-leaf path.
fn alternation(t: &Tree) -> usize {
    t.children
        .trees
        .iter()
        .map(|c| alternation(c) + usize::from(c.label != t.label))
        .max()
        .unwrap_or(0)
}

/// The name among `T_n`, `T̄_n`, `T_n ⊔ T̄_n` of a nonempty color-labeled
/// 2-forest, verified by h-equivalence against the representative.
pub fn classify_2forest(f: &Forest) -> Result<CanonicalName, CanonicalError> {
    if f.is_empty() {
        return Err(CanonicalError::Empty);
    }
    let mut best: [Option<usize>; 2] = [None, None];
    for t in f.nodes() {
        match t.label {
            Label::Color(c) if c > 1 => return Err(CanonicalError::NotTwoColored(c)),
            Label::Nested(_) => return Err(CanonicalError::NotFlat),
            Label::Color(_) => {}
        }
    }
    for t in &f.trees {
        let c = t.label.as_color().expect("flat") as usize;
        let alt = alternation(t);
        best[c] = Some(best[c].map_or(alt, |b| b.max(alt)));
    }
    let name = match best {
        [Some(a), Some(b)] if a == b => {
            CanonicalName::new(Kind::TJoinTBar, Ordinal::finite(a as u64))
        }
        [Some(a), Some(b)] if a > b => CanonicalName::new(Kind::T, Ordinal::finite(a as u64)),
        [Some(_), Some(b)] | [None, Some(b)] => {
            CanonicalName::new(Kind::TBar, Ordinal::finite(b as u64))
        }
        [Some(a), None] => CanonicalName::new(Kind::T, Ordinal::finite(a as u64)),
        [None, None] => unreachable!("nonempty forest"),
    };
    if !h_equiv(f, &name.representative()) {
        return Err(CanonicalError::Unverified {
            name: name.to_string(),
        });
    }
    Ok(name)
}

/// Every notation `α` with `|T_α| <= bound` (total size, nested labels
/// included), in increasing order. Each rule builds `T_α` from strictly
/// smaller canonical trees, so the search prunes on size.
pub fn supported_up_to(bound: usize) -> Vec<Ordinal> {
    supported(bound, &mut HashMap::new())
}

fn supported(bound: usize, sizes: &mut HashMap<Ordinal, usize>) -> Vec<Ordinal> {
    if bound == 0 {
        return Vec::new();
    }
    let mut exps = vec![(Ordinal::zero(), 1)];
    for g in supported(bound - 1, sizes) {
        if !g.is_zero() {
            let s = plain_size(&g, sizes);
            exps.push((g, s));
        }
    }
    struct Walk<'a> {
        exps: &'a [(Ordinal, usize)],
        bound: usize,
        sizes: &'a mut HashMap<Ordinal, usize>,
        out: Vec<Ordinal>,
    }
    impl Walk<'_> {
        fn extend(&mut self, prefix: &Ordinal, below: Option<&Ordinal>) {
            let prefix_size = if prefix.is_zero() {
                0
            } else {
                plain_size(prefix, self.sizes)
            };
            for (g, g_size) in self.exps {
                if below.is_some_and(|b| g >= b) {
                    continue;
                }
                // the size with coefficient 1, a lower bound for every coefficient
                let least = match (prefix.is_zero(), g.is_zero()) {
                    (true, true) => 2,
                    (true, false) => 1 + g_size,
                    (false, true) => 1 + 2 * prefix_size,
                    (false, false) => 1 + g_size + 2 * prefix_size,
                };
                if least > self.bound {
                    continue;
                }
                let mut c = 1;
                loop {
                    let a = prefix.add(&Ordinal::monomial(g.clone(), c));
                    if plain_size(&a, self.sizes) > self.bound {
                        break;
                    }
                    self.out.push(a.clone());
                    self.extend(&a, Some(g));
                    c += 1;
                }
            }
        }
    }
    let mut walk = Walk {
        exps: &exps,
        bound,
        sizes,
        out: vec![Ordinal::zero()],
    };
    walk.extend(&Ordinal::zero(), None);
    let mut out = walk.out;
    out.sort();
    out.dedup();
    out
}

/// First name (by index, then kind) whose representative has total size at
/// most `bound` and is h-equivalent to `f`. `None` means the bound was too
/// small or `f` is not a 2-forest of the supported kinds.
pub fn classify_2tree_nested(f: &Forest, bound: usize) -> Option<CanonicalName> {
    if f.is_empty() {
        return None;
    }
    for a in supported_up_to(bound) {
        let t = t_nested(&a, Polarity::Plain);
        let size = t.total_size();
        for kind in [Kind::T, Kind::TBar, Kind::TJoinTBar] {
            if kind == Kind::TJoinTBar && 2 * size > bound {
                continue;
            }
            let name = CanonicalName::new(kind, a.clone());
            if h_equiv(f, &name.representative()) {
                return Some(name);
            }
        }
    }
    None
}
