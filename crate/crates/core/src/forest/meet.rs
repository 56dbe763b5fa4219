use std::collections::HashMap;
use std::marker::PhantomData;

use super::normalize::normalize;
use super::{Forest, Label, Tree};

/// Greatest lower bound in the lattice of forests with `⊥` adjoined.
///
/// Meets distribute over components, so only tree pairs need a rule. For
/// `S = a(F')` and `T = b(G')`, every tree below both either lies below
/// `F' ⊓ T`, below `S ⊓ G'`, or has its root mapped to both roots; the last
/// case needs a root label below `a ⊓ b` and children below `S ⊓ T`, which
/// by induction on size are already below the tree built from the first
/// two cases. Hence
///
/// ```text
/// S ⊓ T = (a ⊓ b)((F' ⊓ T) ⊔ (S ⊓ G'))   when a ⊓ b exists
///       = (F' ⊓ T) ⊔ (S ⊓ G')             otherwise
/// ```
pub fn meet(f: &Forest, g: &Forest) -> Forest {
    Meeter::default().forest(f, g)
}

pub fn meet_many<'a, I: IntoIterator<Item = &'a Forest>>(forests: I) -> Option<Forest> {
    let mut it = forests.into_iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, f| meet(&acc, f)))
}

/// Meet of two labels; `None` is `⊥`. Colors meet only themselves; a color
/// against a nested label is `s(i) ⊓ g`.
pub fn label_meet(a: &Label, b: &Label) -> Option<Label> {
    let m = match (a, b) {
        (Label::Color(i), Label::Color(j)) => {
            return (i == j).then_some(Label::Color(*i));
        }
        _ => meet(&a.to_forest(), &b.to_forest()),
    };
    (!m.is_empty()).then(|| Label::nested(m))
}

/// Trees whose meet is h-equivalent to `f`: `p_i(f)` for every color `i < k`.
/// Needs `k >= 2`.
pub fn meet_decomposition(f: &Forest, k: u8) -> Vec<Tree> {
    (0..k).map(|i| Tree::wrap(i, f.clone())).collect()
}

/// Memoized on node addresses, which the borrow keeps stable.
#[derive(Default)]
struct Meeter<'a> {
    memo: HashMap<(usize, usize), Forest>,
    _inputs: PhantomData<&'a Forest>,
}

impl<'a> Meeter<'a> {
    fn forest(&mut self, f: &'a Forest, g: &'a Forest) -> Forest {
        let mut trees = Vec::new();
        for s in &f.trees {
            for t in &g.trees {
                trees.extend(self.tree(s, t).trees);
            }
        }
        normalize(&Forest { trees })
    }

    fn tree(&mut self, s: &'a Tree, t: &'a Tree) -> Forest {
        let key = (s as *const Tree as usize, t as *const Tree as usize);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut below = Vec::new();
        for c in &s.children.trees {
            below.extend(self.tree(c, t).trees);
        }
        for c in &t.children.trees {
            below.extend(self.tree(s, c).trees);
        }
        let below = normalize(&Forest { trees: below });
        let out = match label_meet(&s.label, &t.label) {
            Some(l) => Tree::wrap(l, below).into_forest(),
            None => below,
        };
        let out = normalize(&out);
        self.memo.insert(key, out.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{h_equiv, h_leq};
    use crate::term::parse_term;

    fn f(s: &str) -> Forest {
        parse_term(s).unwrap()
    }

    #[test]
    fn examples() {
        let t = f("0*(1|2*0)");
        assert!(h_equiv(&meet(&t, &t), &t));
        assert!(meet(&f("0"), &f("1")).is_empty());
        assert!(h_equiv(&meet(&f("0*1"), &f("1*0")), &f("0|1")));
    }

    #[test]
    fn lower_bound() {
        let a = f("0*(1*2|2)");
        let b = f("2*0*1|1*0");
        let m = meet(&a, &b);
        assert!(h_leq(&m, &a));
        assert!(h_leq(&m, &b));
    }

    #[test]
    fn nested_meet() {
        let a = f("s(0*1)");
        let b = f("s(1*0)");
        assert!(h_equiv(&meet(&a, &b), &f("s(0|1)")));
        assert!(h_equiv(&meet(&a, &f("0")), &f("0")));
    }

    #[test]
    fn decomposition_recovers_forest() {
        for s in ["0|1", "0*1|2", "0*1|1*0", "0", "1*(0|2)|0*2"] {
            let g = f(s);
            let trees: Vec<Forest> = meet_decomposition(&g, 3)
                .into_iter()
                .map(Tree::into_forest)
                .collect();
            let m = meet_many(&trees).unwrap();
            assert!(h_equiv(&m, &g), "{s}");
        }
    }
}
