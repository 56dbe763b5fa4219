//! Acceptance sweeps A1–A10, each checked against brute-force oracles.
//!
//! Every suite returns a [`SuiteResult`]; the `acceptance` test target and
//! the CLI `selftest` verb both run them. The meet used by the lattice and
//! canonical-tree suites is injectable so a broken implementation can be
//! shown to fail.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canonical::{classify_2forest, t_flat, t_nested, CanonicalName, Kind, Polarity};
use crate::corpus;
use crate::forest::{h_equiv, h_leq, meet, normalize, Forest, Label, Tree};
use crate::nested::{flatten, has_morphism, unflatten};
use crate::oracle;
use crate::ordinal;
use crate::par;
use crate::reduce::{degree_poset, monotone_maps};
use crate::space::{
    all_posets, dh_membership, dh_witness, family_defines, fh_membership, is_reduced,
    reduce_family, Base, Definition, FamilyMode, FiniteSpace, KPartition, OmegaBase, SubSet,
};
use crate::term::{parse_term, print_term};

pub type MeetFn = fn(&Forest, &Forest) -> Forest;

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub meet: MeetFn,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { meet, seed: 0x5eed }
    }
}

/// Drops the last component of the true meet: still a lower bound, no
/// longer the greatest one.
pub fn broken_meet(f: &Forest, g: &Forest) -> Forest {
    let mut m = meet(f, g);
    m.trees.pop();
    m
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub checks: u64,
    pub seconds: f64,
    pub budget_seconds: f64,
    pub within_budget: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl SuiteResult {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{status} {} {}: {} checks, {:.2}s (budget {:.0}s)",
            self.id, self.title, self.checks, self.seconds, self.budget_seconds
        );
        if let Some(f) = &self.failure {
            s.push_str(&format!(" -- {f}"));
        }
        s
    }
}

pub const FAST: [&str; 4] = ["A1", "A2", "A3", "A4"];
pub const ALL: [&str; 10] = ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10"];

struct Suite {
    title: &'static str,
    budget: f64,
    run: fn(&SuiteConfig, &mut Tally),
}

fn suite(id: &str) -> Option<Suite> {
    let s = |title, budget, run| Some(Suite { title, budget, run });
    match id {
        "A1" => s("h-preorder oracle", 60.0, a1),
        "A2" => s("lattice laws", 120.0, a2),
        "A3" => s("flat canonical trees", 60.0, a3),
        "A4" => s("difference hierarchy oracle", 120.0, a4),
        "A5" => s("nested canonical trees", 300.0, a5),
        "A6" => s("flatten / unflatten equivalence", 120.0, a6),
        "A7" => s("reduction machinery", 120.0, a7),
        "A8" => s("monotonicity and meet of levels", 300.0, a8),
        "A9" => s("degree explorer", 5.0, a9),
        "A10" => s("term parser", 10.0, a10),
        _ => None,
    }
}

pub fn run(id: &str, cfg: &SuiteConfig) -> Option<SuiteResult> {
    let suite = suite(id)?;
    let id = ALL.iter().copied().find(|x| *x == id)?;
    let start = Instant::now();
    let mut tally = Tally::default();
    (suite.run)(cfg, &mut tally);
    let seconds = start.elapsed().as_secs_f64();
    let within_budget = seconds <= suite.budget;
    let failure = tally
        .failure
        .or_else(|| (!within_budget).then(|| format!("exceeded the {:.0}s budget", suite.budget)));
    Some(SuiteResult {
        id,
        title: suite.title,
        passed: failure.is_none(),
        checks: tally.checks,
        seconds,
        budget_seconds: suite.budget,
        within_budget,
        failure,
    })
}

pub fn run_all(ids: &[&str], cfg: &SuiteConfig) -> Vec<SuiteResult> {
    ids.iter().filter_map(|id| run(id, cfg)).collect()
}

#[derive(Default)]
struct Tally {
    checks: u64,
    failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    /// Records a batch of independent results; `what` names the first bad one.
    fn batch<T>(&mut self, items: &[T], ok: &[bool], what: impl Fn(&T) -> String) {
        self.checks += items.len() as u64;
        if self.failure.is_none() {
            if let Some(i) = ok.iter().position(|b| !b) {
                self.failure = Some(what(&items[i]));
            }
        }
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
}

fn a1(_: &SuiteConfig, t: &mut Tally) {
    // the two oracles agree with each other on tiny forests
    let tiny = corpus::flat_forests(3, 2);
    let ps = pairs(tiny.len());
    let ok = par::map(&ps, |&(i, j)| {
        oracle::brute_h_leq(&tiny[i], &tiny[j]) == (oracle::count_morphisms(&tiny[i], &tiny[j]) > 0)
    });
    t.batch(&ps, &ok, |&(i, j)| {
        format!("oracles disagree on {} vs {}", tiny[i], tiny[j])
    });

    // normal forms stay in their class, checked against the oracle
    let mut raw = corpus::flat_forests(5, 3);
    raw.extend(corpus::nested_forests(5, 2, 3));
    let ok = par::map(&raw, |f| oracle::brute_h_equiv(f, &normalize(f)));
    t.batch(&raw, &ok, |f| {
        format!("{f} is not equivalent to its normal form")
    });

    let mut flat = corpus::normalized_flat_forests(6, 3);
    flat.extend(corpus::flat_forests(4, 3));
    let nested = corpus::dedup_normal(corpus::nested_forests(5, 2, 3));
    for set in [&flat, &nested] {
        let ps = pairs(set.len());
        let ok = par::map(&ps, |&(i, j)| {
            h_leq(&set[i], &set[j]) == oracle::brute_h_leq(&set[i], &set[j])
        });
        t.batch(&ps, &ok, |&(i, j)| {
            format!(
                "h_leq disagrees with the oracle on {} vs {}",
                set[i], set[j]
            )
        });
    }
}

fn bitset_rows(
    rows: &[Forest],
    cols: &[Forest],
    leq: impl Fn(&Forest, &Forest) -> bool + Sync,
) -> Vec<Vec<u64>> {
    par::map(rows, |r| {
        let mut row = vec![0u64; cols.len().div_ceil(64)];
        for (j, c) in cols.iter().enumerate() {
            if leq(r, c) {
                row[j / 64] |= 1 << (j % 64);
            }
        }
        row
    })
}

fn bits(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &x)| {
        (0..64)
            .filter(move |b| x >> b & 1 == 1)
            .map(move |b| w * 64 + b)
    })
}

fn a2(cfg: &SuiteConfig, t: &mut Tally) {
    let mut corpus5 = corpus::normalized_flat_forests(5, 2);
    corpus5.extend(corpus::normalized_flat_forests(5, 3));
    let corpus5 = corpus::dedup_normal(corpus5);
    let cands = corpus::normalized_flat_forests(6, 3);
    // below[i] has bit j iff cand_j ≤ f_i; above[i] has bit j iff f_i ≤ cand_j
    let below = bitset_rows(&corpus5, &cands, |f, c| h_leq(c, f));
    let above = bitset_rows(&corpus5, &cands, h_leq);
    let inter = |a: &[u64], b: &[u64]| a.iter().zip(b).map(|(x, y)| x & y).collect::<Vec<u64>>();

    let ps = pairs(corpus5.len());
    let meet_fn = cfg.meet;
    let ok = par::map(&ps, |&(i, j)| {
        let (f, g) = (&corpus5[i], &corpus5[j]);
        let m = meet_fn(f, g);
        let jn = f.join(g);
        let lower = h_leq(&m, f) && h_leq(&m, g);
        let upper = h_leq(f, &jn) && h_leq(g, &jn);
        // every common lower bound among the candidates lies below the meet,
        // every common upper bound above the join
        let greatest = bits(&inter(&below[i], &below[j])).all(|c| h_leq(&cands[c], &m));
        let least = bits(&inter(&above[i], &above[j])).all(|c| h_leq(&jn, &cands[c]));
        lower && upper && greatest && least
    });
    t.batch(&ps, &ok, |&(i, j)| {
        format!("lattice law fails for {} and {}", corpus5[i], corpus5[j])
    });

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let triples: Vec<[Forest; 3]> = (0..1000)
        .map(|_| std::array::from_fn(|_| corpus::random_flat_forest(&mut rng, 5, 3)))
        .collect();
    let ok = par::map(&triples, |[f, g, h]| {
        let a = h_equiv(&meet_fn(f, &g.join(h)), &meet_fn(f, g).join(&meet_fn(f, h)));
        let b = h_equiv(&f.join(&meet_fn(g, h)), &meet_fn(&f.join(g), &f.join(h)));
        a && b
    });
    t.batch(&triples, &ok, |[f, g, h]| {
        format!("distributivity fails for {f}, {g}, {h}")
    });
}

fn tf(n: usize, p: Polarity) -> Forest {
    t_flat(n, p).into_forest()
}

fn a3(cfg: &SuiteConfig, t: &mut Tally) {
    use Polarity::*;
    for n in 0..=6 {
        let (a, b) = (tf(n, Plain), tf(n, Bar));
        t.check(!h_leq(&a, &b) && !h_leq(&b, &a), || {
            format!("T_{n} and its bar are comparable")
        });
        t.check(tf(n, Plain).trees[0].rank() == n, || {
            format!("rank of T_{n}")
        });
        let j = a.join(&b);
        for m in (n + 1)..=6 {
            let tm = tf(m, Plain);
            t.check(h_leq(&j, &tm) && !h_leq(&tm, &j), || {
                format!("T_{n}⊔T̄_{n} is not strictly below T_{m}")
            });
        }
        if n < 6 {
            let me = (cfg.meet)(&tf(n + 1, Plain), &tf(n + 1, Bar));
            t.check(h_equiv(&me, &j), || {
                format!("T_{}⊓T̄_{} is {me}, not T_{n}⊔T̄_{n}", n + 1, n + 1)
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 3);
    let sample: Vec<Forest> = (0..500)
        .map(|_| corpus::random_flat_forest(&mut rng, 6, 2))
        .collect();
    let ok = par::map(&sample, |f| match classify_2forest(f) {
        Ok(name) => {
            let others = [Kind::T, Kind::TBar, Kind::TJoinTBar]
                .into_iter()
                .filter(|k| *k != name.kind)
                .map(|k| CanonicalName::new(k, name.index.clone()).representative());
            h_equiv(f, &name.representative()) && others.into_iter().all(|o| !h_equiv(f, &o))
        }
        Err(_) => false,
    });
    t.batch(&sample, &ok, |f| {
        format!("classification of {f} is not total or not verified")
    });
}

fn a4(_: &SuiteConfig, t: &mut Tally) {
    let mut cases = Vec::new();
    for pts in 1..=4 {
        for sp in all_posets(pts) {
            cases.push(sp);
        }
    }
    let ok = par::map(&cases, |sp| {
        let ups = sp.up_sets();
        (0..=3).all(|n| {
            let image = oracle::difference_image(n, &ups);
            let tree = tf(n, Polarity::Plain);
            KPartition::all(sp.len(), 2).iter().all(|a| {
                dh_membership(a, &tree, &ups).unwrap_or(false) == image.contains(&a.part(1))
            })
        })
    });
    t.batch(&cases, &ok, |sp| {
        format!("L(T_n) differs from D_n(L) on the space {}", sp.to_json())
    });
}

fn a5(cfg: &SuiteConfig, t: &mut Tally) {
    let ords = ordinal::enumerate(2, 2, 2);
    let trees: Vec<(Forest, Forest, Forest)> = par::map(&ords, |a| {
        let p = t_nested(a, Polarity::Plain);
        let b = p.bar();
        let j = p.join(&b);
        (p, b, j)
    });
    let ok = par::map(&trees, |(p, b, _)| !h_leq(p, b) && !h_leq(b, p));
    t.batch(&ords, &ok, |a| format!("T_{a} and its bar are comparable"));

    let idx: Vec<usize> = (0..ords.len()).collect();
    let ok = par::map(&idx, |&i| {
        let j = &trees[i].2;
        ((i + 1)..ords.len()).all(|k| h_leq(j, &trees[k].0) && !h_leq(&trees[k].0, j))
    });
    t.batch(&idx, &ok, |&i| {
        format!("T_a⊔T̄_a is not strictly below some T_b for a = {}", ords[i])
    });

    let meet_fn = cfg.meet;
    let ok = par::map(&idx, |&i| {
        let s = ords[i].succ();
        let m = meet_fn(&t_nested(&s, Polarity::Plain), &t_nested(&s, Polarity::Bar));
        h_equiv(&m, &trees[i].2)
    });
    t.batch(&idx, &ok, |&i| {
        format!("meet identity fails at a = {}", ords[i])
    });
}

fn a6(_: &SuiteConfig, t: &mut Tally) {
    let all = corpus::nested_forests(5, 3, 2);
    let ok = par::map(&all, |p| {
        (p.nesting_level().max(1)..=3).all(|n| {
            flatten(p, n)
                .and_then(|x| unflatten(&x))
                .is_ok_and(|q| h_equiv(&q, p))
        })
    });
    t.batch(&all, &ok, |p| {
        format!("unflatten(flatten({p})) is not equivalent")
    });

    let norm = corpus::dedup_normal(all);
    let flat: Vec<_> = norm
        .iter()
        .map(|p| flatten(p, 3).expect("level ≤ 3"))
        .collect();
    let ps = pairs(norm.len());
    let ok = par::map(&ps, |&(i, j)| {
        has_morphism(&flat[i], &flat[j]) == h_leq(&norm[i], &norm[j])
    });
    t.batch(&ps, &ok, |&(i, j)| {
        format!("morphism existence differs for {} vs {}", norm[i], norm[j])
    });
}

/// Every family on `n` points closed under ∪ and ∩ and containing ∅.
pub fn all_bases(n: usize) -> Vec<Base> {
    let universe = 1usize << n;
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << universe) {
        if mask & 1 == 0 {
            continue;
        }
        let sets: Vec<SubSet> = (0..universe)
            .filter(|s| mask >> s & 1 == 1)
            .map(|s| SubSet(s as u64))
            .collect();
        if let Ok(b) = Base::new(n, sets) {
            out.push(b);
        }
    }
    out
}

fn a7(_: &SuiteConfig, t: &mut Tally) {
    for n in 1..=5 {
        t.check(
            FiniteSpace::chain(n).up_sets().has_reduction_property(),
            || format!("chain of {n}"),
        );
    }
    for n in 0..=4 {
        t.check(Base::powerset(n).has_reduction_property(), || {
            format!("powerset of {n}")
        });
    }
    t.check(
        !FiniteSpace::diamond().up_sets().has_reduction_property(),
        || "diamond".into(),
    );

    let mut bases = Vec::new();
    for n in 1..=3 {
        bases.extend(all_bases(n));
        for sp in all_posets(n) {
            bases.push(sp.up_sets());
        }
    }
    let forests = corpus::normalized_flat_forests(4, 2);
    let ok = par::map(&bases, |b| {
        let pairwise = b.has_reduction_property();
        // length-3 sequences directly, against the pairwise answer
        let direct = triples_reducible(b);
        if pairwise != direct {
            return false;
        }
        if !pairwise {
            return true;
        }
        let lb = std::slice::from_ref(b);
        KPartition::all(b.points(), 2).iter().all(|a| {
            forests.iter().all(|p| {
                let any = dh_witness(a, p, b, FamilyMode::Any).ok().flatten();
                let red = dh_witness(a, p, b, FamilyMode::Reduced).ok().flatten();
                if any.is_some() != red.is_some() {
                    return false;
                }
                match any {
                    None => true,
                    Some(w) => reduce_family(&w, lb).is_ok_and(|r| {
                        is_reduced(&r)
                            && family_defines(&r, b.points(), 2).ok()
                                == Some(Definition::Defines(a.clone()))
                    }),
                }
            })
        })
    });
    t.batch(&bases, &ok, |b| {
        format!("reduction machinery fails on base {}", b.to_json())
    });
}

/// Every triple of base sets has pairwise disjoint base subsets with the
/// same union, by direct search.
fn triples_reducible(b: &Base) -> bool {
    let sets = b.sets();
    sets.iter().all(|&a0| {
        sets.iter().all(|&a1| {
            sets.iter().all(|&a2| {
                let u = a0.union(a1).union(a2);
                sets.iter().filter(|d0| d0.is_subset(a0)).any(|&d0| {
                    sets.iter()
                        .filter(|d1| d1.is_subset(a1) && d1.is_disjoint(d0))
                        .any(|&d1| {
                            let d2 = u.minus(d0.union(d1));
                            d2.is_subset(a2) && b.contains(d2)
                        })
                })
            })
        })
    })
}

fn a8(cfg: &SuiteConfig, t: &mut Tally) {
    let mut spaces = Vec::new();
    for n in 1..=3 {
        spaces.extend(all_posets(n));
    }
    for (k, forests) in [
        (2, corpus::normalized_flat_forests(4, 2)),
        (3, corpus::normalized_flat_forests(3, 3)),
    ] {
        let ok = par::map(&spaces, |sp| {
            let ups = sp.up_sets();
            let parts = KPartition::all(sp.len(), k);
            let level = |p: &Forest| -> Vec<bool> {
                parts
                    .iter()
                    .map(|a| dh_membership(a, p, &ups).unwrap_or(false))
                    .collect()
            };
            let levels: Vec<Vec<bool>> = forests.iter().map(level).collect();
            let maps = monotone_maps(sp, sp, false).unwrap_or_default();
            let mono = (0..forests.len()).all(|i| {
                (0..forests.len()).all(|j| {
                    !h_leq(&forests[i], &forests[j])
                        || levels[i].iter().zip(&levels[j]).all(|(a, b)| !a || *b)
                })
            });
            let meets = (0..forests.len()).all(|i| {
                (0..forests.len()).all(|j| {
                    let m = level(&meet(&forests[i], &forests[j]));
                    (0..parts.len()).all(|x| m[x] == (levels[i][x] && levels[j][x]))
                })
            });
            let monotone = (0..forests.len()).all(|i| {
                (0..parts.len()).filter(|&x| levels[i][x]).all(|x| {
                    maps.iter().all(|f| {
                        dh_membership(&parts[x].compose(f), &forests[i], &ups).unwrap_or(false)
                    })
                })
            });
            // restricting to monotone families changes nothing
            let monotone_families = (0..forests.len()).all(|i| {
                (0..parts.len()).all(|x| {
                    dh_witness(&parts[x], &forests[i], &ups, FamilyMode::Monotone)
                        .is_ok_and(|w| w.is_some() == levels[i][x])
                })
            });
            mono && meets && monotone && monotone_families
        });
        t.batch(&spaces, &ok, |sp| {
            format!("level laws fail on space {} for k = {k}", sp.to_json())
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 8);
    let samples: Vec<(FiniteSpace, Forest, Forest)> = (0..200)
        .map(|_| {
            use rand::seq::SliceRandom;
            use rand::Rng;
            let n = rng.gen_range(1..=3);
            let sp = all_posets(n).choose(&mut rng).expect("nonempty").clone();
            let p = corpus::random_nested_forest(&mut rng, 3, 2, 2);
            let q = corpus::random_nested_forest(&mut rng, 3, 2, 2);
            (sp, p, q)
        })
        .collect();
    let ok = par::map(&samples, |(sp, p, q)| {
        let lb = OmegaBase::generate(sp.up_sets(), 3);
        let m = meet(p, q);
        KPartition::all(sp.len(), 2).iter().all(|a| {
            let (ip, iq) = (fh_membership(a, p, &lb), fh_membership(a, q, &lb));
            let im = fh_membership(a, &m, &lb);
            match (ip, iq, im) {
                (Ok(ip), Ok(iq), Ok(im)) => (!h_leq(p, q) || !ip || iq) && im == (ip && iq),
                _ => false,
            }
        })
    });
    t.batch(&samples, &ok, |(sp, p, q)| {
        format!("nested level laws fail for {p}, {q} on {}", sp.to_json())
    });
}

fn a9(_: &SuiteConfig, t: &mut Tally) {
    match degree_poset(&FiniteSpace::chain(2), 2, false) {
        Ok(d) => {
            t.check(d.len() == 4, || format!("2-chain has {} degrees", d.len()));
            let (mins, maxs) = (d.minimal(), d.maximal());
            t.check(mins.len() == 2 && maxs.len() == 2, || {
                "2-chain extremal degrees".into()
            });
            t.check(!d.leq(maxs[0], maxs[1]) && !d.leq(maxs[1], maxs[0]), || {
                "2-chain maximal degrees comparable".into()
            });
            t.check(!d.leq(mins[0], mins[1]) && !d.leq(mins[1], mins[0]), || {
                "2-chain minimal degrees comparable".into()
            });
        }
        Err(e) => t.check(false, || e.to_string()),
    }
    match degree_poset(&FiniteSpace::antichain(2), 2, false) {
        Ok(d) => t.check(d.len() == 3, || {
            format!("2-antichain has {} degrees", d.len())
        }),
        Err(e) => t.check(false, || e.to_string()),
    }
}

fn a10(cfg: &SuiteConfig, t: &mut Tally) {
    let examples: [(&str, Forest); 5] = [
        ("⊥", Forest::bottom()),
        ("bot", Forest::bottom()),
        (
            "0*(1⊔2)",
            Tree::wrap(0, Forest::leaf(1).join(&Forest::leaf(2))).into_forest(),
        ),
        (
            "(0*1)*2",
            Tree::wrap(
                Label::Nested(Tree::wrap(0, Forest::leaf(1)).into_forest()),
                Forest::leaf(2),
            )
            .into_forest(),
        ),
        (
            "0 | 1*2",
            Forest::leaf(0).join(&Tree::wrap(1, Forest::leaf(2)).into_forest()),
        ),
    ];
    for (src, want) in &examples {
        t.check(parse_term(src).as_ref() == Ok(want), || {
            format!("{src} parses wrongly")
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 10);
    let sample: Vec<Forest> = (0..1000)
        .map(|i| {
            if i % 2 == 0 {
                corpus::random_flat_forest(&mut rng, 7, 3)
            } else {
                corpus::random_nested_forest(&mut rng, 4, 3, 3)
            }
        })
        .collect();
    let ok = par::map(&sample, |f| {
        let printed = print_term(f);
        match parse_term(&printed) {
            Ok(g) => &g == f && normalize(&g) == normalize(f),
            Err(_) => false,
        }
    });
    t.batch(&sample, &ok, |f| format!("round trip fails for {f}"));
}
