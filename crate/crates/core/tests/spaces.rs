use hforest::oracle::brute_dh_membership;
use hforest::space::{
    all_posets, dh_membership, dh_witness, family_defines, family_to_diff_sequence,
    hierarchy_report, Base, Definition, FamilyMode, FiniteSpace, KPartition, LevelSource, PFamily,
};
use hforest::term::parse_term;
use hforest::{corpus, par, Forest};

fn f(s: &str) -> Forest {
    parse_term(s).unwrap()
}

#[test]
fn space_json_round_trip() {
    for n in 1..=4 {
        for sp in all_posets(n) {
            assert_eq!(FiniteSpace::from_json(&sp.to_json()).unwrap(), sp);
        }
    }
}

#[test]
fn witnesses_define_their_partition() {
    let sp = FiniteSpace::diamond();
    let ups = sp.up_sets();
    for a in KPartition::all(sp.len(), 2) {
        for p in corpus::normalized_flat_forests(4, 2) {
            let w = dh_witness(&a, &p, &ups, FamilyMode::Any).unwrap();
            assert_eq!(
                w.is_some(),
                brute_dh_membership(&a, &p, &ups),
                "{a} in L({p})"
            );
            if let Some(w) = w {
                assert_eq!(
                    family_defines(&w, sp.len(), 2).unwrap(),
                    Definition::Defines(a.clone())
                );
                let back: PFamily = serde_json::from_value(w.to_json()).unwrap();
                assert_eq!(back, w);
            }
        }
    }
}

#[test]
fn chain_witness_gives_difference_sequence() {
    let ups = FiniteSpace::chain(3).up_sets();
    let a = KPartition::parse("010", None).unwrap();
    let w = dh_witness(&a, &f("0*1*0"), &ups, FamilyMode::Any)
        .unwrap()
        .unwrap();
    let seq = family_to_diff_sequence(&w).unwrap();
    assert!(seq.windows(2).all(|p| p[0].is_subset(p[1])));
    assert!(seq.iter().all(|s| ups.contains(*s)));
}

#[test]
fn sequential_and_parallel_agree() {
    let ups = Base::powerset(3);
    let forests = corpus::normalized_flat_forests(4, 2);
    let parts = KPartition::all(3, 2);
    let run = || {
        par::map(&forests, |p| {
            parts
                .iter()
                .filter(|a| dh_membership(a, p, &ups).unwrap())
                .count()
        })
    };
    par::set_exec(par::Exec::Sequential);
    let seq = run();
    par::set_exec(par::Exec::Parallel);
    assert_eq!(seq, run());
}

#[test]
fn report_constituents_match_formula() {
    let src = LevelSource::Base(FiniteSpace::chain(3).up_sets());
    let fs = [f("0*1"), f("1*0"), f("0*1|1*0"), f("0*1*0"), f("1*0*1")];
    let r = hierarchy_report(&src, &fs, 2, false).unwrap();
    assert_eq!(r.total, 8);
    let covered: usize = r.constituents.iter().map(|c| c.members.len()).sum();
    assert_eq!(covered, 8);
    for c in &r.constituents {
        let want: std::collections::BTreeSet<String> = c.members.iter().cloned().collect();
        assert_eq!(r.constituent_by_formula(&c.antichain, &fs), want);
    }
}
