mod common;

use std::collections::HashMap;

use betweenness::kernel::is_tautology;
use betweenness::parser::parse_formula;
use betweenness::{Atom, Formula, VertexSet};
use common::sig;
use proptest::prelude::*;

fn atom_strategy(n: usize) -> impl Strategy<Value = Atom> {
    let full = VertexSet::full(n).bits();
    (any::<u64>(), any::<u64>(), any::<u64>()).prop_map(move |(l, m, r)| {
        Atom::new(
            VertexSet::from_bits(l & full),
            VertexSet::from_bits(m & full),
            VertexSet::from_bits(r & full),
        )
    })
}

fn formula_strategy(n: usize) -> impl Strategy<Value = Formula> {
    atom_strategy(n).prop_map(Formula::Atom).prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::implies(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Formula::iff(l, r)),
        ]
    })
}

/// Plain recursive evaluation under an explicit atom valuation.
fn brute_eval(f: &Formula, v: &HashMap<Atom, bool>) -> bool {
    match f {
        Formula::Atom(a) => v[a],
        Formula::Not(x) => !brute_eval(x, v),
        Formula::Implies(l, r) => !brute_eval(l, v) || brute_eval(r, v),
        Formula::And(l, r) => brute_eval(l, v) && brute_eval(r, v),
        Formula::Or(l, r) => brute_eval(l, v) || brute_eval(r, v),
        Formula::Iff(l, r) => brute_eval(l, v) == brute_eval(r, v),
    }
}

fn collect(f: &Formula, out: &mut Vec<Atom>) {
    match f {
        Formula::Atom(a) => {
            if !out.contains(a) {
                out.push(*a)
            }
        }
        Formula::Not(x) => collect(x, out),
        Formula::Implies(l, r) | Formula::And(l, r) | Formula::Or(l, r) | Formula::Iff(l, r) => {
            collect(l, out);
            collect(r, out);
        }
    }
}

fn valuations(atoms: &[Atom]) -> Vec<HashMap<Atom, bool>> {
    (0..1u32 << atoms.len())
        .map(|bits| {
            atoms
                .iter()
                .enumerate()
                .map(|(i, a)| (*a, bits >> i & 1 == 1))
                .collect()
        })
        .collect()
}

fn brute_tautology(f: &Formula) -> bool {
    let mut atoms = Vec::new();
    collect(f, &mut atoms);
    valuations(&atoms).iter().all(|v| brute_eval(f, v))
}

/// All formulas over `atoms` built from `~` and `->` with depth at most `depth`.
fn formulas_up_to(atoms: &[Formula], depth: usize) -> Vec<Formula> {
    let mut all: Vec<Formula> = atoms.to_vec();
    for _ in 0..depth {
        let prev = all.clone();
        let mut next = atoms.to_vec();
        for f in &prev {
            next.push(Formula::not(f.clone()));
        }
        for l in &prev {
            for r in &prev {
                next.push(Formula::implies(l.clone(), r.clone()));
            }
        }
        all = next;
    }
    all
}

#[test]
fn tautology_checker_matches_brute_force_exhaustively() {
    let s = sig(3);
    let atoms: Vec<Formula> = ["a|b|c", "c|b|a", "a|a|b"]
        .iter()
        .map(|t| parse_formula(t, &s).unwrap())
        .collect();
    let all = formulas_up_to(&atoms, 3);
    assert_eq!(all.len(), 59_295);
    let mut tautologies = 0;
    for f in &all {
        let expected = brute_tautology(f);
        assert_eq!(is_tautology(f).unwrap(), expected, "{}", f.render(&s));
        tautologies += expected as usize;
    }
    assert!(tautologies > 0);
}

#[test]
fn peirce_law_by_truth_table() {
    let s = sig(3);
    let f = parse_formula("((a|b|c -> c|b|a) -> a|b|c) -> a|b|c", &s).unwrap();
    assert!(brute_tautology(&f));
    assert!(is_tautology(&f).unwrap());
}

#[test]
fn iff_with_itself_desugars_to_tautology() {
    let s = sig(3);
    let p = parse_formula("a|b|c", &s).unwrap();
    let f = Formula::iff(p.clone(), p).desugar();
    assert!(f.is_core());
    assert!(brute_tautology(&f));
    assert!(is_tautology(&f).unwrap());
}

#[test]
fn atoms_of_examples() {
    let s = sig(3);
    let count = |t| parse_formula(t, &s).unwrap().atoms().len();
    assert_eq!(count("a|b|c -> a|b|c"), 1);
    assert_eq!(count("a|b|c"), 1);
    assert_eq!(count("a|b|c -> c|b|a"), 2);
}

#[test]
fn rendering_examples() {
    let s = sig(3);
    let one = |i| VertexSet::singleton(i);
    assert_eq!(Formula::atom(one(0), one(1), one(2)).render(&s), "a|b|c");
    assert_eq!(
        Formula::atom(VertexSet::EMPTY, one(1), one(2)).render(&s),
        "{}|b|c"
    );
    assert_eq!(
        Formula::not(Formula::atom(one(0), one(1), one(0))).render(&s),
        "~(a|b|a)"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn render_parse_round_trip(f in formula_strategy(4)) {
        let s = sig(4);
        let text = f.render(&s);
        prop_assert_eq!(parse_formula(&text, &s).unwrap(), f);
    }

    #[test]
    fn desugar_is_idempotent_and_keeps_atoms(f in formula_strategy(4)) {
        let d = f.desugar();
        prop_assert!(d.is_core());
        prop_assert_eq!(d.desugar(), d.clone());
        prop_assert_eq!(d.atoms(), f.atoms());
    }

    #[test]
    fn desugar_preserves_truth(f in formula_strategy(3)) {
        let mut atoms = Vec::new();
        collect(&f, &mut atoms);
        prop_assume!(atoms.len() <= 10);
        let d = f.desugar();
        for v in valuations(&atoms) {
            prop_assert_eq!(brute_eval(&f, &v), brute_eval(&d, &v));
        }
    }

    #[test]
    fn tautology_checker_matches_brute_force_with_sugar(f in formula_strategy(2)) {
        prop_assume!(f.atoms().len() <= 12);
        prop_assert_eq!(is_tautology(&f).unwrap(), brute_tautology(&f));
    }

    #[test]
    fn set_literals_are_canonicalized(order in Just(vec![0usize, 1, 2, 3]).prop_shuffle(), dup in 0usize..4) {
        let s = sig(4);
        let mut names: Vec<&str> = order.iter().map(|&i| s.name(i)).collect();
        names.push(s.name(dup));
        let text = format!("a|{}|{{{}}}", names.join(","), names.join(","));
        let f = parse_formula(&text, &s).unwrap();
        prop_assert_eq!(f, parse_formula("a|a,b,c,d|a,b,c,d", &s).unwrap());
    }
}
