mod common;

use common::*;
use godel::computability::{arity, run, Program};
use godel::model::{eval, Env, OracleTable, TriBool};
use godel::representation::*;
use godel::Nat;
use proptest::prelude::*;
use std::collections::BTreeSet;

fn value(p: &Program, args: &[Nat]) -> Option<Nat> {
    run(p, args, 100_000).unwrap().value().cloned()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Compiled formulas are pure and mention exactly the output and the
    /// inputs as free variables.
    #[test]
    fn compiled_shape(seed in any::<u64>(), k in 0usize..4) {
        let mut r = rng(seed);
        let p = random_program(&mut r, k, 4, true, false);
        let rep = compile(&p).unwrap();
        prop_assert_eq!(rep.arity, k);
        prop_assert!(rep.formula.is_pure());
        let free = rep.formula.free_vars();
        prop_assert!(free.is_subset(&(0..=k as u64).collect::<BTreeSet<_>>()));
        prop_assert!(free.contains(&Y));
    }

    #[test]
    fn weak_representation_of_random_programs(seed in any::<u64>(), k in 0usize..3, xs in prop::collection::vec(0u64..4, 2)) {
        let mut r = rng(seed);
        let p = random_program(&mut r, k, 3, true, false);
        let args: Vec<Nat> = xs[..k].iter().map(|&x| n(x)).collect();
        let Some(v) = value(&p, &args) else { return Ok(()) };
        prop_assume!(v < 1000);
        let cap = n(2000);
        prop_assert_eq!(check_weak_representation(&p, &args, &v, &cap).unwrap(), TriBool::True);
        for q in [v.clone() + 1u32, n(0), n(7)] {
            if q != v {
                prop_assert_ne!(check_weak_representation(&p, &args, &q, &cap).unwrap(), TriBool::True);
            }
        }
    }

    /// `μ` returns the least zero of its body, found here by brute force.
    #[test]
    fn mu_returns_least_zero(seed in any::<u64>(), x in 0u64..5) {
        let mut r = rng(seed);
        let g = random_program(&mut r, 2, 3, false, false);
        let mu = Program::mu(1, g.clone());
        let least = (0..200u64).find(|&y| value(&g, &[n(x), n(y)]) == Some(n(0)));
        let got = run(&mu, &[n(x)], 1000).unwrap().value().cloned();
        match least {
            Some(y) => prop_assert_eq!(got, Some(n(y))),
            None => prop_assert!(got.is_none() || got.unwrap() >= 200),
        }
    }

    #[test]
    fn halting_formula_is_true_when_program_halts(seed in any::<u64>(), x in 0u64..4) {
        let mut r = rng(seed);
        let p = random_program(&mut r, 1, 3, true, false);
        prop_assume!(value(&p, &[n(x)]).is_some_and(|v| v < 500));
        let h = to_halting_formula(&p, &[n(x)]).unwrap();
        prop_assert_eq!(eval(&h, &Env::new(), &n(1000), &OracleTable::new()).unwrap(), TriBool::True);
    }
}

#[test]
fn corpus_is_rec_free_and_halts() {
    let corpus = corpus();
    assert_eq!(corpus.len(), 20);
    assert!(corpus.iter().all(|(_, p)| !p.contains_rec()));
    assert!(mu_corpus().len() >= 4);
    for (name, p) in corpus {
        let k = arity(&p).unwrap();
        assert!(value(&p, &vec![n(3); k]).is_some(), "{name}");
    }
}

#[test]
fn rec_must_be_eliminated_first() {
    let p = godel::computability::corpus::pred_rec();
    assert_eq!(compile(&p), Err(RepError::ContainsRec));
}

#[test]
fn strong_representation_bounded_is_true() {
    for (name, p) in mu_corpus() {
        let k = arity(&p).unwrap();
        let f = strong_rep_bounded(&p, &vec![n(2); k], 6, 10_000).unwrap();
        assert_eq!(eval(&f, &Env::new(), &n(0), &OracleTable::new()).unwrap(), TriBool::True, "{name}");
    }
}
