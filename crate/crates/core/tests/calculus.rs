mod common;

use common::*;
use godel::calculus::derived::{and_intro, identity};
use godel::calculus::*;
use godel::numbering::{code_bits_bound, godel_number};
use godel::syntax::{Articulate, Formula, Term};
use proptest::prelude::*;

fn some_proof(r: &mut rand_chacha::ChaCha8Rng, kind: u8, depth: usize) -> ProofTree {
    match kind % 3 {
        0 => valid_proof(r, depth),
        1 => {
            let p = valid_proof(r, depth);
            mutate(r, &p)
        }
        _ => random_proof(r, 4 + depth * 3),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn machine_agrees_with_recursive_checker(seed in any::<u64>(), kind in any::<u8>(), depth in 0usize..5) {
        let mut r = rng(seed);
        let p = some_proof(&mut r, kind, depth);
        for th in [Theory::Q, Theory::PA] {
            prop_assert_eq!(machine_check(&p, th), check_direct(&p, th));
        }
    }

    #[test]
    fn q_proofs_are_pa_proofs(seed in any::<u64>(), kind in any::<u8>(), depth in 0usize..5) {
        let mut r = rng(seed);
        let p = some_proof(&mut r, kind, depth);
        if check_direct(&p, Theory::Q) {
            prop_assert!(check_direct(&p, Theory::PA));
        }
    }

    /// Every step strictly lowers the measure, so the machine halts.
    #[test]
    fn measure_decreases(seed in any::<u64>(), kind in any::<u8>(), depth in 0usize..4) {
        let mut r = rng(seed);
        let p = some_proof(&mut r, kind, depth);
        let mut t = MachineTree::leaf(&p);
        while let Ok(next) = machine_step(&t, Theory::PA) {
            prop_assert!(next.measure() < t.measure());
            t = next;
        }
        prop_assert!(t.is_irreducible());
        prop_assert!(t.bit().is_some());
    }

    #[test]
    fn modus_ponens_costs_two_steps(seed in any::<u64>(), depth in 0usize..4) {
        let mut r = rng(seed);
        let (node, major, minor) = mp_instance(&mut r, depth);
        let (ok, steps) = machine_run(&node, Theory::Q);
        let (a, n1) = machine_run(&major, Theory::Q);
        let (b, n2) = machine_run(&minor, Theory::Q);
        prop_assert!(ok && a && b);
        prop_assert_eq!(steps, n1 + n2 + 2);
    }

    /// Reducing the left leaf of an `and` is the same as reducing it alone.
    #[test]
    fn left_context_is_transparent(seed in any::<u64>(), kind in any::<u8>()) {
        let mut r = rng(seed);
        let (p1, p2) = (some_proof(&mut r, kind, 2), valid_proof(&mut r, 1));
        let mut left = MachineTree::leaf(&p1);
        let mut joint = MachineTree::and(MachineTree::leaf(&p1), MachineTree::leaf(&p2));
        while !left.is_irreducible() {
            left = machine_step(&left, Theory::PA).unwrap();
            joint = machine_step(&joint, Theory::PA).unwrap();
            prop_assert_eq!(&joint, &MachineTree::and(left.clone(), MachineTree::leaf(&p2)));
        }
    }

    #[test]
    fn proof_predicate_on_codes(seed in any::<u64>(), kind in any::<u8>(), depth in 0usize..3) {
        let mut r = rng(seed);
        let p = some_proof(&mut r, kind, depth);
        prop_assume!(code_bits_bound(&p.to_tree()) <= 1 << 18);
        let code = godel_number(&p);
        let a = godel_number(&p.conclusion);
        prop_assert_eq!(proof_predicate(&code, &a, Theory::PA), check_direct(&p, Theory::PA));
        prop_assert!(!proof_predicate(&code, &(a + 1u32), Theory::PA));
    }

    #[test]
    fn derived_rules_are_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_formula(&mut r, 6);
        prop_assert!(check_direct(&identity(&f), Theory::Q));
        let (pa, pb) = (valid_proof(&mut r, 1), valid_proof(&mut r, 1));
        let both = and_intro(pa.clone(), pb.clone());
        prop_assert!(check_direct(&both, Theory::Q));
        prop_assert_eq!(both.conclusion, Formula::and(pa.conclusion, pb.conclusion));
    }
}

#[test]
fn search_skips_only_impossible_codes() {
    let fuel = 200_000u64;
    let big = godel::Nat::from(fuel);
    let mut targets: Vec<Formula> = (1..=3).flat_map(formulas_of_size).collect();
    targets.push(Formula::eq(Term::Zero, Term::Zero));
    for a in &targets {
        assert_eq!(search_proof(a, &big, Theory::Q), search_proof_literal(a, fuel, Theory::Q), "{a:?}");
    }
    assert_eq!(search_proof(&Formula::eq(Term::Zero, Term::Zero), &big, Theory::Q), Some(155025u32.into()));
}

#[test]
fn bounded_provability_is_monotone() {
    let a = Formula::eq(Term::Zero, Term::Zero);
    assert!(!bounded_provable(&a, &155024u32.into(), Theory::Q));
    assert!(bounded_provable(&a, &155025u32.into(), Theory::Q));
    assert!(bounded_provable(&a, &10_000_000u32.into(), Theory::Q));
}
