mod common;

use common::*;
use godel::model::*;
use godel::syntax::{Formula, Term};
use godel::Nat;
use proptest::prelude::*;
use rand::Rng;

fn quantifier_free(f: &Formula) -> bool {
    match f {
        Formula::Forall(..) | Formula::Exists(..) => false,
        Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => quantifier_free(a) && quantifier_free(b),
        Formula::Not(a) => quantifier_free(a),
        _ => true,
    }
}

fn term_value(t: &Term, env: &[u64; 3]) -> Nat {
    match t {
        Term::Zero => Nat::new(),
        Term::Succ(a) => term_value(a, env) + 1u32,
        Term::Add(a, b) => term_value(a, env) + term_value(b, env),
        Term::Mul(a, b) => term_value(a, env) * term_value(b, env),
        Term::Var(v) => n(env[*v as usize]),
        Term::Lit(k) => k.clone(),
    }
}

fn truth(f: &Formula, env: &[u64; 3]) -> bool {
    match f {
        Formula::Eq(a, b) => term_value(a, env) == term_value(b, env),
        Formula::Bottom => false,
        Formula::Implies(a, b) => !truth(a, env) || truth(b, env),
        Formula::And(a, b) => truth(a, env) && truth(b, env),
        Formula::Or(a, b) => truth(a, env) || truth(b, env),
        Formula::Not(a) => !truth(a, env),
        _ => unreachable!("quantifier-free, pure"),
    }
}

fn env_of(xs: &[u64; 3]) -> Env {
    xs.iter().enumerate().map(|(i, &x)| (i as godel::syntax::Var, n(x))).collect()
}

fn ev(f: &Formula, env: &Env, cap: u64) -> TriBool {
    eval(f, env, &n(cap), &OracleTable::new()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn quantifier_free_is_exact(seed in any::<u64>(), budget in 3usize..14, xs in prop::array::uniform3(0u64..20)) {
        let mut r = rng(seed);
        let f = pure_formula(&mut r, budget, 3);
        prop_assume!(quantifier_free(&f));
        prop_assert_eq!(ev(&f, &env_of(&xs), 0), TriBool::from_bool(truth(&f, &xs)));
    }

    /// A definite verdict survives any larger cap.
    #[test]
    fn verdicts_are_stable(seed in any::<u64>(), budget in 3usize..14) {
        let mut r = rng(seed);
        let f = pure_formula(&mut r, budget, 3);
        let f = close(&mut r, f);
        let small = ev(&f, &Env::new(), 8);
        if small.is_known() {
            prop_assert_eq!(ev(&f, &Env::new(), 200), small);
        }
    }

    #[test]
    fn negation_is_classical(seed in any::<u64>(), budget in 3usize..14) {
        let mut r = rng(seed);
        let f = pure_formula(&mut r, budget, 3);
        let f = close(&mut r, f);
        let v = ev(&f, &Env::new(), 30);
        let expect = match v {
            TriBool::True => TriBool::False,
            TriBool::False => TriBool::True,
            TriBool::Unknown => TriBool::Unknown,
        };
        prop_assert_eq!(ev(&Formula::not(f), &Env::new(), 30), expect);
    }

    /// A true universal holds at every small instance; a false existential
    /// fails at each of them.
    #[test]
    fn quantifiers_agree_with_instances(seed in any::<u64>(), budget in 3usize..12) {
        let mut r = rng(seed);
        let body = pure_formula(&mut r, budget, 2);
        let body = if body.is_free(1) { Formula::exists(1, body) } else { body };
        for (all, q) in [(true, Formula::forall(0, body.clone())), (false, Formula::exists(0, body.clone()))] {
            let v = ev(&q, &Env::new(), 30);
            if v == TriBool::from_bool(all) {
                for k in 0..15u64 {
                    let inst = ev(&body.replace_free(0, &Term::lit(k)), &Env::new(), 30);
                    prop_assert_ne!(inst, TriBool::from_bool(!all));
                }
            }
        }
    }

    #[test]
    fn bounded_universals_unroll(seed in any::<u64>(), budget in 3usize..12, bound in 0u64..12, strict: bool) {
        let mut r = rng(seed);
        let body = pure_formula(&mut r, budget, 2);
        let body = if body.is_free(1) {
            if r.gen_bool(0.5) { Formula::exists(1, body) } else { Formula::forall(1, body) }
        } else {
            body
        };
        let f = bounded_forall(0, Term::lit(bound), strict, 5, body);
        let (z, count, _) = bounded_forall_shape(&f).unwrap();
        prop_assert_eq!((z, count), (0, n(bound + u64::from(!strict))));
        let unrolled = expand_bounded(&f).unwrap();
        let (a, b) = (ev(&f, &Env::new(), 40), ev(&unrolled, &Env::new(), 40));
        if a.is_known() && b.is_known() {
            prop_assert_eq!(a, b);
        }
    }
}

#[test]
fn reference_verdicts() {
    use Formula as F;
    let x = || Term::Var(0);
    let y = || Term::Var(1);
    let cases = [
        // dual of the next line: S x = 0 has no solution at all
        (F::forall(0, F::not(F::eq(Term::succ(x()), Term::Zero))), TriBool::True),
        (F::exists(0, F::eq(Term::succ(x()), Term::Zero)), TriBool::False),
        (F::exists(0, F::eq(Term::add(x(), x()), Term::lit(10u32))), TriBool::True),
        (F::forall(0, F::exists(1, F::eq(y(), Term::succ(x())))), TriBool::Unknown),
        (F::exists(0, F::exists(1, F::eq(Term::mul(x(), y()), Term::lit(91u32)))), TriBool::True),
    ];
    for (f, want) in cases {
        assert_eq!(ev(&f, &Env::new(), 100), want, "{f:?}");
    }
}

#[test]
fn free_variables_must_be_bound() {
    let f = Formula::eq(Term::Var(3), Term::Zero);
    assert!(eval(&f, &Env::new(), &n(10), &OracleTable::new()).is_err());
}

/// An exact but astronomically long range of candidates is cut short and
/// reported as undecided, not walked to the end.
#[test]
fn huge_solved_ranges_are_clipped() {
    let huge = Term::Lit(Nat::from(Nat::u_pow_u(10, 30)));
    let guard = Formula::exists(1, Formula::eq(Term::add(Term::Var(0), Term::Var(1)), huge));
    let f = Formula::forall(0, Formula::implies(guard, Formula::eq(Term::Var(0), Term::Var(0))));
    assert_eq!(ev(&f, &Env::new(), 10), TriBool::Unknown);
    let g = Formula::exists(0, Formula::and(f.clone(), Formula::eq(Term::Var(0), Term::Var(0))));
    let _ = ev(&g, &Env::new(), 10);
}
