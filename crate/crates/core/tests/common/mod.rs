#![allow(dead_code)]

use godel::calculus::{ProofTree, Rule};
use godel::syntax::{Articulate, Formula, Pred, Term, Var};
use godel::Nat;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn n(x: u64) -> Nat {
    Nat::from(x)
}

// --- exhaustive enumeration by articulated-tree size ----------------------

const VARS: [Var; 2] = [0, 1];
const LITS: [u64; 2] = [0, 5];

/// Terms whose tree has exactly `k` nodes.
pub fn terms_of_size(k: usize) -> Vec<Term> {
    let mut out = Vec::new();
    match k {
        0 => {}
        1 => out.push(Term::Zero),
        _ => {
            if k == 2 {
                out.extend(VARS.iter().map(|&v| Term::Var(v)));
                out.extend(LITS.iter().map(|&l| Term::lit(l)));
            }
            out.extend(terms_of_size(k - 1).into_iter().map(Term::succ));
            for i in 1..k - 1 {
                for a in terms_of_size(i) {
                    for b in terms_of_size(k - 1 - i) {
                        out.push(Term::add(a.clone(), b.clone()));
                        out.push(Term::mul(a.clone(), b));
                    }
                }
            }
        }
    }
    out
}

fn term_lists(total: usize, len: usize) -> Vec<Vec<Term>> {
    if len == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for i in 1..=total {
        for t in terms_of_size(i) {
            for mut rest in term_lists(total - i, len - 1) {
                rest.insert(0, t.clone());
                out.push(rest);
            }
        }
    }
    out
}

/// Formulas whose tree has exactly `k` nodes.
pub fn formulas_of_size(k: usize) -> Vec<Formula> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    if k == 1 {
        out.push(Formula::Bottom);
    }
    for i in 1..k - 1 {
        for a in terms_of_size(i) {
            for b in terms_of_size(k - 1 - i) {
                out.push(Formula::eq(a.clone(), b));
            }
        }
    }
    if k >= 2 {
        out.extend(formulas_of_size(k - 1).into_iter().map(Formula::not));
    }
    for i in 1..k.saturating_sub(1) {
        for a in formulas_of_size(i) {
            for b in formulas_of_size(k - 1 - i) {
                out.push(Formula::implies(a.clone(), b.clone()));
                out.push(Formula::and(a.clone(), b.clone()));
                out.push(Formula::or(a.clone(), b));
            }
        }
    }
    // quantifier: symbol + body + variable leaf
    if k >= 3 {
        for body in formulas_of_size(k - 2) {
            for &v in &VARS {
                out.push(Formula::forall(v, body.clone()));
                out.push(Formula::exists(v, body.clone()));
            }
        }
    }
    for p in Pred::ALL {
        if k > p.arity() {
            for args in term_lists(k - 1, p.arity()) {
                out.push(Formula::Pred(p, args));
            }
        }
    }
    out
}

fn proof_lists(total: usize, len: usize) -> Vec<Vec<ProofTree>> {
    if len == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for i in 1..=total {
        for p in proofs_of_size(i) {
            for mut rest in proof_lists(total - i, len - 1) {
                rest.insert(0, p.clone());
                out.push(rest);
            }
        }
    }
    out
}

/// Proof trees (valid or not) of exactly `k` nodes: conclusion, rule tag,
/// and subproofs.
pub fn proofs_of_size(k: usize) -> Vec<ProofTree> {
    let mut out = Vec::new();
    for f in 1..k {
        let rest = k - f - 1;
        for conclusion in formulas_of_size(f) {
            for rule in Rule::ALL {
                for premises in proof_lists(rest, rule.premises()) {
                    out.push(ProofTree { conclusion: conclusion.clone(), rule, premises });
                }
            }
        }
    }
    out
}

// --- random syntax ----------------------------------------------------------

pub fn random_term(r: &mut impl Rng, budget: usize) -> Term {
    if budget <= 1 {
        return match r.gen_range(0..3) {
            0 => Term::Zero,
            1 => Term::Var(r.gen_range(0..4)),
            _ => Term::Lit(Nat::from(r.gen_range(0u64..1000))),
        };
    }
    match r.gen_range(0..6) {
        0 => Term::succ(random_term(r, budget - 1)),
        1 | 2 => {
            let i = r.gen_range(1..budget);
            Term::add(random_term(r, i), random_term(r, budget - i))
        }
        3 => {
            let i = r.gen_range(1..budget);
            Term::mul(random_term(r, i), random_term(r, budget - i))
        }
        _ => random_term(r, 1),
    }
}

pub fn random_formula(r: &mut impl Rng, budget: usize) -> Formula {
    if budget <= 2 {
        return if r.gen_bool(0.2) { Formula::Bottom } else { Formula::eq(random_term(r, 1), random_term(r, 1)) };
    }
    match r.gen_range(0..9) {
        0 => {
            let i = r.gen_range(1..budget);
            Formula::eq(random_term(r, i), random_term(r, budget - i))
        }
        1 => Formula::not(random_formula(r, budget - 1)),
        2..=4 => {
            let i = r.gen_range(1..budget - 1);
            let (a, b) = (random_formula(r, i), random_formula(r, budget - 1 - i));
            match r.gen_range(0..3) {
                0 => Formula::implies(a, b),
                1 => Formula::and(a, b),
                _ => Formula::or(a, b),
            }
        }
        5 => Formula::forall(r.gen_range(0..4), random_formula(r, budget - 2)),
        6 => Formula::exists(r.gen_range(0..4), random_formula(r, budget - 2)),
        _ => {
            let p = *Pred::ALL.choose(r).expect("nonempty");
            let each = (budget / p.arity()).max(1);
            Formula::Pred(p, (0..p.arity()).map(|_| random_term(r, each)).collect())
        }
    }
}

/// Arbitrary proof-shaped trees, mostly invalid.
pub fn random_proof(r: &mut impl Rng, budget: usize) -> ProofTree {
    let rule = *Rule::ALL.choose(r).expect("nonempty");
    let k = rule.premises();
    let share = budget.saturating_sub(4) / (k + 1);
    let premises = (0..k).map(|_| random_proof(r, share)).collect();
    ProofTree { conclusion: random_formula(r, share.max(2)), rule, premises }
}

// --- valid derivations --------------------------------------------------

fn closed_term(r: &mut impl Rng, budget: usize) -> Term {
    if budget <= 1 || r.gen_bool(0.3) {
        return if r.gen_bool(0.5) { Term::Zero } else { Term::Lit(Nat::from(r.gen_range(0u64..50))) };
    }
    match r.gen_range(0..3) {
        0 => Term::succ(closed_term(r, budget - 1)),
        1 => Term::add(closed_term(r, budget / 2), closed_term(r, budget / 2)),
        _ => Term::mul(closed_term(r, budget / 2), closed_term(r, budget / 2)),
    }
}

/// A random valid proof (in Q, hence in PA).
pub fn valid_proof(r: &mut impl Rng, depth: usize) -> ProofTree {
    let f = |r: &mut _| random_formula(r, 5);
    let t = |r: &mut _| random_term(r, 3);
    if depth == 0 || r.gen_bool(0.25) {
        let ax = match r.gen_range(0..8) {
            0 => {
                let x = t(r);
                ProofTree::axiom(Rule::EqRefl, Formula::eq(x.clone(), x))
            }
            1 => {
                let (a, b) = (f(r), f(r));
                ProofTree::axiom(Rule::K, Formula::implies(a.clone(), Formula::implies(b, a)))
            }
            2 => {
                let (a, b, c) = (f(r), f(r), f(r));
                let i = Formula::implies;
                ProofTree::axiom(Rule::S, i(i(a.clone(), i(b.clone(), c.clone())), i(i(a.clone(), b), i(a, c))))
            }
            3 => {
                let x = t(r);
                ProofTree::axiom(Rule::Q4, Formula::eq(Term::add(x.clone(), Term::Zero), x))
            }
            4 => ProofTree::axiom(Rule::Q6, Formula::eq(Term::mul(t(r), Term::Zero), Term::Zero)),
            5 => {
                let (a, b) = (f(r), f(r));
                ProofTree::axiom(Rule::AndL, Formula::implies(Formula::and(a.clone(), b), a))
            }
            6 => {
                let v = r.gen_range(0..4);
                let body = Formula::eq(Term::Var(v), Term::Var(v));
                let c = closed_term(r, 3);
                let inst = body.replace_free(v, &c);
                ProofTree::axiom(Rule::Inst, Formula::implies(Formula::forall(v, body), inst))
            }
            _ => {
                let x = Term::Var(r.gen_range(0..4));
                ProofTree::axiom(Rule::Q1, Formula::forall(0, Formula::not(Formula::eq(Term::succ(x), Term::Zero))))
            }
        };
        return ax;
    }
    match r.gen_range(0..3) {
        // from A, K gives B ⇒ A
        0 => {
            let pa = valid_proof(r, depth - 1);
            let a = pa.conclusion.clone();
            let b = f(r);
            let k = ProofTree::axiom(Rule::K, Formula::implies(a.clone(), Formula::implies(b, a)));
            ProofTree::mp(k, pa)
        }
        1 => ProofTree::gen(r.gen_range(0..4), valid_proof(r, depth - 1)),
        _ => {
            let (pa, pb) = (valid_proof(r, depth - 1), valid_proof(r, depth - 1));
            godel::calculus::derived::and_intro(pa, pb)
        }
    }
}

/// A random MP node `(π1 ; π2)` with its two valid premises: π1 proves
/// `A ⇒ X` (K applied to a proof of `X`) and π2 proves `A`.
pub fn mp_instance(r: &mut impl Rng, depth: usize) -> (ProofTree, ProofTree, ProofTree) {
    let pa = valid_proof(r, depth);
    let px = valid_proof(r, depth);
    let (a, x) = (pa.conclusion.clone(), px.conclusion.clone());
    let k = ProofTree::axiom(Rule::K, Formula::implies(x.clone(), Formula::implies(a, x)));
    let major = ProofTree::mp(k, px);
    (ProofTree::mp(major.clone(), pa.clone()), major, pa)
}

/// Mutates one node: its rule, its conclusion, or the order of premises.
pub fn mutate(r: &mut impl Rng, pi: &ProofTree) -> ProofTree {
    let mut pi = pi.clone();
    let mut node = &mut pi;
    while !node.premises.is_empty() && r.gen_bool(0.5) {
        let i = r.gen_range(0..node.premises.len());
        node = &mut node.premises[i];
    }
    match r.gen_range(0..3) {
        0 => {
            let same: Vec<Rule> = Rule::ALL.iter().copied().filter(|q| q.premises() == node.rule.premises()).collect();
            node.rule = *same.choose(r).expect("nonempty");
        }
        1 if node.premises.len() == 2 => node.premises.swap(0, 1),
        _ => node.conclusion = random_formula(r, 4),
    }
    pi
}

pub fn round_trips<A: Articulate + PartialEq + std::fmt::Debug>(x: &A) -> bool {
    godel::numbering::decode_as::<A>(&godel::numbering::godel_number(x)).as_ref() == Ok(x)
}

// --- programs and closed arithmetic ---------------------------------------

/// A random well-formed program of arity `n`; `mu` and `rec` only when
/// allowed.
pub fn random_program(r: &mut impl Rng, n: usize, depth: usize, mu: bool, rec: bool) -> godel::computability::Program {
    use godel::computability::Program;
    let leaf = |r: &mut dyn rand::RngCore| {
        if n > 0 && r.gen_bool(0.7) {
            Program::Proj(n, r.gen_range(1..=n))
        } else {
            Program::Zero(n)
        }
    };
    if depth == 0 {
        return leaf(r);
    }
    let comp = |h: Program, gs: Vec<Program>| Program::Comp { n, m: gs.len(), h: Box::new(h), gs };
    match r.gen_range(0..8) {
        0 => leaf(r),
        1 => comp(Program::Succ, vec![random_program(r, n, depth - 1, mu, rec)]),
        2..=4 => {
            let h = [Program::Add, Program::Mul, Program::ChiLeq][r.gen_range(0..3)].clone();
            comp(h, vec![random_program(r, n, depth - 1, mu, rec), random_program(r, n, depth - 1, mu, rec)])
        }
        5 if mu => Program::mu(n, random_program(r, n + 1, depth - 1, false, rec)),
        6 if rec && n > 0 => Program::rec(
            n - 1,
            random_program(r, n - 1, depth - 1, mu, false),
            random_program(r, n + 1, depth - 1, mu, false),
        ),
        _ => comp(Program::Succ, vec![leaf(r)]),
    }
}

/// A pure formula over variables `0..vars` with small literals.
pub fn pure_formula(r: &mut impl Rng, budget: usize, vars: Var) -> Formula {
    let term = |r: &mut dyn rand::RngCore, b: usize| small_term(r, b, vars);
    if budget <= 3 {
        let (a, b) = (term(r, 2), term(r, 2));
        return if r.gen_bool(0.1) { Formula::Bottom } else { Formula::eq(a, b) };
    }
    match r.gen_range(0..8) {
        0 => Formula::not(pure_formula(r, budget - 1, vars)),
        1..=3 => {
            let i = r.gen_range(2..budget - 1);
            let (a, b) = (pure_formula(r, i, vars), pure_formula(r, budget - i, vars));
            match r.gen_range(0..3) {
                0 => Formula::implies(a, b),
                1 => Formula::and(a, b),
                _ => Formula::or(a, b),
            }
        }
        4 => Formula::exists(r.gen_range(0..vars), pure_formula(r, budget - 2, vars)),
        5 => Formula::forall(r.gen_range(0..vars), pure_formula(r, budget - 2, vars)),
        _ => {
            let i = r.gen_range(1..budget - 1);
            Formula::eq(term(r, i), term(r, budget - i))
        }
    }
}

pub fn small_term(r: &mut dyn rand::RngCore, budget: usize, vars: Var) -> Term {
    if budget <= 1 {
        return match r.gen_range(0..3) {
            0 => Term::Zero,
            1 => Term::Var(r.gen_range(0..vars)),
            _ => Term::lit(r.gen_range(0u64..12)),
        };
    }
    match r.gen_range(0..4) {
        0 => Term::succ(small_term(r, budget - 1, vars)),
        1 => Term::add(small_term(r, budget / 2, vars), small_term(r, budget / 2, vars)),
        2 => Term::mul(small_term(r, budget / 2, vars), small_term(r, budget / 2, vars)),
        _ => small_term(r, 1, vars),
    }
}

/// Binds every free variable, each with a random quantifier.
pub fn close(r: &mut impl Rng, f: Formula) -> Formula {
    f.free_vars()
        .into_iter()
        .fold(f, |g, v| if r.gen_bool(0.5) { Formula::forall(v, g) } else { Formula::exists(v, g) })
}
