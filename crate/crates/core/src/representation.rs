//! Formulas tracking Rec-free programs: the compilation table, the weak and
//! strong representation checks, and the halting formula.

use crate::computability::{arity, run, Program, ProgramError, RunOutcome};
use crate::model::{eval, Env, EvalError, OracleTable, TriBool};
use crate::syntax::{Formula, Term, Var};
use crate::Nat;

/// The output variable `y`; inputs are `x1..xn`.
pub const Y: Var = 0;

/// A compiled program: `formula` has free variables `x1..xn, y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepFormula {
    pub program: Program,
    pub arity: usize,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepError {
    #[error("program uses rec; call eliminate_rec first")]
    ContainsRec,
    #[error(transparent)]
    Program(#[from] ProgramError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("program did not halt within the fuel")]
    Diverges,
}

/// Compiles `p` with `x_i = Var(i)`, `y = Var(0)`.
pub fn compile(p: &Program) -> Result<RepFormula, RepError> {
    let n = arity(p)?;
    if p.contains_rec() {
        return Err(RepError::ContainsRec);
    }
    let args: Vec<Term> = (1..=n as Var).map(Term::Var).collect();
    let mut fresh = n as Var + 1;
    let formula = compile_with(p, &args, &Term::Var(Y), &mut fresh);
    Ok(RepFormula { program: p.clone(), arity: n, formula })
}

fn take(fresh: &mut Var) -> Var {
    *fresh += 1;
    *fresh - 1
}

/// The formula for `p` with the given input and output terms. Bound
/// variables come from `fresh`, which must exceed every variable of the
/// terms.
pub fn compile_with(p: &Program, args: &[Term], out: &Term, fresh: &mut Var) -> Formula {
    let a = |i: usize| args[i].clone();
    match p {
        Program::Proj(_, i) => Formula::eq(out.clone(), a(i - 1)),
        Program::Zero(_) => Formula::eq(out.clone(), Term::Zero),
        Program::Succ => Formula::eq(out.clone(), Term::succ(a(0))),
        Program::Add => Formula::eq(out.clone(), Term::add(a(0), a(1))),
        Program::Mul => Formula::eq(out.clone(), Term::mul(a(0), a(1))),
        Program::ChiLeq => {
            let (u1, u2) = (take(fresh), take(fresh));
            Formula::or(
                Formula::and(Formula::leq(a(0), a(1), u1), Formula::eq(out.clone(), Term::lit(1u32))),
                Formula::and(Formula::lt(a(1), a(0), u2), Formula::eq(out.clone(), Term::lit(0u32))),
            )
        }
        Program::Comp { h, gs, .. } => {
            let ws: Vec<Var> = gs.iter().map(|_| take(fresh)).collect();
            let mut parts: Vec<Formula> =
                gs.iter().zip(&ws).map(|(g, w)| compile_with(g, args, &Term::Var(*w), fresh)).collect();
            let wt: Vec<Term> = ws.iter().map(|w| Term::Var(*w)).collect();
            parts.push(compile_with(h, &wt, out, fresh));
            ws.iter().rev().fold(Formula::conj(parts), |f, w| Formula::exists(*w, f))
        }
        Program::Mu(_, g) => {
            let (z, w, u) = (take(fresh), take(fresh), take(fresh));
            let mut before: Vec<Term> = args.to_vec();
            before.push(Term::Var(z));
            let nonzero = compile_with(g, &before, &Term::succ(Term::Var(w)), fresh);
            let mut at: Vec<Term> = args.to_vec();
            at.push(out.clone());
            let zero = compile_with(g, &at, &Term::Zero, fresh);
            Formula::and(
                Formula::forall(
                    z,
                    Formula::implies(Formula::lt(Term::Var(z), out.clone(), u), Formula::exists(w, nonzero)),
                ),
                zero,
            )
        }
        Program::Rec(..) => unreachable!("rejected by compile"),
    }
}

fn env_for(args: &[Nat], q: Option<&Nat>) -> Env {
    let mut env: Env = args.iter().enumerate().map(|(i, a)| (i as Var + 1, a.clone())).collect();
    if let Some(q) = q {
        env.insert(Y, q.clone());
    }
    env
}

/// Whether `A[args, q]` holds in ℕ (up to `cap`).
pub fn check_weak_representation(p: &Program, args: &[Nat], q: &Nat, cap: &Nat) -> Result<TriBool, RepError> {
    let rep = compile(p)?;
    if args.len() != rep.arity {
        return Err(ProgramError::ArgCount { expected: rep.arity, got: args.len() }.into());
    }
    Ok(eval(&rep.formula, &env_for(args, Some(q)), cap, &OracleTable::new())?)
}

/// `A[args̲, y]`.
pub fn instantiate(rep: &RepFormula, args: &[Nat]) -> Formula {
    args.iter().enumerate().fold(rep.formula.clone(), |f, (i, a)| f.replace_free(i as Var + 1, &Term::Lit(a.clone())))
}

fn value(p: &Program, args: &[Nat], fuel: u64) -> Result<Nat, RepError> {
    match run(p, args, fuel)? {
        RunOutcome::Value(v) => Ok(v),
        RunOutcome::FuelExhausted => Err(RepError::Diverges),
    }
}

/// `∀y (A[args̲, y] ⇔ y = f(args)̲)`.
pub fn strong_rep_formula(p: &Program, args: &[Nat], fuel: u64) -> Result<Formula, RepError> {
    let rep = compile(p)?;
    let v = value(p, args, fuel)?;
    Ok(Formula::forall(Y, Formula::iff(instantiate(&rep, args), Formula::eq(Term::Var(Y), Term::Lit(v)))))
}

/// [`strong_rep_formula`] with `y` restricted to `y ≤ bound`.
pub fn strong_rep_bounded(p: &Program, args: &[Nat], bound: u64, fuel: u64) -> Result<Formula, RepError> {
    let rep = compile(p)?;
    let v = value(p, args, fuel)?;
    let a = instantiate(&rep, args);
    let u = a.all_vars().into_iter().max().map_or(1, |m| m + 1);
    let body = Formula::iff(a, Formula::eq(Term::Var(Y), Term::Lit(v)));
    Ok(crate::model::bounded_forall(Y, Term::lit(bound), false, u, body))
}

/// `∃y A[args̲, y]`: true in ℕ iff `p` halts on `args`.
pub fn to_halting_formula(p: &Program, args: &[Nat]) -> Result<Formula, RepError> {
    let rep = compile(p)?;
    if args.len() != rep.arity {
        return Err(ProgramError::ArgCount { expected: rep.arity, got: args.len() }.into());
    }
    Ok(Formula::exists(Y, instantiate(&rep, args)))
}

/// Twenty Rec-free programs: primitives, compositions and minimizations.
pub fn corpus() -> Vec<(&'static str, Program)> {
    use crate::computability::{corpus::identity_mu, helpers};
    use Program::*;
    let comp = |n: usize, h: Program, gs: Vec<Program>| Program::Comp { n, m: gs.len(), h: Box::new(h), gs };
    let p = |n: usize, i: usize| Proj(n, i);
    let double = comp(1, Add, vec![p(1, 1), p(1, 1)]);
    let three = comp(1, Succ, vec![comp(1, Succ, vec![comp(1, Succ, vec![Zero(1)])])]);
    vec![
        ("zero", Zero(1)),
        ("succ", Succ),
        ("add", Add),
        ("mul", Mul),
        ("chileq", ChiLeq),
        ("first-of-two", p(2, 1)),
        ("second-of-three", p(3, 2)),
        ("identity-mu", identity_mu()),
        ("double", double.clone()),
        ("square", comp(1, Mul, vec![p(1, 1), p(1, 1)])),
        ("plus-two", comp(1, Succ, vec![comp(1, Succ, vec![p(1, 1)])])),
        ("monus", helpers::monus()),
        ("three", three),
        ("mul-plus-one", comp(2, Succ, vec![comp(2, Mul, vec![p(2, 1), p(2, 2)])])),
        ("is-zero", helpers::not()),
        ("not-equal", helpers::ne()),
        // least h with x < 2h + 2
        (
            "half",
            Program::mu(
                1,
                comp(
                    2,
                    ChiLeq,
                    vec![comp(2, Succ, vec![comp(2, Succ, vec![comp(2, Add, vec![p(2, 2), p(2, 2)])])]), p(2, 1)],
                ),
            ),
        ),
        // least r with x < (r+1)^2
        (
            "isqrt",
            Program::mu(
                1,
                comp(
                    2,
                    ChiLeq,
                    vec![comp(2, Mul, vec![comp(2, Succ, vec![p(2, 2)]), comp(2, Succ, vec![p(2, 2)])]), p(2, 1)],
                ),
            ),
        ),
        // least m with x ≤ m and y ≤ m
        (
            "max",
            Program::mu(
                2,
                comp(
                    3,
                    helpers::not(),
                    vec![comp(
                        3,
                        Mul,
                        vec![comp(3, ChiLeq, vec![p(3, 1), p(3, 3)]), comp(3, ChiLeq, vec![p(3, 2), p(3, 3)])],
                    )],
                ),
            ),
        ),
        ("double-plus-x", comp(1, Add, vec![double, p(1, 1)])),
    ]
}

/// The minimizations of [`corpus`].
pub fn mu_corpus() -> Vec<(&'static str, Program)> {
    corpus().into_iter().filter(|(_, p)| matches!(p, Program::Mu(..))).collect()
}
