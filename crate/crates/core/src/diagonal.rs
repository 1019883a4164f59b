//! Substitution and negation on codes, the oracles that interpret `Sub`,
//! `Neg` and `Proof`, and the fixed-point construction with its named
//! instances.

use crate::calculus::{bew_formula, proof_predicate, Theory};
use crate::model::{Cands, Oracle, OracleTable};
use crate::numbering::{cantor_pair, cantor_unpair, code_bits_bound, decode_as, godel_number, DecodeError};
use crate::syntax::{Articulate, Formula, Pred, Symbol, Term, Var};
use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodeError {
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("formula has {0} free variables; substitution needs at most one")]
    TooManyFree(usize),
}

/// `⌜A⌝, p ↦ ⌜A[p̲/x]⌝` where `x` is the free variable of `A`; a closed `A`
/// is returned unchanged.
pub fn sub_on_codes(n: &Nat, p: &Nat) -> Result<Nat, CodeError> {
    let a: Formula = decode_as(n)?;
    let free = a.free_vars();
    match free.len() {
        0 => Ok(n.clone()),
        1 => {
            let x = *free.first().expect("one variable");
            Ok(godel_number(&a.replace_free(x, &Term::Lit(p.clone()))))
        }
        k => Err(CodeError::TooManyFree(k)),
    }
}

/// `⌜A⌝ ↦ ⌜¬A⌝`.
pub fn neg_on_codes(n: &Nat) -> Result<Nat, CodeError> {
    decode_as::<Formula>(n)?;
    Ok(neg_code_unchecked(n))
}

fn neg_code_unchecked(n: &Nat) -> Nat {
    cantor_pair(&Nat::from(Symbol::Not.code()), &cantor_pair(n, &Nat::new()))
}

struct SubOracle;

impl Oracle for SubOracle {
    fn holds(&self, a: &[Nat]) -> bool {
        sub_on_codes(&a[0], &a[1]).is_ok_and(|m| m == a[2])
    }

    fn candidates(&self, known: &[Option<Nat>], pos: usize, _cap: &Nat) -> Cands {
        match (pos, &known[0], &known[1]) {
            (2, Some(n), Some(p)) => sub_on_codes(n, p).map_or_else(|_| Cands::none(), Cands::one),
            _ => Cands::Any,
        }
    }
}

struct NegOracle;

impl Oracle for NegOracle {
    fn holds(&self, a: &[Nat]) -> bool {
        neg_on_codes(&a[0]).is_ok_and(|m| m == a[1])
    }

    fn candidates(&self, known: &[Option<Nat>], pos: usize, _cap: &Nat) -> Cands {
        match (pos, &known[0], &known[1]) {
            (1, Some(n), _) => neg_on_codes(n).map_or_else(|_| Cands::none(), Cands::one),
            (0, _, Some(m)) => {
                // m = ⌜not⌝ ; (n ; 0)
                let inner =
                    cantor_unpair(m).filter(|(h, _)| *h == Symbol::Not.code()).and_then(|(_, r)| cantor_unpair(&r));
                match inner {
                    Some((n, z)) if z == 0 && decode_as::<Formula>(&n).is_ok() => Cands::one(n),
                    _ => Cands::none(),
                }
            }
            _ => Cands::Any,
        }
    }
}

struct ProofOracle(Theory);

impl Oracle for ProofOracle {
    fn holds(&self, a: &[Nat]) -> bool {
        let bit = u8::from(proof_predicate(&a[0], &a[1], self.0));
        a[2] == bit
    }

    fn candidates(&self, known: &[Option<Nat>], pos: usize, cap: &Nat) -> Cands {
        let one = Nat::from(1);
        match (pos, &known[0], &known[1], &known[2]) {
            (2, Some(y), Some(x), _) => Cands::one(Nat::from(u8::from(proof_predicate(y, x, self.0)))),
            (1, Some(y), _, Some(b)) if *b == 1 => match cantor_unpair(y) {
                Some((x, _)) if proof_predicate(y, &x, self.0) => Cands::one(x),
                _ => Cands::none(),
            },
            // Proofs of x are among x ; r for r = 0, 1, ...
            (0, _, Some(x), Some(b)) if *b == one => {
                let mut found = std::collections::BTreeSet::new();
                let mut r = Nat::new();
                loop {
                    let y = cantor_pair(x, &r);
                    if y > *cap {
                        break;
                    }
                    if proof_predicate(&y, x, self.0) {
                        found.insert(y);
                    }
                    r += 1;
                }
                Cands::Capped(found)
            }
            (_, _, _, Some(b)) if *b > 1 => Cands::none(),
            _ => Cands::Any,
        }
    }
}

/// `Sub`, `Neg` and `Proof` (for `theory`) as host relations.
pub fn standard_oracles(theory: Theory) -> OracleTable {
    OracleTable::new().with(Pred::Sub, SubOracle).with(Pred::Neg, NegOracle).with(Pred::Proof, ProofOracle(theory))
}

/// Bit-length bound above which the diagonal identity is not computed.
pub const IDENTITY_BITS_LIMIT: u128 = 1 << 30;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Identity {
    /// `⌜G⌝ = sub(⌜E⌝, ⌜E⌝)`, computed on both sides.
    Verified { bits: u64 },
    /// `⌜G⌝` would have up to `bound` bits; not materialized.
    Skipped { bound: u128 },
}

#[derive(Clone, Debug)]
pub struct FixpointResult {
    pub c: Formula,
    /// The free variable of `C`.
    pub x: Var,
    pub d: Formula,
    pub e: Formula,
    /// The free variable of `E`.
    pub w: Var,
    pub e_code: Nat,
    pub g: Formula,
    pub g_code: Option<Nat>,
    pub identity: Identity,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FixpointError {
    #[error("C must have exactly one free variable, has {0}")]
    FreeVariables(usize),
    #[error("P must be closed")]
    OpenP,
    #[error("diagonal identity failed")]
    IdentityFailed,
}

/// `D = ∃z (C[z] ∧ Sub[a, b, z])`, `E = D[w, w]`, `G = E[⌜E⌝]`, and the check
/// `⌜G⌝ = sub(⌜E⌝, ⌜E⌝)` unless `⌜G⌝` is too large to build.
pub fn fixpoint(c: &Formula) -> Result<FixpointResult, FixpointError> {
    let free = c.free_vars();
    if free.len() != 1 {
        return Err(FixpointError::FreeVariables(free.len()));
    }
    let x = *free.first().expect("one variable");
    let not_free = |skip: &[Var]| (0..).find(|v| !free.contains(v) && !skip.contains(v)).expect("unbounded");
    let w = not_free(&[]);
    let z = c.all_vars().into_iter().chain([w]).max().expect("nonempty") + 1;
    let b = not_free(&[w, z]);
    let cz = c.rename_free(x, z);
    let sub = |a: Var, b: Var| Formula::Pred(Pred::Sub, vec![Term::Var(a), Term::Var(b), Term::Var(z)]);
    let d = Formula::exists(z, Formula::and(cz.clone(), sub(w, b)));
    let e = Formula::exists(z, Formula::and(cz, sub(w, w)));
    let e_code = godel_number(&e);
    let g = e.replace_free(w, &Term::Lit(e_code.clone()));
    let bound = code_bits_bound(&g.to_tree());
    let (g_code, identity) = if bound <= IDENTITY_BITS_LIMIT {
        let lhs = godel_number(&g);
        let rhs = sub_on_codes(&e_code, &e_code).map_err(|_| FixpointError::IdentityFailed)?;
        if lhs != rhs {
            return Err(FixpointError::IdentityFailed);
        }
        let bits = u64::from(lhs.significant_bits());
        (Some(lhs), Identity::Verified { bits })
    } else {
        (None, Identity::Skipped { bound })
    };
    Ok(FixpointResult { c: c.clone(), x, d, e, w, e_code, g, g_code, identity })
}

/// `¬Bew[x0]`.
pub fn godel_sentence() -> FixpointResult {
    fixpoint(&Formula::not(bew_formula())).expect("one free variable")
}

/// `Bew[x0]`.
pub fn henkin_sentence() -> FixpointResult {
    fixpoint(&bew_formula()).expect("one free variable")
}

/// `Bew[x0] ⇒ P` for closed `P`.
pub fn loeb_sentence(p: &Formula) -> Result<FixpointResult, FixpointError> {
    if !p.is_closed() {
        return Err(FixpointError::OpenP);
    }
    fixpoint(&Formula::implies(bew_formula(), p.clone()))
}

/// `∀x1 (Proof[x1, x0, 1] ⇒ ∃x2 (x2 ≤ x1 ∧ ∃x3 (Neg[x0, x3] ∧ Proof[x2, x3, 1])))`.
pub fn rosser_condition() -> Formula {
    let v = Term::var;
    let proof = |a: Term, b: Term| Formula::Pred(Pred::Proof, vec![a, b, Term::lit(1u32)]);
    let refutation = Formula::exists(3, Formula::and(Formula::Pred(Pred::Neg, vec![v(0), v(3)]), proof(v(2), v(3))));
    Formula::forall(
        1,
        Formula::implies(proof(v(1), v(0)), Formula::exists(2, Formula::and(Formula::leq(v(2), v(1), 4), refutation))),
    )
}

pub fn rosser_sentence() -> FixpointResult {
    fixpoint(&rosser_condition()).expect("one free variable")
}

/// Conditions on `x0` whose fixed points the evaluator can decide.
pub fn decidable_conditions() -> Vec<(&'static str, Formula)> {
    let (x0, x1) = (Term::var(0), Term::var(1));
    vec![
        ("even", Formula::exists(1, Formula::eq(Term::add(x1.clone(), x1.clone()), x0.clone()))),
        ("tautology", Formula::eq(x0.clone(), x0.clone())),
        ("odd", Formula::exists(1, Formula::eq(Term::succ(Term::add(x1.clone(), x1.clone())), x0.clone()))),
        ("multiple-of-3", Formula::exists(1, Formula::eq(Term::mul(x1.clone(), Term::lit(3u32)), x0.clone()))),
        ("nonzero", Formula::exists(1, Formula::eq(Term::succ(x1), x0))),
    ]
}

/// `C[⌜G⌝]`: what `G` unfolds to once `Sub[⌜E⌝, ⌜E⌝, z]` is read as
/// `z = ⌜G⌝`. `None` when `⌜G⌝` was not materialized.
pub fn equiv_unfold(r: &FixpointResult) -> Option<Formula> {
    let code = r.g_code.as_ref()?;
    Some(r.c.replace_free(r.x, &Term::Lit(code.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::box_;
    use crate::model::{eval, Env, TriBool};
    use crate::numbering::reflect;
    use crate::syntax::substitute;

    #[test]
    fn substitution_on_codes() {
        let f = Formula::eq(Term::var(0), Term::var(0));
        let five = Formula::eq(Term::lit(5u32), Term::lit(5u32));
        assert_eq!(sub_on_codes(&godel_number(&f), &Nat::from(5)), Ok(godel_number(&five)));
        let closed = Formula::Bottom;
        assert_eq!(sub_on_codes(&godel_number(&closed), &Nat::from(9)), Ok(godel_number(&closed)));
        let two = Formula::eq(Term::var(0), Term::var(1));
        assert_eq!(sub_on_codes(&godel_number(&two), &Nat::from(1)), Err(CodeError::TooManyFree(2)));
        assert!(sub_on_codes(&Nat::from(0), &Nat::from(1)).is_err());
    }

    #[test]
    fn negation_on_codes() {
        let bot = godel_number(&Formula::Bottom);
        assert_eq!(neg_on_codes(&bot), Ok(godel_number(&Formula::top())));
        let twice = neg_on_codes(&neg_on_codes(&bot).unwrap()).unwrap();
        assert_eq!(twice, godel_number(&Formula::not(Formula::top())));
    }

    #[test]
    fn godel_shape_and_identity() {
        let r = godel_sentence();
        assert_eq!(r.x, 0);
        assert_eq!(r.w, 1);
        let Formula::Exists(z, body) = &r.g else { panic!("shape") };
        let Formula::And(c, s) = &**body else { panic!("shape") };
        assert_eq!(**c, Formula::not(bew_formula()).rename_free(0, *z));
        let lit = Term::Lit(r.e_code.clone());
        assert_eq!(**s, Formula::Pred(Pred::Sub, vec![lit.clone(), lit, Term::Var(*z)]));
        assert!(matches!(r.identity, Identity::Verified { .. }));
        assert_eq!(r.g, substitute(&r.e, r.w, &reflect(&r.e)).unwrap());
        assert_eq!(equiv_unfold(&r), Some(Formula::not(box_(&r.g))));
    }

    #[test]
    fn fixpoint_rejects() {
        assert_eq!(fixpoint(&Formula::Bottom).err(), Some(FixpointError::FreeVariables(0)));
        assert!(loeb_sentence(&Formula::eq(Term::var(3), Term::Zero)).is_err());
    }

    #[test]
    fn evenness_fixpoint() {
        let (_, even) = &decidable_conditions()[0];
        let r = fixpoint(even).unwrap();
        let code = r.g_code.clone().unwrap();
        let oracles = standard_oracles(Theory::PA);
        let v = eval(&r.g, &Env::new(), &Nat::from(100), &oracles).unwrap();
        assert_eq!(v, TriBool::from_bool(code.is_even()));
        let u = eval(&equiv_unfold(&r).unwrap(), &Env::new(), &Nat::from(100), &oracles).unwrap();
        assert_eq!(u, v);
    }
}
