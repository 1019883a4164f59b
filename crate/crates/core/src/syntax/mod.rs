//! Terms and formulas of first-order arithmetic, with numeral literals and
//! the three oracle predicates used by the diagonal constructions.

mod articulated;

pub use articulated::{Articulate, Category, Label, ShapeError, Symbol, Tree};

use std::collections::BTreeSet;

use crate::Nat;

/// Variable index. `x0`, `x1`, ... in the text format.
pub type Var = u64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    Succ(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Var(Var),
    /// `Lit(n)` stands for S(S(...S(0))) with n successors.
    Lit(Nat),
}

/// Oracle-defined predicate symbols.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pred {
    /// `Proof[y, x, b]`: b is the result of the proof predicate on codes y, x.
    Proof,
    /// `Sub[n, p, m]`: m is the code of the formula coded by n with the numeral p substituted.
    Sub,
    /// `Neg[n, m]`: m is the code of the negation of the formula coded by n.
    Neg,
}

impl Pred {
    pub const ALL: [Pred; 3] = [Pred::Proof, Pred::Sub, Pred::Neg];

    pub fn arity(self) -> usize {
        match self {
            Pred::Proof | Pred::Sub => 3,
            Pred::Neg => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Pred::Proof => "Proof",
            Pred::Sub => "Sub",
            Pred::Neg => "Neg",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Bottom,
    Implies(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
    Pred(Pred, Vec<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("substituted term must be closed, found free variable x{0}")]
    OpenTerm(Var),
    #[error("predicate {name} takes {expected} arguments, got {got}")]
    PredArity { name: &'static str, expected: usize, got: usize },
}

pub fn numeral(n: impl Into<Nat>) -> Term {
    Term::Lit(n.into())
}

impl Term {
    pub fn var(i: Var) -> Term {
        Term::Var(i)
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn lit(n: impl Into<Nat>) -> Term {
        Term::Lit(n.into())
    }

    pub fn vars_into(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Zero | Term::Lit(_) => {}
            Term::Var(i) => {
                out.insert(*i);
            }
            Term::Succ(t) => t.vars_into(out),
            Term::Add(a, b) | Term::Mul(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = BTreeSet::new();
        self.vars_into(&mut s);
        s
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Zero | Term::Lit(_) => true,
            Term::Var(_) => false,
            Term::Succ(t) => t.is_closed(),
            Term::Add(a, b) | Term::Mul(a, b) => a.is_closed() && b.is_closed(),
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        match self {
            Term::Zero | Term::Lit(_) => false,
            Term::Var(i) => *i == v,
            Term::Succ(t) => t.contains_var(v),
            Term::Add(a, b) | Term::Mul(a, b) => a.contains_var(v) || b.contains_var(v),
        }
    }

    /// Replaces every occurrence of `v` by `t`. Terms have no binders, so
    /// this is plain tree replacement.
    pub fn replace(&self, v: Var, t: &Term) -> Term {
        match self {
            Term::Var(i) if *i == v => t.clone(),
            Term::Zero | Term::Lit(_) | Term::Var(_) => self.clone(),
            Term::Succ(a) => Term::succ(a.replace(v, t)),
            Term::Add(a, b) => Term::add(a.replace(v, t), b.replace(v, t)),
            Term::Mul(a, b) => Term::mul(a.replace(v, t), b.replace(v, t)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Zero | Term::Lit(_) | Term::Var(_) => 1,
            Term::Succ(t) => 1 + t.size(),
            Term::Add(a, b) | Term::Mul(a, b) => 1 + a.size() + b.size(),
        }
    }

    fn max_var(&self) -> Option<Var> {
        self.vars().into_iter().next_back()
    }
}

/// Replaces literals `n <= cap` by their successor chains. The flag reports
/// whether some larger literal was left alone.
pub fn expand_numeral(t: &Term, cap: u64) -> (Term, bool) {
    let mut left = false;
    let out = expand_term(t, cap, &mut left);
    (out, left)
}

fn expand_term(t: &Term, cap: u64, left: &mut bool) -> Term {
    match t {
        Term::Lit(n) => match n.to_u64() {
            Some(k) if k <= cap => (0..k).fold(Term::Zero, |acc, _| Term::succ(acc)),
            _ => {
                *left = true;
                t.clone()
            }
        },
        Term::Zero | Term::Var(_) => t.clone(),
        Term::Succ(a) => Term::succ(expand_term(a, cap, left)),
        Term::Add(a, b) => Term::add(expand_term(a, cap, left), expand_term(b, cap, left)),
        Term::Mul(a, b) => Term::mul(expand_term(a, cap, left), expand_term(b, cap, left)),
    }
}

/// [`expand_numeral`] lifted to formulas.
pub fn expand_numerals_in(f: &Formula, cap: u64) -> (Formula, bool) {
    let mut left = false;
    let out = f.map_terms(&mut |t| expand_term(t, cap, &mut left));
    (out, left)
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn forall(v: Var, a: Formula) -> Formula {
        Formula::Forall(v, Box::new(a))
    }

    pub fn exists(v: Var, a: Formula) -> Formula {
        Formula::Exists(v, Box::new(a))
    }

    /// `(A ⇒ B) ∧ (B ⇒ A)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    /// `¬⊥`, the empty conjunction.
    pub fn top() -> Formula {
        Formula::not(Formula::Bottom)
    }

    pub fn pred(p: Pred, args: Vec<Term>) -> Result<Formula, SyntaxError> {
        if args.len() != p.arity() {
            return Err(SyntaxError::PredArity { name: p.name(), expected: p.arity(), got: args.len() });
        }
        Ok(Formula::Pred(p, args))
    }

    /// `s ≤ t`, i.e. `∃u (u + s = t)`. `u` must not occur in `s` or `t`.
    pub fn leq(s: Term, t: Term, u: Var) -> Formula {
        debug_assert!(!s.contains_var(u) && !t.contains_var(u));
        Formula::exists(u, Formula::eq(Term::add(Term::Var(u), s), t))
    }

    /// `s < t`, i.e. `S(s) ≤ t`.
    pub fn lt(s: Term, t: Term, u: Var) -> Formula {
        Formula::leq(Term::succ(s), t, u)
    }

    /// Conjunction of a list, left-nested; `¬⊥` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::top(),
            Some(first) => it.fold(first, Formula::and),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.free_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_into(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Eq(a, b) => {
                for v in a.vars().into_iter().chain(b.vars()) {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Formula::Bottom => {}
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.free_into(bound, out);
                b.free_into(bound, out);
            }
            Formula::Not(a) => a.free_into(bound, out),
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                bound.push(*v);
                a.free_into(bound, out);
                bound.pop();
            }
            Formula::Pred(_, args) => {
                for t in args {
                    for v in t.vars() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
            }
        }
    }

    pub fn is_free(&self, v: Var) -> bool {
        match self {
            Formula::Eq(a, b) => a.contains_var(v) || b.contains_var(v),
            Formula::Bottom => false,
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => a.is_free(v) || b.is_free(v),
            Formula::Not(a) => a.is_free(v),
            Formula::Forall(u, a) | Formula::Exists(u, a) => *u != v && a.is_free(v),
            Formula::Pred(_, args) => args.iter().any(|t| t.contains_var(v)),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable index occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.walk_vars(&mut out);
        out
    }

    fn walk_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Eq(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
            Formula::Bottom => {}
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.walk_vars(out);
                b.walk_vars(out);
            }
            Formula::Not(a) => a.walk_vars(out),
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                out.insert(*v);
                a.walk_vars(out);
            }
            Formula::Pred(_, args) => args.iter().for_each(|t| t.vars_into(out)),
        }
    }

    /// Smallest index that occurs nowhere in the formula.
    pub fn fresh_var(&self) -> Var {
        self.all_vars().into_iter().next_back().map_or(0, |m| m + 1)
    }

    /// No oracle predicate anywhere.
    pub fn is_pure(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::Bottom => true,
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => a.is_pure() && b.is_pure(),
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.is_pure(),
            Formula::Pred(..) => false,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(a, b) => 1 + a.size() + b.size(),
            Formula::Bottom => 1,
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 2 + a.size(),
            Formula::Pred(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Applies `f` to every maximal term, leaving binders alone.
    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(f(a), f(b)),
            Formula::Bottom => Formula::Bottom,
            Formula::Implies(a, b) => Formula::implies(a.map_terms(f), b.map_terms(f)),
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::Not(a) => Formula::not(a.map_terms(f)),
            Formula::Forall(v, a) => Formula::forall(*v, a.map_terms(f)),
            Formula::Exists(v, a) => Formula::exists(*v, a.map_terms(f)),
            Formula::Pred(p, args) => Formula::Pred(*p, args.iter().map(f).collect()),
        }
    }

    /// Replaces the free occurrences of `v` by `t` without any capture check.
    ///
    /// Callers guarantee that no variable of `t` is bound at an occurrence
    /// of `v`; closed terms and `t = S(v)` are always safe.
    pub fn replace_free(&self, v: Var, t: &Term) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(a.replace(v, t), b.replace(v, t)),
            Formula::Bottom => Formula::Bottom,
            Formula::Implies(a, b) => Formula::implies(a.replace_free(v, t), b.replace_free(v, t)),
            Formula::And(a, b) => Formula::and(a.replace_free(v, t), b.replace_free(v, t)),
            Formula::Or(a, b) => Formula::or(a.replace_free(v, t), b.replace_free(v, t)),
            Formula::Not(a) => Formula::not(a.replace_free(v, t)),
            Formula::Forall(u, _) | Formula::Exists(u, _) if *u == v => self.clone(),
            Formula::Forall(u, a) => Formula::forall(*u, a.replace_free(v, t)),
            Formula::Exists(u, a) => Formula::exists(*u, a.replace_free(v, t)),
            Formula::Pred(p, args) => Formula::Pred(*p, args.iter().map(|a| a.replace(v, t)).collect()),
        }
    }

    /// Renames free `v` to `w`. Requires `w` not bound anywhere in `self`.
    pub fn rename_free(&self, v: Var, w: Var) -> Formula {
        self.replace_free(v, &Term::Var(w))
    }
}

/// Substitutes the closed term `t` for the free occurrences of `v`.
pub fn substitute(f: &Formula, v: Var, t: &Term) -> Result<Formula, SyntaxError> {
    if let Some(u) = t.max_var() {
        return Err(SyntaxError::OpenTerm(u));
    }
    Ok(f.replace_free(v, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: Var) -> Term {
        Term::Var(i)
    }

    #[test]
    fn substitute_examples() {
        let f = Formula::eq(x(0), Term::Zero);
        assert_eq!(substitute(&f, 0, &numeral(3)).unwrap(), Formula::eq(numeral(3), Term::Zero));

        let g = Formula::forall(0, Formula::eq(x(0), x(0)));
        assert_eq!(substitute(&g, 0, &numeral(2)).unwrap(), g);

        let h = Formula::exists(1, Formula::eq(x(0), x(1)));
        let one = Term::succ(Term::Zero);
        assert_eq!(substitute(&h, 0, &one).unwrap(), Formula::exists(1, Formula::eq(one.clone(), x(1))));

        assert_eq!(substitute(&f, 0, &x(2)), Err(SyntaxError::OpenTerm(2)));
    }

    #[test]
    fn numerals_and_expansion() {
        assert_eq!(numeral(0), Term::Lit(Nat::from(0)));
        let big = Nat::from(1) << 64u32;
        assert_eq!(numeral(big.clone()), Term::Lit(big));

        assert_eq!(expand_numeral(&numeral(2), 10), (Term::succ(Term::succ(Term::Zero)), false));
        assert_eq!(expand_numeral(&numeral(0), 10), (Term::Zero, false));
        assert_eq!(expand_numeral(&numeral(100), 10), (numeral(100), true));
    }

    #[test]
    fn free_variables() {
        let f = Formula::and(
            Formula::exists(1, Formula::eq(x(0), x(1))),
            Formula::Pred(Pred::Sub, vec![x(1), x(2), Term::Zero]),
        );
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(!f.is_pure());
        assert_eq!(f.fresh_var(), 3);
        assert!(Formula::leq(x(0), x(1), 2).is_pure());
    }

    #[test]
    fn pred_arity_checked() {
        assert!(Formula::pred(Pred::Neg, vec![Term::Zero]).is_err());
        assert!(Formula::pred(Pred::Neg, vec![Term::Zero, Term::Zero]).is_ok());
    }
}
