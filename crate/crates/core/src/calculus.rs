//! A Hilbert-style deduction system for first-order arithmetic (Robinson's
//! Q, optionally with the induction schema), its two proof checkers — the
//! recursive one and the leftmost-redex rewriting machine — and the
//! generate-and-test proof search built on top of them.

use std::fmt;
use std::str::FromStr;

use crate::numbering::{cantor_pair, cantor_unpair, decode_as, encode, encode_bounded, godel_number, reflect};
use crate::syntax::{Articulate, Category, Formula, Label, Pred, ShapeError, Symbol, Term, Tree, Var};
use crate::Nat;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    EqRefl,
    EqSucc,
    EqAdd,
    EqMul,
    EqEq,
    Lit,
    K,
    S,
    AndI,
    AndL,
    AndR,
    OrL,
    OrR,
    OrE,
    NotI,
    NotE,
    Dne,
    Inst,
    Witness,
    AllDist,
    ExElim,
    Q1,
    Q2,
    Q3,
    Q4,
    Q5,
    Q6,
    Q7,
    Ind,
    Mp,
    Gen,
}

impl Rule {
    pub const ALL: [Rule; 31] = [
        Rule::EqRefl,
        Rule::EqSucc,
        Rule::EqAdd,
        Rule::EqMul,
        Rule::EqEq,
        Rule::Lit,
        Rule::K,
        Rule::S,
        Rule::AndI,
        Rule::AndL,
        Rule::AndR,
        Rule::OrL,
        Rule::OrR,
        Rule::OrE,
        Rule::NotI,
        Rule::NotE,
        Rule::Dne,
        Rule::Inst,
        Rule::Witness,
        Rule::AllDist,
        Rule::ExElim,
        Rule::Q1,
        Rule::Q2,
        Rule::Q3,
        Rule::Q4,
        Rule::Q5,
        Rule::Q6,
        Rule::Q7,
        Rule::Ind,
        Rule::Mp,
        Rule::Gen,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn tag(self) -> &'static str {
        match self {
            Rule::EqRefl => "ax-eq-refl",
            Rule::EqSucc => "ax-eq-succ",
            Rule::EqAdd => "ax-eq-add",
            Rule::EqMul => "ax-eq-mul",
            Rule::EqEq => "ax-eq-eq",
            Rule::Lit => "ax-lit",
            Rule::K => "ax-k",
            Rule::S => "ax-s",
            Rule::AndI => "ax-and-i",
            Rule::AndL => "ax-and-l",
            Rule::AndR => "ax-and-r",
            Rule::OrL => "ax-or-l",
            Rule::OrR => "ax-or-r",
            Rule::OrE => "ax-or-e",
            Rule::NotI => "ax-not-i",
            Rule::NotE => "ax-not-e",
            Rule::Dne => "ax-dne",
            Rule::Inst => "ax-inst",
            Rule::Witness => "ax-witness",
            Rule::AllDist => "ax-all-dist",
            Rule::ExElim => "ax-ex-elim",
            Rule::Q1 => "ax-q1",
            Rule::Q2 => "ax-q2",
            Rule::Q3 => "ax-q3",
            Rule::Q4 => "ax-q4",
            Rule::Q5 => "ax-q5",
            Rule::Q6 => "ax-q6",
            Rule::Q7 => "ax-q7",
            Rule::Ind => "ax-ind",
            Rule::Mp => "mp",
            Rule::Gen => "gen",
        }
    }

    pub fn from_tag(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.tag() == s)
    }

    /// Number of premises the rule takes.
    pub fn premises(self) -> usize {
        match self {
            Rule::Mp => 2,
            Rule::Gen => 1,
            _ => 0,
        }
    }

    pub fn is_axiom(self) -> bool {
        self.premises() == 0
    }

    pub fn in_theory(self, theory: Theory) -> bool {
        self != Rule::Ind || theory == Theory::PA
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub enum Theory {
    Q,
    #[default]
    PA,
}

impl FromStr for Theory {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "q" => Ok(Theory::Q),
            "pa" => Ok(Theory::PA),
            _ => Err(format!("unknown theory {s:?} (expected q or pa)")),
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theory::Q => "q",
            Theory::PA => "pa",
        })
    }
}

/// `A(π1, ..., πn)`: a conclusion, the rule used, and the subproofs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProofTree {
    pub conclusion: Formula,
    pub rule: Rule,
    pub premises: Vec<ProofTree>,
}

impl ProofTree {
    pub fn axiom(rule: Rule, conclusion: Formula) -> ProofTree {
        ProofTree { conclusion, rule, premises: vec![] }
    }

    /// Modus ponens; the conclusion is read off the major premise `A ⇒ B`
    /// (or `⊥` if it is not an implication, which will not check).
    pub fn mp(major: ProofTree, minor: ProofTree) -> ProofTree {
        let conclusion = match &major.conclusion {
            Formula::Implies(_, b) => (**b).clone(),
            _ => Formula::Bottom,
        };
        ProofTree { conclusion, rule: Rule::Mp, premises: vec![major, minor] }
    }

    pub fn gen(v: Var, p: ProofTree) -> ProofTree {
        ProofTree { conclusion: Formula::forall(v, p.conclusion.clone()), rule: Rule::Gen, premises: vec![p] }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::depth).max().unwrap_or(0)
    }
}

impl Articulate for ProofTree {
    const CATEGORY: Category = Category::Proof;

    fn to_tree(&self) -> Tree {
        let mut children = vec![Tree::nat(Symbol::Rule(self.rule).code())];
        children.extend(self.premises.iter().map(ProofTree::to_tree));
        Tree::Node { label: Label::Tree(Box::new(self.conclusion.to_tree())), children }
    }

    fn from_tree(t: &Tree) -> Result<Self, ShapeError> {
        let Tree::Node { label: Label::Tree(label), children } = t else {
            return Err(ShapeError("a proof node is labelled by its conclusion".into()));
        };
        let (tag, rest) = children.split_first().ok_or_else(|| ShapeError("proof node without rule tag".into()))?;
        let rule = match tag.as_u64().ok().and_then(|c| u32::try_from(c).ok()).and_then(Symbol::from_code) {
            Some(Symbol::Rule(r)) => r,
            _ => return Err(ShapeError("bad rule tag".into())),
        };
        Ok(ProofTree {
            conclusion: Formula::from_tree(label)?,
            rule,
            premises: rest.iter().map(ProofTree::from_tree).collect::<Result<_, _>>()?,
        })
    }
}

// --- schema matching ----------------------------------------------------

fn imp(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Implies(a, b) => Some((a, b)),
        _ => None,
    }
}

fn conj(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::And(a, b) => Some((a, b)),
        _ => None,
    }
}

fn disj(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Or(a, b) => Some((a, b)),
        _ => None,
    }
}

fn neg(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Not(a) => Some(a),
        _ => None,
    }
}

fn eq(f: &Formula) -> Option<(&Term, &Term)> {
    match f {
        Formula::Eq(a, b) => Some((a, b)),
        _ => None,
    }
}

fn all(f: &Formula) -> Option<(Var, &Formula)> {
    match f {
        Formula::Forall(v, a) => Some((*v, a)),
        _ => None,
    }
}

fn ex(f: &Formula) -> Option<(Var, &Formula)> {
    match f {
        Formula::Exists(v, a) => Some((*v, a)),
        _ => None,
    }
}

fn succ(t: &Term) -> Option<&Term> {
    match t {
        Term::Succ(a) => Some(a),
        _ => None,
    }
}

fn plus(t: &Term) -> Option<(&Term, &Term)> {
    match t {
        Term::Add(a, b) => Some((a, b)),
        _ => None,
    }
}

fn times(t: &Term) -> Option<(&Term, &Term)> {
    match t {
        Term::Mul(a, b) => Some((a, b)),
        _ => None,
    }
}

fn is_zero(t: &Term) -> bool {
    matches!(t, Term::Zero)
}

/// First subterm of `b` sitting where `a` has a free `v`.
fn aligned_term(a: &Term, v: Var, b: &Term) -> Option<Term> {
    match (a, b) {
        (Term::Var(x), _) if *x == v => Some(b.clone()),
        (Term::Succ(x), Term::Succ(y)) => aligned_term(x, v, y),
        (Term::Add(x1, x2), Term::Add(y1, y2)) | (Term::Mul(x1, x2), Term::Mul(y1, y2)) => {
            aligned_term(x1, v, y1).or_else(|| aligned_term(x2, v, y2))
        }
        _ => None,
    }
}

fn aligned(a: &Formula, v: Var, b: &Formula) -> Option<Term> {
    match (a, b) {
        (Formula::Eq(x1, x2), Formula::Eq(y1, y2)) => aligned_term(x1, v, y1).or_else(|| aligned_term(x2, v, y2)),
        (Formula::Implies(x1, x2), Formula::Implies(y1, y2))
        | (Formula::And(x1, x2), Formula::And(y1, y2))
        | (Formula::Or(x1, x2), Formula::Or(y1, y2)) => aligned(x1, v, y1).or_else(|| aligned(x2, v, y2)),
        (Formula::Not(x), Formula::Not(y)) => aligned(x, v, y),
        (Formula::Forall(u, _), _) | (Formula::Exists(u, _), _) if *u == v => None,
        (Formula::Forall(u, x), Formula::Forall(w, y)) | (Formula::Exists(u, x), Formula::Exists(w, y)) if u == w => {
            aligned(x, v, y)
        }
        (Formula::Pred(p, xs), Formula::Pred(q, ys)) if p == q => {
            xs.iter().zip(ys).find_map(|(x, y)| aligned_term(x, v, y))
        }
        _ => None,
    }
}

/// Whether `b = a[t/v]` for some closed term `t`.
pub fn is_closed_instance(a: &Formula, v: Var, b: &Formula) -> bool {
    match aligned(a, v, b) {
        Some(t) => t.is_closed() && a.replace_free(v, &t) == *b,
        None => a == b,
    }
}

/// `f` itself and every body under a prefix of universal quantifiers.
fn closure_bodies(f: &Formula) -> impl Iterator<Item = &Formula> {
    std::iter::successors(Some(f), |g| all(g).map(|(_, b)| b))
}

fn axiom_body(rule: Rule, f: &Formula) -> bool {
    use Rule as R;
    let m = || -> Option<bool> {
        Some(match rule {
            R::EqRefl => {
                let (a, b) = eq(f)?;
                a == b
            }
            R::EqSucc => {
                let (h, c) = imp(f)?;
                let (s, t) = eq(h)?;
                let (s2, t2) = eq(c)?;
                succ(s2)? == s && succ(t2)? == t
            }
            R::EqAdd | R::EqMul => {
                let op = if rule == R::EqAdd { plus } else { times };
                let (h1, r) = imp(f)?;
                let (h2, c) = imp(r)?;
                let (s1, t1) = eq(h1)?;
                let (s2, t2) = eq(h2)?;
                let (l, rr) = eq(c)?;
                op(l)? == (s1, s2) && op(rr)? == (t1, t2)
            }
            R::EqEq => {
                let (h1, r) = imp(f)?;
                let (h2, r) = imp(r)?;
                let (h3, c) = imp(r)?;
                eq(h3)? == (eq(h1)?.0, eq(h2)?.0) && eq(c)? == (eq(h1)?.1, eq(h2)?.1)
            }
            R::Lit => {
                let (l, r) = eq(f)?;
                let Term::Lit(n) = l else { return None };
                if *n == 0 {
                    is_zero(r)
                } else {
                    matches!(succ(r)?, Term::Lit(m) if Nat::from(m + 1) == *n)
                }
            }
            R::K => {
                let (a, r) = imp(f)?;
                imp(r)?.1 == a
            }
            R::S => {
                let (l, r) = imp(f)?;
                let (a, bc) = imp(l)?;
                let (b, c) = imp(bc)?;
                let (ab, ac) = imp(r)?;
                imp(ab)? == (a, b) && imp(ac)? == (a, c)
            }
            R::AndI => {
                let (a, r) = imp(f)?;
                let (b, c) = imp(r)?;
                conj(c)? == (a, b)
            }
            R::AndL | R::AndR => {
                let (h, c) = imp(f)?;
                let (a, b) = conj(h)?;
                c == if rule == R::AndL { a } else { b }
            }
            R::OrL | R::OrR => {
                let (h, c) = imp(f)?;
                let (a, b) = disj(c)?;
                h == if rule == R::OrL { a } else { b }
            }
            R::OrE => {
                let (ac, r) = imp(f)?;
                let (bc, r) = imp(r)?;
                let (aorb, c) = imp(r)?;
                let (a, b) = disj(aorb)?;
                imp(ac)? == (a, c) && imp(bc)? == (b, c)
            }
            R::NotI => {
                let (h, c) = imp(f)?;
                let (a, bot) = imp(h)?;
                *bot == Formula::Bottom && neg(c)? == a
            }
            R::NotE => {
                let (h, r) = imp(f)?;
                let a = neg(h)?;
                let (a2, bot) = imp(r)?;
                a2 == a && *bot == Formula::Bottom
            }
            R::Dne => {
                let (h, c) = imp(f)?;
                neg(neg(h)?)? == c
            }
            R::Inst => {
                let (h, c) = imp(f)?;
                let (v, a) = all(h)?;
                is_closed_instance(a, v, c)
            }
            R::Witness => {
                let (h, c) = imp(f)?;
                let (v, a) = ex(c)?;
                is_closed_instance(a, v, h)
            }
            R::AllDist => {
                let (h, r) = imp(f)?;
                let (v, ab) = all(h)?;
                let (a, b) = imp(ab)?;
                let (a2, vb) = imp(r)?;
                let (v2, b2) = all(vb)?;
                a2 == a && v2 == v && b2 == b && !a.is_free(v)
            }
            R::ExElim => {
                let (h, r) = imp(f)?;
                let (v, ab) = all(h)?;
                let (a, b) = imp(ab)?;
                let (va, b2) = imp(r)?;
                let (v2, a2) = ex(va)?;
                a2 == a && v2 == v && b2 == b && !b.is_free(v)
            }
            R::Q1 => {
                let (l, r) = eq(neg(f)?)?;
                succ(l).is_some() && is_zero(r)
            }
            R::Q2 => {
                let (h, c) = imp(f)?;
                let (l, r) = eq(h)?;
                eq(c)? == (succ(l)?, succ(r)?)
            }
            R::Q3 => {
                let (l, r) = disj(f)?;
                let (t, z) = eq(l)?;
                let (y, body) = ex(r)?;
                let (t2, sy) = eq(body)?;
                is_zero(z) && t2 == t && *succ(sy)? == Term::Var(y) && !t.contains_var(y)
            }
            R::Q4 => {
                let (l, r) = eq(f)?;
                let (t, z) = plus(l)?;
                is_zero(z) && t == r
            }
            R::Q5 => {
                let (l, r) = eq(f)?;
                let (s, st) = plus(l)?;
                let t = succ(st)?;
                plus(succ(r)?)? == (s, t)
            }
            R::Q6 => {
                let (l, r) = eq(f)?;
                let (_, z) = times(l)?;
                is_zero(z) && is_zero(r)
            }
            R::Q7 => {
                let (l, r) = eq(f)?;
                let (s, st) = times(l)?;
                let t = succ(st)?;
                let (st2, s2) = plus(r)?;
                s2 == s && times(st2)? == (s, t)
            }
            R::Ind => {
                let (base, r) = imp(f)?;
                let (step, concl) = imp(r)?;
                let (v, a) = all(concl)?;
                let (v2, a_to_next) = all(step)?;
                let (a2, next) = imp(a_to_next)?;
                v2 == v
                    && a2 == a
                    && *base == a.replace_free(v, &Term::Zero)
                    && *next == a.replace_free(v, &Term::succ(Term::Var(v)))
            }
            R::Mp | R::Gen => false,
        })
    };
    m().unwrap_or(false)
}

/// Whether `rule` licenses `conclusion` from the given premise conclusions
/// in `theory`. Axiom schemas also accept any universal closure of an
/// instance. This is the only rule table; both checkers consult it.
pub fn licenses(theory: Theory, rule: Rule, conclusion: &Formula, premises: &[&Formula]) -> bool {
    if !rule.in_theory(theory) || premises.len() != rule.premises() {
        return false;
    }
    match rule {
        Rule::Mp => imp(premises[0]).is_some_and(|(a, b)| a == premises[1] && b == conclusion),
        Rule::Gen => all(conclusion).is_some_and(|(_, a)| a == premises[0]),
        _ => closure_bodies(conclusion).any(|body| axiom_body(rule, body)),
    }
}

fn node_ok(pi: &ProofTree, theory: Theory) -> bool {
    let prem: Vec<&Formula> = pi.premises.iter().map(|p| &p.conclusion).collect();
    licenses(theory, pi.rule, &pi.conclusion, &prem)
}

/// The recursive reference checker.
pub fn check_direct(pi: &ProofTree, theory: Theory) -> bool {
    node_ok(pi, theory) && pi.premises.iter().all(|p| check_direct(p, theory))
}

// --- the rewriting machine ---------------------------------------------

/// Trees whose leaves are proofs or bits, joined by `and`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MachineTree<'a> {
    Bit(bool),
    Leaf(&'a ProofTree),
    And(Box<MachineTree<'a>>, Box<MachineTree<'a>>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MachineError {
    #[error("irreducible tree")]
    Irreducible,
}

impl<'a> MachineTree<'a> {
    pub fn leaf(pi: &'a ProofTree) -> Self {
        MachineTree::Leaf(pi)
    }

    pub fn and(a: MachineTree<'a>, b: MachineTree<'a>) -> Self {
        MachineTree::And(Box::new(a), Box::new(b))
    }

    pub fn bit(&self) -> Option<bool> {
        match self {
            MachineTree::Bit(b) => Some(*b),
            _ => None,
        }
    }

    pub fn is_irreducible(&self) -> bool {
        self.bit().is_some()
    }

    /// Termination measure: every step lowers `(proof leaves weighted by
    /// subproof size, and-nodes)` lexicographically — a proof leaf turns
    /// into leaves of strictly smaller total size plus `n − 1` and-nodes,
    /// and a bit conjunction removes one and-node.
    pub fn measure(&self) -> (usize, usize) {
        match self {
            MachineTree::Bit(_) => (0, 0),
            MachineTree::Leaf(p) => (p.size(), 0),
            MachineTree::And(a, b) => {
                let (x, y) = a.measure();
                let (u, w) = b.measure();
                (x + u, y + w + 1)
            }
        }
    }

    /// Contracts the leftmost redex in place; false if irreducible.
    fn step_mut(&mut self, theory: Theory) -> bool {
        match self {
            MachineTree::Bit(_) => false,
            MachineTree::Leaf(pi) => {
                let pi: &'a ProofTree = pi;
                *self = if !node_ok(pi, theory) {
                    MachineTree::Bit(false)
                } else {
                    let mut leaves = pi.premises.iter().map(MachineTree::Leaf);
                    match leaves.next() {
                        None => MachineTree::Bit(true),
                        Some(first) => leaves.fold(first, MachineTree::and),
                    }
                };
                true
            }
            MachineTree::And(a, b) => {
                if a.step_mut(theory) || b.step_mut(theory) {
                    return true;
                }
                let v = a.bit().expect("irreducible") && b.bit().expect("irreducible");
                *self = MachineTree::Bit(v);
                true
            }
        }
    }
}

/// One leftmost-redex step.
pub fn machine_step<'a>(t: &MachineTree<'a>, theory: Theory) -> Result<MachineTree<'a>, MachineError> {
    let mut t = t.clone();
    if t.step_mut(theory) {
        Ok(t)
    } else {
        Err(MachineError::Irreducible)
    }
}

/// Runs the machine from `leaf(π)`; returns the final bit and the number
/// of steps taken.
pub fn machine_run(pi: &ProofTree, theory: Theory) -> (bool, usize) {
    let mut t = MachineTree::leaf(pi);
    let mut steps = 0;
    while t.step_mut(theory) {
        steps += 1;
    }
    (t.bit().expect("irreducible"), steps)
}

pub fn machine_check(pi: &ProofTree, theory: Theory) -> bool {
    machine_run(pi, theory).0
}

// --- proofs as numbers and search ----------------------------------------

/// `proof(n, p)`: 1 iff `n` codes a proof accepted by the machine whose
/// conclusion is coded by `p`.
pub fn proof_predicate(n: &Nat, p: &Nat, theory: Theory) -> bool {
    // The conclusion's code is the head of the pair; check it before decoding.
    match cantor_unpair(n) {
        Some((head, _)) if head == *p => {}
        _ => return false,
    }
    match decode_as::<ProofTree>(n) {
        Ok(pi) => machine_check(&pi, theory),
        Err(_) => false,
    }
}

/// Every `x` with `proof_predicate(x, ⌜A⌝)` has the form `⌜A⌝ ; r`, and
/// pairing is increasing in `r`: the candidates below `fuel`, in order.
fn candidates(a: &Formula, fuel: &Nat) -> impl Iterator<Item = Nat> {
    let code = encode_bounded(&a.to_tree(), fuel);
    let fuel = fuel.clone();
    let mut r = Nat::new();
    std::iter::from_fn(move || {
        let code = code.as_ref()?;
        let x = cantor_pair(code, &r);
        r += 1;
        (x <= fuel).then_some(x)
    })
}

/// The least `x ≤ fuel` with `proof_predicate(x, ⌜A⌝) = 1`.
///
/// Only codes whose head is `⌜A⌝` can qualify, so only those are tested; the
/// result is the same as testing every `x` in `0..=fuel`
/// ([`search_proof_literal`]).
pub fn search_proof(a: &Formula, fuel: &Nat, theory: Theory) -> Option<Nat> {
    let target = godel_code_bounded(a, fuel)?;
    candidates(a, fuel).find(|x| proof_predicate(x, &target, theory))
}

fn godel_code_bounded(a: &Formula, bound: &Nat) -> Option<Nat> {
    encode_bounded(&a.to_tree(), bound)
}

/// [`search_proof`] by testing every natural up to `fuel`, for small fuel.
pub fn search_proof_literal(a: &Formula, fuel: u64, theory: Theory) -> Option<Nat> {
    let target = godel_number(a);
    (0..=fuel).map(Nat::from).find(|x| proof_predicate(x, &target, theory))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Proved(Nat),
    Refuted(Nat),
    NotFound,
}

/// Searches for a proof of `A` or of `¬A` in one scan of increasing codes.
pub fn decide_both(a: &Formula, fuel: &Nat, theory: Theory) -> Decision {
    let not_a = Formula::not(a.clone());
    let (ta, tn) = (godel_code_bounded(a, fuel), godel_code_bounded(&not_a, fuel));
    let mut xs = candidates(a, fuel).peekable();
    let mut ys = candidates(&not_a, fuel).peekable();
    loop {
        let take_a = match (xs.peek(), ys.peek()) {
            (None, None) => return Decision::NotFound,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(x), Some(y)) => x < y,
        };
        if take_a {
            let x = xs.next().expect("peeked");
            if proof_predicate(&x, ta.as_ref().expect("candidate"), theory) {
                return Decision::Proved(x);
            }
        } else {
            let y = ys.next().expect("peeked");
            if proof_predicate(&y, tn.as_ref().expect("candidate"), theory) {
                return Decision::Refuted(y);
            }
        }
    }
}

/// Whether some `x ≤ n` is a proof of `A`.
pub fn bounded_provable(a: &Formula, n: &Nat, theory: Theory) -> bool {
    search_proof(a, n, theory).is_some()
}

// --- provability formulas -----------------------------------------------

/// `Bew = ∃x1 Proof[x1, x0, 1]`, free in `x0`.
pub fn bew_formula() -> Formula {
    Formula::exists(1, Formula::Pred(Pred::Proof, vec![Term::var(1), Term::var(0), Term::lit(1u32)]))
}

/// `□A = Bew[⌜A⌝]`.
pub fn box_(a: &Formula) -> Formula {
    bew_formula().replace_free(0, &reflect(a))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecessitationEvidence {
    /// `⌜π⌝`, the witness for `□A`.
    pub witness: Nat,
    pub boxed: Formula,
    /// The verdict of evaluating `□A` with evaluation cap `⌜π⌝`.
    pub verdict: crate::model::TriBool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NecessitationError {
    #[error("not a valid proof")]
    InvalidProof,
    #[error(transparent)]
    Eval(#[from] crate::model::EvalError),
}

/// From a checked proof of `A`, evidence that `□A` holds: its witness and
/// the evaluator's verdict on `□A` at cap `⌜π⌝`.
pub fn necessitation_check(pi: &ProofTree, theory: Theory) -> Result<NecessitationEvidence, NecessitationError> {
    if !machine_check(pi, theory) {
        return Err(NecessitationError::InvalidProof);
    }
    let witness = encode(&pi.to_tree());
    let boxed = box_(&pi.conclusion);
    let oracles = crate::diagonal::standard_oracles(theory);
    // Enumerating every x ; r ≤ ⌜π⌝ is hopeless for anything beyond an axiom;
    // try the known witness first.
    let verdict = crate::model::eval_exists_with_witness(&boxed, &witness, &Default::default(), &witness, &oracles)?;
    Ok(NecessitationEvidence { witness, boxed, verdict })
}

/// Small derivations used by tests, examples and the CLI.
pub mod derived {
    use super::*;

    /// `⊢ A ⇒ A` by S, K, K.
    pub fn identity(a: &Formula) -> ProofTree {
        let aa = Formula::implies(a.clone(), a.clone());
        let k1 = ProofTree::axiom(Rule::K, Formula::implies(a.clone(), aa.clone()));
        let k2 = ProofTree::axiom(Rule::K, Formula::implies(a.clone(), Formula::implies(aa.clone(), a.clone())));
        let s = ProofTree::axiom(
            Rule::S,
            Formula::implies(
                k2.conclusion.clone(),
                Formula::implies(Formula::implies(a.clone(), aa.clone()), aa.clone()),
            ),
        );
        ProofTree::mp(ProofTree::mp(s, k2), k1)
    }

    /// From proofs of `A` and `B`, a proof of `A ∧ B`.
    pub fn and_intro(pa: ProofTree, pb: ProofTree) -> ProofTree {
        let (a, b) = (pa.conclusion.clone(), pb.conclusion.clone());
        let ax = ProofTree::axiom(
            Rule::AndI,
            Formula::implies(a.clone(), Formula::implies(b, Formula::and(a, pb.conclusion.clone()))),
        );
        ProofTree::mp(ProofTree::mp(ax, pa), pb)
    }

    /// `⊢ n̲ = S(S(...0))`-style unfolding one literal step: `lit n = S(lit(n−1))`.
    pub fn lit_step(n: u64) -> ProofTree {
        let rhs = if n == 0 { Term::Zero } else { Term::succ(Term::lit(n - 1)) };
        ProofTree::axiom(Rule::Lit, Formula::eq(Term::lit(n), rhs))
    }
}
