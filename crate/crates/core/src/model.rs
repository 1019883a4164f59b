//! Evaluation of formulas in the standard model ℕ, bounded by a search cap,
//! with three-valued answers.
//!
//! Quantifiers are decided exactly whenever the body pins the quantified
//! variable down to a finite set of candidates — equations solved by
//! monotonicity, `s ≤ t` abbreviations read as ranges, functional oracle
//! positions — and otherwise by scanning `0..=cap`, which can find a witness
//! or a counterexample but never proves its absence.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::syntax::{Formula, Pred, Term, Var};
use crate::Nat;

pub type Env = BTreeMap<Var, Nat>;

/// Exact candidate ranges longer than this (and than the cap) are only
/// partly scanned.
const RANGE_LIMIT: u32 = 1 << 16;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum TriBool {
    True,
    False,
    Unknown,
}

impl TriBool {
    pub fn from_bool(b: bool) -> TriBool {
        if b {
            TriBool::True
        } else {
            TriBool::False
        }
    }

    pub fn and(self, o: TriBool) -> TriBool {
        use TriBool::*;
        match (self, o) {
            (False, _) | (_, False) => False,
            (True, True) => True,
            _ => Unknown,
        }
    }

    pub fn or(self, o: TriBool) -> TriBool {
        !(!self).and(!o)
    }

    pub fn implies(self, o: TriBool) -> TriBool {
        (!self).or(o)
    }

    pub fn is_known(self) -> bool {
        self != TriBool::Unknown
    }
}

impl std::ops::Not for TriBool {
    type Output = TriBool;
    fn not(self) -> TriBool {
        match self {
            TriBool::True => TriBool::False,
            TriBool::False => TriBool::True,
            TriBool::Unknown => TriBool::Unknown,
        }
    }
}

impl fmt::Display for TriBool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriBool::True => "true",
            TriBool::False => "false",
            TriBool::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("variable x{0} is not assigned")]
    Unbound(Var),
    #[error("no oracle registered for {0}")]
    MissingOracle(&'static str),
}

/// A superset of the values of one variable that do not make a formula
/// false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cands {
    /// No information.
    Any,
    Exact(BTreeSet<Nat>),
    /// Inclusive range.
    Range(Nat, Nat),
    /// Covers every such value up to the cap; nothing known beyond it.
    Capped(BTreeSet<Nat>),
}

impl Cands {
    pub fn none() -> Cands {
        Cands::Exact(BTreeSet::new())
    }

    pub fn one(n: Nat) -> Cands {
        Cands::Exact(BTreeSet::from([n]))
    }

    fn count(&self) -> Option<Nat> {
        match self {
            Cands::Any => None,
            Cands::Exact(s) | Cands::Capped(s) => Some(Nat::from(s.len())),
            Cands::Range(lo, hi) => Some(Nat::from(hi - lo) + 1u32),
        }
    }

    fn intersect(self, other: Cands, cap: &Nat) -> Cands {
        use Cands::*;
        let in_range = |s: BTreeSet<Nat>, lo: &Nat, hi: &Nat| -> BTreeSet<Nat> {
            s.into_iter().filter(|x| x >= lo && x <= hi).collect()
        };
        match (self, other) {
            (Any, x) | (x, Any) => x,
            (Exact(a), Exact(b)) => Exact(a.intersection(&b).cloned().collect()),
            (Exact(a), Range(lo, hi)) | (Range(lo, hi), Exact(a)) => Exact(in_range(a, &lo, &hi)),
            (Range(a, b), Range(c, d)) => {
                let (lo, hi) = (a.max(c), b.min(d));
                if lo > hi {
                    Cands::none()
                } else {
                    Range(lo, hi)
                }
            }
            (Capped(a), Capped(b)) => Capped(a.intersection(&b).cloned().collect()),
            (Capped(a), Exact(b)) | (Exact(b), Capped(a)) => {
                // Elements of b above the cap may still be solutions.
                let keep: BTreeSet<Nat> = b.into_iter().filter(|x| a.contains(x) || x > cap).collect();
                Exact(keep)
            }
            (Capped(a), Range(lo, hi)) | (Range(lo, hi), Capped(a)) => {
                if hi <= *cap {
                    Exact(in_range(a, &lo, &hi))
                } else {
                    Capped(in_range(a, &lo, &hi))
                }
            }
        }
    }

    fn union(self, other: Cands) -> Cands {
        use Cands::*;
        let hull = |s: &BTreeSet<Nat>| s.first().cloned().zip(s.last().cloned());
        match (self, other) {
            (Any, _) | (_, Any) => Any,
            (Exact(a), Exact(b)) => Exact(a.union(&b).cloned().collect()),
            (Exact(a) | Capped(a), Capped(b)) | (Capped(a), Exact(b)) => Capped(a.union(&b).cloned().collect()),
            (Range(lo, hi), Exact(s)) | (Exact(s), Range(lo, hi)) => match hull(&s) {
                None => Range(lo, hi),
                Some((a, b)) => Range(lo.min(a), hi.max(b)),
            },
            (Range(a, b), Range(c, d)) => Range(a.min(c), b.max(d)),
            (Range(lo, hi), Capped(mut s)) | (Capped(mut s), Range(lo, hi)) => {
                // A range is small enough to list only if enumerating it is.
                let mut x = lo;
                while x <= hi {
                    s.insert(x.clone());
                    x += 1;
                }
                Capped(s)
            }
        }
    }
}

/// A host-level relation standing for an oracle predicate.
pub trait Oracle: Send + Sync {
    fn holds(&self, args: &[Nat]) -> bool;

    /// Candidates for argument `pos` given the known other arguments.
    fn candidates(&self, _known: &[Option<Nat>], _pos: usize, _cap: &Nat) -> Cands {
        Cands::Any
    }
}

impl<F: Fn(&[Nat]) -> bool + Send + Sync> Oracle for F {
    fn holds(&self, args: &[Nat]) -> bool {
        self(args)
    }
}

#[derive(Default)]
pub struct OracleTable {
    entries: BTreeMap<Pred, Box<dyn Oracle>>,
}

impl OracleTable {
    pub fn new() -> OracleTable {
        OracleTable::default()
    }

    pub fn with(mut self, p: Pred, o: impl Oracle + 'static) -> OracleTable {
        self.insert(p, o);
        self
    }

    pub fn insert(&mut self, p: Pred, o: impl Oracle + 'static) {
        self.entries.insert(p, Box::new(o));
    }

    pub fn get(&self, p: Pred) -> Result<&dyn Oracle, EvalError> {
        self.entries.get(&p).map(|b| b.as_ref()).ok_or(EvalError::MissingOracle(p.name()))
    }
}

impl fmt::Debug for OracleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.entries.keys()).finish()
    }
}

pub fn eval_term(t: &Term, env: &Env) -> Result<Nat, EvalError> {
    Ok(match t {
        Term::Zero => Nat::new(),
        Term::Succ(a) => eval_term(a, env)? + 1u32,
        Term::Add(a, b) => eval_term(a, env)? + eval_term(b, env)?,
        Term::Mul(a, b) => eval_term(a, env)? * eval_term(b, env)?,
        Term::Var(v) => env.get(v).cloned().ok_or(EvalError::Unbound(*v))?,
        Term::Lit(n) => n.clone(),
    })
}

/// Evaluates `f` under `env`. Unbounded quantifiers that the body does not
/// pin down are scanned over `0..=cap`.
pub fn eval(f: &Formula, env: &Env, cap: &Nat, oracles: &OracleTable) -> Result<TriBool, EvalError> {
    let top = f.all_vars().into_iter().chain(env.keys().copied()).max().map_or(0, |m| m + 1);
    let mut ev = Evaluator { cap, oracles, fresh: top };
    let mut env = env.clone();
    ev.eval(f, &mut env)
}

/// Evaluates `∃v B` by first trying the witness `w` (when `w ≤ cap`), then
/// falling back to [`eval`].
pub fn eval_exists_with_witness(
    f: &Formula,
    w: &Nat,
    env: &Env,
    cap: &Nat,
    oracles: &OracleTable,
) -> Result<TriBool, EvalError> {
    if let Formula::Exists(v, body) = f {
        if w <= cap {
            let mut env2 = env.clone();
            env2.insert(*v, w.clone());
            if eval(body, &env2, cap, oracles)? == TriBool::True {
                return Ok(TriBool::True);
            }
        }
    }
    eval(f, env, cap, oracles)
}

struct Evaluator<'a> {
    cap: &'a Nat,
    oracles: &'a OracleTable,
    fresh: Var,
}

/// Partial knowledge for candidate computation: `env` minus `unknown`.
struct Ctx<'a> {
    env: &'a Env,
    unknown: &'a BTreeSet<Var>,
}

impl Ctx<'_> {
    fn value(&self, t: &Term) -> Option<Nat> {
        self.value_with(t, None)
    }

    /// Value with `v := w` and every other unknown variable at 0 when
    /// `over` is given; `None` if an unknown variable occurs otherwise.
    fn value_with(&self, t: &Term, over: Option<(Var, &Nat)>) -> Option<Nat> {
        Some(match t {
            Term::Zero => Nat::new(),
            Term::Succ(a) => self.value_with(a, over)? + 1u32,
            Term::Add(a, b) => self.value_with(a, over)? + self.value_with(b, over)?,
            Term::Mul(a, b) => self.value_with(a, over)? * self.value_with(b, over)?,
            Term::Lit(n) => n.clone(),
            Term::Var(x) => match over {
                Some((v, w)) if *x == v => w.clone(),
                _ if self.unknown.contains(x) => {
                    over?;
                    Nat::new()
                }
                _ => match self.env.get(x) {
                    Some(n) => n.clone(),
                    None => {
                        over?;
                        Nat::new()
                    }
                },
            },
        })
    }

    fn has_unknown_besides(&self, t: &Term, v: Var) -> bool {
        t.vars().into_iter().any(|x| x != v && (self.unknown.contains(&x) || !self.env.contains_key(&x)))
    }
}

/// Largest `w` with `p(w) ≤ q`, for a polynomial `p` with natural
/// coefficients, strictly increasing, with `p(0) ≤ q`.
///
/// Bisection over `[0, q]` would take `bits(q)` rounds, hopeless when `q` is
/// a code of millions of bits. Instead: bisect on the exponent to get within
/// a factor of two, then Newton steps from above. `p` is convex, so a step
/// of `(p(w) − q) / (p(w+1) − p(w))` never goes below the answer.
fn last_at_most(p: impl Fn(&Nat) -> Nat, q: &Nat) -> Nat {
    let pow2 = |e: u32| Nat::from(1) << e;
    if p(&Nat::from(1)) > *q {
        return Nat::new();
    }
    // p(w) ≥ w, so p(2^e) ≤ q forces e < bits(q)
    let (mut lo, mut hi) = (0u32, q.significant_bits());
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if p(&pow2(mid)) <= *q {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let mut w = pow2(lo + 1);
    loop {
        let pw = p(&w);
        if pw <= *q {
            return w;
        }
        let slope = p(&Nat::from(&w + 1u32)) - &pw;
        let step = (pw - q) / slope;
        w -= step.max(Nat::from(1));
    }
}

impl Evaluator<'_> {
    fn fresh(&mut self) -> Var {
        self.fresh += 1;
        self.fresh - 1
    }

    fn eval(&mut self, f: &Formula, env: &mut Env) -> Result<TriBool, EvalError> {
        use TriBool::*;
        Ok(match f {
            Formula::Eq(a, b) => TriBool::from_bool(eval_term(a, env)? == eval_term(b, env)?),
            Formula::Bottom => False,
            Formula::Implies(a, b) => match self.eval(a, env)? {
                False => True,
                x => x.implies(self.eval(b, env)?),
            },
            Formula::And(a, b) => match self.eval(a, env)? {
                False => False,
                x => x.and(self.eval(b, env)?),
            },
            Formula::Or(a, b) => match self.eval(a, env)? {
                True => True,
                x => x.or(self.eval(b, env)?),
            },
            Formula::Not(a) => !self.eval(a, env)?,
            Formula::Pred(p, args) => {
                let o = self.oracles.get(*p)?;
                let vals = args.iter().map(|t| eval_term(t, env)).collect::<Result<Vec<_>, _>>()?;
                TriBool::from_bool(o.holds(&vals))
            }
            Formula::Exists(v, body) => {
                let mut vars = vec![*v];
                let mut conjuncts = vec![];
                self.flatten(body, &mut vars, &mut conjuncts);
                let saved: Vec<_> = vars.iter().map(|x| (*x, env.remove(x))).collect();
                let frees: Vec<BTreeSet<Var>> = conjuncts.iter().map(Formula::free_vars).collect();
                let all: Vec<usize> = (0..conjuncts.len()).collect();
                let r = self.search(&vars, &conjuncts, &frees, &all, env);
                for (x, old) in saved {
                    match old {
                        Some(n) => env.insert(x, n),
                        None => env.remove(&x),
                    };
                }
                r?
            }
            Formula::Forall(v, body) => {
                let old = env.remove(v);
                let r = self.forall(*v, body, env);
                if let Some(n) = old {
                    env.insert(*v, n);
                } else {
                    env.remove(v);
                }
                r?
            }
        })
    }

    /// Splits an existential body into conjuncts, hoisting nested
    /// existentials (renamed apart) into the block.
    fn flatten(&mut self, f: &Formula, vars: &mut Vec<Var>, out: &mut Vec<Formula>) {
        match f {
            Formula::And(a, b) => {
                self.flatten(a, vars, out);
                self.flatten(b, vars, out);
            }
            Formula::Exists(u, g) => {
                let w = self.fresh();
                vars.push(w);
                self.flatten(&g.rename_free(*u, w), vars, out);
            }
            _ => out.push(f.clone()),
        }
    }

    /// `∃ unbound (∧ pending)`, with `env` binding everything else.
    fn search(
        &mut self,
        unbound: &[Var],
        conj: &[Formula],
        frees: &[BTreeSet<Var>],
        pending: &[usize],
        env: &mut Env,
    ) -> Result<TriBool, EvalError> {
        let (closed, open): (Vec<usize>, Vec<usize>) =
            pending.iter().partition(|&&i| unbound.iter().all(|v| !frees[i].contains(v)));
        let mut here = TriBool::True;
        for i in closed {
            here = here.and(self.eval(&conj[i], env)?);
            if here == TriBool::False {
                return Ok(TriBool::False);
            }
        }
        if unbound.is_empty() {
            return Ok(here);
        }

        // The variable with the fewest candidates.
        let unknown: BTreeSet<Var> = unbound.iter().copied().collect();
        let mut best: Option<(usize, Cands, Nat)> = None;
        for (k, &v) in unbound.iter().enumerate() {
            let mut c = Cands::Any;
            for &i in &open {
                if frees[i].contains(&v) {
                    let ctx = Ctx { env, unknown: &unknown };
                    c = c.intersect(self.cands(&conj[i], v, &ctx)?, self.cap);
                }
            }
            if let Some(n) = c.count() {
                if best.as_ref().is_none_or(|(_, _, m)| n < *m) {
                    best = Some((k, c, n));
                }
            }
        }
        // A scan over 0..=cap for lack of candidates is not exhaustive.
        let complete = !matches!(best, None | Some((_, Cands::Capped(_), _)));
        let (k, cands) = match best {
            Some((k, c, _)) => (k, c),
            None => (0, Cands::Range(Nat::new(), self.cap.clone())),
        };
        let (cands, clipped) = self.clip(cands);
        let complete = complete && !clipped;
        let v = unbound[k];
        let rest: Vec<Var> = unbound.iter().copied().filter(|&x| x != v).collect();

        let mut unknown_seen = false;
        let mut found = false;
        self.for_each_candidate(&cands, |me, val| {
            env.insert(v, val);
            let r = me.search(&rest, conj, frees, &open, env);
            env.remove(&v);
            match r? {
                TriBool::True => {
                    found = true;
                    return Ok(false);
                }
                TriBool::Unknown => unknown_seen = true,
                TriBool::False => {}
            }
            Ok(true)
        })?;
        let inner = if found {
            TriBool::True
        } else if unknown_seen || !complete {
            TriBool::Unknown
        } else {
            TriBool::False
        };
        Ok(here.and(inner))
    }

    /// Cuts a range down to `max(cap + 1, 2^16)` values; true if anything
    /// was cut. Solved ranges can be exact yet astronomically long.
    fn clip(&self, c: Cands) -> (Cands, bool) {
        match c {
            Cands::Range(lo, hi) => {
                let limit = Nat::from(self.cap + 1u32).max(Nat::from(RANGE_LIMIT));
                let last = Nat::from(&lo + &limit) - 1u32;
                if hi > last {
                    (Cands::Range(lo, last), true)
                } else {
                    (Cands::Range(lo, hi), false)
                }
            }
            c => (c, false),
        }
    }

    /// Calls `f` on each candidate until it returns `false`.
    fn for_each_candidate(
        &mut self,
        c: &Cands,
        mut f: impl FnMut(&mut Self, Nat) -> Result<bool, EvalError>,
    ) -> Result<(), EvalError> {
        match c {
            Cands::Any => unreachable!("no candidate list"),
            Cands::Exact(s) | Cands::Capped(s) => {
                for x in s {
                    if !f(self, x.clone())? {
                        break;
                    }
                }
            }
            Cands::Range(lo, hi) => {
                let mut x = lo.clone();
                while x <= *hi {
                    if !f(self, x.clone())? {
                        break;
                    }
                    x += 1;
                }
            }
        }
        Ok(())
    }

    fn forall(&mut self, v: Var, body: &Formula, env: &mut Env) -> Result<TriBool, EvalError> {
        if !body.is_free(v) {
            return self.eval(body, env);
        }
        let guard = match body {
            Formula::And(a, b) => {
                return Ok(match self.forall(v, a, env)? {
                    TriBool::False => TriBool::False,
                    x => x.and(self.forall(v, b, env)?),
                });
            }
            Formula::Implies(a, _) | Formula::Not(a) => {
                let unknown = BTreeSet::new();
                self.cands(a, v, &Ctx { env, unknown: &unknown })?
            }
            _ => Cands::Any,
        };
        // Outside the guard's candidates the body is vacuously true.
        let (cands, complete) = match guard {
            Cands::Any => (Cands::Range(Nat::new(), self.cap.clone()), false),
            c @ Cands::Capped(_) => (c, false),
            c => {
                let (c, clipped) = self.clip(c);
                (c, !clipped)
            }
        };
        let mut verdict = TriBool::True;
        self.for_each_candidate(&cands, |me, val| {
            env.insert(v, val);
            let r = me.eval(body, env);
            env.remove(&v);
            verdict = verdict.and(r?);
            Ok(verdict != TriBool::False)
        })?;
        Ok(if verdict == TriBool::True && !complete { TriBool::Unknown } else { verdict })
    }

    /// A superset of the values of `v` for which `f` is not false.
    fn cands(&mut self, f: &Formula, v: Var, ctx: &Ctx) -> Result<Cands, EvalError> {
        Ok(match f {
            Formula::Eq(s, t) => self.solve_eq(s, t, v, ctx),
            Formula::Bottom => Cands::none(),
            Formula::And(a, b) => {
                let ca = self.cands(a, v, ctx)?;
                if ca == Cands::none() {
                    return Ok(ca);
                }
                ca.intersect(self.cands(b, v, ctx)?, self.cap)
            }
            Formula::Or(a, b) => {
                let ca = self.cands(a, v, ctx)?;
                if ca == Cands::Any {
                    return Ok(ca);
                }
                ca.union(self.cands(b, v, ctx)?)
            }
            Formula::Exists(u, g) if *u != v => {
                let mut unknown = ctx.unknown.clone();
                unknown.insert(*u);
                self.cands(g, v, &Ctx { env: ctx.env, unknown: &unknown })?
            }
            Formula::Pred(p, args) => {
                let Ok(o) = self.oracles.get(*p) else { return Ok(Cands::Any) };
                let hits: Vec<usize> = (0..args.len()).filter(|&i| args[i].contains_var(v)).collect();
                match hits.as_slice() {
                    [i] if args[*i] == Term::Var(v) => {
                        let known: Vec<Option<Nat>> =
                            args.iter().enumerate().map(|(j, t)| if j == *i { None } else { ctx.value(t) }).collect();
                        o.candidates(&known, *i, self.cap)
                    }
                    _ => Cands::Any,
                }
            }
            _ => Cands::Any,
        })
    }

    fn solve_eq(&self, s: &Term, t: &Term, v: Var, ctx: &Ctx) -> Cands {
        let (sv, tv) = (s.contains_var(v), t.contains_var(v));
        if sv == tv {
            return Cands::Any;
        }
        let (p, q) = if sv { (s, t) } else { (t, s) };
        let Some(q) = ctx.value(q) else { return Cands::Any };
        let others = ctx.has_unknown_besides(p, v);
        // p with v := w and other unknowns at 0: a lower bound for p, and a
        // polynomial in w with natural coefficients, so constant or
        // strictly increasing.
        let p0 = |w: &Nat| ctx.value_with(p, Some((v, w))).expect("all variables defaulted");
        let (a, b, c) = (p0(&Nat::new()), p0(&Nat::from(1)), p0(&Nat::from(2)));
        if a == b {
            return if a > q || (!others && a != q) { Cands::none() } else { Cands::Any };
        }
        if q < a {
            return Cands::none();
        }
        let d = Nat::from(&b - &a);
        let linear = Nat::from(&c - &b) == d;
        let top = if linear { Nat::from(&q - &a) / &d } else { last_at_most(p0, &q) };
        if others {
            Cands::Range(Nat::new(), top)
        } else if p0(&top) == q {
            Cands::one(top)
        } else {
            Cands::none()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a bounded universal with a numeral bound: {0}")]
pub struct BoundShapeError(pub String);

/// Reads `∀z (z < n ⇒ B)` or `∀z (z ≤ n ⇒ B)` (with `≤` spelled
/// `∃u (u + z = n)` and `<` as `S(z) ≤ n`): the variable, the number of
/// instances and `B`.
pub fn bounded_forall_shape(f: &Formula) -> Option<(Var, Nat, &Formula)> {
    let Formula::Forall(z, body) = f else { return None };
    let Formula::Implies(guard, b) = &**body else { return None };
    let Formula::Exists(u, eqn) = &**guard else { return None };
    let Formula::Eq(Term::Add(uu, s), t) = &**eqn else { return None };
    if **uu != Term::Var(*u) || u == z || !t.is_closed() {
        return None;
    }
    let n = eval_term(t, &Env::new()).ok()?;
    let count = match &**s {
        Term::Var(x) if x == z => n + 1u32,
        Term::Succ(inner) if **inner == Term::Var(*z) => n,
        _ => return None,
    };
    Some((*z, count, b))
}

/// The finite conjunction `B[0] ∧ … ∧ B[n−1]` (resp. up to `n`) of a bounded
/// universal; `¬⊥` for an empty range.
pub fn expand_bounded(f: &Formula) -> Result<Formula, BoundShapeError> {
    let (z, count, b) = bounded_forall_shape(f).ok_or_else(|| BoundShapeError(format!("{f:?}")))?;
    let count = count.to_u64().ok_or_else(|| BoundShapeError("bound too large to unroll".into()))?;
    Ok(Formula::conj((0..count).map(|k| b.replace_free(z, &Term::lit(k)))))
}

/// `∀z (z < bound ⇒ body)`, or `≤` when not `strict`; `u` is the witness
/// variable of the spelled-out order.
pub fn bounded_forall(z: Var, bound: Term, strict: bool, u: Var, body: Formula) -> Formula {
    let guard = if strict { Formula::lt(Term::Var(z), bound, u) } else { Formula::leq(Term::Var(z), bound, u) };
    Formula::forall(z, Formula::implies(guard, body))
}
