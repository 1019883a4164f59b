//! Programs for computable functions: projections, zero, successor, `+`,
//! `×`, `χ≤`, composition, minimization and (optionally) primitive
//! recursion; a fuelled interpreter; Gödel's β function; and the
//! elimination of `Rec` in favour of β-coded traces and minimization.

use rug::Complete;

use crate::syntax::{Articulate, Category, ShapeError, Symbol, Tree};
use crate::Nat;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Program {
    /// `π^n_i`, 1-based `i`.
    Proj(usize, usize),
    /// `Z^n`.
    Zero(usize),
    Succ,
    Add,
    Mul,
    /// `χ≤(n, p) = 1` if `n ≤ p`, else 0.
    ChiLeq,
    /// `∘^n_m(h, g1..gm)`: `x̄ ↦ h(g1(x̄), ..., gm(x̄))`.
    Comp {
        n: usize,
        m: usize,
        h: Box<Program>,
        gs: Vec<Program>,
    },
    /// `μ^n g`: `x̄ ↦` least `y` with `g(x̄, y) = 0`.
    Mu(usize, Box<Program>),
    /// `Rec^n(base, step)`: `f(x̄, 0) = base(x̄)`, `f(x̄, k+1) = step(x̄, k, f(x̄, k))`.
    Rec(usize, Box<Program>, Box<Program>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProgramError {
    #[error("malformed program at {at}: {why}")]
    Malformed { at: String, why: String },
    #[error("program of arity {expected} applied to {got} arguments")]
    ArgCount { expected: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    Value(Nat),
    FuelExhausted,
}

impl RunOutcome {
    pub fn value(&self) -> Option<&Nat> {
        match self {
            RunOutcome::Value(v) => Some(v),
            RunOutcome::FuelExhausted => None,
        }
    }
}

impl Program {
    pub fn comp(h: Program, gs: Vec<Program>) -> Program {
        // The arity of a composition is that of its inner programs; a bare
        // constant composition (m = 0) has to be built with `Comp` directly.
        let n = gs.first().map_or(0, |g| g.arity_unchecked());
        Program::Comp { n, m: gs.len(), h: Box::new(h), gs }
    }

    pub fn mu(n: usize, g: Program) -> Program {
        Program::Mu(n, Box::new(g))
    }

    pub fn rec(n: usize, base: Program, step: Program) -> Program {
        Program::Rec(n, Box::new(base), Box::new(step))
    }

    fn arity_unchecked(&self) -> usize {
        match self {
            Program::Proj(n, _) | Program::Zero(n) => *n,
            Program::Succ => 1,
            Program::Add | Program::Mul | Program::ChiLeq => 2,
            Program::Comp { n, .. } | Program::Mu(n, _) => *n,
            Program::Rec(n, _, _) => n + 1,
        }
    }

    pub fn contains_rec(&self) -> bool {
        match self {
            Program::Rec(..) => true,
            Program::Comp { h, gs, .. } => h.contains_rec() || gs.iter().any(Program::contains_rec),
            Program::Mu(_, g) => g.contains_rec(),
            _ => false,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Program::Comp { h, gs, .. } => 1 + h.size() + gs.iter().map(Program::size).sum::<usize>(),
            Program::Mu(_, g) => 1 + g.size(),
            Program::Rec(_, b, s) => 1 + b.size() + s.size(),
            _ => 1,
        }
    }
}

/// Arity of a well-formed program; checks the arity discipline everywhere.
pub fn arity(p: &Program) -> Result<usize, ProgramError> {
    check(p, "root")
}

fn malformed(at: &str, why: impl Into<String>) -> ProgramError {
    ProgramError::Malformed { at: at.to_string(), why: why.into() }
}

fn check(p: &Program, at: &str) -> Result<usize, ProgramError> {
    match p {
        Program::Proj(n, i) => {
            if *i < 1 || i > n {
                return Err(malformed(at, format!("proj {n} {i}: index out of range")));
            }
            Ok(*n)
        }
        Program::Zero(n) => Ok(*n),
        Program::Succ => Ok(1),
        Program::Add | Program::Mul | Program::ChiLeq => Ok(2),
        Program::Comp { n, m, h, gs } => {
            if gs.len() != *m {
                return Err(malformed(at, format!("comp declares {m} inner programs, has {}", gs.len())));
            }
            let ha = check(h, &format!("{at}/comp.h"))?;
            if ha != *m {
                return Err(malformed(at, format!("comp: outer program has arity {ha}, expected {m}")));
            }
            for (j, g) in gs.iter().enumerate() {
                let ga = check(g, &format!("{at}/comp.g{}", j + 1))?;
                if ga != *n {
                    return Err(malformed(at, format!("comp: inner program {} has arity {ga}, expected {n}", j + 1)));
                }
            }
            Ok(*n)
        }
        Program::Mu(n, g) => {
            let ga = check(g, &format!("{at}/mu"))?;
            if ga != n + 1 {
                return Err(malformed(at, format!("mu {n}: body has arity {ga}, expected {}", n + 1)));
            }
            Ok(*n)
        }
        Program::Rec(n, base, step) => {
            let ba = check(base, &format!("{at}/rec.base"))?;
            let sa = check(step, &format!("{at}/rec.step"))?;
            if ba != *n || sa != n + 2 {
                return Err(malformed(at, format!("rec {n}: base/step arities {ba}/{sa}, expected {n}/{}", n + 2)));
            }
            Ok(n + 1)
        }
    }
}

/// Runs `p` on `args`. Fuel pays for each μ candidate tested and each
/// recursion unfolding; running out is reported, never guessed around.
pub fn run(p: &Program, args: &[Nat], fuel: u64) -> Result<RunOutcome, ProgramError> {
    let a = arity(p)?;
    if a != args.len() {
        return Err(ProgramError::ArgCount { expected: a, got: args.len() });
    }
    let mut fuel = fuel;
    Ok(match eval(p, args, &mut fuel) {
        Some(v) => RunOutcome::Value(v),
        None => RunOutcome::FuelExhausted,
    })
}

fn burn(fuel: &mut u64) -> Option<()> {
    *fuel = fuel.checked_sub(1)?;
    Some(())
}

fn eval(p: &Program, args: &[Nat], fuel: &mut u64) -> Option<Nat> {
    Some(match p {
        Program::Proj(_, i) => args[i - 1].clone(),
        Program::Zero(_) => Nat::new(),
        Program::Succ => Nat::from(&args[0] + 1),
        Program::Add => (&args[0] + &args[1]).complete(),
        Program::Mul => (&args[0] * &args[1]).complete(),
        Program::ChiLeq => Nat::from(u8::from(args[0] <= args[1])),
        Program::Comp { h, gs, .. } => {
            let inner = gs.iter().map(|g| eval(g, args, fuel)).collect::<Option<Vec<_>>>()?;
            eval(h, &inner, fuel)?
        }
        Program::Mu(_, g) => {
            let mut ext = args.to_vec();
            ext.push(Nat::new());
            loop {
                burn(fuel)?;
                if eval(g, &ext, fuel)? == 0 {
                    break ext.pop().expect("candidate");
                }
                *ext.last_mut().expect("candidate") += 1;
            }
        }
        Program::Rec(n, base, step) => {
            let xs = &args[..*n];
            let k = &args[*n];
            let mut acc = eval(base, xs, fuel)?;
            let mut ext = xs.to_vec();
            ext.push(Nat::new());
            ext.push(Nat::new());
            let mut i = Nat::new();
            while i < *k {
                burn(fuel)?;
                ext[*n] = i.clone();
                ext[n + 1] = acc;
                acc = eval(step, &ext, fuel)?;
                i += 1;
            }
            acc
        }
    })
}

/// `β(a, b, i) = a mod (1 + (i+1)·b)`.
pub fn beta(a: &Nat, b: &Nat, i: &Nat) -> Nat {
    let m = Nat::from(i + 1) * b + 1u32;
    a.clone() % m
}

/// A pair `(a, b)` with `β(a, b, i) = seq[i]` for every `i`, taking
/// `b = m!` with `m = max(len, max value) + 1` and solving for `a` by the
/// Chinese remainder theorem (the moduli `1 + (i+1)·b` are pairwise coprime).
pub fn beta_encode(seq: &[Nat]) -> (Nat, Nat) {
    let max = seq.iter().max().cloned().unwrap_or_default();
    let m = Nat::from(seq.len()).max(max) + 1u32;
    let m = m.to_u32().expect("sequence values beyond 2^32 are not supported by beta_encode");
    let b = Nat::from(Nat::factorial(m));
    let mut a = Nat::new();
    let mut modulus = Nat::from(1);
    for (i, s) in seq.iter().enumerate() {
        let mi = Nat::from(i + 1) * &b + 1u32;
        // a + modulus·t ≡ s (mod mi)
        let inv = modulus.clone().invert(&mi).expect("pairwise coprime moduli");
        let diff = (Nat::from(s - &a) % &mi + &mi) % &mi;
        let t = diff * inv % &mi;
        a += Nat::from(&modulus * &t);
        modulus *= &mi;
    }
    (a, b)
}

// --- Rec elimination ---------------------------------------------------

/// Expressions over the arguments of a program of known arity, compiled to
/// projections and compositions.
#[derive(Clone)]
enum Expr {
    Arg(usize),
    Zero,
    Call(Program, Vec<Expr>),
    /// Minimization; inside the body, `Arg(ctx)` is the searched variable.
    Mu(Box<Expr>),
}

impl Expr {
    fn compile(&self, n: usize) -> Program {
        match self {
            Expr::Arg(i) => {
                assert!(*i < n, "argument {i} out of scope {n}");
                Program::Proj(n, i + 1)
            }
            Expr::Zero => Program::Zero(n),
            Expr::Call(p, es) => {
                Program::Comp { n, m: es.len(), h: Box::new(p.clone()), gs: es.iter().map(|e| e.compile(n)).collect() }
            }
            Expr::Mu(body) => Program::mu(n, body.compile(n + 1)),
        }
    }
}

fn call(p: &Program, es: Vec<Expr>) -> Expr {
    Expr::Call(p.clone(), es)
}

fn arg(i: usize) -> Expr {
    Expr::Arg(i)
}

fn succ(e: Expr) -> Expr {
    call(&Program::Succ, vec![e])
}

fn add(a: Expr, b: Expr) -> Expr {
    call(&Program::Add, vec![a, b])
}

fn mul(a: Expr, b: Expr) -> Expr {
    call(&Program::Mul, vec![a, b])
}

fn leq(a: Expr, b: Expr) -> Expr {
    call(&Program::ChiLeq, vec![a, b])
}

/// Helper programs, each Rec-free.
struct Kit {
    not: Program,
    ne: Program,
    monus: Program,
    rem: Program,
    beta: Program,
    tri: Program,
    fst: Program,
    snd: Program,
}

impl Kit {
    fn new() -> Kit {
        // not(x) = χ≤(x, 0)
        let not = leq(arg(0), Expr::Zero).compile(1);
        // ne(a, b) = not χ≤(a, b) + not χ≤(b, a); zero iff a = b
        let ne = add(call(&not, vec![leq(arg(0), arg(1))]), call(&not, vec![leq(arg(1), arg(0))])).compile(2);
        // monus(x, y) = μd. x ≤ y + d
        let monus = Expr::Mu(Box::new(leq(succ(add(arg(1), arg(2))), arg(0)))).compile(2);
        // quot(x, m) = μq. x < m·(q+1)
        let quot = Expr::Mu(Box::new(leq(mul(arg(1), succ(arg(2))), arg(0)))).compile(2);
        // rem(x, m) = monus(x, m·quot(x, m))
        let rem = call(&monus, vec![arg(0), mul(arg(1), call(&quot, vec![arg(0), arg(1)]))]).compile(2);
        // beta(a, b, i) = rem(a, 1 + (i+1)·b)
        let beta = call(&rem, vec![arg(0), succ(mul(succ(arg(2)), arg(1)))]).compile(3);
        // Codes c = (a+b)(a+b+1)/2 + a, decoded by search.
        // tri(c) = μw. 2c < (w+1)(w+2)
        let tri = Expr::Mu(Box::new(leq(mul(succ(arg(1)), succ(succ(arg(1)))), add(arg(0), arg(0))))).compile(1);
        // fst'(c, w) = μa. 2c ≤ 2a + w(w+1)
        let fst_w =
            Expr::Mu(Box::new(leq(succ(add(add(arg(2), arg(2)), mul(arg(1), succ(arg(1))))), add(arg(0), arg(0)))))
                .compile(2);
        let fst = call(&fst_w, vec![arg(0), call(&tri, vec![arg(0)])]).compile(1);
        let snd = call(&monus, vec![call(&tri, vec![arg(0)]), call(&fst, vec![arg(0)])]).compile(1);
        Kit { not, ne, monus, rem, beta, tri, fst, snd }
    }

    /// `Rec^n(base, step)` as β-coded trace search, for Rec-free base/step.
    fn rec(&self, n: usize, base: &Program, step: &Program) -> Program {
        let xs = |k: usize| (0..k).map(arg).collect::<Vec<_>>();
        // Context of first_bad: x̄ (0..n), k (n), a (n+1), b (n+2), i (n+3).
        let (k, a, b, i) = (arg(n), arg(n + 1), arg(n + 2), arg(n + 3));
        let beta_at = |j: Expr| call(&self.beta, vec![a.clone(), b.clone(), j]);
        let mut step_args = xs(n);
        step_args.push(i.clone());
        step_args.push(beta_at(i.clone()));
        let matches = call(&self.not, vec![call(&self.ne, vec![beta_at(succ(i.clone())), call(step, step_args)])]);
        let before_k = call(&self.not, vec![leq(k.clone(), i.clone())]);
        // First i with i ≥ k or a broken step; equals k iff the trace is good up to k.
        let first_bad = Expr::Mu(Box::new(mul(before_k, matches)));
        let bad = add(
            call(&self.ne, vec![beta_at(Expr::Zero), call(base, xs(n))]),
            call(&self.ne, vec![first_bad, k.clone()]),
        )
        .compile(n + 3);
        // Context x̄, k, c: split c into (a, b).
        let c = arg(n + 1);
        let mut bad_args = xs(n + 1);
        bad_args.push(call(&self.fst, vec![c.clone()]));
        bad_args.push(call(&self.snd, vec![c]));
        let search = Expr::Mu(Box::new(call(&bad, bad_args)));
        // result(c, k) = β(fst c, snd c, k)
        let result =
            call(&self.beta, vec![call(&self.fst, vec![arg(0)]), call(&self.snd, vec![arg(0)]), arg(1)]).compile(2);
        call(&result, vec![search, arg(n)]).compile(n + 1)
    }
}

/// Removes every `Rec` node. The result has the same arity and agrees with
/// `p` wherever `p` terminates; each recursion becomes a minimization over
/// codes of β-coded traces, which is exact but very slow to run.
pub fn eliminate_rec(p: &Program) -> Result<Program, ProgramError> {
    arity(p)?;
    let kit = Kit::new();
    Ok(elim(p, &kit))
}

fn elim(p: &Program, kit: &Kit) -> Program {
    match p {
        Program::Comp { n, m, h, gs } => {
            Program::Comp { n: *n, m: *m, h: Box::new(elim(h, kit)), gs: gs.iter().map(|g| elim(g, kit)).collect() }
        }
        Program::Mu(n, g) => Program::mu(*n, elim(g, kit)),
        Program::Rec(n, base, step) => kit.rec(*n, &elim(base, kit), &elim(step, kit)),
        _ => p.clone(),
    }
}

/// Rec-free helper programs, exposed for tests and the program corpus.
pub mod helpers {
    use super::*;

    pub fn not() -> Program {
        Kit::new().not
    }
    pub fn ne() -> Program {
        Kit::new().ne
    }
    pub fn monus() -> Program {
        Kit::new().monus
    }
    pub fn rem() -> Program {
        Kit::new().rem
    }
    pub fn beta() -> Program {
        Kit::new().beta
    }
    pub fn unpair_fst() -> Program {
        Kit::new().fst
    }
    pub fn unpair_snd() -> Program {
        Kit::new().snd
    }
    pub fn tri() -> Program {
        Kit::new().tri
    }
}

// --- articulated form --------------------------------------------------

impl Articulate for Program {
    const CATEGORY: Category = Category::Program;

    fn to_tree(&self) -> Tree {
        match self {
            Program::Proj(n, i) => Tree::node(Symbol::ProgProj, vec![Tree::nat(*n as u64), Tree::nat(*i as u64)]),
            Program::Zero(n) => Tree::node(Symbol::ProgZero, vec![Tree::nat(*n as u64)]),
            Program::Succ => Tree::leaf(Symbol::ProgSucc),
            Program::Add => Tree::leaf(Symbol::ProgAdd),
            Program::Mul => Tree::leaf(Symbol::ProgMul),
            Program::ChiLeq => Tree::leaf(Symbol::ProgChiLeq),
            Program::Comp { n, m, h, gs } => {
                let mut c = vec![Tree::nat(*n as u64), Tree::nat(*m as u64), h.to_tree()];
                c.extend(gs.iter().map(Program::to_tree));
                Tree::node(Symbol::ProgComp, c)
            }
            Program::Mu(n, g) => Tree::node(Symbol::ProgMu, vec![Tree::nat(*n as u64), g.to_tree()]),
            Program::Rec(n, b, s) => Tree::node(Symbol::ProgRec, vec![Tree::nat(*n as u64), b.to_tree(), s.to_tree()]),
        }
    }

    fn from_tree(t: &Tree) -> Result<Self, ShapeError> {
        let sym = t.symbol().ok_or_else(|| ShapeError("program must be a symbol node".into()))?;
        let small = |t: &Tree| -> Result<usize, ShapeError> {
            usize::try_from(t.as_u64()?).map_err(|_| ShapeError("arity out of range".into()))
        };
        Ok(match sym {
            Symbol::ProgProj => {
                let c = t.expect(2)?.1;
                Program::Proj(small(&c[0])?, small(&c[1])?)
            }
            Symbol::ProgZero => Program::Zero(small(&t.expect(1)?.1[0])?),
            Symbol::ProgSucc => {
                t.expect(0)?;
                Program::Succ
            }
            Symbol::ProgAdd => {
                t.expect(0)?;
                Program::Add
            }
            Symbol::ProgMul => {
                t.expect(0)?;
                Program::Mul
            }
            Symbol::ProgChiLeq => {
                t.expect(0)?;
                Program::ChiLeq
            }
            Symbol::ProgComp => {
                let c = t.children();
                if c.len() < 3 {
                    return Err(ShapeError("comp needs n, m and an outer program".into()));
                }
                let (n, m) = (small(&c[0])?, small(&c[1])?);
                if c.len() - 3 != m {
                    return Err(ShapeError(format!("comp declares {m} inner programs, has {}", c.len() - 3)));
                }
                Program::Comp {
                    n,
                    m,
                    h: Box::new(Program::from_tree(&c[2])?),
                    gs: c[3..].iter().map(Program::from_tree).collect::<Result<_, _>>()?,
                }
            }
            Symbol::ProgMu => {
                let c = t.expect(2)?.1;
                Program::mu(small(&c[0])?, Program::from_tree(&c[1])?)
            }
            Symbol::ProgRec => {
                let c = t.expect(3)?.1;
                Program::rec(small(&c[0])?, Program::from_tree(&c[1])?, Program::from_tree(&c[2])?)
            }
            s => return Err(ShapeError(format!("{} is not a program symbol", s.name()))),
        })
    }
}

/// Reference programs used in examples, tests and the CLI corpus.
pub mod corpus {
    use super::Program::{self, *};

    fn comp(n: usize, h: Program, gs: Vec<Program>) -> Program {
        Program::Comp { n, m: gs.len(), h: Box::new(h), gs }
    }

    /// μy. χ≤(S(y), x) — the identity, by minimization.
    pub fn identity_mu() -> Program {
        Program::mu(1, comp(2, ChiLeq, vec![comp(2, Succ, vec![Proj(2, 2)]), Proj(2, 1)]))
    }

    /// pred(0) = 0, pred(k+1) = k.
    pub fn pred_rec() -> Program {
        Program::rec(0, Zero(0), Proj(2, 1))
    }

    /// monus(x, 0) = x, monus(x, k+1) = pred(monus(x, k)).
    pub fn monus_rec() -> Program {
        Program::rec(1, Proj(1, 1), comp(3, pred_rec(), vec![Proj(3, 3)]))
    }

    /// 0! = 1, (k+1)! = (k+1)·k!.
    pub fn factorial_rec() -> Program {
        let one = comp(0, Succ, vec![Zero(0)]);
        Program::rec(0, one, comp(2, Mul, vec![comp(2, Succ, vec![Proj(2, 1)]), Proj(2, 2)]))
    }

    /// Fibonacci, recursing on `g(k) = fib(k)·M + fib(k+1)` with `M = 2^8`
    /// (exact while `fib(k+1) < M`, i.e. `k ≤ 12`). The μ-based division
    /// makes each step cost about `M` candidates.
    pub fn fibonacci_rec() -> Program {
        // g(0) = 1 (fib0 = 0, fib1 = 1); g(k+1) = fib(k+1)·M + (fib k + fib(k+1))
        // where fib k = g div M and fib(k+1) = g mod M. Division uses μ.
        let m_const = 1u64 << 8;
        let constant = |n: usize, c: u64| -> Program {
            let mut p = Zero(n);
            for bit in (0..64 - c.leading_zeros()).rev() {
                p = comp(n, Add, vec![p.clone(), p]);
                if c >> bit & 1 == 1 {
                    p = comp(n, Succ, vec![p]);
                }
            }
            p
        };
        let quot = super::helpers_quot();
        let rem = super::helpers::rem();
        // step(k, g): hi = g div M, lo = g mod M; result = lo·M + (hi + lo)
        let hi = comp(2, quot, vec![Proj(2, 2), constant(2, m_const)]);
        let lo = comp(2, rem.clone(), vec![Proj(2, 2), constant(2, m_const)]);
        let step = comp(2, Add, vec![comp(2, Mul, vec![lo.clone(), constant(2, m_const)]), comp(2, Add, vec![hi, lo])]);
        let g = Program::rec(0, constant(0, 1), step);
        // fib k = g(k) div M
        comp(1, super::helpers_quot(), vec![g, constant(1, m_const)])
    }
}

fn helpers_quot() -> Program {
    Expr::Mu(Box::new(leq(mul(arg(1), succ(arg(2))), arg(0)))).compile(2)
}
