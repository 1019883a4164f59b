//! Fully parenthesized prefix syntax for terms, formulas, programs and
//! proofs. `;` starts a comment running to the end of the line.
//!
//! ```text
//! term    ::= 0 | x<i> | (S term) | (+ term term) | (* term term) | (lit <n>)
//! formula ::= bot | (= term term) | (=> f f) | (and f f) | (or f f) | (not f)
//!           | (forall x<i> f) | (exists x<i> f)
//!           | (Proof term term term) | (Sub term term term) | (Neg term term)
//! program ::= succ | add | mul | chileq | (proj <n> <i>) | (zero <n>)
//!           | (comp <n> <m> program (program*)) | (mu <n> program)
//!           | (rec <n> program program)
//! proof   ::= (node formula <rule-tag> (proof*))
//! ```

use std::fmt::Write as _;

use crate::calculus::{ProofTree, Rule};
use crate::computability::Program;
use crate::syntax::{Formula, Pred, Term, Var};
use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn pos(&self) -> usize {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

fn read_all(src: &str) -> Result<Sexp, ParseError> {
    let bytes = src.as_bytes();
    let mut i = 0;
    let mut stack: Vec<(Vec<Sexp>, usize)> = vec![];
    let mut done: Option<Sexp> = None;
    let emit = |e: Sexp, stack: &mut Vec<(Vec<Sexp>, usize)>, done: &mut Option<Sexp>| -> Result<(), ParseError> {
        match stack.last_mut() {
            Some((items, _)) => items.push(e),
            None if done.is_none() => *done = Some(e),
            None => return err(e.pos(), "trailing input after the expression"),
        }
        Ok(())
    };
    while i < bytes.len() {
        match bytes[i] {
            b';' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            c if c.is_ascii_whitespace() => i += 1,
            b'(' => {
                stack.push((vec![], i));
                i += 1;
            }
            b')' => {
                let Some((items, start)) = stack.pop() else { return err(i, "unbalanced ')'") };
                emit(Sexp::List(items, start), &mut stack, &mut done)?;
                i += 1;
            }
            _ => {
                let start = i;
                while i < bytes.len() && !bytes[i].is_ascii_whitespace() && !matches!(bytes[i], b'(' | b')' | b';') {
                    i += 1;
                }
                emit(Sexp::Atom(src[start..i].to_string(), start), &mut stack, &mut done)?;
            }
        }
    }
    if let Some((_, start)) = stack.last() {
        return err(*start, "unclosed '('");
    }
    done.ok_or(ParseError { pos: 0, msg: "empty input".into() })
}

fn head(e: &Sexp) -> Option<(&str, &[Sexp])> {
    match e {
        Sexp::List(items, _) => match items.split_first() {
            Some((Sexp::Atom(h, _), rest)) => Some((h.as_str(), rest)),
            _ => None,
        },
        _ => None,
    }
}

fn arity<'a>(e: &Sexp, args: &'a [Sexp], n: usize, what: &str) -> Result<&'a [Sexp], ParseError> {
    if args.len() != n {
        return err(e.pos(), format!("{what} takes {n} arguments, got {}", args.len()));
    }
    Ok(args)
}

fn nat(e: &Sexp) -> Result<Nat, ParseError> {
    match e {
        Sexp::Atom(s, p) if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) => {
            Nat::from_str_radix(s, 10).or_else(|_| err(*p, "bad number"))
        }
        _ => err(e.pos(), "expected a decimal number"),
    }
}

fn small(e: &Sexp) -> Result<usize, ParseError> {
    nat(e)?.to_usize().ok_or(ParseError { pos: e.pos(), msg: "number too large".into() })
}

fn var(e: &Sexp) -> Result<Var, ParseError> {
    match e {
        Sexp::Atom(s, p) => match s.strip_prefix('x') {
            Some(d) if !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) => {
                d.parse().or_else(|_| err(*p, "variable index too large"))
            }
            _ => err(*p, format!("expected a variable x<i>, got {s:?}")),
        },
        _ => err(e.pos(), "expected a variable x<i>"),
    }
}

fn term(e: &Sexp) -> Result<Term, ParseError> {
    if let Sexp::Atom(s, p) = e {
        return match s.as_str() {
            "0" => Ok(Term::Zero),
            _ if s.starts_with('x') => var(e).map(Term::Var),
            _ => err(*p, format!("expected a term, got {s:?}")),
        };
    }
    let Some((h, args)) = head(e) else { return err(e.pos(), "expected a term") };
    match h {
        "S" => Ok(Term::succ(term(&arity(e, args, 1, h)?[0])?)),
        "+" | "*" => {
            let a = arity(e, args, 2, h)?;
            let (x, y) = (term(&a[0])?, term(&a[1])?);
            Ok(if h == "+" { Term::add(x, y) } else { Term::mul(x, y) })
        }
        "lit" => Ok(Term::Lit(nat(&arity(e, args, 1, h)?[0])?)),
        _ => err(e.pos(), format!("unknown term constructor {h:?}")),
    }
}

fn formula(e: &Sexp) -> Result<Formula, ParseError> {
    if let Sexp::Atom(s, p) = e {
        return if s == "bot" { Ok(Formula::Bottom) } else { err(*p, format!("expected a formula, got {s:?}")) };
    }
    let Some((h, args)) = head(e) else { return err(e.pos(), "expected a formula") };
    let bin = |args: &[Sexp]| -> Result<(Formula, Formula), ParseError> {
        let a = arity(e, args, 2, h)?;
        Ok((formula(&a[0])?, formula(&a[1])?))
    };
    Ok(match h {
        "=" => {
            let a = arity(e, args, 2, h)?;
            Formula::eq(term(&a[0])?, term(&a[1])?)
        }
        "=>" => {
            let (a, b) = bin(args)?;
            Formula::implies(a, b)
        }
        "and" => {
            let (a, b) = bin(args)?;
            Formula::and(a, b)
        }
        "or" => {
            let (a, b) = bin(args)?;
            Formula::or(a, b)
        }
        "not" => Formula::not(formula(&arity(e, args, 1, h)?[0])?),
        "forall" | "exists" => {
            let a = arity(e, args, 2, h)?;
            let (v, body) = (var(&a[0])?, formula(&a[1])?);
            if h == "forall" {
                Formula::forall(v, body)
            } else {
                Formula::exists(v, body)
            }
        }
        _ => match Pred::ALL.into_iter().find(|p| p.name() == h) {
            Some(p) => {
                let a = arity(e, args, p.arity(), h)?;
                Formula::Pred(p, a.iter().map(term).collect::<Result<_, _>>()?)
            }
            None => return err(e.pos(), format!("unknown formula constructor {h:?}")),
        },
    })
}

fn program(e: &Sexp) -> Result<Program, ParseError> {
    if let Sexp::Atom(s, p) = e {
        return match s.as_str() {
            "succ" => Ok(Program::Succ),
            "add" => Ok(Program::Add),
            "mul" => Ok(Program::Mul),
            "chileq" => Ok(Program::ChiLeq),
            _ => err(*p, format!("expected a program, got {s:?}")),
        };
    }
    let Some((h, args)) = head(e) else { return err(e.pos(), "expected a program") };
    Ok(match h {
        "proj" => {
            let a = arity(e, args, 2, h)?;
            Program::Proj(small(&a[0])?, small(&a[1])?)
        }
        "zero" => Program::Zero(small(&arity(e, args, 1, h)?[0])?),
        "comp" => {
            let a = arity(e, args, 4, h)?;
            let Sexp::List(gs, _) = &a[3] else { return err(a[3].pos(), "expected a list of inner programs") };
            let (n, m) = (small(&a[0])?, small(&a[1])?);
            let gs = gs.iter().map(program).collect::<Result<Vec<_>, _>>()?;
            if gs.len() != m {
                return err(a[3].pos(), format!("comp declares {m} inner programs, got {}", gs.len()));
            }
            Program::Comp { n, m, h: Box::new(program(&a[2])?), gs }
        }
        "mu" => {
            let a = arity(e, args, 2, h)?;
            Program::mu(small(&a[0])?, program(&a[1])?)
        }
        "rec" => {
            let a = arity(e, args, 3, h)?;
            Program::rec(small(&a[0])?, program(&a[1])?, program(&a[2])?)
        }
        _ => return err(e.pos(), format!("unknown program constructor {h:?}")),
    })
}

fn proof(e: &Sexp) -> Result<ProofTree, ParseError> {
    let Some(("node", args)) = head(e) else { return err(e.pos(), "expected (node formula rule (subproofs))") };
    let a = arity(e, args, 3, "node")?;
    let rule = match &a[1] {
        Sexp::Atom(s, p) => Rule::from_tag(s).ok_or(ParseError { pos: *p, msg: format!("unknown rule {s:?}") })?,
        other => return err(other.pos(), "expected a rule tag"),
    };
    let Sexp::List(subs, _) = &a[2] else { return err(a[2].pos(), "expected a list of subproofs") };
    Ok(ProofTree { conclusion: formula(&a[0])?, rule, premises: subs.iter().map(proof).collect::<Result<_, _>>()? })
}

/// Conversion to and from the text format.
pub trait Text: Sized {
    fn write_text(&self, out: &mut String);
    fn parse_text(src: &str) -> Result<Self, ParseError>;

    fn to_text(&self) -> String {
        let mut s = String::new();
        self.write_text(&mut s);
        s
    }
}

impl Text for Term {
    fn write_text(&self, out: &mut String) {
        match self {
            Term::Zero => out.push('0'),
            Term::Var(v) => write!(out, "x{v}").unwrap(),
            Term::Lit(n) => write!(out, "(lit {n})").unwrap(),
            Term::Succ(a) => {
                out.push_str("(S ");
                a.write_text(out);
                out.push(')');
            }
            Term::Add(a, b) | Term::Mul(a, b) => {
                out.push_str(if matches!(self, Term::Add(..)) { "(+ " } else { "(* " });
                a.write_text(out);
                out.push(' ');
                b.write_text(out);
                out.push(')');
            }
        }
    }

    fn parse_text(src: &str) -> Result<Self, ParseError> {
        term(&read_all(src)?)
    }
}

impl Text for Formula {
    fn write_text(&self, out: &mut String) {
        let mut items = |name: &str, f: &mut dyn FnMut(&mut String)| {
            out.push('(');
            out.push_str(name);
            f(out);
            out.push(')');
        };
        match self {
            Formula::Bottom => out.push_str("bot"),
            Formula::Eq(a, b) => items("=", &mut |o| {
                o.push(' ');
                a.write_text(o);
                o.push(' ');
                b.write_text(o);
            }),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                let name = match self {
                    Formula::Implies(..) => "=>",
                    Formula::And(..) => "and",
                    _ => "or",
                };
                items(name, &mut |o| {
                    o.push(' ');
                    a.write_text(o);
                    o.push(' ');
                    b.write_text(o);
                })
            }
            Formula::Not(a) => items("not", &mut |o| {
                o.push(' ');
                a.write_text(o);
            }),
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                let name = if matches!(self, Formula::Forall(..)) { "forall" } else { "exists" };
                items(name, &mut |o| {
                    write!(o, " x{v} ").unwrap();
                    a.write_text(o);
                })
            }
            Formula::Pred(p, args) => items(p.name(), &mut |o| {
                for t in args {
                    o.push(' ');
                    t.write_text(o);
                }
            }),
        }
    }

    fn parse_text(src: &str) -> Result<Self, ParseError> {
        formula(&read_all(src)?)
    }
}

impl Text for Program {
    fn write_text(&self, out: &mut String) {
        match self {
            Program::Succ => out.push_str("succ"),
            Program::Add => out.push_str("add"),
            Program::Mul => out.push_str("mul"),
            Program::ChiLeq => out.push_str("chileq"),
            Program::Proj(n, i) => write!(out, "(proj {n} {i})").unwrap(),
            Program::Zero(n) => write!(out, "(zero {n})").unwrap(),
            Program::Comp { n, m, h, gs } => {
                write!(out, "(comp {n} {m} ").unwrap();
                h.write_text(out);
                out.push_str(" (");
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    g.write_text(out);
                }
                out.push_str("))");
            }
            Program::Mu(n, g) => {
                write!(out, "(mu {n} ").unwrap();
                g.write_text(out);
                out.push(')');
            }
            Program::Rec(n, b, s) => {
                write!(out, "(rec {n} ").unwrap();
                b.write_text(out);
                out.push(' ');
                s.write_text(out);
                out.push(')');
            }
        }
    }

    fn parse_text(src: &str) -> Result<Self, ParseError> {
        program(&read_all(src)?)
    }
}

impl ProofTree {
    fn write_indented(&self, out: &mut String, depth: usize) {
        out.push_str("(node ");
        self.conclusion.write_text(out);
        write!(out, " {} (", self.rule.tag()).unwrap();
        for p in &self.premises {
            out.push('\n');
            out.push_str(&"  ".repeat(depth + 1));
            p.write_indented(out, depth + 1);
        }
        out.push_str("))");
    }
}

impl Text for ProofTree {
    /// One node per line, subproofs indented.
    fn write_text(&self, out: &mut String) {
        self.write_indented(out, 0);
    }

    fn parse_text(src: &str) -> Result<Self, ParseError> {
        proof(&read_all(src)?)
    }
}
