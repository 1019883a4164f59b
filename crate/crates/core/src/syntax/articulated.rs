//! The articulated-tree view shared by every syntactic category, and the
//! fixed alphabet whose codes feed the numbering.
//!
//! Variable indices, literal values, program arities and rule tags sit in
//! the tree as raw naturals ([`Tree::Nat`]); the numbering codes a raw
//! natural by itself.

use crate::calculus::Rule;
use crate::syntax::{Formula, Pred, Term};
use crate::Nat;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Zero,
    Succ,
    Add,
    Mul,
    Var,
    Lit,
    Eq,
    Bottom,
    Implies,
    And,
    Or,
    Not,
    Forall,
    Exists,
    Proof,
    Sub,
    Neg,
    ProgProj,
    ProgZero,
    ProgSucc,
    ProgAdd,
    ProgMul,
    ProgChiLeq,
    ProgComp,
    ProgMu,
    ProgRec,
    Rule(Rule),
}

const FIXED: [Symbol; 26] = [
    Symbol::Zero,
    Symbol::Succ,
    Symbol::Add,
    Symbol::Mul,
    Symbol::Var,
    Symbol::Lit,
    Symbol::Eq,
    Symbol::Bottom,
    Symbol::Implies,
    Symbol::And,
    Symbol::Or,
    Symbol::Not,
    Symbol::Forall,
    Symbol::Exists,
    Symbol::Proof,
    Symbol::Sub,
    Symbol::Neg,
    Symbol::ProgProj,
    Symbol::ProgZero,
    Symbol::ProgSucc,
    Symbol::ProgAdd,
    Symbol::ProgMul,
    Symbol::ProgChiLeq,
    Symbol::ProgComp,
    Symbol::ProgMu,
    Symbol::ProgRec,
];

impl Symbol {
    /// Code of the first rule tag; rules follow in [`Rule::ALL`] order.
    pub const RULE_BASE: u32 = 26;

    pub fn code(self) -> u32 {
        match self {
            Symbol::Rule(r) => Self::RULE_BASE + r.index() as u32,
            s => FIXED.iter().position(|&f| f == s).expect("fixed symbol") as u32,
        }
    }

    pub fn from_code(c: u32) -> Option<Symbol> {
        if c < Self::RULE_BASE {
            Some(FIXED[c as usize])
        } else {
            Rule::ALL.get((c - Self::RULE_BASE) as usize).map(|&r| Symbol::Rule(r))
        }
    }

    /// Every symbol, in code order.
    pub fn all() -> impl Iterator<Item = Symbol> {
        FIXED.into_iter().chain(Rule::ALL.into_iter().map(Symbol::Rule))
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::Zero => "0",
            Symbol::Succ => "S",
            Symbol::Add => "+",
            Symbol::Mul => "*",
            Symbol::Var => "var",
            Symbol::Lit => "lit",
            Symbol::Eq => "=",
            Symbol::Bottom => "bot",
            Symbol::Implies => "=>",
            Symbol::And => "and",
            Symbol::Or => "or",
            Symbol::Not => "not",
            Symbol::Forall => "forall",
            Symbol::Exists => "exists",
            Symbol::Proof => "Proof",
            Symbol::Sub => "Sub",
            Symbol::Neg => "Neg",
            Symbol::ProgProj => "proj",
            Symbol::ProgZero => "zero",
            Symbol::ProgSucc => "succ",
            Symbol::ProgAdd => "add",
            Symbol::ProgMul => "mul",
            Symbol::ProgChiLeq => "chileq",
            Symbol::ProgComp => "comp",
            Symbol::ProgMu => "mu",
            Symbol::ProgRec => "rec",
            Symbol::Rule(r) => r.tag(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Sym(Symbol),
    /// A tree used as a label: proofs are trees labelled by formulas.
    Tree(Box<Tree>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tree {
    Node { label: Label, children: Vec<Tree> },
    Nat(Nat),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed articulated tree: {0}")]
pub struct ShapeError(pub String);

impl Tree {
    pub fn leaf(s: Symbol) -> Tree {
        Tree::Node { label: Label::Sym(s), children: Vec::new() }
    }

    pub fn node(s: Symbol, children: Vec<Tree>) -> Tree {
        Tree::Node { label: Label::Sym(s), children }
    }

    pub fn nat(n: impl Into<Nat>) -> Tree {
        Tree::Nat(n.into())
    }

    pub fn symbol(&self) -> Option<Symbol> {
        match self {
            Tree::Node { label: Label::Sym(s), .. } => Some(*s),
            _ => None,
        }
    }

    pub fn children(&self) -> &[Tree] {
        match self {
            Tree::Node { children, .. } => children,
            Tree::Nat(_) => &[],
        }
    }

    /// The symbol and children of a symbol-labelled node with exactly `n` children.
    pub fn expect(&self, n: usize) -> Result<(Symbol, &[Tree]), ShapeError> {
        match self {
            Tree::Node { label: Label::Sym(s), children } if children.len() == n => Ok((*s, children)),
            Tree::Node { label: Label::Sym(s), children } => {
                Err(ShapeError(format!("{} expects {} children, found {}", s.name(), n, children.len())))
            }
            _ => Err(ShapeError("expected a symbol node".into())),
        }
    }

    pub fn as_nat(&self) -> Result<&Nat, ShapeError> {
        match self {
            Tree::Nat(n) => Ok(n),
            _ => Err(ShapeError("expected a raw natural".into())),
        }
    }

    pub fn as_u64(&self) -> Result<u64, ShapeError> {
        self.as_nat()?.to_u64().ok_or_else(|| ShapeError("natural does not fit in 64 bits".into()))
    }

    pub fn size(&self) -> usize {
        match self {
            Tree::Nat(_) => 1,
            Tree::Node { label, children } => {
                let l = match label {
                    Label::Sym(_) => 1,
                    Label::Tree(t) => t.size(),
                };
                l + children.iter().map(Tree::size).sum::<usize>()
            }
        }
    }
}

/// The syntactic categories; decoding needs to know which one it reads.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Category {
    Term,
    Formula,
    Program,
    Proof,
}

impl Category {
    pub fn name(self) -> &'static str {
        match self {
            Category::Term => "term",
            Category::Formula => "formula",
            Category::Program => "program",
            Category::Proof => "proof",
        }
    }
}

/// Lossless conversion to and from articulated trees.
pub trait Articulate: Sized {
    const CATEGORY: Category;
    fn to_tree(&self) -> Tree;
    fn from_tree(t: &Tree) -> Result<Self, ShapeError>;
}

impl Articulate for Term {
    const CATEGORY: Category = Category::Term;
    fn to_tree(&self) -> Tree {
        match self {
            Term::Zero => Tree::leaf(Symbol::Zero),
            Term::Succ(t) => Tree::node(Symbol::Succ, vec![t.to_tree()]),
            Term::Add(a, b) => Tree::node(Symbol::Add, vec![a.to_tree(), b.to_tree()]),
            Term::Mul(a, b) => Tree::node(Symbol::Mul, vec![a.to_tree(), b.to_tree()]),
            Term::Var(i) => Tree::node(Symbol::Var, vec![Tree::nat(*i)]),
            Term::Lit(n) => Tree::node(Symbol::Lit, vec![Tree::Nat(n.clone())]),
        }
    }

    fn from_tree(t: &Tree) -> Result<Self, ShapeError> {
        let sym = t.symbol().ok_or_else(|| ShapeError("term must be a symbol node".into()))?;
        Ok(match sym {
            Symbol::Zero => {
                t.expect(0)?;
                Term::Zero
            }
            Symbol::Succ => Term::succ(Term::from_tree(&t.expect(1)?.1[0])?),
            Symbol::Add | Symbol::Mul => {
                let c = t.expect(2)?.1;
                let (a, b) = (Term::from_tree(&c[0])?, Term::from_tree(&c[1])?);
                if sym == Symbol::Add {
                    Term::add(a, b)
                } else {
                    Term::mul(a, b)
                }
            }
            Symbol::Var => Term::Var(t.expect(1)?.1[0].as_u64()?),
            Symbol::Lit => Term::Lit(t.expect(1)?.1[0].as_nat()?.clone()),
            s => return Err(ShapeError(format!("{} is not a term symbol", s.name()))),
        })
    }
}

fn pred_symbol(p: Pred) -> Symbol {
    match p {
        Pred::Proof => Symbol::Proof,
        Pred::Sub => Symbol::Sub,
        Pred::Neg => Symbol::Neg,
    }
}

impl Articulate for Formula {
    const CATEGORY: Category = Category::Formula;
    fn to_tree(&self) -> Tree {
        match self {
            Formula::Eq(a, b) => Tree::node(Symbol::Eq, vec![a.to_tree(), b.to_tree()]),
            Formula::Bottom => Tree::leaf(Symbol::Bottom),
            Formula::Implies(a, b) => Tree::node(Symbol::Implies, vec![a.to_tree(), b.to_tree()]),
            Formula::And(a, b) => Tree::node(Symbol::And, vec![a.to_tree(), b.to_tree()]),
            Formula::Or(a, b) => Tree::node(Symbol::Or, vec![a.to_tree(), b.to_tree()]),
            Formula::Not(a) => Tree::node(Symbol::Not, vec![a.to_tree()]),
            // Body before the bound variable: the first child of a node is
            // the cheapest position under nested pairing.
            Formula::Forall(v, a) => Tree::node(Symbol::Forall, vec![a.to_tree(), Tree::nat(*v)]),
            Formula::Exists(v, a) => Tree::node(Symbol::Exists, vec![a.to_tree(), Tree::nat(*v)]),
            Formula::Pred(p, args) => Tree::node(pred_symbol(*p), args.iter().map(Term::to_tree).collect()),
        }
    }

    fn from_tree(t: &Tree) -> Result<Self, ShapeError> {
        let sym = t.symbol().ok_or_else(|| ShapeError("formula must be a symbol node".into()))?;
        let bin = |t: &Tree| -> Result<(Formula, Formula), ShapeError> {
            let c = t.expect(2)?.1;
            Ok((Formula::from_tree(&c[0])?, Formula::from_tree(&c[1])?))
        };
        Ok(match sym {
            Symbol::Eq => {
                let c = t.expect(2)?.1;
                Formula::Eq(Term::from_tree(&c[0])?, Term::from_tree(&c[1])?)
            }
            Symbol::Bottom => {
                t.expect(0)?;
                Formula::Bottom
            }
            Symbol::Implies => {
                let (a, b) = bin(t)?;
                Formula::implies(a, b)
            }
            Symbol::And => {
                let (a, b) = bin(t)?;
                Formula::and(a, b)
            }
            Symbol::Or => {
                let (a, b) = bin(t)?;
                Formula::or(a, b)
            }
            Symbol::Not => Formula::not(Formula::from_tree(&t.expect(1)?.1[0])?),
            Symbol::Forall | Symbol::Exists => {
                let c = t.expect(2)?.1;
                let (body, v) = (Formula::from_tree(&c[0])?, c[1].as_u64()?);
                if sym == Symbol::Forall {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
            Symbol::Proof | Symbol::Sub | Symbol::Neg => {
                let p = Pred::ALL.into_iter().find(|&p| pred_symbol(p) == sym).expect("predicate symbol");
                let args = t.expect(p.arity())?.1.iter().map(Term::from_tree).collect::<Result<_, _>>()?;
                Formula::Pred(p, args)
            }
            s => return Err(ShapeError(format!("{} is not a formula symbol", s.name()))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_are_unique_and_dense() {
        for (i, s) in Symbol::all().enumerate() {
            assert_eq!(s.code(), i as u32);
            assert_eq!(Symbol::from_code(i as u32), Some(s));
        }
        assert_eq!(Symbol::from_code(Symbol::all().count() as u32), None);
        assert_eq!(Symbol::Zero.code(), 0);
        assert_eq!(Symbol::Succ.code(), 1);
    }

    #[test]
    fn small_trees() {
        assert_eq!(Term::Zero.to_tree(), Tree::leaf(Symbol::Zero));
        assert_eq!(Term::succ(Term::Zero).to_tree(), Tree::node(Symbol::Succ, vec![Tree::leaf(Symbol::Zero)]));
        let bad = Tree::node(Symbol::Succ, vec![]);
        assert!(Term::from_tree(&bad).is_err());
        let wrong_cat = Tree::leaf(Symbol::Bottom);
        assert!(Term::from_tree(&wrong_cat).is_err());
        assert_eq!(Formula::from_tree(&wrong_cat), Ok(Formula::Bottom));
    }
}
