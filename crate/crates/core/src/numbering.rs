//! Cantor pairing and the numbering of articulated trees:
//! `⌜f(t1, ..., tp)⌝ = ⌜f⌝ ; (⌜t1⌝ ; (... ; (⌜tp⌝ ; 0)))`.

use crate::syntax::{Articulate, Category, Formula, Label, ShapeError, Symbol, Term, Tree};
use crate::Nat;

/// `n ; p = (n + p)(n + p + 1)/2 + n + 1`.
pub fn cantor_pair(n: &Nat, p: &Nat) -> Nat {
    let s = Nat::from(n + p);
    let mut r = Nat::from(s.square_ref());
    r += &s;
    r >>= 1;
    r += n;
    r += 1;
    r
}

/// Inverse of [`cantor_pair`]; `None` for 0, which is not in its range.
pub fn cantor_unpair(c: &Nat) -> Option<(Nat, Nat)> {
    if *c <= 0 {
        return None;
    }
    if let Some(small) = c.to_u64() {
        let (n, p) = unpair_u64(small);
        return Some((Nat::from(n), Nat::from(p)));
    }
    let d: Nat = (Nat::from(c - 1) << 3) + 1;
    let w: Nat = (d.sqrt() - 1) >> 1;
    let t: Nat = Nat::from(&w * Nat::from(&w + 1)) >> 1;
    let n: Nat = Nat::from(c - 1) - t;
    let p: Nat = w - &n;
    Some((n, p))
}

/// Fast path for codes that fit a machine word. `c >= 1`.
pub fn unpair_u64(c: u64) -> (u64, u64) {
    let d = 8 * (c as u128 - 1) + 1;
    let w = ((d.isqrt() - 1) / 2) as u64;
    let t = (w as u128 * (w as u128 + 1) / 2) as u64;
    let n = c - 1 - t;
    (n, w - n)
}

fn label_code(l: &Label) -> Nat {
    match l {
        Label::Sym(s) => Nat::from(s.code()),
        Label::Tree(t) => encode(t),
    }
}

pub fn encode(t: &Tree) -> Nat {
    match t {
        Tree::Nat(n) => n.clone(),
        Tree::Node { label, children } => {
            let mut acc = Nat::new();
            for c in children.iter().rev() {
                acc = cantor_pair(&encode(c), &acc);
            }
            cantor_pair(&label_code(label), &acc)
        }
    }
}

/// [`encode`], giving up as soon as an intermediate code exceeds `bound`.
///
/// Pairing is strictly increasing in both arguments, so any tree with a
/// subtree coded above `bound` is itself coded above `bound`.
pub fn encode_bounded(t: &Tree, bound: &Nat) -> Option<Nat> {
    let within = |x: Nat| if x <= *bound { Some(x) } else { None };
    match t {
        Tree::Nat(n) => within(n.clone()),
        Tree::Node { label, children } => {
            let mut acc = Nat::new();
            for c in children.iter().rev() {
                acc = within(cantor_pair(&encode_bounded(c, bound)?, &acc))?;
            }
            let l = match label {
                Label::Sym(s) => Nat::from(s.code()),
                Label::Tree(t) => encode_bounded(t, bound)?,
            };
            within(cantor_pair(&l, &acc))
        }
    }
}

/// Upper bound on the bit length of `encode(t)`, from
/// `bits(n ; p) <= 2 * max(bits n, bits p) + 2`. Saturates.
///
/// The bound, like the code itself, is linear in the bit length of raw
/// payloads and exponential in the depth of the tree.
pub fn code_bits_bound(t: &Tree) -> u128 {
    fn step(a: u128, b: u128) -> u128 {
        a.max(b).saturating_mul(2).saturating_add(2)
    }
    match t {
        Tree::Nat(n) => n.significant_bits() as u128,
        Tree::Node { label, children } => {
            let mut acc = 0u128;
            for c in children.iter().rev() {
                acc = step(code_bits_bound(c), acc);
            }
            let l = match label {
                Label::Sym(s) => 32 - s.code().leading_zeros() as u128,
                Label::Tree(t) => code_bits_bound(t),
            };
            step(l, acc)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("0 is not the code of any tree")]
    Zero,
    #[error("{0} is not a {1} symbol code")]
    Symbol(Nat, &'static str),
    #[error("wrong number of children under {0}")]
    Arity(&'static str),
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// What a child position holds.
#[derive(Copy, Clone)]
enum Slot {
    Nat,
    Cat(Category),
}

const T: Slot = Slot::Cat(Category::Term);
const F: Slot = Slot::Cat(Category::Formula);
const P: Slot = Slot::Cat(Category::Program);

/// Fixed child slots, plus an optional repeated tail.
fn shape(sym: Symbol, cat: Category) -> Option<(&'static [Slot], Option<Slot>)> {
    use Symbol as S;
    let r: (&'static [Slot], Option<Slot>) = match (cat, sym) {
        (Category::Term, S::Zero) => (&[], None),
        (Category::Term, S::Succ) => (&[T], None),
        (Category::Term, S::Add | S::Mul) => (&[T, T], None),
        (Category::Term, S::Var | S::Lit) => (&[Slot::Nat], None),
        (Category::Formula, S::Eq) => (&[T, T], None),
        (Category::Formula, S::Bottom) => (&[], None),
        (Category::Formula, S::Implies | S::And | S::Or) => (&[F, F], None),
        (Category::Formula, S::Not) => (&[F], None),
        (Category::Formula, S::Forall | S::Exists) => (&[F, Slot::Nat], None),
        (Category::Formula, S::Proof | S::Sub) => (&[T, T, T], None),
        (Category::Formula, S::Neg) => (&[T, T], None),
        (Category::Program, S::ProgProj) => (&[Slot::Nat, Slot::Nat], None),
        (Category::Program, S::ProgZero) => (&[Slot::Nat], None),
        (Category::Program, S::ProgSucc | S::ProgAdd | S::ProgMul | S::ProgChiLeq) => (&[], None),
        (Category::Program, S::ProgComp) => (&[Slot::Nat, Slot::Nat, P], Some(P)),
        (Category::Program, S::ProgMu) => (&[Slot::Nat, P], None),
        (Category::Program, S::ProgRec) => (&[Slot::Nat, P, P], None),
        _ => return None,
    };
    Some(r)
}

fn decode_slot(c: &Nat, slot: Slot) -> Result<Tree, DecodeError> {
    match slot {
        Slot::Nat => Ok(Tree::Nat(c.clone())),
        Slot::Cat(cat) => decode(c, cat),
    }
}

/// Reads a `c1 ; (c2 ; (... ; 0))` list against the given slots.
fn decode_list(
    mut rest: Nat,
    fixed: &[Slot],
    tail: Option<Slot>,
    what: &'static str,
) -> Result<Vec<Tree>, DecodeError> {
    let mut out = Vec::with_capacity(fixed.len());
    for &slot in fixed {
        let (head, r) = cantor_unpair(&rest).ok_or(DecodeError::Arity(what))?;
        out.push(decode_slot(&head, slot)?);
        rest = r;
    }
    match tail {
        None if rest == 0 => Ok(out),
        None => Err(DecodeError::Arity(what)),
        Some(slot) => {
            while rest != 0 {
                let (head, r) = cantor_unpair(&rest).expect("nonzero");
                out.push(decode_slot(&head, slot)?);
                rest = r;
            }
            Ok(out)
        }
    }
}

/// The unique tree of the given category coded by `c`, if any.
pub fn decode(c: &Nat, cat: Category) -> Result<Tree, DecodeError> {
    let (head, rest) = cantor_unpair(c).ok_or(DecodeError::Zero)?;
    if cat == Category::Proof {
        // Proofs are labelled by their conclusion; the first child is the
        // rule tag, the others the subproofs.
        let label = decode(&head, Category::Formula)?;
        let (tag, rest) = cantor_unpair(&rest).ok_or(DecodeError::Arity("proof"))?;
        let tag_ok = tag.to_u32().and_then(Symbol::from_code).is_some_and(|s| matches!(s, Symbol::Rule(_)));
        if !tag_ok {
            return Err(DecodeError::Symbol(tag, "rule"));
        }
        let mut children = vec![Tree::Nat(tag)];
        children.extend(decode_list(rest, &[], Some(Slot::Cat(Category::Proof)), "proof")?);
        return Ok(Tree::Node { label: Label::Tree(Box::new(label)), children });
    }
    let sym = head.to_u32().and_then(Symbol::from_code);
    let (sym, (fixed, tail)) = match sym.and_then(|s| Some((s, shape(s, cat)?))) {
        Some(x) => x,
        None => return Err(DecodeError::Symbol(head, cat.name())),
    };
    let children = decode_list(rest, fixed, tail, sym.name())?;
    Ok(Tree::node(sym, children))
}

/// Decodes straight into a syntax type.
pub fn decode_as<A: Articulate>(c: &Nat) -> Result<A, DecodeError> {
    Ok(A::from_tree(&decode(c, A::CATEGORY)?)?)
}

pub fn godel_number<A: Articulate>(x: &A) -> Nat {
    encode(&x.to_tree())
}

/// `⌜A⌝` as a closed term.
pub fn reflect(f: &Formula) -> Term {
    Term::Lit(godel_number(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::numeral;

    fn n(x: u64) -> Nat {
        Nat::from(x)
    }

    #[test]
    fn pair_values() {
        assert_eq!(cantor_pair(&n(0), &n(0)), 1);
        assert_eq!(cantor_pair(&n(1), &n(0)), 3);
        assert_eq!(cantor_pair(&n(0), &n(1)), 2);
        assert_eq!(cantor_pair(&n(1), &n(3)), 12);
        assert_eq!(cantor_unpair(&n(1)), Some((n(0), n(0))));
        assert_eq!(cantor_unpair(&n(12)), Some((n(1), n(3))));
        assert_eq!(cantor_unpair(&n(0)), None);
    }

    #[test]
    fn unpair_big_matches_small_path() {
        for c in [1u64, 2, 3, 12, 99, 12345, u64::MAX / 3, u64::MAX] {
            let (a, b) = unpair_u64(c);
            let big = Nat::from(c) + (Nat::from(1) << 200u32);
            let (x, y) = cantor_unpair(&big).unwrap();
            assert_eq!(cantor_pair(&x, &y), big);
            assert_eq!(cantor_pair(&n(a), &n(b)), c);
        }
    }

    #[test]
    fn small_codes() {
        assert_eq!(godel_number(&Term::Zero), 1);
        assert_eq!(godel_number(&Term::succ(Term::Zero)), 12);
        assert_eq!(decode_as::<Term>(&n(12)), Ok(Term::succ(Term::Zero)));
        assert_eq!(decode(&n(0), Category::Term), Err(DecodeError::Zero));
        // ⌜⊥⌝ = 7 ; 0
        assert_eq!(godel_number(&Formula::Bottom), 36);
        assert_eq!(godel_number(&Formula::eq(Term::Zero, Term::Zero)), 178);
    }

    #[test]
    fn bounded_encoding() {
        let f = Formula::eq(Term::Zero, Term::Zero);
        assert_eq!(encode_bounded(&f.to_tree(), &n(178)), Some(n(178)));
        assert_eq!(encode_bounded(&f.to_tree(), &n(177)), None);
    }

    #[test]
    fn bits_bound_holds() {
        let f = Formula::forall(3, Formula::eq(Term::var(3), Term::add(numeral(1u64 << 40), Term::Zero)));
        let code = godel_number(&f);
        assert!((code.significant_bits() as u128) <= code_bits_bound(&f.to_tree()));
    }

    #[test]
    fn reflect_is_numeral_of_code() {
        let f = Formula::eq(Term::Zero, Term::Zero);
        assert_eq!(reflect(&f), numeral(178));
    }
}
