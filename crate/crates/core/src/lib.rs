//! An executable kernel for the incompleteness constructions: Gödel
//! numbering, a compiler from μ-recursive programs to arithmetic formulas,
//! bounded evaluation in ℕ, two proof checkers, proof search, and a
//! fixed-point constructor for the Gödel, Henkin, Löb and Rosser sentences.

pub mod calculus;
pub mod computability;
pub mod diagonal;
pub mod model;
pub mod numbering;
pub mod representation;
pub mod syntax;
pub mod text;

/// Arbitrary-precision natural numbers. Values are never negative.
pub type Nat = rug::Integer;
