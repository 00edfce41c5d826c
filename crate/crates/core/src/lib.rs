//! Exact grope length functionals and certified bounds on the grope norm
//! of knots and links.
//!
//! The crate models branch-symmetric gropes combinatorially ([`grope`]),
//! computes classical invariants from Seifert matrices ([`seifert`]),
//! turns every known lower and upper bound into a certified interval
//! ([`bounds`]) and builds the gropes produced by satellite and string
//! link infection ([`operators`]). Text formats for all inputs live in
//! [`format`].

pub mod bounds;
pub mod cyclotomic;
pub mod format;
pub mod grope;
pub mod operators;
pub mod polynomial;
pub mod scalar;
pub mod seifert;
mod trig;

pub use grope::{
    glue, length_q, min_branch_length, split_branch, split_full, validate, BoundaryKind, Branch,
    BranchGrope, GropeError, MultiGrope, Side, SymmetricTree,
};
pub use scalar::Scalar;

/// Exact rational scalar used throughout; `q` and every length live here.
pub type Rational = num_rational::BigRational;

/// Arbitrary precision integer.
pub type Integer = num_bigint::BigInt;

/// Norm interval with exact endpoints.
pub type RationalInterval = bounds::NormInterval<Rational>;

/// Norm interval evaluated in floating point.
pub type FloatInterval = bounds::NormInterval<f64>;
