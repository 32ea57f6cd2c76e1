//! Exact arithmetic: rationals, univariate polynomials, real algebraic
//! numbers isolated by Sturm sequences, and arithmetic in `Q(θ)`.
//!
//! Every equality or sign decision made elsewhere in the crate goes through
//! this module, so none of them depends on floating point.

mod field;
mod interval;
mod poly;
mod real;

use thiserror::Error;

pub use field::{field_arith, rational_context, FieldElement, FieldOp};
pub use interval::RationalInterval;
pub use poly::UniPoly;
pub use real::{rational_factorization, real_roots, AlgebraicReal, Factorization, SturmChain};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("interval does not isolate exactly one root of the polynomial")]
    NotIsolating,
    #[error("field elements belong to different number fields")]
    ContextMismatch,
    #[error("division by zero in a number field")]
    DivisionByZero,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Convenience constructor used throughout the crate.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
