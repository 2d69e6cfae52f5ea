//! Exact arithmetic substrate: rational scalars, dyadic interval enclosures,
//! matrices, polynomials, real root isolation, and certified spectral
//! quantities (singular values, operator norms).
//!
//! Everything here is either exact (rational arithmetic, rank, inversion,
//! characteristic polynomials) or certified (dyadic intervals that provably
//! contain the value they enclose).

pub mod dyadic;
pub mod matrix;
pub mod polynomial;
pub mod rational;
pub mod roots;
pub mod spectral;
pub mod vecs;

pub use dyadic::{sqrt_enclosure, Dyadic, DyadicInterval};
pub use matrix::RatMatrix;
pub use polynomial::RatPolynomial;
pub use rational::Rational;
pub use roots::{
    isolate_real_root_intervals, isolate_real_roots, rational_root_multiplicity, RootEnclosure,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("zero matrix has no nonzero singular value")]
    ZeroMatrix,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid interval: lower endpoint above upper")]
    InvalidInterval,
    #[error("parse error: {0}")]
    Parse(String),
}
