//! Exact arithmetic in PGL₂ℤ and its projective action.

mod factor;
mod matrix;
mod periodic;
mod point;
mod quadratic;
mod rational;
pub(crate) mod word;

use thiserror::Error;

pub use factor::{generic_factor, monoid_factor};
pub use matrix::ProjMatrix;
pub use periodic::{conjugacy_of_periodic, is_rotation, least_rotation, primitive_root, primitive_root_len};
pub use point::Point;
pub use quadratic::QuadIrr;
pub use rational::ExtRational;
pub use word::{eval_ln, ln_to_string, parse_ln, GenWord, Letter, Ln};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("determinant {0} is not ±1")]
    BadDeterminant(String),
    #[error("matrix {0} has no entrywise nonnegative sign representative")]
    NotNonnegative(String),
    #[error("0/0 is not a point of the projective line")]
    ZeroOverZero,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("value is rational, not a quadratic irrational")]
    NotIrrational,
    #[error("value is not real")]
    NotReal,
    #[error("empty word")]
    EmptyWord,
    #[error("parse error: {0}")]
    Parse(String),
}
