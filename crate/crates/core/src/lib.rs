//! Exact analysis of slow continued fraction algorithms.

pub mod algebra;
pub mod algorithm;
pub mod analysis;
pub mod catalog;
pub mod expansion;
pub mod graph;
pub mod scalar;
pub mod serret;
pub mod spec;
pub mod sync;
pub mod transducer;
pub mod upword;
pub mod value;

use num_bigint::BigInt;

pub use scalar::Int;

/// PGL₂ℤ element with arbitrary-precision entries.
pub type Matrix = algebra::ProjMatrix<BigInt>;
/// Rational point of the projective line.
pub type Rational = algebra::ExtRational<BigInt>;
/// Real quadratic irrational.
pub type Quad = algebra::QuadIrr<BigInt>;
/// Exact point: rational or quadratic irrational.
pub type Value = algebra::Point<BigInt>;
