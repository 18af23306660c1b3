//! The integer scalar the exact algebra is written against.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact signed integer type.
///
/// Implemented for every type satisfying the bounds, which covers
/// `num_bigint::BigInt` and the primitive signed integers. The layers above
/// the algebra use [`BigInt`](num_bigint::BigInt).
pub trait Int:
    Integer
    + Signed
    + Roots
    + Clone
    + Hash
    + Debug
    + Display
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn of(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("value out of range for scalar type")
    }
}

impl<T> Int for T where
    T: Integer
        + Signed
        + Roots
        + Clone
        + Hash
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// `a * b` without consuming the operands.
#[inline]
pub(crate) fn mul<T: Int>(a: &T, b: &T) -> T {
    a.clone() * b.clone()
}

/// Exact square root if `v` is a perfect square.
pub(crate) fn exact_sqrt<T: Int>(v: &T) -> Option<T> {
    if v.is_negative() {
        return None;
    }
    let s = v.sqrt();
    if mul(&s, &s) == *v {
        Some(s)
    } else {
        None
    }
}

/// Splits a positive integer `m` as `s² · k` with `k` squarefree.
///
/// Small prime factors are removed by trial division; a cofactor without
/// small prime factors is tested for being a perfect square. For cofactors
/// below `LIMIT³` this is exact.
pub(crate) fn square_part<T: Int>(m: &T) -> (T, T) {
    const LIMIT: i64 = 200_000;
    assert!(m.is_positive(), "square_part needs a positive argument");
    let mut rest = m.clone();
    let mut s = T::one();
    let mut k = T::one();
    let mut p: i64 = 2;
    while p <= LIMIT {
        let pt = T::of(p);
        let p2 = mul(&pt, &pt);
        if p2 > rest {
            break;
        }
        while (rest.clone() % p2.clone()).is_zero() {
            rest = rest / p2.clone();
            s = s * pt.clone();
        }
        if (rest.clone() % pt.clone()).is_zero() {
            rest = rest / pt.clone();
            k = k * pt;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    match exact_sqrt(&rest) {
        Some(r) => (s * r, k),
        None => (s, k * rest),
    }
}
