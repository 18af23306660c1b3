use std::cmp::Ordering;
use std::fmt;

use super::{ExtRational, ProjMatrix, QuadIrr};
use crate::scalar::{mul, Int};

/// A point of `[0, ∞]` (or of the projective line) with an exact value:
/// either rational or a real quadratic irrational.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Point<T> {
    Rational(ExtRational<T>),
    Quadratic(QuadIrr<T>),
}

impl<T: Int> ExtRational<T> {
    /// Möbius action `(a·x + b) / (c·x + d)`, with `∞` handled projectively.
    pub fn apply(&self, m: &ProjMatrix<T>) -> Self {
        let (p, q) = (self.numer(), self.denom());
        ExtRational::from_raw(mul(m.a(), p) + mul(m.b(), q), mul(m.c(), p) + mul(m.d(), q))
    }
}

impl<T: Int> Point<T> {
    pub fn apply(&self, m: &ProjMatrix<T>) -> Self {
        match self {
            Point::Rational(x) => Point::Rational(x.apply(m)),
            Point::Quadratic(x) => Point::Quadratic(x.apply(m)),
        }
    }

    /// Compares with a rational point in the order of `[-∞, ∞]`.
    pub fn cmp_rational(&self, x: &ExtRational<T>) -> Ordering {
        match self {
            Point::Rational(y) => y.cmp_finite_or_inf(x),
            Point::Quadratic(y) => y.cmp_rational(x),
        }
    }

    /// Membership in `[0, ∞]`.
    pub fn is_nonnegative(&self) -> bool {
        self.cmp_rational(&ExtRational::zero()) != Ordering::Less
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Point::Rational(_))
    }

    pub fn as_quadratic(&self) -> Option<&QuadIrr<T>> {
        match self {
            Point::Quadratic(x) => Some(x),
            Point::Rational(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Point::Rational(x) => x.to_f64(),
            Point::Quadratic(x) => x.to_f64(),
        }
    }
}

impl<T> From<ExtRational<T>> for Point<T> {
    fn from(x: ExtRational<T>) -> Self {
        Point::Rational(x)
    }
}

impl<T> From<QuadIrr<T>> for Point<T> {
    fn from(x: QuadIrr<T>) -> Self {
        Point::Quadratic(x)
    }
}

impl<T: Int> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Rational(x) => fmt::Display::fmt(x, f),
            Point::Quadratic(x) => fmt::Display::fmt(x, f),
        }
    }
}

impl<T: Int> fmt::Debug for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Point<i64>;
    type M = ProjMatrix<i64>;

    #[test]
    fn identity_fixes_rational() {
        let x: P = ExtRational::new(2, 5).unwrap().into();
        assert_eq!(x.apply(&M::identity()), x);
    }

    #[test]
    fn infinity_is_projective() {
        let inf: P = ExtRational::infinity().into();
        assert_eq!(inf.apply(&M::f()), P::Rational(ExtRational::zero()));
        assert_eq!(inf.apply(&M::n()), inf);
        assert_eq!(inf.apply(&M::l()), P::Rational(ExtRational::one()));
        let neg: P = ExtRational::integer(-1).into();
        assert_eq!(neg.apply(&M::l()), inf);
    }
}
