use std::cmp::Ordering;
use std::fmt;

use super::{AlgebraError, ExtRational, ProjMatrix};
use crate::scalar::{exact_sqrt, mul, square_part, Int};

/// A real quadratic irrational `(p + q·√D) / r`.
///
/// Canonical form: `D ≥ 2` squarefree, `q ≠ 0`, `r > 0` and
/// `gcd(p, q, r) = 1`. Two values are equal iff their fields are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadIrr<T> {
    p: T,
    q: T,
    d: T,
    r: T,
}

/// Sign of `x + y·√D` for `y ≠ 0` and non-square `D`; never zero.
pub(crate) fn sign_of_surd<T: Int>(x: &T, y: &T, d: &T) -> Ordering {
    debug_assert!(!y.is_zero());
    match (x.signum().to_i8().unwrap(), y.is_positive()) {
        (0 | 1, true) => Ordering::Greater,
        (0 | -1, false) => Ordering::Less,
        (1, false) => mul(x, x).cmp(&(mul(y, y) * d.clone())),
        (-1, true) => (mul(y, y) * d.clone()).cmp(&mul(x, x)),
        _ => unreachable!(),
    }
}

impl<T: Int> QuadIrr<T> {
    /// `(p + q·√radicand) / r`; square factors of the radicand are moved into `q`.
    pub fn new(p: T, q: T, radicand: T, r: T) -> Result<Self, AlgebraError> {
        if r.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        if q.is_zero() {
            return Err(AlgebraError::NotIrrational);
        }
        if !radicand.is_positive() {
            return Err(AlgebraError::NotReal);
        }
        let (s, d) = square_part(&radicand);
        if d.is_one() {
            return Err(AlgebraError::NotIrrational);
        }
        Ok(Self::normalized(p, q * s, d, r))
    }

    pub fn from_i64(p: i64, q: i64, radicand: i64, r: i64) -> Result<Self, AlgebraError> {
        Self::new(T::of(p), T::of(q), T::of(radicand), T::of(r))
    }

    /// `√n`.
    pub fn sqrt(n: T) -> Result<Self, AlgebraError> {
        Self::new(T::zero(), T::one(), n, T::one())
    }

    /// Caller guarantees `d` squarefree ≥ 2, `q ≠ 0`, `r ≠ 0`.
    fn normalized(p: T, q: T, d: T, r: T) -> Self {
        let (p, q, r) = if r.is_negative() { (-p, -q, -r) } else { (p, q, r) };
        let g = p.gcd(&q).gcd(&r);
        QuadIrr { p: p / g.clone(), q: q / g.clone(), d, r: r / g }
    }

    /// The root of `a·x² + b·x + c = 0` selected by `larger`.
    pub fn root_of(a: &T, b: &T, c: &T, larger: bool) -> Result<Self, AlgebraError> {
        if a.is_zero() {
            return Err(AlgebraError::NotIrrational);
        }
        let (a, b, c) = if a.is_negative() {
            (-a.clone(), -b.clone(), -c.clone())
        } else {
            (a.clone(), b.clone(), c.clone())
        };
        let disc = mul(&b, &b) - T::of(4) * mul(&a, &c);
        if !disc.is_positive() {
            return Err(AlgebraError::NotReal);
        }
        if exact_sqrt(&disc).is_some() {
            return Err(AlgebraError::NotIrrational);
        }
        let sign = if larger { T::one() } else { -T::one() };
        Self::new(-b, sign, disc, T::of(2) * a)
    }

    pub fn p(&self) -> &T {
        &self.p
    }
    pub fn q(&self) -> &T {
        &self.q
    }
    pub fn radicand(&self) -> &T {
        &self.d
    }
    pub fn r(&self) -> &T {
        &self.r
    }

    /// The Galois conjugate `(p - q·√D) / r`.
    pub fn conjugate(&self) -> Self {
        QuadIrr { p: self.p.clone(), q: -self.q.clone(), d: self.d.clone(), r: self.r.clone() }
    }

    pub fn is_positive(&self) -> bool {
        sign_of_surd(&self.p, &self.q, &self.d) == Ordering::Greater
    }

    /// Compares with a rational point; `∞` is above every real.
    pub fn cmp_rational(&self, x: &ExtRational<T>) -> Ordering {
        if x.is_infinite() {
            return Ordering::Less;
        }
        // (p + q√D)/r - u/v has the sign of (p·v - u·r) + q·v·√D.
        let (u, v) = (x.numer(), x.denom());
        sign_of_surd(&(mul(&self.p, v) - mul(u, &self.r)), &mul(&self.q, v), &self.d)
    }

    /// Real-line order between two quadratic irrationals of any fields.
    pub fn cmp_quad(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        // Both are strictly between consecutive integers or differ in floor.
        match self.floor().cmp(&other.floor()) {
            Ordering::Equal => {}
            o => return o,
        }
        let k = self.floor();
        // x < y  ⇔  1/(x-k) > 1/(y-k) on (0, 1).
        let shift = ProjMatrix::from_raw(T::zero(), T::one(), T::one(), -k);
        let xs = self.apply(&shift);
        let ys = other.apply(&shift);
        ys.cmp_quad(&xs)
    }

    /// `⌊(p + q√D) / r⌋`.
    pub fn floor(&self) -> T {
        let s = (mul(&self.q, &self.q) * self.d.clone()).sqrt();
        // p + q√D lies strictly inside (m, m + 1).
        let m = if self.q.is_positive() {
            self.p.clone() + s
        } else {
            self.p.clone() - s - T::one()
        };
        m.div_floor(&self.r)
    }

    /// Möbius action `(a·x + b) / (c·x + d)`; stays in the same field.
    pub fn apply(&self, m: &ProjMatrix<T>) -> Self {
        let (a, b, c, dd) = (m.a(), m.b(), m.c(), m.d());
        let n1 = mul(a, &self.p) + mul(b, &self.r);
        let n2 = mul(a, &self.q);
        let d1 = mul(c, &self.p) + mul(dd, &self.r);
        let d2 = mul(c, &self.q);
        let p = mul(&n1, &d1) - mul(&n2, &d2) * self.d.clone();
        let q = mul(&n2, &d1) - mul(&n1, &d2);
        let r = mul(&d1, &d1) - mul(&d2, &d2) * self.d.clone();
        Self::normalized(p, q, self.d.clone(), r)
    }

    pub fn to_f64(&self) -> f64 {
        let f = |x: &T| x.to_f64().unwrap_or(f64::NAN);
        (f(&self.p) + f(&self.q) * f(&self.d).sqrt()) / f(&self.r)
    }
}

impl<T: Int> fmt::Display for QuadIrr<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let surd = if self.q.is_one() {
            format!("sqrt({})", self.d)
        } else if (-self.q.clone()).is_one() {
            format!("-sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", self.q, self.d)
        };
        let num = if self.p.is_zero() {
            surd
        } else if self.q.is_positive() {
            format!("{}+{}", self.p, surd)
        } else {
            format!("{}{}", self.p, surd)
        };
        if self.r.is_one() {
            write!(f, "{num}")
        } else if self.p.is_zero() {
            write!(f, "{num}/{}", self.r)
        } else {
            write!(f, "({num})/{}", self.r)
        }
    }
}

impl<T: Int> fmt::Debug for QuadIrr<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = QuadIrr<i64>;
    type M = ProjMatrix<i64>;

    #[test]
    fn canonical_form() {
        // (2 + 2√12)/4 = (1 + 2√3)/2
        let x = Q::from_i64(2, 2, 12, 4).unwrap();
        assert_eq!((x.p(), x.q(), x.radicand(), x.r()), (&1, &2, &3, &2));
        assert_eq!(Q::from_i64(-1, -2, 3, -2).unwrap(), x);
        assert!(Q::from_i64(1, 1, 4, 1).is_err());
        assert!(Q::from_i64(1, 0, 3, 1).is_err());
        assert!(Q::from_i64(1, 1, -3, 1).is_err());
    }

    #[test]
    fn floors() {
        let s3 = Q::sqrt(3).unwrap();
        assert_eq!(s3.floor(), 1);
        assert_eq!(s3.conjugate().floor(), -2);
        assert_eq!(Q::from_i64(1335, 1, 3, 939).unwrap().floor(), 1);
        assert_eq!(Q::from_i64(0, 1, 3, 3).unwrap().floor(), 0);
    }

    #[test]
    fn reciprocal_of_sqrt3() {
        let x = Q::sqrt(3).unwrap().apply(&M::f());
        assert_eq!(x, Q::from_i64(0, 1, 3, 3).unwrap());
        assert_eq!(x.to_string(), "sqrt(3)/3");
    }

    #[test]
    fn translate_sqrt3() {
        let x = Q::sqrt(3).unwrap().apply(&M::n());
        assert_eq!(x, Q::from_i64(1, 1, 3, 1).unwrap());
        assert_eq!(x.to_string(), "1+sqrt(3)");
    }

    #[test]
    fn comparisons() {
        let s2 = Q::sqrt(2).unwrap();
        let s3 = Q::sqrt(3).unwrap();
        let q = |p, r| ExtRational::new(p, r).unwrap();
        assert_eq!(s2.cmp_rational(&q(3, 2)), Ordering::Less);
        assert_eq!(s2.cmp_rational(&q(7, 5)), Ordering::Greater);
        assert_eq!(s3.cmp_rational(&ExtRational::infinity()), Ordering::Less);
        assert_eq!(s2.cmp_quad(&s3), Ordering::Less);
        let a = Q::from_i64(1, 1, 5, 2).unwrap();
        assert_eq!(a.cmp_quad(&s2), Ordering::Greater);
        assert_eq!(s2.conjugate().cmp_quad(&s3.conjugate()), Ordering::Greater);
    }

    #[test]
    fn roots() {
        let phi = Q::root_of(&1, &-1, &-1, true).unwrap();
        assert_eq!(phi, Q::from_i64(1, 1, 5, 2).unwrap());
        assert!(Q::root_of(&1, &0, &-4, true).is_err());
    }
}
