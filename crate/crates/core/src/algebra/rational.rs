use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::AlgebraError;
use crate::scalar::{mul, Int};

/// A point of the rational projective line, `p/q` with `∞ = 1/0`.
///
/// Stored with `gcd(p, q) = 1` and `q ≥ 0`; infinity is always `1/0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtRational<T> {
    p: T,
    q: T,
}

impl<T: Int> ExtRational<T> {
    pub fn new(p: T, q: T) -> Result<Self, AlgebraError> {
        if p.is_zero() && q.is_zero() {
            return Err(AlgebraError::ZeroOverZero);
        }
        Ok(Self::from_raw(p, q))
    }

    pub(crate) fn from_raw(p: T, q: T) -> Self {
        if q.is_zero() {
            return ExtRational { p: T::one(), q: T::zero() };
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / g.clone(), q / g);
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        ExtRational { p, q }
    }

    pub fn integer(n: T) -> Self {
        ExtRational { p: n, q: T::one() }
    }

    pub fn zero() -> Self {
        Self::integer(T::zero())
    }

    pub fn one() -> Self {
        Self::integer(T::one())
    }

    pub fn infinity() -> Self {
        ExtRational { p: T::one(), q: T::zero() }
    }

    pub fn numer(&self) -> &T {
        &self.p
    }

    pub fn denom(&self) -> &T {
        &self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    /// True for points of `[0, ∞]`.
    pub fn is_nonnegative(&self) -> bool {
        !self.p.is_negative()
    }

    /// Order of `[0, ∞]`; `None` if either side is negative.
    pub fn cmp_nonneg(&self, other: &Self) -> Option<Ordering> {
        if !self.is_nonnegative() || !other.is_nonnegative() {
            return None;
        }
        Some(self.cmp_finite_or_inf(other))
    }

    /// Order of `[-∞, ∞]` treating `1/0` as `+∞`.
    pub(crate) fn cmp_finite_or_inf(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => mul(&self.p, &other.q).cmp(&mul(&other.p, &self.q)),
        }
    }

    /// `⌊p/q⌋` for finite points.
    pub fn floor(&self) -> Option<T> {
        if self.is_infinite() {
            None
        } else {
            Some(self.p.div_floor(&self.q))
        }
    }

    /// Height `|p| + q`, which strictly decreases along slow-map orbits.
    pub fn height(&self) -> T {
        self.p.abs() + self.q.clone()
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_infinite() {
            return f64::INFINITY;
        }
        self.p.to_f64().unwrap_or(f64::NAN) / self.q.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T: Int> fmt::Display for ExtRational<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            f.write_str("inf")
        } else if self.q.is_one() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl<T: Int> fmt::Debug for ExtRational<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl<T: Int + FromStr> FromStr for ExtRational<T> {
    type Err = AlgebraError;

    /// Accepts `p/q`, a bare integer, `inf` or `∞`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" || s == "∞" || s == "oo" {
            return Ok(Self::infinity());
        }
        let bad = || AlgebraError::Parse(format!("bad rational literal {s:?}"));
        match s.split_once('/') {
            Some((p, q)) => Self::new(
                p.trim().parse().map_err(|_| bad())?,
                q.trim().parse().map_err(|_| bad())?,
            ),
            None => Ok(Self::integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = ExtRational<i64>;

    #[test]
    fn normalizes() {
        let x = Q::new(4, -6).unwrap();
        assert_eq!((x.numer(), x.denom()), (&-2, &3));
        assert_eq!(Q::new(-5, 0).unwrap(), Q::infinity());
        assert!(Q::new(0, 0).is_err());
    }

    #[test]
    fn order_on_half_line() {
        let a: Q = "1/3".parse().unwrap();
        let b: Q = "1/2".parse().unwrap();
        assert_eq!(a.cmp_nonneg(&b), Some(Ordering::Less));
        assert_eq!(Q::infinity().cmp_nonneg(&b), Some(Ordering::Greater));
        assert_eq!(Q::integer(-1).cmp_nonneg(&b), None);
    }

    #[test]
    fn parse_forms() {
        assert_eq!("inf".parse::<Q>().unwrap(), Q::infinity());
        assert_eq!("7".parse::<Q>().unwrap(), Q::integer(7));
        assert!("1/x".parse::<Q>().is_err());
    }
}
