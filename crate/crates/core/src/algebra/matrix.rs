use std::fmt;
use std::ops::Mul;

use super::AlgebraError;
use crate::scalar::{mul, Int};

/// An element of PGL₂ℤ: an integer matrix `[[a, b], [c, d]]` with
/// determinant ±1, taken up to global sign.
///
/// The stored representative is canonical: the first nonzero entry in the
/// order `a, b, c, d` is positive. Equality and hashing are therefore
/// equality and hashing of group elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjMatrix<T> {
    a: T,
    b: T,
    c: T,
    d: T,
}

impl<T: Int> ProjMatrix<T> {
    /// Builds a matrix from its entries, rejecting determinants other than ±1.
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self, AlgebraError> {
        let det = mul(&a, &d) - mul(&b, &c);
        if !(det.is_one() || (-det.clone()).is_one()) {
            return Err(AlgebraError::BadDeterminant(det.to_string()));
        }
        Ok(Self::from_raw(a, b, c, d))
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self, AlgebraError> {
        Self::new(T::of(a), T::of(b), T::of(c), T::of(d))
    }

    /// Canonicalizes the sign. Callers guarantee the determinant.
    pub(crate) fn from_raw(a: T, b: T, c: T, d: T) -> Self {
        let first = [&a, &b, &c, &d]
            .into_iter()
            .find(|x| !x.is_zero())
            .expect("a unimodular matrix has a nonzero entry")
            .is_negative();
        if first {
            ProjMatrix { a: -a, b: -b, c: -c, d: -d }
        } else {
            ProjMatrix { a, b, c, d }
        }
    }

    pub fn identity() -> Self {
        Self::from_raw(T::one(), T::zero(), T::zero(), T::one())
    }

    /// `[[1, 0], [1, 1]]`, i.e. `x ↦ x / (x + 1)`.
    pub fn l() -> Self {
        Self::from_raw(T::one(), T::zero(), T::one(), T::one())
    }

    /// `[[1, 1], [0, 1]]`, i.e. `x ↦ x + 1`.
    pub fn n() -> Self {
        Self::from_raw(T::one(), T::one(), T::zero(), T::one())
    }

    /// `[[0, -1], [1, 0]]`.
    pub fn s() -> Self {
        Self::from_raw(T::zero(), -T::one(), T::one(), T::zero())
    }

    /// `[[1, -1], [1, 0]]`.
    pub fn r() -> Self {
        Self::from_raw(T::one(), -T::one(), T::one(), T::zero())
    }

    /// `[[0, 1], [1, 0]]`, i.e. `x ↦ 1 / x`.
    pub fn f() -> Self {
        Self::from_raw(T::zero(), T::one(), T::one(), T::zero())
    }

    pub fn a(&self) -> &T {
        &self.a
    }
    pub fn b(&self) -> &T {
        &self.b
    }
    pub fn c(&self) -> &T {
        &self.c
    }
    pub fn d(&self) -> &T {
        &self.d
    }

    pub fn entries(&self) -> [&T; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// The determinant, which is +1 or -1 (it does not depend on the sign
    /// representative).
    pub fn det(&self) -> i8 {
        if (mul(&self.a, &self.d) - mul(&self.b, &self.c)).is_one() {
            1
        } else {
            -1
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    /// True when the canonical representative has no negative entry.
    ///
    /// If any sign representative is entrywise nonnegative, the canonical
    /// one is, because its first nonzero entry is positive.
    pub fn is_nonnegative(&self) -> bool {
        self.entries().iter().all(|x| !x.is_negative())
    }

    /// The inverse in PGL₂ℤ.
    pub fn inverse(&self) -> Self {
        // adj(M) = [[d, -b], [-c, a]]; M⁻¹ = adj(M)/det, and the sign is
        // absorbed by the projectivization.
        Self::from_raw(
            self.d.clone(),
            -self.b.clone(),
            -self.c.clone(),
            self.a.clone(),
        )
    }

    /// Trace of the canonical representative (defined up to sign).
    pub fn trace(&self) -> T {
        self.a.clone() + self.d.clone()
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        acc
    }

    /// Converts the entries to another scalar type.
    pub fn map<U: Int>(&self, f: impl Fn(&T) -> U) -> ProjMatrix<U> {
        ProjMatrix::from_raw(f(&self.a), f(&self.b), f(&self.c), f(&self.d))
    }
}

impl<T: Int> Mul for &ProjMatrix<T> {
    type Output = ProjMatrix<T>;

    fn mul(self, rhs: &ProjMatrix<T>) -> ProjMatrix<T> {
        ProjMatrix::from_raw(
            mul(&self.a, &rhs.a) + mul(&self.b, &rhs.c),
            mul(&self.a, &rhs.b) + mul(&self.b, &rhs.d),
            mul(&self.c, &rhs.a) + mul(&self.d, &rhs.c),
            mul(&self.c, &rhs.b) + mul(&self.d, &rhs.d),
        )
    }
}

impl<T: Int> Mul for ProjMatrix<T> {
    type Output = ProjMatrix<T>;

    fn mul(self, rhs: ProjMatrix<T>) -> ProjMatrix<T> {
        &self * &rhs
    }
}

impl<T: Int> fmt::Display for ProjMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl<T: Int> fmt::Debug for ProjMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
