//! Ultimately periodic one-sided infinite words.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{is_rotation, least_rotation, primitive_root_len, AlgebraError, Ln};

/// An ultimately periodic word `prefix · period^ω`.
///
/// Stored canonically: the period is primitive and the prefix is as short as
/// possible, so two values are equal iff they denote the same infinite word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPWord<S> {
    prefix: Vec<S>,
    period: Vec<S>,
}

impl<S: Clone + PartialEq> UPWord<S> {
    pub fn new(mut prefix: Vec<S>, period: Vec<S>) -> Result<Self, AlgebraError> {
        if period.is_empty() {
            return Err(AlgebraError::EmptyWord);
        }
        let k = primitive_root_len(&period);
        let mut period: Vec<S> = period[..k].to_vec();
        while prefix.last().is_some_and(|s| s == period.last().unwrap()) {
            prefix.pop();
            period.rotate_right(1);
        }
        Ok(UPWord { prefix, period })
    }

    /// `period^ω`.
    pub fn periodic(period: Vec<S>) -> Result<Self, AlgebraError> {
        Self::new(Vec::new(), period)
    }

    pub fn prefix(&self) -> &[S] {
        &self.prefix
    }

    pub fn period(&self) -> &[S] {
        &self.period
    }

    pub fn at(&self, i: usize) -> &S {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// The first `n` symbols.
    pub fn take(&self, n: usize) -> Vec<S> {
        (0..n).map(|i| self.at(i).clone()).collect()
    }

    /// Whether the two words agree after independent finite shifts.
    pub fn tail_equivalent(&self, other: &Self) -> bool {
        is_rotation(&self.period, &other.period)
    }

    pub fn map<U: Clone + PartialEq>(&self, f: impl Fn(&S) -> U) -> UPWord<U> {
        UPWord::new(self.prefix.iter().map(&f).collect(), self.period.iter().map(&f).collect())
            .expect("period stays nonempty")
    }
}

impl<S: Clone + Ord> UPWord<S> {
    /// Canonical key of the tail class: the least rotation of the period.
    pub fn tail_key(&self) -> Vec<S> {
        least_rotation(&self.period)
    }
}

fn write_symbols<S: fmt::Display>(f: &mut fmt::Formatter<'_>, w: &[S], wide: bool) -> fmt::Result {
    for (i, s) in w.iter().enumerate() {
        if wide && i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{s}")?;
    }
    Ok(())
}

/// `prefix(period)`; symbols are comma separated as soon as one of them
/// prints wider than one character.
impl<S: fmt::Display> fmt::Display for UPWord<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.prefix.iter().chain(&self.period).any(|s| s.to_string().chars().count() > 1);
        write_symbols(f, &self.prefix, wide)?;
        f.write_str("(")?;
        write_symbols(f, &self.period, wide)?;
        f.write_str(")")
    }
}

impl fmt::Display for Ln {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

fn split_upword(s: &str) -> Result<(&str, &str), AlgebraError> {
    let s = s.trim();
    let bad = || AlgebraError::Parse(format!("expected prefix(period), got {s:?}"));
    let open = s.find('(').ok_or_else(bad)?;
    let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
    Ok((&s[..open], inner))
}

fn parse_indices(s: &str) -> Result<Vec<usize>, AlgebraError> {
    let bad = |t: &str| AlgebraError::Parse(format!("bad symbol {t:?}"));
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(',') {
        s.split(',').map(|t| t.trim().parse().map_err(|_| bad(t))).collect()
    } else {
        s.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| bad(&c.to_string()))).collect()
    }
}

impl FromStr for UPWord<Ln> {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (pre, per) = split_upword(s)?;
        let letters = |w: &str| -> Result<Vec<Ln>, AlgebraError> {
            w.chars()
                .map(|c| Ln::from_char(c).ok_or_else(|| AlgebraError::Parse(format!("bad letter {c:?}"))))
                .collect()
        };
        UPWord::new(letters(pre)?, letters(per)?)
    }
}

impl FromStr for UPWord<usize> {
    type Err = AlgebraError;

    /// Digits `"41(2)"`, or comma separated indices `"4,1(12,3)"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (pre, per) = split_upword(s)?;
        UPWord::new(parse_indices(pre)?, parse_indices(per)?)
    }
}
