use std::fmt;
use std::str::FromStr;

use super::{AlgebraError, ProjMatrix};
use crate::scalar::Int;

/// A generator of PGL₂ℤ or the inverse of one.
///
/// `F` and `S` are involutions, so they have no separate inverse letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    L,
    N,
    F,
    LInv,
    NInv,
    S,
    R,
    RInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::L => Letter::LInv,
            Letter::LInv => Letter::L,
            Letter::N => Letter::NInv,
            Letter::NInv => Letter::N,
            Letter::R => Letter::RInv,
            Letter::RInv => Letter::R,
            Letter::F => Letter::F,
            Letter::S => Letter::S,
        }
    }

    pub fn matrix<T: Int>(self) -> ProjMatrix<T> {
        match self {
            Letter::L => ProjMatrix::l(),
            Letter::N => ProjMatrix::n(),
            Letter::F => ProjMatrix::f(),
            Letter::S => ProjMatrix::s(),
            Letter::R => ProjMatrix::r(),
            Letter::LInv => ProjMatrix::l().inverse(),
            Letter::NInv => ProjMatrix::n().inverse(),
            Letter::RInv => ProjMatrix::r().inverse(),
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Letter::L => "L",
            Letter::N => "N",
            Letter::F => "F",
            Letter::LInv => "L'",
            Letter::NInv => "N'",
            Letter::S => "S",
            Letter::R => "R",
            Letter::RInv => "R'",
        }
    }
}

impl From<Ln> for Letter {
    fn from(z: Ln) -> Letter {
        match z {
            Ln::L => Letter::L,
            Ln::N => Letter::N,
        }
    }
}

/// A letter of the free monoid on `L` and `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ln {
    L,
    N,
}

impl Ln {
    pub const ALL: [Ln; 2] = [Ln::L, Ln::N];

    /// The involution exchanging `L` and `N` (conjugation by `F`).
    pub fn flip(self) -> Ln {
        match self {
            Ln::L => Ln::N,
            Ln::N => Ln::L,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Ln {
        match i {
            0 => Ln::L,
            1 => Ln::N,
            _ => panic!("Ln index out of range: {i}"),
        }
    }

    pub fn from_char(c: char) -> Option<Ln> {
        match c {
            'L' => Some(Ln::L),
            'N' => Some(Ln::N),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Ln::L => 'L',
            Ln::N => 'N',
        }
    }
}

/// Parses a word over `{L, N}`; the empty word may be written `""` or `"1"`.
pub fn parse_ln(s: &str) -> Result<Vec<Ln>, AlgebraError> {
    if s == "1" {
        return Ok(Vec::new());
    }
    s.chars()
        .map(|c| Ln::from_char(c).ok_or_else(|| AlgebraError::Parse(format!("bad letter {c:?} in {s:?}"))))
        .collect()
}

pub fn ln_to_string(w: &[Ln]) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        w.iter().map(|z| z.as_char()).collect()
    }
}

pub fn eval_ln<T: Int>(w: &[Ln]) -> ProjMatrix<T> {
    w.iter().fold(ProjMatrix::identity(), |acc, &z| &acc * &Letter::from(z).matrix())
}

/// A finite word in the generators and their inverses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GenWord(pub Vec<Letter>);

impl GenWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        GenWord(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The product of the generator matrices, left to right.
    pub fn eval<T: Int>(&self) -> ProjMatrix<T> {
        self.0.iter().fold(ProjMatrix::identity(), |acc, l| &acc * &l.matrix())
    }

    pub fn inverse(&self) -> GenWord {
        GenWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &GenWord) -> GenWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GenWord(v)
    }

    /// Free reduction: cancels adjacent `X X⁻¹` pairs (including `FF`, `SS`).
    pub fn normalize(&self) -> GenWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GenWord(out)
    }
}

impl From<&[Ln]> for GenWord {
    fn from(w: &[Ln]) -> Self {
        GenWord(w.iter().map(|&z| z.into()).collect())
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            f.write_str(l.as_str())?;
        }
        Ok(())
    }
}

impl FromStr for GenWord {
    type Err = AlgebraError;

    /// Letters `L N F S R`, each optionally followed by `'` for the inverse.
    /// `"1"` and `""` denote the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" {
            return Ok(GenWord::default());
        }
        let mut out = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            let base = match c {
                'L' => Letter::L,
                'N' => Letter::N,
                'F' => Letter::F,
                'S' => Letter::S,
                'R' => Letter::R,
                _ => return Err(AlgebraError::Parse(format!("bad letter {c:?} in word {s:?}"))),
            };
            if chars.peek() == Some(&'\'') {
                chars.next();
                out.push(base.inverse());
            } else {
                out.push(base);
            }
        }
        Ok(GenWord(out))
    }
}
