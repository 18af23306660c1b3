//! Exact value syntax: rationals, `inf`, and arithmetic in one real
//! quadratic field, e.g. `(1335+sqrt(3))/939` or `2*sqrt(3)-1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::square_part;
use crate::{Quad, Rational, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("unexpected {found} at position {pos}")]
    Unexpected { found: String, pos: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("sqrt needs a nonnegative integer argument")]
    BadSqrt,
    #[error("values from two quadratic fields (sqrt({0}) and sqrt({1})) cannot be combined")]
    MixedFields(BigInt, BigInt),
}

/// `(a + b·√d) / den`.
#[derive(Clone, Debug)]
struct Surd {
    a: BigInt,
    b: BigInt,
    den: BigInt,
}

impl Surd {
    fn int(n: BigInt) -> Surd {
        Surd { a: n, b: BigInt::zero(), den: BigInt::one() }
    }

    fn normalized(self) -> Surd {
        let g = self.a.gcd(&self.b).gcd(&self.den);
        let s = if self.den.is_negative() { -g } else { g };
        Surd { a: self.a / &s, b: self.b / &s, den: self.den / &s }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    /// The squarefree radicand in use, once a surd has appeared.
    d: Option<BigInt>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected(&self) -> ValueError {
        let found = match self.src.get(self.pos) {
            Some(_) => format!("{:?}", String::from_utf8_lossy(&self.src[self.pos..]).chars().next().unwrap()),
            None => "end of input".to_string(),
        };
        ValueError::Unexpected { found, pos: self.pos }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(w.as_bytes()) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn d(&self) -> BigInt {
        self.d.clone().unwrap_or_else(BigInt::zero)
    }

    fn add(&self, x: &Surd, y: &Surd, sign: i8) -> Surd {
        let (ya, yb) = if sign < 0 { (-&y.a, -&y.b) } else { (y.a.clone(), y.b.clone()) };
        Surd { a: &x.a * &y.den + ya * &x.den, b: &x.b * &y.den + yb * &x.den, den: &x.den * &y.den }.normalized()
    }

    fn mul(&self, x: &Surd, y: &Surd) -> Surd {
        let d = self.d();
        Surd {
            a: &x.a * &y.a + &x.b * &y.b * d,
            b: &x.a * &y.b + &x.b * &y.a,
            den: &x.den * &y.den,
        }
        .normalized()
    }

    fn div(&self, x: &Surd, y: &Surd) -> Result<Surd, ValueError> {
        let norm = &y.a * &y.a - &y.b * &y.b * self.d();
        if norm.is_zero() {
            return Err(ValueError::DivisionByZero);
        }
        let inv = Surd { a: &y.den * &y.a, b: -(&y.den * &y.b), den: norm };
        Ok(self.mul(x, &inv))
    }

    fn expr(&mut self) -> Result<Surd, ValueError> {
        let mut x = self.term()?;
        loop {
            if self.eat(b'+') {
                let y = self.term()?;
                x = self.add(&x, &y, 1);
            } else if self.eat(b'-') {
                let y = self.term()?;
                x = self.add(&x, &y, -1);
            } else {
                return Ok(x);
            }
        }
    }

    fn term(&mut self) -> Result<Surd, ValueError> {
        let mut x = self.unary()?;
        loop {
            if self.eat(b'*') {
                let y = self.unary()?;
                x = self.mul(&x, &y);
            } else if self.eat(b'/') {
                let y = self.unary()?;
                x = self.div(&x, &y)?;
            } else if matches!(self.peek(), Some(b'(' | b's' | b'0'..=b'9')) || self.src[self.pos..].starts_with("√".as_bytes()) {
                let y = self.unary()?;
                x = self.mul(&x, &y);
            } else {
                return Ok(x);
            }
        }
    }

    fn unary(&mut self) -> Result<Surd, ValueError> {
        if self.eat(b'-') {
            let x = self.unary()?;
            return Ok(Surd { a: -x.a, b: -x.b, den: x.den });
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Surd, ValueError> {
        if self.eat(b'(') {
            let x = self.expr()?;
            if !self.eat(b')') {
                return Err(self.unexpected());
            }
            return Ok(x);
        }
        if self.eat_word("sqrt") || self.eat_word("√") {
            let arg = if self.eat(b'(') {
                let x = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.unexpected());
                }
                x
            } else {
                self.atom()?
            };
            return self.sqrt(arg);
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected());
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(Surd::int(digits.parse().expect("digits parse")))
    }

    fn sqrt(&mut self, arg: Surd) -> Result<Surd, ValueError> {
        if !arg.b.is_zero() || !arg.den.is_one() || arg.a.is_negative() {
            return Err(ValueError::BadSqrt);
        }
        if arg.a.is_zero() {
            return Ok(arg);
        }
        let (s, d) = square_part(&arg.a);
        if d.is_one() {
            return Ok(Surd::int(s * d));
        }
        match &self.d {
            Some(d0) if *d0 != d => return Err(ValueError::MixedFields(d0.clone(), d)),
            _ => self.d = Some(d),
        }
        Ok(Surd { a: BigInt::zero(), b: s, den: BigInt::one() })
    }
}

/// Parses an exact value.
pub fn parse_value(s: &str) -> Result<Value, ValueError> {
    let t = s.trim();
    if matches!(t, "inf" | "∞" | "oo" | "1/0") {
        return Ok(Value::Rational(Rational::infinity()));
    }
    let mut p = Parser { src: t.as_bytes(), pos: 0, d: None };
    let x = p.expr()?;
    if p.peek().is_some() {
        return Err(p.unexpected());
    }
    if x.b.is_zero() {
        return Rational::new(x.a, x.den).map(Value::Rational).map_err(|_| ValueError::DivisionByZero);
    }
    let d = p.d.expect("surd part implies a radicand");
    Ok(Value::Quadratic(Quad::new(x.a, x.b, d, x.den).expect("irrational by construction")))
}
