use super::{AlgebraError, GenWord, Letter, Ln, ProjMatrix};
use crate::scalar::{mul, Int};

/// Unique factorization `M = B·F^e` with `B` in the free monoid on `L, N`.
///
/// Runs a Stern–Brocot descent: peel `L` while the bottom row dominates the
/// top row, `N` while the top row dominates.
pub fn monoid_factor<T: Int>(m: &ProjMatrix<T>) -> Result<(Vec<Ln>, bool), AlgebraError> {
    if !m.is_nonnegative() {
        return Err(AlgebraError::NotNonnegative(m.to_string()));
    }
    let flip = m.det() == -1;
    // M·F swaps the columns.
    let (mut a, mut b, mut c, mut d) = if flip {
        (m.b().clone(), m.a().clone(), m.d().clone(), m.c().clone())
    } else {
        (m.a().clone(), m.b().clone(), m.c().clone(), m.d().clone())
    };
    let mut word = Vec::new();
    while !(a.is_one() && b.is_zero() && c.is_zero() && d.is_one()) {
        if c >= a && d >= b {
            word.push(Ln::L);
            c = c - a.clone();
            d = d - b.clone();
        } else if a >= c && b >= d {
            word.push(Ln::N);
            a = a - c.clone();
            b = b - d.clone();
        } else {
            return Err(AlgebraError::NotNonnegative(m.to_string()));
        }
    }
    Ok((word, flip))
}

fn push_power(word: &mut Vec<Letter>, letter: Letter, k: &i128) {
    let l = if *k < 0 { letter.inverse() } else { letter };
    for _ in 0..k.unsigned_abs() {
        word.push(l);
    }
}

fn push_power_big<T: Int>(word: &mut Vec<Letter>, letter: Letter, k: &T) {
    let k = k.to_i128().expect("exponent too large to spell as a word");
    push_power(word, letter, &k);
}

/// A word over `L, N, F, L⁻¹, N⁻¹` evaluating to `m`.
///
/// Strips a trailing `F` when `det = -1`, then runs the Euclidean algorithm
/// on the top row by right multiplication with powers of `L` and `N`.
pub fn generic_factor<T: Int>(m: &ProjMatrix<T>) -> GenWord {
    let flip = m.det() == -1;
    let (mut a, mut b, mut c, mut d) = if flip {
        (m.b().clone(), m.a().clone(), m.d().clone(), m.c().clone())
    } else {
        (m.a().clone(), m.b().clone(), m.c().clone(), m.d().clone())
    };
    // Right factors applied so far: M·G₁⋯G_k = current.
    let mut applied: Vec<(Letter, T)> = Vec::new();
    let mut head: Vec<Letter> = Vec::new();
    loop {
        if b.is_zero() {
            // a·d = 1, so ±[[1, 0], [c·a, 1]] = L^(c·a).
            push_power_big(&mut head, Letter::L, &mul(&c, &a));
            break;
        }
        if a.is_zero() {
            // b = -c = ±1: the matrix is S·N^(-d·b), and S = N L⁻¹ N.
            head.extend([Letter::N, Letter::LInv, Letter::N]);
            push_power_big(&mut head, Letter::N, &(-mul(&d, &b)));
            break;
        }
        if a.abs() >= b.abs() {
            let k = -(a.clone() / b.clone());
            // M·L^k: a += k·b, c += k·d.
            a = a + mul(&k, &b);
            c = c + mul(&k, &d);
            applied.push((Letter::L, k));
        } else {
            let k = -(b.clone() / a.clone());
            // M·N^k: b += k·a, d += k·c.
            b = b + mul(&k, &a);
            d = d + mul(&k, &c);
            applied.push((Letter::N, k));
        }
    }
    let mut word = head;
    for (letter, k) in applied.iter().rev() {
        push_power_big(&mut word, letter.inverse(), k);
    }
    if flip {
        word.push(Letter::F);
    }
    GenWord::new(word).normalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::word::{eval_ln, ln_to_string};

    type M = ProjMatrix<i64>;

    #[test]
    fn monoid_examples() {
        let (w, e) = monoid_factor(&M::from_i64(2, 1, 3, 2).unwrap()).unwrap();
        assert_eq!((ln_to_string(&w).as_str(), e), ("LNL", false));
        let (w, e) = monoid_factor(&M::from_i64(0, 1, 1, 1).unwrap()).unwrap();
        assert_eq!((ln_to_string(&w).as_str(), e), ("L", true));
        let (w, e) = monoid_factor(&M::identity()).unwrap();
        assert_eq!((w.len(), e), (0, false));
        let (w, e) = monoid_factor(&M::f()).unwrap();
        assert_eq!((w.len(), e), (0, true));
    }

    #[test]
    fn monoid_rejects_negative() {
        assert!(matches!(
            monoid_factor(&M::s()),
            Err(AlgebraError::NotNonnegative(_))
        ));
    }

    #[test]
    fn generic_examples() {
        assert_eq!(generic_factor(&M::f()).to_string(), "F");
        for s in ["N'L", "LNL", "S", "R", "RF", "SRS", "NNNL'L'F", "1"] {
            let m: M = s.parse::<GenWord>().unwrap().eval();
            assert_eq!(generic_factor(&m).eval::<i64>(), m, "{s}");
        }
        let m = M::from_i64(2, 1, 3, 2).unwrap();
        assert_eq!(generic_factor(&m).eval::<i64>(), m);
        assert_eq!(eval_ln::<i64>(&monoid_factor(&m).unwrap().0), m);
    }
}
