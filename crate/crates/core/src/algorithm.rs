//! Slow continued fraction algorithms given by unimodular partitions of `[0, ∞]`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::algebra::{eval_ln, ln_to_string, monoid_factor, AlgebraError, Ln};
use crate::{Matrix, Rational, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgorithmError {
    #[error("need at least 2 branches, got {0}")]
    TooFewBranches(usize),
    #[error("branch {index}: determinant {det} is not ±1")]
    BadDeterminant { index: usize, det: String },
    #[error("branch {index}: {matrix} has no nonnegative sign representative")]
    NegativeEntries { index: usize, matrix: String },
    #[error("branch intervals do not partition [0, ∞]: {0}")]
    NotAPartition(String),
    #[error("branches are not listed left to right (expected order {expected:?})")]
    WrongOrder { expected: Vec<usize> },
    #[error("interval [{0}, {1}] is not unimodular")]
    NotUnimodular(String, String),
    #[error("point {0} is outside [0, ∞]")]
    OutOfDomain(String),
    #[error("window {0} is not a valid range of branches")]
    BadWindow(String),
    #[error("first return undefined after {steps} steps ({reason})")]
    Undefined { steps: usize, reason: UndefinedReason },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UndefinedReason {
    /// An iterate outside the window repeated exactly.
    Cycle,
    /// The step bound ran out.
    Bound,
}

impl fmt::Display for UndefinedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UndefinedReason::Cycle => "orbit cycles outside the window",
            UndefinedReason::Bound => "step bound exhausted",
        })
    }
}

/// A closed interval `[left, right]` of `[0, ∞]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub left: Rational,
    pub right: Rational,
}

impl Interval {
    /// `m * [0, ∞]` for a matrix with nonnegative entries.
    pub fn image_of(m: &Matrix) -> Interval {
        let at_zero = Rational::zero().apply(m);
        let at_inf = Rational::infinity().apply(m);
        if m.det() == 1 {
            Interval { left: at_zero, right: at_inf }
        } else {
            Interval { left: at_inf, right: at_zero }
        }
    }

    /// Whether `det [[p, p'], [q, q']] = -1` for `left = p/q`, `right = p'/q'`.
    pub fn is_unimodular(&self) -> bool {
        let (p, q) = (self.left.numer(), self.left.denom());
        let (pp, qq) = (self.right.numer(), self.right.denom());
        p * qq - pp * q == -BigInt::one()
    }

    pub fn contains(&self, x: &Value) -> bool {
        x.cmp_rational(&self.left) != Ordering::Less && x.cmp_rational(&self.right) != Ordering::Greater
    }

    /// The matrix `[[p, p'], [q, q']]` sending `0 ↦ right` and `∞ ↦ left`.
    pub fn endpoint_matrix(&self) -> Matrix {
        Matrix::new(
            self.left.numer().clone(),
            self.right.numer().clone(),
            self.left.denom().clone(),
            self.right.denom().clone(),
        )
        .expect("unimodular interval")
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |x: &Rational| if x.is_infinite() { "inf".to_string() } else { x.to_string() };
        write!(f, "[{}, {}]", show(&self.left), show(&self.right))
    }
}

/// One inverse branch `A = B·F^e` with its interval `A * [0, ∞]`.
#[derive(Clone, Debug)]
pub struct Branch {
    pub matrix: Matrix,
    pub word: Vec<Ln>,
    /// Whether the factorization carries a trailing `F` (determinant -1).
    pub flip: bool,
    pub interval: Interval,
}

impl Branch {
    /// `B·F^e` as text, e.g. `"LNF"`.
    pub fn name(&self) -> String {
        let mut s = if self.word.is_empty() { String::new() } else { ln_to_string(&self.word) };
        if self.flip {
            s.push('F');
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}

/// A validated slow algorithm; branches are numbered left to right.
#[derive(Clone, Debug)]
pub struct SlowAlgorithm {
    branches: Vec<Branch>,
}

/// Result of one application of the slow map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepResult {
    pub symbol: usize,
    pub value: Value,
    /// Set at an endpoint shared by two branches of equal orientation, where
    /// the map is two-valued (`0` or `∞`); the lower branch is taken.
    pub ambiguous: bool,
}

/// The union `E` of the intervals of branches `i..=j`, with optional
/// endpoint removal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub i: usize,
    pub j: usize,
    pub open_left: bool,
    pub open_right: bool,
}

impl Window {
    pub fn closed(i: usize, j: usize) -> Self {
        Window { i, j, open_left: false, open_right: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstReturn {
    pub value: Value,
    pub time: usize,
    pub symbols: Vec<usize>,
    pub ambiguous: bool,
}

impl SlowAlgorithm {
    /// Validates branches given as matrices.
    pub fn new(matrices: Vec<Matrix>) -> Result<Self, AlgorithmError> {
        if matrices.len() < 2 {
            return Err(AlgorithmError::TooFewBranches(matrices.len()));
        }
        let mut branches = Vec::with_capacity(matrices.len());
        for (index, m) in matrices.into_iter().enumerate() {
            let (word, flip) = monoid_factor(&m)
                .map_err(|_| AlgorithmError::NegativeEntries { index, matrix: m.to_string() })?;
            let interval = Interval::image_of(&m);
            branches.push(Branch { matrix: m, word, flip, interval });
        }
        let mut order: Vec<usize> = (0..branches.len()).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (&branches[a].interval, &branches[b].interval);
            x.left.cmp_finite_or_inf(&y.left).then(x.right.cmp_finite_or_inf(&y.right))
        });
        check_partition(order.iter().map(|&a| &branches[a].interval))?;
        if order.iter().enumerate().any(|(k, &a)| k != a) {
            return Err(AlgorithmError::WrongOrder { expected: order });
        }
        check_left_factors(&branches)?;
        Ok(SlowAlgorithm { branches })
    }

    /// Validates branches given as raw integer matrices `[[a, b], [c, d]]`.
    pub fn from_entries(entries: &[[BigInt; 4]]) -> Result<Self, AlgorithmError> {
        let mut ms = Vec::with_capacity(entries.len());
        for (index, [a, b, c, d]) in entries.iter().enumerate() {
            let m = Matrix::new(a.clone(), b.clone(), c.clone(), d.clone()).map_err(|_| {
                AlgorithmError::BadDeterminant { index, det: (a * d - b * c).to_string() }
            })?;
            ms.push(m);
        }
        Self::new(ms)
    }

    /// Validates a partition given as intervals with orientations `e ∈ {+1, -1}`.
    pub fn from_partition(cells: &[(Interval, i8)]) -> Result<Self, AlgorithmError> {
        let mut ms = Vec::with_capacity(cells.len());
        for (iv, e) in cells {
            if !iv.is_unimodular() {
                return Err(AlgorithmError::NotUnimodular(iv.left.to_string(), iv.right.to_string()));
            }
            let m = iv.endpoint_matrix();
            ms.push(if *e > 0 { &m * &Matrix::f() } else { m });
        }
        Self::new(ms)
    }

    /// The partition form `(Δ_a, e_a)`, with `e_a = +1` for increasing branches.
    pub fn to_partition(&self) -> Vec<(Interval, i8)> {
        self.branches.iter().map(|b| (b.interval.clone(), if b.flip { -1 } else { 1 })).collect()
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn branch(&self, a: usize) -> &Branch {
        &self.branches[a]
    }

    pub fn matrices(&self) -> Vec<Matrix> {
        self.branches.iter().map(|b| b.matrix.clone()).collect()
    }

    /// Product `A_{w_0} ⋯ A_{w_{k-1}}`.
    pub fn eval_symbols(&self, w: &[usize]) -> Matrix {
        w.iter().fold(Matrix::identity(), |acc, &a| &acc * &self.branches[a].matrix)
    }

    /// Branch names joined with commas, e.g. `"L,NLL,NLN,NN"`.
    pub fn describe(&self) -> String {
        self.branches.iter().map(Branch::name).collect::<Vec<_>>().join(",")
    }

    /// Index of the branch whose interval contains `x`, with the ambiguity flag.
    pub fn locate(&self, x: &Value) -> Result<(usize, bool), AlgorithmError> {
        if !x.is_nonnegative() {
            return Err(AlgorithmError::OutOfDomain(x.to_string()));
        }
        let n = self.branches.len();
        let a = self.branches.partition_point(|b| x.cmp_rational(&b.interval.right) == Ordering::Greater);
        let a = a.min(n - 1);
        let shared = a + 1 < n && x.cmp_rational(&self.branches[a].interval.right) == Ordering::Equal;
        let ambiguous = shared && self.branches[a].flip == self.branches[a + 1].flip;
        Ok((a, ambiguous))
    }

    /// `x ↦ A_a⁻¹ * x` on `Δ_a`.
    pub fn step(&self, x: &Value) -> Result<StepResult, AlgorithmError> {
        let (symbol, ambiguous) = self.locate(x)?;
        let value = x.apply(&self.branches[symbol].matrix.inverse());
        Ok(StepResult { symbol, value, ambiguous })
    }

    fn check_window(&self, w: &Window) -> Result<(), AlgorithmError> {
        if w.i > w.j || w.j >= self.branches.len() {
            return Err(AlgorithmError::BadWindow(format!("{}..={}", w.i, w.j)));
        }
        Ok(())
    }

    pub fn window_interval(&self, w: &Window) -> Interval {
        Interval {
            left: self.branches[w.i].interval.left.clone(),
            right: self.branches[w.j].interval.right.clone(),
        }
    }

    pub fn in_window(&self, w: &Window, x: &Value) -> bool {
        let iv = self.window_interval(w);
        let lo = x.cmp_rational(&iv.left);
        let hi = x.cmp_rational(&iv.right);
        let above = if w.open_left { lo == Ordering::Greater } else { lo != Ordering::Less };
        let below = if w.open_right { hi == Ordering::Less } else { hi != Ordering::Greater };
        above && below
    }

    /// The first-return map induced on the window.
    ///
    /// Returns `Undefined` when an iterate outside the window repeats (the
    /// orbit is trapped in a cycle and never comes back) or when
    /// `max_steps` steps pass without a return.
    pub fn first_return(&self, w: &Window, x: &Value, max_steps: usize) -> Result<FirstReturn, AlgorithmError> {
        self.check_window(w)?;
        if !self.in_window(w, x) {
            return Err(AlgorithmError::OutOfDomain(x.to_string()));
        }
        let mut seen: HashSet<Value> = HashSet::new();
        let mut cur = x.clone();
        let mut symbols = Vec::new();
        let mut ambiguous = false;
        for t in 1..=max_steps {
            let s = self.step(&cur)?;
            symbols.push(s.symbol);
            ambiguous |= s.ambiguous;
            cur = s.value;
            if self.in_window(w, &cur) {
                return Ok(FirstReturn { value: cur, time: t, symbols, ambiguous });
            }
            if !seen.insert(cur.clone()) {
                return Err(AlgorithmError::Undefined { steps: t, reason: UndefinedReason::Cycle });
            }
        }
        Err(AlgorithmError::Undefined { steps: max_steps, reason: UndefinedReason::Bound })
    }

    /// Inverse branches `A_a·B` of the first-return map with `a` in the window
    /// and `B` a product of at most `depth` branches outside it.
    pub fn accel_branches(&self, w: &Window, depth: usize) -> Result<Vec<Matrix>, AlgorithmError> {
        self.check_window(w)?;
        let outside: Vec<usize> = (0..self.len()).filter(|a| *a < w.i || *a > w.j).collect();
        let mut tails = vec![Matrix::identity()];
        let mut layer = vec![Matrix::identity()];
        for _ in 0..depth {
            layer = layer
                .iter()
                .flat_map(|m| outside.iter().map(move |&b| m * &self.branches[b].matrix))
                .collect();
            tails.extend(layer.iter().cloned());
        }
        let mut seen = HashSet::new();
        let mut out: Vec<(Interval, Matrix)> = Vec::new();
        for a in w.i..=w.j {
            for t in &tails {
                let m = &self.branches[a].matrix * t;
                if seen.insert(m.clone()) {
                    out.push((Interval::image_of(&m), m));
                }
            }
        }
        out.sort_by(|(x, m), (y, k)| {
            x.left
                .cmp_finite_or_inf(&y.left)
                .then(y.right.cmp_finite_or_inf(&x.right))
                .then_with(|| m.to_string().cmp(&k.to_string()))
        });
        Ok(out.into_iter().map(|(_, m)| m).collect())
    }
}

fn check_partition<'a>(mut ivs: impl Iterator<Item = &'a Interval>) -> Result<(), AlgorithmError> {
    let first = ivs.next().expect("at least two intervals");
    if !first.left.is_zero() {
        return Err(AlgorithmError::NotAPartition(format!("leftmost interval {first} does not start at 0")));
    }
    let mut prev = first;
    for iv in ivs {
        match prev.right.cmp_finite_or_inf(&iv.left) {
            Ordering::Equal => {}
            Ordering::Greater => {
                return Err(AlgorithmError::NotAPartition(format!("{prev} overlaps {iv}")));
            }
            Ordering::Less => {
                return Err(AlgorithmError::NotAPartition(format!("gap between {prev} and {iv}")));
            }
        }
        prev = iv;
    }
    if !prev.right.is_infinite() {
        return Err(AlgorithmError::NotAPartition(format!("rightmost interval {prev} does not end at inf")));
    }
    Ok(())
}

/// Every left factor of a branch word is a branch word or has both children.
fn check_left_factors(branches: &[Branch]) -> Result<(), AlgorithmError> {
    let leaves: HashSet<&[Ln]> = branches.iter().map(|b| b.word.as_slice()).collect();
    let mut factors: HashSet<&[Ln]> = HashSet::new();
    for b in branches {
        for k in 0..=b.word.len() {
            factors.insert(&b.word[..k]);
        }
    }
    for f in &factors {
        let mut child = f.to_vec();
        child.push(Ln::L);
        let has_l = factors.contains(child.as_slice());
        *child.last_mut().unwrap() = Ln::N;
        let has_n = factors.contains(child.as_slice());
        let ok = if leaves.contains(f) { !has_l && !has_n } else { has_l && has_n };
        if !ok {
            return Err(AlgorithmError::NotAPartition(format!(
                "left factor {} breaks the binary splitting",
                ln_to_string(f)
            )));
        }
    }
    Ok(())
}

/// `B·F^e` for a word over `{L, N}`, used when parsing branch lists.
pub fn branch_matrix(word: &[Ln], flip: bool) -> Matrix {
    let b: Matrix = eval_ln(word);
    if flip {
        &b * &Matrix::f()
    } else {
        b
    }
}

