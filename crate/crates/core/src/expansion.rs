//! Symbolic orbits of exact points, the `{L, N}` coding and tail classes.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::algebra::{eval_ln, is_rotation, AlgebraError, Ln};
use crate::algorithm::{AlgorithmError, SlowAlgorithm};
use crate::graph::SchreierGraph;
use crate::upword::UPWord;
use crate::{Matrix, Quad, Rational, Value};

pub const DEFAULT_MAX_STEPS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("no period found within {0} steps")]
    BoundExceeded(usize),
    #[error("value {0} must lie in (0, ∞)")]
    NotPositive(String),
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// How the orbit of a rational point ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RationalEnd {
    /// Reached `0` or `∞`.
    Reached(Rational),
    /// Reached an endpoint shared by two branches of equal orientation; the
    /// next symbol may be either `lower` (sending the point to `∞`) or
    /// `upper` (sending it to `0`).
    Ambiguous { point: Rational, lower: usize, upper: usize },
    BoundExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orbit {
    Periodic(UPWord<usize>),
    Rational { symbols: Vec<usize>, end: RationalEnd },
}

impl Orbit {
    pub fn as_periodic(&self) -> Option<&UPWord<usize>> {
        match self {
            Orbit::Periodic(w) => Some(w),
            Orbit::Rational { .. } => None,
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Orbit::Periodic(w) => json!({"kind": "periodic", "orbit": w.to_string(),
                "prefix": w.prefix(), "period": w.period()}),
            Orbit::Rational { symbols, end } => {
                let end = match end {
                    RationalEnd::Reached(x) => json!({"reached": x.to_string()}),
                    RationalEnd::Ambiguous { point, lower, upper } => {
                        json!({"ambiguous_at": point.to_string(), "choices": [lower, upper]})
                    }
                    RationalEnd::BoundExceeded => json!("bound_exceeded"),
                };
                json!({"kind": "rational", "symbols": symbols, "end": end})
            }
        }
    }
}

impl std::fmt::Display for Orbit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Orbit::Periodic(w) => write!(f, "{w}"),
            Orbit::Rational { symbols, end } => {
                let wide = symbols.iter().any(|&s| s > 9);
                let s: Vec<String> = symbols.iter().map(|a| a.to_string()).collect();
                f.write_str(&s.join(if wide { "," } else { "" }))?;
                match end {
                    RationalEnd::Reached(x) if x.is_infinite() => write!(f, " -> inf"),
                    RationalEnd::Reached(x) => write!(f, " -> {x}"),
                    RationalEnd::Ambiguous { point, lower, upper } => {
                        write!(f, " -> {point} (ambiguous: {lower} or {upper})")
                    }
                    RationalEnd::BoundExceeded => write!(f, " ... (bound exceeded)"),
                }
            }
        }
    }
}

/// The symbolic orbit of `x` under the slow map.
pub fn orbit(t: &SlowAlgorithm, x: &Value, max_steps: usize) -> Result<Orbit, ExpansionError> {
    match x {
        Value::Quadratic(q) => quadratic_orbit(t, q, max_steps).map(Orbit::Periodic),
        Value::Rational(r) => Ok(rational_orbit(t, r)?),
    }
}

fn quadratic_orbit(t: &SlowAlgorithm, x: &Quad, max_steps: usize) -> Result<UPWord<usize>, ExpansionError> {
    let mut seen: HashMap<Quad, usize> = HashMap::new();
    let mut symbols = Vec::new();
    let mut cur = Value::Quadratic(x.clone());
    for _ in 0..=max_steps {
        let q = cur.as_quadratic().expect("quadratic orbits stay quadratic").clone();
        if let Some(&k) = seen.get(&q) {
            let period = symbols.split_off(k);
            return Ok(UPWord::new(symbols, period)?);
        }
        seen.insert(q, symbols.len());
        let s = t.step(&cur)?;
        symbols.push(s.symbol);
        cur = s.value;
    }
    Err(ExpansionError::BoundExceeded(max_steps))
}

fn rational_orbit(t: &SlowAlgorithm, x: &Rational) -> Result<Orbit, ExpansionError> {
    // Each step from an interior point lowers |p| + q, so the height bounds
    // the number of steps.
    let bound = x.height().to_usize().unwrap_or(usize::MAX);
    let mut symbols = Vec::new();
    let mut cur = x.clone();
    for _ in 0..=bound {
        if cur.is_zero() || cur.is_infinite() {
            return Ok(Orbit::Rational { symbols, end: RationalEnd::Reached(cur) });
        }
        let s = t.step(&Value::Rational(cur.clone()))?;
        if s.ambiguous {
            let end = RationalEnd::Ambiguous { point: cur, lower: s.symbol, upper: s.symbol + 1 };
            return Ok(Orbit::Rational { symbols, end });
        }
        symbols.push(s.symbol);
        cur = match s.value {
            Value::Rational(r) => r,
            Value::Quadratic(_) => unreachable!("rational points stay rational"),
        };
    }
    Ok(Orbit::Rational { symbols, end: RationalEnd::BoundExceeded })
}

/// Both orbits of a rational point whose orbit meets an ambiguous endpoint;
/// a single orbit otherwise.
pub fn rational_orbits(t: &SlowAlgorithm, x: &Rational) -> Result<Vec<Orbit>, ExpansionError> {
    let first = rational_orbit(t, x)?;
    match &first {
        Orbit::Rational { symbols, end: RationalEnd::Ambiguous { point, lower, upper } } => {
            let mut out = Vec::new();
            for &a in &[*lower, *upper] {
                let next = point.apply(&t.branch(a).matrix.inverse());
                let mut sym = symbols.clone();
                sym.push(a);
                match rational_orbit(t, &next)? {
                    Orbit::Rational { symbols: rest, end } => {
                        sym.extend(rest);
                        out.push(Orbit::Rational { symbols: sym, end });
                    }
                    Orbit::Periodic(_) => unreachable!(),
                }
            }
            Ok(out)
        }
        _ => Ok(vec![first]),
    }
}

fn require_positive(x: &Quad) -> Result<(), ExpansionError> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(ExpansionError::NotPositive(x.to_string()))
    }
}

/// The `{L, N}` coding of a positive quadratic irrational: `L` while below 1
/// (`x ↦ x/(1-x)`), `N` while above (`x ↦ x - 1`).
pub fn ln_expansion(x: &Quad) -> Result<UPWord<Ln>, ExpansionError> {
    require_positive(x)?;
    let (l_inv, n_inv) = (Matrix::l().inverse(), Matrix::n().inverse());
    let one = Rational::one();
    let mut seen: HashMap<Quad, usize> = HashMap::new();
    let mut word = Vec::new();
    let mut cur = x.clone();
    for _ in 0..=DEFAULT_MAX_STEPS {
        if let Some(&k) = seen.get(&cur) {
            let period = word.split_off(k);
            return Ok(UPWord::new(word, period)?);
        }
        seen.insert(cur.clone(), word.len());
        if cur.cmp_rational(&one).is_lt() {
            word.push(Ln::L);
            cur = cur.apply(&l_inv);
        } else {
            word.push(Ln::N);
            cur = cur.apply(&n_inv);
        }
    }
    Err(ExpansionError::BoundExceeded(DEFAULT_MAX_STEPS))
}

/// The fixed point of `m` in `[0, ∞]` that attracts forward iteration of a
/// product of nonnegative matrices: the nonnegative root of
/// `c·x² + (d - a)·x - b = 0`, or `∞` when `c = 0`.
pub fn forward_fixed_point(m: &Matrix) -> Value {
    let (a, b, c, d) = (m.a(), m.b(), m.c(), m.d());
    if c.is_zero() {
        return Value::Rational(Rational::infinity());
    }
    let (qa, qb, qc) = (c.clone(), d - a, -b.clone());
    let disc = &qb * &qb - BigInt::from(4) * &qa * &qc;
    let s = disc.sqrt();
    if &s * &s == disc {
        // Rational fixed points; take the larger (the other is ≤ 0).
        let num = -&qb + s;
        let den = BigInt::from(2) * &qa;
        let r = Rational::new(num, den).expect("nonzero denominator");
        return Value::Rational(r);
    }
    Value::Quadratic(Quad::root_of(&qa, &qb, &qc, qa.is_positive()).expect("irrational root"))
}

/// `π(prefix·period^ω)`: the prefix matrix applied to the attracting fixed
/// point of the period matrix.
pub fn pi_value(z: &UPWord<Ln>) -> Value {
    let p: Matrix = eval_ln(z.prefix());
    let q: Matrix = eval_ln(z.period());
    forward_fixed_point(&q).apply(&p)
}

/// Whether two ultimately periodic words share a tail.
pub fn tail_equivalent<S: Clone + PartialEq>(a: &UPWord<S>, b: &UPWord<S>) -> bool {
    a.tail_equivalent(b)
}

/// Regular continued fraction of a positive quadratic irrational, with the
/// complete quotients `x = K_k * x_k` along the way.
struct RegularCf {
    partial: Vec<BigInt>,
    complete: Vec<Quad>,
    /// Index where the period starts.
    start: usize,
}

fn regular_cf(x: &Quad) -> Result<RegularCf, ExpansionError> {
    let mut seen: HashMap<Quad, usize> = HashMap::new();
    let mut partial = Vec::new();
    let mut complete = Vec::new();
    let mut cur = x.clone();
    for _ in 0..=DEFAULT_MAX_STEPS {
        if let Some(&k) = seen.get(&cur) {
            return Ok(RegularCf { partial, complete, start: k });
        }
        seen.insert(cur.clone(), complete.len());
        let a = cur.floor();
        complete.push(cur.clone());
        // x = a + 1/x'  ⇔  x' = 1/(x - a).
        let m = Matrix::new(BigInt::zero(), BigInt::one(), BigInt::one(), -a.clone()).expect("unimodular");
        cur = cur.apply(&m);
        partial.push(a);
    }
    Err(ExpansionError::BoundExceeded(DEFAULT_MAX_STEPS))
}

fn cf_matrix(partial: &[BigInt]) -> Matrix {
    partial.iter().fold(Matrix::identity(), |acc, a| {
        &acc * &Matrix::new(a.clone(), BigInt::one(), BigInt::one(), BigInt::zero()).expect("unimodular")
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaVerdict {
    /// `y = M * x` with `M` in the subgroup.
    Equivalent(Matrix),
    /// The two points are not even equivalent under the full group.
    NotPiEquivalent,
    /// Equivalent under the full group but not under the subgroup.
    NotEquivalent,
}

/// Decides whether `y = M * x` for some `M` in the subgroup given by its
/// Schreier graph.
///
/// Both points are expanded as regular continued fractions; a common
/// complete quotient gives one `M₀` with `y = M₀ * x`. All others are
/// `M₀·G^k` with `G` the primitive automorph of `x`, and the cosets of
/// `M₀·G^k` repeat with period at most the index, so finitely many `k`
/// decide. Among the solutions found, the one with the smallest entries
/// over `k ∈ [-16, 16]` is returned.
pub fn sigma_equivalent(s: &SchreierGraph, x: &Quad, y: &Quad) -> Result<SigmaVerdict, ExpansionError> {
    require_positive(x)?;
    require_positive(y)?;
    if x.radicand() != y.radicand() {
        return Ok(SigmaVerdict::NotPiEquivalent);
    }
    let cx = regular_cf(x)?;
    let cy = regular_cf(y)?;
    let Some((k, m)) = (cx.start..cx.complete.len())
        .find_map(|k| (cy.start..cy.complete.len()).find(|&m| cy.complete[m] == cx.complete[k]).map(|m| (k, m)))
    else {
        return Ok(SigmaVerdict::NotPiEquivalent);
    };
    let kx = cf_matrix(&cx.partial[..k]);
    let ky = cf_matrix(&cy.partial[..m]);
    let m0 = &ky * &kx.inverse();
    // Primitive period read from position k, conjugated back to x.
    let p = cx.complete.len() - cx.start;
    let rotated: Vec<BigInt> = (0..p).map(|i| cx.partial[cx.start + (k - cx.start + i) % p].clone()).collect();
    let g = &(&kx * &cf_matrix(&rotated)) * &kx.inverse();
    let mut best: Option<Matrix> = None;
    let size = |m: &Matrix| m.entries().iter().map(|e| e.abs()).max().unwrap();
    let g_inv = g.inverse();
    let mut fwd = m0.clone();
    let mut bwd = m0.clone();
    for step in 0..=16 {
        for cand in [&fwd, &bwd] {
            if s.contains(cand) && best.as_ref().is_none_or(|b| size(cand) < size(b)) {
                best = Some(cand.clone());
            }
        }
        if step < 16 {
            fwd = &fwd * &g;
            bwd = &bwd * &g_inv;
        }
    }
    if best.is_none() {
        // The coset sequence is periodic with period at most the index.
        let mut cur = m0.clone();
        for _ in 0..s.index() {
            if s.contains(&cur) {
                best = Some(cur);
                break;
            }
            cur = &cur * &g;
        }
    }
    Ok(match best {
        Some(m) => SigmaVerdict::Equivalent(m),
        None => SigmaVerdict::NotEquivalent,
    })
}

/// One point of a census with its orbit.
#[derive(Clone, Debug)]
pub struct CensusPoint {
    pub matrix: Matrix,
    pub value: Quad,
    pub orbit: UPWord<usize>,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub points: Vec<CensusPoint>,
    /// Tail classes keyed by the least rotation of the period, with sizes.
    pub classes: BTreeMap<Vec<usize>, usize>,
}

impl Census {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn to_json(&self) -> Json {
        json!({
            "points": self.points.len(),
            "class_count": self.class_count(),
            "classes": self.classes.iter().map(|(k, n)| json!({"period": k, "points": n})).collect::<Vec<_>>(),
        })
    }
}

/// The group elements given by words of length at most `radius` in the
/// branches and their inverses.
pub fn branch_ball(t: &SlowAlgorithm, radius: usize) -> Vec<Matrix> {
    let gens: Vec<Matrix> = t
        .branches()
        .iter()
        .flat_map(|b| [b.matrix.clone(), b.matrix.inverse()])
        .collect();
    let mut seen: HashSet<Matrix> = HashSet::from([Matrix::identity()]);
    let mut ball = vec![Matrix::identity()];
    let mut frontier = vec![Matrix::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for m in &frontier {
            for g in &gens {
                let p = m * g;
                if seen.insert(p.clone()) {
                    next.push(p.clone());
                    ball.push(p);
                }
            }
        }
        frontier = next;
    }
    ball
}

/// Tail classes met by the points `M * x`, `M` in the ball of the given
/// radius, that land in `(0, ∞)`.
pub fn census(t: &SlowAlgorithm, x: &Quad, radius: usize) -> Result<Census, ExpansionError> {
    require_positive(x)?;
    let mut points = Vec::new();
    let mut classes: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut values: HashSet<Quad> = HashSet::new();
    for m in branch_ball(t, radius) {
        let y = x.apply(&m);
        if !y.is_positive() || !values.insert(y.clone()) {
            continue;
        }
        let orbit = quadratic_orbit(t, &y, DEFAULT_MAX_STEPS)?;
        *classes.entry(orbit.tail_key()).or_default() += 1;
        points.push(CensusPoint { matrix: m, value: y, orbit });
    }
    Ok(Census { points, classes })
}

/// Whether a finite word occurs in `w`'s infinite expansion.
pub fn occurs_in<S: Clone + PartialEq>(w: &UPWord<S>, factor: &[S]) -> bool {
    if factor.is_empty() {
        return true;
    }
    let n = w.prefix().len() + w.period().len() + factor.len();
    let text = w.take(n);
    text.windows(factor.len()).any(|win| win == factor)
}

/// Whether the two periods are rotations of each other, on raw words.
pub fn periods_conjugate<S: PartialEq>(u: &[S], w: &[S]) -> bool {
    is_rotation(crate::algebra::primitive_root(u), crate::algebra::primitive_root(w))
}
