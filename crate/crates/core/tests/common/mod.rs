//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serret_core::algebra::{ln_to_string, Ln};
use serret_core::algorithm::SlowAlgorithm;
use serret_core::analysis::Analysis;
use serret_core::expansion::{census, ln_expansion, orbit, Orbit, DEFAULT_MAX_STEPS};
use serret_core::graph::{Label, LabelledGraph, OrientedClass};
use serret_core::spec::algorithm_from_words;
use serret_core::transducer::{graph_transducer, RunOutput};
use serret_core::upword::UPWord;
use serret_core::{Matrix, Quad, Rational, Value};

/// Branch words of a random valid algorithm: the leaves, left to right, of a
/// random binary tree of depth at most `max_depth` with at most `max_leaves`
/// leaves, each leaf flipped or not.
pub fn random_words<R: Rng>(rng: &mut R, max_depth: usize, max_leaves: usize) -> Vec<String> {
    let target = rng.gen_range(2..=max_leaves);
    let mut leaves: Vec<Vec<Ln>> = vec![Vec::new()];
    while leaves.len() < target {
        let open: Vec<usize> = (0..leaves.len()).filter(|&i| leaves[i].len() < max_depth).collect();
        if open.is_empty() {
            break;
        }
        let i = open[rng.gen_range(0..open.len())];
        let w = leaves.remove(i);
        let (mut l, mut n) = (w.clone(), w);
        l.push(Ln::L);
        n.push(Ln::N);
        leaves.insert(i, n);
        leaves.insert(i, l);
    }
    let flips = rng.gen_bool(0.7);
    leaves
        .iter()
        .map(|w| {
            let mut s = ln_to_string(w);
            if flips && rng.gen_bool(0.5) {
                s.push('F');
            }
            s
        })
        .collect()
}

pub fn random_algorithm<R: Rng>(rng: &mut R, max_depth: usize, max_leaves: usize) -> (Vec<String>, SlowAlgorithm) {
    let words = random_words(rng, max_depth, max_leaves);
    let t = algorithm_from_words(&words).expect("tree leaves form a valid algorithm");
    (words, t)
}

const NON_SQUARES: [i64; 12] = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19];

/// A random positive quadratic irrational `(p + q·√D) / r` of moderate size.
pub fn random_quad<R: Rng>(rng: &mut R) -> Quad {
    loop {
        let d = NON_SQUARES[rng.gen_range(0..NON_SQUARES.len())];
        let q = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let r = rng.gen_range(1..=12);
        let p = rng.gen_range(-20..=20);
        let x = Quad::from_i64(p, q, d, r).expect("non-square radicand");
        if x.is_positive() {
            return x;
        }
    }
}

/// A random quadratic irrational in `(0, 1)`.
pub fn random_unit_quad<R: Rng>(rng: &mut R) -> Quad {
    let x = random_quad(rng);
    let a = x.floor();
    x.apply(&translate(-a))
}

/// `x ↦ x + a`.
pub fn translate(a: BigInt) -> Matrix {
    Matrix::new(BigInt::from(1), a, BigInt::zero(), BigInt::from(1)).expect("unimodular")
}

/// A random rational in `(0, 1)` with denominator below `max_den`.
pub fn random_unit_rational<R: Rng>(rng: &mut R, max_den: i64) -> Rational {
    let q = rng.gen_range(2..max_den);
    let p = rng.gen_range(1..q);
    Rational::new(BigInt::from(p), BigInt::from(q)).expect("nonzero denominator")
}

pub fn random_ln_word<R: Rng>(rng: &mut R, max_len: usize) -> Vec<Ln> {
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| if rng.gen_bool(0.5) { Ln::L } else { Ln::N }).collect()
}

/// The Gauss map `x ↦ 1/x - floor(1/x)` and `floor(1/x)`, computed from the
/// definition.
pub fn gauss(x: &Value) -> (Value, BigInt) {
    match x {
        Value::Rational(r) => {
            let (p, q) = (r.numer().clone(), r.denom().clone());
            let a = &q / &p;
            let y = Rational::new(&q - &a * &p, p).expect("p > 0");
            (Value::Rational(y), a)
        }
        Value::Quadratic(x) => {
            let inv = x.apply(&Matrix::f());
            let a = inv.floor();
            (Value::Quadratic(inv.apply(&translate(-a.clone()))), a)
        }
    }
}

/// One step of the slow map from its definition: the symbol `a` with
/// `A_a⁻¹ * x ≥ 0`. For irrational `x` exactly one branch qualifies.
pub fn slow_step(t: &SlowAlgorithm, x: &Quad) -> (usize, Quad) {
    let mut hits = (0..t.len()).filter_map(|a| {
        let y = x.apply(&t.branch(a).matrix.inverse());
        y.is_positive().then_some((a, y))
    });
    let first = hits.next().expect("the intervals cover [0, inf]");
    assert!(hits.next().is_none(), "two branches claim an irrational point");
    first
}

/// The symbolic orbit of a quadratic irrational by iterating [`slow_step`]
/// until a point repeats.
pub fn slow_orbit(t: &SlowAlgorithm, x: &Quad) -> UPWord<usize> {
    let mut seen = std::collections::HashMap::new();
    let mut symbols = Vec::new();
    let mut cur = x.clone();
    loop {
        if let Some(&k) = seen.get(&cur) {
            let period = symbols.split_off(k);
            return UPWord::new(symbols, period).expect("nonempty period");
        }
        seen.insert(cur.clone(), symbols.len());
        let (a, y) = slow_step(t, &cur);
        symbols.push(a);
        cur = y;
    }
}

/// `[[a, b], [c, d]]` from small integers.
pub fn m(a: i64, b: i64, c: i64, d: i64) -> Matrix {
    Matrix::from_i64(a, b, c, d).expect("unimodular")
}

/// Largest index of the subgroup generated by the branches.
pub const MAX_INDEX: usize = 8;

/// Checks the structural invariants of one algorithm, feeding `points`
/// random quadratic irrationals through the graph transducer and through one
/// random state of the commutator transducer, and one through a census of
/// the given radius.
pub fn algorithm_invariants<R: Rng>(
    rng: &mut R,
    words: &[String],
    t: &SlowAlgorithm,
    points: usize,
    census_radius: usize,
) -> Result<(), String> {
    let fail = |what: &str| Err(format!("{words:?}: {what}"));
    let an = Analysis::new(t.clone());
    let s = &an.quotient.schreier;
    let phi = &an.quotient.phi;
    let g = &an.graph;

    if s.index() > MAX_INDEX {
        return fail(&format!("index {} exceeds {MAX_INDEX}", s.index()));
    }
    let fp = &an.fingerprint;
    if !(fp.has_srs || fp.has_srsf || fp.has_sr2sf) {
        return fail("none of SRS, SRSF, SRRSF in the subgroup");
    }
    if t.branches().iter().all(|b| !b.flip) {
        let odd = t.branches().iter().any(|b| b.word.len() % 2 == 1);
        let expected = if odd { OrientedClass::Gamma } else { OrientedClass::RSRS };
        if fp.class != Some(expected) {
            return fail(&format!("class {:?}, expected {expected:?}", fp.class));
        }
    }
    let longest = t.branches().iter().map(|b| b.word.len()).max().unwrap_or(0);
    if an.defect.defect < 1 || an.defect.defect > 2 * longest {
        return fail(&format!("defect {} outside [1, {}]", an.defect.defect, 2 * longest));
    }
    if t.branches().iter().any(|b| !s.contains(&b.matrix)) {
        return fail("a branch is not in its own subgroup");
    }

    // The quotient map commutes with every label and sends each vertex to
    // the coset of its group element.
    if phi[g.root()] != 0 {
        return fail("root does not map to the root coset");
    }
    for v in 0..g.vertex_count() {
        for z in Label::ALL {
            if phi[g.succ(v, z)] != s.perm(z)[phi[v]] {
                return fail(&format!("{z:?}-edge at vertex {v} does not lift"));
            }
        }
        if s.act_matrix(0, g.element(v)) != phi[v] {
            return fail(&format!("vertex {v} maps to the wrong coset"));
        }
    }

    let gt = graph_transducer(g);
    let comm = an.commutators();
    for _ in 0..points {
        let x = random_quad(rng);
        let expected = slow_orbit(t, &x);
        match orbit(t, &Value::Quadratic(x.clone()), DEFAULT_MAX_STEPS) {
            Ok(Orbit::Periodic(w)) if w == expected => {}
            other => return fail(&format!("orbit of {x}: {other:?}, oracle {expected}")),
        }
        let z = ln_expansion(&x).map_err(|e| e.to_string())?;
        let input = z.map(|l| l.index());
        match gt.run_periodic(0, &input) {
            Ok(RunOutput::Infinite(w)) if w == expected => {}
            other => return fail(&format!("graph transducer on {z}: {other:?}, oracle {expected}")),
        }
        let r = rng.gen_range(0..comm.full_states.len());
        {
            let v = comm.full_states[r];
            let y = x.apply(g.element(v));
            let target = slow_orbit(t, &y);
            match comm.full.run_periodic(r, &expected) {
                Ok(RunOutput::Infinite(w)) if w == target => {}
                other => {
                    return fail(&format!(
                        "commutator state {} on the orbit of {x}: {other:?}, oracle {target}",
                        comm.full.name(r)
                    ))
                }
            }
        }
    }

    if census_radius > 0 {
        let x = random_quad(rng);
        let c = census(t, &x, census_radius).map_err(|e| e.to_string())?;
        if c.class_count() > an.defect.defect {
            return fail(&format!("census of {x} finds {} classes, defect {}", c.class_count(), an.defect.defect));
        }
    }
    Ok(())
}

/// A random rational in `(0, ∞)` with numerator and denominator below `max`.
pub fn random_positive_rational<R: Rng>(rng: &mut R, max: i64) -> Rational {
    let p = rng.gen_range(1..max);
    let q = rng.gen_range(1..max);
    Rational::new(BigInt::from(p), BigInt::from(q)).expect("nonzero denominator")
}
