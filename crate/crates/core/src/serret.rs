//! Decides the tail property from the pruned commutator transducer.

use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use crate::algebra::{is_rotation, primitive_root};
use crate::algorithm::SlowAlgorithm;
use crate::expansion::{forward_fixed_point, orbit, DEFAULT_MAX_STEPS};
use crate::graph::{AlgGraph, LabelledGraph, Quotient};
use crate::spec::matrix_json;
use crate::transducer::{CommutatorTransducers, Transducer};
use crate::upword::UPWord;
use crate::{Matrix, Quad, Value};

/// Why the tail property holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// The pruned transducer has no states.
    Trivial,
    /// The pruned transducer has no cycle, so every run stops.
    AllRunsStop,
    /// Every edge inside a cycle copies its input symbol.
    Copy,
    /// Inside every strongly connected component the output equals the input
    /// up to a bounded correction at both ends.
    Shift,
}

impl Certificate {
    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::Trivial => "trivial",
            Certificate::AllRunsStop => "all-runs-stop",
            Certificate::Copy => "copy",
            Certificate::Shift => "shift",
        }
    }
}

/// A pair of equivalent points with different tails, found on a cycle of the
/// pruned transducer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Graph vertex of the state carrying the cycle.
    pub vertex: usize,
    pub state_name: String,
    pub cycle_input: Vec<usize>,
    pub cycle_output: Vec<usize>,
    pub alpha: Quad,
    pub beta: Quad,
    /// `β = M * α` with `M` in the subgroup.
    pub relating: Matrix,
    pub alpha_orbit: UPWord<usize>,
    pub beta_orbit: UPWord<usize>,
}

/// Random long inputs fed to the pruned transducer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplingReport {
    pub samples: usize,
    pub length: usize,
    pub stopped: usize,
    pub survived: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SerretVerdict {
    Holds(Certificate),
    Fails(Box<Witness>),
    Undecided { bound: usize, sampling: SamplingReport },
}

impl SerretVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            SerretVerdict::Holds(_) => "holds",
            SerretVerdict::Fails(_) => "fails",
            SerretVerdict::Undecided { .. } => "undecided",
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            SerretVerdict::Holds(c) => json!({"verdict": "holds", "certificate": c.as_str()}),
            SerretVerdict::Fails(w) => json!({
                "verdict": "fails",
                "witness": {
                    "state": w.state_name,
                    "cycle_input": w.cycle_input,
                    "cycle_output": w.cycle_output,
                    "alpha": w.alpha.to_string(),
                    "beta": w.beta.to_string(),
                    "relating_matrix": matrix_json(&w.relating),
                    "alpha_orbit": w.alpha_orbit.to_string(),
                    "beta_orbit": w.beta_orbit.to_string(),
                },
            }),
            SerretVerdict::Undecided { bound, sampling } => json!({
                "verdict": "undecided",
                "bound": bound,
                "sampling": {
                    "samples": sampling.samples,
                    "length": sampling.length,
                    "stopped": sampling.stopped,
                    "survived": sampling.survived,
                },
            }),
        }
    }
}

impl std::fmt::Display for SerretVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SerretVerdict::Holds(c) => write!(f, "holds ({} certificate)", c.as_str()),
            SerretVerdict::Fails(w) => write!(
                f,
                "fails: alpha = {} has orbit {}, beta = {} * alpha = {} has orbit {}",
                w.alpha, w.alpha_orbit, w.relating, w.beta, w.beta_orbit
            ),
            SerretVerdict::Undecided { bound, sampling } => write!(
                f,
                "undecided up to cycle length {bound}; {} of {} random runs of length {} survived",
                sampling.survived, sampling.samples, sampling.length
            ),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SerretOptions {
    /// Longest closed walk searched for a witness; `None` means four times the
    /// number of pruned states.
    pub bound: Option<usize>,
    /// Cap on the number of walk extensions explored.
    pub budget: usize,
    pub samples: usize,
    pub sample_length: usize,
    pub seed: u64,
}

impl Default for SerretOptions {
    fn default() -> Self {
        SerretOptions { bound: None, budget: 1_000_000, samples: 1000, sample_length: 256, seed: 0 }
    }
}

pub fn serret_check(t: &SlowAlgorithm, g: &AlgGraph, q: &Quotient, opts: &SerretOptions) -> SerretVerdict {
    let ct = CommutatorTransducers::build(t, g, q);
    let p = &ct.pruned;
    if p.is_empty() {
        return SerretVerdict::Holds(Certificate::Trivial);
    }
    let comps = cyclic_components(p);
    if comps.is_empty() {
        return SerretVerdict::Holds(Certificate::AllRunsStop);
    }
    if let Some(c) = potential_certificate(p, &comps) {
        return SerretVerdict::Holds(c);
    }
    let bound = opts.bound.unwrap_or(4 * p.state_count());
    if let Some(w) = find_witness(t, g, q, &ct, &comps, bound, opts.budget) {
        return SerretVerdict::Fails(Box::new(w));
    }
    SerretVerdict::Undecided { bound, sampling: sample_runs(p, opts) }
}

/// Strongly connected components containing a cycle, each sorted.
fn cyclic_components(p: &Transducer) -> Vec<Vec<usize>> {
    let mut dg: DiGraph<(), ()> = DiGraph::new();
    let nodes: Vec<_> = (0..p.state_count()).map(|_| dg.add_node(())).collect();
    for (s, _, e) in p.edges() {
        dg.add_edge(nodes[s], nodes[e.target], ());
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&dg)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            c.sort_unstable();
            c
        })
        .filter(|c| c.len() > 1 || p.edges().any(|(s, _, e)| s == c[0] && e.target == c[0]))
        .collect();
    comps.sort();
    comps
}

/// Free group words over the symbols: `+(a+1)` for `a`, `-(a+1)` for `a⁻¹`.
type FreeWord = Vec<i64>;

fn letters(w: &[usize]) -> FreeWord {
    w.iter().map(|&a| a as i64 + 1).collect()
}

fn inverse(w: &[i64]) -> FreeWord {
    w.iter().rev().map(|&x| -x).collect()
}

fn reduce(w: impl IntoIterator<Item = i64>) -> FreeWord {
    let mut out: FreeWord = Vec::new();
    for x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

fn concat(parts: &[&[i64]]) -> FreeWord {
    reduce(parts.iter().flat_map(|p| p.iter().copied()))
}

/// Looks for `g` with `g(s)·a = w·g(t)` on every edge `s --a|w--> t` inside
/// each cyclic component.
fn potential_certificate(p: &Transducer, comps: &[Vec<usize>]) -> Option<Certificate> {
    let mut all_empty = true;
    for comp in comps {
        let g = component_potential(p, comp)?;
        all_empty &= g.iter().all(|(_, w)| w.is_empty());
    }
    Some(if all_empty { Certificate::Copy } else { Certificate::Shift })
}

fn component_potential(p: &Transducer, comp: &[usize]) -> Option<Vec<(usize, FreeWord)>> {
    let inside = |s: usize| comp.binary_search(&s).is_ok();
    let root = comp[0];
    let (u, w) = some_cycle(p, comp, root)?;
    for c in conjugators(&u, &w) {
        let mut g: Vec<Option<FreeWord>> = vec![None; p.state_count()];
        g[root] = Some(c);
        let mut queue = VecDeque::from([root]);
        while let Some(s) = queue.pop_front() {
            for a in 0..p.alphabet() {
                if let Some(e) = p.edge(s, a) {
                    if inside(e.target) && g[e.target].is_none() {
                        let gs = g[s].as_ref().unwrap();
                        g[e.target] = Some(concat(&[&inverse(&letters(&e.output)), gs, &[a as i64 + 1]]));
                        queue.push_back(e.target);
                    }
                }
            }
        }
        let ok = comp.iter().all(|&s| {
            (0..p.alphabet()).all(|a| match p.edge(s, a) {
                Some(e) if inside(e.target) => {
                    let lhs = concat(&[g[s].as_ref().unwrap(), &[a as i64 + 1]]);
                    let rhs = concat(&[&letters(&e.output), g[e.target].as_ref().unwrap()]);
                    lhs == rhs
                }
                _ => true,
            })
        });
        if ok {
            return Some(comp.iter().map(|&s| (s, g[s].clone().unwrap())).collect());
        }
    }
    None
}

/// Input and output of a shortest closed walk at `root` inside the component.
fn some_cycle(p: &Transducer, comp: &[usize], root: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let inside = |s: usize| comp.binary_search(&s).is_ok();
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; p.state_count()];
    let mut queue = VecDeque::from([root]);
    let mut seen = vec![false; p.state_count()];
    seen[root] = true;
    let mut closing = None;
    'bfs: while let Some(s) = queue.pop_front() {
        for a in 0..p.alphabet() {
            if let Some(e) = p.edge(s, a) {
                if e.target == root {
                    closing = Some((s, a));
                    break 'bfs;
                }
                if inside(e.target) && !seen[e.target] {
                    seen[e.target] = true;
                    prev[e.target] = Some((s, a));
                    queue.push_back(e.target);
                }
            }
        }
    }
    let (mut s, a) = closing?;
    let mut steps = vec![(s, a)];
    while let Some((r, b)) = prev[s] {
        steps.push((r, b));
        s = r;
    }
    steps.reverse();
    let u: Vec<usize> = steps.iter().map(|&(_, a)| a).collect();
    let w: Vec<usize> = steps.iter().flat_map(|&(s, a)| p.edge(s, a).unwrap().output.clone()).collect();
    Some((u, w))
}

/// Candidates `c` with `c·u·c⁻¹ = w`, shortest first: the splits `u = qp`,
/// `w = pq` give `p` and `q⁻¹`, each times a small power of the primitive
/// root of `u`.
fn conjugators(u: &[usize], w: &[usize]) -> Vec<FreeWord> {
    let mut out: Vec<FreeWord> = Vec::new();
    if u.len() != w.len() {
        return out;
    }
    let root = letters(primitive_root(u));
    let root_inv = inverse(&root);
    for k in 0..u.len().max(1) {
        let (q, pp) = u.split_at(k);
        if [pp, q].concat() != w {
            continue;
        }
        for base in [letters(pp), inverse(&letters(q))] {
            for power in [&[][..], &root[..], &root_inv[..]] {
                let c = concat(&[&base, power]);
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    out.sort_by_key(Vec::len);
    out
}

fn find_witness(
    t: &SlowAlgorithm,
    g: &AlgGraph,
    q: &Quotient,
    ct: &CommutatorTransducers,
    comps: &[Vec<usize>],
    bound: usize,
    budget: usize,
) -> Option<Witness> {
    let p = &ct.pruned;
    let mut spent = 0usize;
    for depth in 1..=bound {
        for comp in comps {
            for &start in comp {
                let mut input = Vec::new();
                let mut output = Vec::new();
                let found = walk(
                    p,
                    comp,
                    start,
                    start,
                    depth,
                    &mut input,
                    &mut output,
                    &mut spent,
                    budget,
                    &mut |u, w| verify_cycle(t, g, q, ct, start, u, w),
                );
                if found.is_some() {
                    return found;
                }
                if spent >= budget {
                    return None;
                }
            }
        }
    }
    None
}

type WalkCheck<'a> = dyn FnMut(&[usize], &[usize]) -> Option<Witness> + 'a;

#[allow(clippy::too_many_arguments)]
fn walk(
    p: &Transducer,
    comp: &[usize],
    start: usize,
    s: usize,
    remaining: usize,
    input: &mut Vec<usize>,
    output: &mut Vec<usize>,
    spent: &mut usize,
    budget: usize,
    check: &mut WalkCheck,
) -> Option<Witness> {
    if remaining == 0 {
        return if s == start { check(input, output) } else { None };
    }
    for a in 0..p.alphabet() {
        let Some(e) = p.edge(s, a) else { continue };
        if e.target < start || comp.binary_search(&e.target).is_err() {
            continue;
        }
        *spent += 1;
        if *spent > budget {
            return None;
        }
        input.push(a);
        let mark = output.len();
        output.extend_from_slice(&e.output);
        let r = walk(p, comp, start, e.target, remaining - 1, input, output, spent, budget, check);
        input.pop();
        output.truncate(mark);
        if r.is_some() {
            return r;
        }
    }
    None
}

/// Turns a closed walk `u | w` at a pruned state into a verified witness.
fn verify_cycle(
    t: &SlowAlgorithm,
    g: &AlgGraph,
    q: &Quotient,
    ct: &CommutatorTransducers,
    state: usize,
    u: &[usize],
    w: &[usize],
) -> Option<Witness> {
    if w.is_empty() || is_rotation(primitive_root(u), primitive_root(w)) {
        return None;
    }
    let Value::Quadratic(alpha) = forward_fixed_point(&t.eval_symbols(u)) else {
        return None;
    };
    let vertex = ct.pruned_states[state];
    let relating = g.element(vertex).clone();
    let beta = alpha.apply(&relating);
    if !q.schreier.contains(&relating) || !beta.is_positive() {
        return None;
    }
    let alpha_orbit = orbit(t, &Value::Quadratic(alpha.clone()), DEFAULT_MAX_STEPS).ok()?.as_periodic()?.clone();
    let beta_orbit = orbit(t, &Value::Quadratic(beta.clone()), DEFAULT_MAX_STEPS).ok()?.as_periodic()?.clone();
    if alpha_orbit.tail_equivalent(&beta_orbit) {
        return None;
    }
    Some(Witness {
        vertex,
        state_name: g.vertex_name(vertex),
        cycle_input: u.to_vec(),
        cycle_output: w.to_vec(),
        alpha,
        beta,
        relating,
        alpha_orbit,
        beta_orbit,
    })
}

fn sample_runs(p: &Transducer, opts: &SerretOptions) -> SamplingReport {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut stopped = 0;
    for _ in 0..opts.samples {
        let mut s = rng.gen_range(0..p.state_count());
        for _ in 0..opts.sample_length {
            match p.edge(s, rng.gen_range(0..p.alphabet())) {
                Some(e) => s = e.target,
                None => {
                    stopped += 1;
                    break;
                }
            }
        }
    }
    SamplingReport {
        samples: opts.samples,
        length: opts.sample_length,
        stopped,
        survived: opts.samples - stopped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction() {
        assert_eq!(reduce([1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(concat(&[&[1, 2], &inverse(&[1, 2])]), Vec::<i64>::new());
    }

    #[test]
    fn conjugators_solve_the_equation() {
        let (u, w) = (vec![0, 1, 2], vec![1, 2, 0]);
        for c in conjugators(&u, &w) {
            let lhs = concat(&[&c, &letters(&u)]);
            let rhs = concat(&[&letters(&w), &c]);
            assert_eq!(lhs, rhs);
        }
        assert!(!conjugators(&u, &w).is_empty());
        assert!(conjugators(&[0], &[1]).is_empty());
    }
}
