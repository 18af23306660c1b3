//! Deterministic letter-to-word transducers and the two built from an algorithm.

use std::collections::HashMap;
use std::fmt;

use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::algebra::Ln;
use crate::algorithm::SlowAlgorithm;
use crate::graph::{AlgGraph, Label, LabelledGraph, Quotient};
use crate::upword::UPWord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("no edge from state {state} on input {symbol}")]
    Stuck { state: usize, symbol: usize, consumed: usize },
    #[error("state {0} does not exist")]
    NoSuchState(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub target: usize,
    pub output: Vec<usize>,
}

/// A deterministic transducer with input symbols `0..alphabet` and output
/// symbols `usize`. Missing edges make runs stop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    names: Vec<String>,
    alphabet: usize,
    delta: Vec<Vec<Option<Edge>>>,
    initial: Vec<usize>,
}

/// Output of a run on an ultimately periodic input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutput {
    Infinite(UPWord<usize>),
    /// The run goes on forever but stops emitting.
    Finite(Vec<usize>),
}

impl Transducer {
    pub fn new(names: Vec<String>, alphabet: usize, initial: Vec<usize>) -> Transducer {
        let n = names.len();
        Transducer { names, alphabet, delta: vec![vec![None; alphabet]; n], initial }
    }

    pub fn set_edge(&mut self, from: usize, input: usize, target: usize, output: Vec<usize>) {
        self.delta[from][input] = Some(Edge { target, output });
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn edge(&self, s: usize, input: usize) -> Option<&Edge> {
        self.delta[s][input].as_ref()
    }

    /// All edges as `(from, input, edge)` in state and symbol order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Edge)> {
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(s, row)| row.iter().enumerate().filter_map(move |(a, e)| e.as_ref().map(|e| (s, a, e))))
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().all(|row| row.iter().all(Option::is_some))
    }

    pub fn state_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Runs on a finite input; returns the output and the final state.
    pub fn run(&self, start: usize, input: &[usize]) -> Result<(Vec<usize>, usize), RunError> {
        if start >= self.state_count() {
            return Err(RunError::NoSuchState(start));
        }
        let mut out = Vec::new();
        let mut s = start;
        for (i, &a) in input.iter().enumerate() {
            let e = self.delta[s][a].as_ref().ok_or(RunError::Stuck { state: s, symbol: a, consumed: i })?;
            out.extend_from_slice(&e.output);
            s = e.target;
        }
        Ok((out, s))
    }

    /// Runs on an ultimately periodic input by detecting the repeated state
    /// at the start of a period.
    pub fn run_periodic(&self, start: usize, input: &UPWord<usize>) -> Result<RunOutput, RunError> {
        let (mut out, mut s) = self.run(start, input.prefix())?;
        let mut at: HashMap<usize, usize> = HashMap::new();
        let mut marks = Vec::new();
        let p = input.period().len();
        loop {
            if let Some(&k) = at.get(&s) {
                let cut = marks[k];
                let period = out.split_off(cut);
                return Ok(match UPWord::new(out.clone(), period) {
                    Ok(w) => RunOutput::Infinite(w),
                    Err(_) => RunOutput::Finite(out),
                });
            }
            at.insert(s, marks.len());
            marks.push(out.len());
            let (o, t) = self.run(s, input.period()).map_err(|e| match e {
                RunError::Stuck { state, symbol, consumed: c } => RunError::Stuck {
                    state,
                    symbol,
                    consumed: input.prefix().len() + (marks.len() - 1) * p + c,
                },
                other => other,
            })?;
            out.extend(o);
            s = t;
        }
    }

    /// The sub-transducer on the states reachable from `from`, renumbered in
    /// breadth-first order.
    pub fn restrict_reachable(&self, from: &[usize]) -> (Transducer, Vec<usize>) {
        let mut keep: Vec<usize> = Vec::new();
        let mut index = vec![usize::MAX; self.state_count()];
        for &s in from {
            if index[s] == usize::MAX {
                index[s] = keep.len();
                keep.push(s);
            }
        }
        let mut k = 0;
        while k < keep.len() {
            let s = keep[k];
            for e in self.delta[s].iter().flatten() {
                if index[e.target] == usize::MAX {
                    index[e.target] = keep.len();
                    keep.push(e.target);
                }
            }
            k += 1;
        }
        let names = keep.iter().map(|&s| self.names[s].clone()).collect();
        let initial = self.initial.iter().filter(|&&s| index[s] != usize::MAX).map(|&s| index[s]).collect();
        let mut t = Transducer::new(names, self.alphabet, initial);
        for (i, &s) in keep.iter().enumerate() {
            for (a, e) in self.delta[s].iter().enumerate() {
                if let Some(e) = e {
                    t.set_edge(i, a, index[e.target], e.output.clone());
                }
            }
        }
        (t, keep)
    }

    pub fn to_json(&self, input_names: &dyn Fn(usize) -> String) -> Json {
        let edges: Vec<Json> = self
            .edges()
            .map(|(s, a, e)| json!({"from": s, "to": e.target, "in": input_names(a), "out": e.output}))
            .collect();
        json!({"states": self.names, "edges": edges, "initial": self.initial})
    }
}

impl fmt::Display for Transducer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, a, e) in self.edges() {
            let out: Vec<String> = e.output.iter().map(|b| b.to_string()).collect();
            writeln!(f, "{} --{}|{}--> {}", self.names[s], a, out.join(","), self.names[e.target])?;
        }
        Ok(())
    }
}

/// Input symbol of a monoid letter in the graph transducer.
pub fn ln_symbol(z: Ln) -> usize {
    z.index()
}

pub fn ln_symbols(w: &[Ln]) -> Vec<usize> {
    w.iter().map(|&z| z.index()).collect()
}

/// The graph of the algorithm read as a transducer over `{L, N}`: `F`-edges
/// are dropped and each edge closing a primitive path emits its branch.
pub fn graph_transducer(g: &AlgGraph) -> Transducer {
    let names = (0..g.vertex_count()).map(|v| g.vertex_name(v)).collect();
    let mut t = Transducer::new(names, 2, vec![0]);
    for v in 0..g.vertex_count() {
        for z in Ln::ALL {
            let out = g.output(v, z).into_iter().collect();
            t.set_edge(v, z.index(), g.succ(v, Label::from(z)), out);
        }
    }
    t
}

/// The component of the root in the graph transducer.
pub fn oriented_transducer(g: &AlgGraph) -> Transducer {
    graph_transducer(g).restrict_reachable(&[0]).0
}

/// The commutator transducers: the full one on `φ⁻¹{1}` and the pruned one
/// without the root state.
#[derive(Clone, Debug)]
pub struct CommutatorTransducers {
    pub full: Transducer,
    /// Graph vertex of each state of `full`; the root comes first.
    pub full_states: Vec<usize>,
    pub pruned: Transducer,
    /// Graph vertex of each state of `pruned`.
    pub pruned_states: Vec<usize>,
}

impl CommutatorTransducers {
    pub fn build(t: &SlowAlgorithm, g: &AlgGraph, q: &Quotient) -> CommutatorTransducers {
        let states = q.root_fiber();
        debug_assert_eq!(states.first(), Some(&0));
        let pos: HashMap<usize, usize> = states.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let names: Vec<String> = states.iter().map(|&v| g.vertex_name(v)).collect();
        let mut full = Transducer::new(names, t.len(), vec![0]);
        for (r, &v) in states.iter().enumerate() {
            for (a, b) in t.branches().iter().enumerate() {
                let (out, end) = trace_branch(g, v, &b.word, b.flip);
                let s = *pos.get(&end).expect("commutator target lies over the root coset");
                full.set_edge(r, a, s, out);
            }
        }
        let pruned_states: Vec<usize> = states[1..].to_vec();
        let mut pruned = Transducer::new(full.names()[1..].to_vec(), t.len(), (0..pruned_states.len()).collect());
        for r in 1..states.len() {
            for a in 0..t.len() {
                let e = full.edge(r, a).expect("full transducer is complete");
                if e.target != 0 {
                    pruned.set_edge(r - 1, a, e.target - 1, e.output.clone());
                }
            }
        }
        CommutatorTransducers { full, full_states: states, pruned, pruned_states }
    }
}

/// Follows `word` then, if `flip`, the `F`-edge from `v`; collects outputs.
pub fn trace_branch(g: &AlgGraph, v: usize, word: &[Ln], flip: bool) -> (Vec<usize>, usize) {
    let mut out = Vec::new();
    let mut u = v;
    for &z in word {
        if let Some(a) = g.output(u, z) {
            out.push(a);
        }
        u = g.succ(u, Label::from(z));
    }
    if flip {
        u = g.succ(u, Label::F);
    }
    (out, u)
}

/// Per-branch data of the defect computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchDefect {
    pub branch: usize,
    /// Vertices of the two primitive paths of the branch.
    pub path_vertices: Vec<usize>,
    /// How many of them lie over the root coset.
    pub hits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectReport {
    pub branches: Vec<BranchDefect>,
    pub defect: usize,
}

impl DefectReport {
    pub fn compute(t: &SlowAlgorithm, g: &AlgGraph, q: &Quotient) -> DefectReport {
        let branches: Vec<BranchDefect> = t
            .branches()
            .iter()
            .enumerate()
            .map(|(a, b)| {
                // The path from 1 along the branch word visits 1, its proper
                // nonempty prefixes and the covertex or root; the twin path
                // visits the twins of the same vertices.
                let mut path = vec![0, 1];
                let mut u = 0;
                for &z in &b.word[..b.word.len() - 1] {
                    u = g.succ(u, Label::from(z));
                    path.push(u);
                    path.push(g.succ(u, Label::F));
                }
                path.sort_unstable();
                let hits = path.iter().filter(|&&v| q.phi[v] == 0).count();
                BranchDefect { branch: a, path_vertices: path, hits }
            })
            .collect();
        let defect = branches.iter().map(|b| b.hits).max().unwrap_or(0);
        DefectReport { branches, defect }
    }

    pub fn to_json(&self, g: &AlgGraph) -> Json {
        json!({
            "defect": self.defect,
            "branches": self.branches.iter().map(|b| json!({
                "branch": b.branch,
                "vertices": b.path_vertices.iter().map(|&v| g.vertex_name(v)).collect::<Vec<_>>(),
                "over_root": b.hits,
            })).collect::<Vec<_>>(),
        })
    }
}
