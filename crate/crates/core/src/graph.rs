//! The graph of an algorithm and its quotient, the Schreier graph of the
//! group generated by the branches.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;
use serde_json::{json, Value as Json};

use crate::algebra::{generic_factor, ln_to_string, Letter, Ln};
use crate::algorithm::SlowAlgorithm;
use crate::Matrix;

/// Edge labels of the graphs: the monoid generators and the flip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    L,
    N,
    F,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::L, Label::N, Label::F];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::L => "L",
            Label::N => "N",
            Label::F => "F",
        }
    }

    fn dot_style(self) -> &'static str {
        match self {
            Label::L => "dashed",
            Label::N => "solid",
            Label::F => "dotted",
        }
    }
}

impl From<Ln> for Label {
    fn from(z: Ln) -> Label {
        match z {
            Ln::L => Label::L,
            Ln::N => Label::N,
        }
    }
}

/// A finite graph with exactly one outgoing edge per label at every vertex.
pub trait LabelledGraph {
    fn vertex_count(&self) -> usize;
    fn succ(&self, v: usize, z: Label) -> usize;
    fn vertex_name(&self, v: usize) -> String;
    fn root(&self) -> usize {
        0
    }

    /// Vertex reached from `v` by reading the labels in order.
    fn walk(&self, v: usize, labels: impl IntoIterator<Item = Label>) -> usize
    where
        Self: Sized,
    {
        labels.into_iter().fold(v, |u, z| self.succ(u, z))
    }
}

/// Deterministic DOT text: `L` dashed, `N` solid, `F` dotted; an `F` pair
/// between two vertices is drawn once, undirected.
pub fn to_dot<G: LabelledGraph>(g: &G, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{name}\" {{").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for v in 0..g.vertex_count() {
        let shape = if v == g.root() { ", shape=doublecircle" } else { "" };
        writeln!(out, "  v{v} [label=\"{}\"{shape}];", g.vertex_name(v)).unwrap();
    }
    for v in 0..g.vertex_count() {
        for z in Label::ALL {
            let w = g.succ(v, z);
            if z == Label::F {
                if w < v && g.succ(w, Label::F) == v {
                    continue;
                }
                let dir = if g.succ(w, Label::F) == v { ", dir=none" } else { "" };
                writeln!(out, "  v{v} -> v{w} [label=\"F\", style=dotted{dir}];").unwrap();
            } else {
                writeln!(out, "  v{v} -> v{w} [label=\"{}\", style={}];", z.as_str(), z.dot_style()).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

fn edges_json<G: LabelledGraph>(g: &G) -> Vec<Json> {
    let mut edges = Vec::new();
    for v in 0..g.vertex_count() {
        for z in Label::ALL {
            edges.push(json!({"from": v, "to": g.succ(v, z), "label": z.as_str()}));
        }
    }
    edges
}

/// A vertex of the graph of an algorithm: an internal left factor `B` of
/// the branch words (upper tree) or its twin `B·F` (lower tree).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub word: Vec<Ln>,
    pub twin: bool,
}

/// The graph of a slow algorithm.
///
/// Vertex `2k` is the `k`-th internal left factor in breadth-first order
/// (`L` before `N`), vertex `2k + 1` its twin. Vertex 0 is the root `1`
/// and vertex 1 the covertex `2`. Leaves are glued to `1` or `2`.
#[derive(Clone, Debug)]
pub struct AlgGraph {
    vertices: Vec<Vertex>,
    succ: Vec<[usize; 3]>,
    /// Branch symbol emitted by the `L`/`N` edge, if the edge closes a
    /// primitive path.
    output: Vec<[Option<usize>; 2]>,
    elements: Vec<Matrix>,
}

impl AlgGraph {
    pub fn build(t: &SlowAlgorithm) -> AlgGraph {
        let mut leaf: HashMap<Vec<Ln>, usize> = HashMap::new();
        for (a, b) in t.branches().iter().enumerate() {
            leaf.insert(b.word.clone(), a);
        }
        // Internal left factors in breadth-first order.
        let mut internal: Vec<Vec<Ln>> = Vec::new();
        let mut index: HashMap<Vec<Ln>, usize> = HashMap::new();
        let mut queue = VecDeque::from([Vec::new()]);
        while let Some(w) = queue.pop_front() {
            index.insert(w.clone(), internal.len());
            internal.push(w.clone());
            for z in Ln::ALL {
                let mut c = w.clone();
                c.push(z);
                if !leaf.contains_key(&c) {
                    queue.push_back(c);
                }
            }
        }
        let m = internal.len();
        let mut vertices = Vec::with_capacity(2 * m);
        let mut succ = vec![[0; 3]; 2 * m];
        let mut output = vec![[None; 2]; 2 * m];
        let mut elements = Vec::with_capacity(2 * m);
        for (k, w) in internal.iter().enumerate() {
            let b: Matrix = crate::algebra::eval_ln(w);
            vertices.push(Vertex { word: w.clone(), twin: false });
            vertices.push(Vertex { word: w.clone(), twin: true });
            elements.push(b.clone());
            elements.push(&b * &Matrix::f());
            for z in Ln::ALL {
                // Upper: B --Z--> BZ.
                let mut c = w.clone();
                c.push(z);
                let (target, out) = match leaf.get(&c) {
                    Some(&a) => (usize::from(t.branch(a).flip), Some(a)),
                    None => (2 * index[&c], None),
                };
                succ[2 * k][z.index()] = target;
                output[2 * k][z.index()] = out;
                // Twin: BF --Z--> B Z' F.
                let mut c = w.clone();
                c.push(z.flip());
                let (target, out) = match leaf.get(&c) {
                    Some(&a) => (usize::from(!t.branch(a).flip), Some(a)),
                    None => (2 * index[&c] + 1, None),
                };
                succ[2 * k + 1][z.index()] = target;
                output[2 * k + 1][z.index()] = out;
            }
            succ[2 * k][Label::F.index()] = 2 * k + 1;
            succ[2 * k + 1][Label::F.index()] = 2 * k;
        }
        AlgGraph { vertices, succ, output, elements }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// The group element `B` or `B·F` a vertex stands for.
    pub fn element(&self, v: usize) -> &Matrix {
        &self.elements[v]
    }

    /// Branch symbol emitted along the `z`-edge out of `v`, if any.
    pub fn output(&self, v: usize, z: Ln) -> Option<usize> {
        self.output[v][z.index()]
    }

    pub fn covertex(&self) -> usize {
        1
    }

    pub fn to_json(&self) -> Json {
        json!({
            "vertices": (0..self.vertex_count()).map(|v| self.vertex_name(v)).collect::<Vec<_>>(),
            "edges": edges_json(self),
            "root": 0,
        })
    }
}

impl LabelledGraph for AlgGraph {
    fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn succ(&self, v: usize, z: Label) -> usize {
        self.succ[v][z.index()]
    }

    fn vertex_name(&self, v: usize) -> String {
        let x = &self.vertices[v];
        match (x.word.is_empty(), x.twin) {
            (true, false) => "1".into(),
            (true, true) => "2".into(),
            (false, false) => ln_to_string(&x.word),
            (false, true) => format!("{}F", ln_to_string(&x.word)),
        }
    }
}

/// Schreier graph of a finite-index subgroup with respect to `L, N, F`.
///
/// Vertices are right cosets, numbered by breadth-first search from the
/// root coset over the labels in the order `L, N, F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierGraph {
    perms: [Vec<usize>; 3],
    inverse: [Vec<usize>; 3],
}

impl SchreierGraph {
    /// Builds from three permutations given in the label order `L, N, F`.
    ///
    /// Returns `None` unless each is a bijection.
    pub fn from_perms(perms: [Vec<usize>; 3]) -> Option<SchreierGraph> {
        let n = perms[0].len();
        let mut inverse = [vec![usize::MAX; n], vec![usize::MAX; n], vec![usize::MAX; n]];
        for z in 0..3 {
            if perms[z].len() != n {
                return None;
            }
            for (v, &w) in perms[z].iter().enumerate() {
                if w >= n || inverse[z][w] != usize::MAX {
                    return None;
                }
                inverse[z][w] = v;
            }
        }
        Some(SchreierGraph { perms, inverse })
    }

    /// The index of the subgroup.
    pub fn index(&self) -> usize {
        self.perms[0].len()
    }

    pub fn perm(&self, z: Label) -> &[usize] {
        &self.perms[z.index()]
    }

    /// Right action of one generator letter on cosets.
    pub fn act(&self, v: usize, x: Letter) -> usize {
        let (l, n, f) = (Label::L.index(), Label::N.index(), Label::F.index());
        match x {
            Letter::L => self.perms[l][v],
            Letter::N => self.perms[n][v],
            Letter::F => self.perms[f][v],
            Letter::LInv => self.inverse[l][v],
            Letter::NInv => self.inverse[n][v],
            // S = N L⁻¹ N, R = L N⁻¹.
            Letter::S => self.perms[n][self.inverse[l][self.perms[n][v]]],
            Letter::R => self.inverse[n][self.perms[l][v]],
            Letter::RInv => self.inverse[l][self.perms[n][v]],
        }
    }

    /// The coset `Σ·M` reached from coset `v`.
    pub fn act_matrix(&self, v: usize, m: &Matrix) -> usize {
        generic_factor(m).letters().iter().fold(v, |u, &x| self.act(u, x))
    }

    /// Membership of `m` in the subgroup.
    pub fn contains(&self, m: &Matrix) -> bool {
        self.act_matrix(0, m) == 0
    }

    pub fn to_json(&self) -> Json {
        json!({
            "vertices": (0..self.index()).map(|v| self.vertex_name(v)).collect::<Vec<_>>(),
            "edges": edges_json(self),
            "root": 0,
        })
    }
}

impl LabelledGraph for SchreierGraph {
    fn vertex_count(&self) -> usize {
        self.index()
    }

    fn succ(&self, v: usize, z: Label) -> usize {
        self.perms[z.index()][v]
    }

    fn vertex_name(&self, v: usize) -> String {
        (v + 1).to_string()
    }
}

/// The quotient map from the graph of an algorithm onto the Schreier graph.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub schreier: SchreierGraph,
    /// Coset of each vertex of the algorithm graph.
    pub phi: Vec<usize>,
}

impl Quotient {
    /// Glues vertices until every label acts bijectively and the defining
    /// relations of the group hold at every vertex.
    ///
    /// Two classes are merged when they have same-labelled edges into a
    /// common class, when they are the targets of same-labelled edges out of
    /// a common class, or when a relator read from one ends at the other.
    pub fn of(g: &AlgGraph) -> Quotient {
        let n = g.vertex_count();
        let mut uf: UnionFind<usize> = UnionFind::new(n);
        loop {
            close_labels(g, &mut uf);
            if !close_relators(g, &mut uf) {
                break;
            }
        }
        // Canonical numbering by breadth-first search from the root class.
        let mut number: HashMap<usize, usize> = HashMap::new();
        let mut rep: Vec<usize> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        number.insert(uf.find(0), 0);
        rep.push(0);
        while let Some(v) = queue.pop_front() {
            for z in Label::ALL {
                let w = g.succ(v, z);
                let c = uf.find(w);
                if let std::collections::hash_map::Entry::Vacant(e) = number.entry(c) {
                    e.insert(rep.len());
                    rep.push(w);
                    queue.push_back(w);
                }
            }
        }
        let phi: Vec<usize> = (0..n).map(|v| number[&uf.find(v)]).collect();
        let perms = Label::ALL.map(|z| rep.iter().map(|&v| phi[g.succ(v, z)]).collect::<Vec<_>>());
        let schreier = SchreierGraph::from_perms(perms).expect("quotient labels act bijectively");
        Quotient { schreier, phi }
    }

    /// `φ⁻¹{1}`: graph vertices lying over the root coset, in vertex order.
    pub fn root_fiber(&self) -> Vec<usize> {
        (0..self.phi.len()).filter(|&v| self.phi[v] == 0).collect()
    }
}

/// Relators of the group in the letters `L, N, F`: `F²`, `FLF = N`, and
/// `S², R³, (FS)², (FR)²` with `S = NL⁻¹N` and `R = LN⁻¹`.
const RELATORS: [&[(Label, bool)]; 6] = {
    use Label::{F, L, N};
    [
        &[(F, false), (F, false)],
        &[(F, false), (L, false), (F, false), (N, true)],
        &[(N, false), (L, true), (N, false), (N, false), (L, true), (N, false)],
        &[(L, false), (N, true), (L, false), (N, true), (L, false), (N, true)],
        &[(F, false), (N, false), (L, true), (N, false), (F, false), (N, false), (L, true), (N, false)],
        &[(F, false), (L, false), (N, true), (F, false), (L, false), (N, true)],
    ]
};

fn close_labels(g: &AlgGraph, uf: &mut UnionFind<usize>) {
    let n = g.vertex_count();
    loop {
        let mut changed = false;
        for z in Label::ALL {
            let mut into: HashMap<usize, usize> = HashMap::new();
            let mut out_of: HashMap<usize, usize> = HashMap::new();
            for v in 0..n {
                let (cv, cw) = (uf.find(v), uf.find(g.succ(v, z)));
                if let Some(&u) = into.get(&cw) {
                    changed |= uf.union(u, cv);
                } else {
                    into.insert(cw, cv);
                }
                if let Some(&w) = out_of.get(&cv) {
                    changed |= uf.union(w, cw);
                } else {
                    out_of.insert(cv, cw);
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Reads every relator from every class of a label-bijective quotient and
/// merges start and end where they differ. Returns whether anything merged.
fn close_relators(g: &AlgGraph, uf: &mut UnionFind<usize>) -> bool {
    let n = g.vertex_count();
    let mut fwd: [HashMap<usize, usize>; 3] = Default::default();
    let mut back: [HashMap<usize, usize>; 3] = Default::default();
    for v in 0..n {
        for z in Label::ALL {
            let (cv, cw) = (uf.find(v), uf.find(g.succ(v, z)));
            fwd[z.index()].insert(cv, cw);
            back[z.index()].insert(cw, cv);
        }
    }
    let classes: Vec<usize> = fwd[0].keys().copied().collect();
    let mut changed = false;
    for c in classes {
        for rel in RELATORS {
            let end = rel.iter().fold(uf.find(c), |u, &(z, inv)| {
                let u = uf.find(u);
                if inv {
                    back[z.index()][&u]
                } else {
                    fwd[z.index()][&u]
                }
            });
            changed |= uf.union(c, end);
        }
    }
    changed
}

/// Subgroup class of a group generated by determinant +1 branches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrientedClass {
    /// The full modular group.
    Gamma,
    /// Its index-2 subgroup generated by `R` and `SRS`.
    RSRS,
    /// Anything else (never produced by a valid algorithm).
    Other,
}

impl OrientedClass {
    pub fn as_str(self) -> &'static str {
        match self {
            OrientedClass::Gamma => "Gamma",
            OrientedClass::RSRS => "<R,SRS>",
            OrientedClass::Other => "other",
        }
    }
}

/// Group-theoretic summary of the group generated by the branches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub index: usize,
    pub in_gamma: bool,
    pub has_srs: bool,
    pub has_srsf: bool,
    pub has_sr2sf: bool,
    /// Present when every branch has determinant +1.
    pub class: Option<OrientedClass>,
}

impl Fingerprint {
    pub fn of(t: &SlowAlgorithm, s: &SchreierGraph) -> Fingerprint {
        let word = |w: &str| -> Matrix { w.parse::<crate::algebra::GenWord>().expect("fixed word").eval() };
        let in_gamma = t.branches().iter().all(|b| !b.flip);
        let class = in_gamma.then(|| {
            let (r, srs) = (word("R"), word("SRS"));
            match s.index() {
                2 => OrientedClass::Gamma,
                4 if s.contains(&r) && s.contains(&srs) => OrientedClass::RSRS,
                _ => OrientedClass::Other,
            }
        });
        Fingerprint {
            index: s.index(),
            in_gamma,
            has_srs: s.contains(&word("SRS")),
            has_srsf: s.contains(&word("SRSF")),
            has_sr2sf: s.contains(&word("SRRSF")),
            class,
        }
    }

    pub fn to_json(&self) -> Json {
        json!({
            "index": self.index,
            "in_gamma": self.in_gamma,
            "contains": {"SRS": self.has_srs, "SRSF": self.has_srsf, "SR2SF": self.has_sr2sf},
            "class": self.class.map(OrientedClass::as_str),
        })
    }
}

/// Vertices reachable from the root along `L`/`N` edges only.
pub fn oriented_component(g: &AlgGraph) -> Vec<usize> {
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for z in [Label::L, Label::N] {
            let w = g.succ(v, z);
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    (0..g.vertex_count()).filter(|&v| seen[v]).collect()
}
