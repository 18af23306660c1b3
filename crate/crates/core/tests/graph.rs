use serret_core::analysis::Analysis;
use serret_core::catalog::named;
use serret_core::graph::{to_dot, AlgGraph, Label, LabelledGraph, OrientedClass, Quotient};
use serret_core::spec::algorithm_from_words;
use serret_core::Matrix;

fn names(g: &AlgGraph) -> Vec<String> {
    (0..g.vertex_count()).map(|v| g.vertex_name(v)).collect()
}

fn succ_name(g: &AlgGraph, v: &str, z: Label) -> String {
    let i = names(g).iter().position(|n| n == v).unwrap();
    g.vertex_name(g.succ(i, z))
}

#[test]
fn graph_of_five_branches() {
    let g = AlgGraph::build(&named("index4"));
    let mut got = names(&g);
    got.sort();
    assert_eq!(got, ["1", "2", "L", "LF", "LL", "LLF", "LN", "LNF"]);
    let expect = [
        ("1", Label::L, "L"),
        ("1", Label::N, "1"),
        ("L", Label::L, "LL"),
        ("L", Label::N, "LN"),
        ("LN", Label::L, "1"),
        ("LN", Label::N, "2"),
        ("LL", Label::L, "1"),
        ("LL", Label::N, "2"),
        ("2", Label::L, "2"),
        ("2", Label::N, "LF"),
        ("LF", Label::L, "LNF"),
        ("LF", Label::N, "LLF"),
        ("LNF", Label::L, "1"),
        ("LNF", Label::N, "2"),
        ("LLF", Label::L, "1"),
        ("LLF", Label::N, "2"),
        ("L", Label::F, "LF"),
    ];
    for (v, z, w) in expect {
        assert_eq!(succ_name(&g, v, z), w, "{v} --{z:?}-->");
    }
    for v in 0..g.vertex_count() {
        assert_eq!(g.succ(g.succ(v, Label::F), Label::F), v);
    }
}

#[test]
fn gluing_to_the_schreier_graph() {
    let t = named("index4");
    let g = AlgGraph::build(&t);
    let q = Quotient::of(&g);
    let class = |v: &str| q.phi[names(&g).iter().position(|n| n == v).unwrap()];
    let merged = class("LN");
    for v in ["LL", "LNF", "LLF"] {
        assert_eq!(class(v), merged);
    }
    assert_eq!(class("L"), class("LF"));
    assert_eq!(q.schreier.index(), 4);

    let ln = Analysis::new(named("ln"));
    assert_eq!(ln.quotient.schreier.index(), ln.graph.vertex_count());
    assert_eq!(Analysis::new(named("defect6")).quotient.schreier.index(), 1);
}

#[test]
fn subgroup_membership() {
    let full = Analysis::new(named("defect6")).quotient.schreier;
    assert!(full.contains(&Matrix::f()));
    let gamma = Analysis::new(named("ln")).quotient.schreier;
    assert!(!gamma.contains(&Matrix::f()));
    assert!(gamma.contains(&(&Matrix::n().inverse() * &Matrix::l())));
}

#[test]
fn index_and_class() {
    let index = |w: &[&str]| Analysis::new(algorithm_from_words(w).unwrap()).quotient.schreier.index();
    assert_eq!(index(&["LLL", "LLNF", "LNL", "LNNF", "N"]), 4);
    assert_eq!(index(&["LL", "LNF", "N"]), 3);
    let even = Analysis::new(algorithm_from_words(&["LL", "LN", "NL", "NN"]).unwrap());
    assert_eq!(even.fingerprint.class, Some(OrientedClass::RSRS));
    assert_eq!(Analysis::new(named("tail-fails")).fingerprint.class, Some(OrientedClass::Gamma));
    assert_eq!(Analysis::new(named("farey")).fingerprint.class, None);
}

fn edge_lines(dot: &str) -> usize {
    dot.lines().filter(|l| l.contains("->")).count()
}

fn node_lines(dot: &str) -> usize {
    dot.lines().filter(|l| l.trim_start().starts_with('v') && !l.contains("->")).count()
}

#[test]
fn dot_export() {
    let ln = Analysis::new(named("ln"));
    let dot = to_dot(&ln.graph, "ln");
    assert_eq!((node_lines(&dot), edge_lines(&dot)), (2, 5));
    assert_eq!(dot, to_dot(&ln.graph, "ln"));
    let single = to_dot(&Analysis::new(named("farey")).quotient.schreier, "farey");
    assert_eq!((node_lines(&single), edge_lines(&single)), (1, 3));
    let four = to_dot(&Analysis::new(named("index4")).quotient.schreier, "index4");
    assert_eq!(node_lines(&four), 4);
    assert!(dot.contains("style=dashed") && dot.contains("style=solid") && dot.contains("style=dotted"));
}
