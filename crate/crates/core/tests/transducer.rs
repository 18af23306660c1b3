use serret_core::algebra::Ln;
use serret_core::analysis::Analysis;
use serret_core::catalog::named;
use serret_core::sync::{sync_check, SyncResult};
use serret_core::transducer::{graph_transducer, RunOutput, Transducer};
use serret_core::upword::UPWord;

fn edges(t: &Transducer) -> Vec<String> {
    let mut e: Vec<String> = t
        .edges()
        .map(|(s, a, e)| {
            let out: String = e.output.iter().map(|o| o.to_string()).collect();
            format!("{} {}|{} {}", t.name(s), Ln::from_index(a), out, t.name(e.target))
        })
        .collect();
    e.sort();
    e
}

fn run(t: &Transducer, input: &str) -> RunOutput {
    let z: UPWord<Ln> = input.parse().unwrap();
    t.run_periodic(0, &z.map(|l| l.index())).unwrap()
}

#[test]
fn oriented_component_of_the_failing_map() {
    let t = Analysis::new(named("tail-fails")).oriented();
    assert_eq!(
        edges(&t),
        ["1 L|0 1", "1 N| N", "N L| NL", "N N|3 1", "NL L|1 1", "NL N|2 1"]
    );
    assert_eq!(run(&t, "(NLN)"), RunOutput::Infinite("(2)".parse().unwrap()));
    assert_eq!(run(&t, "(NNL)"), RunOutput::Infinite("(30)".parse().unwrap()));
}

#[test]
fn two_letter_map_copies_its_input() {
    let an = Analysis::new(named("ln"));
    let t = graph_transducer(&an.graph);
    assert!(edges(&t).starts_with(&["1 L|0 1".to_string(), "1 N|1 1".to_string()]));
    assert_eq!(run(&t, "(L)"), RunOutput::Infinite("(0)".parse().unwrap()));
    let index4 = graph_transducer(&Analysis::new(named("index4")).graph);
    assert_eq!(index4.state_count(), 8);
    assert_eq!(run(&index4, "NLLNNLNNNL(LNL)"), RunOutput::Infinite("4121(2)".parse().unwrap()));
}

#[test]
fn commutator_transducers() {
    let an = Analysis::new(named("tail-holds"));
    let c = an.commutators();
    assert_eq!(c.full.names(), ["1", "N", "NN"]);
    let n = c.full.state_by_name("N").unwrap();
    let e = c.full.edge(n, 0).unwrap();
    assert_eq!((e.output.as_slice(), c.full.name(e.target)), (&[1][..], "1"));
    assert_eq!(c.pruned.state_count(), 2);
    assert!(Analysis::new(named("pythagorean")).commutators().pruned.is_empty());
}

#[test]
fn defects() {
    assert_eq!(Analysis::new(named("defect6")).defect.defect, 6);
    assert_eq!(Analysis::new(named("ln")).defect.defect, 1);
    let holds = Analysis::new(named("tail-holds"));
    assert_eq!(holds.defect.defect, 3);
    let nnn = &holds.defect.branches[3];
    assert_eq!(nnn.hits, 3);
}

#[test]
fn synchronization() {
    let fails = Analysis::new(named("tail-fails"));
    let r = fails.sync().unwrap();
    assert_eq!(r, SyncResult::Synchronizing { word: vec![0, 0], shortest: true, pair_graph_size: 6 });
    let full = Analysis::new(named("defect6"));
    assert_eq!(full.oriented().state_count(), 14);
    assert_eq!(full.sync().unwrap(), SyncResult::NotSynchronizing { pair_graph_size: 105 });
    let mut one = Transducer::new(vec!["only".into()], 2, vec![0]);
    one.set_edge(0, 0, 0, vec![]);
    one.set_edge(0, 1, 0, vec![]);
    assert_eq!(sync_check(&one).unwrap().word(), Some(&[][..]));
}

#[test]
fn graph_transducer_computes_orbits_of_every_bundled_algorithm() {
    use rand::SeedableRng;
    use serret_core::expansion::{ln_expansion, orbit, Orbit, DEFAULT_MAX_STEPS};
    use serret_core::value::parse_value;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(18);
    for e in serret_core::catalog::CATALOG {
        let t = e.algorithm();
        let gt = graph_transducer(&Analysis::new(t.clone()).graph);
        for _ in 0..200 {
            let x = loop {
                use rand::Rng;
                let (p, q, d, r) = (rng.gen_range(-20..=20), rng.gen_range(1..=3), rng.gen_range(2..=30), rng.gen_range(1..=12));
                if let Ok(v) = parse_value(&format!("({p}+{q}*sqrt({d}))/{r}")) {
                    if let Some(x) = v.as_quadratic().filter(|x| x.is_positive()) {
                        break x.clone();
                    }
                }
            };
            let z = ln_expansion(&x).unwrap();
            let Orbit::Periodic(want) = orbit(&t, &serret_core::Value::Quadratic(x.clone()), DEFAULT_MAX_STEPS).unwrap() else {
                panic!()
            };
            assert_eq!(gt.run_periodic(0, &z.map(|l| l.index())).unwrap(), RunOutput::Infinite(want), "{} at {x}", e.name);
        }
    }
}
