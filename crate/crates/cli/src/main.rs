use std::fmt::Write as _;
use std::io::{Read, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use serret_core::algebra::Ln;
use serret_core::algorithm::{AlgorithmError, Window};
use serret_core::analysis::Analysis;
use serret_core::catalog;
use serret_core::expansion::{census, ln_expansion, orbit, pi_value, rational_orbits, sigma_equivalent, SigmaVerdict};
use serret_core::graph::{to_dot, LabelledGraph};
use serret_core::serret::{SerretOptions, SerretVerdict};
use serret_core::spec::{
    matrix_json, parse_window, partition_json, window_json, AlgorithmSpec, SpecError,
};
use serret_core::sync::{reset_sampling, SyncResult};
use serret_core::transducer::{graph_transducer, RunOutput, Transducer};
use serret_core::upword::UPWord;
use serret_core::value::parse_value;
use serret_core::Value;

const EXIT_VALIDATION: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "serret-lab", version, about = "Analyze slow continued fraction algorithms")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a spec and print its branches and partition; reads stdin without
    /// a spec argument.
    Validate {
        /// Spec file, `-` for stdin, or the name of a bundled algorithm.
        spec: Option<String>,
    },
    /// Index, fingerprint, defect, tail property and synchronizing word.
    Analyze {
        /// Spec file, `-` for stdin, or the name of a bundled algorithm.
        spec: String,
        #[command(flatten)]
        serret: SerretArgs,
    },
    /// The graph of the algorithm.
    Graph {
        /// Spec file, `-` for stdin, or the name of a bundled algorithm.
        spec: String,
        /// Write DOT to this file, or to stdout for `-`.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// The Schreier graph of the generated subgroup and the quotient map.
    Schreier {
        /// Spec file, `-` for stdin, or the name of a bundled algorithm.
        spec: String,
        /// Write DOT to this file, or to stdout for `-`.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Print a transducer, optionally running it on an ultimately periodic input.
    Transducer {
        /// Spec file, `-` for stdin, or the name of a bundled algorithm.
        spec: String,
        #[arg(long, value_enum, default_value_t = Kind::Graph)]
        kind: Kind,
        /// Input such as `NLL(NLN)`, or `41(2)` for the commutator kinds.
        #[arg(long)]
        input: Option<String>,
        /// Start state by name; defaults to the first state.
        #[arg(long)]
        from: Option<String>,
    },
    /// Symbolic orbit of a value, its {L,N} coding, or the value of a coding.
    Expand {
        /// Spec file, `-` for stdin, or the name of a bundled algorithm.
        spec: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        value: Option<String>,
        /// An ultimately periodic {L,N} word such as `NLL(NLN)`.
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = serret_core::expansion::DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Rewrite a spec as branch words, matrices or a partition; reads stdin
    /// without a spec argument.
    Convert {
        /// Spec file, `-` for stdin, or the name of a bundled algorithm.
        spec: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Words)]
        to: Format,
    },
    /// Decide the tail property.
    Serret {
        /// Spec file, `-` for stdin, or the name of a bundled algorithm.
        spec: String,
        #[command(flatten)]
        serret: SerretArgs,
    },
    /// Synchronizing word of the oriented graph automaton.
    Sync {
        /// Spec file, `-` for stdin, or the name of a bundled algorithm.
        spec: String,
        /// Random inputs read from all states at once.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 64)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Branches of the first-return map on a window, and first returns.
    Accelerate {
        /// Spec file, `-` for stdin, or the name of a bundled algorithm.
        spec: String,
        /// `i,j` with optional `open_left`, `open_right` or `open`.
        #[arg(long)]
        window: Option<String>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, allow_hyphen_values = true)]
        value: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
    },
    /// Tail classes among equivalent points near a value.
    Census {
        /// Spec file, `-` for stdin, or the name of a bundled algorithm.
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        value: String,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        /// Also test equivalence of this value with `--value`.
        #[arg(long, allow_hyphen_values = true)]
        against: Option<String>,
    },
}

#[derive(clap::Args)]
struct SerretArgs {
    /// Longest cycle searched for a counterexample.
    #[arg(long)]
    bound: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exit with status 3 when the tail property is undecided.
    #[arg(long)]
    strict: bool,
}

impl SerretArgs {
    fn options(&self) -> SerretOptions {
        SerretOptions { bound: self.bound, seed: self.seed, ..SerretOptions::default() }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Graph,
    Oriented,
    Commutator,
    Pruned,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Words,
    Matrices,
    Partition,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(e: impl std::fmt::Display) -> Failure {
        Failure { code: EXIT_VALIDATION, message: e.to_string() }
    }

    fn usage(e: impl std::fmt::Display) -> Failure {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }

    fn runtime(e: impl std::fmt::Display) -> Failure {
        Failure { code: 1, message: e.to_string() }
    }
}

struct Report {
    text: String,
    json: Json,
    code: u8,
}

impl Report {
    fn ok(text: String, json: Json) -> Report {
        Report { text, json, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli.cmd) {
        Ok(r) => {
            let mut out = std::io::stdout().lock();
            let _ = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r.json).expect("serializable"))
            } else {
                out.write_all(r.text.as_bytes())
            };
            ExitCode::from(r.code)
        }
        Err(f) => {
            if cli.json {
                println!("{}", json!({"error": f.message, "exit_code": f.code}));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// A spec file path, `-` for stdin, or the name of a bundled algorithm.
fn load_spec(arg: Option<&str>) -> Result<AlgorithmSpec, Failure> {
    let text = match arg {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(Failure::runtime)?;
            s
        }
        Some(p) if Path::new(p).exists() => std::fs::read_to_string(p).map_err(Failure::runtime)?,
        Some(name) => match catalog::entry(name) {
            Some(e) => return Ok(e.spec()),
            None => return Err(Failure::validation(format!("no spec file or bundled algorithm named {name:?}"))),
        },
    };
    AlgorithmSpec::from_json_str(&text).map_err(|e| Failure::validation(spec_error(&e)))
}

fn spec_error(e: &SpecError) -> String {
    match e {
        SpecError::Algorithm(a) => format!("{}: {e}", algorithm_error_kind(a)),
        _ => e.to_string(),
    }
}

fn algorithm_error_kind(e: &AlgorithmError) -> &'static str {
    match e {
        AlgorithmError::TooFewBranches(_) => "TooFewBranches",
        AlgorithmError::BadDeterminant { .. } => "BadDeterminant",
        AlgorithmError::NegativeEntries { .. } => "NegativeEntries",
        AlgorithmError::NotAPartition(_) => "NotAPartition",
        AlgorithmError::WrongOrder { .. } => "WrongOrder",
        AlgorithmError::NotUnimodular(..) => "NotUnimodular",
        AlgorithmError::OutOfDomain(_) => "OutOfDomain",
        AlgorithmError::BadWindow(_) => "BadWindow",
        AlgorithmError::Undefined { .. } => "Undefined",
        AlgorithmError::Algebra(_) => "Algebra",
    }
}

fn value_arg(s: &str) -> Result<Value, Failure> {
    parse_value(s).map_err(|e| Failure::usage(format!("bad value {s:?}: {e}")))
}

fn run(cmd: &Cmd) -> Result<Report, Failure> {
    match cmd {
        Cmd::Validate { spec } => validate(&load_spec(spec.as_deref())?),
        Cmd::Analyze { spec, serret } => analyze(&load_spec(Some(spec))?, serret),
        Cmd::Graph { spec, dot } => graph(&load_spec(Some(spec))?, dot.as_deref()),
        Cmd::Schreier { spec, dot } => schreier(&load_spec(Some(spec))?, dot.as_deref()),
        Cmd::Transducer { spec, kind, input, from } => {
            transducer(&load_spec(Some(spec))?, *kind, input.as_deref(), from.as_deref())
        }
        Cmd::Expand { spec, value, word, max_steps } => {
            let spec = spec.as_deref().map(|s| load_spec(Some(s))).transpose()?;
            expand(spec.as_ref(), value.as_deref(), word.as_deref(), *max_steps)
        }
        Cmd::Convert { spec, to } => convert(&load_spec(spec.as_deref())?, *to),
        Cmd::Serret { spec, serret } => serret_cmd(&load_spec(Some(spec))?, serret),
        Cmd::Sync { spec, samples, length, seed } => sync(&load_spec(Some(spec))?, *samples, *length, *seed),
        Cmd::Accelerate { spec, window, depth, value, max_steps } => {
            accelerate(&load_spec(Some(spec))?, window.as_deref(), *depth, value.as_deref(), *max_steps)
        }
        Cmd::Census { spec, value, radius, against } => {
            census_cmd(&load_spec(Some(spec))?, value, *radius, against.as_deref())
        }
    }
}

fn title(spec: &AlgorithmSpec) -> String {
    match &spec.name {
        Some(n) => format!("{n} {{{}}}", spec.algorithm.describe()),
        None => format!("{{{}}}", spec.algorithm.describe()),
    }
}

fn validate(spec: &AlgorithmSpec) -> Result<Report, Failure> {
    let t = &spec.algorithm;
    let mut text = format!("valid: {}\n", title(spec));
    let mut branches = Vec::new();
    for (a, b) in t.branches().iter().enumerate() {
        let e = if b.flip { -1 } else { 1 };
        writeln!(text, "  {a}: {:<6} {:<16} {} e={e:+}", b.name(), b.matrix.to_string(), b.interval).unwrap();
        branches.push(json!({
            "index": a,
            "word": b.name(),
            "matrix": matrix_json(&b.matrix),
            "interval": [b.interval.left.to_string(), b.interval.right.to_string()],
            "e": e,
        }));
    }
    let mut j = json!({"valid": true, "branches": branches, "partition": partition_json(t)});
    if let Some(w) = &spec.window {
        writeln!(text, "  window: {}", show_window(w)).unwrap();
        j["window"] = window_json(w);
    }
    if let Some(n) = &spec.name {
        j["name"] = json!(n);
    }
    Ok(Report::ok(text, j))
}

fn show_window(w: &Window) -> String {
    let mut s = format!("{},{}", w.i, w.j);
    match (w.open_left, w.open_right) {
        (true, true) => s.push_str(",open"),
        (true, false) => s.push_str(",open_left"),
        (false, true) => s.push_str(",open_right"),
        (false, false) => {}
    }
    s
}

fn sync_letter(a: usize) -> String {
    Ln::from_index(a).as_char().to_string()
}

fn serret_report(v: &SerretVerdict, strict: bool) -> u8 {
    if strict && matches!(v, SerretVerdict::Undecided { .. }) {
        EXIT_UNDECIDED
    } else {
        0
    }
}

fn analyze(spec: &AlgorithmSpec, args: &SerretArgs) -> Result<Report, Failure> {
    let an = Analysis::new(spec.algorithm.clone());
    let fp = &an.fingerprint;
    let verdict = an.serret(&args.options());
    let sync = an.sync().map_err(Failure::runtime)?;
    let fiber: Vec<String> = an.quotient.root_fiber().iter().map(|&v| an.graph.vertex_name(v)).collect();
    let mut text = format!("algorithm: {}\n", title(spec));
    writeln!(text, "graph vertices: {}", an.graph.vertex_count()).unwrap();
    writeln!(text, "index: {}", fp.index).unwrap();
    writeln!(text, "in Gamma: {}", fp.in_gamma).unwrap();
    if let Some(c) = fp.class {
        writeln!(text, "class: {}", c.as_str()).unwrap();
    }
    writeln!(text, "contains SRS: {}, SRSF: {}, SR2SF: {}", fp.has_srs, fp.has_srsf, fp.has_sr2sf).unwrap();
    writeln!(text, "over root: {{{}}}", fiber.join(", ")).unwrap();
    writeln!(text, "defect: {}", an.defect.defect).unwrap();
    writeln!(text, "serret: {verdict}").unwrap();
    writeln!(text, "sync: {}", show_sync(&sync)).unwrap();
    let j = json!({
        "algorithm": spec.to_json(),
        "graph_vertices": an.graph.vertex_count(),
        "index": fp.index,
        "in_gamma": fp.in_gamma,
        "class": fp.class.map(|c| c.as_str()),
        "fingerprint": fp.to_json(),
        "over_root": fiber,
        "defect": an.defect.defect,
        "defect_report": an.defect.to_json(&an.graph),
        "serret": verdict.to_json(),
        "sync": sync.to_json(&sync_letter),
    });
    Ok(Report { text, json: j, code: serret_report(&verdict, args.strict) })
}

fn show_sync(s: &SyncResult) -> String {
    match s {
        SyncResult::Synchronizing { word, shortest, pair_graph_size } => {
            let w: String = word.iter().map(|&a| sync_letter(a)).collect();
            let w = if w.is_empty() { "(empty)".to_string() } else { w };
            format!(
                "synchronizing word {w}{} (pair graph {pair_graph_size})",
                if *shortest { ", shortest" } else { "" }
            )
        }
        SyncResult::NotSynchronizing { pair_graph_size } => {
            format!("not synchronizing (pair graph {pair_graph_size})")
        }
    }
}

fn write_dot(path: Option<&Path>, dot: &str) -> Result<Option<String>, Failure> {
    match path {
        Some(p) => {
            std::fs::write(p, dot).map_err(Failure::runtime)?;
            Ok(Some(p.display().to_string()))
        }
        None => Ok(None),
    }
}

fn graph_listing<G: LabelledGraph>(g: &G) -> String {
    let mut text = String::new();
    for v in 0..g.vertex_count() {
        let name = |w| g.vertex_name(w);
        writeln!(
            text,
            "  {:<8} L -> {:<8} N -> {:<8} F -> {}",
            name(v),
            name(g.succ(v, serret_core::graph::Label::L)),
            name(g.succ(v, serret_core::graph::Label::N)),
            name(g.succ(v, serret_core::graph::Label::F))
        )
        .unwrap();
    }
    text
}

fn graph(spec: &AlgorithmSpec, dot: Option<&Path>) -> Result<Report, Failure> {
    let an = Analysis::new(spec.algorithm.clone());
    let g = &an.graph;
    let dot_text = to_dot(g, &spec.algorithm.describe());
    if dot == Some(Path::new("-")) {
        return Ok(Report::ok(dot_text.clone(), json!({"dot": dot_text})));
    }
    let written = write_dot(dot, &dot_text)?;
    let mut text = format!("graph of {}: {} vertices\n", title(spec), g.vertex_count());
    text.push_str(&graph_listing(g));
    let mut j = g.to_json();
    j["phi"] = json!(an.quotient.phi);
    if let Some(p) = written {
        writeln!(text, "dot written to {p}").unwrap();
        j["dot"] = json!(p);
    }
    Ok(Report::ok(text, j))
}

fn schreier(spec: &AlgorithmSpec, dot: Option<&Path>) -> Result<Report, Failure> {
    let an = Analysis::new(spec.algorithm.clone());
    let s = &an.quotient.schreier;
    let dot_text = to_dot(s, &spec.algorithm.describe());
    if dot == Some(Path::new("-")) {
        return Ok(Report::ok(dot_text.clone(), json!({"dot": dot_text})));
    }
    let written = write_dot(dot, &dot_text)?;
    let mut text = format!("schreier graph of {}: index {}\n", title(spec), s.index());
    text.push_str(&graph_listing(s));
    let phi: Vec<String> = (0..an.graph.vertex_count())
        .map(|v| format!("{} -> {}", an.graph.vertex_name(v), an.quotient.phi[v] + 1))
        .collect();
    writeln!(text, "quotient map: {}", phi.join(", ")).unwrap();
    let mut j = s.to_json();
    j["index"] = json!(s.index());
    j["phi"] = json!(an.quotient.phi);
    if let Some(p) = written {
        writeln!(text, "dot written to {p}").unwrap();
        j["dot"] = json!(p);
    }
    Ok(Report::ok(text, j))
}

fn transducer(spec: &AlgorithmSpec, kind: Kind, input: Option<&str>, from: Option<&str>) -> Result<Report, Failure> {
    let an = Analysis::new(spec.algorithm.clone());
    let (t, letters): (Transducer, bool) = match kind {
        Kind::Graph => (graph_transducer(&an.graph), true),
        Kind::Oriented => (an.oriented(), true),
        Kind::Commutator => (an.commutators().full, false),
        Kind::Pruned => (an.commutators().pruned, false),
    };
    let input_name = |a: usize| if letters { sync_letter(a) } else { a.to_string() };
    let mut text = format!("{} states\n", t.state_count());
    for (s, a, e) in t.edges() {
        let out: Vec<String> = e.output.iter().map(|b| b.to_string()).collect();
        let sep = if out.iter().any(|o| o.len() > 1) { "," } else { "" };
        writeln!(text, "  {} --{}|{}--> {}", t.name(s), input_name(a), out.join(sep), t.name(e.target)).unwrap();
    }
    let mut j = t.to_json(&input_name);
    if let Some(inp) = input {
        let word: UPWord<usize> = if letters {
            inp.parse::<UPWord<Ln>>().map_err(Failure::usage)?.map(|z| z.index())
        } else {
            inp.parse().map_err(Failure::usage)?
        };
        if word.prefix().iter().chain(word.period()).any(|&a| a >= t.alphabet()) {
            return Err(Failure::usage(format!("input symbol out of range 0..{}", t.alphabet())));
        }
        if t.is_empty() {
            return Err(Failure::usage("transducer has no states"));
        }
        let start = match from {
            Some(n) => t.state_by_name(n).ok_or_else(|| Failure::usage(format!("no state {n:?}")))?,
            None => 0,
        };
        let (out, ran) = match t.run_periodic(start, &word) {
            Ok(RunOutput::Infinite(w)) => (w.to_string(), json!({"output": w.to_string()})),
            Ok(RunOutput::Finite(w)) => {
                let s: Vec<String> = w.iter().map(|a| a.to_string()).collect();
                (format!("{} (finite)", s.join(",")), json!({"output": w, "finite": true}))
            }
            Err(e) => (format!("stopped: {e}"), json!({"stopped": e.to_string()})),
        };
        writeln!(text, "run from {} on {inp}: {out}", t.name(start)).unwrap();
        j["run"] = ran;
        j["run"]["from"] = json!(t.name(start));
    }
    Ok(Report::ok(text, j))
}

fn expand(spec: Option<&AlgorithmSpec>, value: Option<&str>, word: Option<&str>, max_steps: usize) -> Result<Report, Failure> {
    let mut text = String::new();
    let mut j = json!({});
    let x = match (value, word) {
        (Some(v), None) => value_arg(v)?,
        (None, Some(w)) => {
            let z: UPWord<Ln> = w.parse().map_err(Failure::usage)?;
            let x = pi_value(&z);
            writeln!(text, "value: {x}").unwrap();
            j["word"] = json!(z.to_string());
            x
        }
        _ => return Err(Failure::usage("give exactly one of --value or --word")),
    };
    j["value"] = json!(x.to_string());
    if let Value::Quadratic(q) = &x {
        if q.is_positive() {
            let z = ln_expansion(q).map_err(Failure::runtime)?;
            writeln!(text, "ln coding: {z}").unwrap();
            j["ln_coding"] = json!(z.to_string());
        }
    }
    if let Some(spec) = spec {
        let t = &spec.algorithm;
        match &x {
            Value::Rational(r) => {
                let orbits = rational_orbits(t, r).map_err(Failure::validation)?;
                for o in &orbits {
                    writeln!(text, "orbit: {o}").unwrap();
                }
                j["orbits"] = Json::Array(orbits.iter().map(|o| o.to_json()).collect());
            }
            Value::Quadratic(_) => {
                let o = orbit(t, &x, max_steps).map_err(Failure::validation)?;
                writeln!(text, "orbit: {o}").unwrap();
                j["orbit"] = json!(o.to_string());
            }
        }
    }
    Ok(Report::ok(text, j))
}

fn convert(spec: &AlgorithmSpec, to: Format) -> Result<Report, Failure> {
    let t = &spec.algorithm;
    let mut j = match to {
        Format::Words => json!({"branches": t.branches().iter().map(|b| b.name()).collect::<Vec<_>>()}),
        Format::Matrices => json!({"branches": t.branches().iter().map(|b| matrix_json(&b.matrix)).collect::<Vec<_>>()}),
        Format::Partition => json!({"partition": partition_json(t)}),
    };
    if let Some(n) = &spec.name {
        j["name"] = json!(n);
    }
    if let Some(d) = &spec.description {
        j["description"] = json!(d);
    }
    if let Some(w) = &spec.window {
        j["window"] = window_json(w);
    }
    let text = serde_json::to_string_pretty(&j).expect("serializable") + "\n";
    Ok(Report::ok(text, j))
}

fn serret_cmd(spec: &AlgorithmSpec, args: &SerretArgs) -> Result<Report, Failure> {
    let an = Analysis::new(spec.algorithm.clone());
    let v = an.serret(&args.options());
    let text = format!("{v}\n");
    Ok(Report { text, json: v.to_json(), code: serret_report(&v, args.strict) })
}

fn sync(spec: &AlgorithmSpec, samples: usize, length: usize, seed: u64) -> Result<Report, Failure> {
    let an = Analysis::new(spec.algorithm.clone());
    let t = an.oriented();
    let s = an.sync().map_err(Failure::runtime)?;
    let mut text = format!("{} states; {}\n", t.state_count(), show_sync(&s));
    let mut j = s.to_json(&sync_letter);
    j["states"] = json!(t.state_count());
    if samples > 0 {
        let r = reset_sampling(&t, samples, length, seed);
        writeln!(
            text,
            "sampling: {} of {} random inputs of length {} never reset",
            r.unsynchronized, r.samples, r.length
        )
        .unwrap();
        j["sampling"] = r.to_json();
    }
    Ok(Report::ok(text, j))
}

fn accelerate(
    spec: &AlgorithmSpec,
    window: Option<&str>,
    depth: usize,
    value: Option<&str>,
    max_steps: usize,
) -> Result<Report, Failure> {
    let t = &spec.algorithm;
    let w = match window {
        Some(s) => parse_window(s).map_err(Failure::usage)?,
        None => spec.window.ok_or_else(|| Failure::usage("no --window given and the spec has none"))?,
    };
    let ms = t.accel_branches(&w, depth).map_err(Failure::validation)?;
    let mut text = format!("window {}; {} branches up to depth {depth}\n", show_window(&w), ms.len());
    for m in &ms {
        writeln!(text, "  {m}").unwrap();
    }
    let mut j = json!({
        "window": window_json(&w),
        "depth": depth,
        "branches": ms.iter().map(matrix_json).collect::<Vec<_>>(),
    });
    if let Some(v) = value {
        let x = value_arg(v)?;
        match t.first_return(&w, &x, max_steps) {
            Ok(r) => {
                writeln!(text, "first return of {x}: {} after {} steps", r.value, r.time).unwrap();
                j["first_return"] = json!({
                    "value": r.value.to_string(),
                    "time": r.time,
                    "symbols": r.symbols,
                    "ambiguous": r.ambiguous,
                });
            }
            Err(e @ AlgorithmError::Undefined { .. }) => {
                writeln!(text, "first return of {x}: {e}").unwrap();
                j["first_return"] = json!({"undefined": e.to_string()});
            }
            Err(e) => return Err(Failure::validation(e)),
        }
    }
    Ok(Report::ok(text, j))
}

fn census_cmd(spec: &AlgorithmSpec, value: &str, radius: usize, against: Option<&str>) -> Result<Report, Failure> {
    let x = value_arg(value)?;
    let Value::Quadratic(q) = &x else {
        return Err(Failure::usage("census needs a quadratic irrational value"));
    };
    let an = Analysis::new(spec.algorithm.clone());
    let c = census(&an.algorithm, q, radius).map_err(Failure::validation)?;
    let mut text = format!(
        "{} points within radius {radius}; {} tail classes (defect {})\n",
        c.points.len(),
        c.class_count(),
        an.defect.defect
    );
    for (k, n) in &c.classes {
        let w = UPWord::periodic(k.clone()).expect("nonempty period");
        writeln!(text, "  {w}: {n} points").unwrap();
    }
    let mut j = c.to_json();
    j["defect"] = json!(an.defect.defect);
    j["radius"] = json!(radius);
    if let Some(y) = against {
        let y = value_arg(y)?;
        let Value::Quadratic(yq) = &y else {
            return Err(Failure::usage("--against needs a quadratic irrational value"));
        };
        let v = sigma_equivalent(&an.quotient.schreier, q, yq).map_err(Failure::validation)?;
        let (s, vj) = match &v {
            SigmaVerdict::Equivalent(m) => (format!("equivalent via {m}"), json!({"equivalent": matrix_json(m)})),
            SigmaVerdict::NotPiEquivalent => ("not equivalent under the full group".to_string(), json!("not_pi_equivalent")),
            SigmaVerdict::NotEquivalent => ("not equivalent under the subgroup".to_string(), json!("not_equivalent")),
        };
        writeln!(text, "{x} and {y}: {s}").unwrap();
        j["equivalence"] = vj;
    }
    Ok(Report::ok(text, j))
}
