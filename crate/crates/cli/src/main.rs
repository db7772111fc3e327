//! `latcode`: constant-weight lattice codes from the command line.

mod io;
mod table2;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use latcode::bounds::{self, Applicability, BoundKind};
use latcode::clique_search::{
    count_maximum_cliques_with_witnesses, extract_code, max_clique, upper_bound_hint, CliqueCount,
    CompatibilityGraph, Mode, SearchOptions, DEFAULT_COUNT_CAP,
};
use latcode::cwcode::{CodeCatalog, ConstantWeightCode, DecodeOutcome, ReceivedSet};
use latcode::finite_lattice::{self, FiniteLattice, LatticeFile, MultiplicationTable, DEFAULT_SCAN_LIMIT};
use latcode::gf_poly::Polynomial;
use latcode::ideal_lattice::{Backend, ConstituentPool, DecomposableElement, PoolFile};
use latcode::saf_sim::{self, Adversary, Experiment, Setup, SymbolMap, TopologyConfig};

use crate::io::{inline_or_file, join, parse_indices, read_json, CliError, Sink};

#[derive(Parser, Debug)]
#[command(name = "latcode", version, about = "Constant-weight codes over uniquely decomposable lattice elements")]
struct Cli {
    /// Seed for every stochastic step of this invocation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the command's JSON document (code, pool, lattice or report) here.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Worker threads for searches and simulations.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect a constituent pool; compose and decompose elements.
    Pool(PoolArgs),
    /// Find a maximum clique (an optimal code) in a compatibility graph.
    Search(SearchArgs),
    /// Upper and lower bounds on the size of an (n,k,d) code.
    Bounds(BoundsArgs),
    /// Minimum-distance decoding of a received set.
    Decode(DecodeArgs),
    /// Analyse a finite lattice.
    Lattice(LatticeArgs),
    /// Store-and-forward transmission experiments.
    Simulate(SimulateArgs),
    /// Recompute the reference table of optimal codes.
    Table2(Table2Args),
}

#[derive(Args, Debug)]
struct PoolArgs {
    /// Pool file; defaults to the bundled seven binary irreducibles.
    #[arg(long)]
    pool: Option<PathBuf>,
    /// Code file: print the alphabet of composed elements.
    #[arg(long)]
    code: Option<PathBuf>,
    /// Indices to compose, e.g. 0,1,3,4.
    #[arg(long)]
    compose: Option<String>,
    /// Element to decompose: hex over F_2, polynomial JSON, or indices for a set pool.
    #[arg(long)]
    decompose: Option<String>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Minimum (or, with --exact, exact) distance; even.
    #[arg(long)]
    d: usize,
    /// Adjacency at distance exactly d (generalized Johnson graph).
    #[arg(long)]
    exact: bool,
    /// Count all maximum cliques.
    #[arg(long)]
    count: bool,
    #[arg(long, default_value_t = DEFAULT_COUNT_CAP)]
    cap: u64,
    /// Seconds before the search gives up and reports its best clique.
    #[arg(long)]
    timeout: Option<f64>,
    /// Do not stop early at the bounds-module upper bound.
    #[arg(long)]
    no_hint: bool,
    /// Number of witnesses to keep when counting.
    #[arg(long, default_value_t = 1)]
    witnesses: usize,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    d: u64,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    /// Code file; defaults to the bundled (7,4,4) code.
    #[arg(long)]
    code: Option<PathBuf>,
    /// Received constituent indices, e.g. 1,3,6.
    #[arg(long, allow_hyphen_values = true)]
    received: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LatticeExample {
    NonNoether,
    Diamond,
    Pentagon,
    Boolean3,
    Chain4,
}

#[derive(Args, Debug)]
struct LatticeArgs {
    /// Lattice file: {"elements":[..],"covers":[[lo,hi],..],"mult":[[..]]}.
    #[arg(long, conflicts_with = "example")]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "non-noether")]
    example: LatticeExample,
    #[arg(long, default_value_t = DEFAULT_SCAN_LIMIT)]
    scan_limit: usize,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Code file; defaults to the bundled (7,4,4) code.
    #[arg(long)]
    code: Option<PathBuf>,
    /// Pool file used to check recovered elements.
    #[arg(long)]
    pool: Option<PathBuf>,
    /// Field size; defaults to the smallest prime above n.
    #[arg(long)]
    q: Option<u64>,
    /// Topology JSON or @file: {"layers","width","max_indegree","density","seed"}.
    #[arg(long, default_value = r#"{"layers":4,"width":3,"max_indegree":3}"#)]
    topology: String,
    /// Adversary JSON or @file, e.g. {"model":"random_substitution","prob":0.05}.
    #[arg(long, default_value = r#"{"model":"clean"}"#)]
    adversary: String,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Per-trial CSV: trial,outcome,t,e,decoded_ok.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Table2Args {
    /// Seconds allowed per row.
    #[arg(long, default_value_t = 120.0)]
    budget: f64,
    /// Skip counting maximum cliques.
    #[arg(long)]
    no_count: bool,
    #[arg(long, default_value_t = DEFAULT_COUNT_CAP)]
    cap: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    let sink = Sink {
        json: cli.json,
        out: cli.out.clone(),
    };
    match &cli.command {
        Command::Pool(a) => cmd_pool(a, &sink),
        Command::Search(a) => cmd_search(a, &sink),
        Command::Bounds(a) => cmd_bounds(a, &sink),
        Command::Decode(a) => cmd_decode(a, &sink),
        Command::Lattice(a) => cmd_lattice(a, &sink),
        Command::Simulate(a) => cmd_simulate(a, cli.seed, &sink),
        Command::Table2(a) => cmd_table2(a, &sink),
    }
}

fn load_pool(path: Option<&PathBuf>) -> Result<ConstituentPool, CliError> {
    match path {
        Some(p) => read_json::<PoolFile>(p)?.into_pool().map_err(CliError::domain),
        None => Ok(ConstituentPool::example_binary()),
    }
}

fn load_code(path: Option<&PathBuf>) -> Result<ConstantWeightCode, CliError> {
    match path {
        Some(p) => ConstantWeightCode::try_from(read_json::<CodeCatalog>(p)?).map_err(CliError::domain),
        None => Ok(ConstantWeightCode::example_7_4_4()),
    }
}

fn element_string(e: &DecomposableElement) -> String {
    match e {
        DecomposableElement::Generator(p) => p.to_hex().unwrap_or_else(|_| p.to_string()),
        DecomposableElement::Subset(s) => format!("{{{}}}", join(s)),
    }
}

#[derive(Serialize)]
struct ComposedEntry {
    codeword: Vec<usize>,
    element: String,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum PoolReport {
    Pool(PoolFile),
    Alphabet(Vec<ComposedEntry>),
    Composed(ComposedEntry),
    Decomposed(ComposedEntry),
}

fn cmd_pool(a: &PoolArgs, sink: &Sink) -> Result<(), CliError> {
    let pool = load_pool(a.pool.as_ref())?;
    let file = PoolFile::from(&pool);
    let (report, text) = if let Some(code) = &a.code {
        let code = load_code(Some(code))?;
        let words: Vec<&[usize]> = code.codewords().iter().map(|c| c.indices()).collect();
        let elems = pool.full_alphabet(words.iter().copied()).map_err(CliError::domain)?;
        let entries: Vec<ComposedEntry> = words
            .iter()
            .zip(&elems)
            .map(|(w, e)| ComposedEntry {
                codeword: w.to_vec(),
                element: element_string(e),
            })
            .collect();
        let text = entries
            .iter()
            .map(|e| format!("[{}] {}\n", join(&e.codeword), e.element))
            .collect();
        (PoolReport::Alphabet(entries), text)
    } else if let Some(s) = &a.compose {
        let ix = parse_indices(s)?;
        let e = pool.compose(&ix).map_err(CliError::domain)?;
        let entry = ComposedEntry {
            codeword: ix,
            element: element_string(&e),
        };
        let text = format!("{}\n", entry.element);
        (PoolReport::Composed(entry), text)
    } else if let Some(s) = &a.decompose {
        let element = match pool.backend() {
            Backend::AbstractSet { .. } => DecomposableElement::Subset(parse_indices(s)?),
            Backend::PolynomialIdeal { field, .. } => {
                if s.trim_start().starts_with('{') {
                    DecomposableElement::Generator(io::parse_json::<Polynomial>(s, "--decompose")?)
                } else {
                    DecomposableElement::Generator(Polynomial::from_hex(s, *field).map_err(|e| CliError::Usage(format!("--decompose: {e}")))?)
                }
            }
        };
        let ix = pool.decompose(&element).map_err(CliError::domain)?;
        let entry = ComposedEntry {
            codeword: ix,
            element: element_string(&element),
        };
        let text = format!("[{}]\n", join(&entry.codeword));
        (PoolReport::Decomposed(entry), text)
    } else {
        let text = match pool.constituents() {
            Some(cs) => cs
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{i}: {} ({c})\n", c.to_hex().unwrap_or_else(|_| c.to_string())))
                .collect(),
            None => format!("abstract set pool with {} constituents\n", pool.len()),
        };
        (PoolReport::Pool(PoolFile::from(&pool)), text)
    };
    sink.emit(&report, &text, &file)
}

fn cmd_search(a: &SearchArgs, sink: &Sink) -> Result<(), CliError> {
    let mode = if a.exact { Mode::Exact(a.d) } else { Mode::AtLeast(a.d) };
    let graph = CompatibilityGraph::build(a.n, a.k, mode).map_err(|e| CliError::Usage(e.to_string()))?;
    let timeout = a
        .timeout
        .map(|s| {
            Duration::try_from_secs_f64(s).map_err(|_| CliError::Usage(format!("--timeout: `{s}` is not a duration")))
        })
        .transpose()?;
    let hint = if a.no_hint { None } else { upper_bound_hint(&graph) };
    let opts = SearchOptions {
        upper_bound: hint,
        timeout,
        parallel: true,
        ..Default::default()
    };
    let mut res = max_clique(&graph, &opts);
    let mut count_note = None;
    if a.count && res.complete {
        match count_maximum_cliques_with_witnesses(&graph, res.max_size, a.cap, a.witnesses.max(1), timeout) {
            Ok((c, w)) => {
                res.witnesses = w.iter().map(|c| c.iter().map(|&v| graph.vertex_indices(v)).collect()).collect();
                res.witness_vertices = w;
                res.count = Some(c);
            }
            Err(e) => count_note = Some(e.to_string()),
        }
    }
    let code = extract_code(&graph, &res.witness_vertices[0]).map_err(CliError::domain)?;
    let mode_name = if a.exact { "exact" } else { "at-least" };
    let mut text = format!(
        "({},{},{}) {mode_name}: maximum clique {}{} in {:.3} s\n",
        a.n,
        a.k,
        a.d,
        res.max_size,
        if res.complete { "" } else { " (incomplete, timed out)" },
        res.elapsed_secs
    );
    if let Some(h) = hint {
        text += &format!("upper bound: {h}\n");
    }
    match res.count {
        Some(CliqueCount::Exact(c)) => text += &format!("maximum cliques: {c}\n"),
        Some(CliqueCount::Capped(c)) => text += &format!("maximum cliques: at least {c} (cap reached)\n"),
        None => {}
    }
    if let Some(note) = count_note {
        text += &format!("count: {note}\n");
    }
    for w in code.codewords() {
        text += &format!("[{}]\n", join(w.indices()));
    }
    sink.emit(&res, &text, &CodeCatalog::from(&code))
}

fn applicability(a: Applicability) -> String {
    match a {
        Applicability::Value(v) => v.to_string(),
        Applicability::NotApplicable => "n/a".into(),
    }
}

fn cmd_bounds(a: &BoundsArgs, sink: &Sink) -> Result<(), CliError> {
    let report = bounds::bound_report(a.n, a.k, a.d).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut text = String::new();
    for e in &report.entries {
        let kind = match e.kind {
            BoundKind::Upper => "upper",
            BoundKind::Lower => "lower",
        };
        text += &format!("{:<17} {:<6} {:>12}  {}\n", e.name, kind, applicability(e.value), e.note);
    }
    text += &format!("{:<17} {:<6} {:>12}\n", "best", "upper", report.upper);
    if let Ok(c) = bounds::best_upper_bound(a.n, a.k, a.d) {
        if c < report.upper {
            text += &format!("{:<17} {:<6} {:>12}  with the complement parameters\n", "best", "upper", c);
        }
    }
    sink.emit(&report, &text, &report)
}

fn cmd_decode(a: &DecodeArgs, sink: &Sink) -> Result<(), CliError> {
    let code = load_code(a.code.as_ref())?;
    let received = ReceivedSet::new(parse_indices(&a.received)?, code.n()).map_err(|e| CliError::Usage(e.to_string()))?;
    let outcome = code.decode(&received).map_err(CliError::domain)?;
    let text = match &outcome {
        DecodeOutcome::Decoded(c) => format!("Decoded [{}]\n", join(c.indices())),
        DecodeOutcome::Ambiguous(ties) => format!(
            "Ambiguous {}\n",
            ties.iter().map(|c| format!("[{}]", join(c.indices()))).collect::<Vec<_>>().join(" ")
        ),
    };
    sink.emit(&outcome, &text, &outcome)
}

#[derive(Serialize)]
struct LatticeReport {
    elements: Vec<String>,
    top: String,
    bottom: String,
    meet_irreducibles: Vec<String>,
    theorem: finite_lattice::TheoremReport,
    diamond: Option<Vec<String>>,
    pentagon: Option<Vec<String>>,
    details: Vec<finite_lattice::ElementReport>,
}

fn cmd_lattice(a: &LatticeArgs, sink: &Sink) -> Result<(), CliError> {
    let (lattice, table): (FiniteLattice, Option<MultiplicationTable>) = match &a.file {
        Some(p) => read_json::<LatticeFile>(p)?.build().map_err(CliError::domain)?,
        None => match a.example {
            LatticeExample::NonNoether => {
                let (l, t) = FiniteLattice::example_non_noether();
                (l, Some(t))
            }
            LatticeExample::Diamond => (FiniteLattice::diamond(), None),
            LatticeExample::Pentagon => (FiniteLattice::pentagon(), None),
            LatticeExample::Boolean3 => (FiniteLattice::boolean(3).map_err(CliError::domain)?, None),
            LatticeExample::Chain4 => (FiniteLattice::chain(4).map_err(CliError::domain)?, None),
        },
    };
    let theorem = lattice
        .unique_decomposition_theorem_check(a.scan_limit)
        .map_err(CliError::domain)?;
    let label = |x: usize| lattice.label(x).to_string();
    let details = finite_lattice::element_reports(&lattice, table.as_ref());
    let report = LatticeReport {
        elements: lattice.labels().to_vec(),
        top: label(lattice.top()),
        bottom: label(lattice.bottom()),
        meet_irreducibles: lattice.meet_irreducibles().into_iter().map(label).collect(),
        theorem,
        diamond: lattice.find_diamond().map(|d| d.iter().map(|&x| label(x)).collect()),
        pentagon: lattice.find_pentagon().map(|p| p.iter().map(|&x| label(x)).collect()),
        details,
    };

    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut text = format!(
        "{} elements, top {}, bottom {}\nmeet-irreducible: {}\n",
        report.elements.len(),
        report.top,
        report.bottom,
        report.meet_irreducibles.join(" ")
    );
    text += &format!(
        "unique irreducible decompositions: {}\nBirkhoff (upper semimodular): {}\nno diamond sublattice: {}\nequivalence holds: {}\n",
        yes(report.theorem.unique_decompositions),
        yes(report.theorem.birkhoff),
        yes(report.theorem.modular_sublattices_distributive),
        yes(report.theorem.agrees)
    );
    if let Some(p) = &report.pentagon {
        text += &format!("pentagon sublattice: {}\n", p.join(" "));
    }
    for d in &report.details {
        let decs: Vec<String> = d.decompositions.iter().map(|s| format!("{{{}}}", s.join(","))).collect();
        text += &format!("  {:<6} irreducible={:<3} decompositions: {}", d.element, yes(d.irreducible), decs.join(" "));
        if let (Some(p), Some(q)) = (d.prime, d.primary) {
            text += &format!("  prime={} primary={}", yes(p), yes(q));
        }
        text += "\n";
    }
    sink.emit(&report, &text, &LatticeFile::from_lattice(&lattice, table.as_ref()))
}

/// Fills in `"seed"` from the invocation generator when the JSON omits it.
fn with_seed(mut v: Value, rng: &mut ChaCha8Rng) -> Value {
    let seed = rng.next_u64();
    if let Value::Object(m) = &mut v {
        m.entry("seed").or_insert(Value::from(seed));
    }
    v
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(v).map_err(|e| CliError::Usage(format!("{what}: at `{}`: {}", e.path(), e.inner())))
}

#[derive(Serialize)]
struct SimulationSummary {
    trials: usize,
    success: usize,
    detected_error: usize,
    decode_wrong: usize,
    node_failure: usize,
    success_rate: f64,
    topology: TopologyConfig,
    adversary: Adversary,
    seed: u64,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    trial: usize,
    outcome: &'a str,
    t: usize,
    e: usize,
    decoded_ok: bool,
}

fn cmd_simulate(a: &SimulateArgs, seed: u64, sink: &Sink) -> Result<(), CliError> {
    let code = load_code(a.code.as_ref())?;
    let pool = match (&a.pool, &a.code) {
        (Some(p), _) => Some(load_pool(Some(p))?),
        (None, None) => Some(ConstituentPool::example_binary()),
        (None, Some(_)) => None,
    };
    let map = match a.q {
        Some(q) => SymbolMap::new(q, (1..=code.n() as u64).collect()).map_err(|e| CliError::Usage(format!("--q: {e}")))?,
        None => SymbolMap::default_for(code.n()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exp_seed = rng.next_u64();
    let topology: TopologyConfig = from_value(with_seed(inline_or_file(&a.topology, "--topology")?, &mut rng), "--topology")?;
    let adversary: Adversary = from_value(with_seed(inline_or_file(&a.adversary, "--adversary")?, &mut rng), "--adversary")?;
    let setup = Setup {
        code: &code,
        pool: pool.as_ref(),
        map: &map,
        adversary: &adversary,
    };
    let exp = Experiment {
        topology: topology.clone(),
        trials: a.trials,
        seed: exp_seed,
    };
    let report = saf_sim::run_experiment(&exp, &setup).map_err(CliError::domain)?;
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
        for (i, r) in report.results.iter().enumerate() {
            w.serialize(CsvRow {
                trial: i,
                outcome: r.outcome.name(),
                t: r.t,
                e: r.e,
                decoded_ok: r.decoded_ok(),
            })
            .map_err(CliError::domain)?;
        }
        w.flush().map_err(CliError::domain)?;
    }
    let s = &report.stats;
    let summary = SimulationSummary {
        trials: s.trials,
        success: s.success,
        detected_error: s.detected_error,
        decode_wrong: s.decode_wrong,
        node_failure: s.node_failure,
        success_rate: s.rate(s.success),
        topology,
        adversary,
        seed,
    };
    let text = format!(
        "trials          {}\nsuccess         {} ({:.2}%)\ndetected error  {}\ndecode wrong    {}\nnode failure    {}\n",
        s.trials,
        s.success,
        100.0 * s.rate(s.success),
        s.detected_error,
        s.decode_wrong,
        s.node_failure
    );
    sink.emit(&summary, &text, &report)
}

fn cmd_table2(a: &Table2Args, sink: &Sink) -> Result<(), CliError> {
    let budget = Duration::try_from_secs_f64(a.budget).map_err(|_| CliError::Usage(format!("--budget: `{}` is not a duration", a.budget)))?;
    let opts = table2::Table2Options {
        budget,
        count: !a.no_count,
        cap: a.cap,
    };
    let rows: Vec<table2::RowReport> = table2::ROWS.iter().map(|r| table2::run_row(r, &opts)).collect();
    let text = table2::render(&rows);
    sink.emit(&rows, &text, &rows)
}
