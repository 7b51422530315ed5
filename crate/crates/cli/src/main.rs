//! `commvar`: command-line front end for commuting tuples in compact Lie groups.
//!
//! Every command prints JSON on standard output. Exit status is 0 on success,
//! 2 on a domain error (with `{"error": kind, "message": ...}` on stdout) and 1
//! on malformed input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use commvar_core::central::{self, ComponentClass, Fingerprint};
use commvar_core::commvar::{self as cv, CommutingTuple, TupleWire};
use commvar_core::homotopy::{self, ContractionParams, GroupPath, PathOptions, PathWire};
use commvar_core::matgroup::GroupDescriptor;
use commvar_core::pi1::{self, CatalogGroup};
use commvar_core::weyl::{self, PreimageWire, SigmaPreimage};
use commvar_core::{acceptance, finmodel, Error};

#[derive(Parser, Debug)]
#[command(name = "commvar", version, about = "Commuting tuples in compact Lie groups")]
struct Cli {
    /// Machine output only (no human-readable summaries).
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel work (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Random seed.
    #[arg(long, global = true, env = "COMMVAR_SEED", default_value_t = 0)]
    seed: u64,
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a commuting tuple from the identity component or an exotic one.
    Sample(SampleArgs),
    /// Check that a tuple commutes (modulo the central subgroup) within --tol.
    Validate(InArgs),
    /// Classify the component of a tuple by its commutator fingerprint.
    Classify(InArgs),
    /// Invert the conjugation map on a regular tuple.
    Invert(InOutArgs),
    /// Regularity of a preimage: its Weyl stabilizer in cycle notation.
    Regular(InArgs),
    /// Contract a null-homotopic loop, writing every stage to a directory.
    Contract(ContractArgs),
    /// Explicit path from an identity-component tuple to the trivial tuple.
    ToIdentity(ToIdentityArgs),
    /// Histogram of commutator fingerprints of k-tuples in the extraspecial group E_p.
    Census(CensusArgs),
    /// Number of connected components of Hom(Z^k, G_{m,p}).
    Components(ComponentsArgs),
    /// Fundamental groups.
    #[command(subcommand)]
    Pi1(Pi1Command),
    /// Run the acceptance battery.
    Selftest(SelftestArgs),
    /// Sample a random closed loop (input for `contract`).
    SampleLoop(SampleLoopArgs),
}

#[derive(Args, Debug)]
struct InArgs {
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args, Debug)]
struct InOutArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ComponentArg {
    Identity,
    Exotic,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long, value_enum, default_value = "identity")]
    component: ComponentArg,
    /// Group name, e.g. SU(3), U(2), T^2, SO(3), G_{3,2}. Defaults to SU(3), or G_{3,2} for exotic samples.
    #[arg(long)]
    group: Option<String>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Upper-triangle fingerprint entries mu_12, mu_13, ..., mu_{k-1,k} (default: mu_12 = 1).
    #[arg(long)]
    fingerprint: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ContractArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Directory receiving stage_NNNNN.json files.
    #[arg(long)]
    stages: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    max_sweeps: usize,
    #[arg(long, default_value_t = 2_000)]
    stall_window: usize,
    #[arg(long, default_value_t = 8)]
    cone_stages: usize,
    #[arg(long, default_value_t = 1)]
    record_every: usize,
    /// On a stall, jitter the loop with this seed and continue.
    #[arg(long)]
    perturb: Option<u64>,
}

#[derive(Args, Debug)]
struct ToIdentityArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Waypoints per stage.
    #[arg(long, default_value_t = 32)]
    steps: usize,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    k: usize,
}

#[derive(Args, Debug)]
struct ComponentsArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    p: u64,
}

#[derive(Subcommand, Debug)]
enum Pi1Command {
    /// pi_1 of a component of Hom(Z^k, G).
    Hom {
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "identity")]
        component: ComponentArg,
        /// Fingerprint of the exotic component (default: mu_12 = 1).
        #[arg(long)]
        fingerprint: Option<String>,
    },
    /// pi_1 of G.
    Group {
        #[arg(long)]
        group: String,
    },
}

#[derive(Args, Debug)]
struct SelftestArgs {
    /// Comma-separated criterion ids to run (default: all).
    #[arg(long, value_delimiter = ',')]
    only: Vec<u32>,
}

#[derive(Args, Debug)]
struct SampleLoopArgs {
    #[arg(long, default_value = "SU(2)")]
    group: String,
    #[arg(long, default_value_t = 32)]
    segments: usize,
    /// Number of Fourier modes of the underlying smooth loop.
    #[arg(long, default_value_t = 3)]
    modes: usize,
    #[arg(long, default_value_t = 0.5)]
    max_step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure of a command.
enum Failure {
    Malformed(String),
    Domain(Error),
    Selftest(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BadArguments(_)
            | Error::InvalidDescriptor(_)
            | Error::InvalidElement(_)
            | Error::DescriptorMismatch => Failure::Malformed(e.to_string()),
            e => Failure::Domain(e),
        }
    }
}

/// Successful output: JSON, and optionally a human-readable rendering.
struct Output {
    json: Value,
    human: Option<String>,
}

impl Output {
    fn json(json: Value) -> Self {
        Output { json, human: None }
    }
}

type CmdResult = Result<Output, Failure>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("cannot parse {}: {e}", path.display())))
}

fn write_json(path: &Path, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    fs::write(path, text + "\n").map_err(|e| Failure::Malformed(format!("cannot write {}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn read_tuple(path: &Path) -> Result<CommutingTuple, Failure> {
    let w: TupleWire = read_json(path)?;
    Ok(CommutingTuple::from_wire(&w)?)
}

/// Write to `out` if given, otherwise return the value as output.
fn emit(v: Value, out: Option<&Path>) -> CmdResult {
    match out {
        Some(path) => {
            write_json(path, &v)?;
            Ok(Output::json(json!({ "written": path.display().to_string() })))
        }
        None => Ok(Output::json(v)),
    }
}

fn exotic_fingerprint(modulus: u64, k: usize, csv: Option<&str>) -> Result<Fingerprint, Failure> {
    match csv {
        Some(s) => Ok(Fingerprint::parse_csv(modulus, k, s)?),
        None => {
            if k < 2 {
                return Err(Failure::Malformed("exotic components need k >= 2".into()));
            }
            let mut entries = vec![0; k * (k - 1) / 2];
            entries[0] = 1 % modulus;
            Ok(Fingerprint::from_entries(modulus, k, entries)?)
        }
    }
}

fn cmd_sample(cli: &Cli, a: &SampleArgs) -> CmdResult {
    let name = a.group.clone().unwrap_or_else(|| match a.component {
        ComponentArg::Identity => "SU(3)".into(),
        ComponentArg::Exotic => "G_{3,2}".into(),
    });
    let d = Arc::new(GroupDescriptor::parse(&name)?);
    let t = match a.component {
        ComponentArg::Identity => cv::sample_identity_component(&d, a.k, cli.seed)?,
        ComponentArg::Exotic => {
            let modulus = central::commutator_group(&d)?.modulus();
            let f = exotic_fingerprint(modulus, a.k, a.fingerprint.as_deref())?;
            cv::sample_exotic(&d, a.k, &f, cli.seed)?
        }
    };
    emit(to_value(&t.to_wire()), a.out.as_deref())
}

fn cmd_validate(cli: &Cli, a: &InArgs) -> CmdResult {
    let t = read_tuple(&a.input)?;
    let report = cv::validate_tuple(&t, cli.tol)?;
    Ok(Output::json(to_value(&report)))
}

fn cmd_classify(cli: &Cli, a: &InArgs) -> CmdResult {
    let t = read_tuple(&a.input)?;
    let class = central::classify_component_tol(&t, cli.tol)?;
    Ok(Output::json(class.to_json()))
}

fn cmd_invert(cli: &Cli, a: &InOutArgs) -> CmdResult {
    let t = read_tuple(&a.input)?;
    let pre = weyl::sigma_inverse_regular_tol(&t, cli.tol)?;
    emit(to_value(&pre.to_wire()), a.out.as_deref())
}

fn cmd_regular(a: &InArgs) -> CmdResult {
    let w: PreimageWire = read_json(&a.input)?;
    let pre = SigmaPreimage::from_wire(&w)?;
    let report = weyl::is_regular(&pre.torus);
    let cycles: Vec<String> = report.stabilizer.iter().map(ToString::to_string).collect();
    let mut human = format!("regular: {}\nstabilizer order: {}\n", report.regular, report.order);
    for c in &cycles {
        human.push_str(c);
        human.push('\n');
    }
    Ok(Output {
        json: json!({
            "regular": report.regular,
            "order": report.order.to_string(),
            "stabilizer": cycles,
            "blocks": report.blocks,
        }),
        human: Some(human),
    })
}

fn cmd_contract(a: &ContractArgs) -> CmdResult {
    let w: PathWire = read_json(&a.input)?;
    let path = GroupPath::from_wire(&w)?;
    let params = ContractionParams {
        max_sweeps: a.max_sweeps,
        stall_window: a.stall_window,
        cone_stages: a.cone_stages,
        record_every: a.record_every.max(1),
        perturb: a.perturb,
        ..ContractionParams::default()
    };
    let c = homotopy::contract_loop(&path, &params)?;
    if let Some(dir) = &a.stages {
        fs::create_dir_all(dir).map_err(|e| Failure::Malformed(format!("cannot create {}: {e}", dir.display())))?;
        for (i, s) in c.stages.iter().enumerate() {
            write_json(&dir.join(format!("stage_{i:05}.json")), &to_value(&s.to_wire()))?;
        }
    }
    Ok(Output::json(json!({
        "sweeps": c.sweeps,
        "stages": c.stages.len(),
        "final_diameter": c.final_diameter,
    })))
}

fn cmd_to_identity(cli: &Cli, a: &ToIdentityArgs) -> CmdResult {
    let t = read_tuple(&a.input)?;
    let opts = PathOptions { steps: a.steps, tol: cli.tol, seed: cli.seed };
    let path = homotopy::path_to_identity(&t, &opts)?;
    let v = Value::Array(path.iter().map(|t| to_value(&t.to_wire())).collect());
    emit(v, a.out.as_deref())
}

fn cmd_census(a: &CensusArgs) -> CmdResult {
    let g = finmodel::extraspecial(a.p)?;
    let hist = finmodel::census_fingerprints(&g, g.center(), a.k)?;
    let mut rows = Vec::new();
    let mut nonzero = 0u64;
    let mut total = 0u64;
    for (f, &count) in &hist {
        total += count;
        if !f.is_zero() {
            nonzero += 1;
        }
        rows.push(json!({ "fingerprint": f.nonzero_triples(), "count": count }));
    }
    Ok(Output::json(json!({
        "group": g.name(),
        "k": a.k,
        "tuples": total,
        "nonzero_fingerprints": nonzero,
        "histogram": rows,
    })))
}

fn cmd_components(a: &ComponentsArgs) -> CmdResult {
    let n = finmodel::count_components_formula(a.k, a.m, a.p)?;
    let json = match u64::try_from(n) {
        Ok(v) => json!({ "N": v }),
        Err(_) => json!({ "N": n.to_string() }),
    };
    Ok(Output::json(json))
}

fn cmd_pi1(c: &Pi1Command) -> CmdResult {
    match c {
        Pi1Command::Hom { group, k, component, fingerprint } => {
            let g = CatalogGroup::parse(group)?;
            let class = match component {
                ComponentArg::Identity => ComponentClass::IdentityComponent,
                ComponentArg::Exotic => {
                    let modulus = match &g {
                        CatalogGroup::Spin7 => 2,
                        CatalogGroup::Descriptor(d) => central::commutator_group(d)?.modulus(),
                    };
                    ComponentClass::Exotic(exotic_fingerprint(modulus, *k, fingerprint.as_deref())?)
                }
            };
            Ok(Output::json(pi1::pi1_of_hom(&g, *k, &class)?.to_json()))
        }
        Pi1Command::Group { group } => {
            let g = pi1::pi1_of_group(&CatalogGroup::parse(group)?)?;
            Ok(Output::json(json!({
                "group": g.to_string(),
                "free_rank": g.free_rank,
                "torsion": g.torsion,
            })))
        }
    }
}

fn cmd_selftest(a: &SelftestArgs) -> CmdResult {
    type Criterion = fn() -> acceptance::CriterionReport;
    let all: [(u32, Criterion); 8] = [
        (1, acceptance::component_counts),
        (2, acceptance::finite_census),
        (3, acceptance::sigma_roundtrip),
        (4, acceptance::regular_injectivity),
        (5, acceptance::classification_soundness),
        (6, acceptance::explicit_homotopies),
        (7, acceptance::pi1_tables),
        (8, acceptance::exactness_bookkeeping),
    ];
    if let Some(bad) = a.only.iter().find(|id| !(1..=8).contains(*id)) {
        return Err(Failure::Malformed(format!("no acceptance criterion {bad}")));
    }
    let mut reports = Vec::new();
    let mut human = String::new();
    for (id, run) in all {
        if a.only.is_empty() || a.only.contains(&id) {
            let r = run();
            human.push_str(&format!("{r}\n"));
            reports.push(r);
        }
    }
    let passed = reports.iter().all(|r| r.passed);
    let json = json!({ "passed": passed, "criteria": reports });
    if passed {
        Ok(Output { json, human: Some(human) })
    } else {
        eprint!("{human}");
        Err(Failure::Selftest(json))
    }
}

fn cmd_sample_loop(cli: &Cli, a: &SampleLoopArgs) -> CmdResult {
    let d = Arc::new(GroupDescriptor::parse(&a.group)?);
    if a.segments < 2 || !(a.max_step > 0.0) {
        return Err(Failure::Malformed("need --segments >= 2 and --max-step > 0".into()));
    }
    let path = homotopy::random_loop(&d, a.segments, a.modes.max(1), a.max_step, cli.seed);
    emit(to_value(&path.to_wire()), a.out.as_deref())
}

fn run(cli: &Cli) -> CmdResult {
    if !(cli.tol > 0.0) {
        return Err(Failure::Malformed("--tol must be positive".into()));
    }
    match &cli.command {
        Command::Sample(a) => cmd_sample(cli, a),
        Command::Validate(a) => cmd_validate(cli, a),
        Command::Classify(a) => cmd_classify(cli, a),
        Command::Invert(a) => cmd_invert(cli, a),
        Command::Regular(a) => cmd_regular(a),
        Command::Contract(a) => cmd_contract(a),
        Command::ToIdentity(a) => cmd_to_identity(cli, a),
        Command::Census(a) => cmd_census(a),
        Command::Components(a) => cmd_components(a),
        Command::Pi1(c) => cmd_pi1(c),
        Command::Selftest(a) => cmd_selftest(a),
        Command::SampleLoop(a) => cmd_sample_loop(cli, a),
    }
}

/// Module prefixes accepted before a command, e.g. `commvar weyl invert`.
const MODULE_WORDS: [&str; 6] = ["commvar", "weyl", "central", "finmodel", "homotopy", "cli"];

fn normalized_args() -> Vec<String> {
    let mut args: Vec<String> = std::env::args().collect();
    if let Some(pos) = args.iter().skip(1).position(|a| !a.starts_with('-')) {
        let idx = pos + 1;
        if MODULE_WORDS.contains(&args[idx].as_str()) && args.len() > idx + 1 && !args[idx + 1].starts_with('-') {
            args.remove(idx);
        }
    }
    args
}

fn print_out(text: &str) {
    use std::io::Write;
    // a closed pipe downstream is not an error of ours
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(v: &Value) {
    print_out(&(serde_json::to_string_pretty(v).expect("serializable") + "\n"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(normalized_args()) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            print_json(&json!({ "error": "BadArguments", "message": "invalid --threads" }));
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(out) => {
            match (&out.human, cli.json) {
                (Some(h), false) => print_out(h),
                _ => print_json(&out.json),
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Malformed(message)) => {
            print_json(&json!({ "error": "MalformedInput", "message": message }));
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            if !cli.json {
                eprintln!("error: {e}");
            }
            print_json(&json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(2)
        }
        Err(Failure::Selftest(v)) => {
            print_json(&v);
            ExitCode::from(2)
        }
    }
}
