use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use transfinite_af::af::{parse_apx, to_apx, to_dot, FiniteAf};
use transfinite_af::checks::{bs_growth_csv, run_checks, CheckConfig, Injected, Suite};
use transfinite_af::constructions::{ConstructionError, Generated, GeneratorSpec, LazyGenerated};
use transfinite_af::grounded::{grounded_finite, stages_finite, verify_symbolic_stages, StageMap};
use transfinite_af::ordinal::Ordinal;
use transfinite_af::rank_analysis::{
    complement_of_grounded_plus, largest_self_defending, ta_rank, ts_path_exists, witness_path,
    RankAnalysisError, SelfDefendingWitness, StateRanker, TaTree, TsCertificate, TsTree,
};
use transfinite_af::tree::{
    bounded_path_search, build_tree_of_rank, rank_finite, truncate, CounterexampleTree,
    FiniteTree, FullBinaryTree, LazyTree, PathSearch,
};

const SEED_ENV: &str = "TRANSFINITE_AF_SEED";

/// Grounded semantics for finite and lazily presented infinite
/// argumentation frameworks.
///
/// Frameworks are given as generator specs: `apx:<path>`, `tree:<path.json>`,
/// `bs[:truncate=N]`, `ord:<ordinal>[:truncate=N]` or `union(<spec>,...)`.
#[derive(Parser)]
#[command(name = "transfinite-af", version, about)]
struct Cli {
    /// Node budget for materialised truncations and exhaustive expansions.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grounded extension and grounding ordinal; lazy inputs are checked
    /// against their generator's stage map.
    Grounded(GroundedArgs),
    /// Largest self-defending set with defence certificates.
    SelfDefending {
        spec: String,
    },
    /// Tree utilities.
    #[command(subcommand)]
    Tree(TreeCommand),
    /// Tree reductions of a finite framework.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Run the property suites over seeded random instances.
    Check(CheckArgs),
    /// Materialise a finite generator spec.
    Gen {
        spec: String,
        #[arg(long, value_enum, default_value_t = GenFormat::Apx)]
        format: GenFormat,
    },
}

#[derive(Args)]
struct GroundedArgs {
    spec: String,
    /// Include the stage of every (sampled) argument.
    #[arg(long)]
    stages: bool,
    /// Verify a claimed stage map (JSON, name -> ordinal or NEVER) for a
    /// finite framework.
    #[arg(long, value_name = "FILE")]
    claim: Option<PathBuf>,
    /// Arguments sampled by the verifier for lazy frameworks.
    #[arg(long, default_value_t = 200)]
    sample: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum TreeCommand {
    /// Rank of a finite tree.
    Rank {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
    },
    /// Finite truncation of the canonical tree of rank `ordinal`.
    Build {
        #[arg(long)]
        ordinal: String,
        #[arg(long, default_value_t = 10)]
        truncate_width: usize,
        #[arg(long)]
        truncate_depth: Option<usize>,
    },
    /// Look for a string of length `depth`, keeping `width` children per
    /// infinitely branching node.
    Search {
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 10)]
        width: usize,
        #[command(flatten)]
        source: TreeSource,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TreeSource {
    /// Finite tree JSON file.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Canonical tree of this rank.
    #[arg(long)]
    ordinal: Option<String>,
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    /// Arbitrarily long strings but no path.
    Counterexample,
    FullBinary,
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// `T_S`: a path certificate, or the rank of the finite tree.
    Ts {
        #[arg(long)]
        af: String,
        /// Comma-separated argument names.
        #[arg(long, default_value = "")]
        set: String,
        #[arg(long, default_value_t = 100)]
        depth: usize,
        /// Also print the whole tree when it is finite.
        #[arg(long)]
        expand: bool,
    },
    /// `T^a`: its rank and tree for grounded `a`, otherwise a path prefix.
    Ta {
        #[arg(long)]
        af: String,
        #[arg(long)]
        arg: String,
        #[arg(long, default_value_t = 100)]
        depth: usize,
    },
    /// The least-choice path through `T^a` for `a` outside the grounded
    /// extension.
    Witness {
        #[arg(long)]
        af: String,
        #[arg(long)]
        arg: String,
        #[arg(long, default_value_t = 100)]
        length: usize,
    },
}

#[derive(Args)]
struct CheckArgs {
    #[arg(value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 10)]
    max_args: usize,
    /// Overridden by the TRANSFINITE_AF_SEED environment variable.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write two-chain truncation growth (chain length vs. b0 stage) as CSV.
    #[arg(long, value_name = "FILE")]
    emit_plot: Option<PathBuf>,
    /// Also check this APX framework.
    #[arg(long, value_name = "FILE")]
    inject: Option<PathBuf>,
    /// Claimed stage map for the injected framework.
    #[arg(long, value_name = "FILE", requires = "inject")]
    stages: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Lemmas,
    Ordinals,
    Constructions,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Lemmas => Suite::Lemmas,
            SuiteArg::Ordinals => Suite::Ordinals,
            SuiteArg::Constructions => Suite::Constructions,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFormat {
    Apx,
    Dot,
}

/// A failed run and its exit code.
#[derive(Debug)]
enum Failure {
    /// 1
    Violation(String),
    /// 2
    Config(String),
    /// 3
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Violation(_) => 1,
            Failure::Config(_) => 2,
            Failure::Domain(_) => 3,
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Spec(_)
            | ConstructionError::Io { .. }
            | ConstructionError::Ordinal(_)
            | ConstructionError::Tree(_)
            | ConstructionError::Af(_) => Failure::Config(e.to_string()),
            ConstructionError::Unsupported(_) | ConstructionError::CapExceeded { .. } => {
                Failure::Domain(e.to_string())
            }
        }
    }
}

impl From<RankAnalysisError> for Failure {
    fn from(e: RankAnalysisError) -> Self {
        match e {
            RankAnalysisError::Af(_) => Failure::Config(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn parse_ordinal(text: &str) -> Result<Ordinal, Failure> {
    text.parse()
        .map_err(|e| Failure::Config(format!("ordinal `{text}`: {e}")))
}

fn build(spec: &str, cap: usize) -> Result<Generated, Failure> {
    let spec: GeneratorSpec = spec.parse()?;
    Ok(spec.build(cap)?)
}

fn build_finite(spec: &str, cap: usize) -> Result<FiniteAf, Failure> {
    match build(spec, cap)? {
        Generated::Finite(af) => Ok(af),
        Generated::Lazy(l) => Err(Failure::Domain(format!(
            "{} is infinite; this command needs a finite framework (add :truncate=N)",
            l.description
        ))),
    }
}

fn arg_index(af: &FiniteAf, name: &str) -> Result<usize, Failure> {
    af.index_of(name).map_err(|e| Failure::Config(e.to_string()))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialise")
}

fn grounded(args: &GroundedArgs, cap: usize) -> Result<String, Failure> {
    match build(&args.spec, cap)? {
        Generated::Finite(af) => grounded_finite_report(&af, args),
        Generated::Lazy(l) => grounded_lazy_report(&l, args),
    }
}

fn grounded_finite_report(af: &FiniteAf, args: &GroundedArgs) -> Result<String, Failure> {
    if let Some(path) = &args.claim {
        let value: Value = serde_json::from_str(&read(path)?)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        let claim = StageMap::from_json(af, &value).map_err(Failure::Config)?;
        let report = verify_symbolic_stages(af, &claim, af.len())
            .map_err(|e| Failure::Domain(e.to_string()))?;
        if !report.is_ok() {
            let lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
            return Err(Failure::Domain(format!(
                "claimed stages rejected:\n{}",
                lines.join("\n")
            )));
        }
    }
    let r = grounded_finite(af);
    if args.format == Format::Text {
        let mut out = format!(
            "grounded: {{{}}}\ngrounding ordinal: {}",
            af.names_of(&r.grounded).join(", "),
            r.grounding_ordinal
        );
        if args.stages {
            for (x, v) in stages_finite(af).iter() {
                out.push_str(&format!("\n{}: {v}", af.name(x)));
            }
        }
        return Ok(out);
    }
    let mut v = json!({
        "grounded": af.names_of(&r.grounded),
        "grounding_ordinal": r.grounding_ordinal.to_string(),
    });
    if args.stages {
        v["stages"] = stages_finite(af).to_json(af);
    }
    Ok(pretty(&v))
}

fn grounded_lazy_report(l: &LazyGenerated, args: &GroundedArgs) -> Result<String, Failure> {
    let report = verify_symbolic_stages(l.af.as_ref(), l.candidate.as_ref(), args.sample)
        .map_err(|e| Failure::Domain(e.to_string()))?;
    if !report.is_ok() {
        let lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        return Err(Failure::Domain(format!(
            "stage map of {} rejected:\n{}",
            l.description,
            lines.join("\n")
        )));
    }
    let sampled: Vec<usize> = (0..args.sample).filter(|&x| l.af.contains(x)).collect();
    let stage = |x: usize| l.candidate.stage_of(x);
    let grounded: Vec<String> = sampled
        .iter()
        .filter(|&&x| stage(x).is_some_and(|v| !v.is_never()))
        .map(|&x| l.af.label(x))
        .collect();
    if args.format == Format::Text {
        let mut out = format!(
            "{}: stage map verified on {} arguments\ngrounding ordinal: {}\ngrounded (sampled): {{{}}}",
            l.description,
            report.checked,
            report.grounding_ordinal,
            grounded.join(", ")
        );
        if args.stages {
            for &x in &sampled {
                if let Some(v) = stage(x) {
                    out.push_str(&format!("\n{}: {v}", l.af.label(x)));
                }
            }
        }
        return Ok(out);
    }
    let mut v = json!({
        "grounded": grounded,
        "grounding_ordinal": report.grounding_ordinal.to_string(),
        "verification": {
            "status": "verified",
            "generator": l.description,
            "sample": args.sample,
            "checked": report.checked,
        },
    });
    if args.stages {
        let stages: serde_json::Map<String, Value> = sampled
            .iter()
            .filter_map(|&x| Some((l.af.label(x), json!(stage(x)?.to_string()))))
            .collect();
        v["stages"] = Value::Object(stages);
    }
    Ok(pretty(&v))
}

fn self_defending(spec: &str, cap: usize) -> Result<String, Failure> {
    let af = build_finite(spec, cap)?;
    let set = largest_self_defending(&af);
    let complement = complement_of_grounded_plus(&af);
    let witness = SelfDefendingWitness::certify(&af, &set)
        .map_err(|e| Failure::Config(e.to_string()))?
        .ok_or_else(|| Failure::Violation("largest self-defending set has no certificate".into()))?;
    if set != complement {
        return Err(Failure::Violation(format!(
            "largest self-defending set {:?} differs from A minus G+ {:?}",
            af.names_of(&set),
            af.names_of(&complement)
        )));
    }
    let certificates: serde_json::Map<String, Value> = witness
        .certificates
        .iter()
        .map(|(&y, &z)| (af.name(y).to_string(), json!(af.name(z))))
        .collect();
    Ok(pretty(&json!({
        "largest_self_defending": af.names_of(&set),
        "equals_complement_of_grounded_plus": true,
        "certificates": certificates,
    })))
}

fn tree_cmd(cmd: &TreeCommand, cap: usize) -> Result<String, Failure> {
    match cmd {
        TreeCommand::Rank { input } => {
            let t = FiniteTree::from_json(&read(input)?)
                .map_err(|e| Failure::Config(e.to_string()))?;
            let r = rank_finite(&t, cap).map_err(|e| Failure::Domain(e.to_string()))?;
            Ok(pretty(&json!({ "rank": r.to_string(), "nodes": t.len() })))
        }
        TreeCommand::Build {
            ordinal,
            truncate_width,
            truncate_depth,
        } => {
            let alpha = parse_ordinal(ordinal)?;
            let t = truncate(&build_tree_of_rank(&alpha), *truncate_width, *truncate_depth, cap)
                .map_err(|e| Failure::Domain(e.to_string()))?;
            Ok(t.to_json())
        }
        TreeCommand::Search {
            depth,
            width,
            source,
        } => {
            let owned: Box<dyn LazyTree> = if let Some(path) = &source.input {
                Box::new(
                    FiniteTree::from_json(&read(path)?)
                        .map_err(|e| Failure::Config(e.to_string()))?,
                )
            } else if let Some(o) = &source.ordinal {
                Box::new(build_tree_of_rank(&parse_ordinal(o)?))
            } else {
                match source.builtin.expect("clap enforces one source") {
                    Builtin::Counterexample => Box::new(CounterexampleTree),
                    Builtin::FullBinary => Box::new(FullBinaryTree),
                }
            };
            Ok(pretty(&match bounded_path_search(owned.as_ref(), *depth, *width) {
                PathSearch::PathPrefix(p) => json!({ "path_prefix": p }),
                PathSearch::NoPathWithin(d) => json!({ "no_path_within": d, "width": width }),
            }))
        }
    }
}

fn expand(t: &dyn LazyTree, cap: usize) -> Result<Value, Failure> {
    truncate(t, usize::MAX, None, cap)
        .map(|t| t.to_json_value())
        .map_err(|e| Failure::Domain(e.to_string()))
}

fn reduce(cmd: &ReduceCommand, cap: usize) -> Result<String, Failure> {
    match cmd {
        ReduceCommand::Ts {
            af,
            set,
            depth,
            expand: full,
        } => {
            let af = build_finite(af, cap)?;
            let s = af.parse_set(set).map_err(|e| Failure::Config(e.to_string()))?;
            let mut v = match ts_path_exists(&af, &s, *depth, cap)? {
                TsCertificate::Path(p) => json!({ "path_exists": true, "prefix": p }),
                TsCertificate::NoPath { rank, states } => {
                    json!({ "path_exists": false, "rank": rank, "states": states })
                }
            };
            v["set"] = json!(af.names_of(&s));
            if *full && v["path_exists"] == json!(false) {
                v["tree"] = expand(&TsTree::new(&af, s), cap)?;
            }
            Ok(pretty(&v))
        }
        ReduceCommand::Ta { af, arg, depth } => {
            let af = build_finite(af, cap)?;
            let a = arg_index(&af, arg)?;
            if grounded_finite(&af).grounded.contains(a) {
                let mut ranker = StateRanker::new(&af, cap);
                let rank = ta_rank(&mut ranker, a)?;
                Ok(pretty(&json!({
                    "argument": arg,
                    "in_grounded": true,
                    "rank": rank,
                    "tree": expand(&TaTree::new(&af, a), cap)?,
                })))
            } else {
                let p = witness_path(&af, a, *depth)?;
                Ok(pretty(&json!({
                    "argument": arg,
                    "in_grounded": false,
                    "prefix": p,
                })))
            }
        }
        ReduceCommand::Witness { af, arg, length } => {
            let af = build_finite(af, cap)?;
            let a = arg_index(&af, arg)?;
            let p = witness_path(&af, a, *length)?;
            Ok(pretty(&json!({ "argument": arg, "prefix": p })))
        }
    }
}

fn seed_from_env(flag: u64) -> Result<u64, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Config(format!("{SEED_ENV}=`{s}` is not a natural number"))),
        Err(_) => Ok(flag),
    }
}

fn check(args: &CheckArgs) -> Result<String, Failure> {
    let seed = seed_from_env(args.seed)?;
    let inject = match &args.inject {
        None => None,
        Some(path) => {
            let af = parse_apx(&read(path)?).map_err(|e| Failure::Config(e.to_string()))?;
            let stages = match &args.stages {
                None => None,
                Some(p) => {
                    let value: Value = serde_json::from_str(&read(p)?)
                        .map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?;
                    Some(StageMap::from_json(&af, &value).map_err(Failure::Config)?)
                }
            };
            Some(Injected { af, stages })
        }
    };
    if let Some(path) = &args.emit_plot {
        fs::write(path, bs_growth_csv(100))
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    }
    let config = CheckConfig {
        suite: args.suite.into(),
        trials: args.trials,
        max_args: args.max_args,
        seed,
        inject,
    };
    let report = run_checks(&config);
    let text = format!(
        "suite {} seed {seed} trials {}\n{report}",
        config.suite, config.trials
    );
    if report.is_ok() {
        Ok(text)
    } else {
        Err(Failure::Violation(text))
    }
}

fn gen(spec: &str, format: GenFormat, cap: usize) -> Result<String, Failure> {
    let af = build_finite(spec, cap)?;
    Ok(match format {
        GenFormat::Apx => to_apx(&af),
        GenFormat::Dot => to_dot(&af),
    })
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Grounded(args) => grounded(args, cli.cap),
        Command::SelfDefending { spec } => self_defending(spec, cli.cap),
        Command::Tree(cmd) => tree_cmd(cmd, cli.cap),
        Command::Reduce(cmd) => reduce(cmd, cli.cap),
        Command::Check(args) => check(args),
        Command::Gen { spec, format } => gen(spec, *format, cli.cap),
    }
}

/// Writes to stdout, tolerating a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{}", text.trim_end());
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(failure) => {
            match &failure {
                // The report goes to stdout so it can be captured like a pass.
                Failure::Violation(text) => emit(text),
                Failure::Config(msg) => eprintln!("error: {msg}"),
                Failure::Domain(msg) => eprintln!("error: {msg}"),
            }
            log::debug!("exit code {}", failure.code());
            ExitCode::from(failure.code())
        }
    }
}
