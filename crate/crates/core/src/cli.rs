//! The `qframe` command-line tool.
//!
//! Exit status: 0 on success or a positive verdict, 1 when a check-style
//! command reaches a negative verdict, 2 for usage, input or dimension
//! errors, 3 for numerical failures such as a singular frame.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::QframeError;
use crate::frames::{
    canonical_dual, covariance_check, frame_bounds, is_dual_pair, leonhardt_frame, closed_form_dual_for,
    random_frame, renormalize, unit_trace_dual, wootters_frame, Convention, Frame, FrameKind, DUALITY_TOL,
};
use crate::io::{
    cond_to_json, read_frame, read_json, read_operator, read_povm, table_to_csv, to_json_string, FrameJson, RepJson,
};
use crate::nogo::witness_batch;
use crate::operator_space::{born_rule, validate_state, DensityOp, Povm, HERMITICITY_TOL, PSD_TOL};
use crate::quasiprob::{
    classicality_check_with, deformed_prob, negativity, rep_effects, rep_state, total_prob, DualPair, Via,
    CLASSICAL_TOL,
};
use crate::star_algebra::{StarAlgebra, PURITY_TOL};

/// Environment variable consulted when no seed is given.
pub const SEED_ENV: &str = "QFRAME_SEED";

#[derive(Debug, Parser)]
#[command(name = "qframe", version, about = "Frames, duals and quasi-probability representations of qudits")]
pub struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Artifact format for `-o` outputs and tables.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build, dualize and inspect frames.
    #[command(subcommand)]
    Frame(FrameCommand),
    /// Represent states and measurements.
    #[command(subcommand)]
    Rep(RepCommand),
    /// Outcome probabilities by the trace rule and both representation calculi.
    Prob(ProbArgs),
    /// Negativity of a representation.
    Negativity(NegativityArgs),
    /// Classical-model check for a fixed frame and dual.
    ClassicalCheck(ClassicalArgs),
    /// Star products and kernels on representation space.
    Star(StarArgs),
    /// Positive-dual impossibility witness.
    #[command(subcommand)]
    Nogo(NogoCommand),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Wootters,
    Leonhardt,
    Random,
}

#[derive(Debug, Subcommand)]
enum FrameCommand {
    Build(BuildArgs),
    Duals(DualsArgs),
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    dim: usize,
    /// Number of elements of a random frame (default d²).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random frame of scaled rank-one projectors.
    #[arg(long)]
    positive: bool,
    #[arg(long, value_parser = parse_convention)]
    convention: Option<Convention>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DualsArgs {
    #[arg(long)]
    frame: PathBuf,
    /// Closed-form dual with its fitted global scalar.
    #[arg(long = "paper", visible_alias = "closed-form", conflicts_with = "unit_trace")]
    closed_form: bool,
    /// Canonical dual shifted to unit-trace elements.
    #[arg(long)]
    unit_trace: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    frame: PathBuf,
    #[arg(long)]
    dual: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum RepCommand {
    State(RepStateArgs),
    Povm(RepPovmArgs),
}

#[derive(Debug, Args)]
struct RepStateArgs {
    #[arg(long)]
    frame: PathBuf,
    #[arg(long)]
    state: PathBuf,
    /// Embed the full frame instead of its id.
    #[arg(long)]
    embed_frame: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RepPovmArgs {
    /// Frame (`--via F`) or dual (`--via E`) to represent through.
    #[arg(long, visible_alias = "frame", visible_alias = "dual")]
    frame_or_dual: PathBuf,
    #[arg(long)]
    povm: PathBuf,
    #[arg(long, default_value = "F", value_parser = parse_via)]
    via: Via,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum ProbMode {
    Trace,
    Deformed,
    Total,
}

#[derive(Debug, Args)]
struct ProbArgs {
    #[arg(long, value_enum, default_value = "trace")]
    mode: ProbMode,
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    povm: PathBuf,
    #[arg(long)]
    frame: PathBuf,
    #[arg(long)]
    dual: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct NegativityArgs {
    #[arg(long)]
    rep: PathBuf,
    /// Frame supplying the weights when the representation stores only an id.
    #[arg(long)]
    frame: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClassicalArgs {
    #[arg(long)]
    frame: PathBuf,
    #[arg(long)]
    dual: PathBuf,
    /// Directory of state JSON files.
    #[arg(long)]
    states: PathBuf,
    /// Directory of POVM JSON files.
    #[arg(long)]
    povms: PathBuf,
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
struct StarArgs {
    #[command(subcommand)]
    command: Option<StarCommand>,
    #[arg(long)]
    frame: Option<PathBuf>,
    #[arg(long)]
    dual: Option<PathBuf>,
    #[arg(long)]
    a: Option<PathBuf>,
    #[arg(long)]
    b: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum StarCommand {
    /// Idempotence test for a state representation.
    CheckPure {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        dual: PathBuf,
        #[arg(long)]
        rep: PathBuf,
    },
    /// Export the Θ and ⋆ kernels.
    Kernels {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        dual: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum NogoCommand {
    /// Canonical-dual negativity over random positive frames.
    Witness {
        #[arg(long)]
        dim: usize,
        /// Number of consecutive seeds, starting at the configured seed.
        #[arg(long)]
        seeds: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn parse_convention(s: &str) -> Result<Convention, QframeError> {
    s.parse()
}

fn parse_via(s: &str) -> Result<Via, QframeError> {
    s.parse()
}

/// `--config` file contents.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub convention: Option<Convention>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    pub seed: Option<u64>,
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

#[derive(Clone, Copy, Debug)]
struct Tolerances {
    duality: f64,
    psd: f64,
    hermiticity: f64,
    classical: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            duality: DUALITY_TOL,
            psd: PSD_TOL,
            hermiticity: HERMITICITY_TOL,
            classical: CLASSICAL_TOL,
        }
    }
}

struct Settings {
    tol: Tolerances,
    seed: Option<u64>,
    convention: Option<Convention>,
    format: OutputFormat,
    output: Option<PathBuf>,
}

impl Settings {
    fn resolve(cli: &Cli) -> Result<Self, Failure> {
        let config = match &cli.config {
            Some(path) => read_json::<Config>(path)?,
            None => Config::default(),
        };
        let mut tol = Tolerances::default();
        for (name, &value) in &config.tolerances {
            if !(value.is_finite() && value > 0.0) {
                return Err(Failure::usage(format!("tolerance `{name}` must be positive, got {value}")));
            }
            let slot = match name.as_str() {
                "duality" => &mut tol.duality,
                "psd" => &mut tol.psd,
                "hermiticity" => &mut tol.hermiticity,
                "classical" => &mut tol.classical,
                other => return Err(Failure::usage(format!("unknown tolerance `{other}`"))),
            };
            *slot = value;
        }
        let env_seed = match std::env::var(SEED_ENV) {
            Ok(s) => Some(
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Failure::usage(format!("{SEED_ENV} must be an unsigned integer, got `{s}`")))?,
            ),
            Err(_) => None,
        };
        let output_config = config.output.unwrap_or_default();
        Ok(Self {
            tol,
            seed: config.seed.or(env_seed),
            convention: config.convention,
            format: cli.format.or(output_config.format).unwrap_or(OutputFormat::Json),
            output: output_config.path,
        })
    }

    fn output(&self, explicit: &Option<PathBuf>) -> Option<PathBuf> {
        explicit.clone().or_else(|| self.output.clone())
    }

    fn seed(&self, explicit: Option<u64>) -> u64 {
        explicit.or(self.seed).unwrap_or(0)
    }

    fn require_json(&self, what: &str) -> Result<(), Failure> {
        match self.format {
            OutputFormat::Json => Ok(()),
            OutputFormat::Csv => Err(Failure::usage(format!("{what} has no CSV form; use --format json"))),
        }
    }
}

/// Error paired with the exit status it maps to.
#[derive(Debug)]
struct Failure {
    status: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            status: 2,
            message: message.into(),
        }
    }
}

impl From<QframeError> for Failure {
    fn from(e: QframeError) -> Self {
        let status = match e {
            QframeError::NotAFrame(_)
            | QframeError::NotDual { .. }
            | QframeError::SpanFailure(_)
            | QframeError::NonFinite(_)
            | QframeError::KernelTooLarge { .. } => 3,
            _ => 2,
        };
        Self {
            status,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

/// Parses `args` (including the program name) and runs the command,
/// returning the exit status.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match Settings::resolve(&cli).and_then(|s| dispatch(&cli.command, &s)) {
        Ok(status) => status,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.status
        }
    }
}

fn dispatch(command: &Command, s: &Settings) -> Outcome {
    match command {
        Command::Frame(FrameCommand::Build(a)) => frame_build(a, s),
        Command::Frame(FrameCommand::Duals(a)) => frame_duals(a, s),
        Command::Frame(FrameCommand::Check(a)) => frame_check(a, s),
        Command::Rep(RepCommand::State(a)) => rep_state_cmd(a, s),
        Command::Rep(RepCommand::Povm(a)) => rep_povm_cmd(a, s),
        Command::Prob(a) => prob(a, s),
        Command::Negativity(a) => negativity_cmd(a, s),
        Command::ClassicalCheck(a) => classical_check(a, s),
        Command::Star(a) => star(a, s),
        Command::Nogo(NogoCommand::Witness { dim, seeds, output }) => nogo_witness(*dim, *seeds, output, s),
    }
}

/// Writes `text` to `path`, or to stdout when no path is given.
fn emit(path: Option<PathBuf>, text: &str, summary: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            fs::write(&p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
            println!("{summary} -> {}", p.display());
        }
        None => {
            print!("{text}");
            let _ = std::io::stdout().flush();
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn json_text<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut text = to_json_string(value)?;
    text.push('\n');
    Ok(text)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    print!("{}", json_text(value)?);
    Ok(())
}

fn load_frame(path: &Path, s: &Settings) -> Result<Frame, Failure> {
    Ok(read_frame(path, s.tol.hermiticity)?)
}

fn load_pair(frame: &Path, dual: &Path, s: &Settings) -> Result<DualPair, Failure> {
    let f = load_frame(frame, s)?;
    let e = load_frame(dual, s)?;
    Ok(DualPair::with_tolerance(f, e, s.tol.duality)?)
}

fn load_state(path: &Path, s: &Settings) -> Result<DensityOp, Failure> {
    Ok(validate_state(&read_operator(path, s.tol.hermiticity)?)?)
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn frame_build(a: &BuildArgs, s: &Settings) -> Outcome {
    s.require_json("a frame")?;
    let frame = match a.kind {
        KindArg::Wootters => wootters_frame(a.dim)?,
        KindArg::Leonhardt => leonhardt_frame(a.dim)?,
        KindArg::Random => {
            let n = a.n.unwrap_or(a.dim * a.dim);
            random_frame(a.dim, n, s.seed(a.seed), a.positive)?
        }
    };
    let convention = a.convention.or(s.convention).unwrap_or_default();
    let frame = renormalize(&frame, convention)?;
    let summary = format!(
        "frame {} ({}, d={}, n={}, {})",
        frame.id(),
        frame.kind().name(),
        frame.dim(),
        frame.len(),
        frame.convention().name()
    );
    emit(s.output(&a.output), &json_text(&FrameJson::from_frame(&frame))?, &summary)?;
    Ok(0)
}

fn frame_duals(a: &DualsArgs, s: &Settings) -> Outcome {
    s.require_json("a frame")?;
    let frame = load_frame(&a.frame, s)?;
    let (dual, note) = if a.closed_form {
        let p = closed_form_dual_for(&frame)?;
        (p.dual, format!("closed-form dual, scalar {}, residual {:e}", p.scalar, p.residual))
    } else if a.unit_trace {
        (unit_trace_dual(&frame)?, "unit-trace dual".to_owned())
    } else {
        (canonical_dual(&frame)?, "canonical dual".to_owned())
    };
    emit(
        s.output(&a.output),
        &json_text(&FrameJson::from_frame(&dual))?,
        &format!("{note} {} of frame {}", dual.id(), frame.id()),
    )?;
    Ok(0)
}

fn frame_check(a: &CheckArgs, s: &Settings) -> Outcome {
    let frame = load_frame(&a.frame, s)?;
    let (lower, upper) = frame_bounds(&frame)?;
    let covariance = match frame.kind() {
        FrameKind::Custom => None,
        _ => covariance_check(&frame).ok(),
    };
    let mut status = 0;
    let dual = match &a.dual {
        Some(path) => {
            let e = load_frame(path, s)?;
            let check = is_dual_pair(&frame, &e)?;
            let is_dual = check.residual <= s.tol.duality;
            if !is_dual {
                status = 1;
            }
            Some(json!({ "id": e.id(), "duality_residual": check.residual, "is_dual": is_dual }))
        }
        None => None,
    };
    let report = json!({
        "id": frame.id(),
        "kind": frame.kind(),
        "convention": frame.convention(),
        "dim": frame.dim(),
        "n": frame.len(),
        "lower_bound": lower,
        "upper_bound": upper,
        "tight": (upper - lower) <= 1e-12 * upper,
        "positive": frame.elements().iter().all(|e| e.min_eigenvalue() >= -s.tol.psd),
        "covariant": covariance.as_ref().map(|c| c.covariant),
        "covariance_residual": covariance.as_ref().map(|c| c.worst_residual),
        "dual": dual,
    });
    print_json(&report)?;
    Ok(status)
}

fn rep_state_cmd(a: &RepStateArgs, s: &Settings) -> Outcome {
    let frame = load_frame(&a.frame, s)?;
    let rho = load_state(&a.state, s)?;
    let rep = rep_state(&frame, &rho)?.rep;
    let text = match s.format {
        OutputFormat::Json if a.embed_frame => json_text(&RepJson::embedded(&rep, &frame, Via::FrameF))?,
        OutputFormat::Json => json_text(&RepJson::new(&rep, Via::FrameF))?,
        OutputFormat::Csv => table_to_csv(frame.labels(), &["value"], &[&rep.values])?,
    };
    emit(s.output(&a.output), &text, &format!("state representation on frame {}", frame.id()))?;
    Ok(0)
}

fn rep_povm_cmd(a: &RepPovmArgs, s: &Settings) -> Outcome {
    let frame = load_frame(&a.frame_or_dual, s)?;
    let povm = read_povm(&a.povm, s.tol.hermiticity)?;
    let m = rep_effects(&frame, &povm, a.via)?;
    let text = match s.format {
        OutputFormat::Json => json_text(&cond_to_json(&m))?,
        OutputFormat::Csv => {
            let headers: Vec<String> = (0..m.reps.len()).map(|k| format!("effect_{k}")).collect();
            let headers: Vec<&str> = headers.iter().map(String::as_str).collect();
            let columns: Vec<&[f64]> = m.reps.iter().map(|r| r.values.as_slice()).collect();
            table_to_csv(frame.labels(), &headers, &columns)?
        }
    };
    emit(
        s.output(&a.output),
        &text,
        &format!("{} effect representations via {:?} on frame {}", m.reps.len(), a.via, frame.id()),
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct ProbRow {
    outcome: usize,
    trace: f64,
    deformed: f64,
    total: f64,
    value: f64,
    valid: bool,
}

fn prob(a: &ProbArgs, s: &Settings) -> Outcome {
    let rho = load_state(&a.state, s)?;
    let povm: Povm = read_povm(&a.povm, s.tol.hermiticity)?;
    let pair = load_pair(&a.frame, &a.dual, s)?;
    let r = rep_state(pair.frame(), &rho)?;
    let via_f = rep_effects(pair.frame(), &povm, Via::FrameF)?;
    let via_e = rep_effects(pair.dual(), &povm, Via::DualE)?;
    let mut rows = Vec::with_capacity(povm.len());
    let mut max_deviation = 0.0f64;
    for k in 0..povm.len() {
        let trace = born_rule(&rho, &povm, k)?;
        let deformed = deformed_prob(&pair, &r, &via_f, k)?;
        let total = total_prob(&pair, &r, &via_e, k)?;
        let (value, valid) = match a.mode {
            ProbMode::Trace => (trace, true),
            ProbMode::Deformed => (deformed.value, deformed.valid),
            ProbMode::Total => (total.value, total.valid),
        };
        max_deviation = max_deviation
            .max((trace - deformed.value).abs())
            .max((trace - total.value).abs())
            .max((deformed.value - total.value).abs());
        rows.push(ProbRow {
            outcome: k,
            trace,
            deformed: deformed.value,
            total: total.value,
            value,
            valid,
        });
    }
    let text = match s.format {
        OutputFormat::Json => json_text(&json!({
            "mode": format!("{:?}", a.mode).to_lowercase(),
            "outcomes": rows,
            "max_pairwise_deviation": max_deviation,
        }))?,
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row).map_err(|e| Failure::usage(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Failure::usage(e.to_string()))?)
                .map_err(|e| Failure::usage(e.to_string()))?
        }
    };
    emit(
        a.output.clone(),
        &text,
        &format!("max pairwise deviation {max_deviation:e}"),
    )?;
    Ok(if max_deviation <= s.tol.duality { 0 } else { 1 })
}

fn negativity_cmd(a: &NegativityArgs, s: &Settings) -> Outcome {
    let json: RepJson = read_json(&a.rep)?;
    let (rep, embedded) = json.to_rep()?;
    let frame = match (embedded, &a.frame) {
        (Some(f), _) => f,
        (None, Some(path)) => {
            let f = load_frame(path, s)?;
            if f.id() != rep.frame_id {
                return Err(QframeError::FrameMismatch(format!(
                    "representation belongs to frame {}, --frame is {}",
                    rep.frame_id,
                    f.id()
                ))
                .into());
            }
            f
        }
        (None, None) => {
            return Err(Failure::usage(
                "representation stores only a frame id; pass --frame for the weights",
            ))
        }
    };
    let report = negativity(&rep, frame.weights());
    print_json(&json!({
        "frame": frame.id(),
        "min_value": report.min_value,
        "negative_mass": report.negative_mass,
        "count_negative": report.count_negative,
    }))?;
    Ok(0)
}

fn classical_check(a: &ClassicalArgs, s: &Settings) -> Outcome {
    let pair = load_pair(&a.frame, &a.dual, s)?;
    let state_files = json_files(&a.states)?;
    let povm_files = json_files(&a.povms)?;
    let states = state_files.iter().map(|p| load_state(p, s)).collect::<Result<Vec<_>, _>>()?;
    let povms = povm_files
        .iter()
        .map(|p| Ok(read_povm(p, s.tol.hermiticity)?))
        .collect::<Result<Vec<_>, Failure>>()?;
    let report = classicality_check_with(&pair, &states, &povms, s.tol.classical)?;
    let name = |p: &PathBuf| p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    print_json(&json!({
        "classical_for_this_pair": report.classical_for_this_pair,
        "states": state_files.iter().map(name).collect::<Vec<_>>(),
        "povms": povm_files.iter().map(name).collect::<Vec<_>>(),
        "violations": report.violations,
    }))?;
    Ok(if report.classical_for_this_pair { 0 } else { 1 })
}

fn load_algebra(frame: &Path, dual: &Path, s: &Settings) -> Result<StarAlgebra, Failure> {
    let pair = load_pair(frame, dual, s)?;
    Ok(StarAlgebra::new(pair.frame().clone(), pair.dual().clone())?)
}

fn load_state_rep(path: &Path, algebra: &StarAlgebra) -> Result<crate::frames::RepFunction, Failure> {
    let json: RepJson = read_json(path)?;
    if json.via != Via::FrameF {
        return Err(Failure::usage(format!("{}: star products act on representations via F", path.display())));
    }
    let (rep, _) = json.to_rep()?;
    if rep.frame_id != algebra.frame().id() {
        return Err(QframeError::FrameMismatch(format!(
            "{} belongs to frame {}, expected {}",
            path.display(),
            rep.frame_id,
            algebra.frame().id()
        ))
        .into());
    }
    Ok(rep)
}

fn star(a: &StarArgs, s: &Settings) -> Outcome {
    match &a.command {
        Some(StarCommand::CheckPure { frame, dual, rep }) => {
            let algebra = load_algebra(frame, dual, s)?;
            let rho = load_state_rep(rep, &algebra)?;
            let square = algebra.product(&rho, &rho)?;
            let zeros = vec![0.0; rho.len()];
            let pure = algebra.is_pure_state_rep(&rho)?;
            print_json(&json!({
                "pure": pure,
                "idempotence_error": square.sup_distance(&rho.values, &zeros),
                "tolerance": PURITY_TOL,
                "weighted_sum": rho.weighted_sum(algebra.weights()),
            }))?;
            Ok(if pure { 0 } else { 1 })
        }
        Some(StarCommand::Kernels { frame, dual, output }) => {
            s.require_json("a kernel")?;
            let algebra = load_algebra(frame, dual, s)?;
            let kernel = algebra.kernel().ok_or(QframeError::KernelTooLarge {
                n: algebra.frame().len(),
                limit: crate::star_algebra::MAX_KERNEL_POINTS,
            })?;
            let text = json_text(&json!({ "theta": algebra.theta(), "star": kernel }))?;
            emit(s.output(output), &text, &format!("kernels for {} labels", kernel.len()))?;
            Ok(0)
        }
        None => {
            s.require_json("a star product")?;
            let missing = |what: &str| Failure::usage(format!("star: --{what} is required"));
            let algebra = load_algebra(
                a.frame.as_deref().ok_or_else(|| missing("frame"))?,
                a.dual.as_deref().ok_or_else(|| missing("dual"))?,
                s,
            )?;
            let lhs = load_state_rep(a.a.as_deref().ok_or_else(|| missing("a"))?, &algebra)?;
            let rhs = load_state_rep(a.b.as_deref().ok_or_else(|| missing("b"))?, &algebra)?;
            let product = algebra.product(&lhs, &rhs)?;
            emit(
                s.output(&a.output),
                &json_text(&product)?,
                &format!("star product, max imaginary part {:e}", product.max_imag()),
            )?;
            Ok(0)
        }
    }
}

fn nogo_witness(dim: usize, seeds: u64, output: &Option<PathBuf>, s: &Settings) -> Outcome {
    s.require_json("a witness report")?;
    let start = s.seed(None);
    let reports = witness_batch(dim, start..start + seeds)?;
    let witnessed = reports.iter().filter(|r| r.witnessed()).count();
    emit(
        s.output(output),
        &json_text(&reports)?,
        &format!("{witnessed}/{} frames witnessed without a positive canonical dual", reports.len()),
    )?;
    Ok(if witnessed == reports.len() { 0 } else { 1 })
}
