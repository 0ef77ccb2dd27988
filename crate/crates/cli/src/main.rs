use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use randprep::bounds::{fit_decay, resource_plan, DecayKind, DecayModel, MixingBounds, TCountModel};
use randprep::generators::{load_state, synthetic_state, tfim_ground_state, SignPattern, SyntheticSpec, TfimSpec};
use randprep::io::{load_observable, save_state, format_state, BoundsReport, EnsembleSummary, PlanReport};
use randprep::sampler::{estimate_observable, exact_expectation};
use randprep::sweep::{parse_grid, read_csv, sweep, verify_rows, write_csv, VERIFY_TOL};
use randprep::{build_ensemble, compute_mixing_bounds, ensemble_trace_distance, partition, truncation_error};
use randprep::{AmplitudeVector64, Error, Observable64};

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERIC: u8 = 2;

#[derive(Parser)]
#[command(name = "randprep", version, about = "Randomized preparation of states with small-amplitude tails")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a state file.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Print the bounds report and both distances at one threshold.
    Analyze(AnalyzeArgs),
    /// Emit one CSV row per threshold of a geometric grid.
    Sweep(SweepArgs),
    /// Sample ensemble members and estimate an observable.
    Sample(SampleArgs),
    /// Kept-amplitude counts and T-count estimates for a target error.
    Resources(ResourcesArgs),
}

#[derive(Subcommand)]
enum GenCommand {
    /// Ground state of the periodic transverse-field Ising chain.
    Tfim {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        j: f64,
        #[arg(long, default_value_t = 1.0)]
        h: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// State with a geometric or power-law amplitude profile.
    Synthetic {
        #[arg(long)]
        kind: DecayKind,
        #[arg(long)]
        rate: f64,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// positive, alternating or random
        #[arg(long, default_value = "alternating")]
        signs: SignPattern,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct StateArg {
    /// State file or plain list of amplitudes.
    #[arg(long)]
    state: PathBuf,
    /// Register size for plain lists (defaults to the smallest that fits).
    #[arg(long)]
    qubits: Option<u32>,
}

impl StateArg {
    fn load(&self) -> Result<AmplitudeVector64, Error> {
        load_state(&self.state, self.qubits)
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    state: StateArg,
    #[arg(long)]
    threshold: f64,
    /// Also write the ensemble summary (gamma, p_m, amplified coefficients).
    #[arg(long)]
    ensemble: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    state: StateArg,
    /// Geometric grid `t_min:t_max:count`, or a single threshold.
    #[arg(long)]
    thresholds: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    state: StateArg,
    #[arg(long)]
    threshold: f64,
    #[arg(long)]
    shots: u64,
    #[arg(long)]
    seed: u64,
    /// Observable file; defaults to Z on qubit 0.
    #[arg(long)]
    observable: Option<PathBuf>,
}

#[derive(Args)]
struct ResourcesArgs {
    #[command(flatten)]
    state: StateArg,
    #[arg(long)]
    tau: f64,
    /// Skip fitting and use this decay model (requires --rate).
    #[arg(long, requires = "rate")]
    kind: Option<DecayKind>,
    #[arg(long, requires = "kind")]
    rate: Option<f64>,
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotConverged { .. }
            | Error::DegenerateGroundState { .. }
            | Error::TargetTooStrict { .. }
            | Error::InsufficientData { .. }
            | Error::NotNormalized { .. }
            | Error::EmptyTail
            | Error::NothingToRandomize => Failure::Numeric(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

#[derive(Serialize)]
struct AnalyzeReport {
    #[serde(flatten)]
    bounds: BoundsReport,
    k_kept: usize,
    dist_det: f64,
    dist_rand: f64,
}

fn write_stdout(text: &str) -> CmdResult {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json<R: Serialize>(report: &R) -> CmdResult {
    let text = serde_json::to_string_pretty(report).expect("reports are plain data");
    write_stdout(&(text + "\n"))
}

fn emit_state(psi: &AmplitudeVector64, output: Option<&Path>) -> CmdResult {
    match output {
        Some(p) => save_state(p, psi)?,
        None => write_stdout(&format_state(psi))?,
    }
    Ok(())
}

fn cmd_gen(cmd: GenCommand) -> CmdResult {
    match cmd {
        GenCommand::Tfim { n, j, h, output } => {
            let spec = TfimSpec::new(n, j, h)?;
            emit_state(&tfim_ground_state(&spec)?, output.as_deref())
        }
        GenCommand::Synthetic { kind, rate, dim, seed, signs, output } => {
            let spec = SyntheticSpec { kind, rate, dim, seed, signs };
            emit_state(&synthetic_state(&spec)?, output.as_deref())
        }
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> CmdResult {
    let psi = args.state.load()?;
    let p = partition(&psi, args.threshold)?;
    let dist_det = truncation_error(&p, &psi)?;
    let (bounds, dist_rand) = if p.tail_is_empty() {
        (MixingBounds::exact(&p), 0.0)
    } else {
        let e = build_ensemble(&p, &psi)?;
        if let Some(path) = &args.ensemble {
            let summary = serde_json::to_string_pretty(&EnsembleSummary::from(&e)).expect("plain data");
            std::fs::write(path, summary + "\n")?;
        }
        (compute_mixing_bounds(&e, &psi)?, ensemble_trace_distance(&e, &psi)?)
    };
    print_json(&AnalyzeReport { bounds: BoundsReport::from(&bounds), k_kept: p.k_kept, dist_det, dist_rand })?;
    if dist_rand > bounds.lemma_bound + VERIFY_TOL {
        return Err(Failure::Numeric(format!(
            "dist_rand {dist_rand} exceeds the lemma bound {}",
            bounds.lemma_bound
        )));
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> CmdResult {
    let grid = parse_grid(&args.thresholds)?;
    let psi = args.state.load()?;
    let rows = sweep(&psi, &grid)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows)?;
    verify_rows(&read_csv(buf.as_slice())?).map_err(|e| Failure::Numeric(e.to_string()))?;
    match &args.output {
        Some(path) => Ok(std::fs::write(path, &buf)?),
        None => write_stdout(std::str::from_utf8(&buf).expect("CSV output is UTF-8")),
    }
}

fn cmd_sample(args: SampleArgs) -> CmdResult {
    let psi = args.state.load()?;
    let obs = match &args.observable {
        Some(path) => load_observable(path)?,
        None => Observable64::pauli_z(0)?,
    };
    let p = partition(&psi, args.threshold)?;
    let e = build_ensemble(&p, &psi)?;
    let run = estimate_observable(&e, &obs, args.shots, args.seed)?;
    let exact = exact_expectation(&e, &obs)?;
    print_json(&run.report(exact))
}

fn cmd_resources(args: ResourcesArgs) -> CmdResult {
    let psi = args.state.load()?;
    let model = match (args.kind, args.rate) {
        (Some(kind), Some(rate)) => DecayModel::new(kind, rate, psi.dim())?,
        _ => {
            let m = fit_decay(&psi)?;
            m.validate().map_err(|e| Failure::Numeric(format!("fitted decay model is unusable: {e}")))?;
            m
        }
    };
    let plan = resource_plan(&model, args.tau, TCountModel::default())?;
    print_json(&PlanReport::new(&model, &plan))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("RANDPREP_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("RANDPREP_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> CmdResult {
    configure_threads()?;
    match cli.command {
        Command::Gen(cmd) => cmd_gen(cmd),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Resources(args) => cmd_resources(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
