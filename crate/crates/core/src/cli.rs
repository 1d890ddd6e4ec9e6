//! Command-line surface of `qtwin`.
//!
//! Machine-readable output (one JSON document, or CSV for `compare`) goes to
//! standard output; a one-line human summary goes to standard error.
//!
//! Exit codes: 0 success, 2 input or usage error, 3 resource cap exceeded.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::classical::{self, ClassicalError};
use crate::relmodel::{parse_model, ModelError, ReliabilityModel};
use crate::rng::{fresh_seed, RNG_NAME};
use crate::statevec::{NoiseModel, SimError};
use crate::twin::{self, CompareOptions, OracleBackend, QaeReadout, TwinError, TwinLayout};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Column header of `compare --format csv`.
pub const COMPARE_CSV_HEADER: &str =
    "target_error,mc_shots,mc_achieved_error,qae_phase_qubits,qae_oracle_queries,qae_achieved_error,mc_slope,qae_slope";

#[derive(Debug, Parser)]
#[command(name = "qtwin", version, about = "Quantum-twin reliability assessment")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a model file.
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
    /// Assess reliability with one method and print a report.
    Assess(AssessArgs),
    /// Compare Monte Carlo shots against amplitude-estimation queries.
    Compare(CompareArgs),
    /// Print the twin circuit (state preparation + oracle) as text.
    DumpCircuit {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = OracleArg::Semantic)]
        oracle: OracleArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Mc,
    Twin,
    TwinSample,
    Qae,
}

impl Method {
    fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Mc => "mc",
            Method::Twin => "twin",
            Method::TwinSample => "twin-sample",
            Method::Qae => "qae",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    Tree,
    Minterm,
    Semantic,
}

impl From<OracleArg> for OracleBackend {
    fn from(o: OracleArg) -> Self {
        match o {
            OracleArg::Tree => OracleBackend::Tree,
            OracleArg::Minterm => OracleBackend::Minterm,
            OracleArg::Semantic => OracleBackend::Semantic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct AssessArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = OracleArg::Semantic)]
    pub oracle: OracleArg,
    /// Shots for mc and twin-sample (default 10000); for qae, switches to a
    /// sampled read-out.
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 6)]
    pub phase_qubits: usize,
    /// Depolarizing probability per touched qubit per gate (twin method).
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub trajectories: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Omit wall-clock timing from the report.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Target absolute error; repeat for several rows.
    #[arg(long = "target-error")]
    pub target_error: Vec<f64>,
    #[arg(long, value_enum, default_value_t = OracleArg::Semantic)]
    pub oracle: OracleArg,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo repeats per candidate shot count.
    #[arg(long, default_value_t = 15)]
    pub repeats: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub no_timestamp: bool,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A failed command: exit code plus message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        let code = match e {
            ModelError::TooManyComponents { .. } => EXIT_RESOURCE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: format!("invalid model: {e}"),
        }
    }
}

impl From<TwinError> for Failure {
    fn from(e: TwinError) -> Self {
        let code = match e {
            TwinError::Resource { .. }
            | TwinError::ShotLimit { .. }
            | TwinError::Sim(SimError::Resource { .. })
            | TwinError::Classical(ClassicalError::EnumerationCap { .. }) => EXIT_RESOURCE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ClassicalError> for Failure {
    fn from(e: ClassicalError) -> Self {
        let code = match e {
            ClassicalError::EnumerationCap { .. } => EXIT_RESOURCE,
            ClassicalError::Invalid(_) => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        TwinError::from(e).into()
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from_args<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            if code == 0 {
                CliOutput {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                CliOutput {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn run(cli: Cli) -> CliOutput {
    let mut stderr = String::new();
    let result = match cli.command {
        Command::Validate { model } => cmd_validate(&model, &mut stderr),
        Command::Assess(args) => cmd_assess(&args, &mut stderr),
        Command::Compare(args) => cmd_compare(&args, &mut stderr),
        Command::DumpCircuit { model, oracle } => cmd_dump_circuit(&model, oracle.into()),
    };
    match result {
        Ok(stdout) => CliOutput {
            code: EXIT_OK,
            stdout,
            stderr,
        },
        Err(f) => {
            writeln!(stderr, "error: {}", f.message).unwrap();
            CliOutput {
                code: f.code,
                stdout: String::new(),
                stderr,
            }
        }
    }
}

fn load(path: &Path) -> Result<ReliabilityModel, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_model(&text)?)
}

fn model_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn seed_or_fresh(seed: Option<u64>, stderr: &mut String) -> u64 {
    seed.unwrap_or_else(|| {
        let s = fresh_seed();
        writeln!(stderr, "no --seed given; using seed {s}").unwrap();
        s
    })
}

fn cmd_validate(path: &Path, stderr: &mut String) -> Result<String, Failure> {
    let model = load(path)?;
    writeln!(stderr, "{}: valid ({model})", path.display()).unwrap();
    Ok(String::new())
}

fn cmd_dump_circuit(path: &Path, backend: OracleBackend) -> Result<String, Failure> {
    let model = load(path)?;
    Ok(twin::build_twin(&model, backend)?.circuit.dump())
}

/// Register sizes of a quantum report.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct LayoutSizes {
    pub components: usize,
    pub ancillas: usize,
    pub output: usize,
    pub phase: usize,
}

impl From<&TwinLayout> for LayoutSizes {
    fn from(l: &TwinLayout) -> Self {
        LayoutSizes {
            components: l.component_qubits.len(),
            ancillas: l.work_ancillas.len(),
            output: 1,
            phase: l.phase_register.len(),
        }
    }
}

/// One assessment, serialized with fields in declaration order.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AssessmentReport {
    pub model: String,
    pub method: &'static str,
    pub backend: Option<&'static str>,
    pub estimate: f64,
    pub lolp: f64,
    pub uncertainty: Option<f64>,
    /// `stderr` or `qae_bound`.
    pub uncertainty_kind: Option<&'static str>,
    pub ci95: Option<[f64; 2]>,
    pub states_enumerated: Option<u64>,
    pub qubits_total: Option<usize>,
    pub layout: Option<LayoutSizes>,
    pub gate_counts: Option<BTreeMap<&'static str, usize>>,
    pub gate_total: Option<usize>,
    pub predicate_oracles: Option<usize>,
    pub semantic_oracle: Option<bool>,
    pub oracle_queries: Option<u64>,
    pub phase_qubits: Option<usize>,
    pub modal_outcome: Option<usize>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub rng: Option<&'static str>,
    pub noise_lambda: Option<f64>,
    pub trajectories: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl AssessmentReport {
    fn new(model: String, method: Method, estimate: f64) -> Self {
        AssessmentReport {
            model,
            method: method.as_str(),
            backend: None,
            estimate,
            lolp: 1.0 - estimate,
            uncertainty: None,
            uncertainty_kind: None,
            ci95: None,
            states_enumerated: None,
            qubits_total: None,
            layout: None,
            gate_counts: None,
            gate_total: None,
            predicate_oracles: None,
            semantic_oracle: None,
            oracle_queries: None,
            phase_qubits: None,
            modal_outcome: None,
            shots: None,
            seed: None,
            rng: None,
            noise_lambda: None,
            trajectories: None,
            wall_time_ms: None,
        }
    }

    fn quantum(
        &mut self,
        backend: OracleBackend,
        layout: &TwinLayout,
        stats: &crate::circuit::GateStats,
        semantic: bool,
    ) {
        self.backend = Some(backend.as_str());
        self.qubits_total = Some(layout.total_qubits);
        self.layout = Some(layout.into());
        self.gate_counts = Some(stats.counts.clone());
        self.gate_total = Some(stats.total);
        self.predicate_oracles = Some(stats.predicate_oracles);
        self.semantic_oracle = Some(semantic);
    }

    fn stochastic(&mut self, seed: u64) {
        self.seed = Some(seed);
        self.rng = Some(RNG_NAME);
    }
}

pub fn assess(
    model: &ReliabilityModel,
    name: String,
    args: &AssessArgs,
    stderr: &mut String,
) -> Result<AssessmentReport, Failure> {
    let backend: OracleBackend = args.oracle.into();
    if args.noise.is_some() && args.method != Method::Twin {
        return Err(Failure::input("--noise applies only to --method twin"));
    }
    let report = match args.method {
        Method::Exact => {
            let r = classical::exact_reliability(model)?;
            let mut rep = AssessmentReport::new(name, args.method, r.reliability);
            rep.lolp = r.lolp;
            rep.states_enumerated = Some(r.states_enumerated);
            rep
        }
        Method::Mc => {
            let seed = seed_or_fresh(args.seed, stderr);
            let shots = args.shots.unwrap_or(10_000);
            let r = classical::monte_carlo(model, shots, seed)?;
            let mut rep = AssessmentReport::new(name, args.method, r.estimate);
            rep.uncertainty = Some(r.stderr);
            rep.uncertainty_kind = Some("stderr");
            rep.ci95 = Some([r.ci95.0, r.ci95.1]);
            rep.shots = Some(shots);
            rep.stochastic(seed);
            rep
        }
        Method::Twin => match args.noise {
            None => {
                let t = twin::build_twin(model, backend)?;
                let p = t.prepare()?.marginal_probability(t.layout.output_qubit, true)?;
                let mut rep = AssessmentReport::new(name, args.method, p);
                rep.quantum(backend, &t.layout, &t.stats(), t.is_semantic());
                rep.oracle_queries = Some(1);
                rep
            }
            Some(lambda) => {
                let seed = seed_or_fresh(args.seed, stderr);
                let noise = NoiseModel::new(lambda, args.trajectories)?;
                let (t, out) = twin::assess_noisy(model, backend, noise, seed)?;
                let mut rep = AssessmentReport::new(name, args.method, out.mean);
                rep.quantum(backend, &t.layout, &t.stats(), t.is_semantic());
                rep.uncertainty = Some(out.stderr);
                rep.uncertainty_kind = Some("stderr");
                rep.oracle_queries = Some(out.trajectories);
                rep.noise_lambda = Some(lambda);
                rep.trajectories = Some(out.trajectories);
                rep.stochastic(seed);
                rep
            }
        },
        Method::TwinSample => {
            let seed = seed_or_fresh(args.seed, stderr);
            let shots = args.shots.unwrap_or(10_000);
            let r = twin::assess_sampling(model, backend, shots, seed)?;
            let t = twin::build_twin(model, backend)?;
            let mut rep = AssessmentReport::new(name, args.method, r.estimate);
            rep.quantum(backend, &t.layout, &r.stats, r.semantic_oracle);
            rep.uncertainty = Some(r.stderr);
            rep.uncertainty_kind = Some("stderr");
            rep.oracle_queries = Some(shots);
            rep.shots = Some(shots);
            rep.stochastic(seed);
            rep
        }
        Method::Qae => {
            let m = args.phase_qubits;
            let (readout, seed) = match args.shots {
                Some(shots) => {
                    let seed = seed_or_fresh(args.seed, stderr);
                    (QaeReadout::Sampled { shots, seed }, Some(seed))
                }
                None => (QaeReadout::Exact, None),
            };
            let r = twin::qae(model, backend, m, readout)?;
            let mut rep = AssessmentReport::new(name, args.method, r.estimate);
            rep.quantum(backend, &r.layout, &r.stats, r.semantic_oracle);
            rep.uncertainty = Some(twin::modal_error_bound(m));
            rep.uncertainty_kind = Some("qae_bound");
            rep.oracle_queries = Some(r.oracle_queries);
            rep.phase_qubits = Some(m);
            rep.modal_outcome = Some(r.modal_outcome);
            if let Some(seed) = seed {
                rep.shots = args.shots;
                rep.stochastic(seed);
            }
            rep
        }
    };
    Ok(report)
}

fn cmd_assess(args: &AssessArgs, stderr: &mut String) -> Result<String, Failure> {
    if args.format == Format::Csv {
        return Err(Failure::input(
            "assess writes JSON only; --format csv applies to compare",
        ));
    }
    let model = load(&args.model)?;
    let start = Instant::now();
    let mut report = assess(&model, model_name(&args.model), args, stderr)?;
    if !args.no_timestamp {
        report.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    writeln!(
        stderr,
        "{}: {}{} estimate {:.9}",
        report.model,
        report.method,
        report.backend.map(|b| format!(" ({b})")).unwrap_or_default(),
        report.estimate
    )
    .unwrap();
    let mut out = serde_json::to_string_pretty(&report).expect("report serializes");
    out.push('\n');
    Ok(out)
}

#[derive(Debug, Serialize)]
struct CompareRowDoc {
    target_error: f64,
    mc_shots: u64,
    mc_achieved_error: f64,
    qae_phase_qubits: usize,
    qae_oracle_queries: u64,
    qae_achieved_error: f64,
}

#[derive(Debug, Serialize)]
struct QaeSweepDoc {
    phase_qubits: usize,
    oracle_queries: u64,
    abs_error: f64,
}

#[derive(Debug, Serialize)]
struct CompareDoc {
    model: String,
    backend: &'static str,
    truth: f64,
    seed: u64,
    rng: &'static str,
    mc_repeats: u64,
    mc_slope: f64,
    qae_slope: f64,
    rows: Vec<CompareRowDoc>,
    qae_sweep: Vec<QaeSweepDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
}

fn cmd_compare(args: &CompareArgs, stderr: &mut String) -> Result<String, Failure> {
    if args.target_error.is_empty() {
        return Err(Failure::input("compare needs at least one --target-error"));
    }
    if args.repeats == 0 {
        return Err(Failure::input("--repeats must be positive"));
    }
    let model = load(&args.model)?;
    let seed = seed_or_fresh(args.seed, stderr);
    let backend: OracleBackend = args.oracle.into();
    let opts = CompareOptions {
        backend,
        seed,
        mc_repeats: args.repeats,
        ..CompareOptions::default()
    };
    let start = Instant::now();
    let cmp = twin::sample_complexity_compare(&model, &args.target_error, &opts)?;
    let wall = start.elapsed().as_secs_f64() * 1e3;
    writeln!(
        stderr,
        "{}: truth {:.9}, MC slope {:.3}, QAE slope {:.3}",
        model_name(&args.model),
        cmp.truth,
        cmp.mc_slope,
        cmp.qae_slope
    )
    .unwrap();
    match args.format {
        Format::Csv => {
            let mut out = String::new();
            writeln!(out, "{COMPARE_CSV_HEADER}").unwrap();
            for r in &cmp.rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.target_error,
                    r.mc_shots,
                    r.mc_achieved_error,
                    r.qae_phase_qubits,
                    r.qae_oracle_queries,
                    r.qae_achieved_error,
                    cmp.mc_slope,
                    cmp.qae_slope
                )
                .unwrap();
            }
            Ok(out)
        }
        Format::Json => {
            let doc = CompareDoc {
                model: model_name(&args.model),
                backend: backend.as_str(),
                truth: cmp.truth,
                seed,
                rng: RNG_NAME,
                mc_repeats: args.repeats,
                mc_slope: cmp.mc_slope,
                qae_slope: cmp.qae_slope,
                rows: cmp
                    .rows
                    .iter()
                    .map(|r| CompareRowDoc {
                        target_error: r.target_error,
                        mc_shots: r.mc_shots,
                        mc_achieved_error: r.mc_achieved_error,
                        qae_phase_qubits: r.qae_phase_qubits,
                        qae_oracle_queries: r.qae_oracle_queries,
                        qae_achieved_error: r.qae_achieved_error,
                    })
                    .collect(),
                qae_sweep: cmp
                    .qae_sweep
                    .iter()
                    .map(|p| QaeSweepDoc {
                        phase_qubits: p.phase_qubits,
                        oracle_queries: p.oracle_queries,
                        abs_error: p.abs_error,
                    })
                    .collect(),
                wall_time_ms: (!args.no_timestamp).then_some(wall),
            };
            let mut out = serde_json::to_string_pretty(&doc).expect("compare serializes");
            out.push('\n');
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_2() {
        let out = run_from_args(["qtwin", "assess", "--method", "bogus", "--model", "x.json"]);
        assert_eq!(out.code, EXIT_INPUT);
        let out = run_from_args(["qtwin"]);
        assert_eq!(out.code, EXIT_INPUT);
    }

    #[test]
    fn help_exits_0() {
        let out = run_from_args(["qtwin", "--help"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("assess"));
    }

    #[test]
    fn missing_file_is_io_error() {
        let out = run_from_args(["qtwin", "validate", "--model", "/definitely/not/here.json"]);
        assert_eq!(out.code, EXIT_INPUT);
        assert!(out.stderr.contains("cannot read"), "{}", out.stderr);
    }
}
