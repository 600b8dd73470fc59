use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sqpc::adversary::{controlled_rotation_family, Attack, EntangleMeasure, TargetChannel};
use sqpc::analysis::{
    estimate_detection, qubit_efficiency, run_with_retries, table1_oracle, theorem1_scan,
    theta_grid, MonteCarloPlan,
};
use sqpc::matrix_text::parse_unitary;
use sqpc::protocol::transcript::TranscriptDump;
use sqpc::protocol::{PrivateInputs, ProtocolConfig, RunOutcome, RunStreams};
use sqpc::qsim::UnitaryMatrix;
use sqpc::report::{
    attack_table, efficiency_table, run_table, table1_table, theorem1_table, Format,
};
use sqpc::{BitString, Error};

const EXIT_USAGE: u8 = 1;
const EXIT_ABORT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

/// Stream id for inputs given as "random".
const INPUT_STREAM: u64 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "sqpc",
    version,
    about = "Semiquantum private comparison simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Execute one protocol run.
    Run(RunArgs),
    /// Estimate the detection probability of an attack.
    Attack(AttackArgs),
    /// Print the qubit-efficiency accounting.
    Efficiency(EfficiencyArgs),
    /// Enumerate every single-bit comparison and check its output.
    Table1(OutputArgs),
    /// Scan the controlled-rotation attack over θ ∈ [0, π].
    Theorem1(Theorem1Args),
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OutputFormat {
    Text,
    Csv,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Csv => Format::Csv,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KindArg {
    None,
    InterceptResend,
    MeasureResend,
    EntangleMeasure,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ChannelArg {
    Alice,
    Bob,
    Both,
}

impl From<ChannelArg> for TargetChannel {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::Alice => TargetChannel::Alice,
            ChannelArg::Bob => TargetChannel::Bob,
            ChannelArg::Both => TargetChannel::Both,
        }
    }
}

#[derive(Args, Debug)]
struct AttackSpec {
    #[arg(long, value_enum, default_value_t = KindArg::None)]
    kind: KindArg,
    #[arg(long, value_enum, default_value_t = ChannelArg::Alice)]
    channel: ChannelArg,
    /// Controlled-rotation angle for entangle-measure.
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Forward-leg unitary file for entangle-measure.
    #[arg(long)]
    ue: Option<PathBuf>,
    /// Return-leg unitary file; identity when omitted.
    #[arg(long)]
    uf: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    probe_qubits: usize,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long = "L", default_value_t = 4)]
    length: usize,
    /// Alice's input as a 0/1 string, or "random".
    #[arg(long, default_value = "random")]
    ma: String,
    /// Bob's input as a 0/1 string, or "random".
    #[arg(long, default_value = "random")]
    mb: String,
    /// Pre-shared key as a 0/1 string, or "random".
    #[arg(long, default_value = "random")]
    kab: String,
    #[arg(long, env = "SQPC_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    /// Batches to prepare before giving up on key material.
    #[arg(long, default_value_t = 32)]
    max_attempts: u32,
    /// Write the full transcript dump to this file.
    #[arg(long)]
    transcript: Option<PathBuf>,
    #[command(flatten)]
    attack: AttackSpec,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct AttackArgs {
    #[arg(long = "L", default_value_t = 1)]
    length: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, env = "SQPC_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    /// Worker threads; all cores when omitted.
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    attack: AttackSpec,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct EfficiencyArgs {
    #[arg(long = "L", default_value_t = 1)]
    length: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct Theorem1Args {
    #[arg(long, default_value_t = 9)]
    grid: usize,
    #[arg(long, default_value_t = 20_000)]
    trials: u64,
    #[arg(long = "L", default_value_t = 1)]
    length: usize,
    #[arg(long, env = "SQPC_SEED", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Parse { .. } | Error::NotUnitary { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Internal(other.to_string()),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Attack(a) => cmd_attack(a),
        Command::Efficiency(a) => cmd_efficiency(a),
        Command::Table1(a) => cmd_table1(a),
        Command::Theorem1(a) => cmd_theorem1(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

fn emit(out: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => write_file(path, text),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Internal(format!("stdout: {e}"))),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_unitary(path: &Path) -> Result<UnitaryMatrix, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_unitary(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn build_attack(spec: &AttackSpec) -> Result<Attack, Failure> {
    let channel = TargetChannel::from(spec.channel);
    let extras = spec.theta.is_some() || spec.ue.is_some() || spec.uf.is_some();
    if spec.kind != KindArg::EntangleMeasure && extras {
        return Err(Failure::Usage(
            "--theta, --ue and --uf apply only to --kind entangle-measure".into(),
        ));
    }
    Ok(match spec.kind {
        KindArg::None => Attack::None,
        KindArg::InterceptResend => Attack::InterceptResend { channel },
        KindArg::MeasureResend => Attack::MeasureResend { channel },
        KindArg::EntangleMeasure => {
            let em = match (&spec.ue, spec.theta) {
                (Some(_), Some(_)) => {
                    return Err(Failure::Usage(
                        "give either --theta or --ue, not both".into(),
                    ))
                }
                (Some(ue), None) => {
                    let u_e = read_unitary(ue)?;
                    let u_f = match &spec.uf {
                        Some(p) => read_unitary(p)?,
                        None => UnitaryMatrix::identity(u_e.dim()),
                    };
                    EntangleMeasure::new(u_e, u_f, spec.probe_qubits)?
                }
                (None, theta) => {
                    if spec.uf.is_some() {
                        return Err(Failure::Usage("--uf requires --ue".into()));
                    }
                    controlled_rotation_family(theta.unwrap_or(PI))
                }
            };
            Attack::EntangleMeasure(em.on_channel(channel))
        }
    })
}

fn parse_input(
    name: &str,
    value: &str,
    length: usize,
    rng: &mut impl rand::Rng,
) -> Result<BitString, Failure> {
    let bits = if value == "random" {
        BitString::random(length, rng)
    } else {
        value
            .parse::<BitString>()
            .map_err(|e| Failure::Usage(format!("--{name}: {e}")))?
    };
    if bits.len() != length {
        return Err(Failure::Usage(format!(
            "--{name} has {} bits, expected L = {length}",
            bits.len()
        )));
    }
    Ok(bits)
}

fn cmd_run(a: RunArgs) -> CmdResult {
    let mut config = ProtocolConfig::new(a.length, a.seed);
    config.error_threshold = a.threshold;
    config.validate()?;
    let mut rng = RunStreams::stream(a.seed, INPUT_STREAM);
    let inputs = PrivateInputs::new(
        parse_input("ma", &a.ma, a.length, &mut rng)?,
        parse_input("mb", &a.mb, a.length, &mut rng)?,
        parse_input("kab", &a.kab, a.length, &mut rng)?,
    );
    let attack = build_attack(&a.attack)?;
    let (outcome, attempts) = run_with_retries(&config, &inputs, &attack, a.max_attempts)?;
    if let Some(path) = &a.transcript {
        write_file(path, &TranscriptDump::from_outcome(&outcome).render())?;
    }
    emit(
        &a.out,
        &run_table(&outcome, attempts).render(a.out.format.into()),
    )?;
    Ok(match outcome {
        RunOutcome::Completed { .. } => 0,
        RunOutcome::Aborted { .. } => EXIT_ABORT,
    })
}

fn cmd_attack(a: AttackArgs) -> CmdResult {
    let attack = build_attack(&a.attack)?;
    let mut plan = MonteCarloPlan::new(a.trials, a.length, attack, a.seed);
    plan.protocol.error_threshold = a.threshold;
    plan.threads = a.threads;
    if plan.threads == Some(0) {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    let stats = estimate_detection(&plan)?;
    emit(
        &a.out,
        &attack_table(&plan, &stats).render(a.out.format.into()),
    )?;
    Ok(0)
}

fn cmd_efficiency(a: EfficiencyArgs) -> CmdResult {
    let report = qubit_efficiency(a.length)?;
    emit(
        &a.out,
        &efficiency_table(&[(a.length, report)]).render(a.out.format.into()),
    )?;
    Ok(0)
}

fn cmd_table1(a: OutputArgs) -> CmdResult {
    let rows = table1_oracle();
    emit(&a, &table1_table(&rows).render(a.format.into()))?;
    let failures = rows.iter().filter(|r| !r.is_correct()).count();
    if failures > 0 {
        eprintln!("{failures} row(s) violate r = m_a xor m_b");
        return Ok(EXIT_INTERNAL);
    }
    Ok(0)
}

fn cmd_theorem1(a: Theorem1Args) -> CmdResult {
    let grid = theta_grid(a.grid)?;
    let rows = theorem1_scan(&grid, a.trials, a.length, a.seed)?;
    emit(&a.out, &theorem1_table(&rows).render(a.out.format.into()))?;
    Ok(0)
}
