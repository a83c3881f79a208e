//! `isum`: verification sweeps, observable scans and ED cross-checks.

mod commands;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isum::{FamilyTag, Parity, SumKind};

#[derive(Parser, Debug)]
#[command(name = "isum", version, about = "Closed-form finite sums and Ising-chain observables")]
struct Cli {
    /// Worker threads for scans (the ISUM_THREADS variable takes precedence).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare direct sums with closed forms over a parameter matrix.
    Verify(VerifyArgs),
    /// Fidelity susceptibility on a field grid.
    Chi(ChiArgs),
    /// Location and height of the susceptibility peak.
    Chimax(ChimaxArgs),
    /// Counterdiabatic coupling strengths.
    Cd(CdArgs),
    /// Exact-diagonalization check of the susceptibility and parity conservation.
    Edcheck(EdcheckArgs),
    /// Time closed forms against direct summation.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Momentum families (ka, kb, kc, kd).
    #[arg(long, value_delimiter = ',', default_value = "ka,kb,kc,kd")]
    pub families: Vec<FamilyTag>,
    /// Sum kinds (f, h).
    #[arg(long, value_delimiter = ',', default_value = "f,h")]
    pub kinds: Vec<SumKind>,
    #[arg(long, default_value_t = 64)]
    pub n_max: u64,
    /// start:step:stop or a comma list.
    #[arg(long, allow_hyphen_values = true, default_value = "10,-10,5,-5,1,-1,0.1,-0.1,1e-3,-1e-3")]
    pub x_grid: String,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Write the JSON report list here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ChiArgs {
    #[arg(long = "N")]
    pub n_spins: u64,
    /// start:step:stop or a comma list.
    #[arg(long, alias = "g-grid", allow_hyphen_values = true)]
    pub g: String,
    /// Adds direct-sum and relative-error columns for this sector.
    #[arg(long, allow_hyphen_values = true)]
    pub parity: Option<Parity>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ChimaxArgs {
    /// Comma-separated chain sizes.
    #[arg(long = "N-list")]
    pub n_list: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CdArgs {
    #[arg(long = "N")]
    pub n_spins: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub parity: Parity,
    /// start:step:stop or a comma list.
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
    /// A single order; all of 1..N-1 when omitted.
    #[arg(long)]
    pub m: Option<u64>,
    /// Chains longer than this get no direct-sum column.
    #[arg(long, default_value_t = 100_000)]
    pub direct_cutoff: u64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Emit the weights of the counterdiabatic Hamiltonian instead.
    #[arg(long)]
    pub table: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EdcheckArgs {
    #[arg(long = "N")]
    pub n_spins: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub g: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub delta: f64,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub kind: SumKind,
    #[arg(long)]
    pub family: FamilyTag,
    #[arg(long)]
    pub m: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
}

impl From<isum::Error> for CliError {
    fn from(e: isum::Error) -> Self {
        match e {
            isum::Error::NoConvergence(_) | isum::Error::IndefiniteParity(_) => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<grid::GridError> for CliError {
    fn from(e: grid::GridError) -> Self {
        CliError::Usage(e.0)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failed(format!("csv error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Failed(format!("json error: {e}"))
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    match std::env::var("ISUM_THREADS") {
        Ok(v) if !v.trim().is_empty() => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("ISUM_THREADS must be a positive integer, got {v:?}"))),
        },
        _ => match flag {
            Some(0) => Err(CliError::Usage("--threads must be positive".into())),
            other => Ok(other),
        },
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    if let Some(n) = thread_count(cli.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Failed(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Verify(a) => commands::verify(a),
        Command::Chi(a) => commands::chi(a),
        Command::Chimax(a) => commands::chimax(a),
        Command::Cd(a) => commands::cd(a),
        Command::Edcheck(a) => commands::edcheck(a),
        Command::Bench(a) => commands::bench(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
