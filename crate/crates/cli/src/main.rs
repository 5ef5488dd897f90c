//! Command-line front end: extract spectral data from matrix files,
//! rebuild matrices from spectra plus sign data, batch-verify round trips,
//! emit plot samples for the pentadiagonal step geometry, and count how
//! often random instances hit the four-candidate degeneracy.
//!
//! Verbosity is controlled by the `MATRIXHEAR_LOG` environment variable
//! (standard `env_logger` filter syntax, default `warn`). All randomness
//! enters through `--seed`; runs are otherwise fully deterministic.

mod cmds;
mod curves;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use matrixhear_core::Error;

/// The eigenvector gauge sign data is tied to. Extraction refuses any
/// other tag so files from different conventions cannot be mixed up.
pub const GAUGE_TAG: &str = "last-entry-positive";

#[derive(Parser)]
#[command(
    name = "matrixhear",
    version,
    about = "Reconstruct symmetric matrices from nested principal-minor spectra and sign data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read a matrix file and write its spectral data and optional sign files
    Extract(ExtractArgs),
    /// Rebuild a matrix from a spectral-data file plus sign data
    Reconstruct(ReconstructArgs),
    /// Batch round-trip check: extract, reconstruct, compare, one verdict per file
    Verify(VerifyArgs),
    /// Emit CSV samples of the circle, lines, conics, and candidate points of one step
    TraceCurves(TraceArgs),
    /// Count four-candidate eigenvector degeneracies over random pentadiagonal instances
    BenchAlpha(BenchArgs),
}

#[derive(Args)]
pub struct ExtractArgs {
    /// Input matrix file
    pub matrix: PathBuf,
    /// Output spectral-data file (stdout when omitted)
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write projection-sign data (full scheme, or the minimal sliding
    /// scheme with --window) to this file
    #[arg(long, value_name = "PATH")]
    pub signs: Option<PathBuf>,
    /// Also write one sign per column (outermost in-band entry, needs --d)
    #[arg(long, value_name = "PATH")]
    pub column_signs: Option<PathBuf>,
    /// Also write first-row signs for the redundant sliding scheme (needs --d)
    #[arg(long, value_name = "PATH")]
    pub first_row: Option<PathBuf>,
    /// Sliding-window size; switches the output to sliding spectral data
    #[arg(long, value_name = "W")]
    pub window: Option<usize>,
    /// Bandwidth of the matrix (defaults to W-1 when --window is given)
    #[arg(long)]
    pub d: Option<usize>,
    /// Eigenvector gauge the sign files are tied to
    #[arg(long, default_value = GAUGE_TAG)]
    pub gauge: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Dense chain: one growth step per order, full sign vectors
    Telescopic,
    /// Bandwidth-constrained chain, pruned sign search, one sign per column
    Banded,
    /// Pentadiagonal chain via line-circle intersections
    PentaLines,
    /// Pentadiagonal chain via conic-circle intersections
    PentaConics,
    /// Sliding windows of size d+1 with full window sign vectors
    SlidingMinimal,
    /// Sliding windows of size d+2 with one first-row sign per window
    SlidingOptimal,
}

#[derive(Args)]
pub struct ReconstructArgs {
    /// Input spectral-data or sliding-spectral file
    pub input: PathBuf,
    /// Reconstruction engine (default: telescopic for full spectral data,
    /// inferred from the window size for sliding data)
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Projection-sign file (telescopic) or sliding-sign file (sliding-minimal)
    #[arg(long, value_name = "PATH")]
    pub signs: Option<PathBuf>,
    /// Column-sign file (banded and pentadiagonal engines)
    #[arg(long, value_name = "PATH")]
    pub column_signs: Option<PathBuf>,
    /// First-row sign file (sliding-optimal)
    #[arg(long, value_name = "PATH")]
    pub first_row_signs: Option<PathBuf>,
    /// Bandwidth; must agree with the value recorded in the sign/data files
    #[arg(long)]
    pub d: Option<usize>,
    /// Acceptance tolerance for the banded sphere residual (default scales
    /// with the step data)
    #[arg(long)]
    pub eps: Option<f64>,
    /// Output matrix file (stdout when omitted)
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Write a JSON-lines step report to this file
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Matrix files to round-trip
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Max-abs entry error allowed for a PASS
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Number of worker threads for the batch
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args)]
pub struct TraceArgs {
    /// Input matrix file, or a spectral-data file (a bandwidth-2
    /// representative is then rebuilt from it first)
    pub input: PathBuf,
    /// Order of the minor whose growth step is traced (2 <= step < order)
    #[arg(long)]
    pub step: usize,
    /// Output CSV file (stdout when omitted)
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Number of random pentadiagonal instances
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    /// Matrix order of each instance
    #[arg(long, default_value_t = 9)]
    pub n: usize,
    /// Base seed; instance i uses seed + i
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance of the degeneracy detector
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
}

/// Maps error classes onto stable exit codes: 2 = unparsable input,
/// 3 = data not regular enough to fix a gauge, 4 = no matrix fits,
/// 5 = more than one matrix fits, 1 = anything else.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        Error::NotRegular { .. } | Error::GaugeAmbiguous { .. } => 3,
        Error::NoSolution { .. } | Error::NoIntersection { .. } => 4,
        Error::Ambiguous { .. } => 5,
        _ => 1,
    }
}

fn run(cli: Cli) -> matrixhear_core::Result<u8> {
    match cli.command {
        Command::Extract(args) => cmds::extract(&args),
        Command::Reconstruct(args) => cmds::reconstruct(&args),
        Command::Verify(args) => cmds::verify(&args),
        Command::TraceCurves(args) => curves::trace(&args),
        Command::BenchAlpha(args) => cmds::bench_alpha(&args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(
        env_logger::Env::new().filter_or("MATRIXHEAR_LOG", "warn"),
    )
    .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
