mod commands;
mod record;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Expected hyperbolic volumes and beta integrals of random beta polytopes.
#[derive(Debug, Parser)]
#[command(name = "hypvol", version)]
pub struct Cli {
    /// Require an explicit --seed for every randomized command.
    #[arg(long, global = true)]
    pub strict: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expected beta integral E ∫_P (1-|x|^2)^beta dx.
    Expect(ExpectArgs),
    /// Expected hyperbolic volume of a beta polytope or a special family.
    Hypvolume(HypvolumeArgs),
    /// One row per parameter value for a special family.
    Table(TableArgs),
    /// Monte-Carlo estimate compared with the formula.
    Simulate(SimulateArgs),
    /// Run the self-check suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Dimension d >= 2.
    #[arg(long)]
    pub dim: Option<u32>,
    /// Comma-separated beta parameters of the points, each >= -1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub betas: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RepArg {
    Upper,
    Lower,
    Auto,
}

#[derive(Debug, Args)]
pub struct ExpectArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Exponent beta of the weight (1-|x|^2)^beta.
    #[arg(long, allow_hyphen_values = true)]
    pub exponent: f64,
    #[arg(long, value_enum, default_value_t = RepArg::Auto)]
    pub rep: RepArg,
    /// Relative quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Case {
    Ideal3,
    IdealSimplex,
    PolygonBeta0,
    Ideal2,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::Ideal3 => "ideal3",
            Case::IdealSimplex => "ideal-simplex",
            Case::PolygonBeta0 => "polygon-beta0",
            Case::Ideal2 => "ideal2",
        }
    }
}

#[derive(Debug, Args)]
pub struct HypvolumeArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Special family instead of an explicit beta list.
    #[arg(long, value_enum)]
    pub case: Option<Case>,
    /// Number of points for the families that take one.
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub case: Case,
    /// Inclusive parameter range `a:b` (n, or d for ideal-simplex).
    #[arg(long)]
    pub range: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Auto,
    Absorption,
    GaussBonnet,
    Lobachevsky,
    SimplexMc,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Oracle::Auto)]
    pub oracle: Oracle,
    /// Exponent for the absorption oracle (default 0).
    #[arg(long, allow_hyphen_values = true)]
    pub exponent: Option<f64>,
    /// Independent random streams.
    #[arg(long, default_value_t = 16)]
    pub streams: u32,
    /// Uniform points per simplex for the simplex-mc oracle.
    #[arg(long, default_value_t = 16)]
    pub inner: u32,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Reduced grids and sample counts.
    #[arg(long)]
    pub quick: bool,
    /// Scale all tolerances (testing the failure path).
    #[arg(long, hide = true, default_value_t = 1.0)]
    pub tolerance_scale: f64,
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or an argument outside the mathematical domain.
    Usage(String),
    /// Some verification check failed; carries the buffered report.
    Verification(String),
}

impl From<hypvol::Error> for CliError {
    fn from(e: hypvol::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("HYPVOL_THREADS") {
        let n: usize =
            v.trim().parse().map_err(|_| CliError::Usage(format!("HYPVOL_THREADS must be a count, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure threads: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| commands::run(&cli));
    let mut stdout = std::io::stdout().lock();
    match result {
        Ok(out) => {
            if stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Verification(report)) => {
            let _ = stdout.write_all(report.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(1)
        }
    }
}
