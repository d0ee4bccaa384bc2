use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypersphere_lab::numeric::Backend;

#[derive(Parser, Debug)]
#[command(
    name = "hypersphere-lab",
    version,
    about = "Exact hypersphere incidence counting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for counting (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Precision cap in bits for certified sign decisions and interval runs.
    #[arg(
        long,
        global = true,
        env = "HYPERSPHERE_LAB_BITS",
        default_value_t = 4096
    )]
    pub bits: u32,

    /// Output file (default: stdout).
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a trivial or curve-coset point set.
    Generate(GenerateArgs),
    /// Parse a point set and check general position.
    Validate(InputArgs),
    /// Hypersphere incidence spectrum of a point set.
    Count(CountArgs),
    /// Lift a point set onto the unit sphere one dimension up.
    Lift(InputArgs),
    /// Invert a point set in the unit sphere around a centre.
    Invert(InvertArgs),
    /// Residue-arithmetic counts for a curve coset.
    Oracle(OracleArgs),
    /// Closed-form extremal values.
    Formula(FormulaArgs),
    /// Engine counts next to oracle and formula values.
    Compare(CompareArgs),
    /// Run the built-in property suite.
    Selftest(SelftestArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Trivial,
    Coset,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Rational,
    Cyclotomic,
    Interval,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Rational => Backend::Rational,
            BackendArg::Cyclotomic => Backend::Cyclotomic,
            BackendArg::Interval => Backend::Interval,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpectrumFormat {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Markdown,
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Per-subset incidence counting (all backends).
    Incidence,
    /// Group subsets by hypersphere coefficients (rational only).
    Hashing,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Coset offset.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub l: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output backend (default: rational for trivial, cyclotomic for coset).
    #[arg(long, value_enum)]
    pub backend: Option<BackendArg>,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Point set JSON file.
    pub input: PathBuf,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    pub input: PathBuf,
    /// Evaluate in this backend instead of the file's own.
    #[arg(long, value_enum)]
    pub backend: Option<BackendArg>,
    #[arg(long, value_enum, default_value_t = SpectrumFormat::Json)]
    pub format: SpectrumFormat,
    #[arg(long, value_enum, default_value_t = Method::Incidence)]
    pub method: Method,
    /// Count hyperplanes of the set itself instead of hyperspheres.
    #[arg(long)]
    pub hyperplanes: bool,
}

#[derive(Args, Debug)]
pub struct InvertArgs {
    pub input: PathBuf,
    /// Comma-separated rational coordinates, e.g. `0,1/2,-3`.
    #[arg(long, allow_hyphen_values = true)]
    pub center: String,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub l: i64,
    /// Report every offset class and the best one.
    #[arg(long)]
    pub scan: bool,
}

#[derive(Args, Debug)]
pub struct FormulaArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Markdown)]
    pub format: ReportFormat,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
