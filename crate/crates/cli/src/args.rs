use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "infoex",
    version,
    about = "Information exclusion relations for quantum measurements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exclusion bounds of a measurement ensemble.
    #[command(subcommand)]
    Ier(IerCommand),
    /// Simulated tomography.
    #[command(subcommand)]
    Tomo(TomoCommand),
    /// Correlation witness on the noisy two-qubit family.
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Mach–Zehnder interferometer sweeps.
    #[command(subcommand)]
    Mzi(MziCommand),
    /// Memory-assisted guessing under local dynamics.
    #[command(subcommand, name = "guess-game")]
    GuessGame(GuessCommand),
}

#[derive(Debug, Subcommand)]
pub enum IerCommand {
    /// Norm, exclusivity, completeness and complementary pairs.
    Bound(BoundArgs),
    /// Audit the bound on a state; bipartite states also get the memory-assisted audits.
    Check(CheckArgs),
}

#[derive(Debug, Subcommand)]
pub enum TomoCommand {
    /// Outcome probabilities (or sampled frequencies with --shots).
    Simulate(SimulateArgs),
    /// Linear-inversion estimate from a probability file.
    Reconstruct(ReconstructArgs),
}

#[derive(Debug, Subcommand)]
pub enum WitnessCommand {
    /// Critical noise levels across the entanglement angle.
    EtaScan(WitnessArgs),
    /// Same scan with the optimized weights listed per angle.
    Optimize(WitnessArgs),
}

#[derive(Debug, Subcommand)]
pub enum MziCommand {
    /// Sweep the phase shifter.
    Scan(MziArgs),
}

#[derive(Debug, Subcommand)]
pub enum GuessCommand {
    /// Random local unitaries applied step by step.
    Run(GuessArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override the state/effect validation tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Ensemble file (alias of --input).
    #[arg(long, required_unless_present = "input")]
    pub ensemble: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub ensemble: PathBuf,
    #[arg(long)]
    pub state: PathBuf,
    /// Smoothing parameter for the min-entropy bound (bipartite states).
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub ensemble: PathBuf,
    #[arg(long)]
    pub state: PathBuf,
    /// Multinomial sample size per measurement; 0 emits exact probabilities.
    #[arg(long, default_value_t = 0)]
    pub shots: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub ensemble: PathBuf,
    /// Probability file as written by `tomo simulate`.
    #[arg(long)]
    pub input: PathBuf,
    /// Optional true state, to report the reconstruction error.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    /// Built-in observable triple: a, b, c or d.
    #[arg(long, required_unless_present = "input")]
    pub case: Option<String>,
    /// Witness file with paired measurements.
    #[arg(long, conflicts_with = "case")]
    pub input: Option<PathBuf>,
    /// Number of angles on [-pi/4, pi/4].
    #[arg(long, default_value_t = 65)]
    pub grid: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct MziArgs {
    /// First splitter angle in radians.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "on")]
    pub bs2: Switch,
    /// Number of phases on [0, 2 pi).
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Input photon state; |0> when absent.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct GuessArgs {
    /// Bipartite state file.
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub ensemble: PathBuf,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[command(flatten)]
    pub common: Common,
}
