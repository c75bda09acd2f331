use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "hodyn",
    version,
    about = "Higher-order game dynamics: simulate, sweep, eliminate, verify"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Integrate one trajectory; write a CSV and a key=value summary.
    Simulate(SimulateArgs),
    /// Run dominance elimination and print the report.
    Eliminate(EliminateArgs),
    /// Run a pre-registered verification recipe and report pass/fail.
    Verify(VerifyArgs),
    /// Integrate a grid of initial profiles and summarize the outcomes.
    Sweep(SweepArgs),
    /// List the builtin games, optionally exporting their documents.
    ListBuiltins(ListBuiltinsArgs),
}

/// Exactly one of the two game sources.
#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct GameSource {
    /// Builtin game id; `list-builtins` enumerates them.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Path to a game document (JSON, see the interface notes in README).
    #[arg(long)]
    pub game: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DynChoice {
    /// Score cascade through the logit map.
    Ld,
    /// Relative-score cascade (scores against a per-player base action).
    Zd,
    /// Strategy-space cascade integrated directly on the simplex.
    Rd,
    /// Score cascade driven by a payoff observable; pair with --observable.
    Gd,
}

#[derive(Args)]
pub struct DynOpts {
    /// Dynamics family.
    #[arg(long, value_enum, default_value_t = DynChoice::Ld)]
    pub dynamics: DynChoice,
    /// Cascade order n >= 1.
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    /// Rationality coefficient: one value for every player, or a comma list.
    #[arg(long, default_value = "1")]
    pub lambda: String,
    /// Payoff observable: identity | affine:SCALE,OFFSET | tanh | cubic |
    /// payoff-adjusted[:OFFSET].
    #[arg(long, default_value = "identity")]
    pub observable: String,
}

#[derive(Args)]
pub struct IntOpts {
    /// Integration end time.
    #[arg(long = "t-end", default_value_t = 20.0)]
    pub t_end: f64,
    /// Relative tolerance of the adaptive stepper.
    #[arg(long, default_value_t = 1e-8)]
    pub rtol: f64,
    /// Absolute tolerance of the adaptive stepper.
    #[arg(long, default_value_t = 1e-10)]
    pub atol: f64,
    /// Sampling interval for CSV rows; default t_end/200.
    #[arg(long = "sample-dt")]
    pub sample_dt: Option<f64>,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: GameSource,
    #[command(flatten)]
    pub dynamics: DynOpts,
    #[command(flatten)]
    pub integration: IntOpts,
    /// Initial condition: "barycenter", a profile "w,..;w,..", or
    /// "rest-at:w,..;w,..". All derivative levels start at zero.
    #[arg(long, default_value = "barycenter")]
    pub init: String,
    /// Overwrite one state level before integrating, as R=v,..;v,.. with one
    /// row per player in that level's coordinates. Repeatable.
    #[arg(long = "bias-level")]
    pub bias_level: Vec<String>,
    /// Append the raw state columns of every level to the CSV.
    #[arg(long)]
    pub levels: bool,
    /// Record an extinction-rate fit for PLAYER,ACTION in the summary.
    /// Repeatable.
    #[arg(long = "fit")]
    pub fit: Vec<String>,
    /// Directory receiving trajectory.csv and summary.txt.
    #[arg(long = "out-dir", default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeChoice {
    /// Iterated strict dominance, pure dominators.
    Strict,
    /// Iterated strict dominance allowing mixed dominators.
    StrictMixed,
    /// One weak sweep, then iterated strict dominance.
    WeakThenStrict,
}

#[derive(Args)]
pub struct EliminateArgs {
    #[command(flatten)]
    pub source: GameSource,
    /// Elimination procedure.
    #[arg(long, value_enum, default_value_t = ModeChoice::Strict)]
    pub mode: ModeChoice,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Recipe id: dom-rate, weak-dom, folk-stationarity, folk-limit-nash,
    /// strict-convergence, strict-rate, incompressibility, non-attraction,
    /// monotonic-dom, monotonic-folk.
    pub id: String,
    /// Restrict a rate recipe to a single cascade order.
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: GameSource,
    #[command(flatten)]
    pub dynamics: DynOpts,
    #[command(flatten)]
    pub integration: IntOpts,
    /// Grid "NxM": N initial points for player 1 and M for player 2, each
    /// axis placing linspace(0.1, 0.9) weight on that player's first action.
    #[arg(long)]
    pub grid: String,
    /// Directory receiving the per-point CSVs and sweep.txt.
    #[arg(long = "out-dir", default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct ListBuiltinsArgs {
    /// Write each builtin's JSON document into this directory.
    #[arg(long)]
    pub export: Option<PathBuf>,
}
