//! The `sil` experiment runner: reproducible sweeps over the agent, policy,
//! manipulation and forgetting models, written as CSV.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod grid;
pub mod plot;
pub mod source;
pub mod table;

pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_FLAGS: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_GRID: i32 = 4;

/// A diagnostic plus the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn flag(message: String) -> Self {
        Failure { code: EXIT_FLAGS, message }
    }

    pub fn input(path: &Path, err: impl fmt::Display) -> Self {
        Failure { code: EXIT_INPUT, message: format!("{}: {err}", path.display()) }
    }

    pub fn grid(err: impl fmt::Display) -> Self {
        Failure { code: EXIT_GRID, message: err.to_string() }
    }

    pub fn runtime(err: impl fmt::Display) -> Self {
        Failure { code: EXIT_RUNTIME, message: err.to_string() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

const AFTER_HELP: &str = "\
Grids (--theta, --r, --p, --x0, --k) are comma lists (0.01,0.05,0.1), closed
ranges start:stop:step (0:1:0.001) or single values.

Output is CSV: a comment line `# sil schema=1 command=NAME ...`, a header row,
then rows sorted by their leading key columns. Progress goes to stderr and a
one-line summary to stdout (or only the summary when --out is given).

Environment: SIL_THREADS caps the number of worker threads.
Exit codes: 0 success, 1 computation failure, 2 bad flags, 3 unreadable
input, 4 invalid grid.";

#[derive(Debug, Parser)]
#[command(name = "sil", version, about = "Threshold policies for agents whose effort pays off slowly", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Acceptance threshold grid, values in (0, 1).
    #[arg(long, global = true, value_name = "GRID")]
    pub theta: Option<String>,
    /// Discount rate grid, values > 0.
    #[arg(long, global = true, value_name = "GRID")]
    pub r: Option<String>,
    /// Detection probability grid, values in [0, 1].
    #[arg(long, global = true, value_name = "GRID")]
    pub p: Option<String>,
    /// Initial similarity grid, values in (0, 1].
    #[arg(long, global = true, value_name = "GRID")]
    pub x0: Option<String>,
    /// Effort grid, values in [0, 1].
    #[arg(long, global = true, value_name = "GRID")]
    pub k: Option<String>,
    /// Population source(s): beta:v,w or file:PATH:FORMAT (scores, exam, cdf); join several with ';'.
    #[arg(long, global = true, value_name = "SRC")]
    pub density: Option<String>,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Incentive constant; defaults to the internally solved value (pass 0.3164 to pin the rounded one).
    #[arg(long, global = true)]
    pub m: Option<f64>,
    /// Write the CSV here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Also render the command's curve as SVG.
    #[arg(long, global = true, value_name = "PATH")]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Method {
    /// Maximum likelihood, initialized by moments.
    #[default]
    Mle,
    /// Method of moments only.
    Moments,
}

#[derive(Debug, Args, Clone, Default)]
pub struct ScaleArgs {
    /// Raw score bounds mapped onto [0, 1], as lo,hi (exam default 0,100; others 0,1).
    #[arg(long, value_name = "LO,HI", conflicts_with = "observed_range")]
    pub score_range: Option<String>,
    /// Normalize by the observed minimum and maximum instead.
    #[arg(long)]
    pub observed_range: bool,
    /// Fitting method for score and exam files.
    #[arg(long, value_enum, default_value_t = Method::Mle)]
    pub method: Method,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit Beta densities to score samples.
    #[command(after_help = "\
Reads --density. A beta:v,w source is sampled (--samples draws, --seed) and
refitted; a scores or exam file is normalized and fitted.

Columns:
  source    the --density entry
  n         number of samples fitted
  v, w      fitted Beta shapes
  mean      v / (v + w)")]
    Fit {
        /// Draws per synthetic Beta source.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[command(flatten)]
        scale: ScaleArgs,
    },
    /// Agent utility over an effort grid.
    #[command(after_help = "\
Reads --theta, --r, --x0 (required) and --k (default 0:1:0.001).

Columns:
  theta, r, x0   scenario
  k              effort per round
  utility        discounted acceptance payoff minus effort")]
    ImproveCurve,
    /// Improvement boundaries: lowest x0 that improves, highest theta that incentivizes.
    #[command(after_help = "\
Reads --r (required) and at least one of --theta, --x0.

Columns:
  bound    min_x0 (lowest improving x0 at threshold `given`) or
           max_theta (highest threshold that an agent at x0 = `given` improves for)
  r        discount rate
  given    the threshold or initial similarity held fixed
  value    the boundary
  factor_c factor C at the boundary pair (equals m)")]
    DomainTable,
    /// Welfare-maximizing thresholds over discount rates.
    #[command(after_help = "\
Reads --density (default beta:1,1) and --r (required). With --theta the full
welfare curve is written instead of the optimum.

Columns without --theta:
  density        population source
  r              discount rate
  theta_star     welfare-maximizing threshold
  welfare        total improvement at theta_star
  cutoff         lowest improving x0 at theta_star
  single_peaked  whether welfare on the search grid rises then falls
Columns with --theta:
  density, r, theta, welfare, cutoff")]
    PolicySweep {
        #[command(flatten)]
        scale: ScaleArgs,
    },
    /// Manipulation regions over detection probabilities.
    #[command(after_help = "\
Reads --theta, --r, --p (required) and --density (default beta:1,1). Honest
payoffs always use the solved m.

Columns:
  theta, r, p     scenario and detection probability
  interval        index of the region interval (empty when no agent manipulates)
  lower, upper    interval endpoints in initial similarity
  fraction        population share inside the whole region
  p_hat           smallest detection probability that deters everyone at (theta, r)")]
    ManipSweep {
        #[command(flatten)]
        scale: ScaleArgs,
    },
    /// Effort cap under forgetting over an x0 grid.
    #[command(after_help = "\
Reads --x0 (default 0.001:1:0.001).

Columns:
  x0      initial similarity
  k_hat   largest effort worth investing when knowledge can be forgotten")]
    ForgettingCap,
    /// Recover discount rates from observed improvement cutoffs.
    #[command(after_help = "\
Reads --theta with either --x0 (observed cutoffs, paired with --theta
element-wise) or --r (cutoffs generated from known rates, for round trips).

Columns:
  theta    threshold
  cutoff   lowest initial similarity observed to improve
  r        known rate when generated from --r, else empty
  r_hat    estimated rate")]
    EstimateR,
    /// Render a CSV written by another command as SVG.
    #[command(after_help = "\
Kinds: utility-curve (improve-curve), welfare-curve (policy-sweep --theta),
region-band (manip-sweep), khat-curve (forgetting-cap). Writes to --out or stdout.")]
    Plot {
        /// Plot kind.
        #[arg(long)]
        kind: String,
        /// CSV file to render.
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Fit { .. } => "fit",
            Command::ImproveCurve => "improve-curve",
            Command::DomainTable => "domain-table",
            Command::PolicySweep { .. } => "policy-sweep",
            Command::ManipSweep { .. } => "manip-sweep",
            Command::ForgettingCap => "forgetting-cap",
            Command::EstimateR => "estimate-r",
            Command::Plot { .. } => "plot",
        }
    }
}

/// Caps the global worker pool from `SIL_THREADS`.
pub fn configure_threads(value: Option<String>) -> Result<(), Failure> {
    let Some(value) = value else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::flag(format!("SIL_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(Failure::runtime)
}
