use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quasident::sampling::{SampleConfig, DEFAULT_BOUND, DEFAULT_SEED, DEFAULT_TRIALS};

use crate::error::CliError;

/// Environment variable that overrides the seed of every run.
pub const SEED_ENV: &str = "QUASIDENT_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Symbolic,
    Randomized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Exact verification of polynomial and quasi-identities of n x n matrices.
#[derive(Debug, Parser)]
#[command(name = "quasident", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Matrix dimension.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Symbolic)]
    pub mode: Mode,
    /// Sampling seed (overridden by QUASIDENT_SEED).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Number of random trials, at least 1.
    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    /// Random entries are drawn from [-bound, bound], bound at least 1.
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND)]
    pub bound: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Cost ceiling; each command has its own default.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
    /// Add wall-clock runtimes to the report (output is then not reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check that q_n and its polarization Q_n vanish on generic matrices.
    VerifyCh,
    /// Quasi-identity, central and ordinary-identity verdicts for one input.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Space of multilinear quasi-identities of degree D in x1..xD.
    SolveMultilinear {
        #[arg(long)]
        degree: usize,
    },
    /// Local linear dependence of the inputs, one polynomial per line.
    CapelliDep {
        #[arg(long)]
        input: PathBuf,
    },
    /// Antisymmetric quasi-identities.
    Antisym {
        #[command(subcommand)]
        which: AntisymCommand,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum AntisymCommand {
    /// The image of pi_n against the kernel of rho.
    Kerim,
    /// Quasi-identities of degree n^2 outside the ideal generated by O_n.
    Corollary2,
    /// Lower bound on the dimension of A_n by exact rank.
    Dim,
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::VerifyCh => "verify-ch".into(),
            Command::Check { .. } => "check".into(),
            Command::SolveMultilinear { .. } => "solve-multilinear".into(),
            Command::CapelliDep { .. } => "capelli-dep".into(),
            Command::Antisym { which } => format!(
                "antisym {}",
                match which {
                    AntisymCommand::Kerim => "kerim",
                    AntisymCommand::Corollary2 => "corollary2",
                    AntisymCommand::Dim => "dim",
                }
            ),
        }
    }
}

/// Settings shared by every command. Defaults: seed 0, trials 20, bound 9,
/// symbolic mode, text output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub mode: Mode,
    pub seed: u64,
    pub trials: usize,
    pub bound: i64,
    pub format: Format,
    pub budget: Option<u128>,
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: None,
            mode: Mode::Symbolic,
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            bound: DEFAULT_BOUND,
            format: Format::Text,
            budget: None,
            timings: false,
        }
    }
}

impl RunConfig {
    /// Builds the config from parsed flags; `env_seed` is the value of
    /// `QUASIDENT_SEED`, if set, and replaces the flag seed.
    pub fn from_cli(cli: &Cli, env_seed: Option<&str>) -> Result<RunConfig, CliError> {
        let seed = match env_seed {
            Some(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got {s:?}")))?,
            None => cli.seed,
        };
        let cfg = RunConfig {
            n: cli.n,
            mode: cli.mode,
            seed,
            trials: cli.trials,
            bound: cli.bound,
            format: cli.format,
            budget: cli.budget,
            timings: cli.timings,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials < 1 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        if self.bound < 1 {
            return Err(CliError::Usage("--bound must be at least 1".into()));
        }
        if self.n == Some(0) {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        Ok(())
    }

    pub fn require_n(&self) -> Result<usize, CliError> {
        self.n.ok_or_else(|| CliError::Usage("--n is required for this command".into()))
    }

    pub fn budget_or(&self, default: u128) -> u128 {
        self.budget.unwrap_or(default)
    }

    pub fn sample_config(&self) -> SampleConfig {
        SampleConfig {
            seed: self.seed,
            trials: self.trials,
            bound: self.bound,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "mode": match self.mode { Mode::Symbolic => "symbolic", Mode::Randomized => "randomized" },
            "seed": self.seed,
            "trials": self.trials,
            "bound": self.bound,
            "budget": self.budget.map(|b| b.to_string()),
        })
    }
}
