use std::path::PathBuf;

use clap::builder::TypedValueParser;
use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Outcome, DEFAULT_GRID};
use crate::config::{load_lattice, ModeSelection, RunConfig};
use crate::error::CliError;
use crate::table::Format;

#[derive(Debug, Parser)]
#[command(
    name = "intform",
    version,
    about = "Exact Gram determinants of integral forms of Heisenberg and lattice VOAs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of S(k,n), b_n and the [A:B] index formulas.
    Snk {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, default_value_t = 6)]
        n_max: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gram determinants of A_L(n) against both closed forms.
    DetM1 {
        #[arg(long)]
        lattice: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Gram determinants of the weight-n piece of the lattice VOA.
    DetVoa {
        #[arg(long)]
        lattice: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Full invariant grid with pass/fail per check.
    VerifyAll {
        /// Repeatable; defaults to Z2, A1, A2, A1A1.
        #[arg(long)]
        lattice: Vec<String>,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        k_max: u32,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 4)]
    pub n_max: u32,
    #[arg(long, value_enum, default_value_t = ModeSelection::Both)]
    pub mode: ModeSelection,
    /// Largest basis dimension any single computation may use.
    #[arg(long, default_value_t = intform::DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..).map(|x| x as usize))]
    pub budget: usize,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..).map(|x| x as usize))]
    pub jobs: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl RunArgs {
    fn config(&self, lattices: &[String]) -> Result<RunConfig, CliError> {
        let lattices = lattices.iter().map(|s| load_lattice(s)).collect::<Result<Vec<_>, _>>()?;
        let cfg = RunConfig {
            lattices,
            n_max: self.n_max,
            modes: self.mode.modes(),
            format: self.output.format,
            budget: self.budget,
            jobs: self.jobs,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl Command {
    pub fn run(&self) -> Result<(Outcome, &OutputArgs), CliError> {
        match self {
            Command::Snk { k, n_max, output } => Ok((commands::cmd_snk(*k, *n_max)?, output)),
            Command::DetM1 { lattice, run } => {
                Ok((commands::cmd_det_m1(&run.config(std::slice::from_ref(lattice))?)?, &run.output))
            }
            Command::DetVoa { lattice, run } => {
                Ok((commands::cmd_det_voa(&run.config(std::slice::from_ref(lattice))?)?, &run.output))
            }
            Command::VerifyAll { lattice, k_max, run } => {
                let names: Vec<String> = if lattice.is_empty() {
                    DEFAULT_GRID.iter().map(|s| s.to_string()).collect()
                } else {
                    lattice.clone()
                };
                Ok((commands::cmd_verify_all(&run.config(&names)?, *k_max)?, &run.output))
            }
        }
    }
}
