//! `fiberstar`: exact star products, representations and identity suites
//! from the command line.
//!
//! Exit codes: 0 when every residual passes, 1 when a check fails, 2 for
//! usage and input errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fiberstar::scalars::{parse_rat, Rat};

#[derive(Parser, Debug)]
#[command(
    name = "fiberstar",
    version,
    about = "Exact star products on cotangent bundles"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Opts {
    /// Truncation order in λ.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(i32).range(0..=16))]
    pub order: i32,
    /// Ordering parameter κ in [0, 1], e.g. `1/2`.
    #[arg(long, global = true, value_parser = parse_kappa)]
    pub kappa: Option<Rat>,
    /// TOML chart description; without it the base is flat ℝ² with B = 0.
    #[arg(long, global = true)]
    pub geometry: Option<PathBuf>,
    /// Chart of the geometry file to work on (default: the first one).
    #[arg(long, global = true)]
    pub chart: Option<String>,
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Run batch work on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// f ★ g with the magnetic twist of the chart.
    Star { f: String, g: String },
    /// f ★ g − g ★ f.
    Comm { f: String, g: String },
    /// ρ^A(f) applied to the section u·e^{(i/λ)S}, on every chart it reaches.
    Rep {
        f: String,
        u: String,
        /// Phase S of the section on the working chart.
        #[arg(long)]
        phase: Option<String>,
    },
    /// Named identity suites; `all` runs every one.
    Verify {
        #[arg(required = true)]
        suites: Vec<String>,
        /// Random samples per exact check.
        #[arg(long, default_value_t = 25)]
        samples: usize,
    },
    /// Conjugates H by the Weyl evolution of a closed A₀ and prints the
    /// transport hierarchy.
    Wkb {
        h: String,
        /// Components of A₀, one per base dimension.
        #[arg(long = "a0", required = true, num_args = 1..)]
        a0: Vec<String>,
        /// Rational energy E for the residual H(q, A₀) − E.
        #[arg(long)]
        energy: Option<String>,
    },
    /// Defect table of the numeric operator calculus (CSV, or JSON).
    Numeric,
}

fn parse_kappa(s: &str) -> Result<Rat, String> {
    let k = parse_rat(s).ok_or_else(|| format!("`{s}` is not a rational number such as 1/2"))?;
    if k < Rat::from_integer(0.into()) || k > Rat::from_integer(1.into()) {
        return Err(format!("κ = {s} lies outside [0, 1]"));
    }
    Ok(k)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Star { f, g } => commands::star(&cli.opts, f, g, false),
        Command::Comm { f, g } => commands::star(&cli.opts, f, g, true),
        Command::Rep { f, u, phase } => commands::rep(&cli.opts, f, u, phase.as_deref()),
        Command::Verify { suites, samples } => commands::verify(&cli.opts, suites, *samples),
        Command::Wkb { h, a0, energy } => commands::wkb(&cli.opts, h, a0, energy.as_deref()),
        Command::Numeric => commands::numeric(&cli.opts),
    };
    match res {
        Ok(out) => {
            print!("{}", out.text);
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
