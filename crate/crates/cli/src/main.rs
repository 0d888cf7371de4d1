//! `gptcompat` command-line front end.

mod commands;
mod format;
mod shape;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{JointArgs, JointMethod, OutputFormat, PairKind, RunConfig, SweepArgs, EXIT_ERROR};
use shape::{Family, ShapeSpec};

#[derive(Parser)]
#[command(
    name = "gptcompat",
    version,
    about = "Compatibility of measurements on polytopal state spaces"
)]
struct Cli {
    /// Geometric tolerance.
    #[arg(long, global = true, env = "GPTCOMPAT_TOL", default_value_t = 1e-9)]
    tol: f64,
    /// Largest accepted duality gap of a degree program.
    #[arg(long, global = true, default_value_t = 1e-7)]
    gap_tol: f64,
    /// Output format (JSON by default, CSV for sweeps).
    #[arg(long, global = true, value_enum)]
    output: Option<OutputFormat>,
    /// Seed for `random` shapes given without one.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Increase log verbosity (-v info, -vv debug, -vvv trace).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Vertex, facet and simplex report for a state space.
    Analyze {
        #[arg(long)]
        shape: ShapeSpec,
        /// Write the vertices as JSON to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Degree of compatibility of two measurements. Exit code 0 when
    /// compatible, 2 when incompatible.
    Degree {
        #[arg(long)]
        shape: ShapeSpec,
        #[arg(long)]
        m1: PathBuf,
        #[arg(long)]
        m2: PathBuf,
        /// Optimize the coin biases instead of using a fair coin.
        #[arg(long)]
        free_coin: bool,
    },
    /// Least compatible pair built from facets and vertices. Exit code 3 on a simplex.
    Witness {
        #[arg(long)]
        shape: ShapeSpec,
    },
    /// Degree over a family of state spaces, as CSV.
    Sweep {
        /// `ngon:a..b[:step]` or `random:d:n:a..b` (inclusive ranges).
        #[arg(long)]
        family: Family,
        #[arg(long, value_enum, default_value_t = PairKind::Axes)]
        pair: PairKind,
        #[arg(long)]
        m1: Option<PathBuf>,
        #[arg(long)]
        m2: Option<PathBuf>,
        #[arg(long)]
        free_coin: bool,
    },
    /// Joint measurement of two compatible measurements.
    Joint {
        #[arg(long)]
        shape: ShapeSpec,
        #[arg(long)]
        m1: PathBuf,
        #[arg(long)]
        m2: PathBuf,
        #[arg(long, value_enum, default_value_t = JointMethod::Auto)]
        method: JointMethod,
        /// Coin bias for the first measurement (half-coin method).
        #[arg(long, default_value_t = 0.5)]
        t1: f64,
        /// Coin bias for the second measurement (half-coin method).
        #[arg(long, default_value_t = 0.5)]
        t2: f64,
    },
}

fn run(cli: &Cli) -> anyhow::Result<commands::Output> {
    let cfg = RunConfig {
        tol: cli.tol,
        gap_tol: cli.gap_tol,
        output: cli.output,
        seed: cli.seed,
    };
    cfg.validate()?;
    match &cli.command {
        Command::Analyze { shape, dump } => commands::analyze(&cfg, shape, dump.as_deref()),
        Command::Degree {
            shape,
            m1,
            m2,
            free_coin,
        } => commands::degree_cmd(&cfg, shape, m1, m2, *free_coin),
        Command::Witness { shape } => commands::witness(&cfg, shape),
        Command::Sweep {
            family,
            pair,
            m1,
            m2,
            free_coin,
        } => commands::sweep(
            &cfg,
            &SweepArgs {
                family,
                pair: *pair,
                m1: m1.as_deref(),
                m2: m2.as_deref(),
                free_coin: *free_coin,
            },
        ),
        Command::Joint {
            shape,
            m1,
            m2,
            method,
            t1,
            t2,
        } => commands::joint(
            &cfg,
            &JointArgs {
                shape,
                m1,
                m2,
                method: *method,
                t1: *t1,
                t2: *t2,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR as u8 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(EXIT_ERROR as u8);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
