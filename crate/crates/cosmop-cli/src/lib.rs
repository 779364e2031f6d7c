//! Command-line surface of the planning toolkit.
//!
//! Three subcommands tie the pipeline together: `plan` synthesizes a plan
//! from a scene and a temporal-logic goal, `simulate` executes a plan's
//! go-to legs through the dynamic-window controller among moving obstacles,
//! and `bench` times synthesis over generated room-grid scenes.
//!
//! Exit codes are part of the interface:
//!
//! | code | meaning |
//! |------|---------|
//! | 0    | success (plan found / all legs reached / bench complete) |
//! | 1    | usage or input error |
//! | 2    | goal infeasible at every trace length tried |
//! | 3    | solver timeout or inconclusive verdict |
//! | 4    | simulation stopped safely short of a waypoint (replan) |
//! | 5    | passive-safety monitor violation (controller bug) |

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;

pub use config::AppConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;
pub const EXIT_STOPPED_SAFE: i32 = 4;
pub const EXIT_MONITOR_VIOLATION: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "cosmop",
    version,
    about = "Plan synthesis, simulation, and benchmarks for task-and-motion planning"
)]
pub struct Cli {
    /// Optional TOML config (solver command, controller and bench defaults).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a plan from a scene and a temporal-logic goal.
    Plan(PlanArgs),
    /// Execute a plan's go-to legs with the dynamic-window controller.
    Simulate(SimulateArgs),
    /// Time synthesis over generated room-grid scenes.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// Scene description JSON.
    #[arg(long, value_name = "FILE")]
    pub scene: PathBuf,
    /// Goal formula file (temporal-logic text).
    #[arg(long, value_name = "FILE")]
    pub spec: PathBuf,
    /// Fixed trace length.
    #[arg(long = "K", value_name = "INT")]
    pub k: Option<usize>,
    /// Smallest trace length of a scan (with --k-max).
    #[arg(long, value_name = "INT")]
    pub k_min: Option<usize>,
    /// Largest trace length of a scan (with --k-min).
    #[arg(long, value_name = "INT")]
    pub k_max: Option<usize>,
    /// Per-solve wall-clock budget, milliseconds.
    #[arg(long, value_name = "MS")]
    pub timeout: Option<u64>,
    /// Write the plan as JSON here.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Plan JSON produced by `plan --out`.
    #[arg(long, value_name = "FILE")]
    pub plan: PathBuf,
    /// Scene description JSON the plan was synthesized for.
    #[arg(long, value_name = "FILE")]
    pub scene: PathBuf,
    /// Moving-obstacle scenario JSON (list of {x, y, vx, vy, radius, policy}).
    #[arg(long, value_name = "FILE")]
    pub obstacles: Option<PathBuf>,
    /// Deterministically perturb obstacle starts and velocity headings.
    #[arg(long, value_name = "INT")]
    pub seed: Option<u64>,
    /// Write an overhead-view SVG of the executed run.
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
    /// Write the per-cycle CSV trace.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// One of: size, rooms, k, complexity.
    #[arg(long, value_name = "NAME")]
    pub suite: String,
    /// Repetitions per row (default 35, or the config value).
    #[arg(long, value_name = "INT")]
    pub reps: Option<usize>,
    /// Write the report as CSV here.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Run this many rows in parallel, each with its own solver session.
    #[arg(long, value_name = "INT", default_value_t = 1)]
    pub jobs: usize,
}

/// Parses the arguments and dispatches; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return EXIT_OK;
        }
        Err(e) => {
            eprint!("{e}");
            return EXIT_USAGE;
        }
    };
    let config = match AppConfig::load(cli.config.as_deref()) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match &cli.command {
        Command::Plan(args) => commands::cmd_plan(args, &config),
        Command::Simulate(args) => commands::cmd_simulate(args, &config),
        Command::Bench(args) => commands::cmd_bench(args, &config),
    }
}
