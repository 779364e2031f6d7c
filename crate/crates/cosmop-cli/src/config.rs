//! Optional TOML configuration: solver command, controller defaults, and
//! benchmark defaults. Every section and key is optional; missing values
//! fall back to built-in defaults, and `COSMOP_SMT_CMD` outranks the file
//! for the solver command.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use cosmop::sim::DwaParams;
use cosmop::solver::SolverConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse config {path}: {source}")]
    Parse {
        path: String,
        source: toml::de::Error,
    },
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppConfig {
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub dwa: DwaSection,
    #[serde(default)]
    pub bench: BenchSection,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    /// Solver command line reading SMT-LIB2 on stdin, e.g. "z3 -in".
    pub cmd: Option<String>,
}

/// Overrides applied on top of the agent-scaled controller defaults.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DwaSection {
    pub v_max: Option<f64>,
    pub b: Option<f64>,
    pub a_max: Option<f64>,
    pub alpha_max: Option<f64>,
    pub w_max: Option<f64>,
    pub eps: Option<f64>,
    pub v_obstacle_max: Option<f64>,
    pub goal_tolerance: Option<f64>,
    pub w_heading: Option<f64>,
    pub w_clearance: Option<f64>,
    pub w_velocity: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSection {
    pub reps: Option<usize>,
}

impl AppConfig {
    pub fn load(path: Option<&Path>) -> Result<AppConfig, ConfigError> {
        let Some(path) = path else {
            return Ok(AppConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.display().to_string(),
            source,
        })
    }

    /// Solver command: environment variable, then config file, then `z3 -in`.
    pub fn solver(&self) -> SolverConfig {
        if let Ok(cmd) = std::env::var("COSMOP_SMT_CMD") {
            if !cmd.trim().is_empty() {
                return SolverConfig { command: cmd };
            }
        }
        match &self.solver.cmd {
            Some(cmd) => SolverConfig {
                command: cmd.clone(),
            },
            None => SolverConfig::default(),
        }
    }

    /// Controller parameters scaled to the scene's agent, with any
    /// configured overrides applied on top.
    pub fn dwa_params(&self, agent_side: f64) -> DwaParams {
        let mut p = DwaParams::for_agent_side(agent_side);
        let d = &self.dwa;
        let overrides = [
            (&d.v_max, &mut p.v_max),
            (&d.b, &mut p.b),
            (&d.a_max, &mut p.a_max),
            (&d.alpha_max, &mut p.alpha_max),
            (&d.w_max, &mut p.w_max),
            (&d.eps, &mut p.eps),
            (&d.v_obstacle_max, &mut p.v_obstacle_max),
            (&d.goal_tolerance, &mut p.goal_tolerance),
            (&d.w_heading, &mut p.w_heading),
            (&d.w_clearance, &mut p.w_clearance),
            (&d.w_velocity, &mut p.w_velocity),
        ];
        for (src, dst) in overrides {
            if let Some(v) = src {
                *dst = *v;
            }
        }
        p
    }

    pub fn bench_reps(&self) -> usize {
        self.bench.reps.unwrap_or(cosmop::bench::DEFAULT_REPS)
    }
}
