//! Scaling benchmarks over the generated room grids: how synthesis time
//! responds to workspace size, room count, and trace length.
//!
//! Each row fixes a grid scene and a trace length, then times the planning
//! query (encoding plus solving; scene and formula construction excluded)
//! over a number of repetitions, reporting mean and sample standard
//! deviation. Every row is expected satisfiable at its configured trace
//! length; an unsatisfiable or inconclusive row is flagged, not hidden.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::primitives::build_primitive_spec;
use crate::rooms::{make_rooms_scene, RoomsError};
use crate::smt::{encode, EncodeError, EncodingContext};
use crate::solver::{solve, SatResult, SolverConfig, SolverError};

/// Paper-default repetition count per row.
pub const DEFAULT_REPS: usize = 35;
/// Per-query ceiling; a hit is reported as an inconclusive row.
pub const QUERY_TIMEOUT: Duration = Duration::from_secs(120);

/// One benchmark row configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BenchScenario {
    pub env_side_m: i64,
    /// Perfect square, at least 4.
    pub rooms: usize,
    /// Trace length of the planning query.
    pub k: usize,
    pub repetitions: usize,
}

/// Timing result for one row.
#[derive(Clone, Copy, Debug)]
pub struct BenchRow {
    pub scenario: BenchScenario,
    pub mean_ms: f64,
    pub std_ms: f64,
    /// True only if every repetition came back satisfiable.
    pub sat: bool,
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// Stable schema: `env_m,rooms,K,mean_ms,std_ms,sat`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("env_m,rooms,K,mean_ms,std_ms,sat\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:.2},{:.2},{}\n",
                r.scenario.env_side_m,
                r.scenario.rooms,
                r.scenario.k,
                r.mean_ms,
                r.std_ms,
                r.sat
            ));
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("bad scenario: {0}")]
    Rooms(#[from] RoomsError),
    #[error("scenario needs at least one repetition")]
    NoRepetitions,
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("unknown suite `{0}`, expected size, rooms, k, or complexity")]
    UnknownSuite(String),
}

/// Times one row: the scene and query formula are built once, then each
/// repetition encodes and solves from scratch.
pub fn run_scenario(s: &BenchScenario, solver: &SolverConfig) -> Result<BenchRow, BenchError> {
    if s.repetitions == 0 {
        return Err(BenchError::NoRepetitions);
    }
    let (scene, goal) = make_rooms_scene(s.env_side_m, s.rooms)?;
    let query = build_primitive_spec(&scene).and(goal);

    let mut times_ms = Vec::with_capacity(s.repetitions);
    let mut sat = true;
    for _ in 0..s.repetitions {
        let started = Instant::now();
        let mut ctx = EncodingContext::new(s.k);
        let set = encode(&query, &mut ctx)?;
        let verdict = solve(&set, solver, QUERY_TIMEOUT)?;
        times_ms.push(started.elapsed().as_secs_f64() * 1e3);
        sat &= matches!(verdict, SatResult::Sat(_));
    }
    let (mean_ms, std_ms) = mean_std(&times_ms);
    Ok(BenchRow {
        scenario: *s,
        mean_ms,
        std_ms,
        sat,
    })
}

/// Runs the rows in order, announcing each finished row via `progress`.
pub fn run_suite(
    scenarios: &[BenchScenario],
    solver: &SolverConfig,
    mut progress: impl FnMut(&BenchRow),
) -> Result<BenchReport, BenchError> {
    let mut report = BenchReport::default();
    for s in scenarios {
        let row = run_scenario(s, solver)?;
        progress(&row);
        report.rows.push(row);
    }
    Ok(report)
}

/// The named suites. `size` sweeps the workspace side at a fixed grid,
/// `rooms` the grid at a fixed trace length, `k` the trace length at a
/// fixed grid, and `complexity` grows both together.
pub fn suite(name: &str, repetitions: usize) -> Result<Vec<BenchScenario>, BenchError> {
    let row = |env_side_m: i64, rooms: usize, k: usize| BenchScenario {
        env_side_m,
        rooms,
        k,
        repetitions,
    };
    match name {
        "size" => Ok([4, 8, 16, 32, 64, 128, 256]
            .into_iter()
            .map(|m| row(m, 9, 14))
            .collect()),
        "rooms" => Ok([9, 25, 49, 81].into_iter().map(|r| row(32, r, 50)).collect()),
        "k" => Ok([26, 32, 38, 44, 50].into_iter().map(|k| row(32, 25, k)).collect()),
        "complexity" => Ok([
            (9, 14),
            (16, 20),
            (25, 26),
            (36, 32),
            (49, 38),
            (64, 44),
            (81, 50),
        ]
        .into_iter()
        .map(|(r, k)| row(32, r, k))
        .collect()),
        other => Err(BenchError::UnknownSuite(other.to_string())),
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_match_the_published_row_structure() {
        let size = suite("size", 35).unwrap();
        assert_eq!(size.len(), 7);
        assert!(size.iter().all(|s| s.rooms == 9 && s.k == 14 && s.repetitions == 35));
        assert_eq!(size[0].env_side_m, 4);
        assert_eq!(size[6].env_side_m, 256);

        let rooms = suite("rooms", 35).unwrap();
        assert_eq!(
            rooms.iter().map(|s| s.rooms).collect::<Vec<_>>(),
            vec![9, 25, 49, 81]
        );
        assert!(rooms.iter().all(|s| s.env_side_m == 32 && s.k == 50));

        let k = suite("k", 35).unwrap();
        assert_eq!(k.iter().map(|s| s.k).collect::<Vec<_>>(), vec![26, 32, 38, 44, 50]);
        assert!(k.iter().all(|s| s.rooms == 25));

        let complexity = suite("complexity", 35).unwrap();
        assert_eq!(complexity.len(), 7);
        assert_eq!(complexity[0].rooms, 9);
        assert_eq!(complexity[6], BenchScenario {
            env_side_m: 32,
            rooms: 81,
            k: 50,
            repetitions: 35,
        });

        assert!(matches!(suite("speed", 35), Err(BenchError::UnknownSuite(_))));
    }

    #[test]
    fn csv_schema_is_stable() {
        let report = BenchReport {
            rows: vec![BenchRow {
                scenario: BenchScenario {
                    env_side_m: 4,
                    rooms: 9,
                    k: 14,
                    repetitions: 2,
                },
                mean_ms: 30.125,
                std_ms: 1.5,
                sat: true,
            }],
        };
        assert_eq!(
            report.to_csv(),
            "env_m,rooms,K,mean_ms,std_ms,sat\n4,9,14,30.12,1.50,true\n"
        );
    }

    #[test]
    fn standard_deviation_is_the_sample_form() {
        let (mean, std) = mean_std(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!(mean, 5.0);
        assert!((std - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
        assert_eq!(mean_std(&[3.0]), (3.0, 0.0));
    }

    #[test]
    fn zero_repetitions_are_rejected() {
        let s = BenchScenario {
            env_side_m: 4,
            rooms: 9,
            k: 14,
            repetitions: 0,
        };
        assert!(matches!(
            run_scenario(&s, &SolverConfig::default()),
            Err(BenchError::NoRepetitions)
        ));
    }
}
