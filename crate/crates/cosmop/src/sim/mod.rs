//! Continuous execution layer: a dynamic-window controller drives each plan
//! leg as a closed loop among moving obstacles, and a runtime monitor checks
//! passive safety after every control cycle.
//!
//! The discrete planner hands over waypoints; this layer owns everything
//! below them. Guarantees are deliberately asymmetric: reaching the waypoint
//! is best-effort (a blocked goal ends in a safe stop and a replan request),
//! while passive safety is enforced unconditionally — on every contact the
//! robot must already be stopped.

pub mod dwa;
pub mod obstacle;
pub mod trace;

pub use dwa::{
    braking_pair, dynamic_window, passive_safe, run_leg, select_velocity, step, Candidate,
    CycleRow, DwaParams, LegOutcome, LegRun, SimError, SimState,
};
pub use obstacle::{load_obstacles, MovingObstacle, ObstacleError, ObstaclePolicy};
pub use trace::{write_csv, write_svg};
