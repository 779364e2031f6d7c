//! Dynamic-window velocity control with a passive-safety runtime monitor.
//!
//! Each control cycle the robot picks a translational/rotational velocity
//! pair from the acceleration-bounded window around its current command,
//! keeping only pairs that leave enough braking room against every obstacle
//! for one more worst-case cycle. After every executed cycle the monitor
//! re-checks the bare passive-safety condition: either the robot is stopped,
//! or its distance to each obstacle exceeds its own braking distance plus
//! the ground the obstacle can cover while it brakes. A violation aborts the
//! leg and is reported, never masked: the admissibility filter is strictly
//! stronger than the monitored condition, so a violation means a bug.

use thiserror::Error;

use super::obstacle::MovingObstacle;

/// Robot state in the continuous layer: millimetres, radians, seconds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimState {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    /// Translational speed, mm/s, never negative.
    pub v: f64,
    /// Rotational speed, rad/s.
    pub w: f64,
    pub t: f64,
}

impl SimState {
    pub fn at_rest(x: f64, y: f64, heading: f64) -> SimState {
        SimState {
            x,
            y,
            heading,
            v: 0.0,
            w: 0.0,
            t: 0.0,
        }
    }
}

/// Controller parameters; all units mm, s, rad.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DwaParams {
    /// Top translational speed, mm/s.
    pub v_max: f64,
    /// Guaranteed braking deceleration, mm/s^2.
    pub b: f64,
    /// Worst-case acceleration per cycle, mm/s^2.
    pub a_max: f64,
    /// Rotational acceleration bound, rad/s^2.
    pub alpha_max: f64,
    /// Top rotational speed, rad/s. Without this cap the heading objective
    /// keeps widening the window around an ever-faster spin whenever the
    /// goal sits far off-axis, and the robot orbits instead of driving.
    pub w_max: f64,
    /// Control cycle, s.
    pub eps: f64,
    pub w_heading: f64,
    pub w_clearance: f64,
    pub w_velocity: f64,
    /// Velocity samples across the window.
    pub n_v: usize,
    /// Rotation samples across the window.
    pub n_w: usize,
    /// Disc radius standing in for the square footprint (half-diagonal).
    pub robot_radius: f64,
    /// Speed cap `V` every obstacle respects, mm/s.
    pub v_obstacle_max: f64,
    /// A leg counts as reached within this distance, mm.
    pub goal_tolerance: f64,
}

impl DwaParams {
    /// Defaults scaled to a square robot of side `l` millimetres: the disc
    /// radius is the half-diagonal, and the rotational acceleration bound
    /// is the translational one acting at half a side.
    pub fn for_agent_side(l: f64) -> DwaParams {
        let a_max = 500.0;
        DwaParams {
            v_max: 1000.0,
            b: 500.0,
            a_max,
            alpha_max: a_max / (l / 2.0),
            w_max: 1.5,
            eps: 0.1,
            w_heading: 2.0,
            w_clearance: 0.2,
            w_velocity: 0.2,
            n_v: 11,
            n_w: 21,
            robot_radius: l / std::f64::consts::SQRT_2,
            v_obstacle_max: 500.0,
            goal_tolerance: 150.0,
        }
    }

    pub fn check(&self) -> Result<(), SimError> {
        let positive = [
            ("v_max", self.v_max),
            ("b", self.b),
            ("a_max", self.a_max),
            ("alpha_max", self.alpha_max),
            ("w_max", self.w_max),
            ("w_heading", self.w_heading),
            ("w_clearance", self.w_clearance),
            ("w_velocity", self.w_velocity),
            ("robot_radius", self.robot_radius),
            ("goal_tolerance", self.goal_tolerance),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(SimError::BadParam {
                    name,
                    detail: format!("{value} must be a positive finite number"),
                });
            }
        }
        if !(0.02..=0.5).contains(&self.eps) {
            return Err(SimError::BadParam {
                name: "eps",
                detail: format!("control cycle {} s outside [0.02, 0.5]", self.eps),
            });
        }
        if self.v_obstacle_max < 0.0 || !self.v_obstacle_max.is_finite() {
            return Err(SimError::BadParam {
                name: "v_obstacle_max",
                detail: "obstacle speed cap must be finite and non-negative".into(),
            });
        }
        if self.n_v < 2 || self.n_w < 2 {
            return Err(SimError::BadParam {
                name: "n_v/n_w",
                detail: "window resolution needs at least 2 samples per axis".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid simulation parameter {name}: {detail}")]
    BadParam { name: &'static str, detail: String },
}

/// Passive safety: the robot is stopped, or the gap to the obstacle exceeds
/// the robot's braking distance plus what the obstacle can cover during that
/// braking time. Footprints enter as summed radii on the gap.
pub fn passive_safe(state: &SimState, obstacle: &MovingObstacle, p: &DwaParams) -> bool {
    if state.v == 0.0 {
        return true;
    }
    let gap = gap_to(state.x, state.y, obstacle.x, obstacle.y, obstacle.radius, p);
    gap > braking_bound(state.v, p)
}

/// v^2/(2b) + V v / b: braking distance plus obstacle progress while braking.
fn braking_bound(v: f64, p: &DwaParams) -> f64 {
    v * v / (2.0 * p.b) + p.v_obstacle_max * v / p.b
}

/// The bound a candidate must clear *after* the next cycle so that the bare
/// condition stays recoverable for one more worst-case cycle (both parties
/// at full acceleration for `eps`).
fn augmented_bound(v: f64, p: &DwaParams) -> f64 {
    braking_bound(v, p)
        + (p.a_max / p.b + 1.0)
            * (p.a_max * p.eps * p.eps / 2.0 + p.eps * (v + p.v_obstacle_max))
}

fn gap_to(x: f64, y: f64, ox: f64, oy: f64, o_radius: f64, p: &DwaParams) -> f64 {
    let dx = x - ox;
    let dy = y - oy;
    (dx * dx + dy * dy).sqrt() - p.robot_radius - o_radius
}

/// Exact unicycle update: a circular arc of constant `(v, w)` over `dt`,
/// degrading smoothly to straight-line motion as `w` approaches zero.
pub fn step(state: &SimState, v: f64, w: f64, dt: f64) -> SimState {
    let u = w * dt / 2.0;
    // sin(u)/u, stable near zero.
    let sinc = if u.abs() < 1e-6 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    };
    let chord = v * dt * sinc;
    SimState {
        x: state.x + chord * (state.heading + u).cos(),
        y: state.y + chord * (state.heading + u).sin(),
        heading: state.heading + w * dt,
        v,
        w,
        t: state.t + dt,
    }
}

/// One admissible command with the clearance it was admitted at (smallest
/// post-cycle gap over all obstacles; infinite when there are none).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub v: f64,
    pub w: f64,
    pub clearance: f64,
}

/// The braking continuation: both speeds pulled toward zero as hard as the
/// acceleration bounds allow. Always part of the window.
pub fn braking_pair(state: &SimState, p: &DwaParams) -> (f64, f64) {
    let v = (state.v - p.a_max * p.eps).max(0.0);
    let dw = p.alpha_max * p.eps;
    let w = if state.w.abs() <= dw {
        0.0
    } else {
        state.w - dw * state.w.signum()
    };
    (v, w)
}

/// Acceleration-bounded velocity grid around the current command, filtered
/// to pairs that keep the augmented safety margin against every obstacle
/// after one cycle (obstacles extrapolated at their current velocity). The
/// braking continuation is included unconditionally: slowing down must
/// always be available, whatever the filter says about the rest.
pub fn dynamic_window(
    state: &SimState,
    obstacles: &[MovingObstacle],
    p: &DwaParams,
) -> Vec<Candidate> {
    let v_lo = (state.v - p.a_max * p.eps).max(0.0);
    let v_hi = (state.v + p.a_max * p.eps).min(p.v_max);
    let w_lo = (state.w - p.alpha_max * p.eps).max(-p.w_max);
    let w_hi = (state.w + p.alpha_max * p.eps).min(p.w_max);

    let clearance_of = |v: f64, w: f64| -> f64 {
        let post = step(state, v, w, p.eps);
        let mut min_gap = f64::INFINITY;
        for o in obstacles {
            let (ox, oy) = o.predict(p.eps);
            min_gap = min_gap.min(gap_to(post.x, post.y, ox, oy, o.radius, p));
        }
        min_gap
    };

    let mut window = Vec::with_capacity(p.n_v * p.n_w + 1);
    for i in 0..p.n_v {
        let v = v_lo + (v_hi - v_lo) * i as f64 / (p.n_v - 1) as f64;
        for j in 0..p.n_w {
            let w = w_lo + (w_hi - w_lo) * j as f64 / (p.n_w - 1) as f64;
            let clearance = clearance_of(v, w);
            if clearance > augmented_bound(v, p) {
                window.push(Candidate { v, w, clearance });
            }
        }
    }
    let (bv, bw) = braking_pair(state, p);
    if !window.iter().any(|c| c.v == bv && c.w == bw) {
        window.push(Candidate {
            v: bv,
            w: bw,
            clearance: clearance_of(bv, bw),
        });
    }
    window
}

fn wrap_angle(a: f64) -> f64 {
    let mut a = a % std::f64::consts::TAU;
    if a > std::f64::consts::PI {
        a -= std::f64::consts::TAU;
    } else if a < -std::f64::consts::PI {
        a += std::f64::consts::TAU;
    }
    a
}

/// Seconds-to-goal pace of the terminal approach: the preferred speed is
/// `distance / APPROACH_SECONDS`, capped at `v_max`. Shrinking speed with
/// distance shrinks the turn radius `v / w_max` faster than the distance
/// itself, so the robot cannot settle into a stable orbit around a goal it
/// narrowly missed.
const APPROACH_SECONDS: f64 = 1.0;

/// Score every candidate one cycle ahead and return the best command:
/// weighted sum of heading alignment with the goal, clearance, and
/// closeness to the preferred approach speed (full speed at range). Ties go
/// to the straighter, then slower, pair.
pub fn select_velocity(
    window: &[Candidate],
    state: &SimState,
    goal: (f64, f64),
    p: &DwaParams,
) -> (f64, f64) {
    // Normalizes clearance: gaps beyond the worst-case braking distance at
    // top speed all count as fully clear.
    let clear_horizon = (p.v_max * p.v_max / (2.0 * p.b)).max(1.0);
    let distance = ((goal.0 - state.x).powi(2) + (goal.1 - state.y).powi(2)).sqrt();
    let v_target = (distance / APPROACH_SECONDS).min(p.v_max);
    let mut best: Option<(f64, Candidate)> = None;
    for c in window {
        let post = step(state, c.v, c.w, p.eps);
        let bearing = (goal.1 - post.y).atan2(goal.0 - post.x);
        let heading_score = 1.0 - wrap_angle(bearing - post.heading).abs() / std::f64::consts::PI;
        let clearance_score = (c.clearance / clear_horizon).clamp(0.0, 1.0);
        let velocity_score = 1.0 - (c.v - v_target).abs() / p.v_max;
        let score = p.w_heading * heading_score
            + p.w_clearance * clearance_score
            + p.w_velocity * velocity_score;
        let better = match &best {
            None => true,
            Some((s, b)) => {
                score > *s
                    || (score == *s
                        && (c.w.abs() < b.w.abs() || (c.w.abs() == b.w.abs() && c.v < b.v)))
            }
        };
        if better {
            best = Some((score, *c));
        }
    }
    let (_, c) = best.expect("window always contains the braking pair");
    (c.v, c.w)
}

/// Why a leg ended.
#[derive(Clone, Debug, PartialEq)]
pub enum LegOutcome {
    /// Within goal tolerance.
    Reached,
    /// Time budget ran out with the safety condition intact; `remaining`
    /// is the distance still to cover, mm.
    StoppedSafe { remaining: f64 },
    /// The monitored condition failed after cycle `cycle` — a controller
    /// bug by construction, surfaced instead of masked.
    MonitorViolation { cycle: usize },
}

/// One executed control cycle, as recorded for the CSV trace and plots.
#[derive(Clone, Debug)]
pub struct CycleRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub v: f64,
    pub w: f64,
    /// Smallest gap to any obstacle after the cycle; infinite without
    /// obstacles.
    pub min_dist: f64,
    /// Monitor verdict after the cycle.
    pub phi_ps: bool,
    /// Obstacle centres after the cycle, for plotting.
    pub obstacle_xy: Vec<(f64, f64)>,
}

/// A finished leg: outcome, final state, per-cycle trace, final obstacles.
#[derive(Clone, Debug)]
pub struct LegRun {
    pub outcome: LegOutcome,
    pub final_state: SimState,
    pub rows: Vec<CycleRow>,
    pub obstacles: Vec<MovingObstacle>,
}

/// Drive one plan leg closed-loop until the goal circle, the time budget,
/// or a monitor violation. The monitor evaluates the bare passive-safety
/// condition against every obstacle after every cycle.
pub fn run_leg(
    start: SimState,
    goal: (f64, f64),
    mut obstacles: Vec<MovingObstacle>,
    p: &DwaParams,
    max_t: f64,
) -> Result<LegRun, SimError> {
    p.check()?;
    let mut state = start;
    let mut rows = Vec::new();
    let t0 = state.t;

    let monitor = |state: &SimState, obstacles: &[MovingObstacle]| {
        obstacles.iter().all(|o| passive_safe(state, o, p))
    };
    if !monitor(&state, &obstacles) {
        return Ok(LegRun {
            outcome: LegOutcome::MonitorViolation { cycle: 0 },
            final_state: state,
            rows,
            obstacles,
        });
    }

    let mut cycle = 0usize;
    loop {
        let remaining = ((goal.0 - state.x).powi(2) + (goal.1 - state.y).powi(2)).sqrt();
        if remaining <= p.goal_tolerance {
            return Ok(LegRun {
                outcome: LegOutcome::Reached,
                final_state: state,
                rows,
                obstacles,
            });
        }
        if state.t - t0 >= max_t {
            return Ok(LegRun {
                outcome: LegOutcome::StoppedSafe { remaining },
                final_state: state,
                rows,
                obstacles,
            });
        }

        for o in obstacles.iter_mut() {
            o.control(state.x, state.y, p.v_obstacle_max);
        }
        let window = dynamic_window(&state, &obstacles, p);
        debug_assert!(
            {
                let (bv, bw) = braking_pair(&state, p);
                window.iter().any(|c| c.v == bv && c.w == bw)
            },
            "braking continuation missing from the window"
        );
        let (v, w) = select_velocity(&window, &state, goal, p);
        state = step(&state, v, w, p.eps);
        for o in obstacles.iter_mut() {
            o.advance(p.eps);
        }
        cycle += 1;

        let mut min_dist = f64::INFINITY;
        for o in &obstacles {
            min_dist = min_dist.min(gap_to(state.x, state.y, o.x, o.y, o.radius, p));
        }
        let phi_ps = monitor(&state, &obstacles);
        rows.push(CycleRow {
            t: state.t,
            x: state.x,
            y: state.y,
            heading: state.heading,
            v: state.v,
            w: state.w,
            min_dist,
            phi_ps,
            obstacle_xy: obstacles.iter().map(|o| (o.x, o.y)).collect(),
        });
        if !phi_ps {
            return Ok(LegRun {
                outcome: LegOutcome::MonitorViolation { cycle },
                final_state: state,
                rows,
                obstacles,
            });
        }
    }
}
