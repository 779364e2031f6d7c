//! Moving obstacles for the local-layer simulation.
//!
//! Obstacles are discs with a position, a velocity and a behaviour policy.
//! Whatever the policy, speed is capped at the scenario-wide limit `V` each
//! cycle, so the safety bound's worst-case assumption stays true by
//! construction.

use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// How an obstacle picks its velocity each control cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstaclePolicy {
    /// Never moves.
    Static,
    /// Keeps its initial velocity.
    ConstantVelocity,
    /// Steers straight at the robot's current position at the speed cap:
    /// the worst behaviour the safety property is stated against.
    Adversarial,
}

/// Disc obstacle state; millimetres and millimetres per second.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MovingObstacle {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
    pub radius: f64,
    pub policy: ObstaclePolicy,
}

#[derive(Debug, Error)]
pub enum ObstacleError {
    #[error("obstacle scenario is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("failed to read obstacle scenario: {0}")]
    Io(#[from] std::io::Error),
    #[error("obstacle {index} has a non-finite field or negative radius")]
    BadValues { index: usize },
}

impl MovingObstacle {
    /// Apply the policy for the next cycle, capping speed at `v_cap`.
    pub fn control(&mut self, robot_x: f64, robot_y: f64, v_cap: f64) {
        match self.policy {
            ObstaclePolicy::Static => {
                self.vx = 0.0;
                self.vy = 0.0;
            }
            ObstaclePolicy::ConstantVelocity => {}
            ObstaclePolicy::Adversarial => {
                let dx = robot_x - self.x;
                let dy = robot_y - self.y;
                let d = (dx * dx + dy * dy).sqrt();
                if d > 1e-9 {
                    self.vx = v_cap * dx / d;
                    self.vy = v_cap * dy / d;
                } else {
                    self.vx = 0.0;
                    self.vy = 0.0;
                }
            }
        }
        let speed = (self.vx * self.vx + self.vy * self.vy).sqrt();
        if speed > v_cap {
            let scale = if v_cap > 0.0 { v_cap / speed } else { 0.0 };
            self.vx *= scale;
            self.vy *= scale;
        }
    }

    /// Integrate one cycle of straight-line motion.
    pub fn advance(&mut self, dt: f64) {
        self.x += self.vx * dt;
        self.y += self.vy * dt;
    }

    /// Position the obstacle will occupy after `dt` at its current velocity;
    /// the only prediction the reactive layer makes.
    pub fn predict(&self, dt: f64) -> (f64, f64) {
        (self.x + self.vx * dt, self.y + self.vy * dt)
    }
}

/// Load a JSON scenario: a list of `{x, y, vx, vy, radius, policy}`.
pub fn load_obstacles(mut reader: impl Read) -> Result<Vec<MovingObstacle>, ObstacleError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let obstacles: Vec<MovingObstacle> = serde_json::from_str(&text)?;
    for (index, o) in obstacles.iter().enumerate() {
        let finite =
            o.x.is_finite() && o.y.is_finite() && o.vx.is_finite() && o.vy.is_finite();
        if !finite || !o.radius.is_finite() || o.radius < 0.0 {
            return Err(ObstacleError::BadValues { index });
        }
    }
    Ok(obstacles)
}
