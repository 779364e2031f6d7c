//! Static scene description: workspace, obstacles, doors, movable objects.
//!
//! All positions are integer millimetres and all angles integer degrees in
//! `[0, 360)`, so every geometric constraint downstream stays in linear
//! integer arithmetic. Rectangles are closed: touching boundaries count as
//! disjoint, mirroring the non-strict inequalities used by the corridor
//! constraints.

use serde::{Deserialize, Serialize};
use std::io::Read;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("malformed scene: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("reading scene: {0}")]
    Io(#[from] std::io::Error),
    #[error("agent side length must be positive, got {0}")]
    NonPositiveAgent(i64),
    #[error("workspace side {workspace} must exceed twice the agent side {agent}")]
    WorkspaceTooSmall { workspace: i64, agent: i64 },
    #[error("object {index} side length must be positive, got {l}")]
    NonPositiveObject { index: usize, l: i64 },
    #[error("robot initial pose ({x}, {y}) leaves the workspace once inflated by half the agent side")]
    RobotOutsideWorkspace { x: i64, y: i64 },
    #[error("object {index} at ({x}, {y}) is not inside the workspace")]
    ObjectOutsideWorkspace { index: usize, x: i64, y: i64 },
    #[error("object {index} at ({x}, {y}) overlaps obstacle {obstacle}")]
    ObjectOverlapsObstacle { index: usize, x: i64, y: i64, obstacle: usize },
    #[error("door {index} pose ({x}, {y}) is not inside the workspace")]
    DoorOutsideWorkspace { index: usize, x: i64, y: i64 },
    #[error("door {index} has identical push poses")]
    DoorPosesEqual { index: usize },
    #[error("angle {alpha} of {what} must lie in [0, 360)")]
    BadAngle { what: String, alpha: i64 },
}

/// Planar pose: position in mm, heading in degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pose {
    pub x: i64,
    pub y: i64,
    pub alpha: i64,
}

/// Axis-aligned closed rectangle. Degenerate (zero width or height)
/// rectangles model the wall segments of the scene format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rect {
    pub x_min: i64,
    pub y_min: i64,
    pub x_max: i64,
    pub y_max: i64,
}

impl Rect {
    /// Rectangle spanning two diagonal corners, in any order.
    pub fn from_corners(x1: i64, y1: i64, x2: i64, y2: i64) -> Rect {
        Rect {
            x_min: x1.min(x2),
            y_min: y1.min(y2),
            x_max: x1.max(x2),
            y_max: y1.max(y2),
        }
    }

    /// Grow by `margin` on every side.
    pub fn inflate(&self, margin: i64) -> Rect {
        Rect {
            x_min: self.x_min - margin,
            y_min: self.y_min - margin,
            x_max: self.x_max + margin,
            y_max: self.y_max + margin,
        }
    }
}

/// True iff the closed rectangles are separated along some axis. Edges
/// that merely touch are separated, matching the non-strict corridor
/// inequalities.
pub fn aabb_disjoint(a: &Rect, b: &Rect) -> bool {
    a.x_max <= b.x_min
        || b.x_max <= a.x_min
        || a.y_max <= b.y_min
        || b.y_max <= a.y_min
}

/// Rectangular obstacle given by two diagonal vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstacle {
    pub xi: i64,
    pub yi: i64,
    pub xf: i64,
    pub yf: i64,
}

impl Obstacle {
    pub fn rect(&self) -> Rect {
        Rect::from_corners(self.xi, self.yi, self.xf, self.yf)
    }
}

/// Door modelled by the two robot poses from which it can be pushed open.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Door {
    pub q1: Pose,
    pub q2: Pose,
}

/// The robot footprint, a square of side `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agent {
    pub l: i64,
}

/// Movable object: a square of side `l` with an initial position and
/// carried flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MovableObject {
    pub l: i64,
    pub x: i64,
    pub y: i64,
    #[serde(default)]
    pub carried: bool,
}

/// Square workspace centred at `(x, y)` with side `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Workspace {
    pub x: i64,
    pub y: i64,
    pub l: i64,
}

impl Workspace {
    pub fn rect(&self) -> Rect {
        Rect {
            x_min: self.x - self.l / 2,
            y_min: self.y - self.l / 2,
            x_max: self.x + self.l / 2,
            y_max: self.y + self.l / 2,
        }
    }
}

/// Everything static about the environment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SceneDescription {
    pub workspace: Workspace,
    pub agent: Agent,
    #[serde(rename = "robot")]
    pub robot_initial: Pose,
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
    #[serde(default)]
    pub doors: Vec<Door>,
    #[serde(default)]
    pub objects: Vec<MovableObject>,
}

/// Parse and validate a scene file.
pub fn load_scene(mut source: impl Read) -> Result<SceneDescription, SceneError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let scene: SceneDescription = serde_json::from_str(&text)?;
    scene.validate()?;
    Ok(scene)
}

impl SceneDescription {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes")
    }

    /// Check every structural invariant, naming the first violation.
    ///
    /// Containment tests are written with doubled coordinates so that odd
    /// side lengths introduce no rounding.
    pub fn validate(&self) -> Result<(), SceneError> {
        let w = &self.workspace;
        let a = self.agent.l;
        if a <= 0 {
            return Err(SceneError::NonPositiveAgent(a));
        }
        if w.l <= 2 * a {
            return Err(SceneError::WorkspaceTooSmall {
                workspace: w.l,
                agent: a,
            });
        }
        check_angle("robot", self.robot_initial.alpha)?;

        // Robot square of side a must fit inside the workspace.
        let r = &self.robot_initial;
        if 2 * (r.x - w.x) < a - w.l
            || 2 * (r.x - w.x) > w.l - a
            || 2 * (r.y - w.y) < a - w.l
            || 2 * (r.y - w.y) > w.l - a
        {
            return Err(SceneError::RobotOutsideWorkspace { x: r.x, y: r.y });
        }

        for (index, obj) in self.objects.iter().enumerate() {
            if obj.l <= 0 {
                return Err(SceneError::NonPositiveObject { index, l: obj.l });
            }
            if 2 * (obj.x - w.x) < obj.l - w.l
                || 2 * (obj.x - w.x) > w.l - obj.l
                || 2 * (obj.y - w.y) < obj.l - w.l
                || 2 * (obj.y - w.y) > w.l - obj.l
            {
                return Err(SceneError::ObjectOutsideWorkspace {
                    index,
                    x: obj.x,
                    y: obj.y,
                });
            }
            // Doubled coordinates again: the object box has corners at
            // obj ± l/2, so compare 2x against 2·corner.
            let obj_box2 = Rect {
                x_min: 2 * obj.x - obj.l,
                y_min: 2 * obj.y - obj.l,
                x_max: 2 * obj.x + obj.l,
                y_max: 2 * obj.y + obj.l,
            };
            for (obstacle, o) in self.obstacles.iter().enumerate() {
                let o = o.rect();
                let o2 = Rect {
                    x_min: 2 * o.x_min,
                    y_min: 2 * o.y_min,
                    x_max: 2 * o.x_max,
                    y_max: 2 * o.y_max,
                };
                if !aabb_disjoint(&obj_box2, &o2) {
                    return Err(SceneError::ObjectOverlapsObstacle {
                        index,
                        x: obj.x,
                        y: obj.y,
                        obstacle,
                    });
                }
            }
        }

        for (index, door) in self.doors.iter().enumerate() {
            for q in [&door.q1, &door.q2] {
                check_angle(&format!("door {index}"), q.alpha)?;
                if 2 * (q.x - w.x).abs() > w.l || 2 * (q.y - w.y).abs() > w.l {
                    return Err(SceneError::DoorOutsideWorkspace {
                        index,
                        x: q.x,
                        y: q.y,
                    });
                }
            }
            if door.q1 == door.q2 {
                return Err(SceneError::DoorPosesEqual { index });
            }
        }
        Ok(())
    }
}

fn check_angle(what: &str, alpha: i64) -> Result<(), SceneError> {
    if !(0..360).contains(&alpha) {
        return Err(SceneError::BadAngle {
            what: what.to_owned(),
            alpha,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const CLEANUP: &str = include_str!("../../../data/cleanup_scene.json");

    #[test]
    fn loads_the_cleanup_scene() {
        let scene = load_scene(CLEANUP.as_bytes()).unwrap();
        assert_eq!(scene.obstacles.len(), 2);
        assert_eq!(scene.doors.len(), 3);
        assert_eq!(scene.objects.len(), 2);
        assert!(scene.objects.iter().all(|o| o.l == 100 && !o.carried));
        assert_eq!(scene.agent.l, 400);
        assert_eq!(
            scene.robot_initial,
            Pose {
                x: -2000,
                y: 0,
                alpha: 0
            }
        );
    }

    #[test]
    fn empty_collections_are_valid() {
        let scene = load_scene(
            br#"{
                "workspace": {"x": 0, "y": 0, "l": 2000},
                "agent": {"l": 300},
                "robot": {"x": 0, "y": 0, "alpha": 90}
            }"# as &[u8],
        )
        .unwrap();
        assert!(scene.obstacles.is_empty());
        assert!(scene.doors.is_empty());
        assert!(scene.objects.is_empty());
    }

    #[test]
    fn object_outside_workspace_is_rejected() {
        let mut scene = load_scene(CLEANUP.as_bytes()).unwrap();
        scene.objects[0].x = 1_000_000;
        let err = scene.validate().unwrap_err();
        assert!(matches!(
            err,
            SceneError::ObjectOutsideWorkspace { index: 0, .. }
        ));
    }

    #[test]
    fn robot_must_fit_with_half_agent_margin() {
        let mut scene = load_scene(CLEANUP.as_bytes()).unwrap();
        // Workspace edge is at 2500; the square robot of side 400 fits
        // only with its centre at most 2300 from the workspace centre.
        scene.robot_initial.x = 2300;
        assert!(scene.validate().is_ok());
        scene.robot_initial.x = 2301;
        assert!(matches!(
            scene.validate().unwrap_err(),
            SceneError::RobotOutsideWorkspace { .. }
        ));
    }

    #[test]
    fn object_on_obstacle_is_rejected() {
        let mut scene = load_scene(CLEANUP.as_bytes()).unwrap();
        // The horizontal wall runs along y = 0 for x in [-1500, 2500].
        scene.objects[0].x = 0;
        scene.objects[0].y = 20;
        assert!(matches!(
            scene.validate().unwrap_err(),
            SceneError::ObjectOverlapsObstacle {
                index: 0,
                obstacle: 1,
                ..
            }
        ));
        // Touching the wall edge exactly is allowed: boundaries are closed.
        scene.objects[0].y = 50;
        assert!(scene.validate().is_ok());
    }

    #[test]
    fn disjointness_boundary_cases() {
        let a = Rect::from_corners(0, 0, 10, 10);
        let touching = Rect::from_corners(10, 0, 20, 10);
        assert!(aabb_disjoint(&a, &touching));
        let overlapping = Rect::from_corners(5, 5, 15, 15);
        assert!(!aabb_disjoint(&a, &overlapping));
        let wall = Rect::from_corners(-1500, 0, 2500, 0);
        let robot = Rect::from_corners(-200, 800, 200, 1200);
        assert!(aabb_disjoint(&wall, &robot));
    }

    #[test]
    fn scene_round_trips_through_json() {
        let scene = load_scene(CLEANUP.as_bytes()).unwrap();
        let again = load_scene(scene.to_json().as_bytes()).unwrap();
        assert_eq!(scene, again);
    }

    #[test]
    fn angles_must_be_canonical() {
        let mut scene = load_scene(CLEANUP.as_bytes()).unwrap();
        scene.robot_initial.alpha = 360;
        assert!(matches!(
            scene.validate().unwrap_err(),
            SceneError::BadAngle { .. }
        ));
    }
}
