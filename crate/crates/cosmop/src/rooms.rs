//! Multi-room benchmark scenes: an n-by-n grid of rooms carved out of a
//! square workspace by wall segments, one door per shared wall, and a goal
//! formula sending the robot from the lower-left room to the upper-right.
//!
//! Every door opens toward the goal corner: doors in vertical walls push
//! east, doors in horizontal walls push north. Each doorway is both a
//! physical gap in the wall (wide enough for the robot) and a push-pose
//! pair straddling it, so plans may walk or push through.

use thiserror::Error;

use crate::logic::{con, var, Formula};
use crate::scene::{Agent, Door, MovableObject, Obstacle, Pose, SceneDescription, Workspace};

/// Robot side length used by every generated scene, mm.
pub const AGENT_SIDE: i64 = 400;
/// Door opening width: the robot plus clearance, mm.
pub const DOOR_GAP: i64 = AGENT_SIDE + 200;
/// Push poses sit this far on either side of their wall, mm.
pub const DOOR_OFFSET: i64 = 500;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RoomsError {
    #[error("room count {0} is not a perfect square")]
    NotASquare(usize),
    #[error("need at least a 2x2 grid, got {rooms} rooms")]
    TooFewRooms { rooms: usize },
    #[error("rooms of {span} mm cannot fit a {need} mm doorway with clearance")]
    RoomTooTight { span: i64, need: i64 },
}

/// Builds the grid scene and its reach-the-goal-room formula.
///
/// `rooms` must be a perfect square n^2 with n >= 2. The workspace is a
/// square of side `env_side_m` metres centred at the origin; interior grid
/// lines are spaced as evenly as integer millimetres allow. The goal holds
/// at the last instant when the robot's centre is inside the upper-right
/// room deflated by half its own side.
pub fn make_rooms_scene(
    env_side_m: i64,
    rooms: usize,
) -> Result<(SceneDescription, Formula), RoomsError> {
    let n = grid_side(rooms)?;
    let side = env_side_m * 1000;
    let lo = -side / 2;
    // Grid line i of 0..=n; endpoints are the workspace edges.
    let line = |i: i64| lo + i * side / n;
    let mid = |i: i64| (line(i) + line(i + 1)).div_euclid(2);

    let min_span = (0..n).map(|i| line(i + 1) - line(i)).min().unwrap();
    let need = (DOOR_GAP + 200).max(2 * (DOOR_OFFSET + 100));
    if min_span < need {
        return Err(RoomsError::RoomTooTight {
            span: min_span,
            need,
        });
    }

    let mut obstacles = Vec::new();
    let mut doors = Vec::new();
    // Vertical walls x = line(i), one shared wall (and door) per row.
    for i in 1..n {
        let x = line(i);
        for j in 0..n {
            let gap = mid(j);
            obstacles.push(Obstacle {
                xi: x,
                yi: line(j),
                xf: x,
                yf: gap - DOOR_GAP / 2,
            });
            obstacles.push(Obstacle {
                xi: x,
                yi: gap + DOOR_GAP / 2,
                xf: x,
                yf: line(j + 1),
            });
            doors.push(Door {
                q1: Pose {
                    x: x - DOOR_OFFSET,
                    y: gap,
                    alpha: 0,
                },
                q2: Pose {
                    x: x + DOOR_OFFSET,
                    y: gap,
                    alpha: 0,
                },
            });
        }
    }
    // Horizontal walls y = line(j), one shared wall (and door) per column.
    for j in 1..n {
        let y = line(j);
        for i in 0..n {
            let gap = mid(i);
            obstacles.push(Obstacle {
                xi: line(i),
                yi: y,
                xf: gap - DOOR_GAP / 2,
                yf: y,
            });
            obstacles.push(Obstacle {
                xi: gap + DOOR_GAP / 2,
                yi: y,
                xf: line(i + 1),
                yf: y,
            });
            doors.push(Door {
                q1: Pose {
                    x: gap,
                    y: y - DOOR_OFFSET,
                    alpha: 90,
                },
                q2: Pose {
                    x: gap,
                    y: y + DOOR_OFFSET,
                    alpha: 90,
                },
            });
        }
    }

    let scene = SceneDescription {
        workspace: Workspace {
            x: 0,
            y: 0,
            l: side,
        },
        agent: Agent { l: AGENT_SIDE },
        robot_initial: Pose {
            x: mid(0),
            y: mid(0),
            alpha: 0,
        },
        obstacles,
        doors,
        objects: Vec::<MovableObject>::new(),
    };

    // Goal room: the upper-right cell, deflated so the whole footprint fits.
    let margin = AGENT_SIDE / 2;
    let goal = Formula::and_all(vec![
        var("robot.x").ge(con(line(n - 1) + margin)),
        var("robot.x").le(con(line(n) - margin)),
        var("robot.y").ge(con(line(n - 1) + margin)),
        var("robot.y").le(con(line(n) - margin)),
    ])
    .last();
    Ok((scene, goal))
}

fn grid_side(rooms: usize) -> Result<i64, RoomsError> {
    let n = (1..).find(|n| n * n >= rooms).unwrap();
    if n * n != rooms {
        return Err(RoomsError::NotASquare(rooms));
    }
    if n < 2 {
        return Err(RoomsError::TooFewRooms { rooms });
    }
    Ok(n as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::eval::eval;
    use crate::logic::Trace;
    use crate::primitives::StateVars;

    #[test]
    fn nine_rooms_make_a_three_by_three_grid() {
        let (scene, _) = make_rooms_scene(4, 9).unwrap();
        // 2n(n-1) shared walls, each split in two by its doorway.
        assert_eq!(scene.doors.len(), 12);
        assert_eq!(scene.obstacles.len(), 24);
        assert!(scene.objects.is_empty());
        scene.validate().unwrap();
    }

    #[test]
    fn four_rooms_is_the_smallest_grid() {
        let (scene, _) = make_rooms_scene(4, 4).unwrap();
        assert_eq!(scene.doors.len(), 4);
        scene.validate().unwrap();
        assert_eq!(make_rooms_scene(4, 1), Err(RoomsError::TooFewRooms { rooms: 1 }));
        assert_eq!(make_rooms_scene(4, 2), Err(RoomsError::NotASquare(2)));
        assert_eq!(make_rooms_scene(4, 12), Err(RoomsError::NotASquare(12)));
    }

    #[test]
    fn rooms_too_tight_for_a_doorway_are_rejected() {
        // 4 m across 4 rooms per side: 1000 mm rooms, under the 1200 floor.
        assert!(matches!(
            make_rooms_scene(4, 16),
            Err(RoomsError::RoomTooTight { span: 1000, .. })
        ));
    }

    #[test]
    fn every_door_opens_toward_the_goal_corner() {
        let (scene, _) = make_rooms_scene(32, 25).unwrap();
        for d in &scene.doors {
            if d.q1.y == d.q2.y {
                assert_eq!(d.q2.x - d.q1.x, 2 * DOOR_OFFSET, "east through a vertical wall");
                assert_eq!((d.q1.alpha, d.q2.alpha), (0, 0));
            } else {
                assert_eq!(d.q2.y - d.q1.y, 2 * DOOR_OFFSET, "north through a horizontal wall");
                assert_eq!((d.q1.alpha, d.q2.alpha), (90, 90));
            }
        }
    }

    #[test]
    fn wall_pieces_leave_exactly_the_doorway_open() {
        let (scene, _) = make_rooms_scene(4, 9).unwrap();
        for pair in scene.obstacles.chunks(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if a.xi == a.xf {
                assert_eq!(a.xi, b.xi);
                assert_eq!(b.yi - a.yf, DOOR_GAP);
            } else {
                assert_eq!(a.yi, b.yi);
                assert_eq!(b.xi - a.xf, DOOR_GAP);
            }
        }
    }

    #[test]
    fn goal_holds_exactly_inside_the_deflated_goal_room() {
        let (scene, goal) = make_rooms_scene(4, 9).unwrap();
        let sv = StateVars::for_scene(&scene);
        let park = |x: i64, y: i64| {
            let mut trace = Trace::new(0);
            trace.set_int("robot.x", vec![x]).unwrap();
            trace.set_int("robot.y", vec![y]).unwrap();
            trace.set_int("robot.alpha", vec![0]).unwrap();
            trace.set_int(sv.act.as_str(), vec![0]).unwrap();
            trace
        };
        // Grid lines land at -2000, -667, 666, 2000; the deflated goal
        // room therefore starts at x = y = 866.
        assert_eq!(eval(&goal, &park(1500, 1500), 0), Ok(true));
        assert_eq!(eval(&goal, &park(866, 866), 0), Ok(true), "deflated corner");
        assert_eq!(eval(&goal, &park(865, 1500), 0), Ok(false), "half a footprint short");
        assert_eq!(eval(&goal, &park(-1500, 1500), 0), Ok(false), "wrong room");
    }
}
