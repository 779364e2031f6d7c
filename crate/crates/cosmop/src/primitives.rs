//! Constraint formulas for the motion primitives.
//!
//! Each reactive controller the robot can run (free-space travel, pushing a
//! door, picking an object up, putting it down) is abstracted into a temporal
//! formula over a shared set of integer state variables. The conjunction of
//! all of them plus the initial-state equalities ([`build_primitive_spec`])
//! constrains every transition of a bounded trace, so any model the solver
//! finds is a sequence of controller invocations the local layer can execute.
//!
//! # State variables
//!
//! | symbol        | sort | meaning                                        |
//! |---------------|------|------------------------------------------------|
//! | `robot.x`     | Int  | robot centre x, millimetres                    |
//! | `robot.y`     | Int  | robot centre y, millimetres                    |
//! | `robot.alpha` | Int  | robot heading, degrees in `[0, 360)`           |
//! | `obj[j].x`    | Int  | object j centre x (j is 1-based)               |
//! | `obj[j].y`    | Int  | object j centre y                              |
//! | `obj[j].p`    | Bool | object j is currently carried                  |
//! | `act`         | Int  | code of the primitive executed over the step   |
//!
//! # Step convention
//!
//! `act` at instant `k` names the primitive executed between state `k` and
//! state `k + 1`, so it is meaningful for `k` in `[0, K-1]` only. Every
//! per-step constraint is therefore guarded as `G(X true -> ...)`: at the
//! final instant the guard is false and the body, which reads next-instant
//! terms, is never evaluated. Consumers that want the action *arriving at*
//! state `k` should read `act` at `k - 1`.
//!
//! All distances derived from footprints are half-widths rounded up, which
//! over integer coordinates is exactly equivalent to the real-valued
//! comparison for the separation inequalities and keeps the pick-up and
//! put-down pose equations mutually inverse.

use serde::{Deserialize, Serialize};

use crate::logic::{con, var, Formula, Symbol};
use crate::scene::SceneDescription;

/// One of the abstract actions available to the global layer.
///
/// Door and object indices are 1-based, matching the `obj[j]` symbol names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimitiveId {
    /// Travel through free space to a new pose.
    #[serde(rename = "goto")]
    GoTo,
    /// Push door `j` open and drive through it.
    Push(usize),
    /// Pick up object `j` (robot must already pose in front of it).
    PickUp(usize),
    /// Put the carried object `j` down beside the robot.
    Leave(usize),
}

impl PrimitiveId {
    /// Dense integer code: 0 is `GoTo`, codes `1..=n_doors` are `Push`,
    /// the next `n_objects` codes are `PickUp`, the next `n_objects` are
    /// `Leave`. Inverse of [`PrimitiveId::from_code`]; the index must be
    /// within the given counts.
    pub fn code(self, n_doors: usize, n_objects: usize) -> i64 {
        match self {
            PrimitiveId::GoTo => 0,
            PrimitiveId::Push(j) => {
                debug_assert!(1 <= j && j <= n_doors);
                j as i64
            }
            PrimitiveId::PickUp(j) => {
                debug_assert!(1 <= j && j <= n_objects);
                (n_doors + j) as i64
            }
            PrimitiveId::Leave(j) => {
                debug_assert!(1 <= j && j <= n_objects);
                (n_doors + n_objects + j) as i64
            }
        }
    }

    /// Decode a dense integer code; `None` if it is outside the valid range.
    pub fn from_code(code: i64, n_doors: usize, n_objects: usize) -> Option<PrimitiveId> {
        let d = n_doors as i64;
        let b = n_objects as i64;
        match code {
            0 => Some(PrimitiveId::GoTo),
            c if 1 <= c && c <= d => Some(PrimitiveId::Push(c as usize)),
            c if d < c && c <= d + b => Some(PrimitiveId::PickUp((c - d) as usize)),
            c if d + b < c && c <= d + 2 * b => Some(PrimitiveId::Leave((c - d - b) as usize)),
            _ => None,
        }
    }

    /// Largest valid code for the given scene shape.
    pub fn max_code(n_doors: usize, n_objects: usize) -> i64 {
        (n_doors + 2 * n_objects) as i64
    }
}

impl std::fmt::Display for PrimitiveId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PrimitiveId::GoTo => write!(f, "GoTo"),
            PrimitiveId::Push(j) => write!(f, "Push_{j}"),
            PrimitiveId::PickUp(j) => write!(f, "PickUp_{j}"),
            PrimitiveId::Leave(j) => write!(f, "Leave_{j}"),
        }
    }
}

/// Symbols for the robot pose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RobotVars {
    pub x: Symbol,
    pub y: Symbol,
    pub alpha: Symbol,
}

/// Symbols for one movable object's state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectVars {
    pub x: Symbol,
    pub y: Symbol,
    /// True while the object is carried by the robot.
    pub p: Symbol,
}

/// The full variable vocabulary shared by the constraint builders, the
/// planner and the trace decoder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVars {
    pub robot: RobotVars,
    /// Indexed 0-based here; object `j` in symbol names is `objects[j - 1]`.
    pub objects: Vec<ObjectVars>,
    /// Primitive selector; at instant k it names the step k -> k+1.
    pub act: Symbol,
    pub n_doors: usize,
}

impl StateVars {
    pub fn new(n_doors: usize, n_objects: usize) -> StateVars {
        StateVars {
            robot: RobotVars {
                x: Symbol::new("robot.x"),
                y: Symbol::new("robot.y"),
                alpha: Symbol::new("robot.alpha"),
            },
            objects: (1..=n_objects)
                .map(|j| ObjectVars {
                    x: Symbol::new(format!("obj[{j}].x")),
                    y: Symbol::new(format!("obj[{j}].y")),
                    p: Symbol::new(format!("obj[{j}].p")),
                })
                .collect(),
            act: Symbol::new("act"),
            n_doors,
        }
    }

    pub fn for_scene(scene: &SceneDescription) -> StateVars {
        StateVars::new(scene.doors.len(), scene.objects.len())
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    /// Variables of object `j` (1-based; must be in range).
    pub fn object(&self, j: usize) -> &ObjectVars {
        &self.objects[j - 1]
    }

    pub fn code(&self, p: PrimitiveId) -> i64 {
        p.code(self.n_doors, self.n_objects())
    }

    pub fn primitive(&self, code: i64) -> Option<PrimitiveId> {
        PrimitiveId::from_code(code, self.n_doors, self.n_objects())
    }

    pub fn max_code(&self) -> i64 {
        PrimitiveId::max_code(self.n_doors, self.n_objects())
    }

    /// `act = code(p)` at the current instant.
    pub fn act_is(&self, p: PrimitiveId) -> Formula {
        var(self.act.clone()).eq(con(self.code(p)))
    }

    /// `act != code(p)` at the current instant.
    pub fn act_is_not(&self, p: PrimitiveId) -> Formula {
        var(self.act.clone()).ne(con(self.code(p)))
    }
}

/// Assert `body` over every transition of the trace: `G(X true -> body)`.
///
/// The guard is false exactly at the final instant, so a body that reads
/// next-instant terms stays within the trace bounds. Both the evaluator and
/// the encoder short-circuit the implication on its constant left-hand side,
/// so the body is never even visited there.
pub fn each_step(body: Formula) -> Formula {
    Formula::tru().next().implies(body).always()
}

/// Ceiling of `n / 2`; exact half-width of an even length.
fn half_up(n: i64) -> i64 {
    (n + 1).div_euclid(2)
}

/// Floor of `n / 2`.
fn half_down(n: i64) -> i64 {
    n.div_euclid(2)
}

/// `X p <-> p`: the carry flag survives the step unchanged.
fn carry_flag_static(p: &Symbol) -> Formula {
    let now = Formula::atom(p.clone());
    let next = Formula::atom_at(p.clone(), 1);
    next.clone().implies(now.clone()).and(now.implies(next))
}

/// Robot pose identical at both ends of the step.
fn robot_static(sv: &StateVars) -> Formula {
    let r = &sv.robot;
    Formula::and_all([
        var(r.x.clone()).next().eq(var(r.x.clone())),
        var(r.y.clone()).next().eq(var(r.y.clone())),
        var(r.alpha.clone()).next().eq(var(r.alpha.clone())),
    ])
}

/// The axis-aligned span of the step's two robot positions, inflated by `r`,
/// lies entirely left of, right of, below or above the fixed box — i.e. the
/// swept corridor cannot touch it.
fn robot_span_avoids_box(
    sv: &StateVars,
    x_min: i64,
    y_min: i64,
    x_max: i64,
    y_max: i64,
    r: i64,
) -> Formula {
    let x = || var(sv.robot.x.clone());
    let y = || var(sv.robot.y.clone());
    Formula::or_all([
        x().next().max(x()).le(con(x_min - r)),
        x().next().min(x()).ge(con(x_max + r)),
        y().next().max(y()).le(con(y_min - r)),
        y().next().min(y()).ge(con(y_max + r)),
    ])
}

/// Same corridor test against an object whose centre is a state variable.
fn robot_span_avoids_object(sv: &StateVars, ov: &ObjectVars, r: i64) -> Formula {
    let x = || var(sv.robot.x.clone());
    let y = || var(sv.robot.y.clone());
    Formula::or_all([
        x().next().max(x()).le(var(ov.x.clone()) - con(r)),
        x().next().min(x()).ge(var(ov.x.clone()) + con(r)),
        y().next().max(y()).le(var(ov.y.clone()) - con(r)),
        y().next().min(y()).ge(var(ov.y.clone()) + con(r)),
    ])
}

/// Drop-off separation: next positions of objects `a` and `b` differ by at
/// least `r` on some axis.
fn dropped_apart(a: &ObjectVars, b: &ObjectVars, r: i64) -> Formula {
    Formula::or_all([
        var(a.x.clone()).next().le(var(b.x.clone()).next() - con(r)),
        var(a.x.clone()).next().ge(var(b.x.clone()).next() + con(r)),
        var(a.y.clone()).next().le(var(b.y.clone()).next() - con(r)),
        var(a.y.clone()).next().ge(var(b.y.clone()).next() + con(r)),
    ])
}

/// Drop-off separation from a fixed box, inflated by `r`.
fn dropped_clear_of_box(
    ov: &ObjectVars,
    x_min: i64,
    y_min: i64,
    x_max: i64,
    y_max: i64,
    r: i64,
) -> Formula {
    Formula::or_all([
        var(ov.x.clone()).next().le(con(x_min - r)),
        var(ov.x.clone()).next().ge(con(x_max + r)),
        var(ov.y.clone()).next().le(con(y_min - r)),
        var(ov.y.clone()).next().ge(con(y_max + r)),
    ])
}

/// Half of the centre-to-centre clearance the robot needs from object `j`:
/// both footprints are squares, so it is half the sum of the side lengths.
fn reach(scene: &SceneDescription, j: usize) -> i64 {
    half_up(scene.objects[j - 1].l + scene.agent.l)
}

/// Free-space travel: the straight corridor between the two waypoints stays
/// clear of every wall and every object not on board, the next waypoint is
/// inside the workspace, and no carry flag changes.
pub fn build_goto(scene: &SceneDescription) -> Formula {
    let sv = StateVars::for_scene(scene);
    let agent_r = half_up(scene.agent.l);
    let w = &scene.workspace;

    let mut body = Vec::new();
    for ov in &sv.objects {
        body.push(carry_flag_static(&ov.p));
    }

    // Workspace containment of the next waypoint, footprint included.
    let x_lo = w.x + half_up(scene.agent.l - w.l);
    let x_hi = w.x + half_down(w.l - scene.agent.l);
    let y_lo = w.y + half_up(scene.agent.l - w.l);
    let y_hi = w.y + half_down(w.l - scene.agent.l);
    body.push(var(sv.robot.x.clone()).next().ge(con(x_lo)));
    body.push(var(sv.robot.x.clone()).next().le(con(x_hi)));
    body.push(var(sv.robot.y.clone()).next().ge(con(y_lo)));
    body.push(var(sv.robot.y.clone()).next().le(con(y_hi)));

    for o in &scene.obstacles {
        let r = o.rect();
        body.push(robot_span_avoids_box(
            &sv, r.x_min, r.y_min, r.x_max, r.y_max, agent_r,
        ));
    }

    // Objects on board move with the robot, so only grounded ones block.
    for (i, ov) in sv.objects.iter().enumerate() {
        let grounded = Formula::atom(ov.p.clone()).not();
        body.push(grounded.implies(robot_span_avoids_object(&sv, ov, reach(scene, i + 1))));
    }

    each_step(sv.act_is(PrimitiveId::GoTo).implies(Formula::and_all(body)))
}

/// Door pushing: the robot starts at one of the door's two push poses,
/// heading included, and ends at the opposite side's position. Carry flags
/// are untouched.
pub fn build_push(scene: &SceneDescription) -> Formula {
    let sv = StateVars::for_scene(scene);
    let mut parts = Vec::new();
    for (i, door) in scene.doors.iter().enumerate() {
        let mut body: Vec<Formula> =
            sv.objects.iter().map(|ov| carry_flag_static(&ov.p)).collect();
        let through = |from: &crate::scene::Pose, to: &crate::scene::Pose| {
            Formula::and_all([
                var(sv.robot.x.clone()).eq(con(from.x)),
                var(sv.robot.y.clone()).eq(con(from.y)),
                var(sv.robot.alpha.clone()).eq(con(from.alpha)),
                var(sv.robot.x.clone()).next().eq(con(to.x)),
                var(sv.robot.y.clone()).next().eq(con(to.y)),
            ])
        };
        body.push(through(&door.q1, &door.q2).or(through(&door.q2, &door.q1)));
        parts.push(
            sv.act_is(PrimitiveId::Push(i + 1))
                .implies(Formula::and_all(body)),
        );
    }
    each_step(Formula::and_all(parts))
}

/// Picking up: nothing may be on board, the robot must already pose directly
/// left of the object at heading 0, it does not move, and afterwards exactly
/// that object is carried.
pub fn build_pickup(scene: &SceneDescription) -> Formula {
    let sv = StateVars::for_scene(scene);
    let mut parts = Vec::new();
    for j in 1..=sv.n_objects() {
        let mut body = Vec::new();
        for ov in &sv.objects {
            body.push(Formula::atom(ov.p.clone()).not());
        }
        for (l, ov) in sv.objects.iter().enumerate() {
            let next_p = Formula::atom_at(ov.p.clone(), 1);
            body.push(if l + 1 == j { next_p } else { next_p.not() });
        }
        body.push(robot_static(&sv));
        let ov = sv.object(j);
        body.push(var(sv.robot.alpha.clone()).eq(con(0)));
        body.push(var(sv.robot.y.clone()).eq(var(ov.y.clone())));
        body.push(var(sv.robot.x.clone()).eq(var(ov.x.clone()) - con(reach(scene, j))));
        parts.push(sv.act_is(PrimitiveId::PickUp(j)).implies(Formula::and_all(body)));
    }
    each_step(Formula::and_all(parts))
}

/// Putting down: exactly object `j` is on board and afterwards nothing is;
/// the robot does not move and must be at heading 0; the object lands
/// directly right of the robot, overlapping neither a grounded object nor a
/// wall.
pub fn build_leave(scene: &SceneDescription) -> Formula {
    let sv = StateVars::for_scene(scene);
    let mut parts = Vec::new();
    for j in 1..=sv.n_objects() {
        let mut body = Vec::new();
        for (l, ov) in sv.objects.iter().enumerate() {
            let now_p = Formula::atom(ov.p.clone());
            body.push(if l + 1 == j { now_p } else { now_p.not() });
            body.push(Formula::atom_at(ov.p.clone(), 1).not());
        }
        body.push(robot_static(&sv));

        let ov = sv.object(j).clone();
        body.push(var(sv.robot.alpha.clone()).eq(con(0)));
        body.push(var(ov.y.clone()).next().eq(var(sv.robot.y.clone())));
        body.push(
            var(ov.x.clone())
                .next()
                .eq(var(sv.robot.x.clone()) + con(reach(scene, j))),
        );

        for l in 1..=sv.n_objects() {
            if l == j {
                continue;
            }
            let other = sv.object(l);
            let gap = half_up(scene.objects[j - 1].l + scene.objects[l - 1].l);
            let grounded = Formula::atom(other.p.clone()).not();
            body.push(grounded.implies(dropped_apart(&ov, other, gap)));
        }
        let obj_r = half_up(scene.objects[j - 1].l);
        for o in &scene.obstacles {
            let r = o.rect();
            body.push(dropped_clear_of_box(
                &ov, r.x_min, r.y_min, r.x_max, r.y_max, obj_r,
            ));
        }
        parts.push(sv.act_is(PrimitiveId::Leave(j)).implies(Formula::and_all(body)));
    }
    each_step(Formula::and_all(parts))
}

/// Frame axiom: an object's position changes over a step only when that very
/// object is being put down. A carried object keeps its stale pick-up
/// coordinates until then; the carry flag excludes those coordinates from
/// every avoidance test, so no contradiction arises.
pub fn build_carry(scene: &SceneDescription) -> Formula {
    let sv = StateVars::for_scene(scene);
    let mut parts = Vec::new();
    for (i, ov) in sv.objects.iter().enumerate() {
        let still = Formula::and_all([
            var(ov.x.clone()).next().eq(var(ov.x.clone())),
            var(ov.y.clone()).next().eq(var(ov.y.clone())),
        ]);
        parts.push(sv.act_is_not(PrimitiveId::Leave(i + 1)).implies(still));
    }
    each_step(Formula::and_all(parts))
}

/// Instant-0 equalities pinning the robot pose and all object states to the
/// scene description.
pub fn build_initial(scene: &SceneDescription) -> Formula {
    let sv = StateVars::for_scene(scene);
    let r = &scene.robot_initial;
    let mut parts = vec![
        var(sv.robot.x.clone()).eq(con(r.x)),
        var(sv.robot.y.clone()).eq(con(r.y)),
        var(sv.robot.alpha.clone()).eq(con(r.alpha)),
    ];
    for (ov, b) in sv.objects.iter().zip(&scene.objects) {
        parts.push(var(ov.x.clone()).eq(con(b.x)));
        parts.push(var(ov.y.clone()).eq(con(b.y)));
        let p = Formula::atom(ov.p.clone());
        parts.push(if b.carried { p } else { p.not() });
    }
    Formula::and_all(parts)
}

/// The full transition system: initial state, all primitive constraints, the
/// action-code range over every step, and the heading kept in `[0, 360)` at
/// every instant so decoded plans use canonical angles.
pub fn build_primitive_spec(scene: &SceneDescription) -> Formula {
    let sv = StateVars::for_scene(scene);
    let act_range = each_step(
        var(sv.act.clone())
            .ge(con(0))
            .and(var(sv.act.clone()).le(con(sv.max_code()))),
    );
    let alpha_range = var(sv.robot.alpha.clone())
        .ge(con(0))
        .and(var(sv.robot.alpha.clone()).le(con(359)))
        .always();
    Formula::and_all([
        build_initial(scene),
        build_goto(scene),
        build_push(scene),
        build_pickup(scene),
        build_leave(scene),
        build_carry(scene),
        act_range,
        alpha_range,
    ])
}
