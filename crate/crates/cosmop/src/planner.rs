//! Plan synthesis and independent plan validation.
//!
//! [`synthesize`] assembles the goal formula with the scene's transition
//! system ([`build_primitive_spec`]), encodes the conjunction for a bounded
//! horizon, and hands it to the SMT backend. A satisfying model is decoded
//! into a [`Plan`]: one primitive plus the waypoint it reaches per step.
//!
//! Every plan that comes back from the solver is re-checked on a second,
//! solver-free route before it is returned: the decoded trace is run through
//! the in-process formula evaluator, and each step is re-validated with plain
//! rectangle geometry (corridor clearance, pose chaining, carry bookkeeping).
//! The two routes share nothing but the definitional constants, so a bug in
//! the encoder or a misparsed model surfaces as a hard error here instead of
//! an executable but unsafe plan.

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{eval, Formula, Trace};
use crate::primitives::{build_primitive_spec, PrimitiveId, StateVars};
use crate::scene::{aabb_disjoint, MovableObject, Obstacle, Pose, Rect, SceneDescription, SceneError};
use crate::smt::{encode, decode_model, EncodeError, DecodeError, EncodingContext};
use crate::solver::{solve, SatResult, SolverConfig, SolverError};

/// Horizon to search: a single trace length or an inclusive range scanned
/// from the shortest length up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Horizon {
    Fixed(usize),
    Range { min: usize, max: usize },
}

impl Horizon {
    pub fn bounds(self) -> (usize, usize) {
        match self {
            Horizon::Fixed(k) => (k, k),
            Horizon::Range { min, max } => (min, max),
        }
    }
}

/// Everything needed to synthesize one plan.
#[derive(Clone, Debug)]
pub struct PlanRequest {
    pub scene: SceneDescription,
    pub goal: Formula,
    pub horizon: Horizon,
    /// Wall-clock budget per solver call, not for the whole scan.
    pub timeout_ms: u64,
    pub solver: SolverConfig,
}

impl PlanRequest {
    /// Request with a two-minute per-solve budget and the solver command
    /// taken from `COSMOP_SMT_CMD` when set.
    pub fn new(scene: SceneDescription, goal: Formula, horizon: Horizon) -> PlanRequest {
        PlanRequest {
            scene,
            goal,
            horizon,
            timeout_ms: 120_000,
            solver: SolverConfig::from_env(),
        }
    }

    fn check(&self) -> Result<(), PlanError> {
        let (min, max) = self.horizon.bounds();
        if min < 1 {
            return Err(PlanError::BadRequest("horizon must be at least 1".into()));
        }
        if min > max {
            return Err(PlanError::BadRequest(format!(
                "horizon range is empty: min {min} > max {max}"
            )));
        }
        Ok(())
    }
}

/// One executed primitive and the state it reaches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanStep {
    pub primitive: PrimitiveId,
    /// Robot pose at the end of the step.
    pub waypoint: Pose,
}

/// A synthesized plan: `steps[i]` is the transition from instant `i` to
/// `i + 1`, so `steps[i].waypoint` is the decoded robot state at `i + 1`.
#[derive(Clone, Debug)]
pub struct Plan {
    pub steps: Vec<PlanStep>,
    /// The complete decoded model, kept for audits and simulation.
    pub full_trace: Trace,
    pub n_doors: usize,
    pub n_objects: usize,
}

/// Result of a synthesis run that did not fail outright.
#[derive(Clone, Debug)]
pub enum Synthesis {
    Plan(Plan),
    /// Unsatisfiable at every horizon tried; `k_max` is the largest.
    Infeasible { k_max: usize },
    /// The solver ran out of budget or gave up at horizon `k`.
    Timeout { k: usize, detail: String },
}

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("invalid plan request: {0}")]
    BadRequest(String),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("solver model could not be decoded: {0}")]
    Decode(#[from] DecodeError),
    #[error(
        "solver returned a plan the independent checker rejects (encoder and \
         checker disagree; this is a bug, not a property of the scene):\n{0}"
    )]
    AuditFailed(String),
}

/// Synthesize a plan for the request, scanning the horizon from its lower
/// bound and returning the first satisfiable length.
///
/// Because a zero-displacement travel step satisfies every constraint, a
/// horizon longer than necessary stays satisfiable: the solver pads with
/// no-op moves. Unsat therefore means the goal is unreachable within the
/// horizon, not merely mis-sized. Solver give-ups and wall-clock expiry are
/// reported as [`Synthesis::Timeout`], distinct from infeasibility.
pub fn synthesize(req: &PlanRequest) -> Result<Synthesis, PlanError> {
    req.check()?;
    req.scene.validate()?;
    let spec = build_primitive_spec(&req.scene).and(req.goal.clone());
    let (k_min, k_max) = req.horizon.bounds();
    for k in k_min..=k_max {
        let mut ctx = EncodingContext::new(k);
        let set = encode(&spec, &mut ctx)?;
        match solve(&set, &req.solver, Duration::from_millis(req.timeout_ms))? {
            SatResult::Sat(model) => {
                let trace = decode_model(&model, &ctx)?;
                let plan = plan_from_trace(trace, &req.scene)?;
                let report = validate_plan(&plan, &req.scene, &req.goal);
                if !report.passed() {
                    return Err(PlanError::AuditFailed(report.to_string()));
                }
                return Ok(Synthesis::Plan(plan));
            }
            SatResult::Unsat => continue,
            SatResult::Unknown(detail) => return Ok(Synthesis::Timeout { k, detail }),
            SatResult::Timeout => {
                return Ok(Synthesis::Timeout {
                    k,
                    detail: "wall-clock budget exceeded".into(),
                })
            }
        }
    }
    Ok(Synthesis::Infeasible { k_max })
}

/// Read the action codes and waypoints out of a decoded trace.
fn plan_from_trace(trace: Trace, scene: &SceneDescription) -> Result<Plan, PlanError> {
    let sv = StateVars::for_scene(scene);
    let k = trace.k();
    let mut steps = Vec::with_capacity(k);
    for i in 0..k {
        let code = trace
            .int(&sv.act, i)
            .ok_or_else(|| PlanError::AuditFailed("trace has no action series".into()))?;
        let primitive = sv.primitive(code).ok_or_else(|| {
            PlanError::AuditFailed(format!("action code {code} at step {i} is out of range"))
        })?;
        let waypoint = Pose {
            x: trace
                .int(&sv.robot.x, i + 1)
                .ok_or_else(|| PlanError::AuditFailed("trace has no robot.x series".into()))?,
            y: trace
                .int(&sv.robot.y, i + 1)
                .ok_or_else(|| PlanError::AuditFailed("trace has no robot.y series".into()))?,
            alpha: trace
                .int(&sv.robot.alpha, i + 1)
                .ok_or_else(|| PlanError::AuditFailed("trace has no robot.alpha series".into()))?,
        };
        steps.push(PlanStep { primitive, waypoint });
    }
    Ok(Plan {
        steps,
        full_trace: trace,
        n_doors: scene.doors.len(),
        n_objects: scene.objects.len(),
    })
}

/// One named validation check; `step` is the 0-based transition index the
/// first failure was found at, if the check is per-step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanCheck {
    pub name: &'static str,
    pub passed: bool,
    pub step: Option<usize>,
    pub detail: String,
}

/// Pass/fail outcome of every independent plan check.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<PlanCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PlanCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn pass(&mut self, name: &'static str) {
        self.checks.push(PlanCheck {
            name,
            passed: true,
            step: None,
            detail: String::new(),
        });
    }

    fn fail(&mut self, name: &'static str, step: Option<usize>, detail: String) {
        self.checks.push(PlanCheck {
            name,
            passed: false,
            step,
            detail,
        });
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "ok  " } else { "FAIL" };
            write!(f, "{status} {}", c.name)?;
            if let Some(step) = c.step {
                write!(f, " [step {step}]")?;
            }
            if !c.detail.is_empty() {
                write!(f, ": {}", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Doubled-coordinate box of a square footprint: exact half-widths without
/// integer division.
fn square2(cx: i64, cy: i64, side: i64) -> Rect {
    Rect {
        x_min: 2 * cx - side,
        y_min: 2 * cy - side,
        x_max: 2 * cx + side,
        y_max: 2 * cy + side,
    }
}

fn rect2(r: &Rect) -> Rect {
    Rect {
        x_min: 2 * r.x_min,
        y_min: 2 * r.y_min,
        x_max: 2 * r.x_max,
        y_max: 2 * r.y_max,
    }
}

/// Snapshot of the world at one instant, read back from the trace.
struct Snapshot {
    robot: Pose,
    objects: Vec<(i64, i64, bool)>,
}

fn snapshot(trace: &Trace, sv: &StateVars, i: usize) -> Option<Snapshot> {
    let robot = Pose {
        x: trace.int(&sv.robot.x, i)?,
        y: trace.int(&sv.robot.y, i)?,
        alpha: trace.int(&sv.robot.alpha, i)?,
    };
    let mut objects = Vec::with_capacity(sv.n_objects());
    for ov in &sv.objects {
        objects.push((
            trace.int(&ov.x, i)?,
            trace.int(&ov.y, i)?,
            trace.bool(&ov.p, i)?,
        ));
    }
    Some(Snapshot { robot, objects })
}

/// Re-check a plan without the solver: the decoded trace must satisfy the
/// goal and the full transition system under the in-process evaluator, and
/// every step must chain geometrically — its primitive's precondition at the
/// start state, its safety condition at the end state — using exact
/// rectangle arithmetic that shares only the footprint constants with the
/// constraint builders.
pub fn validate_plan(plan: &Plan, scene: &SceneDescription, goal: &Formula) -> ValidationReport {
    let mut report = ValidationReport::default();
    let sv = StateVars::for_scene(scene);
    let trace = &plan.full_trace;
    let k = trace.k();

    match eval(goal, trace, 0) {
        Ok(true) => report.pass("trace-satisfies-goal"),
        Ok(false) => report.fail("trace-satisfies-goal", None, "goal formula is false".into()),
        Err(e) => report.fail("trace-satisfies-goal", None, e.to_string()),
    }
    let spec = build_primitive_spec(scene);
    match eval(&spec, trace, 0) {
        Ok(true) => report.pass("trace-satisfies-primitive-constraints"),
        Ok(false) => report.fail(
            "trace-satisfies-primitive-constraints",
            None,
            "transition constraints are false".into(),
        ),
        Err(e) => report.fail("trace-satisfies-primitive-constraints", None, e.to_string()),
    }

    if plan.steps.len() != k {
        report.fail(
            "steps-match-trace",
            None,
            format!("{} steps for a {k}-transition trace", plan.steps.len()),
        );
        return report;
    }
    report.pass("steps-match-trace");

    let snaps: Vec<Snapshot> = match (0..=k).map(|i| snapshot(trace, &sv, i)).collect() {
        Some(s) => s,
        None => {
            report.fail("trace-complete", None, "missing state series".into());
            return report;
        }
    };
    report.pass("trace-complete");

    let a = scene.agent.l;
    let w = &scene.workspace;
    let workspace2 = Rect {
        x_min: 2 * w.x - w.l + a,
        y_min: 2 * w.y - w.l + a,
        x_max: 2 * w.x + w.l - a,
        y_max: 2 * w.y + w.l - a,
    };
    let mut ok = true;
    for (i, s) in snaps.iter().enumerate() {
        let (x2, y2) = (2 * s.robot.x, 2 * s.robot.y);
        if x2 < workspace2.x_min
            || x2 > workspace2.x_max
            || y2 < workspace2.y_min
            || y2 > workspace2.y_max
        {
            report.fail(
                "waypoints-inside-workspace",
                Some(i.saturating_sub(1)),
                format!("instant {i} at ({}, {})", s.robot.x, s.robot.y),
            );
            ok = false;
            break;
        }
    }
    if ok {
        report.pass("waypoints-inside-workspace");
    }

    let mut ok = true;
    for (i, s) in snaps.iter().enumerate() {
        if s.objects.iter().filter(|o| o.2).count() > 1 {
            report.fail(
                "carry-exclusivity",
                Some(i.saturating_sub(1)),
                format!("more than one object carried at instant {i}"),
            );
            ok = false;
            break;
        }
    }
    if ok {
        report.pass("carry-exclusivity");
    }

    check_steps(&mut report, plan, scene, &snaps);
    report
}

/// Half the centre-to-centre clearance between the robot and object `j`
/// (1-based), rounded up: the shared definitional constant for pick-up and
/// drop-off poses.
fn reach(scene: &SceneDescription, j: usize) -> i64 {
    (scene.objects[j - 1].l + scene.agent.l + 1).div_euclid(2)
}

fn check_steps(
    report: &mut ValidationReport,
    plan: &Plan,
    scene: &SceneDescription,
    snaps: &[Snapshot],
) {
    let a = scene.agent.l;
    let mut goto_ok = true;
    let mut push_ok = true;
    let mut pickup_ok = true;
    let mut leave_ok = true;
    let mut frame_ok = true;

    for (i, step) in plan.steps.iter().enumerate() {
        let before = &snaps[i];
        let after = &snaps[i + 1];

        // Frame: objects move only on their own drop-off step.
        for (j0, (bx, by, _)) in before.objects.iter().enumerate() {
            let (ax, ay, _) = after.objects[j0];
            let moved = ax != *bx || ay != *by;
            let exempt = step.primitive == PrimitiveId::Leave(j0 + 1);
            if moved && !exempt && frame_ok {
                report.fail(
                    "frame-objects-static",
                    Some(i),
                    format!("object {} moved under {}", j0 + 1, step.primitive),
                );
                frame_ok = false;
            }
        }

        match step.primitive {
            PrimitiveId::GoTo => {
                let corridor = Rect::from_corners(
                    2 * before.robot.x,
                    2 * before.robot.y,
                    2 * after.robot.x,
                    2 * after.robot.y,
                )
                .inflate(a);
                for o in &scene.obstacles {
                    if goto_ok && !aabb_disjoint(&corridor, &rect2(&o.rect())) {
                        report.fail(
                            "goto-corridor-clear",
                            Some(i),
                            format!(
                                "corridor ({}, {}) -> ({}, {}) crosses a wall",
                                before.robot.x, before.robot.y, after.robot.x, after.robot.y
                            ),
                        );
                        goto_ok = false;
                    }
                }
                for (j0, (ox, oy, carried)) in before.objects.iter().enumerate() {
                    let side = scene.objects[j0].l;
                    if goto_ok && !carried && !aabb_disjoint(&corridor, &square2(*ox, *oy, side)) {
                        report.fail(
                            "goto-corridor-clear",
                            Some(i),
                            format!("corridor crosses grounded object {}", j0 + 1),
                        );
                        goto_ok = false;
                    }
                }
                for (j0, (b, aft)) in before.objects.iter().zip(&after.objects).enumerate() {
                    if goto_ok && b.2 != aft.2 {
                        report.fail(
                            "goto-corridor-clear",
                            Some(i),
                            format!("carry flag of object {} changed during travel", j0 + 1),
                        );
                        goto_ok = false;
                    }
                }
            }
            PrimitiveId::Push(j) => {
                let door = &scene.doors[j - 1];
                let fwd = before.robot == door.q1
                    && after.robot.x == door.q2.x
                    && after.robot.y == door.q2.y;
                let back = before.robot == door.q2
                    && after.robot.x == door.q1.x
                    && after.robot.y == door.q1.y;
                if push_ok && !(fwd || back) {
                    report.fail(
                        "push-pose-chaining",
                        Some(i),
                        format!("step does not connect the push poses of door {j}"),
                    );
                    push_ok = false;
                }
                for (j0, (b, aft)) in before.objects.iter().zip(&after.objects).enumerate() {
                    if push_ok && b.2 != aft.2 {
                        report.fail(
                            "push-pose-chaining",
                            Some(i),
                            format!("carry flag of object {} changed during push", j0 + 1),
                        );
                        push_ok = false;
                    }
                }
            }
            PrimitiveId::PickUp(j) => {
                let (ox, oy, _) = before.objects[j - 1];
                let pose_ok = before.robot.alpha == 0
                    && before.robot.y == oy
                    && before.robot.x == ox - reach(scene, j);
                let none_before = before.objects.iter().all(|o| !o.2);
                let exactly_j_after = after
                    .objects
                    .iter()
                    .enumerate()
                    .all(|(l0, o)| o.2 == (l0 + 1 == j));
                let robot_still = before.robot == after.robot;
                if pickup_ok && !(pose_ok && none_before && exactly_j_after && robot_still) {
                    report.fail(
                        "pickup-chaining",
                        Some(i),
                        format!(
                            "pick-up of object {j}: pose ok={pose_ok}, hands free={none_before}, \
                             carries exactly {j} after={exactly_j_after}, robot still={robot_still}"
                        ),
                    );
                    pickup_ok = false;
                }
            }
            PrimitiveId::Leave(j) => {
                let exactly_j_before = before
                    .objects
                    .iter()
                    .enumerate()
                    .all(|(l0, o)| o.2 == (l0 + 1 == j));
                let none_after = after.objects.iter().all(|o| !o.2);
                let robot_still = before.robot == after.robot;
                let (ax, ay, _) = after.objects[j - 1];
                let placed = before.robot.alpha == 0
                    && ay == before.robot.y
                    && ax == before.robot.x + reach(scene, j);
                let mut clear = true;
                let dropped = square2(ax, ay, scene.objects[j - 1].l);
                for (l0, (lx, ly, carried)) in after.objects.iter().enumerate() {
                    if l0 + 1 != j
                        && !carried
                        && !aabb_disjoint(&dropped, &square2(*lx, *ly, scene.objects[l0].l))
                    {
                        clear = false;
                    }
                }
                for o in &scene.obstacles {
                    if !aabb_disjoint(&dropped, &rect2(&o.rect())) {
                        clear = false;
                    }
                }
                if leave_ok && !(exactly_j_before && none_after && robot_still && placed && clear) {
                    report.fail(
                        "leave-chaining",
                        Some(i),
                        format!(
                            "drop-off of object {j}: carried exactly {j} before={exactly_j_before}, \
                             hands free after={none_after}, robot still={robot_still}, \
                             placed beside robot={placed}, placement clear={clear}"
                        ),
                    );
                    leave_ok = false;
                }
            }
        }
    }

    if goto_ok {
        report.pass("goto-corridor-clear");
    }
    if push_ok {
        report.pass("push-pose-chaining");
    }
    if pickup_ok {
        report.pass("pickup-chaining");
    }
    if leave_ok {
        report.pass("leave-chaining");
    }
    if frame_ok {
        report.pass("frame-objects-static");
    }
}

/// Re-root a request at the current world state, typically mid-execution
/// after the scene changed: the previous plan is discarded and a fresh
/// request keeps the goal, horizon and budgets. `obstacles` replaces the
/// obstacle list when given. Fails if the new initial state is not a valid
/// scene (robot outside the workspace, objects overlapping walls, ...).
pub fn plan_to_receding_horizon(
    previous: &PlanRequest,
    robot: Pose,
    objects: Vec<MovableObject>,
    obstacles: Option<Vec<Obstacle>>,
) -> Result<PlanRequest, PlanError> {
    let mut scene = previous.scene.clone();
    scene.robot_initial = robot;
    scene.objects = objects;
    if let Some(obs) = obstacles {
        scene.obstacles = obs;
    }
    scene.validate()?;
    Ok(PlanRequest {
        scene,
        goal: previous.goal.clone(),
        horizon: previous.horizon,
        timeout_ms: previous.timeout_ms,
        solver: previous.solver.clone(),
    })
}

/// Serialized plan layout: the step list for humans and tools, plus the
/// full trace so audits can re-run without the solver.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlanFile {
    pub steps: Vec<PlanFileStep>,
    pub trace: Trace,
}

/// One serialized step: `k` counts from 1, `primitive` is the action
/// executed into the waypoint, `arg` its door/object index if any.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlanFileStep {
    pub k: usize,
    pub primitive: String,
    pub arg: Option<usize>,
    pub waypoint: Pose,
}

#[derive(Debug, Error)]
pub enum PlanFileError {
    #[error("plan file is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("step {k}: unknown primitive {primitive:?} (arg {arg:?})")]
    UnknownPrimitive {
        k: usize,
        primitive: String,
        arg: Option<usize>,
    },
}

impl Plan {
    pub fn to_file(&self) -> PlanFile {
        let steps = self
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let (primitive, arg) = match s.primitive {
                    PrimitiveId::GoTo => ("GoTo", None),
                    PrimitiveId::Push(j) => ("Push", Some(j)),
                    PrimitiveId::PickUp(j) => ("PickUp", Some(j)),
                    PrimitiveId::Leave(j) => ("Leave", Some(j)),
                };
                PlanFileStep {
                    k: i + 1,
                    primitive: primitive.to_owned(),
                    arg,
                    waypoint: s.waypoint,
                }
            })
            .collect();
        PlanFile {
            steps,
            trace: self.full_trace.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("plan serialization cannot fail")
    }

    /// Rebuild a plan from its serialized form; `n_doors`/`n_objects` give
    /// the scene shape the codes are checked against.
    pub fn from_file(
        file: PlanFile,
        n_doors: usize,
        n_objects: usize,
    ) -> Result<Plan, PlanFileError> {
        let mut steps = Vec::with_capacity(file.steps.len());
        for s in &file.steps {
            let primitive = match (s.primitive.as_str(), s.arg) {
                ("GoTo", None) => Some(PrimitiveId::GoTo),
                ("Push", Some(j)) if j >= 1 && j <= n_doors => Some(PrimitiveId::Push(j)),
                ("PickUp", Some(j)) if j >= 1 && j <= n_objects => Some(PrimitiveId::PickUp(j)),
                ("Leave", Some(j)) if j >= 1 && j <= n_objects => Some(PrimitiveId::Leave(j)),
                _ => None,
            };
            let primitive = primitive.ok_or_else(|| PlanFileError::UnknownPrimitive {
                k: s.k,
                primitive: s.primitive.clone(),
                arg: s.arg,
            })?;
            steps.push(PlanStep {
                primitive,
                waypoint: s.waypoint,
            });
        }
        Ok(Plan {
            steps,
            full_trace: file.trace,
            n_doors,
            n_objects,
        })
    }

    pub fn from_json(text: &str, n_doors: usize, n_objects: usize) -> Result<Plan, PlanFileError> {
        Ok(Plan::from_file(
            serde_json::from_str(text)?,
            n_doors,
            n_objects,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::load_scene;

    fn cleanup_scene() -> SceneDescription {
        load_scene(include_str!("../../../data/cleanup_scene.json").as_bytes()).unwrap()
    }

    /// Trace where everything sits at its scene value for `k` transitions.
    fn static_trace(scene: &SceneDescription, k: usize) -> Trace {
        let sv = StateVars::for_scene(scene);
        let mut t = Trace::new(k);
        let n = k + 1;
        let r = &scene.robot_initial;
        t.set_int(sv.robot.x.clone(), vec![r.x; n]).unwrap();
        t.set_int(sv.robot.y.clone(), vec![r.y; n]).unwrap();
        t.set_int(sv.robot.alpha.clone(), vec![r.alpha; n]).unwrap();
        t.set_int(sv.act.clone(), vec![0; n]).unwrap();
        for (ov, b) in sv.objects.iter().zip(&scene.objects) {
            t.set_int(ov.x.clone(), vec![b.x; n]).unwrap();
            t.set_int(ov.y.clone(), vec![b.y; n]).unwrap();
            t.set_bool(ov.p.clone(), vec![b.carried; n]).unwrap();
        }
        t
    }

    fn plan_of(trace: Trace, scene: &SceneDescription) -> Plan {
        plan_from_trace(trace, scene).unwrap()
    }

    #[test]
    fn request_horizon_is_checked() {
        let scene = cleanup_scene();
        let goal = Formula::tru().last();
        let bad = PlanRequest::new(scene.clone(), goal.clone(), Horizon::Fixed(0));
        assert!(matches!(synthesize(&bad), Err(PlanError::BadRequest(_))));
        let bad = PlanRequest::new(scene, goal, Horizon::Range { min: 5, max: 2 });
        assert!(matches!(synthesize(&bad), Err(PlanError::BadRequest(_))));
    }

    #[test]
    fn a_stationary_trace_validates() {
        let scene = cleanup_scene();
        let plan = plan_of(static_trace(&scene, 2), &scene);
        let report = validate_plan(&plan, &scene, &Formula::tru());
        assert!(report.passed(), "unexpected failures:\n{report}");
    }

    #[test]
    fn validation_catches_teleporting_through_the_wall() {
        let scene = cleanup_scene();
        let sv = StateVars::for_scene(&scene);
        let mut trace = static_trace(&scene, 1);
        trace.set_int(sv.robot.x.clone(), vec![-2000, 0]).unwrap();
        let plan = plan_of(trace, &scene);
        let report = validate_plan(&plan, &scene, &Formula::tru());
        assert!(!report.passed());
        let failure = report
            .failures()
            .find(|c| c.name == "goto-corridor-clear")
            .expect("corridor check must fail");
        assert_eq!(failure.step, Some(0));
        // The evaluator route rejects the same trace independently.
        assert!(report
            .failures()
            .any(|c| c.name == "trace-satisfies-primitive-constraints"));
    }

    #[test]
    fn validation_catches_pickup_while_carrying() {
        let scene = cleanup_scene();
        let sv = StateVars::for_scene(&scene);
        let mut trace = static_trace(&scene, 1);
        // Robot poses correctly for object 1 but already holds object 2.
        trace.set_int(sv.robot.x.clone(), vec![1650, 1650]).unwrap();
        trace
            .set_int(sv.robot.y.clone(), vec![-1000, -1000])
            .unwrap();
        trace
            .set_int(sv.act.clone(), vec![sv.code(PrimitiveId::PickUp(1)), 0])
            .unwrap();
        trace
            .set_bool(sv.object(1).p.clone(), vec![false, true])
            .unwrap();
        trace
            .set_bool(sv.object(2).p.clone(), vec![true, true])
            .unwrap();
        let plan = plan_of(trace, &scene);
        let report = validate_plan(&plan, &scene, &Formula::tru());
        assert!(!report.passed());
        assert!(report.failures().any(|c| c.name == "pickup-chaining"));
        assert!(report.failures().any(|c| c.name == "carry-exclusivity"));
    }

    #[test]
    fn validation_catches_drifting_objects() {
        let scene = cleanup_scene();
        let sv = StateVars::for_scene(&scene);
        let mut trace = static_trace(&scene, 1);
        trace
            .set_int(sv.object(1).x.clone(), vec![1900, 1905])
            .unwrap();
        let plan = plan_of(trace, &scene);
        let report = validate_plan(&plan, &scene, &Formula::tru());
        assert!(!report.passed());
        let failure = report
            .failures()
            .find(|c| c.name == "frame-objects-static")
            .unwrap();
        assert_eq!(failure.step, Some(0));
    }

    #[test]
    fn validation_checks_the_goal_route_separately() {
        let scene = cleanup_scene();
        let plan = plan_of(static_trace(&scene, 1), &scene);
        let goal = crate::logic::var("robot.x").eq(crate::logic::con(12345)).last();
        let report = validate_plan(&plan, &scene, &goal);
        assert!(!report.passed());
        assert!(report.failures().any(|c| c.name == "trace-satisfies-goal"));
    }

    #[test]
    fn plan_json_round_trips() {
        let scene = cleanup_scene();
        let sv = StateVars::for_scene(&scene);
        let mut trace = static_trace(&scene, 2);
        trace
            .set_int(
                sv.act.clone(),
                vec![sv.code(PrimitiveId::Push(1)), sv.code(PrimitiveId::GoTo), 0],
            )
            .unwrap();
        let plan = plan_of(trace, &scene);
        let json = plan.to_json();
        let parsed = Plan::from_json(&json, scene.doors.len(), scene.objects.len()).unwrap();
        assert_eq!(parsed.steps, plan.steps);
        assert_eq!(parsed.full_trace.k(), plan.full_trace.k());
        // The serialized form names primitives and 1-based step numbers.
        let file: PlanFile = serde_json::from_str(&json).unwrap();
        assert_eq!(file.steps[0].k, 1);
        assert_eq!(file.steps[0].primitive, "Push");
        assert_eq!(file.steps[0].arg, Some(1));
        assert_eq!(file.steps[1].primitive, "GoTo");
        assert_eq!(file.steps[1].arg, None);
    }

    #[test]
    fn plan_file_rejects_unknown_primitives() {
        let scene = cleanup_scene();
        let plan = plan_of(static_trace(&scene, 1), &scene);
        let mut file = plan.to_file();
        file.steps[0].primitive = "Fly".into();
        let err = Plan::from_file(file, scene.doors.len(), scene.objects.len()).unwrap_err();
        assert!(matches!(err, PlanFileError::UnknownPrimitive { k: 1, .. }));
        let mut file = plan.to_file();
        file.steps[0].primitive = "Push".into();
        file.steps[0].arg = Some(9);
        assert!(Plan::from_file(file, scene.doors.len(), scene.objects.len()).is_err());
    }

    #[test]
    fn receding_horizon_reroots_the_request() {
        let scene = cleanup_scene();
        let goal = Formula::tru().last();
        let req = PlanRequest::new(scene.clone(), goal, Horizon::Fixed(4));
        let mid = Pose {
            x: -1000,
            y: -500,
            alpha: 180,
        };
        let next = plan_to_receding_horizon(&req, mid, scene.objects.clone(), None).unwrap();
        assert_eq!(next.scene.robot_initial, mid);
        assert_eq!(next.horizon, req.horizon);
        // Outside the workspace: rejected by scene validation.
        let far = Pose {
            x: 99_999,
            y: 0,
            alpha: 0,
        };
        let err = plan_to_receding_horizon(&req, far, scene.objects.clone(), None).unwrap_err();
        assert!(matches!(err, PlanError::Scene(_)));
    }
}
