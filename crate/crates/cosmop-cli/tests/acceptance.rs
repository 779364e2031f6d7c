//! Acceptance gate for the whole toolkit: eight end-to-end criteria, one
//! pass/fail line each (run with `--nocapture` to watch them as they
//! finish). Everything runs in a single test so the timing-sensitive
//! benchmark shapes never share the machine with sibling tests.
//!
//! Needs the SMT solver on PATH (or `COSMOP_SMT_CMD`).

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use cosmop::bench::{run_suite, suite, BenchReport};
use cosmop::logic::sample::{sample_formula, sample_trace, SampleSpace};
use cosmop::logic::{con, eval, parse_formula, var, Formula, Symbol, Trace};
use cosmop::planner::{
    synthesize, validate_plan, Horizon, Plan, PlanRequest, Synthesis, ValidationReport,
};
use cosmop::primitives::{build_primitive_spec, PrimitiveId, StateVars};
use cosmop::rooms::make_rooms_scene;
use cosmop::scene::{
    aabb_disjoint, load_scene, Agent, Obstacle, Pose, Rect, SceneDescription, Workspace,
};
use cosmop::sim::{run_leg, DwaParams, LegOutcome, MovingObstacle, ObstaclePolicy, SimState};
use cosmop::smt::{decode_model, encode, EncodingContext};
use cosmop::solver::{solve, SatResult, SolverConfig};
use cosmop_cli::{run, EXIT_OK};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn data(file: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(file)
}

struct CleanupContext {
    plan: Plan,
    scene: SceneDescription,
    goal: Formula,
}

#[test]
fn acceptance_criteria() {
    let solver = SolverConfig::from_env();
    let out = tempfile::tempdir().unwrap();
    let mut failed = Vec::new();
    let mut report = |n: usize, name: &str, outcome: Result<String, String>| match outcome {
        Ok(detail) => println!("criterion {n} ({name}): pass - {detail}"),
        Err(detail) => {
            println!("criterion {n} ({name}): FAIL - {detail}");
            failed.push(n);
        }
    };

    let cleanup = match cleanup_end_to_end(out.path()) {
        Ok((detail, ctx)) => {
            report(1, "clean-up task end-to-end", Ok(detail));
            Some(ctx)
        }
        Err(e) => {
            report(1, "clean-up task end-to-end", Err(e));
            None
        }
    };
    report(
        2,
        "solver verdicts equal exhaustive enumeration",
        encoder_matches_exhaustive_oracle(&solver),
    );
    report(
        3,
        "travel corridor soundness",
        corridor_constraint_matches_geometry(),
    );
    report(
        4,
        "passive-safety monitor never trips",
        controller_never_violates_the_monitor(),
    );
    report(
        5,
        "step chaining and corruption rejection",
        match &cleanup {
            Some(ctx) => plans_chain_and_corruptions_are_caught(ctx),
            None => Err("skipped: no clean-up plan to corrupt".into()),
        },
    );
    report(6, "benchmark scaling shape", benchmark_shapes(&solver));
    report(
        7,
        "infeasibility detection",
        match &cleanup {
            Some(ctx) => sealed_and_blocked_goals_are_infeasible(ctx),
            None => Err("skipped: no clean-up scene".into()),
        },
    );
    report(
        8,
        "temporal-law invariants",
        logic_invariants_hold_over_randomized_cases(),
    );

    assert!(failed.is_empty(), "criteria {failed:?} failed");
}

/// Criterion 1: the two-room clean-up task synthesizes at K = 24 through
/// the command-line entry point within budget, and the decoded trace
/// satisfies the goal and every transition constraint under the
/// independent evaluator, with no tolerance.
fn cleanup_end_to_end(out_dir: &Path) -> Result<(String, CleanupContext), String> {
    let scene_path = data("cleanup_scene.json");
    let spec_path = data("cleanup_goal.txt");
    let plan_path = out_dir.join("cleanup_plan.json");

    let t0 = Instant::now();
    let code = run([
        "cosmop",
        "plan",
        "--scene",
        scene_path.to_str().unwrap(),
        "--spec",
        spec_path.to_str().unwrap(),
        "--K",
        "24",
        "--out",
        plan_path.to_str().unwrap(),
    ]);
    let dt = t0.elapsed();
    if code != EXIT_OK {
        return Err(format!("plan command exited with {code}"));
    }
    if dt > Duration::from_secs(120) {
        return Err(format!(
            "synthesis took {:.1} s, budget is 120 s",
            dt.as_secs_f64()
        ));
    }

    let scene = load_scene(fs::File::open(&scene_path).unwrap()).unwrap();
    let goal = parse_formula(&fs::read_to_string(&spec_path).unwrap()).unwrap();
    let plan = Plan::from_json(
        &fs::read_to_string(&plan_path).unwrap(),
        scene.doors.len(),
        scene.objects.len(),
    )
    .map_err(|e| format!("written plan does not load back: {e}"))?;
    if plan.steps.len() != 24 {
        return Err(format!("expected 24 steps, plan has {}", plan.steps.len()));
    }

    let everything = build_primitive_spec(&scene).and(goal.clone());
    match eval(&everything, &plan.full_trace, 0) {
        Ok(true) => {}
        other => {
            return Err(format!(
                "decoded trace fails the goal or a transition constraint: {other:?}"
            ))
        }
    }
    Ok((
        format!(
            "Sat at K=24 in {:.1} s; decoded trace satisfies the goal and \
             all transition constraints under the evaluator",
            dt.as_secs_f64()
        ),
        CleanupContext { plan, scene, goal },
    ))
}

/// Criterion 2: over 200 random formulas whose trace spaces are small
/// enough to enumerate outright, the solver verdict equals exhaustive
/// enumeration, and every model re-checks under the evaluator.
fn encoder_matches_exhaustive_oracle(solver: &SolverConfig) -> Result<String, String> {
    // (booleans, integers, K): each space has (2^b * 3^n)^(K+1)
    // assignments, at most 7776.
    const COMBOS: [(usize, usize, usize); 8] = [
        (3, 0, 3),
        (2, 1, 2),
        (1, 1, 4),
        (0, 2, 2),
        (2, 0, 4),
        (1, 2, 1),
        (3, 1, 1),
        (0, 1, 4),
    ];
    let mut sat = 0usize;
    let mut unsat = 0usize;
    for case in 0..200u64 {
        let (b, n, k) = COMBOS[case as usize % COMBOS.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(0xE0C0DE + case);
        let space = SampleSpace::small().with_symbols(b, n);
        let f = sample_formula(&mut rng, &space);
        // Pin integer symbols to the enumerated domain at every instant so
        // both routes quantify over the same trace space.
        let ranged = Formula::and_all(std::iter::once(f.clone()).chain(
            space.int_symbols.iter().map(|s| {
                var(s.as_str())
                    .ge(con(space.int_lo))
                    .and(var(s.as_str()).le(con(space.int_hi)))
                    .always()
            }),
        ));
        let mut ctx = EncodingContext::new(k);
        let set = encode(&ranged, &mut ctx).map_err(|e| format!("case {case}: encode: {e}"))?;
        let verdict =
            solve(&set, solver, Duration::from_secs(30)).map_err(|e| format!("case {case}: solver: {e}"))?;
        let oracle_sat = some_trace_satisfies(&f, &space, k);
        match verdict {
            SatResult::Sat(model) => {
                if !oracle_sat {
                    return Err(format!(
                        "case {case}: solver says Sat but no trace satisfies `{f}` at K={k}"
                    ));
                }
                let decoded =
                    decode_model(&model, &ctx).map_err(|e| format!("case {case}: decode: {e}"))?;
                if eval(&ranged, &decoded, 0) != Ok(true) {
                    return Err(format!(
                        "case {case}: the solver's own model falsifies `{f}` under the evaluator"
                    ));
                }
                sat += 1;
            }
            SatResult::Unsat => {
                if oracle_sat {
                    return Err(format!(
                        "case {case}: solver says Unsat but a trace satisfies `{f}` at K={k}"
                    ));
                }
                unsat += 1;
            }
            other => return Err(format!("case {case}: inconclusive verdict {other:?}")),
        }
    }
    Ok(format!(
        "200 formulas ({sat} Sat, {unsat} Unsat): verdicts match exhaustive \
         enumeration everywhere and every model re-checks under the evaluator"
    ))
}

/// Walks every assignment of the space's symbols over instants 0..=k.
fn some_trace_satisfies(f: &Formula, space: &SampleSpace, k: usize) -> bool {
    let b = space.bool_symbols.len();
    let n = space.int_symbols.len();
    let span = (space.int_hi - space.int_lo + 1) as usize;
    let per_instant = (1usize << b) * span.pow(n as u32);
    let total = per_instant.pow(k as u32 + 1);
    for idx in 0..total {
        let mut rest = idx;
        let mut bools = vec![vec![false; k + 1]; b];
        let mut ints = vec![vec![0i64; k + 1]; n];
        for i in 0..=k {
            for s in 0..b {
                bools[s][i] = rest % 2 == 1;
                rest /= 2;
            }
            for s in 0..n {
                ints[s][i] = space.int_lo + (rest % span) as i64;
                rest /= span;
            }
        }
        let mut trace = Trace::new(k);
        for (s, series) in space.bool_symbols.iter().zip(bools) {
            trace.set_bool(s.clone(), series).unwrap();
        }
        for (s, series) in space.int_symbols.iter().zip(ints) {
            trace.set_int(s.clone(), series).unwrap();
        }
        if eval(f, &trace, 0) == Ok(true) {
            return true;
        }
    }
    false
}

/// Criterion 3: for random travel segments against a random wall, the
/// transition formula's verdict equals the doubled-coordinate rectangle
/// test on the inflated segment bounding box. Zero mismatches allowed.
fn corridor_constraint_matches_geometry() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0881D08);
    let mut clear = 0usize;
    let mut blocked = 0usize;
    for case in 0..10_000 {
        // An odd footprint exercises the rounded half-width.
        let l = if rng.gen_bool(0.5) { 300 } else { 401 };
        let (x1, y1) = (rng.gen_range(-5000..=5000), rng.gen_range(-5000..=5000));
        let (x2, y2) = (rng.gen_range(-5000..=5000), rng.gen_range(-5000..=5000));
        let (xi, yi) = (rng.gen_range(-5000..=5000), rng.gen_range(-5000..=5000));
        let (xf, yf) = (
            xi + rng.gen_range(0..=4000),
            yi + rng.gen_range(0..=4000),
        );
        let scene = SceneDescription {
            workspace: Workspace {
                x: 0,
                y: 0,
                l: 400_000,
            },
            agent: Agent { l },
            robot_initial: Pose {
                x: x1,
                y: y1,
                alpha: 0,
            },
            obstacles: vec![Obstacle { xi, yi, xf, yf }],
            doors: vec![],
            objects: vec![],
        };
        let sv = StateVars::for_scene(&scene);
        let mut trace = Trace::new(1);
        trace.set_int(sv.robot.x.clone(), vec![x1, x2]).unwrap();
        trace.set_int(sv.robot.y.clone(), vec![y1, y2]).unwrap();
        trace.set_int(sv.robot.alpha.clone(), vec![0, 0]).unwrap();
        trace.set_int(sv.act.clone(), vec![0, 0]).unwrap();
        let constraint = eval(&build_primitive_spec(&scene), &trace, 0)
            .map_err(|e| format!("case {case}: transition formula not total: {e}"))?;

        let corridor = Rect::from_corners(2 * x1, 2 * y1, 2 * x2, 2 * y2).inflate(l);
        let wall = Rect::from_corners(2 * xi, 2 * yi, 2 * xf, 2 * yf);
        let free = aabb_disjoint(&corridor, &wall);
        if constraint != free {
            return Err(format!(
                "case {case}: formula says {constraint}, geometry says {free} for \
                 segment ({x1}, {y1}) -> ({x2}, {y2}) against wall ({xi}, {yi}) -> \
                 ({xf}, {yf}) with footprint {l}"
            ));
        }
        if free {
            clear += 1;
        } else {
            blocked += 1;
        }
    }
    Ok(format!(
        "10000 segment/wall pairs ({clear} clear, {blocked} blocked): the \
         four-way disjunction equals the exact rectangle test on every one"
    ))
}

/// Criterion 4: a thousand seeded runs against static, drifting, and
/// pursuing obstacles capped at the assumed speed: the monitored condition
/// never fails, and any contact happens with the robot at rest.
fn controller_never_violates_the_monitor() -> Result<String, String> {
    let t0 = Instant::now();
    let params = DwaParams::for_agent_side(400.0);
    let mut cycles = 0usize;
    let mut reached = 0usize;
    let mut stopped = 0usize;
    let mut contact_rows = 0usize;
    for seed in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xD0_A000 + seed);
        let start = SimState::at_rest(0.0, 0.0, rng.gen_range(-PI..PI));
        let bearing = rng.gen_range(-PI..PI);
        let dist = rng.gen_range(1000.0..4000.0);
        let goal = (dist * bearing.cos(), dist * bearing.sin());
        let obstacles: Vec<MovingObstacle> = (0..rng.gen_range(1..=4))
            .map(|_| {
                let policy = match rng.gen_range(0..3) {
                    0 => ObstaclePolicy::Static,
                    1 => ObstaclePolicy::ConstantVelocity,
                    _ => ObstaclePolicy::Adversarial,
                };
                // Scatter around the start-goal line, some right on it.
                let along = rng.gen_range(-0.25..1.25);
                let off = rng.gen_range(-1500.0..1500.0);
                let (dx, dy) = (goal.0 / dist, goal.1 / dist);
                let speed = rng.gen_range(0.0..=params.v_obstacle_max);
                let theta = rng.gen_range(-PI..PI);
                MovingObstacle {
                    x: along * goal.0 - off * dy,
                    y: along * goal.1 + off * dx,
                    vx: speed * theta.cos(),
                    vy: speed * theta.sin(),
                    radius: rng.gen_range(100.0..400.0),
                    policy,
                }
            })
            .collect();
        let leg = run_leg(start, goal, obstacles, &params, 20.0)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        match leg.outcome {
            LegOutcome::MonitorViolation { cycle } => {
                return Err(format!(
                    "seed {seed}: monitor violation after cycle {cycle}"
                ))
            }
            LegOutcome::Reached => reached += 1,
            LegOutcome::StoppedSafe { .. } => stopped += 1,
        }
        for row in &leg.rows {
            if !row.phi_ps {
                return Err(format!("seed {seed}: unsafe cycle at t={:.1}", row.t));
            }
            if row.min_dist <= 0.0 {
                contact_rows += 1;
                if row.v != 0.0 {
                    return Err(format!(
                        "seed {seed}: contact while moving at {:.0} mm/s (t={:.1})",
                        row.v, row.t
                    ));
                }
            }
        }
        cycles += leg.rows.len();
    }
    let dt = t0.elapsed();
    if dt > Duration::from_secs(300) {
        return Err(format!("campaign took {:.0} s, budget is 300 s", dt.as_secs_f64()));
    }
    Ok(format!(
        "1000 runs, {cycles} control cycles in {:.0} s: zero monitor \
         violations, {reached} reached / {stopped} stopped safely, every \
         contact sample at rest ({contact_rows} rows)",
        dt.as_secs_f64()
    ))
}

fn poke_int(trace: &mut Trace, sym: &Symbol, i: usize, value: i64) {
    let mut series = trace.int_series(sym).unwrap().to_vec();
    series[i] = value;
    trace.set_int(sym.clone(), series).unwrap();
}

fn poke_bool_through(trace: &mut Trace, sym: &Symbol, last: usize, value: bool) {
    let mut series = trace.bool_series(sym).unwrap().to_vec();
    for v in series.iter_mut().take(last + 1) {
        *v = value;
    }
    trace.set_bool(sym.clone(), series).unwrap();
}

fn expect_rejection(report: &ValidationReport, check: &str, step: usize) -> Result<(), String> {
    if report.passed() {
        return Err(format!("corrupted plan still validates (wanted {check})"));
    }
    let hit = report
        .failures()
        .find(|c| c.name == check)
        .ok_or_else(|| format!("{check} did not fail; report:\n{report}"))?;
    if hit.step != Some(step) {
        return Err(format!(
            "{check} failed at step {:?}, expected step {step}",
            hit.step
        ));
    }
    Ok(())
}

/// Criterion 5: synthesized plans pass the independent validator, and three
/// hand-corrupted variants are each rejected at the exact step that was
/// tampered with.
fn plans_chain_and_corruptions_are_caught(cleanup: &CleanupContext) -> Result<String, String> {
    let report = validate_plan(&cleanup.plan, &cleanup.scene, &cleanup.goal);
    if !report.passed() {
        return Err(format!("clean-up plan fails validation:\n{report}"));
    }
    let (rooms_scene, rooms_goal) =
        make_rooms_scene(4, 4).map_err(|e| format!("room grid: {e}"))?;
    let req = PlanRequest::new(
        rooms_scene.clone(),
        rooms_goal.clone(),
        Horizon::Range { min: 1, max: 4 },
    );
    let rooms_plan = match synthesize(&req) {
        Ok(Synthesis::Plan(p)) => p,
        other => return Err(format!("room-grid synthesis failed: {other:?}")),
    };
    let rooms_report = validate_plan(&rooms_plan, &rooms_scene, &rooms_goal);
    if !rooms_report.passed() {
        return Err(format!("room-grid plan fails validation:\n{rooms_report}"));
    }

    let sv = StateVars::for_scene(&cleanup.scene);

    // Teleport the first travel leg across the vertical wall.
    let mut teleported = cleanup.plan.clone();
    if teleported.steps[0].primitive != PrimitiveId::GoTo {
        return Err(format!(
            "expected the plan to open with a travel step, found {}",
            teleported.steps[0].primitive
        ));
    }
    poke_int(&mut teleported.full_trace, &sv.robot.x, 1, 0);
    poke_int(&mut teleported.full_trace, &sv.robot.y, 1, 1000);
    teleported.steps[0].waypoint.x = 0;
    teleported.steps[0].waypoint.y = 1000;
    let teleport_report = validate_plan(&teleported, &cleanup.scene, &cleanup.goal);
    expect_rejection(&teleport_report, "goto-corridor-clear", 0)?;

    // Mark another object as already carried when the first pick-up fires.
    let (pick_i, pick_j) = cleanup
        .plan
        .steps
        .iter()
        .enumerate()
        .find_map(|(i, s)| match s.primitive {
            PrimitiveId::PickUp(j) => Some((i, j)),
            _ => None,
        })
        .ok_or("the clean-up plan has no pick-up step")?;
    let other = if pick_j == 1 { 2 } else { 1 };
    let mut double_carry = cleanup.plan.clone();
    poke_bool_through(
        &mut double_carry.full_trace,
        &sv.objects[other - 1].p,
        pick_i,
        true,
    );
    let double_report = validate_plan(&double_carry, &cleanup.scene, &cleanup.goal);
    expect_rejection(&double_report, "pickup-chaining", pick_i)?;

    // Skew the heading at the entry pose of the first push.
    let push_i = cleanup
        .plan
        .steps
        .iter()
        .enumerate()
        .find_map(|(i, s)| match s.primitive {
            PrimitiveId::Push(_) => Some(i),
            _ => None,
        })
        .ok_or("the clean-up plan has no push step")?;
    if push_i > 0 && !matches!(cleanup.plan.steps[push_i - 1].primitive, PrimitiveId::GoTo) {
        return Err(format!(
            "push at step {push_i} is not entered from a travel step; \
             corruption would blame the predecessor"
        ));
    }
    let mut skewed = cleanup.plan.clone();
    let alpha = skewed.full_trace.int(&sv.robot.alpha, push_i).unwrap();
    poke_int(&mut skewed.full_trace, &sv.robot.alpha, push_i, alpha + 37);
    let skew_report = validate_plan(&skewed, &cleanup.scene, &cleanup.goal);
    expect_rejection(&skew_report, "push-pose-chaining", push_i)?;

    Ok(format!(
        "2 synthesized plans validate end to end; wall teleport, double \
         carry, and skewed push each rejected at their step (0, {pick_i}, {push_i})"
    ))
}

/// Criterion 6: the four benchmark sweeps keep their published shapes:
/// flat in workspace size, strictly increasing in room count, monotone in
/// trace length (one small dip allowed), and the largest joint case stays
/// satisfiable inside a minute.
fn benchmark_shapes(solver: &SolverConfig) -> Result<String, String> {
    let run_named = |name: &str, reps: usize| -> Result<BenchReport, String> {
        let rows = suite(name, reps).map_err(|e| format!("{name} suite: {e}"))?;
        run_suite(&rows, solver, |_| {}).map_err(|e| format!("{name} suite: {e}"))
    };
    let size = run_named("size", 5)?;
    let rooms = run_named("rooms", 3)?;
    let k = run_named("k", 5)?;
    let complexity = run_named("complexity", 2)?;

    for report in [&size, &rooms, &k, &complexity] {
        if let Some(row) = report.rows.iter().find(|r| !r.sat) {
            return Err(format!("unsatisfiable benchmark row: {:?}", row.scenario));
        }
    }
    let means = |r: &BenchReport| -> Vec<f64> { r.rows.iter().map(|row| row.mean_ms).collect() };

    let size_means = means(&size);
    let spread = size_means.iter().cloned().fold(f64::MIN, f64::max)
        / size_means.iter().cloned().fold(f64::MAX, f64::min);
    if spread > 1.5 {
        return Err(format!(
            "workspace-size sweep is not flat: spread {spread:.2}, means {size_means:?}"
        ));
    }

    let rooms_means = means(&rooms);
    if !rooms_means.windows(2).all(|w| w[0] < w[1]) {
        return Err(format!(
            "room-count sweep is not strictly increasing: {rooms_means:?}"
        ));
    }

    let k_means = means(&k);
    let mut dips = 0usize;
    let mut worst = 0.0f64;
    for w in k_means.windows(2) {
        if w[1] < w[0] {
            dips += 1;
            worst = worst.max((w[0] - w[1]) / w[0]);
        }
    }
    if dips > 1 || worst > 0.10 {
        return Err(format!(
            "trace-length sweep dips {dips} times (worst {:.0}%): {k_means:?}",
            worst * 100.0
        ));
    }

    let largest = complexity.rows.last().unwrap();
    if largest.mean_ms >= 60_000.0 {
        return Err(format!(
            "largest joint case needs {:.0} ms, budget is 60 s",
            largest.mean_ms
        ));
    }

    Ok(format!(
        "size spread {spread:.2} (limit 1.5); rooms strictly increasing; \
         trace-length sweep within tolerance; all joint rows Sat, largest \
         mean {:.0} ms",
        largest.mean_ms
    ))
}

/// Criterion 7: sealing every room makes the goal Unsat at every horizon
/// up to 30, and a drop position outside the workspace is Unsat up to 10.
fn sealed_and_blocked_goals_are_infeasible(cleanup: &CleanupContext) -> Result<String, String> {
    let (mut sealed, goal) = make_rooms_scene(4, 4).map_err(|e| format!("room grid: {e}"))?;
    sealed.doors.clear();
    // Replace the pierced walls with full-length ones: four rooms, no way
    // between them.
    sealed.obstacles = vec![
        Obstacle {
            xi: 0,
            yi: -2000,
            xf: 0,
            yf: 2000,
        },
        Obstacle {
            xi: -2000,
            yi: 0,
            xf: 2000,
            yf: 0,
        },
    ];
    let req = PlanRequest::new(sealed, goal, Horizon::Range { min: 1, max: 30 });
    match synthesize(&req) {
        Ok(Synthesis::Infeasible { k_max: 30 }) => {}
        other => return Err(format!("sealed grid: expected Infeasible, got {other:?}")),
    }

    let goal = parse_formula("Last[obj[1].x = 5000 & obj[1].y = 0]").unwrap();
    let req = PlanRequest::new(
        cleanup.scene.clone(),
        goal,
        Horizon::Range { min: 1, max: 10 },
    );
    match synthesize(&req) {
        Ok(Synthesis::Infeasible { k_max: 10 }) => {}
        other => {
            return Err(format!(
                "out-of-workspace drop: expected Infeasible, got {other:?}"
            ))
        }
    }
    Ok("sealed room grid Unsat at every K <= 30; out-of-workspace drop \
        goal Unsat at every K <= 10"
        .into())
}

/// Criterion 8: the abbreviation and expansion laws of the logic hold over
/// ten thousand sampled formula/trace/instant triples.
fn logic_invariants_hold_over_randomized_cases() -> Result<String, String> {
    let space = SampleSpace::small();
    for case in 0..10_000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x10_61C + case);
        let f = sample_formula(&mut rng, &space);
        let g = sample_formula(&mut rng, &space);
        let k = rng.gen_range(0..=5);
        let trace = sample_trace(&mut rng, &space, k);
        let i = rng.gen_range(0..=k);
        let (name, lhs, rhs) = match case % 4 {
            0 => (
                "eventually",
                f.clone().eventually(),
                Formula::tru().until(f.clone()),
            ),
            1 => (
                "always",
                f.clone().always(),
                f.clone().not().eventually().not(),
            ),
            2 => (
                "last",
                f.clone().last(),
                f.clone().and(Formula::tru().next().not()).eventually(),
            ),
            _ => (
                "until-expansion",
                f.clone().until(g.clone()),
                g.clone().or(f.clone().and(f.clone().until(g.clone()).next())),
            ),
        };
        if eval(&lhs, &trace, i) != eval(&rhs, &trace, i) {
            return Err(format!(
                "case {case}: the {name} law fails at instant {i} for `{f}` / `{g}`"
            ));
        }
    }
    Ok("10000 sampled cases across the four temporal laws, zero disagreements".into())
}
