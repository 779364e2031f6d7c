//! The three subcommand implementations. Each returns a process exit code;
//! diagnostics go to standard error, results to standard output.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cosmop::bench::{run_scenario, suite, BenchReport, BenchRow};
use cosmop::logic::parse_formula;
use cosmop::planner::{synthesize, Horizon, Plan, PlanRequest, Synthesis};
use cosmop::primitives::PrimitiveId;
use cosmop::scene::{load_scene, SceneDescription};
use cosmop::sim::{
    load_obstacles, run_leg, write_csv, write_svg, CycleRow, LegOutcome, MovingObstacle, SimState,
};

use crate::config::AppConfig;
use crate::{
    BenchArgs, PlanArgs, SimulateArgs, EXIT_INFEASIBLE, EXIT_MONITOR_VIOLATION, EXIT_OK,
    EXIT_STOPPED_SAFE, EXIT_TIMEOUT, EXIT_USAGE,
};

/// Ceiling on simulated seconds per go-to leg before declaring a safe stop.
const MAX_LEG_SECONDS: f64 = 60.0;

fn fail(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn read_scene(path: &Path) -> Result<SceneDescription, String> {
    let file = File::open(path).map_err(|e| format!("cannot open {}: {e}", path.display()))?;
    load_scene(file).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn cmd_plan(args: &PlanArgs, config: &AppConfig) -> i32 {
    let horizon = match (args.k, args.k_min, args.k_max) {
        (Some(k), None, None) => Horizon::Fixed(k),
        (None, Some(min), Some(max)) => Horizon::Range { min, max },
        _ => return fail("pass either --K, or both --k-min and --k-max"),
    };
    let scene = match read_scene(&args.scene) {
        Ok(scene) => scene,
        Err(e) => return fail(e),
    };
    let goal = match std::fs::read_to_string(&args.spec) {
        Ok(text) => match parse_formula(&text) {
            Ok(goal) => goal,
            Err(e) => return fail(format!("{}: {e}", args.spec.display())),
        },
        Err(e) => return fail(format!("cannot open {}: {e}", args.spec.display())),
    };

    let mut req = PlanRequest::new(scene, goal, horizon);
    req.solver = config.solver();
    if let Some(ms) = args.timeout {
        req.timeout_ms = ms;
    }

    let started = Instant::now();
    match synthesize(&req) {
        Ok(Synthesis::Plan(plan)) => {
            println!(
                "plan found at K={} in {:.2} s",
                plan.steps.len(),
                started.elapsed().as_secs_f64()
            );
            for (i, step) in plan.steps.iter().enumerate() {
                let w = &step.waypoint;
                println!(
                    "  {:>3}. {:<10} -> ({}, {}, {})",
                    i + 1,
                    step.primitive.to_string(),
                    w.x,
                    w.y,
                    w.alpha
                );
            }
            if let Some(out) = &args.out {
                if let Err(e) = std::fs::write(out, plan.to_json()) {
                    return fail(format!("cannot write {}: {e}", out.display()));
                }
                eprintln!("plan written to {}", out.display());
            }
            EXIT_OK
        }
        Ok(Synthesis::Infeasible { k_max }) => {
            eprintln!("infeasible: unsatisfiable at every trace length up to K={k_max}");
            EXIT_INFEASIBLE
        }
        Ok(Synthesis::Timeout { k, detail }) => {
            eprintln!("inconclusive at K={k}: {detail}");
            EXIT_TIMEOUT
        }
        Err(e) => fail(e),
    }
}

/// Deterministic scenario perturbation: positions jitter within a quarter
/// metre, velocity headings within 15 degrees (speeds unchanged).
fn jitter_obstacles(obstacles: &mut [MovingObstacle], seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for o in obstacles {
        o.x += rng.gen_range(-250.0..=250.0);
        o.y += rng.gen_range(-250.0..=250.0);
        let speed = (o.vx * o.vx + o.vy * o.vy).sqrt();
        if speed > 0.0 {
            let heading = o.vy.atan2(o.vx) + rng.gen_range(-0.26..=0.26);
            o.vx = speed * heading.cos();
            o.vy = speed * heading.sin();
        }
    }
}

fn write_run_outputs(
    args: &SimulateArgs,
    scene: &SceneDescription,
    rows: &[CycleRow],
    goal: (f64, f64),
) -> Result<(), String> {
    if let Some(path) = &args.csv {
        let file = File::create(path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        write_csv(BufWriter::new(file), rows)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    if let Some(path) = &args.svg {
        let file = File::create(path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        write_svg(BufWriter::new(file), scene, rows, goal)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

pub fn cmd_simulate(args: &SimulateArgs, config: &AppConfig) -> i32 {
    let scene = match read_scene(&args.scene) {
        Ok(scene) => scene,
        Err(e) => return fail(e),
    };
    let plan = match std::fs::read_to_string(&args.plan) {
        Ok(text) => match Plan::from_json(&text, scene.doors.len(), scene.objects.len()) {
            Ok(plan) => plan,
            Err(e) => return fail(format!("{}: {e}", args.plan.display())),
        },
        Err(e) => return fail(format!("cannot open {}: {e}", args.plan.display())),
    };
    let mut obstacles = match &args.obstacles {
        Some(path) => match File::open(path) {
            Ok(file) => match load_obstacles(file) {
                Ok(list) => list,
                Err(e) => return fail(format!("{}: {e}", path.display())),
            },
            Err(e) => return fail(format!("cannot open {}: {e}", path.display())),
        },
        None => Vec::new(),
    };
    if let Some(seed) = args.seed {
        jitter_obstacles(&mut obstacles, seed);
    }

    let params = config.dwa_params(scene.agent.l as f64);
    let start = &scene.robot_initial;
    let mut state = SimState::at_rest(
        start.x as f64,
        start.y as f64,
        (start.alpha as f64).to_radians(),
    );
    let mut rows: Vec<CycleRow> = Vec::new();
    let last_goal = plan
        .steps
        .last()
        .map(|s| (s.waypoint.x as f64, s.waypoint.y as f64))
        .unwrap_or((state.x, state.y));

    for (i, step) in plan.steps.iter().enumerate() {
        let wp = &step.waypoint;
        match step.primitive {
            PrimitiveId::GoTo => {
                let goal = (wp.x as f64, wp.y as f64);
                let run = match run_leg(state, goal, obstacles, &params, MAX_LEG_SECONDS) {
                    Ok(run) => run,
                    Err(e) => return fail(e),
                };
                rows.extend(run.rows);
                obstacles = run.obstacles;
                state = run.final_state;
                match run.outcome {
                    LegOutcome::Reached => {
                        eprintln!("leg {:>3} (GoTo): reached ({}, {})", i + 1, wp.x, wp.y);
                    }
                    LegOutcome::StoppedSafe { remaining } => {
                        eprintln!(
                            "leg {:>3} (GoTo): stopped safe {:.0} mm short of ({}, {})",
                            i + 1,
                            remaining,
                            wp.x,
                            wp.y
                        );
                        eprintln!(
                            "replan suggestion: restart synthesis from ({:.0}, {:.0}) with the \
                             remaining goal (receding horizon), then simulate the new plan",
                            state.x, state.y
                        );
                        if let Err(e) = write_run_outputs(args, &scene, &rows, last_goal) {
                            return fail(e);
                        }
                        return EXIT_STOPPED_SAFE;
                    }
                    LegOutcome::MonitorViolation { cycle } => {
                        eprintln!(
                            "leg {:>3} (GoTo): passive-safety monitor violated at cycle {cycle} \
                             -- this is a controller bug",
                            i + 1
                        );
                        if let Err(e) = write_run_outputs(args, &scene, &rows, last_goal) {
                            return fail(e);
                        }
                        return EXIT_MONITOR_VIOLATION;
                    }
                }
            }
            PrimitiveId::Push(_) | PrimitiveId::PickUp(_) | PrimitiveId::Leave(_) => {
                // Discrete events: snap to the planned pose, stopped.
                state.x = wp.x as f64;
                state.y = wp.y as f64;
                state.heading = (wp.alpha as f64).to_radians();
                state.v = 0.0;
                state.w = 0.0;
                eprintln!(
                    "leg {:>3} ({}): discrete event at ({}, {}, {})",
                    i + 1,
                    step.primitive,
                    wp.x,
                    wp.y,
                    wp.alpha
                );
            }
        }
    }

    if let Err(e) = write_run_outputs(args, &scene, &rows, last_goal) {
        return fail(e);
    }
    println!(
        "all {} steps executed; final position ({:.0}, {:.0}) after {:.1} s simulated",
        plan.steps.len(),
        state.x,
        state.y,
        state.t
    );
    EXIT_OK
}

pub fn cmd_bench(args: &BenchArgs, config: &AppConfig) -> i32 {
    let reps = args.reps.unwrap_or_else(|| config.bench_reps());
    let scenarios = match suite(&args.suite, reps) {
        Ok(scenarios) => scenarios,
        Err(e) => return fail(e),
    };
    let solver = config.solver();

    let jobs = args.jobs.max(1).min(scenarios.len());
    let mut indexed: Vec<(usize, BenchRow)> = Vec::with_capacity(scenarios.len());
    let result: Result<(), String> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for worker in 0..jobs {
            let solver = &solver;
            let scenarios = &scenarios;
            handles.push(scope.spawn(move || {
                let mut rows = Vec::new();
                for (i, s) in scenarios.iter().enumerate().skip(worker).step_by(jobs) {
                    let row = run_scenario(s, solver).map_err(|e| e.to_string())?;
                    eprintln!(
                        "row {:>2}/{}: env {} m, {} rooms, K={} -> {:.1} ms",
                        i + 1,
                        scenarios.len(),
                        s.env_side_m,
                        s.rooms,
                        s.k,
                        row.mean_ms
                    );
                    rows.push((i, row));
                }
                Ok::<_, String>(rows)
            }));
        }
        for handle in handles {
            match handle.join() {
                Ok(Ok(rows)) => indexed.extend(rows),
                Ok(Err(e)) => return Err(e),
                Err(_) => return Err("benchmark worker panicked".to_string()),
            }
        }
        Ok(())
    });
    if let Err(e) = result {
        return fail(e);
    }
    indexed.sort_by_key(|(i, _)| *i);
    let report = BenchReport {
        rows: indexed.into_iter().map(|(_, row)| row).collect(),
    };

    println!("{:>6} {:>6} {:>4} {:>10} {:>9}  sat", "env_m", "rooms", "K", "mean_ms", "std_ms");
    for r in &report.rows {
        println!(
            "{:>6} {:>6} {:>4} {:>10.1} {:>9.1}  {}",
            r.scenario.env_side_m,
            r.scenario.rooms,
            r.scenario.k,
            r.mean_ms,
            r.std_ms,
            if r.sat { "yes" } else { "NO (!)" }
        );
        if !r.sat {
            eprintln!(
                "warning: row (env {} m, {} rooms, K={}) was not satisfiable -- benchmark rows \
                 are expected satisfiable",
                r.scenario.env_side_m, r.scenario.rooms, r.scenario.k
            );
        }
    }
    if let Some(path) = &args.csv {
        if let Err(e) = std::fs::write(path, report.to_csv()) {
            return fail(format!("cannot write {}: {e}", path.display()));
        }
    }
    EXIT_OK
}
