//! Solve the bundled cleanup scenario at a fixed horizon (default 24) and
//! print the synthesized plan with wall-clock timing. Needs an SMT solver on
//! the path (`z3` by default; override with COSMOP_SMT_CMD).

use std::time::Instant;

use cosmop::logic::parse_formula;
use cosmop::planner::{synthesize, Horizon, PlanRequest, Synthesis};
use cosmop::scene::load_scene;

fn main() {
    let scene = load_scene(include_str!("../../../data/cleanup_scene.json").as_bytes()).unwrap();
    let goal = parse_formula(include_str!("../../../data/cleanup_goal.txt")).unwrap();
    let k: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(24);
    let req = PlanRequest::new(scene, goal, Horizon::Fixed(k));
    let t0 = Instant::now();
    match synthesize(&req).unwrap() {
        Synthesis::Plan(plan) => {
            println!("sat at K={k} in {:?}", t0.elapsed());
            for (i, s) in plan.steps.iter().enumerate() {
                println!(
                    "{:>3}: {:<9} -> ({}, {}, {})",
                    i + 1,
                    s.primitive.to_string(),
                    s.waypoint.x,
                    s.waypoint.y,
                    s.waypoint.alpha
                );
            }
        }
        Synthesis::Infeasible { k_max } => println!("unsat up to K={k_max} in {:?}", t0.elapsed()),
        Synthesis::Timeout { k, detail } => println!("timeout at K={k}: {detail}"),
    }
}
