//! Times one benchmark row: `bench_probe <env_m> <rooms> <K> [reps]`.

use cosmop::bench::{run_scenario, BenchScenario};
use cosmop::solver::SolverConfig;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let scenario = BenchScenario {
        env_side_m: args.get(1).and_then(|s| s.parse().ok()).unwrap_or(4),
        rooms: args.get(2).and_then(|s| s.parse().ok()).unwrap_or(9),
        k: args.get(3).and_then(|s| s.parse().ok()).unwrap_or(14),
        repetitions: args.get(4).and_then(|s| s.parse().ok()).unwrap_or(3),
    };
    println!("{scenario:?}");
    match run_scenario(&scenario, &SolverConfig::from_env()) {
        Ok(row) => println!(
            "sat={} mean={:.1} ms std={:.1} ms",
            row.sat, row.mean_ms, row.std_ms
        ),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
