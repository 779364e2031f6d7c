//! Integrated task and motion planning for a mobile manipulator on a plane.
//!
//! The pipeline has three stages:
//!
//! 1. **Specify.** A scene ([`scene`]) describes the workspace, obstacles,
//!    doors, and movable objects. A goal is a bounded temporal-logic formula
//!    over integer state variables ([`logic`]), and each motion primitive
//!    (go-to, push, pick-up, leave) contributes a transition constraint
//!    ([`primitives`]).
//! 2. **Synthesize.** The conjunction of initial state, transition
//!    constraints, and goal is compiled to a quantifier-free linear integer
//!    arithmetic problem ([`smt`]) and handed to an external solver
//!    ([`solver`]). A satisfying model decodes into a step-by-step plan
//!    ([`planner`]), independently re-checked against the scene geometry.
//! 3. **Execute.** Each plan step becomes a waypoint for a dynamic-window
//!    controller with a passive-safety admissibility filter and a runtime
//!    monitor ([`sim`]).
//!
//! [`rooms`] generates multi-room benchmark scenes and [`bench`] runs the
//! scaling suites over them.

pub mod bench;
pub mod logic;
pub mod planner;
pub mod primitives;
pub mod rooms;
pub mod scene;
pub mod sim;
pub mod smt;
pub mod solver;

/// Every fenced code block in the guide compiles and runs with the
/// crate's doc-tests, so the book cannot drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/temporal-logic.md")]
    struct TemporalLogic;
    #[doc = include_str!("../../../book/src/scenes-and-primitives.md")]
    struct ScenesAndPrimitives;
    #[doc = include_str!("../../../book/src/smt-encoding.md")]
    struct SmtEncoding;
    #[doc = include_str!("../../../book/src/planning.md")]
    struct Planning;
    #[doc = include_str!("../../../book/src/simulation.md")]
    struct Simulation;
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    struct Benchmarks;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
