//! Randomized formula and trace sampling for differential testing.
//!
//! The samples are built for oracle comparisons: every generated formula is
//! total under [`eval`](crate::logic::eval) on every generated trace (terms
//! carry no instant shifts, and the formula-level offsets are the ones
//! evaluation treats as plain `false` out of range), so two routes to the
//! same verdict can be compared with `==` and any disagreement is a bug,
//! not an artifact of partiality.

use rand::seq::SliceRandom;
use rand::Rng;

use super::ast::{con, var, Formula, RelOp, Symbol, TemporalTerm};
use super::trace::Trace;

/// Shape of the sample space.
#[derive(Clone, Debug)]
pub struct SampleSpace {
    pub bool_symbols: Vec<Symbol>,
    pub int_symbols: Vec<Symbol>,
    /// Inclusive value range for integer symbols, both in traces and in
    /// generated constants (constants range one step beyond either end so
    /// comparisons can be unsatisfiable or valid).
    pub int_lo: i64,
    pub int_hi: i64,
    /// Maximum operator nesting depth of sampled formulas.
    pub max_depth: usize,
}

impl SampleSpace {
    /// The default differential-testing space: up to three propositions,
    /// two integers over {0, 1, 2}, depth four.
    pub fn small() -> SampleSpace {
        SampleSpace {
            bool_symbols: vec!["p".into(), "q".into(), "r".into()],
            int_symbols: vec!["m".into(), "n".into()],
            int_lo: 0,
            int_hi: 2,
            max_depth: 4,
        }
    }

    pub fn with_symbols(mut self, bools: usize, ints: usize) -> SampleSpace {
        self.bool_symbols.truncate(bools);
        self.int_symbols.truncate(ints);
        self
    }
}

/// Draws one formula; `depth = 0` forces a leaf.
pub fn sample_formula(rng: &mut impl Rng, space: &SampleSpace) -> Formula {
    sample_at(rng, space, space.max_depth)
}

fn sample_at(rng: &mut impl Rng, space: &SampleSpace, depth: usize) -> Formula {
    if depth == 0 {
        return sample_leaf(rng, space);
    }
    let sub = |rng: &mut _| sample_at(rng, space, depth - 1);
    match rng.gen_range(0..13) {
        0..=2 => sample_leaf(rng, space),
        3 => sub(rng).not(),
        4 => sub(rng).and(sub(rng)),
        5 => sub(rng).or(sub(rng)),
        6 => sub(rng).implies(sub(rng)),
        7 => sub(rng).next(),
        8 => sub(rng).prev(),
        9 => sub(rng).eventually(),
        10 => sub(rng).always(),
        11 => sub(rng).until(sub(rng)),
        _ => sub(rng).since(sub(rng)),
    }
}

fn sample_leaf(rng: &mut impl Rng, space: &SampleSpace) -> Formula {
    let can_atom = !space.bool_symbols.is_empty();
    match rng.gen_range(0..6) {
        0 => Formula::tru(),
        1 => Formula::fls(),
        2 | 3 if can_atom => {
            Formula::atom(space.bool_symbols.choose(rng).unwrap().clone())
        }
        _ => {
            let op = *[RelOp::Eq, RelOp::Ne, RelOp::Lt, RelOp::Le, RelOp::Gt, RelOp::Ge]
                .choose(rng)
                .unwrap();
            Formula::rel(sample_term(rng, space, 2), op, sample_term(rng, space, 2))
        }
    }
}

/// Shift-free linear term over the space's integer symbols.
fn sample_term(rng: &mut impl Rng, space: &SampleSpace, depth: usize) -> TemporalTerm {
    let leaf = depth == 0 || rng.gen_bool(0.5);
    if leaf {
        if !space.int_symbols.is_empty() && rng.gen_bool(0.6) {
            return var(space.int_symbols.choose(rng).unwrap().clone());
        }
        return con(rng.gen_range(space.int_lo - 1..=space.int_hi + 1));
    }
    let a = sample_term(rng, space, depth - 1);
    let b = sample_term(rng, space, depth - 1);
    match rng.gen_range(0..5) {
        0 => a + b,
        1 => a - b,
        2 => a.min(b),
        3 => a.max(b),
        _ => a.scale(rng.gen_range(-2..=2)),
    }
}

/// Draws a trace of `k + 1` instants assigning every symbol of the space.
pub fn sample_trace(rng: &mut impl Rng, space: &SampleSpace, k: usize) -> Trace {
    let mut trace = Trace::new(k);
    for name in &space.bool_symbols {
        let values = (0..=k).map(|_| rng.gen_bool(0.5)).collect();
        trace
            .set_bool(name.clone(), values)
            .expect("sampled series match the trace length");
    }
    for name in &space.int_symbols {
        let values = (0..=k)
            .map(|_| rng.gen_range(space.int_lo..=space.int_hi))
            .collect();
        trace
            .set_int(name.clone(), values)
            .expect("sampled series match the trace length");
    }
    trace
}
