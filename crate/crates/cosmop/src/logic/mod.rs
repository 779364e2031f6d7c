//! Bounded linear temporal logic over integer constraint systems.
//!
//! Formulas combine propositional atoms, linear relations over
//! integer-valued [`TemporalTerm`]s, and temporal operators interpreted
//! over finite traces of `K + 1` instants. [`eval`] is the reference
//! satisfaction check; the SMT pipeline in [`crate::smt`] must agree with
//! it on every formula, which is what makes this module the oracle for
//! everything downstream.

pub mod ast;
pub mod eval;
pub mod parser;
pub mod sample;
pub mod trace;

pub use ast::{
    collect_symbols, con, var, Formula, OffsetRange, RelOp, Relation, Symbol, SymbolTable,
    TemporalTerm,
};
pub use eval::{eval, eval_term, EvalError};
pub use parser::{parse_formula, ParseError};
pub use trace::{Trace, TraceError};
