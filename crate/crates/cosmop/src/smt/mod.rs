//! Compilation of temporal formulas into quantifier-free linear integer
//! arithmetic, and decoding of solver models back into traces.
//!
//! Every state variable becomes one solver constant per instant
//! (`x@0 … x@K`). Formula-level next/previous become index shifts, `G`
//! becomes a conjunction over instants, and `U`, `S`, and `F` introduce a
//! fresh integer witness for the instant at which their right side holds.

pub mod encode;
pub mod term;

pub use encode::{
    decode_model, encode, encode_term, AssertionSet, DecodeError, EncodeError, EncodingContext,
};
pub use term::{eval_smt, CmpOp, Model, ModelEvalError, SmtTerm, Sort, Value};
