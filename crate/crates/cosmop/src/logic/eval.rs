//! Reference satisfaction check over finite traces.
//!
//! This evaluator is deliberately direct: each operator follows its
//! defining clause, with `Until` searching forward to K and `Since`
//! searching back to 0. The SMT encoding is tested against it, never the
//! other way around.

use super::ast::{Formula, Symbol, TemporalTerm};
use super::trace::Trace;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    /// A term shifted a variable outside the trace. Unlike formula-level
    /// next/previous, which are simply false past the ends, a term has no
    /// value there, so this is an error rather than a default.
    #[error("term index {instant} for {name} escapes instants 0..={k}")]
    TermOutOfRange { name: Symbol, instant: i64, k: usize },
    #[error("unknown integer variable {0}")]
    UnknownIntVar(Symbol),
    #[error("unknown proposition {0}")]
    UnknownProp(Symbol),
}

/// Value of term `t` at instant `i` of `rho`.
///
/// `i` is signed because nested `Y` shifts may push intermediate indices
/// below zero; any variable actually read at such an index is an error.
pub fn eval_term(t: &TemporalTerm, rho: &Trace, i: i64) -> Result<i64, EvalError> {
    match t {
        TemporalTerm::Var(name) => {
            if i < 0 || i > rho.k() as i64 {
                return Err(EvalError::TermOutOfRange {
                    name: name.clone(),
                    instant: i,
                    k: rho.k(),
                });
            }
            rho.int(name, i as usize)
                .ok_or_else(|| EvalError::UnknownIntVar(name.clone()))
        }
        TemporalTerm::Const(c) => Ok(*c),
        TemporalTerm::Next(inner) => eval_term(inner, rho, i + 1),
        TemporalTerm::Prev(inner) => eval_term(inner, rho, i - 1),
        TemporalTerm::Scale(c, inner) => Ok(c * eval_term(inner, rho, i)?),
        TemporalTerm::Sum(a, b) => Ok(eval_term(a, rho, i)? + eval_term(b, rho, i)?),
        TemporalTerm::Min(a, b) => Ok(eval_term(a, rho, i)?.min(eval_term(b, rho, i)?)),
        TemporalTerm::Max(a, b) => Ok(eval_term(a, rho, i)?.max(eval_term(b, rho, i)?)),
    }
}

/// Does `rho, k ⊨ f`?
///
/// Finite-trace semantics with strong next: a formula-level `X` at the
/// last instant is false, and a formula-level `Y` at instant 0 is false.
/// Propositional atoms read outside the trace are false for the same
/// reason. Connectives evaluate left to right and short-circuit, so a
/// guard like `X true -> f` never evaluates `f` at the final instant;
/// constraint builders rely on this to keep term indices in range.
pub fn eval(f: &Formula, rho: &Trace, k: usize) -> Result<bool, EvalError> {
    debug_assert!(k <= rho.k(), "instant {k} beyond trace end {}", rho.k());
    match f {
        Formula::Atom(p, off) => {
            if !rho.has_bool(p) {
                return Err(EvalError::UnknownProp(p.clone()));
            }
            let i = k as i64 + off;
            if i < 0 || i > rho.k() as i64 {
                return Ok(false);
            }
            Ok(rho.bool(p, i as usize).expect("index checked above"))
        }
        Formula::Rel(r) => {
            let lhs = eval_term(&r.lhs, rho, k as i64)?;
            let rhs = eval_term(&r.rhs, rho, k as i64)?;
            Ok(r.op.holds(lhs, rhs))
        }
        Formula::Not(g) => Ok(!eval(g, rho, k)?),
        Formula::And(a, b) => {
            if !eval(a, rho, k)? {
                return Ok(false);
            }
            eval(b, rho, k)
        }
        Formula::Or(a, b) => {
            if eval(a, rho, k)? {
                return Ok(true);
            }
            eval(b, rho, k)
        }
        Formula::Implies(a, b) => {
            if !eval(a, rho, k)? {
                return Ok(true);
            }
            eval(b, rho, k)
        }
        Formula::Next(g) => {
            if k == rho.k() {
                return Ok(false);
            }
            eval(g, rho, k + 1)
        }
        Formula::Prev(g) => {
            if k == 0 {
                return Ok(false);
            }
            eval(g, rho, k - 1)
        }
        Formula::Until(a, b) => {
            // Exists i in [k, K] with b at i and a at every j in [k, i).
            for i in k..=rho.k() {
                if eval(b, rho, i)? {
                    return Ok(true);
                }
                if !eval(a, rho, i)? {
                    return Ok(false);
                }
            }
            Ok(false)
        }
        Formula::Since(a, b) => {
            // Exists i in [0, k] with b at i and a at every j in (i, k].
            for i in (0..=k).rev() {
                if eval(b, rho, i)? {
                    return Ok(true);
                }
                if !eval(a, rho, i)? {
                    return Ok(false);
                }
            }
            Ok(false)
        }
        Formula::Eventually(g) => {
            for i in k..=rho.k() {
                if eval(g, rho, i)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Always(g) => {
            for i in k..=rho.k() {
                if !eval(g, rho, i)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        // F(!X true & f): the conjunction can only fire at instant K, so
        // this is exactly f at K, with identical error behaviour because
        // the end-of-trace marker never raises and is false before K.
        Formula::Last(g) => eval(g, rho, rho.k()),
    }
}
