//! Formula-to-assertions compiler.
//!
//! A formula over a trace of length K is compiled by instantiating each
//! state variable once per instant. The compiler first pushes negations
//! inward (finite-trace negation normal form) so that `U`, `S`, and `F`
//! only occur positively; each such occurrence then gets a fresh integer
//! witness `j` constrained to the instants it may point at, with the
//! guarded conjunction `(k < j -> lhs[k]) and (k = j -> rhs[k])` over the
//! relevant range. `G` compiles to a plain conjunction, `Last[f]` to the
//! encoding of `f` at K, and formula-level `X`/`Y` to index shifts that
//! collapse to `false` past the trace ends.
//!
//! Constant subterms fold during encoding, left side first, exactly like
//! the evaluator's short-circuit order. A transition scheme such as
//! `G(X true -> step)` therefore never encodes `step` at the final
//! instant, which is what keeps its shifted terms inside the index range.

use super::term::{CmpOp, Model, SmtTerm, Sort, Value};
use crate::logic::ast::{Formula, RelOp, Symbol, TemporalTerm};
use crate::logic::trace::Trace;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("term `{term}` indexes instant {instant}, outside 0..={k}")]
    TermOutOfRange { term: String, instant: i64, k: usize },
    #[error("symbol {0} is used both as an integer and as a proposition")]
    MixedSorts(Symbol),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("model does not assign {0}")]
    Missing(String),
    #[error("model assigns {name} a value of the wrong sort")]
    WrongSort { name: String },
}

/// Declaration and naming state for one encoding pass.
pub struct EncodingContext {
    k: usize,
    declarations: Vec<(String, Sort)>,
    symbols: Vec<(Symbol, Sort)>,
    aux_counter: usize,
}

impl EncodingContext {
    pub fn new(k: usize) -> Self {
        EncodingContext {
            k,
            declarations: Vec::new(),
            symbols: Vec::new(),
            aux_counter: 0,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Solver constant name for a state variable at an instant.
    pub fn var_name(symbol: &Symbol, instant: usize) -> String {
        format!("{symbol}@{instant}")
    }

    fn sort_of(&self, symbol: &Symbol) -> Option<Sort> {
        self.symbols
            .iter()
            .find(|(s, _)| s == symbol)
            .map(|(_, sort)| *sort)
    }

    /// Register a symbol, declaring its whole array `sym@0..sym@K` the
    /// first time it is seen.
    fn touch(&mut self, symbol: &Symbol, sort: Sort) -> Result<(), EncodeError> {
        match self.sort_of(symbol) {
            Some(existing) if existing == sort => Ok(()),
            Some(_) => Err(EncodeError::MixedSorts(symbol.clone())),
            None => {
                self.symbols.push((symbol.clone(), sort));
                for i in 0..=self.k {
                    self.declarations.push((Self::var_name(symbol, i), sort));
                }
                Ok(())
            }
        }
    }

    fn int_var(&mut self, symbol: &Symbol, instant: usize) -> Result<SmtTerm, EncodeError> {
        self.touch(symbol, Sort::Int)?;
        Ok(SmtTerm::var(Self::var_name(symbol, instant)))
    }

    fn bool_var(&mut self, symbol: &Symbol, instant: usize) -> Result<SmtTerm, EncodeError> {
        self.touch(symbol, Sort::Bool)?;
        Ok(SmtTerm::var(Self::var_name(symbol, instant)))
    }

    /// Fresh integer witness for one `U`/`S`/`F` occurrence.
    fn fresh_witness(&mut self) -> SmtTerm {
        let name = format!("j!{}", self.aux_counter);
        self.aux_counter += 1;
        self.declarations.push((name.clone(), Sort::Int));
        SmtTerm::Var(name)
    }
}

/// Declarations plus assertions; satisfiable exactly when some trace of
/// length K satisfies the encoded formula at instant 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssertionSet {
    pub declarations: Vec<(String, Sort)>,
    pub assertions: Vec<SmtTerm>,
}

/// Compile `f` for the trace length fixed by `ctx`, asserting it at
/// instant 0. A top-level conjunction becomes one assertion per conjunct.
pub fn encode(f: &Formula, ctx: &mut EncodingContext) -> Result<AssertionSet, EncodeError> {
    let normalized = nnf(f, true);
    let root = encode_at(&normalized, 0, ctx)?;
    let assertions = match root {
        SmtTerm::And(parts) => parts,
        other => vec![other],
    };
    Ok(AssertionSet {
        declarations: ctx.declarations.clone(),
        assertions,
    })
}

/// Negation normal form on finite traces: negations end up only on
/// relations, atoms, and the end/start markers `!X true` / `!Y true`.
///
/// The temporal rewrites are the finite-trace identities
///
/// * `!(a U b)  =  (!b U (!a & !b)) | G !b`
/// * `!(a S b)  =  (!b S (!a & !b)) | (!b S (!b & !Y true))`
/// * `!X f      =  !X true | X !f`,   `!Y f  =  !Y true | Y !f`
/// * `!F f = G !f`, `!G f = F !f`, `!Last[f] = Last[!f]`
///
/// where the second `S` disjunct says "!b back to instant 0".
fn nnf(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::Atom(..) | Formula::Rel(_) => {
            if positive {
                f.clone()
            } else {
                f.clone().not()
            }
        }
        Formula::Not(g) => nnf(g, !positive),
        Formula::And(a, b) => {
            if positive {
                nnf(a, true).and(nnf(b, true))
            } else {
                nnf(a, false).or(nnf(b, false))
            }
        }
        Formula::Or(a, b) => {
            if positive {
                nnf(a, true).or(nnf(b, true))
            } else {
                nnf(a, false).and(nnf(b, false))
            }
        }
        Formula::Implies(a, b) => {
            if positive {
                nnf(a, false).or(nnf(b, true))
            } else {
                nnf(a, true).and(nnf(b, false))
            }
        }
        Formula::Next(g) => {
            if positive {
                nnf(g, true).next()
            } else {
                end_marker().or(nnf(g, false).next())
            }
        }
        Formula::Prev(g) => {
            if positive {
                nnf(g, true).prev()
            } else {
                start_marker().or(nnf(g, false).prev())
            }
        }
        Formula::Until(a, b) => {
            if positive {
                nnf(a, true).until(nnf(b, true))
            } else {
                let na = nnf(a, false);
                let nb = nnf(b, false);
                nb.clone()
                    .until(na.and(nb.clone()))
                    .or(nb.always())
            }
        }
        Formula::Since(a, b) => {
            if positive {
                nnf(a, true).since(nnf(b, true))
            } else {
                let na = nnf(a, false);
                let nb = nnf(b, false);
                let never = nb.clone().since(nb.clone().and(start_marker()));
                nb.clone().since(na.and(nb)).or(never)
            }
        }
        Formula::Eventually(g) => {
            if positive {
                nnf(g, true).eventually()
            } else {
                nnf(g, false).always()
            }
        }
        Formula::Always(g) => {
            if positive {
                nnf(g, true).always()
            } else {
                nnf(g, false).eventually()
            }
        }
        Formula::Last(g) => nnf(g, positive).last(),
    }
}

fn end_marker() -> Formula {
    Formula::tru().next().not()
}

fn start_marker() -> Formula {
    Formula::tru().prev().not()
}

/// Encode an NNF formula at instant `k`. Residual negations wrap pure
/// expressions only, so emitting `not` here is sound.
fn encode_at(f: &Formula, k: usize, ctx: &mut EncodingContext) -> Result<SmtTerm, EncodeError> {
    let k_max = ctx.k();
    match f {
        Formula::Atom(p, off) => {
            let i = k as i64 + off;
            if i < 0 || i > k_max as i64 {
                return Ok(SmtTerm::Bool(false));
            }
            ctx.bool_var(p, i as usize)
        }
        Formula::Rel(r) => {
            let lhs = encode_term(&r.lhs, k as i64, ctx)?;
            let rhs = encode_term(&r.rhs, k as i64, ctx)?;
            Ok(match r.op {
                RelOp::Eq => SmtTerm::cmp(CmpOp::Eq, lhs, rhs),
                RelOp::Ne => SmtTerm::not(SmtTerm::cmp(CmpOp::Eq, lhs, rhs)),
                RelOp::Lt => SmtTerm::cmp(CmpOp::Lt, lhs, rhs),
                RelOp::Le => SmtTerm::cmp(CmpOp::Le, lhs, rhs),
                RelOp::Gt => SmtTerm::cmp(CmpOp::Gt, lhs, rhs),
                RelOp::Ge => SmtTerm::cmp(CmpOp::Ge, lhs, rhs),
            })
        }
        Formula::Not(g) => Ok(SmtTerm::not(encode_at(g, k, ctx)?)),
        Formula::And(a, b) => {
            let lhs = encode_at(a, k, ctx)?;
            if lhs == SmtTerm::Bool(false) {
                return Ok(SmtTerm::Bool(false));
            }
            let rhs = encode_at(b, k, ctx)?;
            Ok(SmtTerm::and([lhs, rhs]))
        }
        Formula::Or(a, b) => {
            let lhs = encode_at(a, k, ctx)?;
            if lhs == SmtTerm::Bool(true) {
                return Ok(SmtTerm::Bool(true));
            }
            let rhs = encode_at(b, k, ctx)?;
            Ok(SmtTerm::or([lhs, rhs]))
        }
        Formula::Implies(a, b) => {
            let lhs = encode_at(a, k, ctx)?;
            if lhs == SmtTerm::Bool(false) {
                return Ok(SmtTerm::Bool(true));
            }
            let rhs = encode_at(b, k, ctx)?;
            Ok(SmtTerm::implies(lhs, rhs))
        }
        Formula::Next(g) => {
            if k == k_max {
                Ok(SmtTerm::Bool(false))
            } else {
                encode_at(g, k + 1, ctx)
            }
        }
        Formula::Prev(g) => {
            if k == 0 {
                Ok(SmtTerm::Bool(false))
            } else {
                encode_at(g, k - 1, ctx)
            }
        }
        Formula::Until(a, b) => {
            let j = ctx.fresh_witness();
            let mut parts = vec![
                SmtTerm::cmp(CmpOp::Ge, j.clone(), SmtTerm::Int(k as i64)),
                SmtTerm::cmp(CmpOp::Le, j.clone(), SmtTerm::Int(k_max as i64)),
            ];
            for i in k..=k_max {
                let before = SmtTerm::cmp(CmpOp::Lt, SmtTerm::Int(i as i64), j.clone());
                parts.push(SmtTerm::implies(before, encode_at(a, i, ctx)?));
                let at = SmtTerm::cmp(CmpOp::Eq, SmtTerm::Int(i as i64), j.clone());
                parts.push(SmtTerm::implies(at, encode_at(b, i, ctx)?));
            }
            Ok(SmtTerm::and(parts))
        }
        Formula::Since(a, b) => {
            let j = ctx.fresh_witness();
            let mut parts = vec![
                SmtTerm::cmp(CmpOp::Ge, j.clone(), SmtTerm::Int(0)),
                SmtTerm::cmp(CmpOp::Le, j.clone(), SmtTerm::Int(k as i64)),
            ];
            for i in 0..=k {
                let after = SmtTerm::cmp(CmpOp::Gt, SmtTerm::Int(i as i64), j.clone());
                parts.push(SmtTerm::implies(after, encode_at(a, i, ctx)?));
                let at = SmtTerm::cmp(CmpOp::Eq, SmtTerm::Int(i as i64), j.clone());
                parts.push(SmtTerm::implies(at, encode_at(b, i, ctx)?));
            }
            Ok(SmtTerm::and(parts))
        }
        Formula::Eventually(g) => {
            let j = ctx.fresh_witness();
            let mut parts = vec![
                SmtTerm::cmp(CmpOp::Ge, j.clone(), SmtTerm::Int(k as i64)),
                SmtTerm::cmp(CmpOp::Le, j.clone(), SmtTerm::Int(k_max as i64)),
            ];
            for i in k..=k_max {
                let at = SmtTerm::cmp(CmpOp::Eq, SmtTerm::Int(i as i64), j.clone());
                parts.push(SmtTerm::implies(at, encode_at(g, i, ctx)?));
            }
            Ok(SmtTerm::and(parts))
        }
        Formula::Always(g) => {
            let mut parts = Vec::with_capacity(k_max - k + 1);
            for i in k..=k_max {
                parts.push(encode_at(g, i, ctx)?);
            }
            Ok(SmtTerm::and(parts))
        }
        Formula::Last(g) => encode_at(g, k_max, ctx),
    }
}

/// Encode a term at instant `i`, shifting indices through `X`/`Y` and
/// lowering min/max to `ite`.
pub fn encode_term(
    t: &TemporalTerm,
    i: i64,
    ctx: &mut EncodingContext,
) -> Result<SmtTerm, EncodeError> {
    match t {
        TemporalTerm::Var(name) => {
            if i < 0 || i > ctx.k() as i64 {
                return Err(EncodeError::TermOutOfRange {
                    term: name.to_string(),
                    instant: i,
                    k: ctx.k(),
                });
            }
            ctx.int_var(name, i as usize)
        }
        TemporalTerm::Const(c) => Ok(SmtTerm::Int(*c)),
        TemporalTerm::Next(inner) => encode_term(inner, i + 1, ctx),
        TemporalTerm::Prev(inner) => encode_term(inner, i - 1, ctx),
        TemporalTerm::Scale(c, inner) => Ok(SmtTerm::mul(*c, encode_term(inner, i, ctx)?)),
        TemporalTerm::Sum(a, b) => Ok(SmtTerm::add([
            encode_term(a, i, ctx)?,
            encode_term(b, i, ctx)?,
        ])),
        TemporalTerm::Min(a, b) => {
            let a = encode_term(a, i, ctx)?;
            let b = encode_term(b, i, ctx)?;
            Ok(SmtTerm::ite(
                SmtTerm::cmp(CmpOp::Lt, a.clone(), b.clone()),
                a,
                b,
            ))
        }
        TemporalTerm::Max(a, b) => {
            let a = encode_term(a, i, ctx)?;
            let b = encode_term(b, i, ctx)?;
            Ok(SmtTerm::ite(
                SmtTerm::cmp(CmpOp::Gt, a.clone(), b.clone()),
                a,
                b,
            ))
        }
    }
}

/// Rebuild the trace from a solver model: the inverse of the array
/// naming, over every symbol the encoding touched.
pub fn decode_model(model: &Model, ctx: &EncodingContext) -> Result<Trace, DecodeError> {
    let mut trace = Trace::new(ctx.k());
    for (symbol, sort) in &ctx.symbols {
        match sort {
            Sort::Int => {
                let mut values = Vec::with_capacity(ctx.k() + 1);
                for i in 0..=ctx.k() {
                    let name = EncodingContext::var_name(symbol, i);
                    match model.get(&name) {
                        Some(Value::Int(v)) => values.push(*v),
                        Some(Value::Bool(_)) => return Err(DecodeError::WrongSort { name }),
                        None => return Err(DecodeError::Missing(name)),
                    }
                }
                trace
                    .set_int(symbol.clone(), values)
                    .expect("length matches by construction");
            }
            Sort::Bool => {
                let mut values = Vec::with_capacity(ctx.k() + 1);
                for i in 0..=ctx.k() {
                    let name = EncodingContext::var_name(symbol, i);
                    match model.get(&name) {
                        Some(Value::Bool(v)) => values.push(*v),
                        Some(Value::Int(_)) => return Err(DecodeError::WrongSort { name }),
                        None => return Err(DecodeError::Missing(name)),
                    }
                }
                trace
                    .set_bool(symbol.clone(), values)
                    .expect("length matches by construction");
            }
        }
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::ast::{con, var};
    use crate::logic::eval::eval;
    use crate::smt::term::eval_smt;

    fn assert_single(set: &AssertionSet, expected: &str) {
        assert_eq!(set.assertions.len(), 1, "{:?}", set.assertions);
        assert_eq!(set.assertions[0].to_smtlib(), expected);
    }

    #[test]
    fn last_encodes_at_final_instant() {
        let mut ctx = EncodingContext::new(3);
        let f = var("x").eq(con(5)).last();
        let set = encode(&f, &mut ctx).unwrap();
        assert_single(&set, "(= x@3 5)");
        assert_eq!(ctx.declarations.len(), 4);
    }

    #[test]
    fn always_unrolls_to_one_copy_per_instant() {
        let mut ctx = EncodingContext::new(2);
        let f = var("x").ge(con(0)).always();
        let set = encode(&f, &mut ctx).unwrap();
        let rendered: Vec<String> = set.assertions.iter().map(SmtTerm::to_smtlib).collect();
        assert_eq!(rendered, ["(>= x@0 0)", "(>= x@1 0)", "(>= x@2 0)"]);
    }

    #[test]
    fn next_shifts_term_indices() {
        let mut ctx = EncodingContext::new(3);
        let t = encode_term(&var("x").next(), 1, &mut ctx).unwrap();
        assert_eq!(t.to_smtlib(), "x@2");
    }

    #[test]
    fn max_lowers_to_ite() {
        let mut ctx = EncodingContext::new(1);
        let t = encode_term(&var("x").max(con(5)), 0, &mut ctx).unwrap();
        assert_eq!(t.to_smtlib(), "(ite (> x@0 5) x@0 5)");
    }

    #[test]
    fn difference_stays_linear() {
        let mut ctx = EncodingContext::new(1);
        let t = encode_term(&(var("x") - var("y")), 0, &mut ctx).unwrap();
        assert_eq!(t.to_smtlib(), "(+ x@0 (- y@0))");
    }

    #[test]
    fn term_out_of_range_is_an_error() {
        let mut ctx = EncodingContext::new(2);
        let f = var("x").next().eq(con(0)).always();
        let err = encode(&f, &mut ctx).unwrap_err();
        assert_eq!(
            err,
            EncodeError::TermOutOfRange {
                term: "x".into(),
                instant: 3,
                k: 2,
            }
        );
    }

    #[test]
    fn guarded_transition_scheme_encodes_totally() {
        let mut ctx = EncodingContext::new(2);
        let step = var("x").next().eq(var("x") + con(1));
        let f = Formula::tru().next().implies(step).always();
        let set = encode(&f, &mut ctx).unwrap();
        let rendered: Vec<String> = set.assertions.iter().map(SmtTerm::to_smtlib).collect();
        // Only instants 0 and 1 assert the step; at K the guard is false.
        assert_eq!(rendered, ["(= x@1 (+ x@0 1))", "(= x@2 (+ x@1 1))"]);
    }

    /// Check `encode(f)` against `eval` by brute force: enumerate every
    /// boolean trace and, for the encoding side, every witness value.
    fn exhaustively_agree(f: &Formula, k: usize) {
        let mut ctx = EncodingContext::new(k);
        let set = encode(f, &mut ctx).unwrap();
        let witnesses: Vec<String> = set
            .declarations
            .iter()
            .filter(|(name, _)| name.starts_with("j!"))
            .map(|(name, _)| name.clone())
            .collect();

        let n = k + 1;
        for bits in 0..(1u32 << (2 * n)) {
            let ps: Vec<bool> = (0..n).map(|i| bits & (1 << i) != 0).collect();
            let qs: Vec<bool> = (0..n).map(|i| bits & (1 << (n + i)) != 0).collect();
            let mut rho = Trace::new(k);
            rho.set_bool("p", ps.clone()).unwrap();
            rho.set_bool("q", qs.clone()).unwrap();
            let expected = eval(f, &rho, 0).unwrap();

            let mut model = Model::new();
            for i in 0..n {
                model.insert(format!("p@{i}"), Value::Bool(ps[i]));
                model.insert(format!("q@{i}"), Value::Bool(qs[i]));
            }
            // The encoding is satisfiable for this trace iff some witness
            // assignment makes every assertion true.
            let mut sat = false;
            let mut js = vec![0i64; witnesses.len()];
            'outer: loop {
                for (w, j) in witnesses.iter().zip(&js) {
                    model.insert(w.clone(), Value::Int(*j));
                }
                let holds = set.assertions.iter().all(|a| {
                    eval_smt(a, &model) == Ok(Value::Bool(true))
                });
                if holds {
                    sat = true;
                    break;
                }
                for slot in js.iter_mut() {
                    *slot += 1;
                    if *slot <= k as i64 {
                        continue 'outer;
                    }
                    *slot = 0;
                }
                break;
            }
            assert_eq!(
                sat, expected,
                "disagreement on {f} with p={ps:?} q={qs:?}"
            );
        }
    }

    #[test]
    fn until_agrees_with_eval_on_all_small_traces() {
        let f = Formula::atom("p").until(Formula::atom("q"));
        exhaustively_agree(&f, 2);
    }

    #[test]
    fn negated_until_agrees_with_eval_on_all_small_traces() {
        let f = Formula::atom("p").until(Formula::atom("q")).not();
        exhaustively_agree(&f, 2);
    }

    #[test]
    fn since_and_negated_since_agree_with_eval() {
        let g = Formula::atom("q").eventually().and(
            Formula::atom("p").since(Formula::atom("q")).last(),
        );
        exhaustively_agree(&g, 2);
        let neg = Formula::atom("p").since(Formula::atom("q")).last().not();
        exhaustively_agree(&neg, 2);
    }

    #[test]
    fn nested_negations_and_implications_agree() {
        let f = Formula::atom("p")
            .eventually()
            .implies(Formula::atom("q").until(Formula::atom("p")))
            .not();
        exhaustively_agree(&f, 2);
    }

    #[test]
    fn decode_inverts_the_array_naming() {
        let mut ctx = EncodingContext::new(1);
        let f = var("x").ge(con(0)).and(Formula::atom("p")).always();
        encode(&f, &mut ctx).unwrap();
        let mut model = Model::new();
        model.insert("x@0".into(), Value::Int(1));
        model.insert("x@1".into(), Value::Int(2));
        model.insert("p@0".into(), Value::Bool(true));
        model.insert("p@1".into(), Value::Bool(false));
        let trace = decode_model(&model, &ctx).unwrap();
        assert_eq!(trace.int_series(&"x".into()), Some(&[1, 2][..]));
        assert_eq!(trace.bool_series(&"p".into()), Some(&[true, false][..]));

        model.remove("x@1");
        assert_eq!(
            decode_model(&model, &ctx),
            Err(DecodeError::Missing("x@1".into()))
        );
    }

    #[test]
    fn decode_of_empty_context_is_empty_trace() {
        let mut ctx = EncodingContext::new(0);
        encode(&Formula::tru(), &mut ctx).unwrap();
        let trace = decode_model(&Model::new(), &ctx).unwrap();
        assert_eq!(trace.int_names().count(), 0);
        assert_eq!(trace.bool_names().count(), 0);
    }

    #[test]
    fn mixed_sorts_are_rejected() {
        let mut ctx = EncodingContext::new(1);
        let f = var("p").ge(con(0)).and(Formula::atom("p"));
        assert_eq!(
            encode(&f, &mut ctx).unwrap_err(),
            EncodeError::MixedSorts("p".into())
        );
    }
}
