//! Solver-level terms: a small SMT-LIB fragment (core booleans plus
//! linear integer arithmetic with `ite`), with a printer and an
//! independent evaluator used to audit solver models.

use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sort {
    Int,
    Bool,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Int => "Int",
            Sort::Bool => "Bool",
        })
    }
}

/// Concrete solver value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Bool(bool),
}

/// Total assignment of solver constants, as parsed from `(get-model)`.
pub type Model = BTreeMap<String, Value>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            CmpOp::Eq => lhs == rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }

    fn smtlib(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// Term of the QF_LIA fragment the encoder emits.
///
/// The smart constructors fold constants and flatten nested `and`/`or`,
/// which keeps emitted scripts small and lets the encoder short-circuit
/// guards whose truth is fixed by the instant (for example `X true` at
/// the final instant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmtTerm {
    Int(i64),
    Bool(bool),
    Var(String),
    Not(Box<SmtTerm>),
    And(Vec<SmtTerm>),
    Or(Vec<SmtTerm>),
    Implies(Box<SmtTerm>, Box<SmtTerm>),
    Cmp(CmpOp, Box<SmtTerm>, Box<SmtTerm>),
    Add(Vec<SmtTerm>),
    Mul(i64, Box<SmtTerm>),
    Neg(Box<SmtTerm>),
    Ite(Box<SmtTerm>, Box<SmtTerm>, Box<SmtTerm>),
}

impl SmtTerm {
    pub fn var(name: impl Into<String>) -> SmtTerm {
        SmtTerm::Var(name.into())
    }

    pub fn not(t: SmtTerm) -> SmtTerm {
        match t {
            SmtTerm::Bool(b) => SmtTerm::Bool(!b),
            SmtTerm::Not(inner) => *inner,
            other => SmtTerm::Not(Box::new(other)),
        }
    }

    /// Conjunction with `true` dropped, `false` dominant, and nested
    /// conjunctions flattened.
    pub fn and(parts: impl IntoIterator<Item = SmtTerm>) -> SmtTerm {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                SmtTerm::Bool(true) => {}
                SmtTerm::Bool(false) => return SmtTerm::Bool(false),
                SmtTerm::And(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => SmtTerm::Bool(true),
            1 => flat.pop().expect("len checked"),
            _ => SmtTerm::And(flat),
        }
    }

    pub fn or(parts: impl IntoIterator<Item = SmtTerm>) -> SmtTerm {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                SmtTerm::Bool(false) => {}
                SmtTerm::Bool(true) => return SmtTerm::Bool(true),
                SmtTerm::Or(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => SmtTerm::Bool(false),
            1 => flat.pop().expect("len checked"),
            _ => SmtTerm::Or(flat),
        }
    }

    pub fn implies(lhs: SmtTerm, rhs: SmtTerm) -> SmtTerm {
        match (lhs, rhs) {
            (SmtTerm::Bool(false), _) => SmtTerm::Bool(true),
            (SmtTerm::Bool(true), rhs) => rhs,
            (_, SmtTerm::Bool(true)) => SmtTerm::Bool(true),
            (lhs, SmtTerm::Bool(false)) => SmtTerm::not(lhs),
            (lhs, rhs) => SmtTerm::Implies(Box::new(lhs), Box::new(rhs)),
        }
    }

    pub fn cmp(op: CmpOp, lhs: SmtTerm, rhs: SmtTerm) -> SmtTerm {
        if let (SmtTerm::Int(a), SmtTerm::Int(b)) = (&lhs, &rhs) {
            return SmtTerm::Bool(op.holds(*a, *b));
        }
        SmtTerm::Cmp(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn add(parts: impl IntoIterator<Item = SmtTerm>) -> SmtTerm {
        let mut flat = Vec::new();
        let mut constant = 0i64;
        for p in parts {
            match p {
                SmtTerm::Int(c) => constant += c,
                SmtTerm::Add(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if constant != 0 || flat.is_empty() {
            flat.push(SmtTerm::Int(constant));
        }
        match flat.len() {
            1 => flat.pop().expect("len checked"),
            _ => SmtTerm::Add(flat),
        }
    }

    pub fn mul(c: i64, t: SmtTerm) -> SmtTerm {
        match (c, t) {
            (_, SmtTerm::Int(v)) => SmtTerm::Int(c * v),
            (0, _) => SmtTerm::Int(0),
            (1, t) => t,
            (-1, t) => SmtTerm::Neg(Box::new(t)),
            (c, t) => SmtTerm::Mul(c, Box::new(t)),
        }
    }

    pub fn ite(cond: SmtTerm, then: SmtTerm, els: SmtTerm) -> SmtTerm {
        match cond {
            SmtTerm::Bool(true) => then,
            SmtTerm::Bool(false) => els,
            cond => SmtTerm::Ite(Box::new(cond), Box::new(then), Box::new(els)),
        }
    }

    /// Render as an SMT-LIB2 s-expression.
    pub fn to_smtlib(&self) -> String {
        let mut s = String::new();
        self.write_smtlib(&mut s);
        s
    }

    fn write_smtlib(&self, out: &mut String) {
        match self {
            SmtTerm::Int(n) => {
                if *n < 0 {
                    out.push_str(&format!("(- {})", n.unsigned_abs()));
                } else {
                    out.push_str(&n.to_string());
                }
            }
            SmtTerm::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            SmtTerm::Var(name) => out.push_str(&quote_symbol(name)),
            SmtTerm::Not(t) => {
                out.push_str("(not ");
                t.write_smtlib(out);
                out.push(')');
            }
            SmtTerm::And(parts) => write_app(out, "and", parts),
            SmtTerm::Or(parts) => write_app(out, "or", parts),
            SmtTerm::Implies(a, b) => {
                out.push_str("(=> ");
                a.write_smtlib(out);
                out.push(' ');
                b.write_smtlib(out);
                out.push(')');
            }
            SmtTerm::Cmp(op, a, b) => {
                out.push('(');
                out.push_str(op.smtlib());
                out.push(' ');
                a.write_smtlib(out);
                out.push(' ');
                b.write_smtlib(out);
                out.push(')');
            }
            SmtTerm::Add(parts) => write_app(out, "+", parts),
            SmtTerm::Mul(c, t) => {
                out.push_str("(* ");
                SmtTerm::Int(*c).write_smtlib(out);
                out.push(' ');
                t.write_smtlib(out);
                out.push(')');
            }
            SmtTerm::Neg(t) => {
                out.push_str("(- ");
                t.write_smtlib(out);
                out.push(')');
            }
            SmtTerm::Ite(c, a, b) => {
                out.push_str("(ite ");
                c.write_smtlib(out);
                out.push(' ');
                a.write_smtlib(out);
                out.push(' ');
                b.write_smtlib(out);
                out.push(')');
            }
        }
    }
}

fn write_app(out: &mut String, head: &str, parts: &[SmtTerm]) {
    out.push('(');
    out.push_str(head);
    for p in parts {
        out.push(' ');
        p.write_smtlib(out);
    }
    out.push(')');
}

/// Quote a symbol with `|...|` when it falls outside SMT-LIB's simple
/// symbol syntax (our variable names contain `[` and `]`).
pub fn quote_symbol(name: &str) -> String {
    let simple = !name.is_empty()
        && !name.starts_with(|c: char| c.is_ascii_digit())
        && name.chars().all(|c| {
            c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c)
        });
    if simple {
        name.to_owned()
    } else {
        assert!(
            !name.contains('|') && !name.contains('\\'),
            "symbol {name:?} cannot be quoted"
        );
        format!("|{name}|")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelEvalError {
    #[error("model does not assign {0}")]
    Unassigned(String),
    #[error("expected {expected} value in {context}")]
    SortMismatch {
        expected: Sort,
        context: &'static str,
    },
}

fn as_int(v: Value, context: &'static str) -> Result<i64, ModelEvalError> {
    match v {
        Value::Int(n) => Ok(n),
        Value::Bool(_) => Err(ModelEvalError::SortMismatch {
            expected: Sort::Int,
            context,
        }),
    }
}

fn as_bool(v: Value, context: &'static str) -> Result<bool, ModelEvalError> {
    match v {
        Value::Bool(b) => Ok(b),
        Value::Int(_) => Err(ModelEvalError::SortMismatch {
            expected: Sort::Bool,
            context,
        }),
    }
}

/// Evaluate a term under a total assignment. This is the audit path for
/// solver models: it shares no code with any SMT solver.
pub fn eval_smt(term: &SmtTerm, model: &Model) -> Result<Value, ModelEvalError> {
    match term {
        SmtTerm::Int(n) => Ok(Value::Int(*n)),
        SmtTerm::Bool(b) => Ok(Value::Bool(*b)),
        SmtTerm::Var(name) => model
            .get(name)
            .copied()
            .ok_or_else(|| ModelEvalError::Unassigned(name.clone())),
        SmtTerm::Not(t) => Ok(Value::Bool(!as_bool(eval_smt(t, model)?, "not")?)),
        SmtTerm::And(parts) => {
            let mut acc = true;
            for p in parts {
                acc &= as_bool(eval_smt(p, model)?, "and")?;
            }
            Ok(Value::Bool(acc))
        }
        SmtTerm::Or(parts) => {
            let mut acc = false;
            for p in parts {
                acc |= as_bool(eval_smt(p, model)?, "or")?;
            }
            Ok(Value::Bool(acc))
        }
        SmtTerm::Implies(a, b) => {
            let a = as_bool(eval_smt(a, model)?, "=>")?;
            let b = as_bool(eval_smt(b, model)?, "=>")?;
            Ok(Value::Bool(!a || b))
        }
        SmtTerm::Cmp(op, a, b) => {
            let a = as_int(eval_smt(a, model)?, "comparison")?;
            let b = as_int(eval_smt(b, model)?, "comparison")?;
            Ok(Value::Bool(op.holds(a, b)))
        }
        SmtTerm::Add(parts) => {
            let mut acc = 0i64;
            for p in parts {
                acc += as_int(eval_smt(p, model)?, "+")?;
            }
            Ok(Value::Int(acc))
        }
        SmtTerm::Mul(c, t) => Ok(Value::Int(c * as_int(eval_smt(t, model)?, "*")?)),
        SmtTerm::Neg(t) => Ok(Value::Int(-as_int(eval_smt(t, model)?, "-")?)),
        SmtTerm::Ite(c, a, b) => {
            if as_bool(eval_smt(c, model)?, "ite")? {
                eval_smt(a, model)
            } else {
                eval_smt(b, model)
            }
        }
    }
}
