//! Formula and term representation.
//!
//! Terms are linear integer expressions whose variables may be shifted to
//! neighbouring instants with `X` (next) and `Y` (previous). Formulas add
//! propositional structure and the temporal operators `U`, `S`, `G`, `F`,
//! and `Last`. `Or`, `Implies`, `Eventually`, `Always`, and `Last` are
//! first-class nodes even though they are definable abbreviations;
//! [`Formula::normalize`] rewrites them away and evaluation must agree on
//! both forms.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Name of an integer variable or proposition.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(name: impl Into<String>) -> Self {
        Symbol(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol(s.to_owned())
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(s)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self.0)
    }
}

/// Linear integer expression with temporal shifts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TemporalTerm {
    Var(Symbol),
    Const(i64),
    /// Value of the inner term one instant later.
    Next(Box<TemporalTerm>),
    /// Value of the inner term one instant earlier.
    Prev(Box<TemporalTerm>),
    /// Scalar multiple; keeps relations linear by construction.
    Scale(i64, Box<TemporalTerm>),
    Sum(Box<TemporalTerm>, Box<TemporalTerm>),
    Min(Box<TemporalTerm>, Box<TemporalTerm>),
    Max(Box<TemporalTerm>, Box<TemporalTerm>),
}

/// Shorthand for an integer constant term.
pub fn con(c: i64) -> TemporalTerm {
    TemporalTerm::Const(c)
}

/// Shorthand for an integer variable term.
pub fn var(name: impl Into<Symbol>) -> TemporalTerm {
    TemporalTerm::Var(name.into())
}

impl TemporalTerm {
    pub fn next(self) -> TemporalTerm {
        TemporalTerm::Next(Box::new(self))
    }

    pub fn prev(self) -> TemporalTerm {
        TemporalTerm::Prev(Box::new(self))
    }

    pub fn scale(self, c: i64) -> TemporalTerm {
        TemporalTerm::Scale(c, Box::new(self))
    }

    pub fn min(self, other: TemporalTerm) -> TemporalTerm {
        TemporalTerm::Min(Box::new(self), Box::new(other))
    }

    pub fn max(self, other: TemporalTerm) -> TemporalTerm {
        TemporalTerm::Max(Box::new(self), Box::new(other))
    }

    pub fn eq(self, rhs: TemporalTerm) -> Formula {
        Formula::rel(self, RelOp::Eq, rhs)
    }

    pub fn ne(self, rhs: TemporalTerm) -> Formula {
        Formula::rel(self, RelOp::Ne, rhs)
    }

    pub fn lt(self, rhs: TemporalTerm) -> Formula {
        Formula::rel(self, RelOp::Lt, rhs)
    }

    pub fn le(self, rhs: TemporalTerm) -> Formula {
        Formula::rel(self, RelOp::Le, rhs)
    }

    pub fn gt(self, rhs: TemporalTerm) -> Formula {
        Formula::rel(self, RelOp::Gt, rhs)
    }

    pub fn ge(self, rhs: TemporalTerm) -> Formula {
        Formula::rel(self, RelOp::Ge, rhs)
    }
}

impl std::ops::Add for TemporalTerm {
    type Output = TemporalTerm;

    fn add(self, rhs: TemporalTerm) -> TemporalTerm {
        TemporalTerm::Sum(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Sub for TemporalTerm {
    type Output = TemporalTerm;

    fn sub(self, rhs: TemporalTerm) -> TemporalTerm {
        let negated = match rhs {
            TemporalTerm::Const(c) => TemporalTerm::Const(-c),
            other => TemporalTerm::Scale(-1, Box::new(other)),
        };
        TemporalTerm::Sum(Box::new(self), Box::new(negated))
    }
}

/// Comparison operator of a linear relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl RelOp {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            RelOp::Eq => lhs == rhs,
            RelOp::Ne => lhs != rhs,
            RelOp::Lt => lhs < rhs,
            RelOp::Le => lhs <= rhs,
            RelOp::Gt => lhs > rhs,
            RelOp::Ge => lhs >= rhs,
        }
    }
}

impl fmt::Display for RelOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RelOp::Eq => "=",
            RelOp::Ne => "!=",
            RelOp::Lt => "<",
            RelOp::Le => "<=",
            RelOp::Gt => ">",
            RelOp::Ge => ">=",
        };
        f.write_str(s)
    }
}

/// Linear (in)equality between two temporal terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub lhs: TemporalTerm,
    pub op: RelOp,
    pub rhs: TemporalTerm,
}

/// Temporal formula over propositions and linear relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    /// Proposition read `offset` instants away from the evaluation instant.
    /// `Atom(p, 1)` and `Next(Atom(p, 0))` are semantically identical; the
    /// offset form exists so constraint builders can address neighbouring
    /// instants without stacking operator nodes.
    Atom(Symbol, i64),
    Rel(Relation),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Prev(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Since(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
    /// Inner formula holds at the final instant K.
    Last(Box<Formula>),
}

impl Formula {
    /// Canonical tautology, `0 = 0`. The grammar has no boolean literals
    /// in its core, so `true` is this relation.
    pub fn tru() -> Formula {
        con(0).eq(con(0))
    }

    /// Canonical contradiction, `0 = 1`.
    pub fn fls() -> Formula {
        con(0).eq(con(1))
    }

    pub fn atom(name: impl Into<Symbol>) -> Formula {
        Formula::Atom(name.into(), 0)
    }

    pub fn atom_at(name: impl Into<Symbol>, offset: i64) -> Formula {
        Formula::Atom(name.into(), offset)
    }

    pub fn rel(lhs: TemporalTerm, op: RelOp, rhs: TemporalTerm) -> Formula {
        Formula::Rel(Relation { lhs, op, rhs })
    }

    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn next(self) -> Formula {
        Formula::Next(Box::new(self))
    }

    pub fn prev(self) -> Formula {
        Formula::Prev(Box::new(self))
    }

    pub fn until(self, rhs: Formula) -> Formula {
        Formula::Until(Box::new(self), Box::new(rhs))
    }

    pub fn since(self, rhs: Formula) -> Formula {
        Formula::Since(Box::new(self), Box::new(rhs))
    }

    pub fn eventually(self) -> Formula {
        Formula::Eventually(Box::new(self))
    }

    pub fn always(self) -> Formula {
        Formula::Always(Box::new(self))
    }

    pub fn last(self) -> Formula {
        Formula::Last(Box::new(self))
    }

    /// Conjunction of all formulas, `true` when empty.
    pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = parts.into_iter();
        match it.next() {
            None => Formula::tru(),
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Disjunction of all formulas, `false` when empty.
    pub fn or_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = parts.into_iter();
        match it.next() {
            None => Formula::fls(),
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// Rewrite abbreviation nodes into the core grammar
    /// `{Atom, Rel, Not, And, Next, Prev, Until, Since}`:
    ///
    /// * `a | b`        becomes `!(!a & !b)`
    /// * `a -> b`       becomes `!(a & !b)`
    /// * `F f`          becomes `true U f`
    /// * `G f`          becomes `!(true U !f)`
    /// * `Last[f]`      becomes `true U (!X true & f)`
    ///
    /// Evaluation agrees with the unnormalized formula on every trace,
    /// including which side of a connective raises a range error first.
    pub fn normalize(&self) -> Formula {
        match self {
            Formula::Atom(p, off) => Formula::Atom(p.clone(), *off),
            Formula::Rel(r) => Formula::Rel(r.clone()),
            Formula::Not(f) => f.normalize().not(),
            Formula::And(a, b) => a.normalize().and(b.normalize()),
            Formula::Or(a, b) => a.normalize().not().and(b.normalize().not()).not(),
            Formula::Implies(a, b) => a.normalize().and(b.normalize().not()).not(),
            Formula::Next(f) => f.normalize().next(),
            Formula::Prev(f) => f.normalize().prev(),
            Formula::Until(a, b) => a.normalize().until(b.normalize()),
            Formula::Since(a, b) => a.normalize().since(b.normalize()),
            Formula::Eventually(f) => Formula::tru().until(f.normalize()),
            Formula::Always(f) => Formula::tru().until(f.normalize().not()).not(),
            Formula::Last(f) => {
                let end = Formula::tru().next().not();
                Formula::tru().until(end.and(f.normalize()))
            }
        }
    }
}

/// Extreme temporal shifts a symbol is read at, relative to the instant a
/// formula is evaluated at. Always spans 0 so that the declaration window
/// of an assertion includes the assertion instant itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OffsetRange {
    pub min: i64,
    pub max: i64,
}

impl OffsetRange {
    fn record(&mut self, offset: i64) {
        self.min = self.min.min(offset);
        self.max = self.max.max(offset);
    }
}

impl Default for OffsetRange {
    fn default() -> Self {
        OffsetRange { min: 0, max: 0 }
    }
}

/// Symbols of a formula split by sort, each with its [`OffsetRange`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    pub int_vars: BTreeMap<Symbol, OffsetRange>,
    pub props: BTreeMap<Symbol, OffsetRange>,
}

impl SymbolTable {
    fn record_int(&mut self, name: &Symbol, offset: i64) {
        self.int_vars.entry(name.clone()).or_default().record(offset);
    }

    fn record_prop(&mut self, name: &Symbol, offset: i64) {
        self.props.entry(name.clone()).or_default().record(offset);
    }
}

/// Every symbol of `f` with the net `X`/`Y` shifts it is read at.
///
/// Shifts accumulate through term-level and formula-level next/previous
/// operators. `U`, `S`, `G`, `F`, and `Last` range over trace instants
/// rather than shifting indices, so they pass the current shift through
/// unchanged.
pub fn collect_symbols(f: &Formula) -> SymbolTable {
    let mut table = SymbolTable::default();
    walk_formula(f, 0, &mut table);
    table
}

fn walk_formula(f: &Formula, shift: i64, table: &mut SymbolTable) {
    match f {
        Formula::Atom(p, off) => table.record_prop(p, shift + off),
        Formula::Rel(r) => {
            walk_term(&r.lhs, shift, table);
            walk_term(&r.rhs, shift, table);
        }
        Formula::Not(g) | Formula::Eventually(g) | Formula::Always(g) | Formula::Last(g) => {
            walk_formula(g, shift, table)
        }
        Formula::Next(g) => walk_formula(g, shift + 1, table),
        Formula::Prev(g) => walk_formula(g, shift - 1, table),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Until(a, b)
        | Formula::Since(a, b) => {
            walk_formula(a, shift, table);
            walk_formula(b, shift, table);
        }
    }
}

fn walk_term(t: &TemporalTerm, shift: i64, table: &mut SymbolTable) {
    match t {
        TemporalTerm::Var(name) => table.record_int(name, shift),
        TemporalTerm::Const(_) => {}
        TemporalTerm::Next(inner) => walk_term(inner, shift + 1, table),
        TemporalTerm::Prev(inner) => walk_term(inner, shift - 1, table),
        TemporalTerm::Scale(_, inner) => walk_term(inner, shift, table),
        TemporalTerm::Sum(a, b) | TemporalTerm::Min(a, b) | TemporalTerm::Max(a, b) => {
            walk_term(a, shift, table);
            walk_term(b, shift, table);
        }
    }
}

// Precedence levels used by the printer. Matches the parser: `S` binds
// loosest, then `U`, `->`, `|`, `&`, the prefix operators, and atoms.
fn formula_prec(f: &Formula) -> u8 {
    match f {
        Formula::Since(..) => 0,
        Formula::Until(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(_) | Formula::Next(_) | Formula::Prev(_) => 5,
        Formula::Atom(..)
        | Formula::Rel(_)
        | Formula::Eventually(_)
        | Formula::Always(_)
        | Formula::Last(_) => 6,
    }
}

fn fmt_formula(f: &Formula, min_prec: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = formula_prec(f);
    if prec < min_prec {
        out.write_str("(")?;
        fmt_formula(f, 0, out)?;
        return out.write_str(")");
    }
    match f {
        Formula::Atom(p, 0) => write!(out, "{p}"),
        // Offsets have no direct surface form; print the equivalent
        // operator nesting.
        Formula::Atom(p, off) => {
            let (op, n) = if *off > 0 { ("X ", *off) } else { ("Y ", -*off) };
            for _ in 0..n {
                out.write_str(op)?;
            }
            write!(out, "{p}")
        }
        Formula::Rel(r) => {
            if *f == Formula::tru() {
                return out.write_str("true");
            }
            if *f == Formula::fls() {
                return out.write_str("false");
            }
            write!(out, "{} {} {}", r.lhs, r.op, r.rhs)
        }
        Formula::Not(g) => {
            out.write_str("!")?;
            fmt_formula(g, 5, out)
        }
        Formula::Next(g) => {
            out.write_str("X ")?;
            fmt_formula(g, 5, out)
        }
        Formula::Prev(g) => {
            out.write_str("Y ")?;
            fmt_formula(g, 5, out)
        }
        Formula::And(a, b) => {
            fmt_formula(a, 4, out)?;
            out.write_str(" & ")?;
            fmt_formula(b, 5, out)
        }
        Formula::Or(a, b) => {
            fmt_formula(a, 3, out)?;
            out.write_str(" | ")?;
            fmt_formula(b, 4, out)
        }
        Formula::Implies(a, b) => {
            fmt_formula(a, 3, out)?;
            out.write_str(" -> ")?;
            fmt_formula(b, 2, out)
        }
        Formula::Until(a, b) => {
            fmt_formula(a, 2, out)?;
            out.write_str(" U ")?;
            fmt_formula(b, 1, out)
        }
        Formula::Since(a, b) => {
            fmt_formula(a, 1, out)?;
            out.write_str(" S ")?;
            fmt_formula(b, 0, out)
        }
        Formula::Eventually(g) => {
            out.write_str("F(")?;
            fmt_formula(g, 0, out)?;
            out.write_str(")")
        }
        Formula::Always(g) => {
            out.write_str("G(")?;
            fmt_formula(g, 0, out)?;
            out.write_str(")")
        }
        Formula::Last(g) => {
            out.write_str("Last[")?;
            fmt_formula(g, 0, out)?;
            out.write_str("]")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, 0, f)
    }
}

// Term precedence: sums bind loosest, then scalar products, then leaves
// and function forms.
fn term_prec(t: &TemporalTerm) -> u8 {
    match t {
        TemporalTerm::Sum(..) => 0,
        TemporalTerm::Scale(..) => 1,
        _ => 2,
    }
}

fn fmt_term(t: &TemporalTerm, min_prec: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = term_prec(t);
    if prec < min_prec {
        out.write_str("(")?;
        fmt_term(t, 0, out)?;
        return out.write_str(")");
    }
    match t {
        TemporalTerm::Var(name) => write!(out, "{name}"),
        TemporalTerm::Const(c) => write!(out, "{c}"),
        TemporalTerm::Next(inner) => {
            out.write_str("X(")?;
            fmt_term(inner, 0, out)?;
            out.write_str(")")
        }
        TemporalTerm::Prev(inner) => {
            out.write_str("Y(")?;
            fmt_term(inner, 0, out)?;
            out.write_str(")")
        }
        TemporalTerm::Scale(-1, inner) => {
            out.write_str("-")?;
            fmt_term(inner, 2, out)
        }
        TemporalTerm::Scale(c, inner) => {
            write!(out, "{c} * ")?;
            fmt_term(inner, 2, out)
        }
        TemporalTerm::Sum(a, b) => {
            fmt_term(a, 0, out)?;
            // Subtraction is stored as a sum with a negated right side;
            // print it back as subtraction.
            match b.as_ref() {
                TemporalTerm::Const(c) if *c < 0 => {
                    write!(out, " - {}", -c)
                }
                TemporalTerm::Scale(-1, inner) => {
                    out.write_str(" - ")?;
                    fmt_term(inner, 2, out)
                }
                other => {
                    out.write_str(" + ")?;
                    fmt_term(other, 1, out)
                }
            }
        }
        TemporalTerm::Min(a, b) => {
            out.write_str("min(")?;
            fmt_term(a, 0, out)?;
            out.write_str(", ")?;
            fmt_term(b, 0, out)?;
            out.write_str(")")
        }
        TemporalTerm::Max(a, b) => {
            out.write_str("max(")?;
            fmt_term(a, 0, out)?;
            out.write_str(", ")?;
            fmt_term(b, 0, out)?;
            out.write_str(")")
        }
    }
}

impl fmt::Display for TemporalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collect_symbols_single_shift() {
        let f = var("x").next().eq(var("x"));
        let table = collect_symbols(&f);
        assert_eq!(
            table.int_vars.get(&Symbol::from("x")),
            Some(&OffsetRange { min: 0, max: 1 })
        );
        assert!(table.props.is_empty());
    }

    #[test]
    fn collect_symbols_plain_atom_under_always() {
        let f = Formula::atom("p").always();
        let table = collect_symbols(&f);
        assert_eq!(
            table.props.get(&Symbol::from("p")),
            Some(&OffsetRange { min: 0, max: 0 })
        );
    }

    #[test]
    fn collect_symbols_nested_prev_spans_zero() {
        let f = var("y").prev().prev().lt(con(0));
        let table = collect_symbols(&f);
        assert_eq!(
            table.int_vars.get(&Symbol::from("y")),
            Some(&OffsetRange { min: -2, max: 0 })
        );
    }

    #[test]
    fn collect_symbols_formula_shift_combines_with_term_shift() {
        // X(p & Y(x) = 0): p at +1, x at 0.
        let f = Formula::atom("p").and(var("x").prev().eq(con(0))).next();
        let table = collect_symbols(&f);
        assert_eq!(
            table.props.get(&Symbol::from("p")),
            Some(&OffsetRange { min: 0, max: 1 })
        );
        assert_eq!(
            table.int_vars.get(&Symbol::from("x")),
            Some(&OffsetRange { min: 0, max: 0 })
        );
    }

    #[test]
    fn normalize_eliminates_abbreviations() {
        fn core_only(f: &Formula) -> bool {
            match f {
                Formula::Atom(..) | Formula::Rel(_) => true,
                Formula::Not(g) | Formula::Next(g) | Formula::Prev(g) => core_only(g),
                Formula::And(a, b) | Formula::Until(a, b) | Formula::Since(a, b) => {
                    core_only(a) && core_only(b)
                }
                _ => false,
            }
        }
        let f = Formula::atom("p")
            .or(Formula::atom("q"))
            .implies(var("x").ge(con(3)).eventually())
            .and(Formula::atom("p").always().last());
        assert!(core_only(&f.normalize()));
    }

    #[test]
    fn display_uses_minimal_parentheses() {
        let f = Formula::atom("p")
            .and(Formula::atom("q").or(Formula::atom("r")))
            .until(Formula::atom("s").not());
        assert_eq!(f.to_string(), "p & (q | r) U !s");
    }

    #[test]
    fn display_canonical_boolean_literals() {
        assert_eq!(Formula::tru().to_string(), "true");
        assert_eq!(Formula::fls().to_string(), "false");
    }

    #[test]
    fn display_subtraction_forms() {
        let t = var("x") - con(5);
        assert_eq!(t.to_string(), "x - 5");
        let t = var("x") - var("y");
        assert_eq!(t.to_string(), "x - y");
        let t = (var("x") - var("y")).scale(2);
        assert_eq!(t.to_string(), "2 * (x - y)");
    }
}
