//! Solver sessions: an abstract interface plus the default backend that
//! drives any SMT-LIB2 solver executable over a pipe.
//!
//! The protocol is one-shot: declarations and assertions accumulate in
//! memory, and `check` writes the whole script, closes stdin, and reads
//! the verdict and model back. Timeouts are enforced with a wall clock;
//! on expiry the child is killed. A non-zero exit status alone is not an
//! error (solvers exit non-zero after `(get-model)` on unsat).

use crate::smt::encode::AssertionSet;
use crate::smt::term::{eval_smt, Model, SmtTerm, Sort, Value};
use std::collections::BTreeSet;
use std::io::Write;
use std::process::{Child, Command, Stdio};
use std::sync::mpsc;
use std::time::Duration;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("cannot start solver `{cmd}`: {source} (is it installed? set COSMOP_SMT_CMD to override)")]
    Spawn {
        cmd: String,
        source: std::io::Error,
    },
    #[error("solver pipe: {0}")]
    Io(#[from] std::io::Error),
    #[error("variable {0} is already declared")]
    DuplicateDeclaration(String),
    #[error("session already checked; {0} is no longer allowed")]
    AfterCheck(&'static str),
    #[error("solver returned a model that falsifies `{assertion}`: {detail}")]
    UnsoundModel { assertion: String, detail: String },
}

/// Verdict of one `check`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    /// Satisfiable, with a total assignment for every declared variable.
    Sat(Model),
    Unsat,
    /// The solver gave up or failed; the string says why.
    Unknown(String),
    /// Wall-clock budget exceeded; the child was killed.
    Timeout,
}

/// How to reach the solver executable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Command line, whitespace-split; first word is the program.
    pub command: String,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            command: "z3 -in".to_owned(),
        }
    }
}

impl SolverConfig {
    /// Environment override `COSMOP_SMT_CMD`, else the default `z3 -in`.
    pub fn from_env() -> Self {
        match std::env::var("COSMOP_SMT_CMD") {
            Ok(cmd) if !cmd.trim().is_empty() => SolverConfig { command: cmd },
            _ => SolverConfig::default(),
        }
    }
}

/// One solve: declarations, assertions, a single check, optional model.
pub trait SmtSession {
    fn declare(&mut self, name: &str, sort: Sort) -> Result<(), SolverError>;
    fn assert_term(&mut self, term: &SmtTerm) -> Result<(), SolverError>;
    fn check(&mut self, timeout: Duration) -> Result<SatResult, SolverError>;
}

/// Default backend: spawn the configured executable once per check.
pub struct ProcessSession {
    config: SolverConfig,
    declarations: Vec<(String, Sort)>,
    names: BTreeSet<String>,
    assertions: Vec<SmtTerm>,
    checked: bool,
}

impl ProcessSession {
    pub fn new(config: SolverConfig) -> Self {
        ProcessSession {
            config,
            declarations: Vec::new(),
            names: BTreeSet::new(),
            assertions: Vec::new(),
            checked: false,
        }
    }

    /// The full SMT-LIB2 script this session will submit.
    pub fn script(&self) -> String {
        let mut out = String::from("(set-logic QF_LIA)\n");
        for (name, sort) in &self.declarations {
            out.push_str(&format!(
                "(declare-const {} {sort})\n",
                crate::smt::term::quote_symbol(name)
            ));
        }
        for a in &self.assertions {
            out.push_str(&format!("(assert {})\n", a.to_smtlib()));
        }
        out.push_str("(check-sat)\n(get-model)\n");
        out
    }

    fn spawn(&self) -> Result<Child, SolverError> {
        let mut words = self.config.command.split_whitespace();
        let program = words.next().unwrap_or("z3");
        Command::new(program)
            .args(words)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|source| SolverError::Spawn {
                cmd: self.config.command.clone(),
                source,
            })
    }

    fn run_with_timeout(&self, timeout: Duration) -> Result<SatResult, SolverError> {
        let mut child = self.spawn()?;
        let script = self.script();

        let stdout = child.stdout.take().expect("stdout is piped");
        let stderr = child.stderr.take().expect("stderr is piped");
        let (tx, rx) = mpsc::channel();
        let out_thread = std::thread::spawn(move || {
            use std::io::Read;
            let mut stdout = stdout;
            let mut buf = String::new();
            let _ = stdout.read_to_string(&mut buf);
            let _ = tx.send(buf);
        });
        let err_thread = std::thread::spawn(move || {
            use std::io::Read;
            let mut stderr = stderr;
            let mut buf = String::new();
            let _ = stderr.read_to_string(&mut buf);
            buf
        });

        {
            let mut stdin = child.stdin.take().expect("stdin is piped");
            // The child may exit early (e.g. a parse error); a broken
            // pipe here is reported through the output, not as an error.
            let _ = stdin.write_all(script.as_bytes());
        }

        let output = match rx.recv_timeout(timeout) {
            Ok(output) => output,
            Err(_) => {
                let _ = child.kill();
                let _ = child.wait();
                let _ = out_thread.join();
                let _ = err_thread.join();
                return Ok(SatResult::Timeout);
            }
        };
        let _ = child.wait();
        let _ = out_thread.join();
        let errors = err_thread.join().unwrap_or_default();

        Ok(self.interpret(&output, &errors))
    }

    fn interpret(&self, output: &str, errors: &str) -> SatResult {
        let mut lines = output.lines().map(str::trim).filter(|l| !l.is_empty());
        match lines.next() {
            Some("sat") => {}
            Some("unsat") => return SatResult::Unsat,
            Some("unknown") => {
                return SatResult::Unknown("solver reported unknown".to_owned())
            }
            other => {
                let mut diag = format!(
                    "unexpected solver output: {}",
                    other.unwrap_or("<empty>")
                );
                if !errors.trim().is_empty() {
                    diag.push_str(&format!("; stderr: {}", errors.trim()));
                }
                return SatResult::Unknown(diag);
            }
        }
        let rest: String = output
            .splitn(2, "sat")
            .nth(1)
            .unwrap_or_default()
            .to_owned();
        match parse_model(&rest) {
            Ok(mut model) => {
                // A solver may omit variables it never had to constrain;
                // any value completes the model, and the soundness audit
                // downstream would catch a wrong completion.
                for (name, sort) in &self.declarations {
                    model.entry(name.clone()).or_insert(match sort {
                        Sort::Int => Value::Int(0),
                        Sort::Bool => Value::Bool(false),
                    });
                }
                SatResult::Sat(model)
            }
            Err(e) => SatResult::Unknown(format!("cannot parse model: {e}")),
        }
    }
}

impl SmtSession for ProcessSession {
    fn declare(&mut self, name: &str, sort: Sort) -> Result<(), SolverError> {
        if self.checked {
            return Err(SolverError::AfterCheck("declare"));
        }
        if !self.names.insert(name.to_owned()) {
            return Err(SolverError::DuplicateDeclaration(name.to_owned()));
        }
        self.declarations.push((name.to_owned(), sort));
        Ok(())
    }

    fn assert_term(&mut self, term: &SmtTerm) -> Result<(), SolverError> {
        if self.checked {
            return Err(SolverError::AfterCheck("assert"));
        }
        self.assertions.push(term.clone());
        Ok(())
    }

    fn check(&mut self, timeout: Duration) -> Result<SatResult, SolverError> {
        if self.checked {
            return Err(SolverError::AfterCheck("check"));
        }
        self.checked = true;
        self.run_with_timeout(timeout)
    }
}

/// Declare and assert a whole [`AssertionSet`], check it, and audit any
/// model against every assertion with the in-process evaluator.
pub fn solve(
    set: &AssertionSet,
    config: &SolverConfig,
    timeout: Duration,
) -> Result<SatResult, SolverError> {
    let mut session = ProcessSession::new(config.clone());
    for (name, sort) in &set.declarations {
        session.declare(name, *sort)?;
    }
    for a in &set.assertions {
        session.assert_term(a)?;
    }
    let result = session.check(timeout)?;
    if let SatResult::Sat(model) = &result {
        audit_model(set, model)?;
    }
    Ok(result)
}

/// Fail unless the model satisfies every assertion.
pub fn audit_model(set: &AssertionSet, model: &Model) -> Result<(), SolverError> {
    for a in &set.assertions {
        match eval_smt(a, model) {
            Ok(Value::Bool(true)) => {}
            other => {
                return Err(SolverError::UnsoundModel {
                    assertion: a.to_smtlib(),
                    detail: format!("{other:?}"),
                })
            }
        }
    }
    Ok(())
}

// ---- model text parsing ----

#[derive(Debug, PartialEq, Eq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn tokenize(input: &str) -> Result<Vec<String>, String> {
    let mut toks = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '(' => toks.push("(".to_owned()),
            ')' => toks.push(")".to_owned()),
            '|' => {
                let mut atom = String::new();
                for c in chars.by_ref() {
                    if c == '|' {
                        break;
                    }
                    atom.push(c);
                }
                toks.push(atom);
            }
            '"' => {
                // String literal (solver diagnostics); skipped as a unit.
                let mut atom = String::from("\"");
                while let Some(c) = chars.next() {
                    if c == '"' {
                        if chars.peek() == Some(&'"') {
                            atom.push('"');
                            chars.next();
                        } else {
                            break;
                        }
                    } else {
                        atom.push(c);
                    }
                }
                toks.push(atom);
            }
            c if c.is_whitespace() => {}
            c => {
                let mut atom = String::from(c);
                while let Some(&next) = chars.peek() {
                    if next.is_whitespace() || next == '(' || next == ')' {
                        break;
                    }
                    atom.push(next);
                    chars.next();
                }
                toks.push(atom);
            }
        }
    }
    Ok(toks)
}

fn parse_sexps(input: &str) -> Result<Vec<Sexp>, String> {
    let toks = tokenize(input)?;
    let mut stack: Vec<Vec<Sexp>> = vec![Vec::new()];
    for tok in toks {
        match tok.as_str() {
            "(" => stack.push(Vec::new()),
            ")" => {
                let done = stack.pop().ok_or("unbalanced `)`")?;
                stack
                    .last_mut()
                    .ok_or("unbalanced `)`")?
                    .push(Sexp::List(done));
            }
            _ => stack
                .last_mut()
                .expect("stack never empty here")
                .push(Sexp::Atom(tok)),
        }
    }
    if stack.len() != 1 {
        return Err("unbalanced `(`".to_owned());
    }
    Ok(stack.pop().expect("single frame left"))
}

fn parse_value(sexp: &Sexp) -> Option<Value> {
    match sexp {
        Sexp::Atom(a) if a == "true" => Some(Value::Bool(true)),
        Sexp::Atom(a) if a == "false" => Some(Value::Bool(false)),
        Sexp::Atom(a) => a.parse::<i64>().ok().map(Value::Int),
        Sexp::List(items) => match items.as_slice() {
            [Sexp::Atom(minus), Sexp::Atom(n)] if minus == "-" => {
                n.parse::<i64>().ok().map(|n| Value::Int(-n))
            }
            _ => None,
        },
    }
}

/// Pull every `(define-fun name () Sort value)` out of `(get-model)`
/// output, however the solver wraps or indents it.
fn parse_model(text: &str) -> Result<Model, String> {
    let sexps = parse_sexps(text)?;
    let mut model = Model::new();
    let mut queue: Vec<&Sexp> = sexps.iter().collect();
    while let Some(sexp) = queue.pop() {
        let Sexp::List(items) = sexp else { continue };
        let is_define = matches!(items.first(), Some(Sexp::Atom(head)) if head == "define-fun");
        if !is_define {
            queue.extend(items.iter());
            continue;
        }
        let [_, Sexp::Atom(name), Sexp::List(args), _sort, value] = items.as_slice() else {
            continue;
        };
        if !args.is_empty() {
            continue;
        }
        let Some(value) = parse_value(value) else {
            continue;
        };
        model.insert(name.clone(), value);
    }
    Ok(model)
}
