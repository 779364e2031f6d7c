//! Surface syntax for formulas.
//!
//! ```text
//! formula  := since
//! since    := until ("S" since)?
//! until    := iff ("U" until)?
//! iff      := impl ("<->" impl)*
//! impl     := or ("->" impl)?
//! or       := and ("|" and)*
//! and      := unary ("&" unary)*
//! unary    := "!" unary | "X" unary | "Y" unary | primary
//! primary  := "true" | "false" | "G" "(" formula ")" | "F" "(" formula ")"
//!           | "Last" "[" formula "]" | relation | identifier | "(" formula ")"
//! relation := term ("=" | "!=" | "<" | "<=" | ">" | ">=") term
//! term     := "-"? addend (("+" | "-") addend)*
//! addend   := factor ("*" factor)?          -- one side must be a constant
//! factor   := integer | identifier | "X" "(" term ")" | "Y" "(" term ")"
//!           | "min" "(" term "," term ")" | "max" "(" term "," term ")"
//!           | "(" term ")" | "-" factor
//! ```
//!
//! Identifiers may contain `.` and bracketed indices, so `obj[1].x` and
//! `robot.alpha` are single atoms. `#` starts a comment that runs to the
//! end of the line. `X(...)` is resolved by backtracking: it is a term
//! shift when a comparison operator follows the parenthesized expression,
//! and a formula operator otherwise. `a <-> b` is sugar for the
//! conjunction of both implications; there is no dedicated node for it.

use super::ast::{con, var, Formula, RelOp, TemporalTerm};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    True,
    False,
    NextOp,
    PrevOp,
    UntilOp,
    SinceOp,
    AlwaysOp,
    EventuallyOp,
    LastOp,
    MinFn,
    MaxFn,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Plus,
    Minus,
    Star,
    Bang,
    Amp,
    Pipe,
    Arrow,
    IffOp,
    Rel(RelOp),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Eof => "end of input".to_owned(),
            Tok::True => "`true`".to_owned(),
            Tok::False => "`false`".to_owned(),
            Tok::NextOp => "`X`".to_owned(),
            Tok::PrevOp => "`Y`".to_owned(),
            Tok::UntilOp => "`U`".to_owned(),
            Tok::SinceOp => "`S`".to_owned(),
            Tok::AlwaysOp => "`G`".to_owned(),
            Tok::EventuallyOp => "`F`".to_owned(),
            Tok::LastOp => "`Last`".to_owned(),
            Tok::MinFn => "`min`".to_owned(),
            Tok::MaxFn => "`max`".to_owned(),
            Tok::LParen => "`(`".to_owned(),
            Tok::RParen => "`)`".to_owned(),
            Tok::LBracket => "`[`".to_owned(),
            Tok::RBracket => "`]`".to_owned(),
            Tok::Comma => "`,`".to_owned(),
            Tok::Plus => "`+`".to_owned(),
            Tok::Minus => "`-`".to_owned(),
            Tok::Star => "`*`".to_owned(),
            Tok::Bang => "`!`".to_owned(),
            Tok::Amp => "`&`".to_owned(),
            Tok::Pipe => "`|`".to_owned(),
            Tok::Arrow => "`->`".to_owned(),
            Tok::IffOp => "`<->`".to_owned(),
            Tok::Rel(op) => format!("`{op}`"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    src: &'a [u8],
    i: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            i: 0,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, pos: Pos, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: pos.line,
            col: pos.col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.i).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.i += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() {
                self.bump();
            } else if c == b'#' {
                while let Some(c) = self.peek() {
                    if c == b'\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    /// Bracketed index like `[12]` directly after an identifier is part
    /// of the identifier; anything else ends it, which keeps `Last[...]`
    /// working.
    fn indexed_bracket_len(&self) -> Option<usize> {
        let mut j = self.i + 1;
        let mut digits = 0;
        while let Some(c) = self.src.get(j) {
            if c.is_ascii_digit() {
                digits += 1;
                j += 1;
            } else {
                break;
            }
        }
        if digits > 0 && self.src.get(j) == Some(&b']') {
            Some(j + 1 - self.i)
        } else {
            None
        }
    }

    fn lex(mut self) -> Result<Vec<(Tok, Pos)>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let pos = Pos {
                line: self.line,
                col: self.col,
            };
            let Some(c) = self.peek() else {
                out.push((Tok::Eof, pos));
                return Ok(out);
            };
            let tok = match c {
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'[' => {
                    self.bump();
                    Tok::LBracket
                }
                b']' => {
                    self.bump();
                    Tok::RBracket
                }
                b',' => {
                    self.bump();
                    Tok::Comma
                }
                b'+' => {
                    self.bump();
                    Tok::Plus
                }
                b'*' => {
                    self.bump();
                    Tok::Star
                }
                b'&' => {
                    self.bump();
                    Tok::Amp
                }
                b'|' => {
                    self.bump();
                    Tok::Pipe
                }
                b'=' => {
                    self.bump();
                    Tok::Rel(RelOp::Eq)
                }
                b'-' => {
                    self.bump();
                    if self.peek() == Some(b'>') {
                        self.bump();
                        Tok::Arrow
                    } else {
                        Tok::Minus
                    }
                }
                b'!' => {
                    self.bump();
                    if self.peek() == Some(b'=') {
                        self.bump();
                        Tok::Rel(RelOp::Ne)
                    } else {
                        Tok::Bang
                    }
                }
                b'<' => {
                    self.bump();
                    if self.peek() == Some(b'=') {
                        self.bump();
                        Tok::Rel(RelOp::Le)
                    } else if self.peek() == Some(b'-') && self.src.get(self.i + 1) == Some(&b'>')
                    {
                        self.bump();
                        self.bump();
                        Tok::IffOp
                    } else {
                        Tok::Rel(RelOp::Lt)
                    }
                }
                b'>' => {
                    self.bump();
                    if self.peek() == Some(b'=') {
                        self.bump();
                        Tok::Rel(RelOp::Ge)
                    } else {
                        Tok::Rel(RelOp::Gt)
                    }
                }
                b'0'..=b'9' => {
                    let mut n: i64 = 0;
                    while let Some(d) = self.peek() {
                        if !d.is_ascii_digit() {
                            break;
                        }
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add((d - b'0') as i64))
                            .ok_or_else(|| self.err(pos, "integer literal overflows i64"))?;
                        self.bump();
                    }
                    Tok::Int(n)
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.i;
                    while let Some(c) = self.peek() {
                        if c.is_ascii_alphanumeric() || c == b'_' || c == b'.' {
                            self.bump();
                        } else if c == b'[' {
                            match self.indexed_bracket_len() {
                                Some(len) => {
                                    for _ in 0..len {
                                        self.bump();
                                    }
                                }
                                None => break,
                            }
                        } else {
                            break;
                        }
                    }
                    let text = std::str::from_utf8(&self.src[start..self.i])
                        .expect("identifier bytes are ASCII");
                    match text {
                        "true" => Tok::True,
                        "false" => Tok::False,
                        "X" => Tok::NextOp,
                        "Y" => Tok::PrevOp,
                        "U" => Tok::UntilOp,
                        "S" => Tok::SinceOp,
                        "G" => Tok::AlwaysOp,
                        "F" => Tok::EventuallyOp,
                        "Last" => Tok::LastOp,
                        "min" => Tok::MinFn,
                        "max" => Tok::MaxFn,
                        _ => Tok::Ident(text.to_owned()),
                    }
                }
                other => {
                    return Err(self.err(pos, format!("unexpected character `{}`", other as char)))
                }
            };
            out.push((tok, pos));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
}

/// Parse the surface syntax into a [`Formula`].
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = Lexer::new(text).lex()?;
    let mut p = Parser { toks, i: 0 };
    let f = p.formula()?;
    p.expect_eof()?;
    Ok(f)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let pos = self.pos();
        ParseError {
            line: pos.line,
            col: pos.col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.err(format!(
                "expected {} {what}, found {}",
                t.describe(),
                self.peek().describe()
            )))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.err(format!("unexpected {} after formula", self.peek().describe())))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.since()
    }

    fn since(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.until()?;
        if self.eat(&Tok::SinceOp) {
            let rhs = self.since()?;
            return Ok(lhs.since(rhs));
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.iff()?;
        if self.eat(&Tok::UntilOp) {
            let rhs = self.until()?;
            return Ok(lhs.until(rhs));
        }
        Ok(lhs)
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::IffOp) {
            let rhs = self.implication()?;
            lhs = lhs.clone().implies(rhs.clone()).and(rhs.implies(lhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Pipe) {
            lhs = lhs.or(self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(self.unary()?.not())
            }
            // `X(` may open a shifted term inside a relation rather than
            // a formula operator; try the relation reading first.
            Tok::NextOp | Tok::PrevOp => {
                if self.toks[self.i + 1].0 == Tok::LParen {
                    if let Some(rel) = self.try_relation()? {
                        return Ok(rel);
                    }
                }
                let is_next = *self.peek() == Tok::NextOp;
                self.bump();
                let inner = self.unary()?;
                Ok(if is_next { inner.next() } else { inner.prev() })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Formula::tru())
            }
            Tok::False => {
                self.bump();
                Ok(Formula::fls())
            }
            Tok::AlwaysOp => {
                self.bump();
                self.expect(Tok::LParen, "after `G`")?;
                let f = self.formula()?;
                self.expect(Tok::RParen, "closing `G(`")?;
                Ok(f.always())
            }
            Tok::EventuallyOp => {
                self.bump();
                self.expect(Tok::LParen, "after `F`")?;
                let f = self.formula()?;
                self.expect(Tok::RParen, "closing `F(`")?;
                Ok(f.eventually())
            }
            Tok::LastOp => {
                self.bump();
                self.expect(Tok::LBracket, "after `Last`")?;
                let f = self.formula()?;
                self.expect(Tok::RBracket, "closing `Last[`")?;
                Ok(f.last())
            }
            Tok::Ident(_) | Tok::Int(_) | Tok::Minus | Tok::MinFn | Tok::MaxFn | Tok::LParen => {
                if let Some(rel) = self.try_relation()? {
                    return Ok(rel);
                }
                match self.peek().clone() {
                    Tok::Ident(name) => {
                        self.bump();
                        Ok(Formula::atom(name))
                    }
                    Tok::LParen => {
                        self.bump();
                        let f = self.formula()?;
                        self.expect(Tok::RParen, "closing `(`")?;
                        Ok(f)
                    }
                    _ => Err(self.err(format!(
                        "expected a formula, found {}",
                        self.peek().describe()
                    ))),
                }
            }
            other => Err(self.err(format!("expected a formula, found {}", other.describe()))),
        }
    }

    /// Parse `term relop term` from the current position. Rewinds and
    /// returns `Ok(None)` if no relation starts here; once a comparison
    /// operator has been seen nothing else can follow, so errors in the
    /// right-hand term are reported rather than backtracked away.
    fn try_relation(&mut self) -> Result<Option<Formula>, ParseError> {
        let save = self.i;
        let lhs = match self.term() {
            Ok(t) => t,
            Err(_) => {
                self.i = save;
                return Ok(None);
            }
        };
        let op = match self.peek() {
            Tok::Rel(op) => *op,
            _ => {
                self.i = save;
                return Ok(None);
            }
        };
        self.bump();
        let rhs = self.term()?;
        Ok(Some(Formula::rel(lhs, op, rhs)))
    }

    fn term(&mut self) -> Result<TemporalTerm, ParseError> {
        let mut acc = if self.eat(&Tok::Minus) {
            negate(self.addend()?)
        } else {
            self.addend()?
        };
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc + self.addend()?;
            } else if self.eat(&Tok::Minus) {
                acc = TemporalTerm::Sum(Box::new(acc), Box::new(negate(self.addend()?)));
            } else {
                return Ok(acc);
            }
        }
    }

    fn addend(&mut self) -> Result<TemporalTerm, ParseError> {
        let first = self.factor()?;
        if !self.eat(&Tok::Star) {
            return Ok(first);
        }
        let second = self.factor()?;
        match (first, second) {
            (TemporalTerm::Const(a), TemporalTerm::Const(b)) => Ok(con(a * b)),
            (TemporalTerm::Const(c), t) | (t, TemporalTerm::Const(c)) => Ok(t.scale(c)),
            _ => Err(self.err("nonlinear product: one side of `*` must be a constant")),
        }
    }

    fn factor(&mut self) -> Result<TemporalTerm, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(con(n))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(var(name))
            }
            Tok::Minus => {
                self.bump();
                Ok(negate(self.factor()?))
            }
            Tok::NextOp | Tok::PrevOp => {
                let is_next = *self.peek() == Tok::NextOp;
                self.bump();
                self.expect(Tok::LParen, "after term shift")?;
                let t = self.term()?;
                self.expect(Tok::RParen, "closing term shift")?;
                Ok(if is_next { t.next() } else { t.prev() })
            }
            Tok::MinFn | Tok::MaxFn => {
                let is_min = *self.peek() == Tok::MinFn;
                self.bump();
                self.expect(Tok::LParen, "after min/max")?;
                let a = self.term()?;
                self.expect(Tok::Comma, "between min/max arguments")?;
                let b = self.term()?;
                self.expect(Tok::RParen, "closing min/max")?;
                Ok(if is_min { a.min(b) } else { a.max(b) })
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "closing `(`")?;
                Ok(t)
            }
            other => Err(self.err(format!("expected a term, found {}", other.describe()))),
        }
    }
}

fn negate(t: TemporalTerm) -> TemporalTerm {
    match t {
        TemporalTerm::Const(c) => TemporalTerm::Const(-c),
        TemporalTerm::Scale(c, inner) => TemporalTerm::Scale(-c, inner),
        other => TemporalTerm::Scale(-1, Box::new(other)),
    }
}
