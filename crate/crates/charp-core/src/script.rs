//! A small textual language for driving the kernel: ring declarations,
//! polynomial and ideal bindings, and check directives.
//!
//! ```text
//! # canonical shape
//! ring p = 3 vars x y z
//! poly f = x*y - z^2
//! ideal I = [f, x^3]
//! check dim0 I
//! check fpure I zero [z]
//! check freg I witness f prefactor x ^ p-2 q p, p^2
//! check member x*y in I
//! ```
//!
//! Statements end at a newline or `;`. `#` starts a line comment. A single
//! `ring` declaration must precede all bindings; names bind once and are
//! resolved at parse time, so a parsed script cannot fail on lookups.
//! Builtin ideal constructors `comm(n)`, `cross_ideal(n)`, `anti_ideal(n)`,
//! `diag_ideal(n)`, and `offdiag_ideal(n)` build commutator-entry ideals
//! from the standard matrix variables `x11..ynn`, which must exist in the
//! declared ring.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::cert::{Certificate, ClaimPerf, Step, StepStatus};
use crate::fsing::{
    fedder_ci_check, glassbrenner_ci_check, CriterionStatus, FsingError, QExpr, WitnessSpec,
};
use crate::groebner::{normal_form, GbError, Ideal};
use crate::matrix::{commutator, ideal_from_family, IdealFamily, MatrixError, SymbolicMatrix};
use crate::ring::{MonomialOrder, Poly, Ring, RingCtx, RingError};

/// Script-level failures; parse errors carry the offending position.
#[derive(Debug, Error)]
pub enum ScriptError {
    #[error("line {line}, column {col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Gb(#[from] GbError),
    #[error(transparent)]
    Fsing(#[from] FsingError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("no ideal named {0:?} in the script")]
    UnknownIdeal(String),
    #[error("no polynomial named {0:?} in the script")]
    UnknownPoly(String),
    #[error("builtin ideal constructors need the variable {0:?} in the ring")]
    MissingMatrixVar(String),
}

fn err_at<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ScriptError> {
    Err(ScriptError::Parse {
        line,
        col,
        message: message.into(),
    })
}

// ---------------------------------------------------------------------------
// Syntax tree
// ---------------------------------------------------------------------------

/// Arithmetic over ring variables, bound polynomial names, and integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u64),
}

/// Right-hand side of an ideal binding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealSource {
    List(Vec<Expr>),
    Builtin { name: String, n: usize },
}

/// An ideal mention inside a check directive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealRef {
    Named(String),
    Inline(Vec<Expr>),
}

/// One check directive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Fpure {
        ideal: IdealRef,
        zero: Vec<String>,
    },
    Freg {
        ideal: IdealRef,
        witness: Expr,
        prefactors: Vec<(Expr, QExpr)>,
        q_list: Vec<QExpr>,
        zero: Vec<String>,
    },
    Dim0 {
        ideal: IdealRef,
    },
    Member {
        element: Expr,
        ideal: IdealRef,
    },
}

/// One statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Ring { p: u32, vars: Vec<String> },
    PolyBind { name: String, expr: Expr },
    IdealBind { name: String, source: IdealSource },
    Check(Check),
}

/// A parsed script: a ring declaration followed by bindings and checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Script {
    pub statements: Vec<Stmt>,
}

pub const BUILTIN_IDEALS: &[&str] = &[
    "comm",
    "cross_ideal",
    "anti_ideal",
    "diag_ideal",
    "offdiag_ideal",
];

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
    Sep,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s:?}"),
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Sym(c) => write!(f, "{c:?}"),
            Tok::Sep => write!(f, "end of statement"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>, ScriptError> {
    let mut out: Vec<Lexed> = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut it = text.chars().peekable();
    while let Some(&ch) = it.peek() {
        match ch {
            '#' => {
                while let Some(&c) = it.peek() {
                    if c == '\n' {
                        break;
                    }
                    it.next();
                    col += 1;
                }
            }
            '\n' | ';' => {
                out.push(Lexed {
                    tok: Tok::Sep,
                    line,
                    col,
                });
                it.next();
                if ch == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            c if c.is_whitespace() => {
                it.next();
                col += 1;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = col;
                let mut s = String::new();
                while let Some(&c) = it.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        it.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Lexed {
                    tok: Tok::Ident(s),
                    line,
                    col: start,
                });
            }
            c if c.is_ascii_digit() => {
                let start = col;
                let mut n: u64 = 0;
                while let Some(&c) = it.peek() {
                    if let Some(d) = c.to_digit(10) {
                        n = n
                            .checked_mul(10)
                            .and_then(|m| m.checked_add(u64::from(d)))
                            .ok_or(ScriptError::Parse {
                                line,
                                col: start,
                                message: "integer literal too large".to_string(),
                            })?;
                        it.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Lexed {
                    tok: Tok::Int(n),
                    line,
                    col: start,
                });
            }
            '=' | ',' | '[' | ']' | '(' | ')' | '+' | '-' | '*' | '^' => {
                out.push(Lexed {
                    tok: Tok::Sym(ch),
                    line,
                    col,
                });
                it.next();
                col += 1;
            }
            other => return err_at(line, col, format!("unexpected character {other:?}")),
        }
    }
    out.push(Lexed {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser with parse-time name resolution
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    ring: Option<(u32, Vec<String>)>,
    /// Names usable inside expressions: ring variables and bound polys.
    exprs: HashSet<String>,
    ideals: HashSet<String>,
}

impl Parser {
    fn peek(&self) -> &Lexed {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Lexed {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, at: &Lexed, message: impl Into<String>) -> Result<T, ScriptError> {
        err_at(at.line, at.col, message)
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ScriptError> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            self.fail(&t, format!("expected {c:?}, found {}", t.tok))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, Lexed), ScriptError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            _ => self.fail(&t, format!("expected {what}, found {}", t.tok)),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ScriptError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) if s == kw => Ok(()),
            _ => self.fail(&t, format!("expected {kw:?}, found {}", t.tok)),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<(u64, Lexed), ScriptError> {
        let t = self.next();
        match t.tok {
            Tok::Int(n) => Ok((n, t.clone())),
            _ => self.fail(&t, format!("expected {what}, found {}", t.tok)),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(&self.peek().tok, Tok::Ident(s) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn skip_seps(&mut self) {
        while self.peek().tok == Tok::Sep {
            self.pos += 1;
        }
    }

    fn end_statement(&mut self) -> Result<(), ScriptError> {
        let t = self.next();
        match t.tok {
            Tok::Sep | Tok::Eof => Ok(()),
            _ => self.fail(&t, format!("expected end of statement, found {}", t.tok)),
        }
    }

    fn check_fresh(&self, name: &str, at: &Lexed) -> Result<(), ScriptError> {
        if self.exprs.contains(name) || self.ideals.contains(name) {
            return self.fail(at, format!("name {name:?} is already bound"));
        }
        Ok(())
    }

    // expr := addsub
    // addsub := multerm (('+' | '-') multerm)*
    // multerm := unary ('*' unary)*
    // unary := '-' unary | powterm
    // powterm := atom ['^' INT]
    // atom := INT | NAME | '(' expr ')'
    fn parse_expr(&mut self) -> Result<Expr, ScriptError> {
        let mut lhs = self.parse_multerm()?;
        loop {
            if self.eat_sym('+') {
                let rhs = self.parse_multerm()?;
                lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat_sym('-') {
                let rhs = self.parse_multerm()?;
                lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_multerm(&mut self) -> Result<Expr, ScriptError> {
        let mut lhs = self.parse_unary()?;
        while self.eat_sym('*') {
            let rhs = self.parse_unary()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Expr, ScriptError> {
        if self.eat_sym('-') {
            let inner = self.parse_unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.parse_powterm()
    }

    // A prefactor base stops before '^', which always introduces the
    // exponent q-expression; parenthesize a base that needs its own '^'.
    fn parse_prefactor_base(&mut self) -> Result<Expr, ScriptError> {
        let mut lhs = self.parse_prefactor_unary()?;
        while self.eat_sym('*') {
            let rhs = self.parse_prefactor_unary()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_prefactor_unary(&mut self) -> Result<Expr, ScriptError> {
        if self.eat_sym('-') {
            let inner = self.parse_prefactor_unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.parse_atom()
    }

    fn parse_powterm(&mut self) -> Result<Expr, ScriptError> {
        let base = self.parse_atom()?;
        if self.eat_sym('^') {
            let (e, _) = self.expect_int("an integer exponent")?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Expr, ScriptError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => Ok(Expr::Int(*n)),
            Tok::Ident(name) => {
                if !self.exprs.contains(name) {
                    return self.fail(&t, format!("unknown name {name:?}"));
                }
                Ok(Expr::Name(name.clone()))
            }
            Tok::Sym('(') => {
                let inner = self.parse_expr()?;
                self.expect_sym(')')?;
                Ok(inner)
            }
            _ => self.fail(&t, format!("expected a polynomial atom, found {}", t.tok)),
        }
    }

    // qexpr := INT | 'p' ['^' 2] ['-' INT]
    fn parse_qexpr(&mut self) -> Result<QExpr, ScriptError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => Ok(QExpr::Int(*n)),
            Tok::Ident(s) if s == "p" => {
                let squared = if self.eat_sym('^') {
                    let (e, at) = self.expect_int("the exponent 2")?;
                    if e != 2 {
                        return err_at(at.line, at.col, "only p^2 is supported here");
                    }
                    true
                } else {
                    false
                };
                if self.eat_sym('-') {
                    let (k, at) = self.expect_int("an integer offset")?;
                    let k = u32::try_from(k).map_err(|_| ScriptError::Parse {
                        line: at.line,
                        col: at.col,
                        message: "offset too large".to_string(),
                    })?;
                    Ok(if squared {
                        QExpr::PSquaredMinus(k)
                    } else {
                        QExpr::PMinus(k)
                    })
                } else {
                    Ok(if squared { QExpr::PSquared } else { QExpr::P })
                }
            }
            _ => self.fail(&t, format!("expected a q-expression, found {}", t.tok)),
        }
    }

    fn parse_ideal_ref(&mut self) -> Result<IdealRef, ScriptError> {
        if self.peek().tok == Tok::Sym('[') {
            self.expect_sym('[')?;
            let mut exprs = vec![self.parse_expr()?];
            while self.eat_sym(',') {
                exprs.push(self.parse_expr()?);
            }
            self.expect_sym(']')?;
            return Ok(IdealRef::Inline(exprs));
        }
        let (name, at) = self.expect_ident("an ideal name or an inline [ ... ] list")?;
        if !self.ideals.contains(&name) {
            return self.fail(&at, format!("unknown ideal {name:?}"));
        }
        Ok(IdealRef::Named(name))
    }

    // zeroOpt := 'zero' '[' NAME* ']'
    fn parse_zero_opt(&mut self) -> Result<Vec<String>, ScriptError> {
        if !self.eat_keyword("zero") {
            return Ok(Vec::new());
        }
        self.expect_sym('[')?;
        let mut names = Vec::new();
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Sym(']') => {
                    self.pos += 1;
                    return Ok(names);
                }
                Tok::Ident(name) => {
                    if !self.exprs.contains(name) {
                        return self.fail(&t, format!("unknown variable {name:?}"));
                    }
                    names.push(name.clone());
                    self.pos += 1;
                }
                _ => {
                    return self.fail(
                        &t,
                        format!("expected a variable name or ']', found {}", t.tok),
                    )
                }
            }
        }
    }

    fn parse_statement(&mut self) -> Result<Stmt, ScriptError> {
        let t = self.peek().clone();
        let head = match &t.tok {
            Tok::Ident(s) => s.clone(),
            _ => return self.fail(&t, format!("expected a statement, found {}", t.tok)),
        };
        match head.as_str() {
            "ring" => self.parse_ring(),
            "poly" => self.parse_poly_bind(),
            "ideal" => self.parse_ideal_bind(),
            "check" => self.parse_check(),
            other => self.fail(
                &t,
                format!("expected \"ring\", \"poly\", \"ideal\", or \"check\", found {other:?}"),
            ),
        }
    }

    fn parse_ring(&mut self) -> Result<Stmt, ScriptError> {
        let at = self.peek().clone();
        self.expect_keyword("ring")?;
        if self.ring.is_some() {
            return self.fail(&at, "the ring is already declared");
        }
        self.expect_keyword("p")?;
        self.expect_sym('=')?;
        let (p, pat) = self.expect_int("the characteristic")?;
        let p = u32::try_from(p)
            .ok()
            .filter(|&p| is_prime(p))
            .ok_or(ScriptError::Parse {
                line: pat.line,
                col: pat.col,
                message: format!("{p} is not prime"),
            })?;
        self.expect_keyword("vars")?;
        let mut vars = Vec::new();
        while let Tok::Ident(name) = &self.peek().tok {
            let name = name.clone();
            let at = self.peek().clone();
            self.check_fresh(&name, &at)?;
            self.exprs.insert(name.clone());
            vars.push(name);
            self.pos += 1;
        }
        if vars.is_empty() {
            let t = self.peek().clone();
            return self.fail(&t, "expected at least one variable name");
        }
        self.end_statement()?;
        self.ring = Some((p, vars.clone()));
        Ok(Stmt::Ring { p, vars })
    }

    fn require_ring(&self, at: &Lexed) -> Result<(), ScriptError> {
        if self.ring.is_none() {
            return self.fail(at, "a ring must be declared first");
        }
        Ok(())
    }

    fn parse_poly_bind(&mut self) -> Result<Stmt, ScriptError> {
        let at = self.peek().clone();
        self.expect_keyword("poly")?;
        self.require_ring(&at)?;
        let (name, nat) = self.expect_ident("a polynomial name")?;
        self.check_fresh(&name, &nat)?;
        self.expect_sym('=')?;
        let expr = self.parse_expr()?;
        self.end_statement()?;
        self.exprs.insert(name.clone());
        Ok(Stmt::PolyBind { name, expr })
    }

    fn parse_ideal_bind(&mut self) -> Result<Stmt, ScriptError> {
        let at = self.peek().clone();
        self.expect_keyword("ideal")?;
        self.require_ring(&at)?;
        let (name, nat) = self.expect_ident("an ideal name")?;
        self.check_fresh(&name, &nat)?;
        self.expect_sym('=')?;
        let source = if self.peek().tok == Tok::Sym('[') {
            self.expect_sym('[')?;
            let mut exprs = vec![self.parse_expr()?];
            while self.eat_sym(',') {
                exprs.push(self.parse_expr()?);
            }
            self.expect_sym(']')?;
            IdealSource::List(exprs)
        } else {
            let (builtin, bat) = self.expect_ident("a builtin ideal constructor or '['")?;
            if !BUILTIN_IDEALS.contains(&builtin.as_str()) {
                return self.fail(
                    &bat,
                    format!("unknown ideal constructor {builtin:?} (expected one of {BUILTIN_IDEALS:?})"),
                );
            }
            self.expect_sym('(')?;
            let (n, nat2) = self.expect_int("the matrix size")?;
            if !(1..=9).contains(&n) {
                return err_at(nat2.line, nat2.col, "matrix size must be between 1 and 9");
            }
            self.expect_sym(')')?;
            IdealSource::Builtin {
                name: builtin,
                n: n as usize,
            }
        };
        self.end_statement()?;
        self.ideals.insert(name.clone());
        Ok(Stmt::IdealBind { name, source })
    }

    fn parse_check(&mut self) -> Result<Stmt, ScriptError> {
        let at = self.peek().clone();
        self.expect_keyword("check")?;
        self.require_ring(&at)?;
        let (kind, kat) = self.expect_ident("a check kind")?;
        let check = match kind.as_str() {
            "fpure" => {
                let ideal = self.parse_ideal_ref()?;
                let zero = self.parse_zero_opt()?;
                Check::Fpure { ideal, zero }
            }
            "freg" => {
                let ideal = self.parse_ideal_ref()?;
                self.expect_keyword("witness")?;
                let witness = self.parse_expr()?;
                let mut prefactors = Vec::new();
                while self.eat_keyword("prefactor") {
                    let base = self.parse_prefactor_base()?;
                    self.expect_sym('^')?;
                    let q = self.parse_qexpr()?;
                    prefactors.push((base, q));
                }
                self.expect_keyword("q")?;
                let mut q_list = vec![self.parse_qexpr()?];
                while self.eat_sym(',') {
                    q_list.push(self.parse_qexpr()?);
                }
                let zero = self.parse_zero_opt()?;
                Check::Freg {
                    ideal,
                    witness,
                    prefactors,
                    q_list,
                    zero,
                }
            }
            "dim0" => Check::Dim0 {
                ideal: self.parse_ideal_ref()?,
            },
            "member" => {
                let element = self.parse_expr()?;
                self.expect_keyword("in")?;
                let ideal = self.parse_ideal_ref()?;
                Check::Member { element, ideal }
            }
            other => {
                return self.fail(
                    &kat,
                    format!("unknown check {other:?} (expected fpure, freg, dim0, or member)"),
                )
            }
        };
        self.end_statement()?;
        Ok(Stmt::Check(check))
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Parses and statically validates a script: one leading ring declaration,
/// fresh names, every mention resolved.
pub fn parse_script(text: &str) -> Result<Script, ScriptError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        ring: None,
        exprs: HashSet::new(),
        ideals: HashSet::new(),
    };
    let mut statements = Vec::new();
    loop {
        parser.skip_seps();
        if parser.peek().tok == Tok::Eof {
            break;
        }
        statements.push(parser.parse_statement()?);
    }
    Ok(Script { statements })
}

// ---------------------------------------------------------------------------
// Canonical rendering (inverse of the parser on canonical text)
// ---------------------------------------------------------------------------

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        Expr::Int(_) | Expr::Name(_) => 5,
    }
}

fn render_child(e: &Expr, min: u8, out: &mut String) {
    if prec(e) < min {
        out.push('(');
        render_expr_into(e, out);
        out.push(')');
    } else {
        render_expr_into(e, out);
    }
}

fn render_expr_into(e: &Expr, out: &mut String) {
    match e {
        Expr::Int(n) => out.push_str(&n.to_string()),
        Expr::Name(s) => out.push_str(s),
        Expr::Neg(a) => {
            out.push('-');
            render_child(a, 4, out);
        }
        Expr::Add(a, b) => {
            render_child(a, 1, out);
            out.push_str(" + ");
            render_child(b, 2, out);
        }
        Expr::Sub(a, b) => {
            render_child(a, 1, out);
            out.push_str(" - ");
            render_child(b, 2, out);
        }
        Expr::Mul(a, b) => {
            render_child(a, 2, out);
            out.push('*');
            render_child(b, 3, out);
        }
        Expr::Pow(a, e) => {
            render_child(a, 5, out);
            out.push('^');
            out.push_str(&e.to_string());
        }
    }
}

/// Canonical text of an expression.
pub fn render_expr(e: &Expr) -> String {
    let mut s = String::new();
    render_expr_into(e, &mut s);
    s
}

fn render_qexpr(q: &QExpr) -> String {
    q.render()
}

// Whether an expression renders to text the prefactor-base parser accepts
// bare, i.e. without a top-level '^', '+', or '-' between terms.
fn prefactor_base_is_tight(e: &Expr) -> bool {
    match e {
        Expr::Int(_) | Expr::Name(_) => true,
        Expr::Neg(a) => prefactor_base_is_tight(a),
        Expr::Mul(a, b) => prefactor_base_is_tight(a) && prefactor_base_is_tight(b),
        Expr::Pow(..) | Expr::Add(..) | Expr::Sub(..) => false,
    }
}

fn render_prefactor_base(e: &Expr) -> String {
    if prefactor_base_is_tight(e) {
        render_expr(e)
    } else {
        format!("({})", render_expr(e))
    }
}

fn render_ideal_ref(r: &IdealRef) -> String {
    match r {
        IdealRef::Named(n) => n.clone(),
        IdealRef::Inline(exprs) => {
            format!(
                "[{}]",
                exprs.iter().map(render_expr).collect::<Vec<_>>().join(", ")
            )
        }
    }
}

fn render_zero(zero: &[String]) -> String {
    if zero.is_empty() {
        String::new()
    } else {
        format!(" zero [{}]", zero.join(" "))
    }
}

/// Canonical text of a script; `parse_script` inverts it.
pub fn render_script(script: &Script) -> String {
    let mut out = String::new();
    for stmt in &script.statements {
        match stmt {
            Stmt::Ring { p, vars } => {
                out.push_str(&format!("ring p = {p} vars {}", vars.join(" ")));
            }
            Stmt::PolyBind { name, expr } => {
                out.push_str(&format!("poly {name} = {}", render_expr(expr)));
            }
            Stmt::IdealBind { name, source } => match source {
                IdealSource::List(exprs) => out.push_str(&format!(
                    "ideal {name} = [{}]",
                    exprs.iter().map(render_expr).collect::<Vec<_>>().join(", ")
                )),
                IdealSource::Builtin { name: b, n } => {
                    out.push_str(&format!("ideal {name} = {b}({n})"));
                }
            },
            Stmt::Check(check) => match check {
                Check::Fpure { ideal, zero } => out.push_str(&format!(
                    "check fpure {}{}",
                    render_ideal_ref(ideal),
                    render_zero(zero)
                )),
                Check::Freg {
                    ideal,
                    witness,
                    prefactors,
                    q_list,
                    zero,
                } => {
                    out.push_str(&format!(
                        "check freg {} witness {}",
                        render_ideal_ref(ideal),
                        render_expr(witness)
                    ));
                    for (base, q) in prefactors {
                        out.push_str(&format!(
                            " prefactor {} ^ {}",
                            render_prefactor_base(base),
                            render_qexpr(q)
                        ));
                    }
                    out.push_str(&format!(
                        " q {}",
                        q_list
                            .iter()
                            .map(render_qexpr)
                            .collect::<Vec<_>>()
                            .join(", ")
                    ));
                    out.push_str(&render_zero(zero));
                }
                Check::Dim0 { ideal } => {
                    out.push_str(&format!("check dim0 {}", render_ideal_ref(ideal)));
                }
                Check::Member { element, ideal } => out.push_str(&format!(
                    "check member {} in {}",
                    render_expr(element),
                    render_ideal_ref(ideal)
                )),
            },
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// A script with all bindings evaluated into polynomials.
pub struct Evaluated {
    pub ring: Ring,
    pub polys: HashMap<String, Poly>,
    pub ideals: HashMap<String, Vec<Poly>>,
    pub checks: Vec<Check>,
}

fn eval_expr(ring: &Ring, env: &HashMap<String, Poly>, e: &Expr) -> Result<Poly, ScriptError> {
    match e {
        Expr::Int(n) => Ok(Poly::constant(ring, (n % u64::from(ring.p())) as u32)),
        Expr::Name(name) => {
            if let Some(p) = env.get(name) {
                return Ok(p.clone());
            }
            Poly::var(ring, name).map_err(|_| ScriptError::UnknownPoly(name.clone()))
        }
        Expr::Neg(a) => {
            let a = eval_expr(ring, env, a)?;
            Ok(a.scale(ring.p() - 1))
        }
        Expr::Add(a, b) => Ok(eval_expr(ring, env, a)?.add(&eval_expr(ring, env, b)?)),
        Expr::Sub(a, b) => Ok(eval_expr(ring, env, a)?.sub(&eval_expr(ring, env, b)?)),
        Expr::Mul(a, b) => Ok(eval_expr(ring, env, a)?.mul(&eval_expr(ring, env, b)?)?),
        Expr::Pow(a, e) => Ok(eval_expr(ring, env, a)?.pow_trunc(*e, None)?),
    }
}

fn eval_builtin(ring: &Ring, name: &str, n: usize) -> Result<Vec<Poly>, ScriptError> {
    let var = |pfx: &str, i: usize, j: usize| {
        let name = format!("{pfx}{i}{j}");
        Poly::var(ring, &name).map_err(|_| ScriptError::MissingMatrixVar(name))
    };
    let mut xs = Vec::with_capacity(n * n);
    let mut ys = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            xs.push(var("x", i, j)?);
            ys.push(var("y", i, j)?);
        }
    }
    let x = SymbolicMatrix::from_entries(n, n, xs)?;
    let y = SymbolicMatrix::from_entries(n, n, ys)?;
    let c = commutator(&x, &y)?;
    let gens = match name {
        "comm" => {
            let mut all = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    all.push(c.at(i, j).clone());
                }
            }
            all
        }
        "cross_ideal" => ideal_from_family(&c, IdealFamily::CrossDiagonal)?,
        "anti_ideal" => ideal_from_family(&c, IdealFamily::AntiDiagonal)?,
        "diag_ideal" => ideal_from_family(&c, IdealFamily::Diagonal)?,
        "offdiag_ideal" => ideal_from_family(&c, IdealFamily::OffDiagonal)?,
        other => unreachable!("builtin {other} is rejected by the parser"),
    };
    Ok(gens)
}

/// Evaluates every binding of a parsed script.
pub fn evaluate(script: &Script) -> Result<Evaluated, ScriptError> {
    let (p, vars) = match script.statements.first() {
        Some(Stmt::Ring { p, vars }) => (*p, vars.clone()),
        _ => {
            return err_at(1, 1, "a script must start with a ring declaration");
        }
    };
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    let ring = RingCtx::new(p, &names, MonomialOrder::GrevLex)?;
    let mut polys: HashMap<String, Poly> = HashMap::new();
    let mut ideals: HashMap<String, Vec<Poly>> = HashMap::new();
    let mut checks = Vec::new();
    for stmt in &script.statements[1..] {
        match stmt {
            Stmt::Ring { .. } => {
                return err_at(1, 1, "the ring is already declared");
            }
            Stmt::PolyBind { name, expr } => {
                let value = eval_expr(&ring, &polys, expr)?;
                polys.insert(name.clone(), value);
            }
            Stmt::IdealBind { name, source } => {
                let gens = match source {
                    IdealSource::List(exprs) => exprs
                        .iter()
                        .map(|e| eval_expr(&ring, &polys, e))
                        .collect::<Result<Vec<_>, _>>()?,
                    IdealSource::Builtin { name: b, n } => eval_builtin(&ring, b, *n)?,
                };
                ideals.insert(name.clone(), gens);
            }
            Stmt::Check(check) => checks.push(check.clone()),
        }
    }
    Ok(Evaluated {
        ring,
        polys,
        ideals,
        checks,
    })
}

impl Evaluated {
    /// Generators of a named or inline ideal.
    pub fn ideal_gens(&self, r: &IdealRef) -> Result<Vec<Poly>, ScriptError> {
        match r {
            IdealRef::Named(name) => self
                .ideals
                .get(name)
                .cloned()
                .ok_or_else(|| ScriptError::UnknownIdeal(name.clone())),
            IdealRef::Inline(exprs) => exprs
                .iter()
                .map(|e| eval_expr(&self.ring, &self.polys, e))
                .collect(),
        }
    }

    /// A bound polynomial by name (for the jacobian subcommand).
    pub fn poly(&self, name: &str) -> Result<Poly, ScriptError> {
        self.polys
            .get(name)
            .cloned()
            .ok_or_else(|| ScriptError::UnknownPoly(name.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Running checks into a certificate
// ---------------------------------------------------------------------------

fn check_description(check: &Check) -> String {
    match check {
        Check::Fpure { ideal, zero } => {
            format!(
                "check fpure {}{}",
                render_ideal_ref(ideal),
                render_zero(zero)
            )
        }
        Check::Freg { ideal, .. } => format!("check freg {}", render_ideal_ref(ideal)),
        Check::Dim0 { ideal } => format!("check dim0 {}", render_ideal_ref(ideal)),
        Check::Member { element, ideal } => {
            format!(
                "check member {} in {}",
                render_expr(element),
                render_ideal_ref(ideal)
            )
        }
    }
}

fn criterion_to_step(
    desc: String,
    anchor: String,
    status: CriterionStatus,
    witness: Option<String>,
    note: Option<String>,
) -> Step {
    let st = match status {
        CriterionStatus::Holds => StepStatus::Passed,
        CriterionStatus::Fails => StepStatus::Failed,
        CriterionStatus::Inconclusive => StepStatus::Inconclusive,
    };
    let mut step = Step::new(desc, st, anchor);
    if let Some(w) = witness {
        step = step.with_witness(w);
    }
    if let Some(n) = note {
        step = step.with_note(n);
    }
    step
}

/// Runs every check directive of a script and assembles a certificate.
/// Check outcomes map directly onto step statuses: a script certificate is
/// "verified" exactly when every check holds.
pub fn run_script(
    script: &Script,
    claim_id: &str,
    budget: u64,
) -> Result<(Certificate, ClaimPerf), ScriptError> {
    let eval = evaluate(script)?;
    let p = eval.ring.p();
    let mut steps = Vec::new();
    let mut millis = Vec::new();
    for check in &eval.checks {
        let started = std::time::Instant::now();
        let desc = check_description(check);
        let step = match check {
            Check::Fpure { ideal, zero } => {
                let gens = eval.ideal_gens(ideal)?;
                let count = gens.len();
                let res = fedder_ci_check(&Ideal::new(&eval.ring, gens), zero, budget)?;
                let omega = if count == 1 {
                    "g_1".to_string()
                } else {
                    format!("(g_1 ... g_{count})")
                };
                let anchor = format!(
                    "{omega}^({}) not in m^[{p}]{}",
                    p - 1,
                    if zero.is_empty() {
                        String::new()
                    } else {
                        format!(" mod ({})", zero.join(", "))
                    }
                );
                criterion_to_step(
                    desc,
                    anchor,
                    res.status,
                    res.survivor.as_ref().map(render_survivor),
                    res.note,
                )
            }
            Check::Freg {
                ideal,
                witness,
                prefactors,
                q_list,
                zero,
            } => {
                let gens = eval.ideal_gens(ideal)?;
                let count = gens.len();
                let spec = WitnessSpec {
                    ring: eval.ring.clone(),
                    test_element: eval_expr(&eval.ring, &eval.polys, witness)?,
                    prefactors: prefactors
                        .iter()
                        .map(|(e, q)| Ok((eval_expr(&eval.ring, &eval.polys, e)?, *q)))
                        .collect::<Result<Vec<_>, ScriptError>>()?,
                    ci_generators: gens,
                    zeroed_vars: zero.clone(),
                };
                let qs = q_list
                    .iter()
                    .map(|q| q.eval(p).map_err(ScriptError::from))
                    .collect::<Result<Vec<_>, _>>()?;
                let res = glassbrenner_ci_check(&spec, &qs, budget)?;
                let omega = if count == 1 {
                    "g_1".to_string()
                } else {
                    format!("(g_1 ... g_{count})")
                };
                let anchor = format!(
                    "prefactors * c * {omega}^(q-1) not in m^[q] for some q in {{{}}}",
                    q_list
                        .iter()
                        .map(render_qexpr)
                        .collect::<Vec<_>>()
                        .join(", ")
                );
                criterion_to_step(
                    desc,
                    anchor,
                    res.status,
                    res.survivor
                        .as_ref()
                        .map(|s| format!("{} at q = {}", render_survivor(s), res.q)),
                    res.note,
                )
            }
            Check::Dim0 { ideal } => {
                let gens = eval.ideal_gens(ideal)?;
                let anchor = "the quotient by the ideal is zero-dimensional".to_string();
                match Ideal::new(&eval.ring, gens).groebner(budget) {
                    Ok(gb) => {
                        let ok = gb.dim_is_zero();
                        Step::new(
                            desc,
                            if ok {
                                StepStatus::Passed
                            } else {
                                StepStatus::Failed
                            },
                            anchor,
                        )
                        .with_witness(format!("Krull dimension {}", gb.quotient_dim()))
                    }
                    Err(e @ GbError::Budget { .. }) => {
                        Step::new(desc, StepStatus::Inconclusive, anchor).with_note(e.to_string())
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Check::Member { element, ideal } => {
                let f = eval_expr(&eval.ring, &eval.polys, element)?;
                let gens = eval.ideal_gens(ideal)?;
                let anchor = "the element reduces to zero against a reduced basis".to_string();
                match Ideal::new(&eval.ring, gens).groebner(budget) {
                    Ok(gb) => {
                        let nf = normal_form(&f, gb.polys());
                        let ok = nf.is_zero();
                        Step::new(
                            desc,
                            if ok {
                                StepStatus::Passed
                            } else {
                                StepStatus::Failed
                            },
                            anchor,
                        )
                        .with_witness(format!("normal form {nf}"))
                    }
                    Err(e @ GbError::Budget { .. }) => {
                        Step::new(desc, StepStatus::Inconclusive, anchor).with_note(e.to_string())
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        };
        millis.push(started.elapsed().as_millis() as u64);
        steps.push(step);
    }
    let total = millis.iter().sum();
    let cert = Certificate::from_steps(claim_id, vec![p], steps);
    let perf = ClaimPerf {
        claim_id: claim_id.to_string(),
        step_millis: millis,
        total_millis: total,
    };
    Ok((cert, perf))
}

fn render_survivor(s: &Poly) -> String {
    if s.term_count() <= 8 {
        format!("survivor {s}")
    } else {
        format!("survivor nonzero with {} terms", s.term_count())
    }
}

/// Parses a standalone polynomial expression against a ring whose variables
/// are the only names in scope. Used by tests and the renderer round-trip.
pub fn parse_poly(ring: &Ring, text: &str) -> Result<Poly, ScriptError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        ring: None,
        exprs: (0..ring.nvars())
            .map(|i| ring.var_name(i).to_string())
            .collect(),
        ideals: HashSet::new(),
    };
    let expr = parser.parse_expr()?;
    let t = parser.next();
    if !matches!(t.tok, Tok::Eof | Tok::Sep) {
        return err_at(t.line, t.col, format!("unexpected trailing {}", t.tok));
    }
    eval_expr(ring, &HashMap::new(), &expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::Overall;
    use crate::groebner::DEFAULT_BUDGET;

    fn parse_err(text: &str) -> (usize, usize, String) {
        match parse_script(text) {
            Err(ScriptError::Parse { line, col, message }) => (line, col, message),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_script_parses_and_dim0_fails_honestly() {
        let script = parse_script("ring p=2 vars x y; poly f = x+y; check dim0 [f]").unwrap();
        assert_eq!(script.statements.len(), 3);
        let (cert, perf) = run_script(&script, "script", DEFAULT_BUDGET).unwrap();
        assert_eq!(cert.overall, Overall::Failed);
        assert_eq!(cert.steps[0].witness.as_deref(), Some("Krull dimension 1"));
        assert_eq!(perf.step_millis.len(), 1);
    }

    #[test]
    fn commutator_entry_matches_builtin() {
        // The script text encodes one commutator entry; the builtin builds
        // the full matrix from the same variables.
        let vars: Vec<String> = ["x", "y"]
            .iter()
            .flat_map(|p| (1..=2).flat_map(move |i| (1..=2).map(move |j| format!("{p}{i}{j}"))))
            .collect();
        let text = format!(
            "ring p = 3 vars {}\npoly c12 = x11*y12 + x12*y22 - y11*x12 - y12*x22\nideal I = comm(2)\ncheck member c12 in I\n",
            vars.join(" ")
        );
        let script = parse_script(&text).unwrap();
        let (cert, _) = run_script(&script, "s", DEFAULT_BUDGET).unwrap();
        assert_eq!(cert.overall, Overall::Verified);
    }

    #[test]
    fn quadric_script_f1_equals_kernel_poly() {
        let names: Vec<String> = ["w", "z"]
            .iter()
            .flat_map(|p| (1..=3).flat_map(move |i| (1..=3).map(move |j| format!("{p}{i}{j}"))))
            .collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let ring = RingCtx::new(5, &refs, MonomialOrder::GrevLex).unwrap();
        let f1 = parse_poly(&ring, "w21*z12 - w12*z21 + w23*z32 - w32*z23").unwrap();
        let w21z12 = Poly::var(&ring, "w21")
            .unwrap()
            .mul(&Poly::var(&ring, "z12").unwrap())
            .unwrap();
        assert_eq!(f1.term_count(), 4);
        assert!(f1.to_string().contains("w21*z12"));
        // Subtracting the leading product leaves three terms.
        assert_eq!(f1.sub(&w21z12).term_count(), 3);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let (line, col, msg) = parse_err("poly = x");
        assert_eq!((line, col), (1, 1));
        assert!(msg.contains("ring"), "{msg}");

        let (line, col, msg) = parse_err("ring p = 2 vars x\npoly = x");
        assert_eq!((line, col), (2, 6));
        assert!(msg.contains("name"), "{msg}");

        let (line, col, msg) = parse_err("ring p = 4 vars x");
        assert_eq!((line, col), (1, 10));
        assert_eq!(msg, "4 is not prime");

        let (_, _, msg) = parse_err("ring p = 2 vars x\npoly f = x + y");
        assert!(msg.contains("unknown name \"y\""), "{msg}");

        let (_, _, msg) = parse_err("ring p = 2 vars x\npoly x = x");
        assert!(msg.contains("already bound"), "{msg}");

        let (_, _, msg) = parse_err("ring p = 2 vars x\nring p = 3 vars y");
        assert!(msg.contains("already declared"), "{msg}");

        let (_, _, msg) = parse_err("ring p = 2 vars x\ncheck fpure J");
        assert!(msg.contains("unknown ideal"), "{msg}");
    }

    #[test]
    fn qexpr_forms_parse() {
        let text = "ring p = 3 vars x\ncheck freg [x] witness 1 prefactor x ^ p-2 q p, p^2, p^2-1, p-1, 9\n";
        let script = parse_script(text).unwrap();
        match &script.statements[1] {
            Stmt::Check(Check::Freg {
                prefactors, q_list, ..
            }) => {
                assert_eq!(prefactors[0].1, QExpr::PMinus(2));
                assert_eq!(
                    q_list,
                    &[
                        QExpr::P,
                        QExpr::PSquared,
                        QExpr::PSquaredMinus(1),
                        QExpr::PMinus(1),
                        QExpr::Int(9)
                    ]
                );
            }
            other => panic!("unexpected statement {other:?}"),
        }
    }

    #[test]
    fn fpure_and_freg_on_a_principal_variable() {
        let text =
            "ring p = 3 vars x y\nideal I = [x]\ncheck fpure I\ncheck freg I witness 1 q p\n";
        let script = parse_script(text).unwrap();
        let (cert, _) = run_script(&script, "s", DEFAULT_BUDGET).unwrap();
        assert_eq!(cert.overall, Overall::Verified);
        assert_eq!(cert.steps[0].witness.as_deref(), Some("survivor x^2"));
    }

    #[test]
    fn fpure_square_fails_and_member_works() {
        let text = "ring p = 3 vars x y\ncheck fpure [x^2]\ncheck member x*y in [x]\ncheck member y in [x]\n";
        let script = parse_script(text).unwrap();
        let (cert, _) = run_script(&script, "s", DEFAULT_BUDGET).unwrap();
        assert_eq!(cert.overall, Overall::Failed);
        assert_eq!(cert.steps[0].status, StepStatus::Failed);
        assert_eq!(cert.steps[1].status, StepStatus::Passed);
        assert_eq!(cert.steps[2].status, StepStatus::Failed);
        assert_eq!(cert.steps[2].witness.as_deref(), Some("normal form y"));
    }

    #[test]
    fn render_parse_round_trip_on_a_full_script() {
        let text = "ring p = 3 vars x y z\npoly f = x*y - z^2 + 2\npoly g = -(x + y)*z\nideal I = [f, g, x^3]\nideal J = comm(1)\ncheck fpure I zero [z]\ncheck freg I witness f prefactor x ^ p-2 prefactor g ^ 4 q p, p^2 zero [y z]\ncheck dim0 [x, y, z]\ncheck member f in I\n";
        let script = parse_script(text).unwrap();
        let rendered = render_script(&script);
        let reparsed = parse_script(&rendered).unwrap();
        assert_eq!(script, reparsed);
        assert_eq!(render_script(&reparsed), rendered);
    }

    #[test]
    fn canonical_poly_text_round_trips() {
        let names = ["x", "y", "z"];
        let ring = RingCtx::new(7, &names, MonomialOrder::GrevLex).unwrap();
        for text in ["0", "1", "x", "6*x + 6*y", "x^2", "2*x*y^3 + 5", "x*y*z"] {
            let poly = parse_poly(&ring, text).unwrap();
            assert_eq!(poly.to_string(), text, "canonical text should be fixed");
            let again = parse_poly(&ring, &poly.to_string()).unwrap();
            assert_eq!(poly, again);
        }
    }

    #[test]
    fn garbage_is_rejected_not_crashed() {
        for bad in [
            "ring",
            "ring p",
            "ring p = ",
            "ring p = 2",
            "ring p = 2 vars",
            "ring p = 2 vars x; poly f = ",
            "ring p = 2 vars x; poly f = x +",
            "ring p = 2 vars x; ideal I = ",
            "ring p = 2 vars x; ideal I = []",
            "ring p = 2 vars x; ideal I = comm",
            "ring p = 2 vars x; ideal I = wat(2)",
            "ring p = 2 vars x; check",
            "ring p = 2 vars x; check wat [x]",
            "ring p = 2 vars x; check freg [x] q p",
            "ring p = 2 vars x; check member x",
            "ring p = 2 vars x; check fpure [x] zero [q",
            "ring p = 2 vars x @",
            "ring p = 2 vars x; poly f = x ^ y",
            "ring p = 2 vars x; poly f = x x",
        ] {
            assert!(
                matches!(parse_script(bad), Err(ScriptError::Parse { .. })),
                "expected a parse error for {bad:?}"
            );
        }
    }

    #[test]
    fn builtin_requires_standard_variables() {
        let script = parse_script("ring p = 3 vars a b\nideal I = comm(2)\n").unwrap();
        match run_script(&script, "s", DEFAULT_BUDGET) {
            Err(ScriptError::MissingMatrixVar(name)) => assert_eq!(name, "x11"),
            other => panic!("expected a missing-variable error, got {other:?}"),
        }
    }
}
