//! Text grammar for constraints.
//!
//! ```text
//! k = i XOR j          logic, any binary operation name in upper case
//! k = NOT i            logic, unary (NOT, COPY)
//! k = CONST1           logic, constant
//! z = x + y + 1        equation over +, -, *, ^, integers and parentheses
//! x + y + z <= 2       inequality: a sum of distinct variables against an integer
//! ```
//!
//! Juxtaposition multiplies, so `2(x + y)` and `2x` both work. Errors carry
//! a 1-based line and column.

use std::fmt;

use penaltykit_core::logic::BoolOp;
use penaltykit_core::penalty::{Constraint, Sense};
use penaltykit_core::poly::{Expr, VarId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Eq,
    Le,
    Ge,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

/// Tokens with their 1-based columns.
fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let err = |column: usize, message: String| ParseError { line, column, message };
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = col0 + k;
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            k += 1;
        } else if c == '<' || c == '>' {
            if chars.get(k + 1) != Some(&'=') {
                return Err(err(col, format!("expected `{c}=`; strict comparisons are not supported")));
            }
            out.push((if c == '<' { Tok::Le } else { Tok::Ge }, col));
            k += 2;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let text: String = chars[start..k].iter().collect();
            let n = text.parse::<i64>().map_err(|_| err(col, format!("integer `{text}` is too large")))?;
            out.push((Tok::Int(n), col));
        } else if is_ident_start(c) {
            let start = k;
            while k < chars.len() && is_ident_char(chars[k]) {
                k += 1;
            }
            out.push((Tok::Ident(chars[start..k].iter().collect()), col));
        } else {
            return Err(err(col, format!("unexpected character `{c}`")));
        }
    }
    out.push((Tok::End, col0 + chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.col(), message: message.into() }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    terms.push(Expr::Neg(Box::new(self.term()?)));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap_or_else(|| unreachable!()) } else { Expr::Sum(terms) })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.unary()?];
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    factors.push(self.unary()?);
                }
                Tok::Ident(_) | Tok::Int(_) | Tok::LParen => factors.push(self.power()?),
                _ => break,
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap_or_else(|| unreachable!()) } else { Expr::Product(factors) })
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match *self.peek() {
            Tok::Int(n) if n <= 16 => {
                self.bump();
                Ok(base.pow(n as u32))
            }
            Tok::Int(_) => Err(self.error("exponent above 16")),
            _ => Err(self.unexpected("an integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::int(n))
            }
            Tok::Ident(name) => {
                if is_keyword(&name) && BoolOp::from_name(&name).is_some() {
                    return Err(self.error(format!("`{name}` is an operation; write `out = a {name} b` on its own")));
                }
                self.bump();
                Ok(Expr::Var(VarId::input(name)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(e)
            }
            _ => Err(self.unexpected("a variable, integer or `(`")),
        }
    }
}

/// Operation keywords are upper case and at least two letters, so single
/// capitals stay usable as variable names.
fn is_keyword(s: &str) -> bool {
    s.len() > 1 && s.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit())
}

fn op_keyword(t: &Tok) -> Option<BoolOp> {
    match t {
        Tok::Ident(s) if is_keyword(s) => BoolOp::from_name(s),
        _ => None,
    }
}

fn ident(t: &Tok) -> Option<&str> {
    match t {
        Tok::Ident(s) if op_keyword(t).is_none() => Some(s),
        _ => None,
    }
}

/// Recognizes `out = a OP b`, `out = OP a` and `out = OP`.
fn logic_form(toks: &[(Tok, usize)]) -> Option<Constraint> {
    let t: Vec<&Tok> = toks.iter().map(|(t, _)| t).collect();
    let out = ident(t[0])?;
    if *t[1] != Tok::Eq {
        return None;
    }
    let rest = &t[2..t.len() - 1];
    let (op, inputs): (BoolOp, Vec<&str>) = match rest {
        [a, op, b] => (op_keyword(op)?, vec![ident(a)?, ident(b)?]),
        [op, a] => (op_keyword(op)?, vec![ident(a)?]),
        [op] => (op_keyword(op)?, vec![]),
        _ => return None,
    };
    (op.arity() == inputs.len()).then(|| Constraint::Logic {
        output: VarId::output(out),
        op,
        inputs: inputs.into_iter().map(VarId::input).collect(),
    })
}

fn logic_arity_error(toks: &[(Tok, usize)], line: usize) -> Option<ParseError> {
    let (k, op) = toks.iter().enumerate().skip(2).find_map(|(k, (t, _))| op_keyword(t).map(|op| (k, op)))?;
    let got = toks.len() - 3 - 1;
    (*toks.get(1).map(|(t, _)| t)? == Tok::Eq && got != op.arity()).then(|| ParseError {
        line,
        column: toks[k].1,
        message: format!("{} takes {} input(s), found {got}", op.name(), op.arity()),
    })
}

/// Parses one constraint. `line` is used for error positions.
pub fn parse_constraint_at(src: &str, line: usize, col0: usize) -> Result<Constraint, ParseError> {
    let toks = lex(src, line, col0)?;
    if toks.len() >= 4 {
        if let Some(c) = logic_form(&toks) {
            return Ok(c);
        }
        if let Some(e) = logic_arity_error(&toks, line) {
            return Err(e);
        }
    }
    let mut p = Parser { toks, pos: 0, line };
    if *p.peek() == Tok::End {
        return Err(p.error("empty constraint"));
    }
    let lhs = p.expr()?;
    let rel = p.peek().clone();
    if !matches!(rel, Tok::Eq | Tok::Le | Tok::Ge) {
        return Err(p.unexpected("`=`, `<=` or `>=`"));
    }
    p.bump();
    let rhs_col = p.col();
    let rhs = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of constraint"));
    }
    let lhs = mark_output(lhs);
    match rel {
        Tok::Eq => Ok(Constraint::Equation { lhs, rhs }),
        _ => {
            let bound = integer_value(&rhs).ok_or(ParseError {
                line,
                column: rhs_col,
                message: "the right side of an inequality must be an integer".into(),
            })?;
            let sense = if rel == Tok::Le { Sense::Le } else { Sense::Ge };
            Ok(Constraint::Inequality { lhs, sense, bound })
        }
    }
}

pub fn parse_constraint(src: &str) -> Result<Constraint, ParseError> {
    parse_constraint_at(src, 1, 1)
}

/// A lone variable on the left of `=` is what the equation defines.
fn mark_output(lhs: Expr) -> Expr {
    match lhs {
        Expr::Var(v) => Expr::Var(VarId::output(v.name())),
        other => other,
    }
}

fn integer_value(e: &Expr) -> Option<i64> {
    match e {
        Expr::Const(c) if c.is_integer() => Some(*c.numer()),
        Expr::Neg(x) => integer_value(x).and_then(i64::checked_neg),
        _ => None,
    }
}

/// Comma or whitespace separated names, as used by `--vars i,j,k`.
pub fn parse_name_list(s: &str) -> Vec<String> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|x| !x.is_empty()).map(String::from).collect()
}

/// `a=1,b=0` or `a=1 b=0`.
pub fn parse_assignments(s: &str) -> Result<Vec<(String, bool)>, ParseError> {
    let mut out = Vec::new();
    let mut col = 1;
    for part in s.split(',') {
        for item in part.split_whitespace() {
            let at = col + part.find(item).unwrap_or(0);
            let (name, value) = item.split_once('=').ok_or_else(|| ParseError {
                line: 1,
                column: at,
                message: format!("expected `name=0` or `name=1`, found `{item}`"),
            })?;
            let bit = match value {
                "0" => false,
                "1" => true,
                _ => {
                    return Err(ParseError { line: 1, column: at + name.len() + 1, message: format!("`{value}` is not 0 or 1") })
                }
            };
            out.push((name.to_string(), bit));
        }
        col += part.len() + 1;
    }
    Ok(out)
}
