//! Expression language for forms, polyvector fields and rational functions.
//!
//! ```text
//! expr   := wedge (('+' | '-') wedge)*
//! wedge  := term ('/\' term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' integer)?
//! base   := integer | variable | 'd(' variable ')' | 'D(' variable ')' | '(' expr ')'
//! ```
//!
//! `d(x)` is the coordinate differential and `D(x)` the coordinate vector
//! field. Rationals are written as quotients, e.g. `(1/3)*x^3*d(y)`.

use std::fmt;

use intlocus::exterior::{Form, MultiVector};
use intlocus::{Chart, RatFunc, Rational};
use num_bigint::BigInt;

/// Parsed value: a function, a differential form or a polyvector field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(RatFunc),
    Form(Form),
    Vector(MultiVector),
}

impl Value {
    pub fn kind(&self) -> String {
        match self {
            Value::Scalar(_) => "function".into(),
            Value::Form(f) => format!("{}-form", f.degree()),
            Value::Vector(v) => format!("{}-vector", v.degree()),
        }
    }

    /// Renders the value in the input syntax.
    pub fn render(&self, chart: &Chart) -> String {
        match self {
            Value::Scalar(f) => f.display(chart.names()).to_string(),
            Value::Form(f) => f.to_string(),
            Value::Vector(v) => v.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
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

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Wedge,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number '{n}'"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Wedge => "'/\\'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn err(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError { line: pos.line, column: pos.column, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            Tok::Int(digits.parse().expect("ascii digits"))
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '/' if chars.get(i) == Some(&'\\') => {
                    i += 1;
                    Tok::Wedge
                }
                '/' => Tok::Slash,
                other => return Err(err(pos, format!("unexpected character '{other}'"))),
            }
        };
        column += i - start;
        out.push((tok, pos));
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

struct Parser<'a> {
    chart: &'a Chart,
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let (tok, pos) = self.bump();
        if tok == want {
            Ok(())
        } else {
            Err(err(pos, format!("expected {}, found {}", want.describe(), tok.describe())))
        }
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.wedge()?;
        loop {
            let negate = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(acc),
            };
            let (_, pos) = self.bump();
            let rhs = self.wedge()?;
            acc = add(acc, rhs, negate, pos)?;
        }
    }

    fn wedge(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.term()?;
        while *self.peek() == Tok::Wedge {
            let (_, pos) = self.bump();
            let rhs = self.term()?;
            acc = wedge(acc, rhs, pos)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.factor()?;
        loop {
            let divide = match self.peek() {
                Tok::Star => false,
                Tok::Slash => true,
                _ => return Ok(acc),
            };
            let (_, pos) = self.bump();
            let rhs = self.factor()?;
            acc = if divide { divide_by(acc, rhs, pos)? } else { multiply(acc, rhs, pos)? };
        }
    }

    fn factor(&mut self) -> Result<Value, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(negate(self.factor()?));
        }
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let (_, pos) = self.bump();
        let (tok, epos) = self.bump();
        let Tok::Int(e) = tok else {
            return Err(err(epos, format!("expected a nonnegative integer exponent, found {}", tok.describe())));
        };
        let e: u32 = e.try_into().map_err(|_| err(epos, "exponent too large"))?;
        match base {
            Value::Scalar(f) => Ok(Value::Scalar(f.pow(e))),
            other => Err(err(pos, format!("cannot raise a {} to a power", other.kind()))),
        }
    }

    fn variable(&mut self) -> Result<usize, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Ident(name) => self
                .chart
                .index_of(&name)
                .ok_or_else(|| err(pos, format!("unknown variable '{name}'"))),
            other => Err(err(pos, format!("expected a variable, found {}", other.describe()))),
        }
    }

    fn base(&mut self) -> Result<Value, ParseError> {
        let n = self.chart.dim();
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(v) => Ok(Value::Scalar(RatFunc::constant(n, Rational::from_integer(v)))),
            Tok::LParen => {
                let v = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(v)
            }
            Tok::Ident(name) if (name == "d" || name == "D") && *self.peek() == Tok::LParen => {
                self.bump();
                let i = self.variable()?;
                self.expect(Tok::RParen)?;
                Ok(if name == "d" {
                    Value::Form(Form::dx(self.chart, i))
                } else {
                    Value::Vector(MultiVector::d_dx(self.chart, i))
                })
            }
            Tok::Ident(name) => match self.chart.index_of(&name) {
                Some(i) => Ok(Value::Scalar(self.chart.var(i))),
                None => Err(err(pos, format!("unknown variable '{name}'"))),
            },
            other => Err(err(pos, format!("unexpected {}", other.describe()))),
        }
    }
}

fn negate(v: Value) -> Value {
    match v {
        Value::Scalar(f) => Value::Scalar(-f),
        Value::Form(f) => Value::Form(-f),
        Value::Vector(v) => Value::Vector(-v),
    }
}

fn add(a: Value, b: Value, subtract: bool, pos: Pos) -> Result<Value, ParseError> {
    let b = if subtract { negate(b) } else { b };
    let mixing = |a: &Value, b: &Value| err(pos, format!("degree mixing: cannot add a {} and a {}", a.kind(), b.kind()));
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(&x + &y)),
        (Value::Form(x), Value::Form(y)) if x.degree() == y.degree() => {
            Ok(Value::Form(x.checked_add(&y).map_err(|e| err(pos, e.to_string()))?))
        }
        (Value::Vector(x), Value::Vector(y)) if x.degree() == y.degree() => {
            Ok(Value::Vector(x.checked_add(&y).map_err(|e| err(pos, e.to_string()))?))
        }
        (a, b) => Err(mixing(&a, &b)),
    }
}

fn wedge(a: Value, b: Value, pos: Pos) -> Result<Value, ParseError> {
    let fail = |e: intlocus::Error| err(pos, e.to_string());
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(&x * &y)),
        (Value::Scalar(f), Value::Form(w)) | (Value::Form(w), Value::Scalar(f)) => Ok(Value::Form(w.scale(&f))),
        (Value::Scalar(f), Value::Vector(v)) | (Value::Vector(v), Value::Scalar(f)) => Ok(Value::Vector(v.scale(&f))),
        (Value::Form(x), Value::Form(y)) => Ok(Value::Form(x.wedge(&y).map_err(fail)?)),
        (Value::Vector(x), Value::Vector(y)) => Ok(Value::Vector(x.wedge(&y).map_err(fail)?)),
        (a, b) => Err(err(pos, format!("cannot wedge a {} with a {}", a.kind(), b.kind()))),
    }
}

fn multiply(a: Value, b: Value, pos: Pos) -> Result<Value, ParseError> {
    match (&a, &b) {
        (Value::Scalar(_), _) | (_, Value::Scalar(_)) => wedge(a, b, pos),
        _ => Err(err(pos, format!("'*' needs a function operand; use '/\\' to multiply a {} and a {}", a.kind(), b.kind()))),
    }
}

fn divide_by(a: Value, b: Value, pos: Pos) -> Result<Value, ParseError> {
    let Value::Scalar(d) = b else {
        return Err(err(pos, format!("cannot divide by a {}", b.kind())));
    };
    let inv = d.inv().map_err(|_| err(pos, "division by zero"))?;
    wedge(a, Value::Scalar(inv), pos)
}

/// Parses `text` over `chart`.
pub fn parse_expression(text: &str, chart: &Chart) -> Result<Value, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { chart, toks, at: 0 };
    if *p.peek() == Tok::End {
        return Err(err(p.pos(), "empty expression"));
    }
    let v = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(err(p.pos(), format!("unexpected {}", p.peek().describe())));
    }
    Ok(v)
}

/// Parses a rational literal such as `-3`, `2/5` or ` 7 / 4 `.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let r: Rational = t.parse().ok()?;
    Some(r)
}
