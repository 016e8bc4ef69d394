//! Point-function expressions for the command line.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' factor)?
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Identifiers are the variables `s` and `x` and the functions `sin`, `cos`,
//! `exp`, `log`, `sqrt`, `abs`. `^` is right-associative and binds tighter
//! than `*` and `/`; `-s^2` is `-(s^2)`.

use std::fmt;

use thiserror::Error;

use crate::error::Error;

/// Nesting limit for the parser.
pub const MAX_DEPTH: usize = 64;

/// Names accepted as identifiers.
pub const ALLOWED_NAMES: [&str; 8] = ["s", "x", "sin", "cos", "exp", "log", "sqrt", "abs"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at byte {offset}: found {found}, expected one of: {}", .expected.join(", "))]
    Syntax {
        offset: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("unknown identifier `{name}` at byte {offset}; allowed names: {}", ALLOWED_NAMES.join(", "))]
    UnknownIdentifier { offset: usize, name: String },
    #[error("expression nested deeper than {limit} levels at byte {offset}")]
    TooDeep { offset: usize, limit: usize },
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Empty => None,
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::TooDeep { offset, .. } => Some(*offset),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("domain fault in `{subexpr}`: {reason}")]
    Domain { subexpr: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    S,
    X,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::S => "s",
            Var::X => "x",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Sin, Func::Cos, Func::Exp, Func::Log, Func::Sqrt, Func::Abs];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Num(f64),
    Var(Var),
    Neg(Box<Expression>),
    Bin(BinOp, Box<Expression>, Box<Expression>),
    Call(Func, Box<Expression>),
}

/// Values for the free variables.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Binding {
    pub s: Option<f64>,
    pub x: Option<f64>,
}

impl Binding {
    pub fn s(value: f64) -> Self {
        Binding {
            s: Some(value),
            x: None,
        }
    }

    pub fn x(value: f64) -> Self {
        Binding {
            s: None,
            x: Some(value),
        }
    }

    pub fn with_s(mut self, value: f64) -> Self {
        self.s = Some(value);
        self
    }

    pub fn with_x(mut self, value: f64) -> Self {
        self.x = Some(value);
        self
    }

    fn get(&self, var: Var) -> Option<f64> {
        match var {
            Var::S => self.s,
            Var::X => self.x,
        }
    }
}

pub fn parse(text: &str) -> Result<Expression, ParseError> {
    Expression::parse(text)
}

pub fn evaluate(e: &Expression, binding: &Binding) -> Result<f64, EvalError> {
    e.eval(binding)
}

impl Expression {
    pub fn parse(text: &str) -> Result<Expression, ParseError> {
        if text.trim().is_empty() {
            return Err(ParseError::Empty);
        }
        let tokens = lex(text)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            depth: 0,
        };
        let e = p.expr()?;
        let t = p.peek();
        if t.kind != Tok::End {
            return Err(ParseError::Syntax {
                offset: t.offset,
                found: t.kind.describe(),
                expected: vec!["operator", "end of input"],
            });
        }
        Ok(e)
    }

    pub fn eval(&self, binding: &Binding) -> Result<f64, EvalError> {
        let value = match self {
            Expression::Num(c) => *c,
            Expression::Var(v) => binding
                .get(*v)
                .ok_or_else(|| EvalError::Unbound(v.name().to_string()))?,
            Expression::Neg(e) => -e.eval(binding)?,
            Expression::Bin(op, l, r) => {
                let (a, b) = (l.eval(binding)?, r.eval(binding)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expression::Call(f, arg) => {
                let a = arg.eval(binding)?;
                match f {
                    Func::Log if a <= 0.0 => return Err(self.fault(format!("log of {a}"))),
                    Func::Sqrt if a < 0.0 => return Err(self.fault(format!("sqrt of {a}"))),
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Log => a.ln(),
                    Func::Sqrt => a.sqrt(),
                    Func::Abs => a.abs(),
                }
            }
        };
        if value.is_nan() {
            return Err(self.fault("result is not a number".into()));
        }
        Ok(value)
    }

    fn fault(&self, reason: String) -> EvalError {
        EvalError::Domain {
            subexpr: self.to_string(),
            reason,
        }
    }

    /// Evaluates with `s` bound.
    pub fn eval_s(&self, s: f64) -> Result<f64, EvalError> {
        self.eval(&Binding::s(s))
    }

    /// Evaluates with both `s` and `x` bound to `value`; for one-variable use.
    pub fn eval_any(&self, value: f64) -> Result<f64, EvalError> {
        self.eval(&Binding::s(value).with_x(value))
    }

    pub fn occurrences(&self, var: Var) -> usize {
        match self {
            Expression::Num(_) => 0,
            Expression::Var(v) => usize::from(*v == var),
            Expression::Neg(e) | Expression::Call(_, e) => e.occurrences(var),
            Expression::Bin(_, l, r) => l.occurrences(var) + r.occurrences(var),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expression::Num(_) | Expression::Var(_) => 1,
            Expression::Neg(e) | Expression::Call(_, e) => 1 + e.depth(),
            Expression::Bin(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    fn uses_trig(&self) -> bool {
        match self {
            Expression::Num(_) | Expression::Var(_) => false,
            Expression::Call(Func::Sin | Func::Cos, _) => true,
            Expression::Neg(e) | Expression::Call(_, e) => e.uses_trig(),
            Expression::Bin(_, l, r) => l.uses_trig() || r.uses_trig(),
        }
    }

    /// Exact `(inf, sup)` of the expression over `var ∈ [lo, hi]`.
    ///
    /// Available only when `var` occurs at most once (the interval extension
    /// is then exact) and every operation on the path is monotone piecewise;
    /// trigonometric functions are refused.
    pub fn extrema(&self, var: Var, lo: f64, hi: f64) -> Result<(f64, f64), Error> {
        if self.occurrences(var) > 1 {
            return Err(Error::NoOracle(format!(
                "`{self}` mentions {} more than once",
                var.name()
            )));
        }
        if self.uses_trig() {
            return Err(Error::NoOracle(format!("`{self}` is not a monotone composition")));
        }
        self.range(var, lo, hi)
    }

    fn range(&self, var: Var, lo: f64, hi: f64) -> Result<(f64, f64), Error> {
        let refuse = |why: String| Error::NoOracle(format!("`{self}`: {why}"));
        Ok(match self {
            Expression::Num(c) => (*c, *c),
            Expression::Var(v) if *v == var => (lo, hi),
            Expression::Var(v) => {
                return Err(EvalError::Unbound(v.name().to_string()).into());
            }
            Expression::Neg(e) => {
                let (a, b) = e.range(var, lo, hi)?;
                (-b, -a)
            }
            Expression::Call(f, e) => {
                let (a, b) = e.range(var, lo, hi)?;
                match f {
                    Func::Exp => (a.exp(), b.exp()),
                    Func::Log if a <= 0.0 => return Err(self.fault(format!("log of {a}")).into()),
                    Func::Log => (a.ln(), b.ln()),
                    Func::Sqrt if a < 0.0 => return Err(self.fault(format!("sqrt of {a}")).into()),
                    Func::Sqrt => (a.sqrt(), b.sqrt()),
                    Func::Abs if a >= 0.0 => (a, b),
                    Func::Abs if b <= 0.0 => (-b, -a),
                    Func::Abs => (0.0, b.max(-a)),
                    Func::Sin | Func::Cos => return Err(refuse("trigonometric".into())),
                }
            }
            Expression::Bin(op, l, r) => {
                let (a, b) = l.range(var, lo, hi)?;
                let (c, d) = r.range(var, lo, hi)?;
                match op {
                    BinOp::Add => (a + c, b + d),
                    BinOp::Sub => (a - d, b - c),
                    BinOp::Mul => hull(&[a * c, a * d, b * c, b * d]),
                    BinOp::Div => {
                        if c <= 0.0 && d >= 0.0 {
                            return Err(refuse("divisor range contains 0".into()));
                        }
                        hull(&[a / c, a / d, b / c, b / d])
                    }
                    BinOp::Pow => pow_range((a, b), (c, d)).ok_or_else(|| {
                        refuse("power is not monotone on this range".into())
                    })?,
                }
            }
        })
    }
}

fn hull(xs: &[f64]) -> (f64, f64) {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

fn pow_range((a, b): (f64, f64), (c, d): (f64, f64)) -> Option<(f64, f64)> {
    if c == d {
        let k = c;
        if k == 0.0 {
            return Some((1.0, 1.0));
        }
        if k.fract() == 0.0 && k.abs() < 1e15 {
            let even = (k as i64) % 2 == 0;
            if k < 0.0 && a <= 0.0 && b >= 0.0 {
                return None;
            }
            let (pa, pb) = (a.powf(k), b.powf(k));
            if even && a < 0.0 && b > 0.0 {
                return Some((0.0, pa.max(pb)));
            }
            return Some(hull(&[pa, pb]));
        }
        if a < 0.0 {
            return None;
        }
        return Some(hull(&[a.powf(k), b.powf(k)]));
    }
    if a == b && a > 0.0 {
        return Some(hull(&[a.powf(c), a.powf(d)]));
    }
    None
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, 0, f)
    }
}

// binding strength: sums 1, products 2, unary minus 3, powers 4, atoms 5
fn strength(e: &Expression) -> u8 {
    match e {
        Expression::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expression::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expression::Neg(_) => 3,
        Expression::Bin(BinOp::Pow, ..) => 4,
        Expression::Num(_) | Expression::Var(_) | Expression::Call(..) => 5,
    }
}

fn write_expr(e: &Expression, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if strength(e) < min {
        f.write_str("(")?;
        write_expr(e, 0, f)?;
        return f.write_str(")");
    }
    match e {
        Expression::Num(c) => write!(f, "{c}"),
        Expression::Var(v) => f.write_str(v.name()),
        Expression::Neg(inner) => {
            f.write_str("-")?;
            write_expr(inner, 3, f)
        }
        Expression::Call(func, arg) => {
            write!(f, "{}(", func.name())?;
            write_expr(arg, 0, f)?;
            f.write_str(")")
        }
        Expression::Bin(op, l, r) => {
            let (sym, lmin, rmin) = match op {
                BinOp::Add => (" + ", 1, 2),
                BinOp::Sub => (" - ", 1, 2),
                BinOp::Mul => (" * ", 2, 3),
                BinOp::Div => (" / ", 2, 3),
                BinOp::Pow => ("^", 5, 3),
            };
            write_expr(l, lmin, f)?;
            f.write_str(sym)?;
            write_expr(r, rmin, f)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(c) => format!("number {c}"),
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: Tok,
    offset: usize,
}

const EXPECT_OPERAND: [&str; 4] = ["number", "identifier", "'('", "'-'"];

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let kind = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                i = scan_number(bytes, i);
                let slice = &text[start..i];
                let value = slice.parse::<f64>().map_err(|_| ParseError::Syntax {
                    offset: start,
                    found: format!("malformed number `{slice}`"),
                    expected: vec!["number"],
                })?;
                tokens.push(Token {
                    kind: Tok::Num(value),
                    offset: start,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push(Token {
                    kind: Tok::Ident(text[start..i].to_string()),
                    offset: start,
                });
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().expect("in bounds");
                return Err(ParseError::Syntax {
                    offset: start,
                    found: format!("character {ch:?}"),
                    expected: vec!["number", "identifier", "operator", "'('", "')'"],
                });
            }
        };
        i += 1;
        tokens.push(Token {
            kind,
            offset: start,
        });
    }
    tokens.push(Token {
        kind: Tok::End,
        offset: text.len(),
    });
    Ok(tokens)
}

fn scan_number(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    i
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::TooDeep {
                offset: self.peek().offset,
                limit: MAX_DEPTH,
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().kind {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expression::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().kind {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expression::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn factor(&mut self) -> Result<Expression, ParseError> {
        self.enter()?;
        let e = if self.peek().kind == Tok::Minus {
            self.bump();
            Expression::Neg(Box::new(self.factor()?))
        } else {
            self.power()?
        };
        self.depth -= 1;
        Ok(e)
    }

    fn power(&mut self) -> Result<Expression, ParseError> {
        let base = self.atom()?;
        if self.peek().kind == Tok::Caret {
            self.bump();
            let exponent = self.factor()?;
            return Ok(Expression::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expression, ParseError> {
        let t = self.bump();
        match t.kind {
            Tok::Num(c) => Ok(Expression::Num(c)),
            Tok::Ident(name) => {
                if self.peek().kind == Tok::LParen {
                    let func = Func::from_name(&name).ok_or(ParseError::UnknownIdentifier {
                        offset: t.offset,
                        name,
                    })?;
                    self.bump();
                    self.enter()?;
                    let arg = self.expr()?;
                    self.depth -= 1;
                    self.expect_close()?;
                    return Ok(Expression::Call(func, Box::new(arg)));
                }
                match name.as_str() {
                    "s" => Ok(Expression::Var(Var::S)),
                    "x" => Ok(Expression::Var(Var::X)),
                    _ if Func::from_name(&name).is_some() => Err(ParseError::Syntax {
                        offset: self.peek().offset,
                        found: self.peek().kind.describe(),
                        expected: vec!["'('"],
                    }),
                    _ => Err(ParseError::UnknownIdentifier {
                        offset: t.offset,
                        name,
                    }),
                }
            }
            Tok::LParen => {
                self.enter()?;
                let inner = self.expr()?;
                self.depth -= 1;
                self.expect_close()?;
                Ok(inner)
            }
            other => Err(ParseError::Syntax {
                offset: t.offset,
                found: other.describe(),
                expected: EXPECT_OPERAND.to_vec(),
            }),
        }
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        let t = self.peek().clone();
        if t.kind == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::Syntax {
                offset: t.offset,
                found: t.kind.describe(),
                expected: vec!["')'", "operator"],
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at_s(text: &str, s: f64) -> f64 {
        parse(text).unwrap().eval_s(s).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(at_s("s^2", 3.0), 9.0);
        assert_eq!(at_s("2+3*s", 1.0), 5.0);
        assert_eq!(at_s("1/sqrt(s)", 4.0), 0.5);
        assert_eq!(at_s("sin(s)", 0.0), 0.0);
        assert_eq!(at_s("exp(0)", 123.0), 1.0);
    }

    #[test]
    fn sqrt_of_negative_is_domain_fault() {
        let err = parse("sqrt(-1)").unwrap().eval(&Binding::default()).unwrap_err();
        match err {
            EvalError::Domain { subexpr, .. } => assert_eq!(subexpr, "sqrt(-1)"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse("log(s - 1)").unwrap().eval_s(1.0),
            Err(EvalError::Domain { .. })
        ));
    }

    #[test]
    fn unbound_variable() {
        assert_eq!(
            parse("x + 1").unwrap().eval_s(2.0),
            Err(EvalError::Unbound("x".into()))
        );
    }

    #[test]
    fn unknown_identifier_lists_names() {
        let err = parse("2 * tan(s)").unwrap_err();
        assert_eq!(err.offset(), Some(4));
        assert!(err.to_string().contains("sqrt"));
        assert!(matches!(parse("y").unwrap_err(), ParseError::UnknownIdentifier { .. }));
    }

    #[test]
    fn depth_cap() {
        let deep = format!("{}s{}", "(".repeat(100), ")".repeat(100));
        assert!(matches!(parse(&deep), Err(ParseError::TooDeep { .. })));
        let minus = format!("{}s", "-".repeat(200));
        assert!(matches!(parse(&minus), Err(ParseError::TooDeep { .. })));
        let ok = format!("{}s{}", "(".repeat(20), ")".repeat(20));
        assert!(parse(&ok).is_ok());
    }

    #[test]
    fn printing_keeps_structure() {
        for text in ["(-s)^2", "-s^2", "2^3^2", "(2^3)^2", "s - (s - 1)", "s / (2 * s)", "2 * -s", "-(s + 1)"] {
            let e = parse(text).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{text} printed as {e}");
        }
    }

    #[test]
    fn extrema_of_monotone_compositions() {
        let e = parse("1/sqrt(s)").unwrap();
        assert_eq!(e.extrema(Var::S, 0.25, 4.0).unwrap(), (0.5, 2.0));
        let e = parse("s^2").unwrap();
        assert_eq!(e.extrema(Var::S, -1.0, 0.5).unwrap(), (0.0, 1.0));
        let e = parse("2 - exp(-s)").unwrap();
        let (lo, hi) = e.extrema(Var::S, 0.0, 1.0).unwrap();
        assert_eq!(lo, 1.0);
        assert!((hi - (2.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn extrema_refused_when_not_exact() {
        assert!(matches!(parse("s*s").unwrap().extrema(Var::S, 0.0, 1.0), Err(Error::NoOracle(_))));
        assert!(matches!(parse("sin(s)").unwrap().extrema(Var::S, 0.0, 1.0), Err(Error::NoOracle(_))));
        assert!(parse("1/s").unwrap().extrema(Var::S, -1.0, 1.0).is_err());
    }
}
