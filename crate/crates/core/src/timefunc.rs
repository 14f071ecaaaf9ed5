//! Expressions in a single real variable `t` with exact symbolic derivatives.
//!
//! Grammar:
//!
//! ```text
//! expr   := term { ("+" | "-") term } ;
//! term   := factor { ("*" | "/") factor } ;
//! factor := base [ "^" integer ] ;
//! base   := number | "t" | ident "(" expr ")" | "(" expr ")" | "-" base ;
//! ident  := "sin" | "cos" | "exp" | "sinh" | "cosh" | "tanh" | "sqrt" | "ln" ;
//! ```
//!
//! Exponents are restricted to non-negative integer literals so that
//! differentiation stays total.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sinh,
    Cosh,
    Tanh,
    Sqrt,
    Ln,
}

impl Func {
    pub const ALL: [Func; 8] =
        [Func::Sin, Func::Cos, Func::Exp, Func::Sinh, Func::Cosh, Func::Tanh, Func::Sqrt, Func::Ln];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Sqrt => "sqrt",
            Func::Ln => "ln",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at column {column}: expected {expected}, found {found}")]
    Syntax { column: usize, expected: String, found: String },
    #[error("unknown identifier '{name}' at column {column}")]
    UnknownIdentifier { column: usize, name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    DivisionByZero,
    SqrtOfNegative,
    LogOfNonPositive,
    NonFinite,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainKind::DivisionByZero => "division by zero",
            DomainKind::SqrtOfNegative => "square root of a negative number",
            DomainKind::LogOfNonPositive => "logarithm of a non-positive number",
            DomainKind::NonFinite => "non-finite value",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{kind} in `{subexpr}` at t = {t}")]
pub struct DomainError {
    pub kind: DomainKind,
    pub subexpr: String,
    pub t: f64,
}

/// A function of time given by an expression tree.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeFunction {
    root: Expr,
}

impl TimeFunction {
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        Parser::new(src)?.parse_all().map(|root| Self { root })
    }

    pub fn constant(value: f64) -> Self {
        Self { root: Expr::Const(value) }
    }

    pub fn expr(&self) -> &Expr {
        &self.root
    }

    pub fn eval(&self, t: f64) -> Result<f64, DomainError> {
        eval(&self.root, t)
    }

    /// Exact derivative with respect to `t`. The result is not simplified
    /// beyond dropping obvious zero and unit factors.
    pub fn derivative(&self) -> Self {
        Self { root: derive(&self.root) }
    }
}

impl From<Expr> for TimeFunction {
    fn from(root: Expr) -> Self {
        Self { root }
    }
}

impl FromStr for TimeFunction {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl fmt::Display for TimeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => write!(f, "(-{:?})", -c),
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Var => f.write_str("t"),
            // unary minus binds tighter than "^"
            Expr::Neg(a) if matches!(**a, Expr::Pow(..)) => write!(f, "(-({a}))"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, n) => write!(f, "({a})^{n}"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

fn eval(e: &Expr, t: f64) -> Result<f64, DomainError> {
    let fail = |kind| DomainError { kind, subexpr: e.to_string(), t };
    let value = match e {
        Expr::Const(c) => *c,
        Expr::Var => t,
        Expr::Neg(a) => -eval(a, t)?,
        Expr::Add(a, b) => eval(a, t)? + eval(b, t)?,
        Expr::Sub(a, b) => eval(a, t)? - eval(b, t)?,
        Expr::Mul(a, b) => eval(a, t)? * eval(b, t)?,
        Expr::Div(a, b) => {
            let num = eval(a, t)?;
            let den = eval(b, t)?;
            if den == 0.0 {
                return Err(fail(DomainKind::DivisionByZero));
            }
            num / den
        }
        Expr::Pow(a, n) => eval(a, t)?.powi(*n as i32),
        Expr::Call(func, a) => {
            let x = eval(a, t)?;
            match func {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Exp => x.exp(),
                Func::Sinh => x.sinh(),
                Func::Cosh => x.cosh(),
                Func::Tanh => x.tanh(),
                Func::Sqrt if x < 0.0 => return Err(fail(DomainKind::SqrtOfNegative)),
                Func::Sqrt => x.sqrt(),
                Func::Ln if x <= 0.0 => return Err(fail(DomainKind::LogOfNonPositive)),
                Func::Ln => x.ln(),
            }
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(fail(DomainKind::NonFinite))
    }
}

fn constant(c: f64) -> Expr {
    Expr::Const(c)
}

fn call(func: Func, a: &Expr) -> Expr {
    Expr::Call(func, Box::new(a.clone()))
}

fn is_const(e: &Expr, value: f64) -> bool {
    matches!(e, Expr::Const(c) if *c == value)
}

fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_const(&a, 0.0) => b,
        _ if is_const(&b, 0.0) => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_const(&b, 0.0) => a,
        _ if is_const(&a, 0.0) => neg(b),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    if is_const(&a, 0.0) || is_const(&b, 0.0) {
        constant(0.0)
    } else if is_const(&a, 1.0) {
        b
    } else if is_const(&b, 1.0) {
        a
    } else {
        Expr::Mul(Box::new(a), Box::new(b))
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_const(&a, 0.0) {
        constant(0.0)
    } else {
        Expr::Div(Box::new(a), Box::new(b))
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) if c == 0.0 => constant(0.0),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn pow(a: &Expr, n: u32) -> Expr {
    match n {
        0 => constant(1.0),
        1 => a.clone(),
        _ => Expr::Pow(Box::new(a.clone()), n),
    }
}

fn derive(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) => constant(0.0),
        Expr::Var => constant(1.0),
        Expr::Neg(a) => neg(derive(a)),
        Expr::Add(a, b) => add(derive(a), derive(b)),
        Expr::Sub(a, b) => sub(derive(a), derive(b)),
        Expr::Mul(a, b) => add(mul(derive(a), (**b).clone()), mul((**a).clone(), derive(b))),
        Expr::Div(a, b) => div(
            sub(mul(derive(a), (**b).clone()), mul((**a).clone(), derive(b))),
            pow(b, 2),
        ),
        Expr::Pow(a, n) => match n {
            0 => constant(0.0),
            _ => mul(mul(constant(f64::from(*n)), pow(a, n - 1)), derive(a)),
        },
        Expr::Call(func, a) => {
            let inner = derive(a);
            let outer = match func {
                Func::Sin => call(Func::Cos, a),
                Func::Cos => neg(call(Func::Sin, a)),
                Func::Exp => call(Func::Exp, a),
                Func::Sinh => call(Func::Cosh, a),
                Func::Cosh => call(Func::Sinh, a),
                Func::Tanh => sub(constant(1.0), pow(&call(Func::Tanh, a), 2)),
                Func::Sqrt => return div(inner, mul(constant(2.0), call(Func::Sqrt, a))),
                Func::Ln => return div(inner, (**a).clone()),
            };
            mul(outer, inner)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number { value: f64, integer: bool },
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

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Number { value, .. } => write!(f, "number {value}"),
            Tok::Ident(name) => write!(f, "'{name}'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

/// Token with its 1-based column.
type Spanned = (Tok, usize);

fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let syntax = |column: usize, expected: &str, found: String| ParseError::Syntax {
        column,
        expected: expected.to_string(),
        found,
    };
    while i < chars.len() {
        let ch = chars[i];
        let column = i + 1;
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match ch {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, column));
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            let mut integer = true;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                integer = false;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let mantissa: String = chars[start..i].iter().collect();
            if mantissa == "." {
                return Err(syntax(column, "a digit", "'.'".to_string()));
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                integer = false;
                i += 1;
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    i += 1;
                }
                let digits_start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i == digits_start {
                    let found = chars.get(i).map_or("end of input".to_string(), |c| format!("'{c}'"));
                    return Err(syntax(i + 1, "exponent digits", found));
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value: f64 = text
                .parse()
                .map_err(|_| syntax(column, "a number", format!("'{text}'")))?;
            out.push((Tok::Number { value, integer }, column));
        } else if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), column));
        } else {
            return Err(syntax(column, "a number, 't', a function, an operator or a parenthesis", format!("'{ch}'")));
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        if src.trim().is_empty() {
            return Err(ParseError::Empty);
        }
        Ok(Self { tokens: tokenize(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn column(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn next(&mut self) -> Tok {
        let tok = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::Syntax { column: self.column(), expected: expected.to_string(), found: self.peek().to_string() }
    }

    fn parse_all(&mut self) -> Result<Expr, ParseError> {
        let e = self.expr()?;
        if *self.peek() != Tok::End {
            return Err(self.error("an operator or end of input"));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.next();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.next();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.next();
        match self.peek().clone() {
            Tok::Number { value, integer: true } if value <= f64::from(u32::MAX) => {
                self.next();
                Ok(Expr::Pow(Box::new(base), value as u32))
            }
            _ => Err(self.error("a non-negative integer literal exponent")),
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let column = self.column();
        match self.peek().clone() {
            Tok::Number { value, .. } => {
                self.next();
                Ok(Expr::Const(value))
            }
            Tok::Minus => {
                self.next();
                Ok(Expr::Neg(Box::new(self.base()?)))
            }
            Tok::LParen => {
                self.next();
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) if name == "t" => {
                self.next();
                Ok(Expr::Var)
            }
            Tok::Ident(name) => {
                let func = Func::from_name(&name).ok_or(ParseError::UnknownIdentifier { column, name })?;
                self.next();
                if *self.peek() != Tok::LParen {
                    return Err(self.error("'(' after function name"));
                }
                self.next();
                let arg = self.expr()?;
                self.expect_rparen()?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            _ => Err(self.error("a number, 't', a function call, '(' or '-'")),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::RParen {
            self.next();
            Ok(())
        } else {
            Err(self.error("')'"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tf(src: &str) -> TimeFunction {
        TimeFunction::parse(src).unwrap()
    }

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(tf("1").expr(), &Expr::Const(1.0));
        let expected = Expr::Add(
            b(Expr::Const(1.0)),
            b(Expr::Mul(b(Expr::Const(0.1)), b(Expr::Call(Func::Sin, b(Expr::Var))))),
        );
        assert_eq!(tf("1 + 0.1*sin(t)").expr(), &expected);
        assert!(matches!(TimeFunction::parse("2^t"), Err(ParseError::Syntax { column: 3, .. })));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(tf("1 - 2 - 3").eval(0.0).unwrap(), -4.0);
        assert_eq!(tf("8 / 4 / 2").eval(0.0).unwrap(), 1.0);
        assert_eq!(tf("2 + 3 * t^2").eval(2.0).unwrap(), 14.0);
        assert_eq!(tf("-t^2").eval(3.0).unwrap(), 9.0);
        assert_eq!(tf("-(t^2)").eval(3.0).unwrap(), -9.0);
        assert_eq!(tf("  1.5e1\t+ .5 ").eval(0.0).unwrap(), 15.5);
        assert_eq!(tf("(t)^0").eval(0.0).unwrap(), 1.0);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(TimeFunction::parse("   "), Err(ParseError::Empty));
        assert!(matches!(
            TimeFunction::parse("1 + foo(t)"),
            Err(ParseError::UnknownIdentifier { column: 5, ref name }) if name == "foo"
        ));
        assert!(matches!(TimeFunction::parse("Sin(t)"), Err(ParseError::UnknownIdentifier { .. })));
        assert!(matches!(TimeFunction::parse("2^1.5"), Err(ParseError::Syntax { column: 3, .. })));
        assert!(matches!(TimeFunction::parse("2^-1"), Err(ParseError::Syntax { .. })));
        assert!(matches!(TimeFunction::parse("(1 + t"), Err(ParseError::Syntax { column: 7, .. })));
        assert!(matches!(TimeFunction::parse("1 +"), Err(ParseError::Syntax { column: 4, .. })));
        assert!(matches!(TimeFunction::parse("sin t"), Err(ParseError::Syntax { column: 5, .. })));
        assert!(matches!(TimeFunction::parse("1e+"), Err(ParseError::Syntax { .. })));
        assert!(matches!(TimeFunction::parse("t t"), Err(ParseError::Syntax { column: 3, .. })));
        assert!(matches!(TimeFunction::parse("3 # 4"), Err(ParseError::Syntax { column: 3, .. })));
        let msg = TimeFunction::parse("2^t").unwrap_err().to_string();
        assert!(msg.contains("column 3") && msg.contains("integer"), "{msg}");
    }

    #[test]
    fn eval_examples() {
        assert_eq!(tf("1 + 0.1*sin(t)").eval(0.0).unwrap(), 1.0);
        assert!((tf("exp(t)").eval(1.0).unwrap() - std::f64::consts::E).abs() < 1e-15);
        let err = tf("ln(t)").eval(0.0).unwrap_err();
        assert_eq!(err.kind, DomainKind::LogOfNonPositive);
        assert_eq!(err.subexpr, "ln(t)");
        assert_eq!(err.t, 0.0);
        assert_eq!(tf("sqrt(t - 1)").eval(0.5).unwrap_err().kind, DomainKind::SqrtOfNegative);
        assert_eq!(tf("1/(t - 2)").eval(2.0).unwrap_err().kind, DomainKind::DivisionByZero);
        assert_eq!(tf("exp(t)").eval(1e3).unwrap_err().kind, DomainKind::NonFinite);
    }

    #[test]
    fn derivative_examples() {
        let d = tf("1").derivative();
        for t in [-3.0, 0.0, 1.7] {
            assert_eq!(d.eval(t).unwrap(), 0.0);
        }
        assert!((tf("1 + 0.1*sin(t)").derivative().eval(0.0).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(tf("0.1*sin(t)").derivative().derivative().eval(0.0).unwrap(), 0.0);
        assert!((tf("0.1*sin(t)").derivative().derivative().eval(1.0).unwrap() + 0.1 * 1.0_f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn derivative_rules() {
        let cases: [(&str, fn(f64) -> f64); 8] = [
            ("tanh(t)", |t| 1.0 - t.tanh().powi(2)),
            ("sqrt(t)", |t| 0.5 / t.sqrt()),
            ("ln(t)", |t| 1.0 / t),
            ("cosh(2*t)", |t| 2.0 * (2.0 * t).sinh()),
            ("sinh(t)^3", |t| 3.0 * t.sinh().powi(2) * t.cosh()),
            ("1/t", |t| -1.0 / (t * t)),
            ("-cos(t)", |t| t.sin()),
            ("t^0", |_| 0.0),
        ];
        for (src, expected) in cases {
            let d = tf(src).derivative();
            for t in [0.3, 1.1, 2.5] {
                assert!((d.eval(t).unwrap() - expected(t)).abs() < 1e-13, "{src} at {t}");
            }
        }
    }

    #[test]
    fn render_round_trip() {
        for src in ["1 + 0.1*sin(t)", "-t^2", "(1 - t)/(2 + t)^3", "ln(sqrt(t)) - -3e-7"] {
            let f = tf(src);
            let g = tf(&f.to_string());
            assert_eq!(f.eval(0.7).unwrap(), g.eval(0.7).unwrap(), "{src} -> {f}");
        }
        let d = tf("1/(1+t^2)").derivative();
        let again = tf(&d.to_string());
        assert_eq!(d.eval(0.4).unwrap(), again.eval(0.4).unwrap());
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![(0.0..10.0f64).prop_map(Expr::Const), Just(Expr::Var)];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
                (inner.clone(), 0u32..4).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
                (inner, 0usize..8).prop_map(|(a, k)| Expr::Call(Func::ALL[k], Box::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn rendered_trees_reparse_and_agree(e in arb_expr(), t in -2.0..2.0f64) {
            let f = TimeFunction::from(e);
            let g = TimeFunction::parse(&f.to_string()).unwrap();
            match (f.eval(t), g.eval(t)) {
                (Ok(a), Ok(b)) => prop_assert!(a == b || (a - b).abs() <= 1e-12 * a.abs().max(1.0)),
                (Err(x), Err(y)) => prop_assert_eq!(x.kind, y.kind),
                (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
            }
        }

        #[test]
        fn parser_never_panics(src in "[-+*/^() t0-9.esinhcoqrtlxp]{0,24}") {
            let _ = TimeFunction::parse(&src);
        }

        #[test]
        fn derivative_is_linear(a in -3.0..3.0f64, bb in -3.0..3.0f64, t in 0.1..3.0f64) {
            let f = tf("sin(t)*exp(t/3)");
            let g = tf("ln(1 + t^2)/sqrt(t)");
            let combo = TimeFunction::from(Expr::Add(
                Box::new(Expr::Mul(Box::new(Expr::Const(a)), Box::new(f.expr().clone()))),
                Box::new(Expr::Mul(Box::new(Expr::Const(bb)), Box::new(g.expr().clone()))),
            ));
            let lhs = combo.derivative().eval(t).unwrap();
            let rhs = a * f.derivative().eval(t).unwrap() + bb * g.derivative().eval(t).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
        }
    }
}
