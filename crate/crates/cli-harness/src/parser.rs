//! Expression front end for the truncated-series field.
//!
//! The grammar, with `r` standing for the scale element ρ:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' int)?
//! base   := number | 'r' | func '(' expr ')' | '(' expr ')'
//! func   := sqrt | st | inv
//! ```
//!
//! Number literals are decimal (`3`, `0.25`) and are read exactly, so the
//! rational 1/4 is written `0.25` or `1/4` (the latter parses as a division).
//! Exponents are integer literals, optionally negative. Evaluation happens
//! in either coefficient domain at the session's truncation window.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use nonarch_core::{Classification, Coefficient, FieldError, Laurent, StandardPart};
use std::fmt;

/// The three field-level functions available in expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    /// Square root of a positive element at even valuation.
    Sqrt,
    /// Standard part: the shadow of a finite element, as a constant.
    St,
    /// Multiplicative inverse.
    Inv,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::St => "st",
            Func::Inv => "inv",
        }
    }
}

/// Binary operators in source order of appearance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Abstract syntax tree for a field expression.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldExpr {
    /// A non-negative rational literal.
    Number(BigRational),
    /// The scale element ρ.
    Rho,
    Binary {
        op: BinOp,
        lhs: Box<FieldExpr>,
        rhs: Box<FieldExpr>,
    },
    Pow {
        base: Box<FieldExpr>,
        exponent: i64,
    },
    Call {
        func: Func,
        arg: Box<FieldExpr>,
    },
}

/// Parse failure with the character position (0-based) where it occurred.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Evaluation failure: a field operation outside its domain, or a standard
/// part taken of an infinitely large element.
#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("evaluation error: {0}")]
    Field(#[from] FieldError),
    #[error("evaluation error: standard part of an infinitely large element")]
    InfiniteStandardPart,
}

// ── lexer ──

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i;
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                tokens.push(Token { tok, pos });
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let mut value: BigRational = BigRational::new(
                    chars[start..i].iter().collect::<String>().parse::<BigInt>().unwrap(),
                    BigInt::one(),
                );
                if i < chars.len() && chars[i] == '.' {
                    i += 1;
                    let frac_start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == frac_start {
                        return Err(ParseError {
                            position: i,
                            message: "expected digits after decimal point".into(),
                        });
                    }
                    let digits: String = chars[frac_start..i].iter().collect();
                    let scale = BigInt::from(10u32).pow((i - frac_start) as u32);
                    value += BigRational::new(digits.parse::<BigInt>().unwrap(), scale);
                }
                tokens.push(Token {
                    tok: Tok::Num(value),
                    pos,
                });
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                tokens.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    pos,
                });
            }
            other => {
                return Err(ParseError {
                    position: pos,
                    message: format!("unexpected character '{other}'"),
                });
            }
        }
    }
    Ok(tokens)
}

// ── parser ──

struct Parser {
    tokens: Vec<Token>,
    index: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.index)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.index).cloned();
        if t.is_some() {
            self.index += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.pos).unwrap_or(self.end)
    }

    fn expect(&mut self, want: &Tok, describe: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t.tok == *want => {
                self.index += 1;
                Ok(())
            }
            _ => Err(ParseError {
                position: self.here(),
                message: format!("expected {describe}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<FieldExpr, ParseError> {
        let mut node = self.term()?;
        while let Some(t) = self.peek() {
            let op = match t.tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.index += 1;
            let rhs = self.term()?;
            node = FieldExpr::Binary {
                op,
                lhs: Box::new(node),
                rhs: Box::new(rhs),
            };
        }
        Ok(node)
    }

    fn term(&mut self) -> Result<FieldExpr, ParseError> {
        let mut node = self.factor()?;
        while let Some(t) = self.peek() {
            let op = match t.tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.index += 1;
            let rhs = self.factor()?;
            node = FieldExpr::Binary {
                op,
                lhs: Box::new(node),
                rhs: Box::new(rhs),
            };
        }
        Ok(node)
    }

    fn factor(&mut self) -> Result<FieldExpr, ParseError> {
        let base = self.base()?;
        if let Some(t) = self.peek() {
            if t.tok == Tok::Caret {
                self.index += 1;
                let exponent = self.integer()?;
                return Ok(FieldExpr::Pow {
                    base: Box::new(base),
                    exponent,
                });
            }
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let negative = matches!(self.peek().map(|t| &t.tok), Some(Tok::Minus));
        if negative {
            self.index += 1;
        }
        let pos = self.here();
        match self.advance().map(|t| t.tok) {
            Some(Tok::Num(q)) if q.is_integer() => {
                let n = q.to_integer().to_i64().ok_or(ParseError {
                    position: pos,
                    message: "exponent out of range".into(),
                })?;
                Ok(if negative { -n } else { n })
            }
            _ => Err(ParseError {
                position: pos,
                message: "expected an integer exponent".into(),
            }),
        }
    }

    fn base(&mut self) -> Result<FieldExpr, ParseError> {
        let pos = self.here();
        match self.advance().map(|t| t.tok) {
            Some(Tok::Num(q)) => Ok(FieldExpr::Number(q)),
            Some(Tok::Ident(name)) => match name.as_str() {
                "r" => Ok(FieldExpr::Rho),
                "sqrt" | "st" | "inv" => {
                    let func = match name.as_str() {
                        "sqrt" => Func::Sqrt,
                        "st" => Func::St,
                        _ => Func::Inv,
                    };
                    self.expect(&Tok::LParen, "'(' after function name")?;
                    let arg = self.expr()?;
                    self.expect(&Tok::RParen, "')'")?;
                    Ok(FieldExpr::Call {
                        func,
                        arg: Box::new(arg),
                    })
                }
                other => Err(ParseError {
                    position: pos,
                    message: format!("unknown name '{other}'"),
                }),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(ParseError {
                position: pos,
                message: "expected a number, 'r', a function call, or '('".into(),
            }),
        }
    }
}

/// Parses one expression; trailing input is a syntax error.
pub fn parse(text: &str) -> Result<FieldExpr, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        index: 0,
        end: text.chars().count(),
    };
    let expr = parser.expr()?;
    if let Some(extra) = parser.peek() {
        return Err(ParseError {
            position: extra.pos,
            message: "unexpected trailing input".into(),
        });
    }
    Ok(expr)
}

// ── rendering ──

fn precedence(expr: &FieldExpr) -> u8 {
    match expr {
        FieldExpr::Binary { op: BinOp::Add | BinOp::Sub, .. } => 1,
        FieldExpr::Binary { .. } => 2,
        FieldExpr::Pow { .. } => 3,
        FieldExpr::Number(_) | FieldExpr::Rho | FieldExpr::Call { .. } => 4,
    }
}

fn render_number(q: &BigRational) -> String {
    if q.is_negative() {
        // Negative literals are not in the grammar; spell the value as a
        // subtraction so the output still parses.
        return format!("(0 - {})", render_number(&(-q)));
    }
    if q.is_integer() {
        return q.to_integer().to_string();
    }
    // Exact decimal when the denominator divides a power of ten, else p/q
    // (which reparses as a division with the same value).
    let mut den = q.denom().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if den.is_one() {
        let k = twos.max(fives);
        let scale = BigInt::from(10u32).pow(k);
        let scaled = (q * BigRational::new(scale.clone(), BigInt::one())).to_integer();
        let digits = scaled.to_string();
        let digits = format!("{:0>width$}", digits, width = (k as usize) + 1);
        let split = digits.len() - k as usize;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Canonical text form; reparses to an equal tree for trees built from the
/// grammar (numbers render as decimals, operands keep their grouping).
pub fn render(expr: &FieldExpr) -> String {
    fn go(expr: &FieldExpr, out: &mut String) {
        match expr {
            FieldExpr::Number(q) => out.push_str(&render_number(q)),
            FieldExpr::Rho => out.push('r'),
            FieldExpr::Call { func, arg } => {
                out.push_str(func.name());
                out.push('(');
                go(arg, out);
                out.push(')');
            }
            FieldExpr::Pow { base, exponent } => {
                // The grammar only allows atomic bases, so anything lower
                // must be parenthesized to survive a round trip.
                wrap_if(base, precedence(base) < 4, out);
                out.push('^');
                out.push_str(&exponent.to_string());
            }
            FieldExpr::Binary { op, lhs, rhs } => {
                let p = precedence(expr);
                wrap_if(lhs, precedence(lhs) < p, out);
                out.push_str(match op {
                    BinOp::Add => " + ",
                    BinOp::Sub => " - ",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                });
                // Operators associate left, so a right operand at the same
                // precedence needs parentheses to keep its shape.
                wrap_if(rhs, precedence(rhs) <= p, out);
            }
        }
    }

    fn wrap_if(expr: &FieldExpr, wrap: bool, out: &mut String) {
        if wrap {
            out.push('(');
        }
        go(expr, out);
        if wrap {
            out.push(')');
        }
    }

    let mut out = String::new();
    go(expr, &mut out);
    out
}

// ── evaluation ──

/// Coefficient domains that can absorb a parsed rational literal.
pub trait LiteralCoefficient: Coefficient {
    fn from_literal(q: &BigRational) -> Self;
}

impl LiteralCoefficient for BigRational {
    fn from_literal(q: &BigRational) -> Self {
        q.clone()
    }
}

impl LiteralCoefficient for f64 {
    fn from_literal(q: &BigRational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
}

/// Evaluates the tree in the series field with the given truncation window.
pub fn evaluate<C: LiteralCoefficient>(
    expr: &FieldExpr,
    truncation: i64,
) -> Result<Laurent<C>, EvalError> {
    match expr {
        FieldExpr::Number(q) => Ok(Laurent::from_terms_with_truncation(
            [(0, C::from_literal(q))],
            truncation,
        )),
        FieldExpr::Rho => Ok(Laurent::from_terms_with_truncation(
            [(1, C::one())],
            truncation,
        )),
        FieldExpr::Binary { op, lhs, rhs } => {
            let a = evaluate::<C>(lhs, truncation)?;
            let b = evaluate::<C>(rhs, truncation)?;
            Ok(match op {
                BinOp::Add => a.add(&b),
                BinOp::Sub => a.sub(&b),
                BinOp::Mul => a.mul(&b),
                BinOp::Div => a.div(&b)?,
            })
        }
        FieldExpr::Pow { base, exponent } => {
            let b = evaluate::<C>(base, truncation)?;
            Ok(b.pow(*exponent)?)
        }
        FieldExpr::Call { func, arg } => {
            let v = evaluate::<C>(arg, truncation)?;
            match func {
                Func::Sqrt => Ok(v.sqrt_positive()?),
                Func::Inv => Ok(v.invert()?),
                Func::St => match v.standard_part() {
                    StandardPart::Finite(c) => Ok(Laurent::from_terms_with_truncation(
                        [(0, c)],
                        truncation,
                    )),
                    _ => Err(EvalError::InfiniteStandardPart),
                },
            }
        }
    }
}

/// One evaluated value in either coefficient domain, with uniform accessors
/// for the REPL and the field-eval experiment.
pub enum FieldValue {
    Exact(nonarch_core::ExactLaurent),
    Float(Laurent<f64>),
}

impl FieldValue {
    pub fn render(&self) -> String {
        match self {
            FieldValue::Exact(v) => v.render(),
            FieldValue::Float(v) => v.render(),
        }
    }

    /// Scale classification, or a fixed phrase for zero, which has none.
    pub fn classification(&self) -> String {
        let result: Result<Classification, FieldError> = match self {
            FieldValue::Exact(v) => v.classify(),
            FieldValue::Float(v) => v.classify(),
        };
        match result {
            Ok(c) => c.to_string(),
            Err(_) => "zero (no scale classification)".to_string(),
        }
    }

    pub fn standard_part(&self) -> String {
        match self {
            FieldValue::Exact(v) => v.standard_part().to_string(),
            FieldValue::Float(v) => v.standard_part().to_string(),
        }
    }

    /// Term list as (exponent, coefficient rendered as text) for CSV output.
    pub fn terms(&self) -> Vec<(i64, String)> {
        match self {
            FieldValue::Exact(v) => v.terms().map(|(k, c)| (k, c.to_string())).collect(),
            FieldValue::Float(v) => v.terms().map(|(k, c)| (k, c.to_string())).collect(),
        }
    }
}

/// Parses and evaluates in one step, in the requested coefficient domain.
pub fn evaluate_text(
    text: &str,
    truncation: i64,
    exact: bool,
) -> Result<FieldValue, String> {
    let expr = parse(text).map_err(|e| e.to_string())?;
    if exact {
        evaluate::<BigRational>(&expr, truncation)
            .map(FieldValue::Exact)
            .map_err(|e| e.to_string())
    } else {
        evaluate::<f64>(&expr, truncation)
            .map(FieldValue::Float)
            .map_err(|e| e.to_string())
    }
}
