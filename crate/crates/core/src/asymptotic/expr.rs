//! A small expression language for functions on the integers.
//!
//! ```text
//! expr   := term { ("+" | "-") term }
//! term   := factor { ("*" | "/") factor }
//! factor := ["-"] atom
//! atom   := NUMBER | "x" | "k" | IDENT "(" args ")" | "(" expr ")"
//! IDENT  := sin | cos | exp | log1p | abs | sqrt | min | max | if
//! ```
//!
//! `if(a < b, e1, e2)` takes a comparison (`<`, `<=`, `>`, `>=`) as its
//! first argument. Numbers are decimal literals kept as exact rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::foundations::parse_rational;

/// An exact literal with its nearest `f64`.
#[derive(Clone, Debug)]
pub struct Literal {
    exact: BigRational,
    approx: f64,
}

impl Literal {
    pub fn new(exact: BigRational) -> Self {
        let approx = exact.to_f64().unwrap_or(f64::NAN);
        Literal { exact, approx }
    }

    pub fn int(v: i64) -> Self {
        Literal::new(BigRational::from_integer(v.into()))
    }

    pub fn exact(&self) -> &BigRational {
        &self.exact
    }
}

impl PartialEq for Literal {
    fn eq(&self, other: &Self) -> bool {
        self.exact == other.exact
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    K,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log1p,
    Abs,
    Sqrt,
    Min,
    Max,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log1p => "log1p",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Min => "min",
            Func::Max => "max",
        }
    }

    fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log1p" => Func::Log1p,
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            "min" => Func::Min,
            "max" => Func::Max,
            _ => return None,
        })
    }

    fn variadic(self) -> bool {
        matches!(self, Func::Min | Func::Max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        }
    }

    fn test(self, a: f64, b: f64) -> bool {
        match self {
            Cmp::Lt => a < b,
            Cmp::Le => a <= b,
            Cmp::Gt => a > b,
            Cmp::Ge => a >= b,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Literal),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
    If { cmp: Cmp, lhs: Box<Expr>, rhs: Box<Expr>, then: Box<Expr>, otherwise: Box<Expr> },
}

impl Expr {
    pub fn num(v: i64) -> Expr {
        Expr::Num(Literal::int(v))
    }

    pub fn rational(q: BigRational) -> Expr {
        Expr::Num(Literal::new(q))
    }

    pub fn x() -> Expr {
        Expr::Var(Var::X)
    }

    pub fn k() -> Expr {
        Expr::Var(Var::K)
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, vec![arg])
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::bin(BinOp::Add, a, b)
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::bin(BinOp::Sub, a, b)
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::bin(BinOp::Mul, a, b)
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::bin(BinOp::Div, a, b)
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    pub fn uses(&self, v: Var) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(w) => *w == v,
            Expr::Neg(a) => a.uses(v),
            Expr::Bin(_, a, b) => a.uses(v) || b.uses(v),
            Expr::Call(_, args) => args.iter().any(|a| a.uses(v)),
            Expr::If { lhs, rhs, then, otherwise, .. } => {
                lhs.uses(v) || rhs.uses(v) || then.uses(v) || otherwise.uses(v)
            }
        }
    }

    /// Replaces every occurrence of `v` by `with`.
    pub fn substitute(&self, v: Var, with: &Expr) -> Expr {
        let s = |e: &Expr| Box::new(e.substitute(v, with));
        match self {
            Expr::Num(_) => self.clone(),
            Expr::Var(w) if *w == v => with.clone(),
            Expr::Var(_) => self.clone(),
            Expr::Neg(a) => Expr::Neg(s(a)),
            Expr::Bin(op, a, b) => Expr::Bin(*op, s(a), s(b)),
            Expr::Call(f, args) => Expr::Call(*f, args.iter().map(|a| a.substitute(v, with)).collect()),
            Expr::If { cmp, lhs, rhs, then, otherwise } => {
                Expr::If { cmp: *cmp, lhs: s(lhs), rhs: s(rhs), then: s(then), otherwise: s(otherwise) }
            }
        }
    }

    /// The form the parser produces: a minus sign applied directly to a
    /// literal is folded into the literal.
    pub fn normalize(&self) -> Expr {
        match self {
            Expr::Neg(a) => match a.normalize() {
                Expr::Num(l) if l.exact.is_positive() || l.exact.is_zero() => Expr::Num(Literal::new(-l.exact)),
                other => Expr::Neg(Box::new(other)),
            },
            Expr::Num(_) | Expr::Var(_) => self.clone(),
            Expr::Bin(op, a, b) => Expr::Bin(*op, Box::new(a.normalize()), Box::new(b.normalize())),
            Expr::Call(f, args) => Expr::Call(*f, args.iter().map(Expr::normalize).collect()),
            Expr::If { cmp, lhs, rhs, then, otherwise } => Expr::If {
                cmp: *cmp,
                lhs: Box::new(lhs.normalize()),
                rhs: Box::new(rhs.normalize()),
                then: Box::new(then.normalize()),
                otherwise: Box::new(otherwise.normalize()),
            },
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Num(l) if !is_decimal(&l.exact) => 2,
            Expr::Neg(_) => 3,
            Expr::Num(l) if l.exact.is_negative() => 3,
            _ => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Expr::Num(l) => write_literal(f, &l.exact),
            Expr::Var(Var::X) => f.write_str("x"),
            Expr::Var(Var::K) => f.write_str("k"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_at(f, 4)
            }
            Expr::Bin(op, a, b) => {
                let (sym, prec) = match op {
                    BinOp::Add => (" + ", 1),
                    BinOp::Sub => (" - ", 1),
                    BinOp::Mul => (" * ", 2),
                    BinOp::Div => (" / ", 2),
                };
                a.write_at(f, prec)?;
                f.write_str(sym)?;
                // A negative literal on the right of `*` or `/` is a factor.
                b.write_at(f, prec + 1)
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    a.write_at(f, 0)?;
                }
                f.write_str(")")
            }
            Expr::If { cmp, lhs, rhs, then, otherwise } => {
                f.write_str("if(")?;
                lhs.write_at(f, 0)?;
                write!(f, " {} ", cmp.symbol())?;
                rhs.write_at(f, 0)?;
                f.write_str(", ")?;
                then.write_at(f, 0)?;
                f.write_str(", ")?;
                otherwise.write_at(f, 0)?;
                f.write_str(")")
            }
        }
    }
}

fn is_decimal(q: &BigRational) -> bool {
    let mut d = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&d % &two).is_zero() {
        d /= &two;
    }
    while (&d % &five).is_zero() {
        d /= &five;
    }
    d.is_one()
}

/// Terminating decimals are written as decimals; anything else as `p / q`.
fn write_literal(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if !is_decimal(q) {
        return write!(f, "{} / {}", q.numer(), q.denom());
    }
    if q.is_integer() {
        return write!(f, "{}", q.numer());
    }
    let mut digits = 0usize;
    let mut scaled = q.clone();
    let ten = BigRational::from_integer(10.into());
    while !scaled.is_integer() {
        scaled *= &ten;
        digits += 1;
    }
    let n = scaled.to_integer();
    let sign = if n.is_negative() { "-" } else { "" };
    let s = n.abs().to_string();
    let s = format!("{s:0>width$}", width = digits + 1);
    let (int, frac) = s.split_at(s.len() - digits);
    write!(f, "{sign}{int}.{frac}")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message} at offset {offset}")]
pub struct ParseError {
    /// Byte offset into the source.
    pub offset: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Sym(&'static str),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// The next token and its start offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() || c == '.' {
            let bytes = rest.as_bytes();
            let mut i = 0;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
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
            let text = &rest[..i];
            if let Some(e) = text.find(['e', 'E']) {
                if text[e + 1..].trim_start_matches(['+', '-']).len() > 3 {
                    return Err(ParseError { offset: start, message: format!("exponent out of range in `{text}`") });
                }
            }
            let value = parse_rational(text)
                .filter(|_| text.matches('.').count() <= 1 && text != ".")
                .ok_or_else(|| ParseError { offset: start, message: format!("malformed number `{text}`") })?;
            self.pos += i;
            return Ok((Tok::Num(value), start));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let len = rest.find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_')).unwrap_or(rest.len());
            self.pos += len;
            return Ok((Tok::Ident(rest[..len].to_string()), start));
        }
        for sym in ["<=", ">=", "<", ">", "+", "-", "*", "/", "(", ")", ","] {
            if rest.starts_with(sym) {
                self.pos += sym.len();
                return Ok((Tok::Sym(sym), start));
            }
        }
        Err(ParseError { offset: start, message: format!("unexpected character `{c}`") })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer { src, pos: 0 };
        let (tok, at) = lexer.next()?;
        Ok(Parser { lexer, tok, at })
    }

    fn bump(&mut self) -> Result<(), ParseError> {
        let (tok, at) = self.lexer.next()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.at, message: message.into() })
    }

    fn expect(&mut self, sym: &'static str) -> Result<(), ParseError> {
        if self.tok == Tok::Sym(sym) {
            self.bump()
        } else {
            self.err(format!("expected `{sym}`, found {}", self.describe()))
        }
    }

    fn describe(&self) -> String {
        match &self.tok {
            Tok::Num(_) => "a number".into(),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::End => "end of input".into(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Sym("+") => BinOp::Add,
                Tok::Sym("-") => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            lhs = Expr::bin(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.tok {
                Tok::Sym("*") => BinOp::Mul,
                Tok::Sym("/") => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            lhs = Expr::bin(op, lhs, self.factor()?);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.tok == Tok::Sym("-") {
            self.bump()?;
            return Ok(match self.atom()? {
                Expr::Num(l) if !l.exact.is_negative() => Expr::Num(Literal::new(-l.exact)),
                other => Expr::neg(other),
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.tok.clone() {
            Tok::Num(q) => {
                self.bump()?;
                Ok(Expr::Num(Literal::new(q)))
            }
            Tok::Sym("(") => {
                self.bump()?;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.at;
                match name.as_str() {
                    "x" => {
                        self.bump()?;
                        return Ok(Expr::x());
                    }
                    "k" => {
                        self.bump()?;
                        return Ok(Expr::k());
                    }
                    _ => {}
                }
                if name == "if" {
                    self.bump()?;
                    return self.if_args();
                }
                let Some(func) = Func::lookup(&name) else {
                    return Err(ParseError { offset: at, message: format!("unknown identifier `{name}`") });
                };
                self.bump()?;
                self.expect("(")?;
                let mut args = vec![self.expr()?];
                while self.tok == Tok::Sym(",") {
                    self.bump()?;
                    args.push(self.expr()?);
                }
                let close = self.at;
                self.expect(")")?;
                let ok = if func.variadic() { args.len() >= 2 } else { args.len() == 1 };
                if !ok {
                    let want = if func.variadic() { "at least 2" } else { "1" };
                    return Err(ParseError {
                        offset: close,
                        message: format!("`{name}` takes {want} argument(s), got {}", args.len()),
                    });
                }
                Ok(Expr::Call(func, args))
            }
            _ => self.err(format!("expected an expression, found {}", self.describe())),
        }
    }

    fn if_args(&mut self) -> Result<Expr, ParseError> {
        self.expect("(")?;
        let lhs = self.expr()?;
        let cmp = match self.tok {
            Tok::Sym("<") => Cmp::Lt,
            Tok::Sym("<=") => Cmp::Le,
            Tok::Sym(">") => Cmp::Gt,
            Tok::Sym(">=") => Cmp::Ge,
            _ => return self.err(format!("expected a comparison, found {}", self.describe())),
        };
        self.bump()?;
        let rhs = self.expr()?;
        self.expect(",")?;
        let then = self.expr()?;
        self.expect(",")?;
        let otherwise = self.expr()?;
        self.expect(")")?;
        Ok(Expr::If {
            cmp,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
            then: Box::new(then),
            otherwise: Box::new(otherwise),
        })
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.err(format!("unexpected {} after expression", p.describe()));
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero at x = {x}")]
    DivisionByZero { x: f64 },
    #[error("sqrt of negative value {value} at x = {x}")]
    SqrtNegative { x: f64, value: f64 },
    #[error("log1p of {value} ≤ -1 at x = {x}")]
    Log1pDomain { x: f64, value: f64 },
    #[error("non-finite value from `{op}` at x = {x}")]
    NonFinite { x: f64, op: &'static str },
    #[error("variable k is not bound")]
    UnboundK,
}

/// Values for the free variables.
#[derive(Clone, Copy, Debug)]
pub struct Env {
    pub x: f64,
    pub k: Option<f64>,
}

/// Sums with Neumaier compensation.
pub fn neumaier_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            c += (sum - s) + t;
        } else {
            c += (t - s) + sum;
        }
        sum = s;
    }
    sum + c
}

impl Expr {
    /// Evaluates with compensated summation over each chain of `+`/`-`.
    pub fn eval(&self, env: Env) -> Result<f64, EvalError> {
        let x = env.x;
        let finite = |v: f64, op: &'static str| if v.is_finite() { Ok(v) } else { Err(EvalError::NonFinite { x, op }) };
        match self {
            Expr::Num(l) => Ok(l.approx),
            Expr::Var(Var::X) => Ok(env.x),
            Expr::Var(Var::K) => env.k.ok_or(EvalError::UnboundK),
            Expr::Neg(a) => Ok(-a.eval(env)?),
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => {
                let mut terms = Vec::new();
                self.collect_terms(1.0, env, &mut terms)?;
                finite(neumaier_sum(terms), "+")
            }
            Expr::Bin(BinOp::Mul, a, b) => finite(a.eval(env)? * b.eval(env)?, "*"),
            Expr::Bin(BinOp::Div, a, b) => {
                let d = b.eval(env)?;
                if d == 0.0 {
                    return Err(EvalError::DivisionByZero { x });
                }
                finite(a.eval(env)? / d, "/")
            }
            Expr::Call(f, args) => {
                let v = args[0].eval(env)?;
                match f {
                    Func::Sin => Ok(v.sin()),
                    Func::Cos => Ok(v.cos()),
                    Func::Exp => finite(v.exp(), "exp"),
                    Func::Log1p if v <= -1.0 => Err(EvalError::Log1pDomain { x, value: v }),
                    Func::Log1p => Ok(v.ln_1p()),
                    Func::Abs => Ok(v.abs()),
                    Func::Sqrt if v < 0.0 => Err(EvalError::SqrtNegative { x, value: v }),
                    Func::Sqrt => Ok(v.sqrt()),
                    Func::Min | Func::Max => {
                        let mut acc = v;
                        for a in &args[1..] {
                            let w = a.eval(env)?;
                            acc = if *f == Func::Min { acc.min(w) } else { acc.max(w) };
                        }
                        Ok(acc)
                    }
                }
            }
            Expr::If { cmp, lhs, rhs, then, otherwise } => {
                if cmp.test(lhs.eval(env)?, rhs.eval(env)?) {
                    then.eval(env)
                } else {
                    otherwise.eval(env)
                }
            }
        }
    }

    fn collect_terms(&self, sign: f64, env: Env, out: &mut Vec<f64>) -> Result<(), EvalError> {
        match self {
            Expr::Bin(BinOp::Add, a, b) => {
                a.collect_terms(sign, env, out)?;
                b.collect_terms(sign, env, out)
            }
            Expr::Bin(BinOp::Sub, a, b) => {
                a.collect_terms(sign, env, out)?;
                b.collect_terms(-sign, env, out)
            }
            _ => {
                out.push(sign * self.eval(env)?);
                Ok(())
            }
        }
    }

    pub fn eval_x(&self, x: f64) -> Result<f64, EvalError> {
        self.eval(Env { x, k: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        let e = parse("sin(log1p(abs(x)))").unwrap();
        assert_eq!(e, Expr::call(Func::Sin, Expr::call(Func::Log1p, Expr::call(Func::Abs, Expr::x()))));
        let e = parse("1/(1+abs(x))").unwrap();
        assert_eq!(e, Expr::div(Expr::num(1), Expr::add(Expr::num(1), Expr::call(Func::Abs, Expr::x()))));
        assert_eq!(e.to_string(), "1 / (1 + abs(x))");
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(parse("sin(").unwrap_err().offset, 4);
        let e = parse("foo(x)").unwrap_err();
        assert_eq!(e.offset, 0);
        assert!(e.message.contains("unknown identifier"));
        assert_eq!(parse("x + y").unwrap_err().offset, 4);
        assert_eq!(parse("sin(x, x)").unwrap_err().offset, 8);
        assert_eq!(parse("max(x)").unwrap_err().offset, 5);
        assert_eq!(parse("(x").unwrap_err().offset, 2);
        assert_eq!(parse("x x").unwrap_err().offset, 2);
        assert_eq!(parse("1.2.3").unwrap_err().offset, 0);
        assert!(parse("if(x, 1, 2)").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn literals() {
        assert_eq!(parse("0.125").unwrap().to_string(), "0.125");
        assert_eq!(parse("1e-3").unwrap().to_string(), "0.001");
        assert_eq!(parse("-2.50").unwrap().to_string(), "-2.5");
        assert_eq!(parse("2 * -3").unwrap().to_string(), "2 * -3");
        assert_eq!(parse("x - -3").unwrap().to_string(), "x - -3");
        assert_eq!(Expr::rational(BigRational::new(1.into(), 3.into())).to_string(), "1 / 3");
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse("1 - 2 - 3").unwrap();
        assert_eq!(e.eval_x(0.0).unwrap(), -4.0);
        let e = parse("1 - (2 - 3)").unwrap();
        assert_eq!(e.to_string(), "1 - (2 - 3)");
        assert_eq!(e.eval_x(0.0).unwrap(), 2.0);
        let e = parse("8 / 4 / 2").unwrap();
        assert_eq!(e.eval_x(0.0).unwrap(), 1.0);
        assert_eq!(parse("-(x + 1)").unwrap().to_string(), "-(x + 1)");
        assert_eq!(parse("-x * 2").unwrap().eval_x(3.0).unwrap(), -6.0);
    }

    #[test]
    fn evaluation_and_domains() {
        let e = parse("if(x < 0, -x, sqrt(x)) + max(1, x, 2)").unwrap();
        assert_eq!(e.eval_x(-3.0).unwrap(), 5.0);
        assert_eq!(e.eval_x(4.0).unwrap(), 6.0);
        assert!(matches!(parse("1/x").unwrap().eval_x(0.0), Err(EvalError::DivisionByZero { .. })));
        assert!(matches!(parse("sqrt(x)").unwrap().eval_x(-1.0), Err(EvalError::SqrtNegative { .. })));
        assert!(matches!(parse("log1p(x)").unwrap().eval_x(-1.0), Err(EvalError::Log1pDomain { .. })));
        assert!(matches!(parse("exp(x)").unwrap().eval_x(1000.0), Err(EvalError::NonFinite { .. })));
        assert_eq!(parse("k").unwrap().eval_x(0.0), Err(EvalError::UnboundK));
        assert_eq!(parse("k * x").unwrap().eval(Env { x: 2.0, k: Some(3.0) }).unwrap(), 6.0);
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let e = parse("1e16 + 1 - 1e16").unwrap();
        assert_eq!(e.eval_x(0.0).unwrap(), 1.0);
        assert_eq!(neumaier_sum([1.0, 1e100, 1.0, -1e100]), 2.0);
    }

    #[test]
    fn substitution() {
        let phi = parse("sin(log1p(abs(x)))").unwrap();
        let comp = phi.substitute(Var::X, &parse("2 * x").unwrap());
        assert_eq!(comp.to_string(), "sin(log1p(abs(2 * x)))");
        assert!(!comp.uses(Var::K));
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (-50i64..50, 0u32..4)
                .prop_map(|(n, d)| Expr::rational(BigRational::new(n.into(), BigInt::from(10).pow(d)))),
            Just(Expr::x()),
            Just(Expr::k()),
        ];
        leaf.prop_recursive(5, 40, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Expr::neg),
                (inner.clone(), inner.clone(), 0..4usize)
                    .prop_map(|(a, b, op)| { Expr::bin([BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][op], a, b) }),
                (inner.clone(), 0..6usize).prop_map(|(a, f)| {
                    Expr::call([Func::Sin, Func::Cos, Func::Exp, Func::Log1p, Func::Abs, Func::Sqrt][f], a)
                }),
                (inner.clone(), inner.clone(), any::<bool>())
                    .prop_map(|(a, b, mn)| Expr::Call(if mn { Func::Min } else { Func::Max }, vec![a, b])),
                (inner.clone(), inner.clone(), inner.clone(), inner, 0..4usize).prop_map(|(a, b, c, d, cmp)| {
                    Expr::If {
                        cmp: [Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge][cmp],
                        lhs: Box::new(a),
                        rhs: Box::new(b),
                        then: Box::new(c),
                        otherwise: Box::new(d),
                    }
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let printed = e.to_string();
            let parsed = parse(&printed).map_err(|err| TestCaseError::fail(format!("{printed}: {err}")))?;
            prop_assert_eq!(&parsed, &e.normalize(), "{}", printed);
            prop_assert_eq!(parsed.to_string(), e.normalize().to_string());
        }
    }
}
