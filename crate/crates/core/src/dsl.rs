//! A small expression language for the functions `φ(A)`, `ψ(A)`.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' ['-'] integer)*
//! primary := integer | 'A' | ident | func '(' expr ')' | '(' expr ')'
//! func    := 'exp' | 'log' | 'sqrt'
//! ```

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::scalar::{format_rational, GaussScalar};
use crate::series::TruncSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DslExpr {
    Num(BigRational),
    Var,
    Param(String),
    Neg(Box<DslExpr>),
    Add(Box<DslExpr>, Box<DslExpr>),
    Sub(Box<DslExpr>, Box<DslExpr>),
    Mul(Box<DslExpr>, Box<DslExpr>),
    Div(Box<DslExpr>, Box<DslExpr>),
    Pow(Box<DslExpr>, i64),
    Call(Func, Box<DslExpr>),
}

/// Named rational parameters referenced by an expression.
pub type Bindings = HashMap<String, BigRational>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
}

impl Lexer {
    fn new(src: &str) -> Result<Self> {
        let mut toks = Vec::new();
        let chars: Vec<char> = src.chars().collect();
        let (mut line, mut col) = (1, 1);
        let mut k = 0;
        while k < chars.len() {
            let c = chars[k];
            let (l0, c0) = (line, col);
            if c == '\n' {
                line += 1;
                col = 1;
                k += 1;
                continue;
            }
            if c.is_whitespace() {
                col += 1;
                k += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                if k < chars.len() && (chars[k] == '.' || chars[k] == 'e' && chars.get(k + 1).is_some_and(|d| d.is_ascii_digit())) {
                    return Err(Error::Parse { line: l0, column: c0 + (k - start), message: "floating-point literals are not allowed".into() });
                }
                let text: String = chars[start..k].iter().collect();
                col += k - start;
                toks.push((Tok::Int(text.parse().expect("digits")), l0, c0));
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = k;
                while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                    k += 1;
                }
                col += k - start;
                toks.push((Tok::Ident(chars[start..k].iter().collect()), l0, c0));
                continue;
            }
            if "+-*/^()".contains(c) {
                toks.push((Tok::Sym(c), l0, c0));
                col += 1;
                k += 1;
                continue;
            }
            return Err(Error::Parse { line: l0, column: c0, message: format!("unexpected character {c:?}") });
        }
        toks.push((Tok::End, line, col));
        Ok(Self { toks })
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let (_, line, column) = self.toks[self.pos];
        Err(Error::Parse { line, column, message: message.into() })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<DslExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = DslExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = DslExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<DslExpr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = DslExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Sym('/') => {
                    self.bump();
                    lhs = DslExpr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<DslExpr> {
        match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                Ok(DslExpr::Neg(Box::new(self.unary()?)))
            }
            Tok::Sym('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<DslExpr> {
        let mut base = self.primary()?;
        while *self.peek() == Tok::Sym('^') {
            self.bump();
            let negative = if *self.peek() == Tok::Sym('-') {
                self.bump();
                true
            } else {
                false
            };
            let k = match self.peek() {
                Tok::Int(k) => match i64::try_from(k.clone()) {
                    Ok(k) if k <= 1 << 20 => k,
                    _ => return self.err("exponent too large"),
                },
                _ => return self.err("expected an integer exponent"),
            };
            self.bump();
            base = DslExpr::Pow(Box::new(base), if negative { -k } else { k });
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<DslExpr> {
        match self.peek().clone() {
            Tok::Int(k) => {
                self.bump();
                Ok(DslExpr::Num(BigRational::from_integer(k)))
            }
            Tok::Ident(name) => {
                self.bump();
                let func = match name.as_str() {
                    "A" => return Ok(DslExpr::Var),
                    "exp" => Some(Func::Exp),
                    "log" => Some(Func::Log),
                    "sqrt" => Some(Func::Sqrt),
                    _ => None,
                };
                match func {
                    Some(f) => {
                        self.expect('(')?;
                        let arg = self.expr()?;
                        self.expect(')')?;
                        Ok(DslExpr::Call(f, Box::new(arg)))
                    }
                    None => Ok(DslExpr::Param(name)),
                }
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::End => self.err("unexpected end of input"),
            Tok::Sym(c) => self.err(format!("unexpected '{c}'")),
        }
    }
}

pub fn parse_dsl(src: &str) -> Result<DslExpr> {
    let lexer = Lexer::new(src)?;
    let mut p = Parser { toks: lexer.toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

impl DslExpr {
    /// Identifiers other than `A` and the function names.
    pub fn params(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_params(&self, out: &mut Vec<String>) {
        match self {
            DslExpr::Param(p) => out.push(p.clone()),
            DslExpr::Num(_) | DslExpr::Var => {}
            DslExpr::Neg(a) | DslExpr::Pow(a, _) | DslExpr::Call(_, a) => a.collect_params(out),
            DslExpr::Add(a, b) | DslExpr::Sub(a, b) | DslExpr::Mul(a, b) | DslExpr::Div(a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
        }
    }

    /// Fails on the first parameter missing from `bindings`.
    pub fn check_bindings(&self, bindings: &Bindings) -> Result<()> {
        for p in self.params() {
            if !bindings.contains_key(&p) {
                return Err(Error::UnknownIdentifier(p));
            }
        }
        Ok(())
    }

    /// Evaluation at a fixed working order. Exact divisions by series with
    /// vanishing constant term lower the order of the result.
    fn eval_at(&self, order: usize, b: &Bindings) -> Result<TruncSeries> {
        let fail = |reason: String| Error::Eval { expr: self.to_string(), reason };
        Ok(match self {
            DslExpr::Num(r) => TruncSeries::constant(GaussScalar::real(r.clone()), order),
            DslExpr::Var => TruncSeries::var(order),
            DslExpr::Param(p) => {
                let v = b.get(p).ok_or_else(|| Error::UnknownIdentifier(p.clone()))?;
                TruncSeries::constant(GaussScalar::real(v.clone()), order)
            }
            DslExpr::Neg(a) => -a.eval_at(order, b)?,
            DslExpr::Add(x, y) => aligned(x.eval_at(order, b)?, y.eval_at(order, b)?, |p, q| p + q),
            DslExpr::Sub(x, y) => aligned(x.eval_at(order, b)?, y.eval_at(order, b)?, |p, q| p - q),
            DslExpr::Mul(x, y) => aligned(x.eval_at(order, b)?, y.eval_at(order, b)?, |p, q| p * q),
            DslExpr::Div(x, y) => {
                let num = x.eval_at(order, b)?;
                let den = y.eval_at(order, b)?;
                divide(&num, &den).map_err(fail)?
            }
            DslExpr::Pow(a, k) => {
                let base = a.eval_at(order, b)?;
                if *k >= 0 {
                    base.pow(*k as u32)
                } else {
                    base.recip().map_err(|e| fail(e.to_string()))?.pow((-*k) as u32)
                }
            }
            DslExpr::Call(f, a) => {
                let arg = a.eval_at(order, b)?;
                let r = match f {
                    Func::Exp => arg.exp(),
                    Func::Log => arg.log(),
                    Func::Sqrt => arg.sqrt(),
                };
                r.map_err(|e| fail(e.to_string()))?
            }
        })
    }
}

fn aligned(p: TruncSeries, q: TruncSeries, op: impl Fn(&TruncSeries, &TruncSeries) -> TruncSeries) -> TruncSeries {
    let o = p.order().min(q.order());
    op(&p.truncate(o), &q.truncate(o))
}

fn divide(num: &TruncSeries, den: &TruncSeries) -> std::result::Result<TruncSeries, String> {
    let k = den.valuation().ok_or_else(|| "division by zero".to_string())?;
    if k == 0 {
        let o = num.order().min(den.order());
        return Ok(&num.truncate(o) * &den.truncate(o).recip().map_err(|e| e.to_string())?);
    }
    let nv = num.valuation().unwrap_or(usize::MAX);
    if nv < k {
        return Err(format!("numerator is not divisible by A^{k}"));
    }
    if k > num.order() || k > den.order() {
        return Err(format!("order too low to divide by A^{k}"));
    }
    let n = num.div_by_t(k).map_err(|e| e.to_string())?;
    let d = den.div_by_t(k).map_err(|e| e.to_string())?;
    let o = n.order().min(d.order());
    Ok(&n.truncate(o) * &d.truncate(o).recip().map_err(|e| e.to_string())?)
}

/// Evaluates `e` to a series of order `order`, raising the working order as
/// long as exact divisions eat precision.
pub fn eval_dsl(e: &DslExpr, order: usize, bindings: &Bindings) -> Result<TruncSeries> {
    e.check_bindings(bindings)?;
    let mut work = order;
    loop {
        let s = e.eval_at(work, bindings)?;
        if s.order() >= order {
            return Ok(s.truncate(order));
        }
        let lost = order - s.order();
        if work > order + 64 {
            return Err(Error::Eval { expr: e.to_string(), reason: "precision loss does not stabilise".into() });
        }
        work += lost;
    }
}

/// Parses and evaluates in one step.
pub fn eval_source(src: &str, order: usize, bindings: &Bindings) -> Result<TruncSeries> {
    eval_dsl(&parse_dsl(src)?, order, bindings)
}

/// Fully parenthesised rendering that parses back to the same tree shape.
impl fmt::Display for DslExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DslExpr::Num(r) => {
                if r.is_integer() && !r.is_negative() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "({})", format_rational(r))
                }
            }
            DslExpr::Var => f.write_str("A"),
            DslExpr::Param(p) => f.write_str(p),
            DslExpr::Neg(a) => write!(f, "(-{a})"),
            DslExpr::Add(a, b) => write!(f, "({a} + {b})"),
            DslExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            DslExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            DslExpr::Div(a, b) => write!(f, "({a} / {b})"),
            DslExpr::Pow(a, k) => write!(f, "({a}^{k})"),
            DslExpr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

/// Parses `key = p/q` pairs such as `r=1,c=2`.
pub fn parse_bindings(src: &str) -> Result<Bindings> {
    let mut out = Bindings::new();
    for part in src.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected name=value, got {part:?}")))?;
        out.insert(k.trim().to_string(), crate::scalar::parse_rational(v)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GaussScalar {
        GaussScalar::from_ratio(n, d)
    }

    #[test]
    fn constants_and_variable() {
        assert_eq!(eval_source("1", 3, &Bindings::new()).unwrap(), TruncSeries::one(3));
        assert_eq!(eval_source("A", 3, &Bindings::new()).unwrap(), TruncSeries::var(3));
    }

    #[test]
    fn exp_minus_a() {
        let s = eval_source("exp(-A)", 3, &Bindings::new()).unwrap();
        assert_eq!(s, TruncSeries::from_coeffs(vec![q(1, 1), q(-1, 1), q(1, 2), q(-1, 6)]));
    }

    #[test]
    fn bernoulli_generating_function() {
        let s = eval_source("A/(exp(A)-1)", 2, &Bindings::new()).unwrap();
        assert_eq!(s, TruncSeries::from_coeffs(vec![q(1, 1), q(-1, 2), q(1, 12)]));
        let s = eval_source("A/(exp(A)-1)", 6, &Bindings::new()).unwrap();
        // B_4 = -1/30, B_6 = 1/42
        assert_eq!(s.coeff(4), &q(-1, 720));
        assert_eq!(s.coeff(5), &q(0, 1));
        assert_eq!(s.coeff(6), &q(1, 30240));
    }

    #[test]
    fn log_of_a_is_rejected() {
        let err = eval_source("log(A)", 4, &Bindings::new()).unwrap_err();
        assert!(matches!(err, Error::Eval { .. }));
    }

    #[test]
    fn non_divisible_quotient_is_rejected() {
        assert!(eval_source("1/A", 4, &Bindings::new()).is_err());
        assert!(eval_source("(A+A^2)/A^2", 4, &Bindings::new()).is_err());
        assert!(eval_source("1/(A-A)", 4, &Bindings::new()).is_err());
    }

    #[test]
    fn parameters_bind() {
        let mut b = Bindings::new();
        b.insert("r".into(), BigRational::new(1.into(), 2.into()));
        let s = eval_source("1 + r*A", 2, &b).unwrap();
        assert_eq!(s, TruncSeries::from_coeffs(vec![q(1, 1), q(1, 2), q(0, 1)]));
        assert_eq!(eval_source("1 + c*A", 2, &b).unwrap_err(), Error::UnknownIdentifier("c".into()));
    }

    #[test]
    fn precedence() {
        let s = eval_source("-A^2 + 2*A/2", 3, &Bindings::new()).unwrap();
        assert_eq!(s, TruncSeries::from_coeffs(vec![q(0, 1), q(1, 1), q(-1, 1), q(0, 1)]));
        let s = eval_source("(1+A)^-1", 3, &Bindings::new()).unwrap();
        assert_eq!(s, TruncSeries::from_coeffs(vec![q(1, 1), q(-1, 1), q(1, 1), q(-1, 1)]));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_dsl("1 +\n  * A") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_dsl("exp(A") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 6)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_dsl("1.5*A"), Err(Error::Parse { .. })));
        assert!(matches!(parse_dsl("A $ 2"), Err(Error::Parse { .. })));
    }

    #[test]
    fn render_round_trip_examples() {
        for src in ["A/(exp(A)-1)", "exp((c-1)/r*log(1+r*A))", "-(1-A)^-2", "sqrt(1+A)*3/7"] {
            let e = parse_dsl(src).unwrap();
            let again = parse_dsl(&e.to_string()).unwrap();
            assert_eq!(e, again, "{src}");
        }
    }
}
