//! Arithmetic expressions over `(t, x, y, z)` with jet and real evaluation.
//!
//! Grammar, whitespace insensitive:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' factor)?
//! base   := number | variable | call '(' expr ')' | '(' expr ')' | '-' base
//! ```
//!
//! An exponent must be free of variables so that powers of jets stay closed form.

use std::fmt;

use crate::exterior::Coords;
use crate::jets::{Jet, JetError, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T,
    X,
    Y,
    Z,
}

impl Var {
    pub fn axis(self) -> usize {
        self as usize
    }

    fn name(self) -> &'static str {
        ["t", "x", "y", "z"][self as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
        }
    }

    fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("exponent at offset {offset} depends on a variable")]
    NonConstantExponent { offset: usize },
}

impl ExprError {
    pub fn offset(&self) -> usize {
        match self {
            ExprError::Syntax { offset, .. }
            | ExprError::UnknownIdentifier { offset, .. }
            | ExprError::NonConstantExponent { offset } => *offset,
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn syntax(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some('+') => BinOp::Add,
                Some('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some('*') => BinOp::Mul,
                Some('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(self.factor()?));
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let base = self.base()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let exponent = self.factor()?;
        if exponent.has_variables() {
            return Err(ExprError::NonConstantExponent { offset: at });
        }
        Ok(Expr::Pow(Box::new(base), Box::new(exponent)))
    }

    fn base(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some('-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.base()?)))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.identifier(),
            Some(c) => Err(self.syntax(&format!("unexpected character `{c}`"))),
        }
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        let text = &self.src[start..end];
        let value = text.parse::<f64>().map_err(|_| ExprError::Syntax {
            offset: start,
            message: format!("malformed number `{text}`"),
        })?;
        self.pos = end;
        Ok(Expr::Num(value))
    }

    fn identifier(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.src.len() - start);
        let name = &self.src[start..start + len];
        self.pos += len;
        let var = match name {
            "t" => Some(Var::T),
            "x" => Some(Var::X),
            "y" => Some(Var::Y),
            "z" => Some(Var::Z),
            _ => None,
        };
        if let Some(v) = var {
            return Ok(Expr::Var(v));
        }
        let Some(func) = Func::lookup(name) else {
            return Err(ExprError::UnknownIdentifier {
                offset: start,
                name: name.to_string(),
            });
        };
        self.expect('(')?;
        let arg = self.expr()?;
        self.expect(')')?;
        Ok(Expr::Call(func, Box::new(arg)))
    }
}

impl Expr {
    pub fn has_variables(&self) -> bool {
        self.depends_on(|_| true)
    }

    /// Whether any variable accepted by `pred` occurs.
    pub fn depends_on(&self, pred: impl Fn(Var) -> bool + Copy) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(v) => pred(*v),
            Expr::Neg(a) | Expr::Call(_, a) => a.depends_on(pred),
            Expr::Binary(_, a, b) | Expr::Pow(a, b) => a.depends_on(pred) || b.depends_on(pred),
        }
    }

    /// True when only `t` occurs, as required of a gauge function.
    pub fn is_time_only(&self) -> bool {
        !self.depends_on(|v| v != Var::T)
    }

    pub fn eval_f64(&self, point: Point) -> Result<f64, JetError> {
        Ok(match self {
            Expr::Num(c) => *c,
            Expr::Var(v) => point[v.axis()],
            Expr::Neg(a) => -a.eval_f64(point)?,
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval_f64(point)?, b.eval_f64(point)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div if b == 0.0 => return Err(JetError::DivisionSingularity),
                    BinOp::Div => a / b,
                }
            }
            Expr::Pow(a, b) => {
                let (a, p) = (a.eval_f64(point)?, b.eval_f64(point)?);
                if p.fract() != 0.0 && a <= 0.0 {
                    return Err(JetError::Domain {
                        function: "pow",
                        value: a,
                    });
                }
                a.powf(p)
            }
            Expr::Call(f, a) => {
                let a = a.eval_f64(point)?;
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Sqrt if a <= 0.0 => {
                        return Err(JetError::Domain {
                            function: "sqrt",
                            value: a,
                        })
                    }
                    Func::Sqrt => a.sqrt(),
                }
            }
        })
    }

    /// Evaluates over the jet algebra given the coordinate jets.
    pub fn eval_jet(&self, coords: &Coords) -> Result<Jet, JetError> {
        Ok(match self {
            Expr::Num(c) => coords[0].constant_like(*c),
            Expr::Var(v) => coords[v.axis()].clone(),
            Expr::Neg(a) => -a.eval_jet(coords)?,
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval_jet(coords)?, b.eval_jet(coords)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a.try_div(&b)?,
                }
            }
            Expr::Pow(a, b) => {
                let p = b.eval_f64(coords[0].anchor())?;
                a.eval_jet(coords)?.powf(p)?
            }
            Expr::Call(f, a) => {
                let a = a.eval_jet(coords)?;
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Sqrt => a.sqrt()?,
                }
            }
        })
    }

    /// Jet of the expression at `point` with order `order`.
    pub fn eval_jet_at(&self, point: Point, order: usize) -> Result<Jet, JetError> {
        self.eval_jet(&Jet::coordinates(point, order)?)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Pow(..) => 3,
            _ => 4,
        }
    }
}

struct Wrap<'a>(&'a Expr, bool);

impl fmt::Display for Wrap<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => write!(f, "{c:?}"),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Neg(a) => write!(f, "-{}", Wrap(a, a.precedence() < 4)),
            Expr::Binary(op, a, b) => {
                let p = self.precedence();
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                // left-associative: the right operand needs parens at equal precedence
                write!(f, "{} {sym} {}", Wrap(a, a.precedence() < p), Wrap(b, b.precedence() <= p))
            }
            Expr::Pow(a, b) => write!(f, "{}^{}", Wrap(a, a.precedence() < 4), Wrap(b, b.precedence() < 3)),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::MultiIndex;

    fn value(s: &str) -> f64 {
        parse(s).unwrap().eval_f64([0.0; 4]).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(value("1+2*3"), 7.0);
        assert_eq!(value("2^3^2"), 512.0);
        assert_eq!(value("8 - 3 - 2"), 3.0);
        assert_eq!(value("8 / 4 / 2"), 1.0);
        assert_eq!(value("  ( 1 + 2 ) * 3 "), 9.0);
        assert_eq!(value("-2^2"), 4.0);
        assert_eq!(value("2^-1"), 0.5);
        assert_eq!(value("1.5e2 + .5"), 150.5);
    }

    #[test]
    fn unknown_identifier_offset() {
        let err = parse("x + sin(q)").unwrap_err();
        assert_eq!(
            err,
            ExprError::UnknownIdentifier {
                offset: 8,
                name: "q".into()
            }
        );
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(parse("1 +").unwrap_err().offset(), 3);
        assert_eq!(parse("(1").unwrap_err().offset(), 2);
        assert_eq!(parse("1 2").unwrap_err().offset(), 2);
        assert_eq!(parse("x^y").unwrap_err(), ExprError::NonConstantExponent { offset: 2 });
        assert!(parse("sin x").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn jet_power() {
        let e = parse("x^2").unwrap();
        let j = e.eval_jet_at([0.0, 3.0, 0.0, 0.0], 2).unwrap();
        assert_eq!(j.value(), 9.0);
        assert_eq!(j.partial(MultiIndex::unit(1)).unwrap(), 6.0);
        assert_eq!(j.coeff(MultiIndex::new(0, 2, 0, 0)), 1.0);
    }

    #[test]
    fn jet_errors() {
        let e = parse("x/(y-y)").unwrap();
        assert_eq!(
            e.eval_jet_at([0.0, 1.0, 2.0, 0.0], 2).unwrap_err(),
            JetError::DivisionSingularity
        );
        assert!(matches!(
            parse("sqrt(x)").unwrap().eval_jet_at([0.0, -1.0, 0.0, 0.0], 2),
            Err(JetError::Domain { .. })
        ));
    }

    #[test]
    fn matches_primitives() {
        let p = [0.7, 0.1, -1.3, 0.4];
        let coords = Jet::coordinates(p, 3).unwrap();
        let direct = &coords[0].sin() * &coords[2];
        let parsed = parse("sin(t)*y").unwrap().eval_jet(&coords).unwrap();
        for (a, b) in parsed.coeffs().iter().zip(direct.coeffs()) {
            assert!((a - b).abs() <= 1e-14);
        }
    }

    #[test]
    fn gauge_classification() {
        assert!(parse("t^2 + sin(t)").unwrap().is_time_only());
        assert!(!parse("t*x").unwrap().is_time_only());
    }

    #[test]
    fn printing_round_trips() {
        for s in ["-(x + 1)", "(-x)^2", "x - (y - z)", "x / (y * z)", "2^3^2", "(2^3)^2", "-x^2"] {
            let e = parse(s).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{s} -> {e}");
        }
    }
}
