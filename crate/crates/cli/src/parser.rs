//! Expression grammar for the command line:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/' | 'ox' | '⊗') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' int)?
//! primary := int | 'i' | 'th' | atom | 'C'
//!          | '[' expr ',' expr ']' | '(' expr ')' | 'auto' '(' expr ')'
//! atom    := ('L' | 'T' | 'G') '(' index ')'
//! index   := ('+'|'-')? iterm (('+'|'-') iterm)*
//! iterm   := int ('/' int)? ('*' 'th')? | 'th' | 's'
//! ```
//!
//! Parsing produces a tree; elaboration resolves indices against the active
//! instance (sector legality included) and evaluates to a typed value.

use std::fmt;
use twisted_n2::{
    bracket, AlgebraInstance, AutoTable, BasisVector, Element, GammaVector, Kind, Scalar,
    Tensor2, Tensor3,
};

/// Parse or elaboration failure with a source position.
#[derive(Debug, Clone)]
pub struct SourceError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for SourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.col, self.message
        )
    }
}

impl std::error::Error for SourceError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

impl Pos {
    fn err(self, message: impl Into<String>) -> SourceError {
        SourceError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    TensorSign,
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, SourceError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut at = 0usize;
    while at < chars.len() {
        let ch = chars[at];
        let pos = Pos { line, col };
        match ch {
            '\n' => {
                line += 1;
                col = 1;
                at += 1;
            }
            ' ' | '\t' | '\r' => {
                col += 1;
                at += 1;
            }
            '0'..='9' => {
                let mut value: i64 = 0;
                while at < chars.len() {
                    let Some(d) = chars[at].to_digit(10) else {
                        break;
                    };
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(d as i64))
                        .ok_or_else(|| pos.err("integer literal out of range"))?;
                    at += 1;
                    col += 1;
                }
                out.push((Tok::Int(value), pos));
            }
            c if c.is_alphabetic() || c == 'θ' => {
                let mut ident = String::new();
                while at < chars.len() && (chars[at].is_alphanumeric() || chars[at] == 'θ') {
                    ident.push(chars[at]);
                    at += 1;
                    col += 1;
                }
                match ident.as_str() {
                    "θ" | "theta" => out.push((Tok::Ident("th".to_string()), pos)),
                    "ox" => out.push((Tok::TensorSign, pos)),
                    _ => out.push((Tok::Ident(ident), pos)),
                }
            }
            _ => {
                let tok = match ch {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    '⊗' => Tok::TensorSign,
                    other => {
                        return Err(pos.err(format!("unexpected character '{other}'")));
                    }
                };
                out.push((tok, pos));
                at += 1;
                col += 1;
            }
        }
    }
    Ok(out)
}

/// Raw index data: the rational part in doubled units, the θ coefficient,
/// and how many `s` shifts appeared.
#[derive(Clone, Copy, Debug)]
struct IndexParts {
    doubled: i64,
    theta: i64,
    shifts: i64,
    pos: Pos,
}

#[derive(Clone, Debug)]
enum Expr {
    Int(i64),
    ImaginaryUnit,
    Theta,
    Central,
    Atom(Kind, IndexParts, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>, Pos),
    Sub(Box<Expr>, Box<Expr>, Pos),
    Mul(Box<Expr>, Box<Expr>, Pos),
    Div(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, i64, Pos),
    Bracket(Box<Expr>, Box<Expr>, Pos),
    TensorProd(Box<Expr>, Box<Expr>, Pos),
    AutoApply(Box<Expr>, Pos),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), SourceError> {
        let pos = self.pos();
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => Err(pos.err(format!("expected {what}"))),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, SourceError> {
        let mut lhs = self.parse_term()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let rhs = self.parse_term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs), pos);
                }
                Some(Tok::Minus) => {
                    self.next();
                    let rhs = self.parse_term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr, SourceError> {
        let mut lhs = self.parse_unary()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    let rhs = self.parse_unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs), pos);
                }
                Some(Tok::Slash) => {
                    self.next();
                    let rhs = self.parse_unary()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs), pos);
                }
                Some(Tok::TensorSign) => {
                    self.next();
                    let rhs = self.parse_unary()?;
                    lhs = Expr::TensorProd(Box::new(lhs), Box::new(rhs), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_unary(&mut self) -> Result<Expr, SourceError> {
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            return Ok(Expr::Neg(Box::new(self.parse_unary()?)));
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Expr, SourceError> {
        let base = self.parse_primary()?;
        if self.peek() == Some(&Tok::Caret) {
            let pos = self.pos();
            self.next();
            let negative = if self.peek() == Some(&Tok::Minus) {
                self.next();
                true
            } else {
                false
            };
            let exp_pos = self.pos();
            match self.next() {
                Some(Tok::Int(n)) => {
                    let exp = if negative { -n } else { n };
                    return Ok(Expr::Pow(Box::new(base), exp, pos));
                }
                _ => return Err(exp_pos.err("expected integer exponent")),
            }
        }
        Ok(base)
    }

    fn parse_primary(&mut self) -> Result<Expr, SourceError> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Int(n)) => Ok(Expr::Int(n)),
            Some(Tok::LParen) => {
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::LBracket) => {
                let lhs = self.parse_expr()?;
                self.expect(Tok::Comma, "',' between bracket operands")?;
                let rhs = self.parse_expr()?;
                self.expect(Tok::RBracket, "']'")?;
                Ok(Expr::Bracket(Box::new(lhs), Box::new(rhs), pos))
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "i" => Ok(Expr::ImaginaryUnit),
                "th" => Ok(Expr::Theta),
                "C" => Ok(Expr::Central),
                "L" | "T" | "G" => {
                    let kind = match name.as_str() {
                        "L" => Kind::L,
                        "T" => Kind::T,
                        _ => Kind::G,
                    };
                    self.expect(Tok::LParen, "'(' after basis letter")?;
                    let parts = self.parse_index()?;
                    self.expect(Tok::RParen, "')' after index")?;
                    Ok(Expr::Atom(kind, parts, pos))
                }
                "auto" => {
                    self.expect(Tok::LParen, "'(' after auto")?;
                    let inner = self.parse_expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Expr::AutoApply(Box::new(inner), pos))
                }
                other => Err(pos.err(format!("unknown name '{other}'"))),
            },
            _ => Err(pos.err("expected an expression")),
        }
    }

    fn parse_index(&mut self) -> Result<IndexParts, SourceError> {
        let start = self.pos();
        let mut parts = IndexParts {
            doubled: 0,
            theta: 0,
            shifts: 0,
            pos: start,
        };
        let mut sign = 1i64;
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            sign = -1;
        } else if self.peek() == Some(&Tok::Plus) {
            self.next();
        }
        loop {
            self.parse_index_term(&mut parts, sign)?;
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    sign = 1;
                }
                Some(Tok::Minus) => {
                    self.next();
                    sign = -1;
                }
                _ => return Ok(parts),
            }
        }
    }

    fn parse_index_term(&mut self, parts: &mut IndexParts, sign: i64) -> Result<(), SourceError> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Int(n)) => {
                let mut doubled = 2 * n;
                if self.peek() == Some(&Tok::Slash) {
                    self.next();
                    let dpos = self.pos();
                    match self.next() {
                        Some(Tok::Int(1)) => {}
                        Some(Tok::Int(2)) => doubled = n,
                        _ => {
                            return Err(dpos.err("index denominators must be 1 or 2"));
                        }
                    }
                    parts.doubled += sign * doubled;
                    return Ok(());
                }
                if self.peek() == Some(&Tok::Star) {
                    self.next();
                    let tpos = self.pos();
                    match self.next() {
                        Some(Tok::Ident(id)) if id == "th" => {
                            parts.theta += sign * n;
                            return Ok(());
                        }
                        _ => return Err(tpos.err("expected 'th' after '*' in an index")),
                    }
                }
                parts.doubled += sign * doubled;
                Ok(())
            }
            Some(Tok::Ident(id)) if id == "th" => {
                parts.theta += sign;
                Ok(())
            }
            Some(Tok::Ident(id)) if id == "s" => {
                parts.shifts += sign;
                Ok(())
            }
            _ => Err(pos.err("expected an index term")),
        }
    }
}

/// A typed evaluation result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(Scalar),
    Elem(Element),
    Tensor2(Tensor2),
    Tensor3(Tensor3),
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Elem(_) => "element",
            Value::Tensor2(_) => "rank-2 tensor",
            Value::Tensor3(_) => "rank-3 tensor",
        }
    }

    pub fn render(&self, inst: &AlgebraInstance) -> String {
        match self {
            Value::Scalar(s) => s.to_string(),
            Value::Elem(e) => e.render(inst),
            Value::Tensor2(t) => t.render(inst),
            Value::Tensor3(t) => t.render(inst),
        }
    }
}

fn negate(v: Value) -> Value {
    match v {
        Value::Scalar(s) => Value::Scalar(-s),
        Value::Elem(e) => Value::Elem(e.neg()),
        Value::Tensor2(t) => Value::Tensor2(t.scale(&Scalar::from_int(-1))),
        Value::Tensor3(t) => {
            let mut out = Tensor3::zero();
            for ((a, b, c), coeff) in t.terms() {
                out.add_term(*a, *b, *c, -coeff);
            }
            Value::Tensor3(out)
        }
    }
}

/// Elaborates parse trees against an instance and an optional automorphism
/// in scope for `auto(...)`.
pub struct Evaluator<'a> {
    pub inst: &'a AlgebraInstance,
    pub auto: Option<&'a AutoTable>,
}

impl<'a> Evaluator<'a> {
    pub fn new(inst: &'a AlgebraInstance) -> Self {
        Evaluator { inst, auto: None }
    }

    pub fn with_auto(inst: &'a AlgebraInstance, auto: &'a AutoTable) -> Self {
        Evaluator {
            inst,
            auto: Some(auto),
        }
    }

    pub fn eval_str(&self, src: &str) -> Result<Value, SourceError> {
        let toks = lex(src)?;
        let end = toks
            .last()
            .map(|(_, p)| Pos {
                line: p.line,
                col: p.col + 1,
            })
            .unwrap_or(Pos { line: 1, col: 1 });
        let mut parser = Parser { toks, at: 0, end };
        let expr = parser.parse_expr()?;
        if parser.at < parser.toks.len() {
            return Err(parser.pos().err("unexpected trailing input"));
        }
        self.eval(&expr)
    }

    /// Convenience wrappers with type expectations.
    pub fn eval_element(&self, src: &str) -> Result<Element, SourceError> {
        match self.eval_str(src)? {
            Value::Elem(e) => Ok(e),
            Value::Scalar(s) if s.is_zero() => Ok(Element::zero()),
            other => Err(SourceError {
                line: 1,
                col: 1,
                message: format!("expected an element, found a {}", other.type_name()),
            }),
        }
    }

    pub fn eval_scalar(&self, src: &str) -> Result<Scalar, SourceError> {
        match self.eval_str(src)? {
            Value::Scalar(s) => Ok(s),
            other => Err(SourceError {
                line: 1,
                col: 1,
                message: format!("expected a scalar, found a {}", other.type_name()),
            }),
        }
    }

    pub fn eval_tensor2(&self, src: &str) -> Result<Tensor2, SourceError> {
        match self.eval_str(src)? {
            Value::Tensor2(t) => Ok(t),
            Value::Scalar(s) if s.is_zero() => Ok(Tensor2::zero()),
            other => Err(SourceError {
                line: 1,
                col: 1,
                message: format!("expected a rank-2 tensor, found a {}", other.type_name()),
            }),
        }
    }

    /// Resolves an index written on the command line, e.g. `-3/2` or `1+th`.
    pub fn parse_gamma(&self, src: &str) -> Result<GammaVector, SourceError> {
        let toks = lex(src)?;
        let end = Pos { line: 1, col: 1 };
        let mut parser = Parser { toks, at: 0, end };
        let parts = parser.parse_index()?;
        if parser.at < parser.toks.len() {
            return Err(parser.pos().err("unexpected trailing input"));
        }
        self.elaborate_index(&parts)
    }

    fn elaborate_index(&self, parts: &IndexParts) -> Result<GammaVector, SourceError> {
        if self.inst.rank == 1 && parts.theta != 0 {
            return Err(parts.pos.err("θ does not appear in rank-1 indices"));
        }
        let doubled = parts.doubled + parts.shifts;
        let gv = if doubled.rem_euclid(2) == 0 {
            GammaVector::base([doubled / 2, parts.theta])
        } else {
            GammaVector::shifted([(doubled - 1) / 2, parts.theta])
        };
        Ok(gv)
    }

    fn eval(&self, expr: &Expr) -> Result<Value, SourceError> {
        match expr {
            Expr::Int(n) => Ok(Value::Scalar(Scalar::from_int(*n))),
            Expr::ImaginaryUnit => Ok(Value::Scalar(Scalar::i())),
            Expr::Theta => Ok(Value::Scalar(Scalar::theta())),
            Expr::Central => Ok(Value::Elem(Element::basis(BasisVector::c()))),
            Expr::Atom(kind, parts, pos) => {
                let index = self.elaborate_index(parts)?;
                let bv = match (kind, index.sector) {
                    (Kind::L, twisted_n2::Sector::Base) => BasisVector::l(index),
                    (Kind::L, _) => {
                        return Err(pos.err("L takes an index in Γ, not in Γ_s"));
                    }
                    (Kind::T, twisted_n2::Sector::Shifted) => BasisVector::t(index),
                    (Kind::T, _) => {
                        return Err(pos.err("T takes an index in Γ_s, not in Γ"));
                    }
                    (Kind::G, _) => BasisVector::g(index),
                    (Kind::C, _) => unreachable!(),
                };
                Ok(Value::Elem(Element::basis(bv)))
            }
            Expr::Neg(inner) => Ok(negate(self.eval(inner)?)),
            Expr::Add(lhs, rhs, pos) => self.combine(lhs, rhs, *pos, false),
            Expr::Sub(lhs, rhs, pos) => self.combine(lhs, rhs, *pos, true),
            Expr::Mul(lhs, rhs, pos) => {
                let l = self.eval(lhs)?;
                let r = self.eval(rhs)?;
                match (l, r) {
                    (Value::Scalar(a), Value::Scalar(b)) => Ok(Value::Scalar(&a * &b)),
                    (Value::Scalar(a), Value::Elem(e)) | (Value::Elem(e), Value::Scalar(a)) => {
                        Ok(Value::Elem(e.scale(&a)))
                    }
                    (Value::Scalar(a), Value::Tensor2(t))
                    | (Value::Tensor2(t), Value::Scalar(a)) => Ok(Value::Tensor2(t.scale(&a))),
                    (l, r) => Err(pos.err(format!(
                        "cannot multiply a {} by a {}; brackets are written [x, y]",
                        l.type_name(),
                        r.type_name()
                    ))),
                }
            }
            Expr::Div(lhs, rhs, pos) => {
                let l = self.eval(lhs)?;
                let r = self.eval(rhs)?;
                let Value::Scalar(b) = r else {
                    return Err(pos.err(format!(
                        "the divisor must be a scalar, found a {}",
                        r.type_name()
                    )));
                };
                let inv = b
                    .checked_inv()
                    .ok_or_else(|| pos.err("division by zero"))?;
                match l {
                    Value::Scalar(a) => Ok(Value::Scalar(&a * &inv)),
                    Value::Elem(e) => Ok(Value::Elem(e.scale(&inv))),
                    Value::Tensor2(t) => Ok(Value::Tensor2(t.scale(&inv))),
                    Value::Tensor3(_) => Err(pos.err("cannot divide a rank-3 tensor")),
                }
            }
            Expr::Pow(base, exp, pos) => {
                let Value::Scalar(b) = self.eval(base)? else {
                    return Err(pos.err("only scalars take powers"));
                };
                if b.is_zero() && *exp < 0 {
                    return Err(pos.err("negative power of zero"));
                }
                Ok(Value::Scalar(b.pow(*exp)))
            }
            Expr::Bracket(lhs, rhs, pos) => {
                let (l, r) = (self.eval(lhs)?, self.eval(rhs)?);
                match (l, r) {
                    (Value::Elem(a), Value::Elem(b)) => {
                        Ok(Value::Elem(bracket(self.inst, &a, &b)))
                    }
                    (l, r) => Err(pos.err(format!(
                        "brackets take two elements, found a {} and a {}",
                        l.type_name(),
                        r.type_name()
                    ))),
                }
            }
            Expr::TensorProd(lhs, rhs, pos) => {
                let (l, r) = (self.eval(lhs)?, self.eval(rhs)?);
                match (l, r) {
                    (Value::Elem(a), Value::Elem(b)) => {
                        Ok(Value::Tensor2(Tensor2::product(&a, &b)))
                    }
                    (Value::Tensor2(t), Value::Elem(e)) => {
                        Ok(Value::Tensor3(Tensor3::from_slot(&t, 2, &e)))
                    }
                    (Value::Elem(e), Value::Tensor2(t)) => {
                        Ok(Value::Tensor3(Tensor3::from_slot(&t, 0, &e)))
                    }
                    (l, r) => Err(pos.err(format!(
                        "cannot tensor a {} with a {}",
                        l.type_name(),
                        r.type_name()
                    ))),
                }
            }
            Expr::AutoApply(inner, pos) => {
                let table = self
                    .auto
                    .ok_or_else(|| pos.err("no automorphism in scope; pass --auto, --gauto or --table"))?;
                let Value::Elem(e) = self.eval(inner)? else {
                    return Err(pos.err("auto(...) applies to elements"));
                };
                table
                    .apply(&e, self.inst)
                    .map(Value::Elem)
                    .map_err(|err| pos.err(err.to_string()))
            }
        }
    }

    fn combine(
        &self,
        lhs: &Expr,
        rhs: &Expr,
        pos: Pos,
        subtract: bool,
    ) -> Result<Value, SourceError> {
        let l = self.eval(lhs)?;
        let mut r = self.eval(rhs)?;
        if subtract {
            r = negate(r);
        }
        match (l, r) {
            (Value::Scalar(a), Value::Scalar(b)) => Ok(Value::Scalar(&a + &b)),
            (Value::Elem(a), Value::Elem(b)) => Ok(Value::Elem(a.add(&b))),
            (Value::Tensor2(a), Value::Tensor2(b)) => Ok(Value::Tensor2(a.add(&b))),
            (Value::Tensor3(a), Value::Tensor3(b)) => Ok(Value::Tensor3(a.add(&b))),
            // zero scalars absorb into any type
            (Value::Scalar(s), other) | (other, Value::Scalar(s)) if s.is_zero() => Ok(other),
            (l, r) => Err(pos.err(format!(
                "cannot add a {} and a {}",
                l.type_name(),
                r.type_name()
            ))),
        }
    }
}
