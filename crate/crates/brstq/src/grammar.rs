//! Polynomial expressions: rational literals, identifiers, `+ - * / ^` and
//! parentheses. `I` is the imaginary unit; `/` needs a nonzero constant on
//! its right. Juxtaposition is an error, so `2 q` must be written `2*q`.

use std::collections::BTreeMap;
use std::sync::Arc;

use brstq_core::{Poly, Scalar, VarContext};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { name: String, position: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(chars[start..i].iter().collect())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError::Syntax { position: i, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ctx: &'a Arc<VarContext>,
    constants: &'a BTreeMap<String, Scalar>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { position: self.offset(), message: message.into() })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let at = self.offset();
                let d = self.unary()?;
                let inv = constant_of(&d).and_then(|c| c.inv());
                match inv {
                    Some(inv) => acc = acc.scale(&inv),
                    None => {
                        return Err(ParseError::Syntax { position: at, message: "division by a non-constant or zero".into() })
                    }
                }
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Op('('))) {
                return self.error("implicit multiplication is not allowed; use `*`");
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                let e: u32 = n.parse().map_err(|_| ParseError::Syntax {
                    position: self.offset(),
                    message: format!("exponent `{n}` is too large"),
                })?;
                self.pos += 1;
                if self.peek() == Some(&Tok::Op('^')) {
                    return self.error("chained exponents need parentheses");
                }
                Ok(base.pow(e))
            }
            _ => self.error("exponent must be a nonnegative integer literal"),
        }
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let c = Scalar::parse_integer(&n).expect("lexer yields digits");
                Ok(Poly::constant(self.ctx, c))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "I" {
                    Ok(Poly::constant(self.ctx, Scalar::i()))
                } else if let Some(i) = self.ctx.index_of(&name) {
                    Ok(Poly::var(self.ctx, i))
                } else if let Some(c) = self.constants.get(&name) {
                    Ok(Poly::constant(self.ctx, c.clone()))
                } else {
                    Err(ParseError::UnknownIdentifier { name, position: at })
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.error("expected `)`");
                }
                Ok(inner)
            }
            Some(Tok::Op(c)) => self.error(format!("unexpected `{c}`")),
            None => self.error("unexpected end of input"),
        }
    }
}

fn constant_of(p: &Poly) -> Option<Scalar> {
    match p.degree() {
        None => Some(Scalar::zero()),
        Some(0) => Some(p.constant_term()),
        _ => None,
    }
}

/// Parses `src` over the variables of `ctx`; `constants` supplies named
/// parameters.
pub fn parse_polynomial_with(
    src: &str,
    ctx: &Arc<VarContext>,
    constants: &BTreeMap<String, Scalar>,
) -> Result<Poly, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.chars().count(), ctx, constants };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.error(format!("unexpected `{}`", show(&p.toks[p.pos].1)));
    }
    Ok(out)
}

pub fn parse_polynomial(src: &str, ctx: &Arc<VarContext>) -> Result<Poly, ParseError> {
    parse_polynomial_with(src, ctx, &BTreeMap::new())
}

/// Parses an expression that must evaluate to a constant.
pub fn parse_constant(src: &str, constants: &BTreeMap<String, Scalar>) -> Result<Scalar, ParseError> {
    let ctx = VarContext::new(Vec::<String>::new());
    let p = parse_polynomial_with(src, &ctx, constants)?;
    Ok(constant_of(&p).expect("no variables to appear"))
}

fn show(t: &Tok) -> String {
    match t {
        Tok::Num(s) | Tok::Ident(s) => s.clone(),
        Tok::Op(c) => c.to_string(),
    }
}
