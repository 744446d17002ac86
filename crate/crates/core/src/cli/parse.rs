//! Homogeneous polynomial expressions.
//!
//! ```text
//! poly   := ['-'] term (('+' | '-') term)*
//! term   := coef ['*'] mono | mono | coef
//! mono   := factor ('*' factor)*
//! factor := var ['^' uint]
//! var    := 'X' uint | 'x' | 'y' | 'z'
//! coef   := uint | '(' int (',' int)* ')'
//! ```
//!
//! Integers are reduced mod `p`; a parenthesised tuple is a coefficient
//! vector in the field's polynomial basis, which is how extension-field
//! coefficients are rendered.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::gf::{FieldCtx, FieldElem};
use crate::poly::GradedPoly;

/// `pos` is a byte offset into the input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    ctx: &'a FieldCtx,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Digits only; no whitespace inside a number.
    fn digits(&mut self) -> Result<&'a [u8], ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected a number");
        }
        Ok(&self.text[start..self.pos])
    }

    fn uint_mod_p(&mut self) -> Result<u64, ParseError> {
        let p = self.ctx.p();
        Ok(self
            .digits()?
            .iter()
            .fold(0u64, |acc, d| (acc * 10 + u64::from(d - b'0')) % p))
    }

    fn small_uint(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        let d = self.digits()?;
        std::str::from_utf8(d)
            .expect("ascii digits")
            .parse::<u32>()
            .or_else(|_| self.err(start, "number too large"))
    }

    fn coef(&mut self) -> Result<FieldElem, ParseError> {
        let p = self.ctx.p() as i64;
        if !self.eat(b'(') {
            let r = self.uint_mod_p()?;
            return Ok(self.ctx.from_int(r as i64));
        }
        let start = self.pos;
        let mut cs = Vec::new();
        loop {
            let neg = self.eat(b'-');
            let r = self.uint_mod_p()? as i64;
            cs.push(if neg { (p - r) % p } else { r });
            if self.eat(b')') {
                break;
            }
            if !self.eat(b',') {
                return self.err(self.pos, "expected ',' or ')'");
            }
        }
        if cs.len() > self.ctx.degree() {
            return self.err(
                start,
                format!(
                    "{} coefficients for a field of degree {}",
                    cs.len(),
                    self.ctx.degree()
                ),
            );
        }
        Ok(self.ctx.from_coeffs(&cs))
    }

    fn var(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let idx = match self.peek() {
            Some(b'X') => {
                self.pos += 1;
                self.small_uint()? as usize
            }
            Some(b'x') => {
                self.pos += 1;
                0
            }
            Some(b'y') => {
                self.pos += 1;
                1
            }
            Some(b'z') => {
                self.pos += 1;
                2
            }
            Some(c) => return self.err(start, format!("unexpected '{}'", c as char)),
            None => return self.err(start, "unexpected end of input"),
        };
        if idx >= self.nvars {
            return self.err(
                start,
                format!(
                    "unknown variable X{idx}: only X0..X{} exist",
                    self.nvars - 1
                ),
            );
        }
        Ok(idx)
    }

    fn mono(&mut self) -> Result<Vec<u32>, ParseError> {
        let mut e = vec![0u32; self.nvars];
        loop {
            let v = self.var()?;
            let k = if self.eat(b'^') {
                self.small_uint()?
            } else {
                1
            };
            e[v] = e[v].checked_add(k).ok_or(ParseError {
                pos: self.pos,
                msg: "exponent overflow".into(),
            })?;
            let save = self.pos;
            if !self.eat(b'*') {
                break;
            }
            if !matches!(self.peek(), Some(b'X' | b'x' | b'y' | b'z')) {
                self.pos = save;
                return self.err(save, "expected a variable after '*'");
            }
        }
        Ok(e)
    }

    fn starts_var(&mut self) -> bool {
        matches!(self.peek(), Some(b'X' | b'x' | b'y' | b'z'))
    }

    fn term(&mut self) -> Result<(FieldElem, Vec<u32>), ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'(' => {
                let c = self.coef()?;
                if self.eat(b'*') {
                    if !self.starts_var() {
                        return self.err(self.pos, "expected a variable after '*'");
                    }
                    Ok((c, self.mono()?))
                } else if self.starts_var() {
                    Ok((c, self.mono()?))
                } else {
                    Ok((c, vec![0; self.nvars]))
                }
            }
            _ => Ok((self.ctx.one(), self.mono()?)),
        }
    }
}

/// Parses `text` as a homogeneous form in `X0..X{nvars-1}`.
pub fn parse_poly(text: &str, nvars: usize, ctx: &FieldCtx) -> Result<GradedPoly, ParseError> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
        ctx,
        nvars,
    };
    let mut terms: BTreeMap<Vec<u32>, FieldElem> = BTreeMap::new();
    let mut degree: Option<u32> = None;
    let mut negate = p.eat(b'-');
    loop {
        let start = {
            p.skip_ws();
            p.pos
        };
        let (c, e) = p.term()?;
        let d: u32 = e.iter().sum();
        match degree {
            None => degree = Some(d),
            Some(d0) if d0 != d => {
                return p.err(
                    start,
                    format!("not homogeneous: term of degree {d} after degree {d0}"),
                );
            }
            Some(_) => {}
        }
        let c = if negate { ctx.neg(c) } else { c };
        let slot = terms.entry(e).or_insert(ctx.zero());
        *slot = ctx.add(*slot, c);
        match p.peek() {
            None => break,
            Some(b'+') => negate = false,
            Some(b'-') => negate = true,
            Some(c) => return p.err(p.pos, format!("unexpected '{}'", c as char)),
        }
        p.pos += 1;
    }
    let list: Vec<(FieldElem, Vec<u32>)> = terms.into_iter().map(|(e, c)| (c, e)).collect();
    GradedPoly::from_terms(ctx, nvars, degree.unwrap_or(0), &list).map_err(|e| ParseError {
        pos: 0,
        msg: e.to_string(),
    })
}
