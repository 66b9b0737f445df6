//! Reader for the human-readable polynomial syntax produced by `Display`.
//!
//! Grammar (implicit multiplication binds like `*`):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/' | <juxtaposition>) unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' digits)?
//! atom   := number | 'r' | '(' expr ')'
//! ```

use super::rational::parse_rational;
use super::{Polynomial, RatFuncError, RationalFunction};

pub(crate) fn parse_function(input: &str) -> Result<RationalFunction, RatFuncError> {
    let mut p = Parser {
        input,
        bytes: input.as_bytes(),
        pos: 0,
    };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> RatFuncError {
        RatFuncError::Parse {
            input: self.input.to_string(),
            message: message.to_string(),
            offset: self.pos,
        }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFunction, RatFuncError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction, RatFuncError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    acc = acc.checked_div(&rhs).map_err(|_| {
                        let mut e = self.error("division by zero");
                        if let RatFuncError::Parse { offset, .. } = &mut e {
                            *offset = at;
                        }
                        e
                    })?;
                }
                Some(b'r' | b'(' | b'0'..=b'9' | b'.') => {
                    acc = acc * self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction, RatFuncError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction, RatFuncError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
            }
            let exp: u32 = self.input[start..self.pos]
                .parse()
                .map_err(|_| self.error("expected a small non-negative exponent"))?;
            if exp > 64 {
                return Err(self.error("exponent too large"));
            }
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction, RatFuncError> {
        match self.peek() {
            Some(b'r') => {
                self.pos += 1;
                Ok(RationalFunction::param())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'0'..=b'9' | b'.') => {
                let start = self.pos;
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_digit() || *b == b'.')
                {
                    self.pos += 1;
                }
                let value = parse_rational(&self.input[start..self.pos]).map_err(|_| {
                    let mut e = self.error("malformed number");
                    if let RatFuncError::Parse { offset, .. } = &mut e {
                        *offset = start;
                    }
                    e
                })?;
                Ok(RationalFunction::from_poly(Polynomial::constant(value)))
            }
            Some(_) => Err(self.error("expected a number, `r` or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
