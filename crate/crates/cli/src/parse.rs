//! Polynomial text parser.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := factor (['*'] factor)*
//! factor := atom ['^' digits]
//! atom   := digits | 'x' | 'X' | '(' expr ')'
//! ```
//!
//! Juxtaposition multiplies, so `2x` and `(x-1)(x+1)` are accepted. Text
//! starting with `{` is read as the JSON form `{"coeffs": [c0, c1, ...]}`.

use isolab::{Error, IntPoly, Result};
use num_bigint::BigInt;

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: usize = 4096;

pub fn parse_poly(text: &str) -> Result<IntPoly> {
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(text).map_err(|e| Error::SyntaxError {
            pos: e.column().saturating_sub(1),
            msg: e.to_string(),
        });
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let f = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected character"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::SyntaxError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn expr(&mut self) -> Result<IntPoly> {
        let mut neg = false;
        match self.peek() {
            Some(b'-') => {
                neg = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<IntPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(c) if c == b'(' || c == b'x' || c == b'X' || c.is_ascii_digit() => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<IntPoly> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.pos;
        let e: usize = self
            .digits()?
            .parse()
            .ok()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or(Error::SyntaxError {
                pos: at,
                msg: format!("exponent exceeds {MAX_EXPONENT}"),
            })?;
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<IntPoly> {
        match self.peek() {
            Some(b'x' | b'X') => {
                self.pos += 1;
                Ok(IntPoly::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let c: BigInt = self.digits()?.parse().expect("digits");
                Ok(IntPoly::constant(c))
            }
            Some(_) => Err(self.err("expected a number, x or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_forms() {
        assert_eq!(parse_poly("x^2 - 3*x + 1").unwrap(), IntPoly::from_i64(&[1, -3, 1]));
        assert_eq!(parse_poly("(x-1)*(x+1)").unwrap(), IntPoly::from_i64(&[-1, 0, 1]));
        assert_eq!(parse_poly("(x-1)(x+1)^2").unwrap(), IntPoly::from_i64(&[-1, -1, 1, 1]));
        assert_eq!(parse_poly("-2x").unwrap(), IntPoly::from_i64(&[0, -2]));
        assert_eq!(
            parse_poly("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1").unwrap(),
            IntPoly::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
        );
        assert_eq!(parse_poly(r#"{"coeffs": [1, -3, 1]}"#).unwrap(), IntPoly::from_i64(&[1, -3, 1]));
    }

    #[test]
    fn errors_carry_positions() {
        for (s, pos) in [("x^2 +", 5), ("x^2 + * x", 6), ("(x-1", 4), ("x $ 1", 2), ("x^99999", 2)] {
            match parse_poly(s) {
                Err(Error::SyntaxError { pos: p, .. }) => assert_eq!(p, pos, "{s}"),
                other => panic!("{s}: {other:?}"),
            }
        }
    }
}
