//! Arithmetic expressions for base components and points.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := number | 'phi' | 'sqrt' '(' expr ')' | '(' expr ')' | '-' factor
//! ```

use std::fmt;

/// A parse or evaluation failure at byte offset `pos` of the input.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub source: String,
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cannot parse '{}' at column {}: {}",
            self.source,
            self.pos + 1,
            self.message
        )
    }
}

impl std::error::Error for ParseError {}

/// An expression together with its value.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseExpression {
    pub source: String,
    pub value: f64,
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            source: self.src.to_string(),
            pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<f64, ParseError> {
        let mut v = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            v = if op == b'+' { v + rhs } else { v - rhs };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<f64, ParseError> {
        let mut v = self.factor()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.factor()?;
            if op == b'*' {
                v *= rhs;
            } else if rhs == 0.0 {
                return Err(self.error(at, "division by zero"));
            } else {
                v /= rhs;
            }
        }
        Ok(v)
    }

    fn factor(&mut self) -> Result<f64, ParseError> {
        let start = match self.peek() {
            Some(_) => self.pos,
            None => return Err(self.error(self.pos, "unexpected end of input")),
        };
        let c = self.bytes[start];
        if c == b'-' {
            self.pos += 1;
            return Ok(-self.factor()?);
        }
        if c == b'(' {
            self.pos += 1;
            let v = self.expr()?;
            self.expect(b')')?;
            return Ok(v);
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number();
        }
        if c.is_ascii_alphabetic() {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            return match &self.src[start..self.pos] {
                "phi" => Ok((1.0 + 5f64.sqrt()) / 2.0),
                "sqrt" => {
                    self.expect(b'(')?;
                    let arg_at = self.pos;
                    let v = self.expr()?;
                    self.expect(b')')?;
                    if v < 0.0 {
                        return Err(self.error(arg_at, "square root of a negative number"));
                    }
                    Ok(v.sqrt())
                }
                other => Err(self.error(start, format!("unknown identifier '{other}'"))),
            };
        }
        Err(self.error(start, format!("unexpected character '{}'", c as char)))
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.bytes.len() && p.bytes[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.bytes.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.bytes.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.bytes.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            let exp_start = self.pos;
            digits(self);
            if self.pos == exp_start {
                self.pos = save;
            }
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.error(start, "malformed number"))
    }
}

/// Parses and evaluates a single expression.
pub fn parse_expr(src: &str) -> Result<f64, ParseError> {
    let mut p = Parser {
        src,
        bytes: src.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error(p.pos, "unexpected trailing input"));
    }
    if !v.is_finite() {
        return Err(p.error(0, "value is not finite"));
    }
    Ok(v)
}

/// Splits on commas outside parentheses and evaluates every piece.
pub fn parse_list(src: &str) -> Result<Vec<BaseExpression>, ParseError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut push = |piece: &str, offset: usize| -> Result<(), ParseError> {
        let value = parse_expr(piece).map_err(|mut e| {
            e.pos += offset;
            e.source = src.to_string();
            e
        })?;
        out.push(BaseExpression {
            source: piece.trim().to_string(),
            value,
        });
        Ok(())
    };
    for (i, c) in src.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                push(&src[start..i], start)?;
                start = i + 1;
            }
            _ => {}
        }
    }
    push(&src[start..], start)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_base_expressions() {
        let r13 = 13f64.sqrt();
        assert_eq!(parse_expr("(1+sqrt(13))/2").unwrap(), (1.0 + r13) / 2.0);
        assert_eq!(parse_expr("(5+sqrt(13))/6").unwrap(), (5.0 + r13) / 6.0);
        assert_eq!(parse_expr("phi*phi").unwrap(), parse_expr("phi+1").unwrap());
        assert_eq!(parse_expr("3/2").unwrap(), 1.5);
        assert_eq!(parse_expr("sqrt(5)/2").unwrap(), 5f64.sqrt() / 2.0);
        assert_eq!(parse_expr("--2").unwrap(), 2.0);
        assert_eq!(parse_expr("2 - 3 - 4").unwrap(), -5.0);
        assert_eq!(parse_expr("1e-3").unwrap(), 0.001);
        assert_eq!(parse_expr(" 8 / 4 / 2 ").unwrap(), 1.0);
    }

    #[test]
    fn reports_positions() {
        assert_eq!(parse_expr("1+").unwrap_err().pos, 2);
        assert_eq!(parse_expr("(1+2").unwrap_err().pos, 4);
        assert_eq!(parse_expr("2*foo").unwrap_err().pos, 2);
        assert_eq!(parse_expr("1 2").unwrap_err().pos, 2);
        assert_eq!(parse_expr("sqrt(-1)").unwrap_err().pos, 5);
        assert_eq!(parse_expr("1/0").unwrap_err().pos, 1);
        assert!(parse_expr("").is_err());
        assert!(parse_expr("1..2").is_err());
    }

    #[test]
    fn splits_lists_at_top_level() {
        let v = parse_list("(1+sqrt(13))/2,(5+sqrt(13))/6").unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[1].source, "(5+sqrt(13))/6");
        let e = parse_list("2, 3+").unwrap_err();
        assert_eq!(e.pos, 5);
        assert_eq!(e.source, "2, 3+");
    }
}
