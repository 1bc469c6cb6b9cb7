//! Text grammar for ordinals:
//!
//! ```text
//! ord  := term ('+' term)*
//! term := 'w' ('^' atom)? ('*' nat)? | nat
//! atom := nat | 'w' ('^' atom)? | '(' ord ')'
//! ```
//!
//! `ω` is accepted as a synonym for `w`. Sums are evaluated with ordinal
//! addition, so non-canonical input such as `1+w` is accepted and normalised
//! (reported through [`ParsedOrdinal::warnings`]).

use super::{Ordinal, OrdinalError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedOrdinal {
    pub value: Ordinal,
    pub warnings: Vec<String>,
}

pub fn parse_ordinal(text: &str) -> Result<ParsedOrdinal, OrdinalError> {
    let chars: Vec<char> = text.chars().collect();
    let mut p = Parser { chars, pos: 0 };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.error("empty ordinal"));
    }
    let value = p.sum()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.error(&format!("unexpected `{c}`")));
    }
    let squashed: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == 'ω' { 'w' } else { c })
        .collect();
    let canonical = value.to_string();
    let mut warnings = Vec::new();
    if squashed != canonical {
        warnings.push(format!(
            "non-canonical ordinal `{}` normalized to `{canonical}`",
            text.trim()
        ));
    }
    Ok(ParsedOrdinal { value, warnings })
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> OrdinalError {
        OrdinalError::Syntax {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_omega(&mut self) -> bool {
        self.skip_ws();
        if matches!(self.peek(), Some('w') | Some('ω')) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| OrdinalError::Syntax {
            pos: start,
            message: "natural number too large".into(),
        })
    }

    fn sum(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.term()?;
        while self.eat('+') {
            let next = self.term()?;
            acc = acc.add(&next);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalError> {
        if self.eat_omega() {
            let exponent = if self.eat('^') {
                self.atom()?
            } else {
                Ordinal::one()
            };
            let coefficient = if self.eat('*') { self.nat()? } else { 1 };
            return Ok(Ordinal::monomial(exponent, coefficient));
        }
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::from_nat(self.nat()?)),
            Some(c) => Err(self.error(&format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn atom(&mut self) -> Result<Ordinal, OrdinalError> {
        if self.eat('(') {
            let inner = self.sum()?;
            if !self.eat(')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(inner);
        }
        if self.eat_omega() {
            let exponent = if self.eat('^') {
                self.atom()?
            } else {
                Ordinal::one()
            };
            return Ok(Ordinal::omega_pow(exponent));
        }
        Ok(Ordinal::from_nat(self.nat()?))
    }
}
