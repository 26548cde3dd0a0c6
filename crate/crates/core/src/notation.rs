//! Character cursor shared by the element and table parsers.

use crate::error::ParseError;

pub(crate) struct Cursor<'t> {
    chars: Vec<char>,
    pos: usize,
    _text: &'t str,
}

impl<'t> Cursor<'t> {
    pub(crate) fn new(text: &'t str) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            _text: text,
        }
    }

    pub(crate) fn column(&self) -> usize {
        self.pos + 1
    }

    pub(crate) fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.pos).map(|&c| (self.pos + 1, c))
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    pub(crate) fn skip_ws(&mut self) {
        while matches!(self.chars.get(self.pos), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some((_, d)) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some((col, d)) => Err(ParseError::new(col, format!("expected `{c}`, found `{d}`"))),
            None => Err(ParseError::new(
                self.column(),
                format!("expected `{c}`, found end of input"),
            )),
        }
    }

    pub(crate) fn number(&mut self) -> Result<(usize, usize), ParseError> {
        let start = self.column();
        let mut value: usize = 0;
        let mut any = false;
        while let Some(&c) = self.chars.get(self.pos) {
            let Some(d) = c.to_digit(10) else { break };
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(d as usize))
                .ok_or_else(|| ParseError::new(start, "number too large"))?;
            any = true;
            self.pos += 1;
        }
        if any {
            Ok((start, value))
        } else {
            Err(match self.peek() {
                Some((col, c)) => ParseError::new(col, format!("expected a number, found `{c}`")),
                None => ParseError::new(start, "expected a number, found end of input"),
            })
        }
    }
}
