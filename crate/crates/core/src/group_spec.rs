//! Parser for the textual group notation.
//!
//! ```text
//! GROUP := TERM ("*" TERM)* | "1"
//! TERM  := PRIME "^" "[" INT ("," INT)* "]" | PRIME
//! ```
//!
//! A bare `PRIME` means `PRIME^[1]`. Exponent lists are non-decreasing,
//! primes strictly increase from left to right, and whitespace is not
//! allowed. `13^[1,1]*23` is `Z₁₃ × Z₁₃ × Z₂₃`. The [`Display`] impl of
//! [`AbelianGroupType`] produces the canonical form of this notation.
//!
//! [`Display`]: std::fmt::Display

use std::str::FromStr;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::psi::AbelianGroupType;

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        offset,
        message: message.into(),
    })
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        match self.peek() {
            Some(c) if c == b => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => err(
                self.pos,
                format!("expected '{}', found '{}'", b as char, c as char),
            ),
            None => err(
                self.pos,
                format!("expected '{}', found end of input", b as char),
            ),
        }
    }

    fn int(&mut self, what: &str) -> Result<(usize, u64)> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.peek() {
                Some(c) => err(start, format!("expected {what}, found '{}'", c as char)),
                None => err(start, format!("expected {what}, found end of input")),
            };
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match text.parse::<u64>() {
            Ok(v) => Ok((start, v)),
            Err(_) => err(start, format!("{what} {text} is too large")),
        }
    }
}

/// Parses a group in the notation above.
pub fn parse_group(spec: &str) -> Result<AbelianGroupType> {
    if spec == "1" {
        return Ok(AbelianGroupType::trivial());
    }
    let mut cur = Cursor {
        src: spec.as_bytes(),
        pos: 0,
    };
    let mut components = Vec::new();
    let mut last_prime = 0u64;
    loop {
        let (at, p) = cur.int("prime")?;
        if !is_prime(p) {
            return err(at, format!("{p} is not prime"));
        }
        if p <= last_prime {
            return err(
                at,
                format!("prime {p} does not exceed the preceding prime {last_prime}"),
            );
        }
        last_prime = p;
        let shape = if cur.peek() == Some(b'^') {
            cur.pos += 1;
            parse_shape_at(&mut cur)?
        } else {
            Partition::new(vec![1]).expect("valid")
        };
        components.push((p, shape));
        match cur.peek() {
            None => break,
            Some(b'*') => cur.pos += 1,
            Some(c) => {
                return err(
                    cur.pos,
                    format!("expected '*' or end of input, found '{}'", c as char),
                )
            }
        }
    }
    AbelianGroupType::from_components(components)
}

fn parse_shape_at(cur: &mut Cursor<'_>) -> Result<Partition> {
    cur.expect(b'[')?;
    let mut parts = Vec::new();
    loop {
        let (at, v) = cur.int("exponent")?;
        if v == 0 {
            return err(at, "exponents must be positive");
        }
        let v = u32::try_from(v).or_else(|_| err(at, format!("exponent {v} is too large")))?;
        if let Some(&prev) = parts.last() {
            if v < prev {
                return err(
                    at,
                    format!("exponent {v} is smaller than the preceding {prev}"),
                );
            }
        }
        parts.push(v);
        match cur.peek() {
            Some(b',') => cur.pos += 1,
            Some(b']') => {
                cur.pos += 1;
                break;
            }
            Some(c) => {
                return err(
                    cur.pos,
                    format!("expected ',' or ']', found '{}'", c as char),
                )
            }
            None => return err(cur.pos, "unterminated exponent list"),
        }
    }
    Partition::new(parts)
}

/// Parses a bracketed exponent list such as `[1,1,2]`.
pub fn parse_shape(text: &str) -> Result<Partition> {
    let mut cur = Cursor {
        src: text.as_bytes(),
        pos: 0,
    };
    let shape = parse_shape_at(&mut cur)?;
    if cur.pos != text.len() {
        return err(cur.pos, "trailing input after exponent list");
    }
    Ok(shape)
}

impl FromStr for AbelianGroupType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_group(s)
    }
}
