//! Text forms of integer polynomials.
//!
//! Two forms are accepted:
//!
//! * a JSON array of ascending coefficients, as decimal strings or plain
//!   integers: `["-2","0","1"]`;
//! * a human form in the variable `t`:
//!
//! ```text
//! poly  = [sign] term { sign term } ;
//! term  = coeff [ ["*"] mono ] | mono ;
//! mono  = "t" [ "^" digits ] ;
//! coeff = digits ;
//! sign  = "+" | "-" ;
//! ```
//!
//! Whitespace is ignored and like terms are summed, so `t^2 - 2`, `-2+t^2`
//! and `["-2","0","1"]` all describe the same polynomial.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntPolynomial;
use crate::error::{Error, Result};

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        if trimmed.starts_with('[') {
            return serde_json::from_str(trimmed).map_err(|e| Error::Parse {
                pos: e.column().saturating_sub(1),
                msg: e.to_string(),
            });
        }
        parse_human(s)
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.bytes[start..self.pos]).unwrap())
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }
}

fn parse_human(s: &str) -> Result<IntPolynomial> {
    let mut cur = Cursor {
        bytes: s.as_bytes(),
        pos: 0,
    };
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut first = true;
    loop {
        let negative = match cur.peek() {
            None if first => return Err(cur.error("empty polynomial")),
            None => break,
            Some(b'+') => {
                cur.pos += 1;
                false
            }
            Some(b'-') => {
                cur.pos += 1;
                true
            }
            Some(_) if first => false,
            Some(c) => return Err(cur.error(format!("expected '+' or '-', found {:?}", c as char))),
        };
        first = false;

        let coeff = cur.digits().map(|d| d.parse::<BigInt>().unwrap());
        if coeff.is_some() && cur.peek() == Some(b'*') {
            cur.pos += 1;
            if cur.peek() != Some(b't') {
                return Err(cur.error("expected 't' after '*'"));
            }
        }
        let power = if cur.peek() == Some(b't') {
            cur.pos += 1;
            if cur.peek() == Some(b'^') {
                cur.pos += 1;
                let parsed = cur.digits().map(|d| d.parse::<usize>());
                match parsed {
                    Some(Ok(e)) => e,
                    Some(Err(_)) => return Err(cur.error("exponent out of range")),
                    None => return Err(cur.error("expected exponent")),
                }
            } else {
                1
            }
        } else if coeff.is_some() {
            0
        } else {
            return Err(match cur.peek() {
                Some(c) => cur.error(format!("unexpected character {:?}", c as char)),
                None => cur.error("dangling sign"),
            });
        };

        let mut c = coeff.unwrap_or_else(BigInt::one);
        if negative {
            c = -c;
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigInt::zero());
        }
        coeffs[power] += c;
    }
    IntPolynomial::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn human_forms() {
        assert_eq!(p("t^2-2"), IntPolynomial::from_i64s(&[-2, 0, 1]).unwrap());
        assert_eq!(p(" t^2 - 2 "), p("t^2-2"));
        assert_eq!(p("t^6+512t+2"), IntPolynomial::from_i64s(&[2, 512, 0, 0, 0, 0, 1]).unwrap());
        assert_eq!(p("-t"), IntPolynomial::from_i64s(&[0, -1]).unwrap());
        assert_eq!(p("3*t^2+t+t"), IntPolynomial::from_i64s(&[0, 2, 3]).unwrap());
        assert_eq!(p("7"), IntPolynomial::from_i64s(&[7]).unwrap());
    }

    #[test]
    fn json_forms() {
        assert_eq!(p(r#"["-2","0","1"]"#), p("t^2-2"));
        assert_eq!(p("[-2, 0, 1]"), p("t^2-2"));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "t^", "t^2+", "2x", "t**2", "t t", "[]", r#"["0"]"#, "t-t"] {
            assert!(bad.parse::<IntPolynomial>().is_err(), "{bad:?} should fail");
        }
    }
}
