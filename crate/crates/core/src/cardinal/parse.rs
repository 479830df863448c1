//! Text syntax for ordinals and cardinal expressions.
//!
//! ```text
//! cardinal := INT | aleph(ordinal) | beth(ordinal)
//!           | pow(cardinal) | succ(cardinal) | hat(cardinal)
//! ordinal  := term ('+' term)*
//! term     := INT | 'w' ('^' exp)? ('*' INT)?
//! exp      := INT | 'w' | '(' ordinal ')'
//! ```

use super::ordinal::{Ordinal, DEFAULT_ORDINAL_DEPTH};
use super::CardinalExpr;
use crate::error::ParseError;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(format!("expected `{c}` at offset {}", self.pos))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek_raw() {
            if c.is_ascii_alphabetic() || c == 'ω' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        self.src[start..self.pos].to_string()
    }

    fn int(&mut self) -> Result<u64, String> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(format!("expected a number at offset {start}"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| "number out of range".to_string())
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

fn ordinal(cur: &mut Cursor, depth_limit: usize) -> Result<Ordinal, String> {
    let mut acc = ordinal_term(cur, depth_limit)?;
    while cur.eat('+') {
        let t = ordinal_term(cur, depth_limit)?;
        acc = acc.add(&t).map_err(|e| e.to_string())?;
    }
    acc.check_depth(depth_limit).map_err(|e| e.to_string())?;
    Ok(acc)
}

fn ordinal_term(cur: &mut Cursor, depth_limit: usize) -> Result<Ordinal, String> {
    match cur.peek() {
        Some(c) if c.is_ascii_digit() => Ok(Ordinal::finite(cur.int()?)),
        Some('w') | Some('ω') => {
            cur.ident();
            let exponent = if cur.eat('^') {
                match cur.peek() {
                    Some(c) if c.is_ascii_digit() => Ordinal::finite(cur.int()?),
                    Some('(') => {
                        cur.expect('(')?;
                        let e = ordinal(cur, depth_limit)?;
                        cur.expect(')')?;
                        e
                    }
                    Some('w') | Some('ω') => {
                        cur.ident();
                        Ordinal::omega()
                    }
                    _ => return Err(format!("bad exponent at offset {}", cur.pos)),
                }
            } else {
                Ordinal::finite(1)
            };
            let coeff = if cur.eat('*') { cur.int()? } else { 1 };
            if coeff == 0 {
                return Ok(Ordinal::zero());
            }
            let o = Ordinal::from_terms(vec![(exponent, coeff)], depth_limit).map_err(|e| e.to_string())?;
            Ok(o)
        }
        _ => Err(format!("expected an ordinal term at offset {}", cur.pos)),
    }
}

fn cardinal(cur: &mut Cursor, depth_limit: usize) -> Result<CardinalExpr, String> {
    if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
        return Ok(CardinalExpr::Finite(cur.int()?));
    }
    let name = cur.ident();
    cur.expect('(')?;
    let e = match name.as_str() {
        "aleph" => CardinalExpr::Aleph(ordinal(cur, depth_limit)?),
        "beth" => CardinalExpr::Beth(ordinal(cur, depth_limit)?),
        "pow" => CardinalExpr::PowSet(Box::new(cardinal(cur, depth_limit)?)),
        "succ" => CardinalExpr::Succ(Box::new(cardinal(cur, depth_limit)?)),
        "hat" => CardinalExpr::Hat(Box::new(cardinal(cur, depth_limit)?)),
        "" => return Err(format!("expected a constructor at offset {}", cur.pos)),
        other => return Err(format!("unknown constructor `{other}`")),
    };
    cur.expect(')')?;
    Ok(e)
}

pub fn parse_ordinal(src: &str) -> Result<Ordinal, ParseError> {
    let mut cur = Cursor::new(src);
    let err = |reason: String| ParseError::Ordinal {
        input: src.to_string(),
        reason,
    };
    let o = ordinal(&mut cur, DEFAULT_ORDINAL_DEPTH).map_err(err)?;
    if !cur.at_end() {
        return Err(err(format!("trailing input at offset {}", cur.pos)));
    }
    Ok(o)
}

pub fn parse_cardinal(src: &str) -> Result<CardinalExpr, ParseError> {
    let mut cur = Cursor::new(src);
    let err = |reason: String| ParseError::Cardinal {
        input: src.to_string(),
        reason,
    };
    let e = cardinal(&mut cur, DEFAULT_ORDINAL_DEPTH).map_err(err)?;
    if !cur.at_end() {
        return Err(err(format!("trailing input at offset {}", cur.pos)));
    }
    Ok(e)
}
