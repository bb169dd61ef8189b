//! Text form for Laurent polynomials: `1 - t + t^2`, `t1^12 - t1^6 + 1`,
//! `6(t-1)(t^12-t^6+1)`. `*` is optional and negative exponents are
//! written `t^-3`.

use num_bigint::BigInt;

use super::poly::{CoeffRing, LaurentPoly};
use crate::error::LaurentError;

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn next_tok(&mut self) -> Result<Tok, LaurentError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(Tok::End);
        }
        let c = self.src[self.pos];
        self.pos += 1;
        match c {
            b'+' => Ok(Tok::Plus),
            b'-' => Ok(Tok::Minus),
            b'*' => Ok(Tok::Star),
            b'^' => Ok(Tok::Caret),
            b'(' => Ok(Tok::LParen),
            b')' => Ok(Tok::RParen),
            b'0'..=b'9' => {
                let start = self.pos - 1;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Tok::Int(s.parse().unwrap()))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos - 1;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Ok(Tok::Ident(
                    std::str::from_utf8(&self.src[start..self.pos])
                        .unwrap()
                        .to_string(),
                ))
            }
            other => Err(LaurentError::Parse(format!(
                "unexpected character '{}' at offset {}",
                other as char,
                self.pos - 1
            ))),
        }
    }
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ring: CoeffRing,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        self.toks.get(self.pos).unwrap_or(&Tok::End)
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek().clone();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<LaurentPoly, LaurentError> {
        let mut negate = false;
        match self.peek() {
            Tok::Minus => {
                self.bump();
                negate = true;
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly, LaurentError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                // implicit multiplication: `6t`, `2(t-1)`, `t1t2`
                Tok::Int(_) | Tok::Ident(_) | Tok::LParen => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly, LaurentError> {
        match self.bump() {
            Tok::Int(n) => Ok(LaurentPoly::constant(self.ring, self.vars, n)),
            Tok::Ident(name) => {
                let idx = self
                    .vars
                    .iter()
                    .position(|v| **v == name)
                    .ok_or_else(|| LaurentError::Parse(format!("unknown variable '{name}'")))?;
                let exp = self.exponent()?;
                let mut exps = vec![0i64; self.vars.len()];
                exps[idx] = exp;
                Ok(LaurentPoly::monomial(self.ring, self.vars, &exps, 1))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if self.bump() != Tok::RParen {
                    return Err(LaurentError::Parse("expected ')'".into()));
                }
                if *self.peek() == Tok::Caret {
                    self.bump();
                    let e = self.int_exponent()?;
                    if e < 0 {
                        return Err(LaurentError::Parse(
                            "negative exponent on a parenthesized expression".into(),
                        ));
                    }
                    let mut acc = LaurentPoly::one(self.ring, self.vars);
                    for _ in 0..e {
                        acc = &acc * &inner;
                    }
                    return Ok(acc);
                }
                Ok(inner)
            }
            tok => Err(LaurentError::Parse(format!("unexpected token {tok:?}"))),
        }
    }

    fn exponent(&mut self) -> Result<i64, LaurentError> {
        if *self.peek() == Tok::Caret {
            self.bump();
            self.int_exponent()
        } else {
            Ok(1)
        }
    }

    fn int_exponent(&mut self) -> Result<i64, LaurentError> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Tok::Int(n) => {
                let v: i64 = n
                    .try_into()
                    .map_err(|_| LaurentError::Parse("exponent out of range".into()))?;
                Ok(if neg { -v } else { v })
            }
            tok => Err(LaurentError::Parse(format!(
                "expected exponent, found {tok:?}"
            ))),
        }
    }
}

impl LaurentPoly {
    /// Parse against an explicit variable list; identifiers outside the
    /// list are rejected.
    pub fn parse_in(
        text: &str,
        ring: CoeffRing,
        vars: &[&str],
    ) -> Result<LaurentPoly, LaurentError> {
        let mut lexer = Lexer::new(text);
        let mut toks = Vec::new();
        loop {
            let t = lexer.next_tok()?;
            let end = t == Tok::End;
            toks.push(t);
            if end {
                break;
            }
        }
        let mut parser = Parser {
            toks,
            pos: 0,
            ring,
            vars,
        };
        let poly = parser.expr()?;
        if *parser.peek() != Tok::End {
            return Err(LaurentError::Parse(format!(
                "trailing input after polynomial: {:?}",
                parser.peek()
            )));
        }
        Ok(poly)
    }

    /// Parse, inferring the variable list from the identifiers present
    /// (sorted by name).
    pub fn parse(text: &str, ring: CoeffRing) -> Result<LaurentPoly, LaurentError> {
        let mut lexer = Lexer::new(text);
        let mut names: Vec<String> = Vec::new();
        loop {
            match lexer.next_tok()? {
                Tok::End => break,
                Tok::Ident(name) if !names.contains(&name) => names.push(name),
                _ => {}
            }
        }
        names.sort();
        let vars: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let vars = if vars.is_empty() { vec!["t"] } else { vars };
        LaurentPoly::parse_in(text, ring, &vars)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_roundtrip() {
        let p = LaurentPoly::parse("1 - t + t^2", CoeffRing::Int).unwrap();
        assert_eq!(p.to_string(), "1 - t + t^2");
        let q = LaurentPoly::parse(&p.to_string(), CoeffRing::Int).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn parse_multivariable() {
        let p = LaurentPoly::parse("t1^12 - t1^6 + 1", CoeffRing::Int).unwrap();
        assert_eq!(p.num_vars(), 1);
        let q = LaurentPoly::parse_in("t1^4*t2^4 + t1^2 t2^2 + 1", CoeffRing::Int, &["t1", "t2"])
            .unwrap();
        assert_eq!(q.num_terms(), 3);
    }

    #[test]
    fn parse_negative_exponent() {
        let p = LaurentPoly::parse("t^-3 + t", CoeffRing::Int).unwrap();
        assert_eq!(p.min_exponent(0), Some(-3));
        assert_eq!(p.max_exponent(0), Some(1));
    }

    #[test]
    fn parse_products() {
        let p = LaurentPoly::parse("6(t-1)(t^12-t^6+1)", CoeffRing::Int).unwrap();
        let q = LaurentPoly::parse("6t^13 - 6t^12 - 6t^7 + 6t^6 + 6t - 6", CoeffRing::Int).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn parse_power_of_parens() {
        let p = LaurentPoly::parse("(t - 1)^2", CoeffRing::Int).unwrap();
        let q = LaurentPoly::parse("t^2 - 2t + 1", CoeffRing::Int).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn reject_unknown_variable() {
        assert!(LaurentPoly::parse_in("s + 1", CoeffRing::Int, &["t"]).is_err());
    }
}
