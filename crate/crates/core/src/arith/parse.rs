//! Text parser for polynomial input.
//!
//! Grammar (whitespace insignificant, integers signed decimal):
//!
//! ```text
//! expr   := sign? term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := sign? atom ('^' uint)?
//! atom   := int | var | '(' expr ')'
//! var    := 'x' uint | 'x' | 'y' | 'z'
//! ```
//!
//! `x`, `y`, `z` alias `x1`, `x2`, `x3`.

use num_bigint::BigInt;

use crate::arith::Polynomial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(src: &'a str) -> Result<Vec<(Token, usize)>> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        while let Some(t) = lx.next_token()? {
            out.push(t);
        }
        Ok(out)
    }

    fn next_token(&mut self) -> Result<Option<(Token, usize)>> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => {
                self.pos += 1;
                Token::Plus
            }
            b'-' => {
                self.pos += 1;
                Token::Minus
            }
            b'*' => {
                self.pos += 1;
                Token::Star
            }
            b'^' => {
                self.pos += 1;
                Token::Caret
            }
            b'(' => {
                self.pos += 1;
                Token::LParen
            }
            b')' => {
                self.pos += 1;
                Token::RParen
            }
            b'0'..=b'9' => {
                let digits = self.take_digits();
                Token::Int(digits.parse::<BigInt>().expect("digits parse"))
            }
            b'x' => {
                self.pos += 1;
                if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    let digits = self.take_digits();
                    let idx: usize = digits.parse().map_err(|_| Error::Syntax {
                        position: start,
                        message: "variable index too large".into(),
                    })?;
                    if idx == 0 {
                        return Err(Error::Syntax {
                            position: start,
                            message: "variable indices start at x1".into(),
                        });
                    }
                    Token::Var(idx - 1)
                } else {
                    Token::Var(0)
                }
            }
            b'y' => {
                self.pos += 1;
                Token::Var(1)
            }
            b'z' => {
                self.pos += 1;
                Token::Var(2)
            }
            other => {
                return Err(Error::Syntax {
                    position: start,
                    message: format!("unexpected character '{}'", other as char),
                })
            }
        };
        Ok(Some((tok, start)))
    }

    fn take_digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .to_owned()
    }
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    nvars: usize,
    src_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(self.src_len)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut sign = 1i32;
        while let Some(t) = self.peek() {
            match t {
                Token::Plus => {
                    self.bump();
                }
                Token::Minus => {
                    sign = -sign;
                    self.bump();
                }
                _ => break,
            }
        }
        let mut acc = self.term()?;
        if sign < 0 {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Token::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.bump();
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let mut sign = 1i32;
        while let Some(t) = self.peek() {
            match t {
                Token::Plus => {
                    self.bump();
                }
                Token::Minus => {
                    sign = -sign;
                    self.bump();
                }
                _ => break,
            }
        }
        let mut base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            let pos = self.here();
            let e = match self.bump() {
                Some(Token::Int(k)) => {
                    u32::try_from(&k).map_err(|_| Error::Syntax {
                        position: pos,
                        message: "exponent too large".into(),
                    })?
                }
                Some(Token::Minus) => return Err(Error::NegativeExponent { position: pos }),
                _ => {
                    return Err(Error::Syntax {
                        position: pos,
                        message: "expected an unsigned exponent after '^'".into(),
                    })
                }
            };
            base = base.pow(e);
        }
        if sign < 0 {
            base = base.neg();
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let pos = self.here();
        match self.bump() {
            Some(Token::Int(k)) => Ok(Polynomial::constant(self.nvars, k)),
            Some(Token::Var(idx)) => {
                if idx >= self.nvars {
                    return Err(Error::VarOutOfRange {
                        index: idx + 1,
                        nvars: self.nvars,
                    });
                }
                Ok(Polynomial::variable(self.nvars, idx))
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::Syntax {
                        position: pos,
                        message: "unbalanced parenthesis".into(),
                    }),
                }
            }
            _ => Err(Error::Syntax {
                position: pos,
                message: "expected integer, variable or '('".into(),
            }),
        }
    }
}

/// Parses `text` into a canonical sparse polynomial in `nvars` variables.
pub fn parse_polynomial(text: &str, nvars: usize) -> Result<Polynomial> {
    if nvars == 0 {
        return Err(Error::InvalidArgument("nvars must be >= 1".into()));
    }
    let tokens = Lexer::tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        nvars,
        src_len: text.len(),
    };
    let poly = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Syntax {
            position: parser.here(),
            message: "trailing input".into(),
        });
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn basic_examples() {
        let f = parse_polynomial("x^2 + y^3", 2).unwrap();
        assert_eq!(
            f.terms(),
            &[
                (BigInt::one(), vec![2, 0]),
                (BigInt::one(), vec![0, 3]),
            ]
        );

        let z = parse_polynomial("0", 1).unwrap();
        assert!(z.is_zero());

        let g = parse_polynomial("(x - 1)*(x + 1)", 1).unwrap();
        assert_eq!(
            g.terms(),
            &[(BigInt::one(), vec![2]), (BigInt::from(-1), vec![0])]
        );
    }

    #[test]
    fn aliases_and_indices() {
        let a = parse_polynomial("x1*x2 + x3", 3).unwrap();
        let b = parse_polynomial("x*y + z", 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_polynomial("x + )", 1),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_polynomial("y", 1),
            Err(Error::VarOutOfRange { index: 2, nvars: 1 })
        ));
        assert!(matches!(
            parse_polynomial("x^-2", 1),
            Err(Error::NegativeExponent { .. })
        ));
        assert!(matches!(
            parse_polynomial("x4", 3),
            Err(Error::VarOutOfRange { index: 4, nvars: 3 })
        ));
    }

    #[test]
    fn signs() {
        let a = parse_polynomial("-x^2 + 2", 1).unwrap();
        let b = parse_polynomial("2 - x^2", 1).unwrap();
        assert_eq!(a, b);
        let c = parse_polynomial("3*-x", 1).unwrap();
        assert_eq!(c, parse_polynomial("-3*x", 1).unwrap());
    }

    #[test]
    fn print_parse_fixpoint() {
        for (text, n) in [
            ("x^2 + y^3", 2),
            ("(x-1)*(x+1)*(x^2+1)", 1),
            ("0", 2),
            ("-7", 1),
            ("x^2*y^2 - 3*x*y + y - 12", 2),
            ("x1^4 - x2*x3^2 + 5", 3),
        ] {
            let once = parse_polynomial(text, n).unwrap();
            let twice = parse_polynomial(&once.to_string(), n).unwrap();
            assert_eq!(once, twice, "fixpoint failed for {text}");
        }
    }
}
