//! Recursive-descent parser for Laurent polynomial expressions.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' signed_int)?
//! base   := integer | identifier | '(' expr ')'
//! ```
//!
//! Negative powers are only accepted on monomials, and `/` must divide
//! exactly. Positions in errors are byte offsets into the input.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{ExponentVector, LaurentError, LaurentPoly, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, LaurentError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        match ch {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: BigInt = src[start..i].parse().expect("digits");
                out.push((Tok::Int(v), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
                {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                let tok = match ch {
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'/' => Tok::Slash,
                    b'^' => Tok::Caret,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    _ => {
                        let c = src[i..].chars().next().unwrap();
                        return Err(LaurentError::Syntax {
                            pos: i,
                            msg: format!("unexpected character `{c}`"),
                        });
                    }
                };
                out.push((tok, i));
                i += 1;
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, LaurentError> {
        Err(LaurentError::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<LaurentPoly, LaurentError> {
        let negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly, LaurentError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.mul(&f)?;
                }
                Some(Tok::Slash) => {
                    let at = self.offset();
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = match acc.exact_divide(&f) {
                        Ok(q) => q,
                        Err(LaurentError::NotDivisible) => {
                            return Err(LaurentError::NotLaurent {
                                pos: at,
                                msg: "division leaves a nonzero remainder".into(),
                            })
                        }
                        Err(LaurentError::DivisionByZero) => {
                            return Err(LaurentError::NotLaurent {
                                pos: at,
                                msg: "division by zero".into(),
                            })
                        }
                        Err(e) => return Err(e),
                    };
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    return self.syntax("implicit multiplication is not allowed; use `*`");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly, LaurentError> {
        let base = self.base()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        let caret_at = self.offset();
        self.pos += 1;
        let negative = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let k = match self.peek() {
            Some(Tok::Int(v)) => {
                let Some(k) = v.to_u32() else {
                    return self.syntax("exponent too large");
                };
                self.pos += 1;
                k
            }
            _ => return self.syntax("expected integer exponent after `^`"),
        };
        if !negative {
            return Ok(base.pow(k));
        }
        if base.len() != 1 {
            return Err(LaurentError::NotLaurent {
                pos: caret_at,
                msg: "negative power of a non-monomial".into(),
            });
        }
        let (e, c) = base.terms().next().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let inv = LaurentPoly::monomial(
            base.var_names().to_vec(),
            ExponentVector(e.iter().map(|x| -x).collect()),
            c.recip(),
        );
        Ok(inv.pow(k))
    }

    fn base(&mut self) -> Result<LaurentPoly, LaurentError> {
        let vars = self.vars.to_vec();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(LaurentPoly::constant(vars, Rational::from_integer(v)))
            }
            Some(Tok::Ident(name)) => {
                let at = self.offset();
                self.pos += 1;
                let Some(i) = self.vars.iter().position(|v| *v == name) else {
                    return Err(LaurentError::UnknownVariable { name, pos: at });
                };
                Ok(LaurentPoly::var(vars, i))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.syntax("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.syntax("expected a number, variable or `(`"),
            None => self.syntax("unexpected end of input"),
        }
    }
}

fn run(src: &str, vars: &[String]) -> Result<LaurentPoly, LaurentError> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(LaurentError::Syntax { pos: 0, msg: "empty expression".into() });
    }
    let mut parser = Parser { toks, pos: 0, end: src.len(), vars };
    let p = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return parser.syntax("unexpected trailing input");
    }
    Ok(p)
}

/// Parses an expression. Without `var_names`, identifiers are bound as
/// variables in order of first appearance.
pub fn parse(text: &str, var_names: Option<&[String]>) -> Result<LaurentPoly, LaurentError> {
    match var_names {
        Some(v) => run(text, v),
        None => {
            let mut seen: Vec<String> = Vec::new();
            for (t, _) in tokenize(text)? {
                if let Tok::Ident(name) = t {
                    if !seen.contains(&name) {
                        seen.push(name);
                    }
                }
            }
            run(text, &seen)
        }
    }
}

pub fn parse_with_vars(text: &str, var_names: &[&str]) -> Result<LaurentPoly, LaurentError> {
    let v: Vec<String> = var_names.iter().map(|s| s.to_string()).collect();
    run(text, &v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err_pos(s: &str) -> usize {
        match parse(s, None) {
            Err(LaurentError::Syntax { pos, .. }) | Err(LaurentError::NotLaurent { pos, .. }) => pos,
            other => panic!("expected positioned error for {s:?}, got {other:?}"),
        }
    }

    #[test]
    fn binds_first_appearance_order() {
        let f = parse("z + y*x", None).unwrap();
        assert_eq!(f.var_names(), &["z", "y", "x"]);
    }

    #[test]
    fn inexact_division_is_not_laurent() {
        assert!(matches!(
            parse("(x^2+1)/(x+1)", None),
            Err(LaurentError::NotLaurent { pos: 7, .. })
        ));
        assert!(matches!(parse("1/(x+1)", None), Err(LaurentError::NotLaurent { .. })));
        assert!(matches!(parse("(x+1)^-1", None), Err(LaurentError::NotLaurent { .. })));
    }

    #[test]
    fn negative_powers_of_monomials() {
        let f = parse("(2*x*y)^-2", None).unwrap();
        assert_eq!(f.to_string(), "1/4*x^-2*y^-2");
    }

    #[test]
    fn error_positions() {
        assert_eq!(err_pos("x +"), 3);
        assert_eq!(err_pos("2x"), 1);
        assert_eq!(err_pos("x + # y"), 4);
        assert_eq!(err_pos("(x + 1"), 6);
        assert_eq!(err_pos("x ^ y"), 4);
    }

    #[test]
    fn unknown_variable_with_declared_names() {
        let vars = vec!["x".to_string()];
        assert!(matches!(
            parse("x + y", Some(&vars)),
            Err(LaurentError::UnknownVariable { pos: 4, .. })
        ));
    }
}
