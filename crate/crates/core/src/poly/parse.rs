//! Text parser for polynomial expressions.
//!
//! Grammar (ASCII, whitespace insignificant):
//!
//! ```text
//! poly   := term (('+'|'-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! factor := var ('^' uint)?
//! coeff  := uint
//! var    := [a-zA-Z][a-zA-Z0-9]*
//! ```
//!
//! A unary minus is allowed at the head of a term. Integers of any length
//! are reduced mod p while reading digits.

use super::{Monomial, PolyError, Polynomial, VarSet, MAX_EXPONENT};
use crate::field::{FieldElement, PrimeField};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Int(String),
    Ident(String),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((start, Tok::Int(text[start..i].to_string())));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                toks.push((start, Tok::Ident(text[start..i].to_string())));
            }
            c => {
                return Err(PolyError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{}`", c as char),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a VarSet,
    field: PrimeField,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(usize, Tok)> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }


    fn int_mod_p(&self, digits: &str) -> FieldElement {
        let p = self.field.characteristic() as u64;
        let mut acc = 0u64;
        for d in digits.bytes() {
            acc = (acc * 10 + (d - b'0') as u64) % p;
        }
        self.field.element(acc as i64)
    }

    fn uint_exponent(&self, digits: &str, pos: usize) -> Result<u32, PolyError> {
        let mut acc: u64 = 0;
        for d in digits.bytes() {
            acc = acc * 10 + (d - b'0') as u64;
            if acc >= MAX_EXPONENT as u64 {
                return Err(PolyError::ExponentOverflow);
            }
        }
        let _ = pos;
        Ok(acc as u32)
    }

    /// factor := var ('^' uint)?  — returns (var index, exponent)
    fn factor(&mut self) -> Result<(usize, u32), PolyError> {
        match self.bump() {
            Some((pos, Tok::Ident(name))) => {
                let idx = self.vars.index_of(&name).ok_or(PolyError::UnknownVariable {
                    name,
                    pos: Some(pos),
                })?;
                let exp = if matches!(self.peek(), Some((_, Tok::Caret))) {
                    self.bump();
                    match self.bump() {
                        Some((epos, Tok::Int(d))) => self.uint_exponent(&d, epos)?,
                        other => {
                            let pos = other.map(|(p, _)| p).unwrap_or(self.end);
                            return Err(PolyError::Syntax {
                                pos,
                                msg: "expected exponent after `^`".into(),
                            });
                        }
                    }
                } else {
                    1
                };
                Ok((idx, exp))
            }
            Some((pos, _)) => Err(PolyError::Syntax { pos, msg: "expected a variable".into() }),
            None => Err(PolyError::Syntax { pos: self.end, msg: "expected a variable".into() }),
        }
    }

    /// term := coeff ('*' factor)* | factor ('*' factor)*
    fn term(&mut self, negate: bool) -> Result<(Monomial, FieldElement), PolyError> {
        let mut coeff;
        let mut exps = vec![0u32; self.vars.len()];
        match self.peek() {
            Some((_, Tok::Int(_))) => {
                let Some((_, Tok::Int(d))) = self.bump() else { unreachable!() };
                coeff = self.int_mod_p(&d);
            }
            Some((_, Tok::Ident(_))) => {
                coeff = self.field.one();
                let (idx, e) = self.factor()?;
                exps[idx] = exps[idx].checked_add(e).ok_or(PolyError::ExponentOverflow)?;
            }
            other => {
                let pos = other.map(|(p, _)| *p).unwrap_or(self.end);
                return Err(PolyError::Syntax { pos, msg: "expected a term".into() });
            }
        }
        while matches!(self.peek(), Some((_, Tok::Star))) {
            self.bump();
            let (idx, e) = self.factor()?;
            exps[idx] = exps[idx].checked_add(e).ok_or(PolyError::ExponentOverflow)?;
            if exps[idx] >= MAX_EXPONENT {
                return Err(PolyError::ExponentOverflow);
            }
        }
        if negate {
            coeff = -coeff;
        }
        Ok((Monomial::from_exps(exps), coeff))
    }

    fn poly(&mut self) -> Result<Polynomial, PolyError> {
        let mut out = Polynomial::zero(self.field, self.vars);
        // optional unary minus on the first term
        let negate = if matches!(self.peek(), Some((_, Tok::Minus))) {
            self.bump();
            true
        } else {
            false
        };
        let (m, c) = self.term(negate)?;
        out = out.checked_add(&Polynomial::from_term(self.field, self.vars, m, c))?;
        loop {
            match self.peek() {
                Some((_, Tok::Plus)) => {
                    self.bump();
                    let (m, c) = self.term(false)?;
                    out = out.checked_add(&Polynomial::from_term(self.field, self.vars, m, c))?;
                }
                Some((_, Tok::Minus)) => {
                    self.bump();
                    let (m, c) = self.term(true)?;
                    out = out.checked_add(&Polynomial::from_term(self.field, self.vars, m, c))?;
                }
                Some((pos, _)) => {
                    return Err(PolyError::Syntax {
                        pos: *pos,
                        msg: "expected `+`, `-` or end of input".into(),
                    })
                }
                None => return Ok(out),
            }
        }
    }
}

/// Parse `text` as a polynomial over `vars` with coefficients in `field`.
pub fn parse_poly(text: &str, vars: &VarSet, field: PrimeField) -> Result<Polynomial, PolyError> {
    let toks = tokenize(text)?;
    let mut parser = Parser { toks, pos: 0, end: text.len(), vars, field };
    let out = parser.poly()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarSet;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn vars() -> VarSet {
        VarSet::new(["x", "y", "z", "t"]).unwrap()
    }

    #[test]
    fn asanuma_relation_parses() {
        let f = parse_poly("x^2*y + z^4 + t + t^6", &vars(), f2()).unwrap();
        assert_eq!(f.num_terms(), 4);
        // canonical printing is descending graded-lex
        assert_eq!(f.to_string(), "t^6 + z^4 + x^2*y + t");
        let again = parse_poly(&f.to_string(), &vars(), f2()).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn zero_literal() {
        let f = parse_poly("0", &vars(), f2()).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.to_string(), "0");
    }

    #[test]
    fn coefficients_reduce_mod_p() {
        let f = parse_poly("3*x + 5", &vars(), f2()).unwrap();
        assert_eq!(f.to_string(), "x + 1");
        let g = parse_poly("2*x + 4", &vars(), f2()).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn unary_minus_and_separators() {
        let f5 = PrimeField::new(5).unwrap();
        let f = parse_poly("-x + y - 2*z", &vars(), f5).unwrap();
        assert_eq!(f.to_string(), "4*x + y + 3*z");
    }

    #[test]
    fn huge_integers_reduce_while_reading() {
        let f5 = PrimeField::new(5).unwrap();
        let f = parse_poly("123456789123456789123456789123456789", &vars(), f5).unwrap();
        // that integer is ≡ 4 mod 5
        assert_eq!(f.to_string(), "4");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_poly("x + ?", &vars(), f2()) {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_poly("x * 2", &vars(), f2()) {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_poly("", &vars(), f2()) {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 0),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_variables_are_positioned() {
        match parse_poly("x + q^2", &vars(), f2()) {
            Err(PolyError::UnknownVariable { name, pos }) => {
                assert_eq!(name, "q");
                assert_eq!(pos, Some(4));
            }
            other => panic!("expected unknown variable, got {other:?}"),
        }
    }

    #[test]
    fn repeated_variables_multiply_out() {
        let f = parse_poly("x*x*x", &vars(), f2()).unwrap();
        assert_eq!(f.to_string(), "x^3");
    }
}
