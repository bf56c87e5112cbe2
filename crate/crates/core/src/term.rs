//! Boolean term syntax.
//!
//! Grammar (whitespace-insensitive), loosest binding first:
//!
//! ```text
//! or    := xor ('|' xor)*
//! xor   := and ('^' and)*
//! and   := unary (('&' | '\') unary)*
//! unary := '!' unary | '0' | '1' | 'x' DIGITS | '(' or ')'
//! ```
//!
//! `a \ b` is the difference `a & !b`. Variables are numbered from 1.

use crate::algebra::{Element, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::poly::{BoolPoly, MAX_ARITY};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Const(bool),
    /// One-based variable index.
    Var(usize),
    Not(Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    Xor(Box<Term>, Box<Term>),
    Diff(Box<Term>, Box<Term>),
}

impl Term {
    pub fn parse(src: &str) -> Result<Term> {
        let mut p = Parser { src: src.as_bytes(), pos: 0 };
        let t = p.or()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(t)
    }

    /// Largest variable index mentioned (0 for closed terms).
    pub fn max_var(&self) -> usize {
        match self {
            Term::Const(_) => 0,
            Term::Var(i) => *i,
            Term::Not(t) => t.max_var(),
            Term::And(a, b) | Term::Or(a, b) | Term::Xor(a, b) | Term::Diff(a, b) => {
                a.max_var().max(b.max_var())
            }
        }
    }

    /// Value on the 0/1 assignment `row` (bit `i` is variable `i+1`).
    pub fn eval_row(&self, row: usize) -> bool {
        match self {
            Term::Const(v) => *v,
            Term::Var(i) => row >> (i - 1) & 1 == 1,
            Term::Not(t) => !t.eval_row(row),
            Term::And(a, b) => a.eval_row(row) && b.eval_row(row),
            Term::Or(a, b) => a.eval_row(row) || b.eval_row(row),
            Term::Xor(a, b) => a.eval_row(row) != b.eval_row(row),
            Term::Diff(a, b) => a.eval_row(row) && !b.eval_row(row),
        }
    }

    /// Direct term evaluation on elements of `alg`, without tabulating.
    pub fn eval(&self, args: &[Element], alg: &FiniteAlgebra) -> Result<Element> {
        Ok(match self {
            Term::Const(false) => alg.zero(),
            Term::Const(true) => alg.one(),
            Term::Var(i) => {
                let a = *args
                    .get(i - 1)
                    .ok_or(Error::VariableOutOfRange { index: *i, arity: args.len() })?;
                alg.check(a)?
            }
            Term::Not(t) => alg.complement(t.eval(args, alg)?),
            Term::And(a, b) => a.eval(args, alg)? & b.eval(args, alg)?,
            Term::Or(a, b) => a.eval(args, alg)? | b.eval(args, alg)?,
            Term::Xor(a, b) => a.eval(args, alg)? ^ b.eval(args, alg)?,
            Term::Diff(a, b) => a.eval(args, alg)?.minus(b.eval(args, alg)?),
        })
    }

    pub fn tabulate(&self, arity: usize) -> Result<BoolPoly> {
        if self.max_var() > arity {
            return Err(Error::VariableOutOfRange { index: self.max_var(), arity });
        }
        BoolPoly::from_fn(arity, |row| self.eval_row(row))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> Error {
        Error::Parse { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn or(&mut self) -> Result<Term> {
        let mut lhs = self.xor()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            lhs = Term::Or(Box::new(lhs), Box::new(self.xor()?));
        }
        Ok(lhs)
    }

    fn xor(&mut self) -> Result<Term> {
        let mut lhs = self.and()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            lhs = Term::Xor(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Term> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'&') => {
                    self.pos += 1;
                    lhs = Term::And(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'\\') => {
                    self.pos += 1;
                    lhs = Term::Diff(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Term> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(Term::Not(Box::new(self.unary()?)))
            }
            Some(b'0') => {
                self.pos += 1;
                Ok(Term::Const(false))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Term::Const(true))
            }
            Some(b'(') => {
                self.pos += 1;
                let t = self.or()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(t)
            }
            Some(b'x') | Some(b'X') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.err("expected variable number after 'x'"));
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                let index: usize = digits.parse().map_err(|_| self.err("variable number too large"))?;
                if index == 0 || index > MAX_ARITY {
                    self.pos = start;
                    return Err(self.err(&format!("variable index must be in 1..={MAX_ARITY}")));
                }
                Ok(Term::Var(index))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        // & binds tighter than ^, which binds tighter than |
        let t = Term::parse("x1 | x2 & x3").unwrap();
        assert!(t.eval_row(0b001));
        assert!(!t.eval_row(0b010));
        let t = Term::parse("x1 ^ x2 | x3").unwrap();
        assert!(t.eval_row(0b100));
        let t = Term::parse("!x1 & x2").unwrap();
        assert!(t.eval_row(0b10));
        assert!(!t.eval_row(0b11));
    }

    #[test]
    fn difference_and_whitespace() {
        let a = Term::parse("x1\\x2").unwrap();
        let b = Term::parse("  x1 &\t! x2 ").unwrap();
        assert_eq!(a.tabulate(2).unwrap(), b.tabulate(2).unwrap());
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "x", "x0", "(x1", "x1 &", "x1 x2", "y1", "x17"] {
            assert!(matches!(Term::parse(bad), Err(Error::Parse { .. })), "{bad}");
        }
    }

    #[test]
    fn direct_eval_matches_table() {
        let alg = FiniteAlgebra::new(3).unwrap();
        let t = Term::parse("(x1 \\ x2) ^ !(x3 | 0)").unwrap();
        let p = t.tabulate(3).unwrap();
        let elems: Vec<Element> = alg.elements().collect();
        for &a in &elems {
            for &b in &elems {
                for &c in &elems {
                    let args = [a, b, c];
                    assert_eq!(t.eval(&args, &alg).unwrap(), p.eval(&args, &alg).unwrap());
                }
            }
        }
    }
}
