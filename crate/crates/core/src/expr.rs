//! Polynomial expressions over named basis elements.
//!
//! ```text
//! expr     := sign? term (('+' | '-') term)*
//! term     := coeff ('*' monomial)? | monomial
//! monomial := factor ('*' factor)*
//! factor   := name ('^' positive-int)?
//! coeff    := integer | integer '/' positive-integer
//! ```
//!
//! Whitespace is ignored between tokens. An [`Expr`] is purely syntactic; it
//! becomes a [`Cochain`] once evaluated against an algebra, where each name is
//! looked up among the basis elements and products use the algebra's
//! multiplication.

use std::fmt;

use num::{BigInt, One, Signed, Zero};

use crate::algebra::{Algebra, Cochain};
use crate::error::{Error, ParseError, Result};
use crate::linalg::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    /// Factors in written order, each with a positive exponent.
    pub factors: Vec<(String, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Expr {
    pub terms: Vec<Term>,
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ParseError> {
        Parser { src, pos: 0 }.expr()
    }

    pub fn zero() -> Expr {
        Expr::default()
    }

    /// Evaluates the expression in `algebra`. When `expected_degree` is given,
    /// the result must live in that degree; an expression with no terms then
    /// yields the zero cochain there.
    pub fn evaluate(&self, algebra: &Algebra, expected_degree: Option<usize>) -> Result<Cochain> {
        let mut total: Option<Cochain> = None;
        for term in &self.terms {
            let mut value = algebra.unit_cochain();
            for (name, exp) in &term.factors {
                let atom = algebra.basis_cochain(name)?;
                for _ in 0..*exp {
                    value = algebra.multiply(&value, &atom)?;
                }
            }
            let value = value.scale(&term.coeff);
            total = Some(match total {
                None => value,
                Some(acc) if acc.degree() != value.degree() => {
                    return Err(Error::NonHomogeneous {
                        first: acc.degree(),
                        second: value.degree(),
                    })
                }
                Some(acc) => acc.add(&value)?,
            });
        }
        match (total, expected_degree) {
            (Some(c), Some(d)) if c.degree() != d => Err(Error::NonHomogeneous {
                first: d,
                second: c.degree(),
            }),
            (Some(c), _) => Ok(c),
            (None, Some(d)) => algebra.zero_cochain(d),
            (None, None) => algebra.zero_cochain(0),
        }
    }

    /// Rewrites a cochain as a sum of its basis names. Parsing the result and
    /// evaluating it in the same algebra gives the cochain back whenever the
    /// basis names are products of atoms in canonical order.
    pub fn from_cochain(c: &Cochain) -> Expr {
        let alg = c.algebra();
        let names = alg.basis(c.degree());
        let terms = c
            .coords()
            .iter()
            .zip(names)
            .filter(|(q, _)| !q.is_zero())
            .map(|(q, name)| Term {
                coeff: q.clone(),
                factors: split_basis_name(name),
            })
            .collect();
        Expr { terms }
    }
}

/// Splits a basis name like `a^2*x` into its factors; the unit name `1` has
/// no factors.
fn split_basis_name(name: &str) -> Vec<(String, u32)> {
    if name == "1" {
        return Vec::new();
    }
    name.split('*')
        .map(|f| match f.split_once('^') {
            Some((base, e)) => (base.to_string(), e.parse().unwrap_or(1)),
            None => (f.to_string(), 1),
        })
        .collect()
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            let negative = term.coeff.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let magnitude = term.coeff.abs();
            let monomial: Vec<String> = term
                .factors
                .iter()
                .map(|(n, e)| {
                    if *e == 1 {
                        n.clone()
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            if monomial.is_empty() {
                write!(f, "{}", format_rational(&magnitude))?;
            } else if magnitude.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&magnitude), monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&mut self) -> Option<u8> {
        while let Some(b) = self.src.as_bytes().get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                return Some(*b);
            }
        }
        None
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(self.pos, message))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        if self.peek().is_none() {
            return self.error("empty expression");
        }
        let mut terms = Vec::new();
        let mut negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let mut term = self.term()?;
            if negative {
                term.coeff = -term.coeff;
            }
            if !term.coeff.is_zero() {
                terms.push(term);
            }
            match self.peek() {
                None => break,
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(c) => return self.error(format!("unexpected character `{}`", c as char)),
            }
            self.pos += 1;
        }
        Ok(Expr { terms })
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let coeff = self.coeff()?;
                let factors = if self.eat(b'*') {
                    self.monomial()?
                } else {
                    Vec::new()
                };
                Ok(Term { coeff, factors })
            }
            Some(c) if is_name_start(c) => Ok(Term {
                coeff: Rational::one(),
                factors: self.monomial()?,
            }),
            Some(c) => self.error(format!("expected a term, found `{}`", c as char)),
            None => self.error("expected a term, found end of input"),
        }
    }

    fn coeff(&mut self) -> Result<Rational, ParseError> {
        let numer = self.integer()?;
        if self.eat(b'/') {
            let at = self.pos;
            let denom = self.integer()?;
            if denom.is_zero() {
                return Err(ParseError::new(at, "zero denominator"));
            }
            Ok(Rational::new(numer, denom))
        } else {
            Ok(Rational::from_integer(numer))
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.peek();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected an integer");
        }
        Ok(self.src[start..self.pos].parse().expect("ascii digits"))
    }

    fn monomial(&mut self) -> Result<Vec<(String, u32)>, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        Ok(factors)
    }

    fn factor(&mut self) -> Result<(String, u32), ParseError> {
        match self.peek() {
            Some(c) if is_name_start(c) => {}
            _ => return self.error("expected a name"),
        }
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && is_name_char(bytes[self.pos]) {
            self.pos += 1;
        }
        let name = self.src[start..self.pos].to_string();
        let exp = if self.eat(b'^') {
            let at = self.pos;
            let e = self.integer()?;
            match u32::try_from(e) {
                Ok(e) if e > 0 => e,
                _ => return Err(ParseError::new(at, "exponent must be a positive integer")),
            }
        } else {
            1
        };
        Ok((name, exp))
    }
}

fn is_name_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_name_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

/// True when `name` is a valid atom for the expression grammar.
pub fn is_identifier(name: &str) -> bool {
    let bytes = name.as_bytes();
    !bytes.is_empty() && is_name_start(bytes[0]) && bytes.iter().all(|&c| is_name_char(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    #[test]
    fn parses_euler_class() {
        let e = Expr::parse("10*b - a1 - a2 - a3 - a4").unwrap();
        assert_eq!(e.terms.len(), 5);
        assert_eq!(e.terms[0].coeff, rat(10));
        assert_eq!(e.terms[4].coeff, rat(-1));
        assert_eq!(e.terms[4].factors, vec![("a4".to_string(), 1)]);
        assert_eq!(e.to_string(), "10*b - a1 - a2 - a3 - a4");
    }

    #[test]
    fn parses_powers_fractions_and_whitespace() {
        let e = Expr::parse(" -3/4 * a ^2*x+ 2 ").unwrap();
        assert_eq!(e.terms[0].coeff, ratio(-3, 4));
        assert_eq!(
            e.terms[0].factors,
            vec![("a".to_string(), 2), ("x".to_string(), 1)]
        );
        assert_eq!(e.terms[1].factors, vec![]);
        assert_eq!(e.to_string(), "-3/4*a^2*x + 2");
    }

    #[test]
    fn zero_terms_are_dropped() {
        assert_eq!(Expr::parse("0").unwrap(), Expr::zero());
        assert_eq!(Expr::parse("0*a").unwrap().to_string(), "0");
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(Expr::parse("a +").unwrap_err().offset, 3);
        assert_eq!(Expr::parse("a ++ b").unwrap_err().offset, 3);
        assert_eq!(Expr::parse("a^0").unwrap_err().offset, 2);
        assert_eq!(Expr::parse("1/0").unwrap_err().offset, 2);
        assert_eq!(Expr::parse("a b").unwrap_err().offset, 2);
        assert_eq!(Expr::parse("").unwrap_err().offset, 0);
        assert_eq!(Expr::parse("3*").unwrap_err().offset, 2);
        assert_eq!(Expr::parse("a * (b)").unwrap_err().offset, 4);
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("a1"));
        assert!(is_identifier("_Omega"));
        assert!(!is_identifier("1a"));
        assert!(!is_identifier("a*z"));
        assert!(!is_identifier(""));
    }
}
