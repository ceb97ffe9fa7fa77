//! Reader for the polynomial text grammar:
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' nat)?
//! base     := name | rational | '(' expr ')'
//! rational := int ('/' nat)?
//! ```
//!
//! Whitespace is ignored and implicit multiplication is rejected.

use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{CoefficientDomain, Polynomial};
use crate::error::{Error, Result};

pub fn parse_polynomial(
    text: &str,
    variables: &[String],
    domain: CoefficientDomain,
) -> Result<Polynomial> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, variables, domain };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    variables: &'a [String],
    domain: CoefficientDomain,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax { position: self.pos, message: message.into() }
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

    fn expr(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' || c == b'_' => {
                    return Err(self.error("implicit multiplication is not allowed"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.natural()?;
            let n: u64 = n
                .try_into()
                .map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial> {
        let nvars = self.variables.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.natural()?;
                let mut value = BigRational::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.natural()?;
                    if den.is_zero() {
                        return Err(Error::NonUnitDivision);
                    }
                    value /= BigRational::from_integer(den);
                }
                let c = self.domain.from_rational(&value)?;
                Ok(Polynomial::constant(self.domain, nvars, c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.variables.iter().position(|v| v == name) {
                    Some(i) => Ok(Polynomial::variable(self.domain, nvars, i)),
                    None => Err(Error::UnknownIdentifier(name.into())),
                }
            }
            Some(_) => Err(self.error("expected a variable, number or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn natural(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        let digits = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        digits
            .parse::<BigInt>()
            .map_err(|_| Error::Syntax { position: start, message: format!("bad number `{}`", digits) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Monomial, Scalar};
    use alloc::string::ToString;
    use alloc::vec;
    use alloc::vec::Vec;

    fn vars(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn zero_literal() {
        let f = parse_polynomial("0", &vars(&["x", "y"]), CoefficientDomain::PrimeField(5)).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn binomial_in_char_two() {
        let d = CoefficientDomain::PrimeField(2);
        let f = parse_polynomial("(x+y)^2", &vars(&["x", "y"]), d).unwrap();
        let g = parse_polynomial("x^2 + y^2", &vars(&["x", "y"]), d).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn rational_coefficients() {
        let q = CoefficientDomain::Rationals;
        let f = parse_polynomial("x^2 + (1/2)*y^3", &vars(&["x", "y"]), q).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(
            f.coefficient(&Monomial::new(vec![0, 3])),
            Scalar::Rational(BigRational::new(1.into(), 2.into()))
        );
        assert_eq!(f.coefficient(&Monomial::new(vec![2, 0])), q.one());
    }

    #[test]
    fn errors() {
        let q = CoefficientDomain::Rationals;
        let v = vars(&["x", "y"]);
        assert_eq!(parse_polynomial("z + 1", &v, q), Err(Error::UnknownIdentifier("z".into())));
        assert!(matches!(parse_polynomial("x +* y", &v, q), Err(Error::Syntax { position: 3, .. })));
        assert!(matches!(parse_polynomial("2x", &v, q), Err(Error::Syntax { .. })));
        assert!(matches!(parse_polynomial("(x + y", &v, q), Err(Error::Syntax { .. })));
        assert_eq!(
            parse_polynomial("x/5", &v, q).unwrap_err(),
            Error::Syntax { position: 1, message: "unexpected trailing input".into() }
        );
        let f5 = CoefficientDomain::PrimeField(5);
        assert_eq!(parse_polynomial("1/5*x", &v, f5), Err(Error::NonUnitDivision));
        assert_eq!(parse_polynomial("1/0", &v, q), Err(Error::NonUnitDivision));
    }

    #[test]
    fn print_parse_fixed_point() {
        let q = CoefficientDomain::Rationals;
        let v = vars(&["x", "y"]);
        let f = parse_polynomial("-(x - 2/3*y)^3 + 7", &v, q).unwrap();
        let printed = f.format_with(&v);
        let g = parse_polynomial(&printed, &v, q).unwrap();
        assert_eq!(f, g);
        assert_eq!(g.format_with(&v), printed);
    }
}
