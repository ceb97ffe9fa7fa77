use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient field of a polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoefficientDomain {
    Rationals,
    PrimeField(u32),
}

/// A coefficient. Residues are always kept in `[0, p)`, rationals in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u32),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl CoefficientDomain {
    pub fn prime_field(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 / 2 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(CoefficientDomain::PrimeField(p as u32))
    }

    /// 0 for Q, p for F_p.
    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientDomain::Rationals => 0,
            CoefficientDomain::PrimeField(p) => *p as u64,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            CoefficientDomain::Rationals => Scalar::Rational(BigRational::zero()),
            CoefficientDomain::PrimeField(_) => Scalar::Residue(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            CoefficientDomain::Rationals => Scalar::Rational(BigRational::from_integer(v.into())),
            CoefficientDomain::PrimeField(p) => {
                Scalar::Residue(v.rem_euclid(*p as i64) as u32)
            }
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            CoefficientDomain::Rationals => Scalar::Rational(BigRational::from_integer(v.clone())),
            CoefficientDomain::PrimeField(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                Scalar::Residue(r.to_u32().unwrap_or(0))
            }
        }
    }

    /// Maps a rational into the domain; fails when the denominator is not a unit.
    pub fn from_rational(&self, v: &BigRational) -> Result<Scalar> {
        match self {
            CoefficientDomain::Rationals => Ok(Scalar::Rational(v.clone())),
            CoefficientDomain::PrimeField(_) => {
                let num = self.from_bigint(v.numer());
                let den = self.from_bigint(v.denom());
                let inv = self.inv(&den).ok_or(Error::NonUnitDivision)?;
                Ok(self.mul(&num, &inv))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue(v) => *v == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue(v) => *v == 1,
        }
    }

    pub fn belongs(&self, a: &Scalar) -> bool {
        matches!(
            (self, a),
            (CoefficientDomain::Rationals, Scalar::Rational(_))
                | (CoefficientDomain::PrimeField(_), Scalar::Residue(_))
        )
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (CoefficientDomain::PrimeField(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(((*x as u64 + *y as u64) % *p as u64) as u32)
            }
            _ => panic!("scalar from a foreign coefficient domain"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (_, Scalar::Rational(x)) => Scalar::Rational(-x),
            (CoefficientDomain::PrimeField(p), Scalar::Residue(x)) => {
                Scalar::Residue(if *x == 0 { 0 } else { *p - *x })
            }
            _ => panic!("scalar from a foreign coefficient domain"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (CoefficientDomain::PrimeField(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(((*x as u64 * *y as u64) % *p as u64) as u32)
            }
            _ => panic!("scalar from a foreign coefficient domain"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        match (self, a) {
            (_, Scalar::Rational(x)) => Some(Scalar::Rational(x.recip())),
            (CoefficientDomain::PrimeField(p), Scalar::Residue(x)) => {
                Some(Scalar::Residue(pow_mod(*x as u64, *p as u64 - 2, *p as u64) as u32))
            }
            _ => panic!("scalar from a foreign coefficient domain"),
        }
    }

    pub fn pow(&self, a: &Scalar, n: u64) -> Scalar {
        match (self, a) {
            (_, Scalar::Rational(x)) => {
                let mut acc = BigRational::one();
                let mut base = x.clone();
                let mut n = n;
                while n > 0 {
                    if n & 1 == 1 {
                        acc = &acc * &base;
                    }
                    base = &base * &base;
                    n >>= 1;
                }
                Scalar::Rational(acc)
            }
            (CoefficientDomain::PrimeField(p), Scalar::Residue(x)) => {
                Scalar::Residue(pow_mod(*x as u64, n, *p as u64) as u32)
            }
            _ => panic!("scalar from a foreign coefficient domain"),
        }
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl Scalar {
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Residue(_) => None,
        }
    }

    pub fn as_residue(&self) -> Option<u32> {
        match self {
            Scalar::Residue(v) => Some(*v),
            Scalar::Rational(_) => None,
        }
    }

    pub(crate) fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Residue(_) => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue(v) => write!(f, "{}", v),
        }
    }
}

impl fmt::Display for CoefficientDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientDomain::Rationals => write!(f, "Q"),
            CoefficientDomain::PrimeField(p) => write!(f, "F_{}", p),
        }
    }
}

/// Formats a rational as `a/b` (or `a` when integral).
pub fn format_rational(r: &BigRational) -> alloc::string::String {
    use alloc::string::ToString;
    Scalar::Rational(r.clone()).to_string()
}

/// Parses `a`, `a/b` or `-a/b` into a rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    use core::str::FromStr;
    let text = text.trim();
    let bad = || Error::Invalid(alloc::format!("not a rational: `{}`", text));
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::NonUnitDivision);
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_are_canonical() {
        let f7 = CoefficientDomain::PrimeField(7);
        assert_eq!(f7.from_i64(-1), Scalar::Residue(6));
        assert_eq!(f7.inv(&Scalar::Residue(3)), Some(Scalar::Residue(5)));
        assert_eq!(f7.inv(&Scalar::Residue(0)), None);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f7.from_rational(&half).unwrap(), Scalar::Residue(4));
        let f2 = CoefficientDomain::PrimeField(2);
        assert_eq!(f2.from_rational(&half), Err(Error::NonUnitDivision));
    }

    #[test]
    fn prime_field_rejects_composites() {
        assert!(CoefficientDomain::prime_field(9).is_err());
        assert!(CoefficientDomain::prime_field(1).is_err());
        assert!(CoefficientDomain::prime_field(13).is_ok());
    }

    #[test]
    fn rational_text() {
        let r = parse_rational("-10/4").unwrap();
        assert_eq!(format_rational(&r), "-5/2");
        assert!(parse_rational("1/0").is_err());
    }
}
