use core::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::{pow_mod, CoefficientDomain, Scalar};

/// Coefficient arithmetic used inside the Groebner engine.
pub(crate) trait Field {
    type E: Clone + PartialEq + Debug;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn import(&self, s: &Scalar) -> Self::E;
    fn export(&self, a: &Self::E) -> Scalar;
    fn domain(&self) -> CoefficientDomain;
}

pub(crate) struct Fp(pub u64);

impl Field for Fp {
    type E = u64;
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.0 - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        pow_mod(*a, self.0 - 2, self.0)
    }
    fn import(&self, s: &Scalar) -> u64 {
        match s {
            Scalar::Residue(v) => *v as u64,
            Scalar::Rational(_) => panic!("rational scalar in a prime-field computation"),
        }
    }
    fn export(&self, a: &u64) -> Scalar {
        Scalar::Residue(*a as u32)
    }
    fn domain(&self) -> CoefficientDomain {
        CoefficientDomain::PrimeField(self.0 as u32)
    }
}

pub(crate) struct Q;

impl Field for Q {
    type E = BigRational;
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn import(&self, s: &Scalar) -> BigRational {
        match s {
            Scalar::Rational(r) => r.clone(),
            Scalar::Residue(_) => panic!("residue scalar in a rational computation"),
        }
    }
    fn export(&self, a: &BigRational) -> Scalar {
        Scalar::Rational(a.clone())
    }
    fn domain(&self) -> CoefficientDomain {
        CoefficientDomain::Rationals
    }
}
