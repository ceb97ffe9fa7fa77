//! Sparse multivariate polynomials over Q and F_p.

mod domain;
mod monomial;
mod order;
pub mod parse;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

pub use domain::{format_rational, is_prime, parse_rational, CoefficientDomain, Scalar};
pub(crate) use domain::pow_mod;
pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use parse::parse_polynomial;

use crate::error::{Error, Result};

/// A polynomial in `nvars` positionally indexed variables.
///
/// Terms are stored in a map keyed by exponent vector; zero coefficients are
/// never stored, so structural equality is ring equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    domain: CoefficientDomain,
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

/// Keeps only monomials whose exponents in `variables` all stay below `bound`.
///
/// Multiplying modulo the bracket power `(x_i^bound : i in variables)` only
/// needs these terms, since that ideal is spanned by the discarded monomials.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub variables: Vec<usize>,
    pub bound: u64,
}

impl Truncation {
    pub fn keeps(&self, m: &Monomial) -> bool {
        self.variables
            .iter()
            .all(|&v| (m.exponents()[v] as u64) < self.bound)
    }
}

impl Polynomial {
    pub fn zero(domain: CoefficientDomain, nvars: usize) -> Self {
        Polynomial { domain, nvars, terms: BTreeMap::new() }
    }

    pub fn one(domain: CoefficientDomain, nvars: usize) -> Self {
        Self::constant(domain, nvars, domain.one())
    }

    pub fn constant(domain: CoefficientDomain, nvars: usize, c: Scalar) -> Self {
        Self::term(domain, Monomial::one(nvars), c)
    }

    pub fn variable(domain: CoefficientDomain, nvars: usize, index: usize) -> Self {
        Self::term(domain, Monomial::variable(nvars, index, 1), domain.one())
    }

    pub fn term(domain: CoefficientDomain, m: Monomial, c: Scalar) -> Self {
        let nvars = m.nvars();
        let mut p = Polynomial::zero(domain, nvars);
        p.add_term(m, c);
        p
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I>(domain: CoefficientDomain, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut p = Polynomial::zero(domain, nvars);
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if self.domain.is_zero(&c) {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = self.domain.add(o.get(), &c);
                if self.domain.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.domain
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(m, c)| m.is_one() && self.domain.is_one(c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Scalar)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.domain.zero())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one(self.nvars))
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponents()[var]).max().unwrap_or(0)
    }

    /// Returns the common weighted degree of all terms, if homogeneous.
    pub fn homogeneous_degree(&self, weights: &[u32]) -> Option<u64> {
        let mut it = self.terms.keys().map(|m| m.weighted_degree(weights));
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponents()[var] > 0)
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &Scalar)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0.exponents(), b.0.exponents()))
    }

    fn compatible(&self, other: &Polynomial) -> Result<()> {
        if self.domain != other.domain || self.nvars != other.nvars {
            Err(Error::DomainMismatch)
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), self.domain.neg(c));
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        Ok(self.mul_filtered(other, |_| true))
    }

    fn mul_filtered<F: Fn(&Monomial) -> bool>(&self, other: &Polynomial, keep: F) -> Polynomial {
        let mut out = Polynomial::zero(self.domain, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                if keep(&m) {
                    out.add_term(m, self.domain.mul(c1, c2));
                }
            }
        }
        out
    }

    /// Product with all terms outside the truncation box dropped.
    pub fn mul_truncated(&self, other: &Polynomial, trunc: &Truncation) -> Polynomial {
        assert!(self.compatible(other).is_ok(), "polynomial domain mismatch");
        let a = self.truncated(trunc);
        let b = other.truncated(trunc);
        a.mul_filtered(&b, |m| trunc.keeps(m))
    }

    pub fn truncated(&self, trunc: &Truncation) -> Polynomial {
        Polynomial {
            domain: self.domain,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| trunc.keeps(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn pow_truncated(&self, n: u64, trunc: &Truncation) -> Polynomial {
        let mut acc = Polynomial::one(self.domain, self.nvars).truncated(trunc);
        let mut base = self.truncated(trunc);
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_truncated(&base, trunc);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_truncated(&base, trunc);
            }
        }
        acc
    }

    /// Exact power by binary exponentiation.
    pub fn pow(&self, n: u64) -> Polynomial {
        if let Some(q) = self.frobenius_exponent(n) {
            return self.frobenius_power(q).expect("characteristic checked");
        }
        let p = self.domain.characteristic();
        if p != 0 && n > p && self.num_terms() > 1 {
            // f^n = prod_k (f^{n_k})^{p^k} over the base-p digits of n
            let mut acc = Polynomial::one(self.domain, self.nvars);
            let mut n = n;
            let mut q = 1u64;
            while n > 0 {
                let digit = n % p;
                if digit > 0 {
                    let part = self.pow_binary(digit).frobenius_power(q).expect("positive characteristic");
                    acc = &acc * &part;
                }
                n /= p;
                if n > 0 {
                    q *= p;
                }
            }
            return acc;
        }
        self.pow_binary(n)
    }

    fn pow_binary(&self, n: u64) -> Polynomial {
        let mut acc = Polynomial::one(self.domain, self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.domain, self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] -= 1;
            let k = self.domain.from_i64(e as i64);
            out.add_term(Monomial::new(exps), self.domain.mul(c, &k));
        }
        out
    }

    // n is a power of the characteristic
    fn frobenius_exponent(&self, n: u64) -> Option<u64> {
        let p = self.domain.characteristic();
        if p == 0 || n < p {
            return None;
        }
        let mut q = 1u64;
        while q < n {
            q = q.checked_mul(p)?;
        }
        (q == n).then_some(q)
    }

    /// `f^q` for `q` a power of the characteristic, computed termwise
    /// (additivity of Frobenius, coefficients fixed since `c^p = c` in F_p).
    pub fn frobenius_power(&self, q: u64) -> Result<Polynomial> {
        let p = self.domain.characteristic();
        if p == 0 {
            return Err(Error::WrongCharacteristic);
        }
        let q32 = u32::try_from(q).map_err(|_| Error::Invalid("Frobenius power too large".into()))?;
        Ok(Polynomial {
            domain: self.domain,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.pow(q32), c.clone()))
                .collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        Polynomial::from_terms(
            self.domain,
            self.nvars,
            self.terms.iter().map(|(m, d)| (m.clone(), self.domain.mul(c, d))),
        )
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            domain: self.domain,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    /// Leading coefficient normalized to one.
    pub fn monic(&self, order: MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.domain.inv(c).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Exact division by a monomial; `None` if some term is not divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(m.quotient_of(k)?, c.clone());
        }
        Some(Polynomial { domain: self.domain, nvars: self.nvars, terms })
    }

    /// Applies `f` to every exponent vector (must be injective on the support
    /// or produce terms that are recombined).
    pub fn map_monomials<F>(&self, nvars: usize, mut f: F) -> Polynomial
    where
        F: FnMut(&Monomial) -> Monomial,
    {
        Polynomial::from_terms(
            self.domain,
            nvars,
            self.terms.iter().map(|(m, c)| (f(m), c.clone())),
        )
    }

    /// Moves variable `i` to slot `slots[i]` of a ring with `nvars` variables.
    pub fn embed(&self, nvars: usize, slots: &[usize]) -> Polynomial {
        self.map_monomials(nvars, |m| {
            let mut e = alloc::vec![0u32; nvars];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[slots[i]] += x;
            }
            Monomial::new(e)
        })
    }

    /// Ring homomorphism sending variable `i` to `images[i]`.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.nvars {
            return Err(Error::DomainMismatch);
        }
        let (domain, nvars) = match images.first() {
            Some(img) => (img.domain, img.nvars),
            None => (self.domain, 0),
        };
        if images.iter().any(|g| g.domain != domain || g.nvars != nvars) || domain != self.domain {
            return Err(Error::DomainMismatch);
        }
        let mut powers: Vec<BTreeMap<u32, Polynomial>> = alloc::vec![BTreeMap::new(); self.nvars];
        let mut out = Polynomial::zero(domain, nvars);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(domain, nvars, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers[i]
                    .entry(e)
                    .or_insert_with(|| images[i].pow(e as u64))
                    .clone();
                t = &t * &pw;
                if t.is_zero() {
                    break;
                }
            }
            for (k, v) in t.terms {
                out.add_term(k, v);
            }
        }
        Ok(out)
    }

    /// Reduces rational coefficients into F_p.
    pub fn reduce_mod(&self, target: CoefficientDomain) -> Result<Polynomial> {
        let mut out = Polynomial::zero(target, self.nvars);
        for (m, c) in &self.terms {
            let v = match c {
                Scalar::Rational(r) => target.from_rational(r)?,
                Scalar::Residue(v) => target.from_i64(*v as i64),
            };
            out.add_term(m.clone(), v);
        }
        Ok(out)
    }

    /// Formats with the given variable names in the polynomial grammar.
    pub fn format_with(&self, names: &[String]) -> String {
        let mut s = String::new();
        self.write_with(&mut s, |i| names[i].as_str()).expect("writing to string");
        s
    }

    fn write_with<'a, W: fmt::Write, N: Fn(usize) -> &'a str>(&self, w: &mut W, name: N) -> fmt::Result {
        if self.terms.is_empty() {
            return w.write_str("0");
        }
        let mut terms: Vec<(&Monomial, &Scalar)> = self.terms.iter().collect();
        terms.sort_by(|a, b| MonomialOrder::GrevLex.cmp(b.0.exponents(), a.0.exponents()));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { self.domain.neg(c) } else { c.clone() };
            if k == 0 {
                if neg {
                    w.write_str("-")?;
                }
            } else if neg {
                w.write_str(" - ")?;
            } else {
                w.write_str(" + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !self.domain.is_one(&abs) || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(name(i).to_string()),
                    _ => factors.push(alloc::format!("{}^{}", name(i), e)),
                }
            }
            w.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| alloc::format!("x{}", i)).collect();
        self.write_with(f, |i| names[i].as_str())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial domain mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial domain mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial domain mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&self.domain.from_i64(-1))
    }
}

/// Default variable names `x0, x1, ...`.
pub fn default_names(nvars: usize) -> Vec<String> {
    (0..nvars).map(|i| alloc::format!("x{}", i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn p(text: &str, vars: &[&str], d: CoefficientDomain) -> Polynomial {
        parse_polynomial(text, &names(vars), d).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let q = CoefficientDomain::Rationals;
        let a = p("x+y", &["x", "y"], q);
        let b = p("x-y", &["x", "y"], q);
        assert_eq!(&a * &b, p("x^2-y^2", &["x", "y"], q));
        let zero = Polynomial::zero(q, 2);
        assert_eq!(&a + &zero, a);
    }

    #[test]
    fn freshmans_dream() {
        let f2 = CoefficientDomain::PrimeField(2);
        let a = p("x+y", &["x", "y"], f2);
        assert_eq!(&a * &a, p("x^2+y^2", &["x", "y"], f2));
    }

    #[test]
    fn powers() {
        let f3 = CoefficientDomain::PrimeField(3);
        let f = p("x^2+y^3", &["x", "y"], f3);
        assert!(f.pow(0).is_one());
        assert_eq!(f.pow(2), p("x^4 + 2*x^2*y^3 + y^6", &["x", "y"], f3));
        assert_eq!(f.pow(9), f.frobenius_power(9).unwrap());
    }

    #[test]
    fn mismatched_domains_error() {
        let a = Polynomial::one(CoefficientDomain::Rationals, 2);
        let b = Polynomial::one(CoefficientDomain::PrimeField(5), 2);
        assert_eq!(a.checked_add(&b), Err(Error::DomainMismatch));
        let c = Polynomial::one(CoefficientDomain::Rationals, 3);
        assert_eq!(a.checked_mul(&c), Err(Error::DomainMismatch));
    }

    #[test]
    fn truncated_product_matches_full_product() {
        let f5 = CoefficientDomain::PrimeField(5);
        let f = p("x^2+y^3+x*y", &["x", "y"], f5);
        let trunc = Truncation { variables: vec![0, 1], bound: 5 };
        let full = f.pow(4).truncated(&trunc);
        assert_eq!(f.pow_truncated(4, &trunc), full);
    }

    #[test]
    fn substitution_is_a_ring_map() {
        let q = CoefficientDomain::Rationals;
        let f = p("x^2 + t*y", &["t", "x", "y"], q);
        let imgs = vec![
            p("s^3", &["s", "x", "y"], q),
            p("x", &["s", "x", "y"], q),
            p("y", &["s", "x", "y"], q),
        ];
        assert_eq!(f.substitute(&imgs).unwrap(), p("x^2 + s^3*y", &["s", "x", "y"], q));
    }

    #[test]
    fn display_uses_grammar() {
        let q = CoefficientDomain::Rationals;
        let f = p("x^2 + (1/2)*y^3 - 3", &["x", "y"], q);
        assert_eq!(f.format_with(&names(&["x", "y"])), "1/2*y^3 + x^2 - 3");
        assert_eq!(Polynomial::zero(q, 2).format_with(&names(&["x", "y"])), "0");
    }
}
