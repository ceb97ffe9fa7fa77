use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::ring::{RingPresentation, TripleSpec};
use crate::error::{Error, Result};
use crate::frobenius::{bracket_power, FrobeniusPower};
use crate::groebner::Ideal;
use crate::poly::{Monomial, Polynomial, Scalar, Truncation};

/// `⌈c * n⌉` for a non-negative rational `c`.
pub fn ceil_mul(c: &BigRational, n: u64) -> u64 {
    let v = c * BigRational::from_integer(BigInt::from(n));
    let num = v.numer();
    let den = v.denom();
    let (q, r) = num.div_rem(den);
    let q = if r.is_zero() { q } else { q + 1u32 };
    q.to_u64().expect("exponent fits in u64")
}

fn truncation(point: &[usize], q: FrobeniusPower) -> Truncation {
    Truncation { variables: point.to_vec(), bound: q.q() }
}

fn is_unit_at_point(f: &Polynomial, point: &[usize]) -> bool {
    f.terms().any(|(m, _)| point.iter().all(|&v| m.exponents()[v] == 0))
}

/// Largest `t` with `f^t ∉ m^[q]`, `q = p^e`, where `m` is generated by the
/// variables in `point`.
pub fn nu_value(f: &Polynomial, e: u32, point: &[usize]) -> Result<u64> {
    let p = f.domain().characteristic();
    if p == 0 {
        return Err(Error::WrongCharacteristic);
    }
    if is_unit_at_point(f, point) {
        return Err(Error::Unit);
    }
    let q = FrobeniusPower::new(p, e)?;
    let trunc = truncation(point, q);
    if f.truncated(&trunc).is_zero() {
        return Ok(0);
    }
    // f^t ∈ m^[q] for t > n(q-1) by pigeonhole
    let (mut lo, mut hi) = (0u64, point.len() as u64 * (q.q() - 1));
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if f.pow_truncated(mid, &trunc).is_zero() {
            hi = mid - 1;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

/// `ν(f, e) / p^e`.
pub fn fpt_lower_bound(f: &Polynomial, e: u32, point: &[usize]) -> Result<BigRational> {
    let nu = nu_value(f, e, point)?;
    let q = FrobeniusPower::new(f.domain().characteristic(), e)?;
    Ok(BigRational::new(BigInt::from(nu), BigInt::from(q.q())))
}

/// Data proving that `c * d * (I^[q] : I) ⊄ m^[q]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingWitness {
    pub q: FrobeniusPower,
    /// `c`; one for sharp F-purity.
    pub test_element: Polynomial,
    /// `Π g_i^{⌈c_i (q-1)⌉}`.
    pub delta_factor: Polynomial,
    /// Exponents of the generators of `a` in the chosen product.
    pub a_exponents: Vec<u64>,
    /// `d`, the delta factor times the product of generators of `a`.
    pub multiplier: Polynomial,
    /// `h ∈ (I^[q] : I)`.
    pub colon_element: Polynomial,
    /// A monomial of `c * d * h` outside `m^[q]` and its coefficient.
    pub monomial: Monomial,
    pub coefficient: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FPurity {
    Holds(SplittingWitness),
    Fails,
}

impl FPurity {
    pub fn holds(&self) -> bool {
        matches!(self, FPurity::Holds(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regularity {
    Certified(SplittingWitness),
    Inconclusive(u32),
}

impl Regularity {
    pub fn is_certified(&self) -> bool {
        matches!(self, Regularity::Certified(_))
    }
}

/// Generators of `(I^[q] : I)` that are not already in `I^[q]`; `[1]` for a
/// polynomial ring.
pub fn frobenius_colon(ring: &RingPresentation, q: FrobeniusPower) -> Result<Vec<Polynomial>> {
    if ring.characteristic() != q.p() {
        return Err(Error::WrongCharacteristic);
    }
    let i = ring.relations();
    if i.is_zero() {
        return Ok(vec![Polynomial::one(ring.domain(), ring.nvars())]);
    }
    let iq = bracket_power(i, q)?;
    let colon = if ring.is_complete_intersection()? {
        // regular sequence: (I^[q] : I) = I^[q] + (f_1 ... f_r)^{q-1}
        let prod = i
            .generators()
            .iter()
            .fold(Polynomial::one(ring.domain(), ring.nvars()), |acc, g| &acc * g);
        vec![prod.pow(q.q() - 1)]
    } else {
        iq.colon(i)?.generators().to_vec()
    };
    let reducer = iq.reducer()?;
    let mut out = Vec::new();
    for h in colon {
        if !reducer.reduce(&h)?.is_zero() {
            out.push(h);
        }
    }
    Ok(out)
}

/// `Π g_i^{⌈c_i (q-1)⌉}`.
pub fn delta_factor(spec: &TripleSpec, q: FrobeniusPower) -> Polynomial {
    let mut d = Polynomial::one(spec.ring.domain(), spec.ring.nvars());
    for comp in spec.delta.support() {
        d = &d * &comp.g.pow(ceil_mul(&comp.c, q.q() - 1));
    }
    d
}

/// Total exponent `⌈λ (q-1)⌉` for the generators of `a`.
pub fn a_exponent(spec: &TripleSpec, q: FrobeniusPower) -> u64 {
    if spec.a_is_unit() {
        0
    } else {
        ceil_mul(&spec.lambda, q.q() - 1)
    }
}

/// Calls `f` on every exponent vector of length `k` summing to `n`, in
/// lexicographically decreasing order, until it returns `Some`.
pub(crate) fn for_each_multiset<T>(k: usize, n: u64, f: &mut dyn FnMut(&[u64]) -> Result<Option<T>>) -> Result<Option<T>> {
    fn rec<T>(
        k: usize,
        left: u64,
        cur: &mut Vec<u64>,
        f: &mut dyn FnMut(&[u64]) -> Result<Option<T>>,
    ) -> Result<Option<T>> {
        if cur.len() + 1 == k {
            cur.push(left);
            let r = f(cur);
            cur.pop();
            return r;
        }
        for v in (0..=left).rev() {
            cur.push(v);
            let r = rec(k, left - v, cur, f)?;
            cur.pop();
            if r.is_some() {
                return Ok(r);
            }
        }
        Ok(None)
    }
    if k == 0 {
        return if n == 0 { f(&[]) } else { Ok(None) };
    }
    rec(k, n, &mut Vec::with_capacity(k), f)
}

fn pick_monomial(prod: &Polynomial, point: &[usize], q: FrobeniusPower) -> Option<(Monomial, Scalar)> {
    // prefer the socle monomial (x_1 ... x_n)^{q-1}, else the lex-smallest
    let socle = prod
        .terms()
        .find(|(m, _)| point.iter().all(|&v| m.exponents()[v] as u64 == q.q() - 1));
    socle
        .or_else(|| prod.terms().next())
        .map(|(m, c)| (m.clone(), c.clone()))
}

/// Searches generator products `d` and colon generators `h` for a term of
/// `c*d*h` outside `m^[q]`. Complete: `a^N` is generated by such products.
pub(crate) fn search_witness(
    spec: &TripleSpec,
    q: FrobeniusPower,
    c: &Polynomial,
    colon: &[Polynomial],
) -> Result<Option<SplittingWitness>> {
    let point = spec.ring.point_variables();
    let trunc = truncation(&point, q);
    let dfac = delta_factor(spec, q);
    let base = c.mul_truncated(&dfac, &trunc);
    if base.is_zero() {
        return Ok(None);
    }
    let prefixed: Vec<(usize, Polynomial)> = colon
        .iter()
        .enumerate()
        .map(|(k, h)| (k, base.mul_truncated(h, &trunc)))
        .filter(|(_, t)| !t.is_zero())
        .collect();
    if prefixed.is_empty() {
        return Ok(None);
    }
    let a_gens: Vec<Polynomial> = if spec.a_is_unit() {
        Vec::new()
    } else {
        spec.a.generators().to_vec()
    };
    let n = a_exponent(spec, q);
    let mut powers: Vec<Vec<Polynomial>> = a_gens.iter().map(|_| Vec::new()).collect();
    let mut found = |exps: &[u64]| -> Result<Option<SplittingWitness>> {
        let mut prod = Polynomial::one(spec.ring.domain(), spec.ring.nvars());
        for (j, &k) in exps.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let cache = &mut powers[j];
            while cache.len() <= k as usize {
                let next = match cache.last() {
                    None => Polynomial::one(spec.ring.domain(), spec.ring.nvars()),
                    Some(last) => last.mul_truncated(&a_gens[j], &trunc),
                };
                cache.push(next);
            }
            prod = prod.mul_truncated(&cache[k as usize], &trunc);
            if prod.is_zero() {
                return Ok(None);
            }
        }
        for (k, t) in &prefixed {
            let full = t.mul_truncated(&prod, &trunc);
            if let Some((m, coeff)) = pick_monomial(&full, &point, q) {
                let mut mult = dfac.clone();
                for (j, &e) in exps.iter().enumerate() {
                    if e > 0 {
                        mult = &mult * &a_gens[j].pow(e);
                    }
                }
                return Ok(Some(SplittingWitness {
                    q,
                    test_element: c.clone(),
                    delta_factor: dfac.clone(),
                    a_exponents: exps.to_vec(),
                    multiplier: mult,
                    colon_element: colon[*k].clone(),
                    monomial: m,
                    coefficient: coeff,
                }));
            }
        }
        Ok(None)
    };
    for_each_multiset(a_gens.len(), n, &mut found)
}

fn char_p(spec: &TripleSpec) -> Result<u64> {
    match spec.ring.characteristic() {
        0 => Err(Error::WrongCharacteristic),
        p => Ok(p),
    }
}

/// Fedder-type test of sharp F-purity at exponent `e`.
pub fn sharply_fpure(spec: &TripleSpec, e: u32) -> Result<FPurity> {
    if e == 0 {
        return Err(Error::Invalid("e must be at least 1".into()));
    }
    let q = FrobeniusPower::new(char_p(spec)?, e)?;
    let colon = frobenius_colon(&spec.ring, q)?;
    let one = Polynomial::one(spec.ring.domain(), spec.ring.nvars());
    Ok(match search_witness(spec, q, &one, &colon)? {
        Some(w) => FPurity::Holds(w),
        None => FPurity::Fails,
    })
}

/// Glassbrenner-type certification of strong F-regularity with the test
/// element `c`. Never returns a negative verdict.
pub fn strongly_fregular(spec: &TripleSpec, c: &Polynomial, e_max: u32) -> Result<Regularity> {
    let p = char_p(spec)?;
    if c.is_zero() || spec.ring.relations().contains(c)? {
        return Err(Error::Invalid("test element must be nonzero in the ring".into()));
    }
    for e in 1..=e_max {
        let q = FrobeniusPower::new(p, e)?;
        let colon = frobenius_colon(&spec.ring, q)?;
        if let Some(w) = search_witness(spec, q, c, &colon)? {
            return Ok(Regularity::Certified(w));
        }
    }
    Ok(Regularity::Inconclusive(e_max))
}

/// Checks a witness against the triple by direct recomputation.
pub fn check_witness(spec: &TripleSpec, w: &SplittingWitness) -> Result<bool> {
    let q = w.q;
    if q.p() != spec.ring.characteristic() {
        return Ok(false);
    }
    let point = spec.ring.point_variables();
    if w.delta_factor != delta_factor(spec, q) {
        return Ok(false);
    }
    let a_gens = spec.a.generators();
    let mut mult = w.delta_factor.clone();
    if spec.a_is_unit() {
        if !w.a_exponents.is_empty() {
            return Ok(false);
        }
    } else {
        if w.a_exponents.len() != a_gens.len() || w.a_exponents.iter().sum::<u64>() != a_exponent(spec, q) {
            return Ok(false);
        }
        for (g, &e) in a_gens.iter().zip(&w.a_exponents) {
            mult = &mult * &g.pow(e);
        }
    }
    if mult != w.multiplier {
        return Ok(false);
    }
    let iq = bracket_power(spec.ring.relations(), q)?;
    for g in spec.ring.relations().generators() {
        if !iq.contains(&(&w.colon_element * g))? {
            return Ok(false);
        }
    }
    if point.iter().any(|&v| w.monomial.exponents()[v] as u64 >= q.q()) {
        return Ok(false);
    }
    let prod = &(&w.test_element * &w.multiplier) * &w.colon_element;
    let coeff = prod.coefficient(&w.monomial);
    Ok(coeff == w.coefficient && !spec.ring.domain().is_zero(&coeff))
}

/// Ideal of the distinguished point raised to the bracket power.
pub fn point_bracket(ring: &RingPresentation, q: FrobeniusPower) -> Result<Ideal> {
    bracket_power(&ring.point_ideal(), q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fcriteria::{splitting_oracle, DivisorData, OracleVerdict};
    use crate::poly::{parse_polynomial, CoefficientDomain};
    use alloc::string::{String, ToString};

    fn fp(p: u64) -> CoefficientDomain {
        CoefficientDomain::prime_field(p).unwrap()
    }

    fn poly(text: &str, vars: &[&str], p: u64) -> Polynomial {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        parse_polynomial(text, &names, fp(p)).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn hypersurface(vars: &[&str], f: &str, p: u64) -> TripleSpec {
        TripleSpec::ring_only(RingPresentation::parse(vars, fp(p), &[f]).unwrap())
    }

    fn cusp_pair(p: u64, c: BigRational) -> TripleSpec {
        let ring = RingPresentation::parse(&["x", "y"], fp(p), &[]).unwrap();
        let f = poly("x^2 + y^3", &["x", "y"], p);
        TripleSpec::pair(ring, DivisorData::single(f, c)).unwrap()
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu_value(&poly("x", &["x"], 5), 1, &[0]).unwrap(), 4);
        let cusp7 = poly("x^2 + y^3", &["x", "y"], 7);
        assert_eq!(nu_value(&cusp7, 1, &[0, 1]).unwrap(), 5);
        assert_eq!(nu_value(&poly("x^2 + y^3", &["x", "y"], 5), 1, &[0, 1]).unwrap(), 3);
        // x^48 y^48 term of f^40 has coefficient C(40,24) = 2 mod 7
        assert_eq!(fpt_lower_bound(&cusp7, 2, &[0, 1]).unwrap(), rat(40, 49));
        assert_eq!(nu_naive(&cusp7, 49), 40);
        assert_eq!(fpt_lower_bound(&cusp7, 1, &[0, 1]).unwrap(), rat(5, 7));
        assert_eq!(nu_value(&poly("1 + x", &["x"], 5), 1, &[0]), Err(Error::Unit));
    }

    // ν by expanding f^t in full
    fn nu_naive(f: &Polynomial, q: u64) -> u64 {
        let mut t = 0;
        loop {
            let g = f.pow(t + 1);
            if g.terms().all(|(m, _)| m.exponents().iter().any(|&a| a as u64 >= q)) {
                return t;
            }
            t += 1;
        }
    }

    #[test]
    fn nu_matches_expansion() {
        for (text, p) in [("x^2 + y^3", 7), ("x^3 + y^3", 5), ("x*y + y^4", 3), ("x^2*y + y^5", 5)] {
            let f = poly(text, &["x", "y"], p);
            assert_eq!(nu_value(&f, 1, &[0, 1]).unwrap(), nu_naive(&f, p));
        }
    }

    #[test]
    fn fermat_cubic_witness() {
        let spec = hypersurface(&["x", "y", "z"], "x^3 + y^3 + z^3", 7);
        let FPurity::Holds(w) = sharply_fpure(&spec, 1).unwrap() else { panic!() };
        assert_eq!(w.monomial.exponents(), &[6, 6, 6]);
        assert_eq!(w.coefficient, fp(7).from_i64(6));
        assert!(check_witness(&spec, &w).unwrap());
        assert_eq!(splitting_oracle(&spec, 1, None).unwrap(), OracleVerdict::Holds);
    }

    #[test]
    fn cusp_not_fpure_in_char_3() {
        let spec = hypersurface(&["x", "y"], "x^2 + y^3", 3);
        assert_eq!(sharply_fpure(&spec, 1).unwrap(), FPurity::Fails);
        assert_eq!(splitting_oracle(&spec, 1, None).unwrap(), OracleVerdict::Fails);
    }

    #[test]
    fn cusp_pair_thresholds() {
        let FPurity::Holds(w) = sharply_fpure(&cusp_pair(7, rat(5, 6)), 1).unwrap() else { panic!() };
        assert_eq!(w.monomial.exponents(), &[6, 6]);
        assert_eq!(w.coefficient, fp(7).from_i64(3));
        for e in [1, 2] {
            assert_eq!(sharply_fpure(&cusp_pair(7, rat(1, 1)), e).unwrap(), FPurity::Fails);
        }
    }

    #[test]
    fn quadric_cone_certified() {
        let spec = hypersurface(&["x", "y", "z"], "x^2 + y^2 + z^2", 5);
        let c = poly("x", &["x", "y", "z"], 5);
        let Regularity::Certified(w) = strongly_fregular(&spec, &c, 1).unwrap() else { panic!() };
        assert_eq!(w.q.e(), 1);
        assert_eq!(w.monomial.exponents(), &[1, 4, 4]);
        assert_eq!(w.coefficient, fp(5).one());
        assert!(check_witness(&spec, &w).unwrap());
    }

    #[test]
    fn regular_ring() {
        let ring = RingPresentation::parse(&["x", "y"], fp(5), &[]).unwrap();
        let spec = TripleSpec::ring_only(ring);
        for e in 1..=2 {
            assert!(sharply_fpure(&spec, e).unwrap().holds());
        }
        let one = Polynomial::one(fp(5), 2);
        assert!(strongly_fregular(&spec, &one, 1).unwrap().is_certified());
        assert_eq!(splitting_oracle(&spec, 1, None).unwrap(), OracleVerdict::Holds);
    }

    #[test]
    fn tampered_witness_rejected() {
        let spec = hypersurface(&["x", "y", "z"], "x^3 + y^3 + z^3", 7);
        let FPurity::Holds(mut w) = sharply_fpure(&spec, 1).unwrap() else { panic!() };
        w.coefficient = fp(7).from_i64(5);
        assert!(!check_witness(&spec, &w).unwrap());
    }

    #[test]
    fn multisets_enumerated_once() {
        let mut seen = Vec::new();
        let r: Option<()> = for_each_multiset(3, 2, &mut |v| {
            seen.push(v.to_vec());
            Ok(None)
        })
        .unwrap();
        assert!(r.is_none());
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![2, 0, 0]);
    }
}
