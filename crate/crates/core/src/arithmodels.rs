//! Models over `Z[1/n]` of data defined over Q, their reductions modulo
//! primes, and base changes to `k^{1/p^n}`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fcriteria::{strongly_fregular, DivisorData, Regularity, RingPresentation, TripleSpec};
use crate::frobenius::{raise_level, FrobeniusPower};
use crate::groebner::Ideal;
use crate::poly::{is_prime, CoefficientDomain, Polynomial, Scalar};

/// Integral model of a Q-triple, valid after inverting `excluded_primes`.
#[derive(Clone, Debug)]
pub struct ArithmeticModel {
    /// Relations with coprime integer coefficients, kept in a Q-polynomial.
    pub integral_generators: Vec<Polynomial>,
    pub delta: DivisorData,
    pub a: Vec<Polynomial>,
    pub excluded_primes: BTreeSet<u64>,
    pub origin: TripleSpec,
}

/// Prime factors of a positive integer by trial division.
pub fn prime_factors(n: &BigInt) -> Result<BTreeSet<u64>> {
    let mut out = BTreeSet::new();
    let mut n = n.abs();
    if n.is_zero() {
        return Ok(out);
    }
    let mut d = 2u64;
    while BigInt::from(d) * BigInt::from(d) <= n {
        if d > 10_000_000 {
            return Err(Error::Invalid(format!("cannot factor the denominator {}", n)));
        }
        let bd = BigInt::from(d);
        if (&n % &bd).is_zero() {
            out.insert(d);
            while (&n % &bd).is_zero() {
                n /= &bd;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        let v = n.to_u64().ok_or_else(|| Error::Invalid(format!("prime factor {} too large", n)))?;
        out.insert(v);
    }
    Ok(out)
}

// LCM of the denominators times f, divided by the content
fn integral_part(f: &Polynomial, excluded: &mut BTreeSet<u64>) -> Result<Polynomial> {
    if f.domain() != CoefficientDomain::Rationals {
        return Err(Error::DomainMismatch);
    }
    let mut lcm = BigInt::one();
    for (_, c) in f.terms() {
        let r = c.as_rational().expect("rational coefficient");
        lcm = lcm.lcm(r.denom());
    }
    excluded.extend(prime_factors(&lcm)?);
    let ints: Vec<BigInt> = f
        .terms()
        .map(|(_, c)| {
            let r = c.as_rational().expect("rational coefficient");
            r.numer() * (&lcm / r.denom())
        })
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    let content = if content.is_zero() { BigInt::one() } else { content };
    Ok(Polynomial::from_terms(
        f.domain(),
        f.nvars(),
        f.terms()
            .zip(ints)
            .map(|((m, _), v)| (m.clone(), Scalar::Rational((v / &content).into()))),
    ))
}

/// Clears denominators generator by generator and removes the content,
/// a rescaling by a unit of Q.
pub fn spread_out(spec: &TripleSpec, user_excluded: &[u64]) -> Result<ArithmeticModel> {
    if spec.ring.domain() != CoefficientDomain::Rationals {
        return Err(Error::DomainMismatch);
    }
    let mut excluded: BTreeSet<u64> = BTreeSet::new();
    for &p in user_excluded {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        excluded.insert(p);
    }
    let gens = spec
        .ring
        .relations()
        .generators()
        .iter()
        .map(|g| integral_part(g, &mut excluded))
        .collect::<Result<Vec<_>>>()?;
    let delta = spec.delta.map(|g| integral_part(g, &mut excluded))?;
    let a = spec
        .a
        .generators()
        .iter()
        .map(|g| integral_part(g, &mut excluded))
        .collect::<Result<Vec<_>>>()?;
    Ok(ArithmeticModel { integral_generators: gens, delta, a, excluded_primes: excluded, origin: spec.clone() })
}

/// Reduction of the model modulo `p`.
pub fn reduce_mod_p(model: &ArithmeticModel, p: u64) -> Result<TripleSpec> {
    if model.excluded_primes.contains(&p) {
        return Err(Error::ExcludedPrime(p));
    }
    let target = CoefficientDomain::prime_field(p)?;
    let ring0 = &model.origin.ring;
    let mut rels = Vec::new();
    for g in &model.integral_generators {
        let r = g.reduce_mod(target)?;
        if r.is_zero() {
            return Err(Error::Degenerate(p, format!("relation {} vanishes", ring0.format(g))));
        }
        rels.push(r);
    }
    let ring = RingPresentation::with_base(
        ring0.variables().to_vec(),
        target,
        rels,
        ring0.base_variables().to_vec(),
    )
    .map_err(|e| Error::Degenerate(p, format!("{}", e)))?;
    let delta = model.delta.map(|g| g.reduce_mod(target))?;
    let a_gens = model.a.iter().map(|g| g.reduce_mod(target)).collect::<Result<Vec<_>>>()?;
    let a = Ideal::new(target, ring.nvars(), a_gens);
    TripleSpec::new(ring, delta, a, model.origin.lambda.clone()).map_err(|e| Error::Degenerate(p, format!("{}", e)))
}

/// The `count` smallest primes not excluded by the model.
pub fn suggest_primes(model: &ArithmeticModel, count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = 2u64;
    while out.len() < count {
        if is_prime(n) && !model.excluded_primes.contains(&n) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// Base change to `k^{1/p^n}` for `k = F_p(t_1, ..)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PerfectionLevel {
    pub n: u32,
}

/// Outcome of a geometric check: the level used and the regularity verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricRegularity {
    pub level: PerfectionLevel,
    pub result: Regularity,
}

/// The triple over `k^{1/p^n}`, presented by `t_j -> s_j^{p^n}`.
pub fn perfection_base_change(spec: &TripleSpec, level: PerfectionLevel) -> Result<TripleSpec> {
    let p = spec.ring.characteristic();
    if p == 0 {
        return Err(Error::WrongCharacteristic);
    }
    let q = FrobeniusPower::new(p, 1)?;
    let base = spec.ring.base_variables().to_vec();
    let raise = |f: &Polynomial| raise_level(f, &base, q, 0, level.n);
    let rels = spec.ring.relations().generators().iter().map(raise).collect::<Result<Vec<_>>>()?;
    let names = spec
        .ring
        .variables()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if level.n > 0 && base.contains(&i) {
                crate::frobenius::level_name(v, level.n)
            } else {
                v.clone()
            }
        })
        .collect();
    let ring = RingPresentation::with_base(names, spec.ring.domain(), rels, base.clone())?;
    spec.map_data(ring, raise)
}

/// Strong F-regularity of the base change to `k^{1/p^n}`, certifying
/// geometric strong F-regularity.
pub fn geometric_sfr_check(
    spec: &TripleSpec,
    level: PerfectionLevel,
    c: &Polynomial,
    e_max: u32,
) -> Result<GeometricRegularity> {
    let ext = perfection_base_change(spec, level)?;
    let base = spec.ring.base_variables().to_vec();
    let q = FrobeniusPower::new(spec.ring.characteristic(), 1)?;
    let c = raise_level(c, &base, q, 0, level.n)?;
    let result = strongly_fregular(&ext, &c, e_max)?;
    Ok(GeometricRegularity { level, result })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;
    use alloc::vec;
    use num_rational::BigRational;

    fn q_ring(vars: &[&str], rels: &[&str]) -> RingPresentation {
        RingPresentation::parse(vars, CoefficientDomain::Rationals, rels).unwrap()
    }

    fn fmt(r: &RingPresentation, f: &Polynomial) -> String {
        r.format(f)
    }

    #[test]
    fn clears_denominators() {
        let r = q_ring(&["x", "y"], &["x^2 + 1/2*y^3"]);
        let m = spread_out(&TripleSpec::ring_only(r.clone()), &[]).unwrap();
        assert_eq!(fmt(&r, &m.integral_generators[0]), "y^3 + 2*x^2");
        assert_eq!(m.excluded_primes.iter().copied().collect::<Vec<_>>(), vec![2]);
        let r2 = q_ring(&["x", "y"], &["1/3*x + 1/5*y"]);
        let m2 = spread_out(&TripleSpec::ring_only(r2.clone()), &[]).unwrap();
        assert_eq!(fmt(&r2, &m2.integral_generators[0]), "5*x + 3*y");
        assert_eq!(m2.excluded_primes.iter().copied().collect::<Vec<_>>(), vec![3, 5]);
        let m3 = spread_out(&TripleSpec::ring_only(q_ring(&["x"], &["x^2"])), &[7]).unwrap();
        assert_eq!(m3.excluded_primes.iter().copied().collect::<Vec<_>>(), vec![7]);
    }

    #[test]
    fn reductions() {
        let r = q_ring(&["x", "y"], &["x^2 + 1/2*y^3"]);
        let m = spread_out(&TripleSpec::ring_only(r), &[]).unwrap();
        let s = reduce_mod_p(&m, 5).unwrap();
        assert_eq!(s.ring.format(&s.ring.relations().generators()[0]), "y^3 + 2*x^2");
        assert_eq!(reduce_mod_p(&m, 2).unwrap_err(), Error::ExcludedPrime(2));
        assert_eq!(suggest_primes(&m, 3), vec![3, 5, 7]);
    }

    #[test]
    fn degenerate_reduction() {
        let r = q_ring(&["x", "y"], &["x - 3*y^2"]);
        let g = r.parse_element("x").unwrap();
        let spec = TripleSpec::pair(r, DivisorData::single(g, BigRational::one())).unwrap();
        let m = spread_out(&spec, &[]).unwrap();
        assert!(m.excluded_primes.is_empty());
        assert!(reduce_mod_p(&m, 5).is_ok());
        assert!(matches!(reduce_mod_p(&m, 3), Err(Error::Degenerate(3, _))));
        let factors: Vec<u64> = prime_factors(&BigInt::from(360)).unwrap().into_iter().collect();
        assert_eq!(factors, vec![2, 3, 5]);
    }

    #[test]
    fn integral_inputs_round_trip() {
        let r = q_ring(&["x", "y", "z"], &["x^3 + 2*y^3 - 5*z^3"]);
        let m = spread_out(&TripleSpec::ring_only(r.clone()), &[]).unwrap();
        for p in [3u64, 7, 11] {
            let s = reduce_mod_p(&m, p).unwrap();
            let direct = r.relations().generators()[0].reduce_mod(s.ring.domain()).unwrap();
            assert_eq!(s.ring.relations().generators()[0], direct);
        }
    }

    #[test]
    fn quadric_over_function_field() {
        let f5 = CoefficientDomain::prime_field(5).unwrap();
        let r = RingPresentation::parse(&["t", "x", "y", "z"], f5, &["x^2 + y^2 + z^2"])
            .unwrap()
            .with_base_names(&["t"])
            .unwrap();
        let spec = TripleSpec::ring_only(r.clone());
        let c = r.parse_element("x").unwrap();
        for n in 0..=1 {
            let g = geometric_sfr_check(&spec, PerfectionLevel { n }, &c, 1).unwrap();
            assert!(g.result.is_certified());
        }
        let twisted = RingPresentation::parse(&["t", "x", "y", "z"], f5, &["x^2 + t*y^2 + z^2"])
            .unwrap()
            .with_base_names(&["t"])
            .unwrap();
        let ext = perfection_base_change(&TripleSpec::ring_only(twisted), PerfectionLevel { n: 2 }).unwrap();
        assert_eq!(ext.ring.format(&ext.ring.relations().generators()[0]), "t_2^25*y^2 + x^2 + z^2");
    }
}
