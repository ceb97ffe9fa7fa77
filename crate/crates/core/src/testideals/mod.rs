//! Test ideals of regular ambient rings as sums of images of `p^{-e}`-linear
//! maps, and their limiting relative versions over a base.

mod decompose;
mod relative;

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fcriteria::{ceil_mul, DivisorData, RingPresentation};
use crate::frobenius::{frobenius_root_partial, raise_level, FrobeniusPower};
use crate::groebner::Ideal;
use crate::poly::Polynomial;

pub use decompose::{mu, skoda_holds, sum_decomposition_check, SumDecomposition};
pub use relative::{
    base_change_check, fiber_compare, stabilization_scan, tau_relative, BaseChange, FiberVerdict, RelativeSetup,
};

/// `γ(F^e_* r) = Tr(F^e_*(u r))`: a map `N^{1/q} -> R` with `N` trivialised,
/// given by its multiplier against the trace generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLinearMap {
    pub q: FrobeniusPower,
    pub u: Polynomial,
}

impl PLinearMap {
    pub fn new(q: FrobeniusPower, u: Polynomial) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::Invalid("the multiplier of a p^-e-linear map must be nonzero".into()));
        }
        if u.domain().characteristic() != q.p() {
            return Err(Error::WrongCharacteristic);
        }
        Ok(PLinearMap { q, u })
    }

    /// The multiplier of `γ^i`, `u^{1 + q + ... + q^{i-1}}`.
    pub fn iterate_multiplier(&self, i: u32) -> Polynomial {
        let mut exp = 0u64;
        let mut pw = 1u64;
        for _ in 0..i {
            exp += pw;
            pw *= self.q.q();
        }
        self.u.pow(exp)
    }
}

/// A truncated test ideal sum.
#[derive(Clone, Debug)]
pub struct TauResult {
    pub ideal: Ideal,
    pub truncation_level: u32,
    pub stabilized: bool,
    pub stabilization_level: Option<u32>,
    /// Stabilization is backed by the persistence theorem rather than only
    /// observed.
    pub guaranteed: bool,
}

// the data entering the summands: multiplier, ideals with exponents, I
#[derive(Clone, Debug)]
pub(crate) struct SumData {
    pub q: FrobeniusPower,
    pub u: Polynomial,
    pub base: Vec<usize>,
    pub fiber: Vec<usize>,
    pub ideals: Vec<(Ideal, BigRational)>,
    pub i: Ideal,
}

impl SumData {
    /// `i`-th summand: the `q^i`-th root of `u^{(i)} Π a_j^{⌈q^i λ_j⌉} I`,
    /// taken in the fiber variables, as an ideal of `B_i`.
    pub fn summand(&self, i: u32) -> Result<Ideal> {
        let qi = self.q.q().checked_pow(i).ok_or_else(|| Error::Invalid("level too large".into()))?;
        let mut j = self.i.clone();
        for (a, lambda) in &self.ideals {
            if a.generators().iter().any(|g| g.is_constant()) {
                continue;
            }
            j = j.product(&a.power(ceil_mul(lambda, qi)))?;
        }
        // root_{q^i}(u^{(i)} J) = root_q(u root_{q^{i-1}}(u^{(i-1)} J))
        for k in 0..i {
            let u = raise_level(&self.u, &self.base, self.q, 0, k)?;
            j = frobenius_root_partial(&j.scale(&u), self.q, &self.fiber)?;
            j = tidy(j)?;
        }
        Ok(j)
    }

    /// `Σ_{i ≤ n} S_i B_n`.
    pub fn partial_sum(&self, n: u32) -> Result<Ideal> {
        let mut acc = Ideal::zero(self.i.domain(), self.i.nvars());
        for i in 0..=n {
            let s = self.summand(i)?;
            acc = acc.sum(&self.raise(&s, i, n)?)?;
            acc = tidy(acc)?;
        }
        Ok(acc)
    }

    pub fn raise(&self, j: &Ideal, from: u32, to: u32) -> Result<Ideal> {
        let gens = j
            .generators()
            .iter()
            .map(|g| raise_level(g, &self.base, self.q, from, to))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(j.domain(), j.nvars(), gens))
    }

    /// `(q-1)λ` integral and `λ > μ(a) - 1` for every ideal.
    pub fn persistence_hypotheses(&self) -> Result<bool> {
        let qm1 = BigRational::from_integer(BigInt::from(self.q.q() - 1));
        for (a, lambda) in &self.ideals {
            if !(lambda * &qm1).is_integer() {
                return Ok(false);
            }
            let bound = BigRational::from_integer(BigInt::from(mu(a)? as u64)) - BigRational::one();
            if *lambda <= bound {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

// replaces a long generating set by a reduced basis when that is shorter
pub(crate) fn tidy(j: Ideal) -> Result<Ideal> {
    if j.generators().len() <= 12 || j.generators().iter().all(|g| g.num_terms() == 1) {
        return Ok(j);
    }
    let m = j.minimized()?;
    Ok(if m.generators().len() < j.generators().len() { m } else { j })
}

fn check_regular(ring: &RingPresentation) -> Result<()> {
    if !ring.is_regular() {
        return Err(Error::NonRegularAmbient);
    }
    if ring.characteristic() == 0 {
        return Err(Error::WrongCharacteristic);
    }
    Ok(())
}

// ascending partial sums until T_{n-1} = T_n and S_{n+1} ⊆ T_n
pub(crate) fn absolute_sum(data: &SumData, n_max: u32) -> Result<TauResult> {
    let guaranteed = data.persistence_hypotheses()?;
    let mut acc = data.summand(0)?;
    let mut prev_equal = false;
    for n in 1..=n_max {
        let s = data.summand(n)?;
        let grew = !acc.contains_ideal(&s)?;
        if !grew && prev_equal {
            return Ok(TauResult {
                ideal: acc,
                truncation_level: n,
                stabilized: true,
                stabilization_level: Some(n - 2),
                guaranteed,
            });
        }
        if grew {
            acc = tidy(acc.sum(&s)?)?;
        }
        prev_equal = !grew;
        if acc.is_unit()? {
            // nothing can be added to the unit ideal
            return Ok(TauResult {
                ideal: Ideal::unit(acc.domain(), acc.nvars()),
                truncation_level: n,
                stabilized: true,
                stabilization_level: Some(n),
                guaranteed: true,
            });
        }
    }
    if acc.is_unit()? {
        return Ok(TauResult {
            ideal: Ideal::unit(acc.domain(), acc.nvars()),
            truncation_level: 0,
            stabilized: true,
            stabilization_level: Some(0),
            guaranteed: true,
        });
    }
    Ok(TauResult { ideal: acc, truncation_level: n_max, stabilized: false, stabilization_level: None, guaranteed })
}

/// `τ(X, γI, a^λ) = Σ_i γ^i((a^{⌈q^i λ⌉} I N^{(i)})^{1/q^i})`, truncated at
/// `n_max`, on a polynomial ring.
pub fn tau_absolute(
    ring: &RingPresentation,
    gamma: &PLinearMap,
    i: &Ideal,
    a: &Ideal,
    lambda: &BigRational,
    n_max: u32,
) -> Result<TauResult> {
    tau_absolute_mixed(ring, gamma, i, &[(a.clone(), lambda.clone())], n_max)
}

/// Same with a product `Π a_j^{λ_j}`.
pub fn tau_absolute_mixed(
    ring: &RingPresentation,
    gamma: &PLinearMap,
    i: &Ideal,
    ideals: &[(Ideal, BigRational)],
    n_max: u32,
) -> Result<TauResult> {
    check_regular(ring)?;
    if gamma.q.p() != ring.characteristic() {
        return Err(Error::WrongCharacteristic);
    }
    if i.is_zero() || ideals.iter().any(|(a, _)| a.is_zero()) {
        return Err(Error::Invalid("I and a must be nonzero".into()));
    }
    if ideals.iter().any(|(_, l)| l <= &BigRational::zero()) {
        return Err(Error::Invalid("lambda must be positive".into()));
    }
    let data = SumData {
        q: gamma.q,
        u: gamma.u.clone(),
        base: Vec::new(),
        fiber: (0..ring.nvars()).collect(),
        ideals: ideals.to_vec(),
        i: i.clone(),
    };
    absolute_sum(&data, n_max)
}

/// Smallest `e ≥ 1` with `(p^e - 1) c` integral for every `c`.
pub fn frobenius_exponent_for(p: u64, coefficients: &[BigRational]) -> Result<FrobeniusPower> {
    let mut den = BigInt::one();
    for c in coefficients {
        den = den.lcm(c.denom());
    }
    let pb = BigInt::from(p);
    if (&den % &pb).is_zero() {
        return Err(Error::NoValidFrobeniusPower(format!("{} divides the index {}", p, den)));
    }
    let den_u = den.to_u64().ok_or_else(|| Error::NoValidFrobeniusPower(format!("index {} too large", den)))?;
    let mut e = 1u32;
    let mut r = p % den_u.max(1);
    loop {
        if den_u == 1 || r == 1 % den_u {
            return FrobeniusPower::new(p, e).map_err(|_| {
                Error::NoValidFrobeniusPower(format!("the order of {} modulo {} is too large", p, den_u))
            });
        }
        e += 1;
        if p.checked_pow(e).is_none_or(|v| v > u32::MAX as u64) {
            return Err(Error::NoValidFrobeniusPower(format!("the order of {} modulo {} is too large", p, den_u)));
        }
        r = (r as u128 * p as u128 % den_u as u128) as u64;
    }
}

/// `(q, u, I)` for `Δ = Σ c_i div(g_i)` with `(q-1)Δ` integral: the map
/// `γ = Tr(F^e_*(Π g_i^{c_i(q-1)} ·))` and `I = (Π g_i^{⌈c_i⌉}) ⊆ τ(X, Δ)`.
pub fn pair_map(ring: &RingPresentation, delta: &DivisorData) -> Result<(PLinearMap, Ideal)> {
    check_regular(ring)?;
    delta.validate(ring)?;
    let p = ring.characteristic();
    let coeffs: Vec<BigRational> = delta.support().map(|c| c.c.clone()).collect();
    let q = frobenius_exponent_for(p, &coeffs)?;
    let mut u = Polynomial::one(ring.domain(), ring.nvars());
    let mut g = Polynomial::one(ring.domain(), ring.nvars());
    for comp in delta.support() {
        u = &u * &comp.g.pow(ceil_mul(&comp.c, q.q() - 1));
        g = &g * &comp.g.pow(ceil_mul(&comp.c, 1));
    }
    Ok((PLinearMap::new(q, u)?, Ideal::principal(g)))
}

/// `τ(X, Δ, a^λ)` through the map attached to `Δ`.
pub fn tau_pair_divisor(
    ring: &RingPresentation,
    delta: &DivisorData,
    a: &Ideal,
    lambda: &BigRational,
    n_max: u32,
) -> Result<TauResult> {
    let (gamma, i) = pair_map(ring, delta)?;
    tau_absolute(ring, &gamma, &i, a, lambda, n_max)
}

/// `τ(X, Δ, Π a_j^{λ_j})` through the map attached to `Δ`.
pub fn tau_pair_mixed(
    ring: &RingPresentation,
    delta: &DivisorData,
    ideals: &[(Ideal, BigRational)],
    n_max: u32,
) -> Result<TauResult> {
    let (gamma, i) = pair_map(ring, delta)?;
    tau_absolute_mixed(ring, &gamma, &i, ideals, n_max)
}

/// `(Π g_i^{⌈c_i q^e⌉} a^{⌈λ q^e⌉})^{[1/q^e]}`, which equals `τ(X, Δ, a^λ)`
/// for `e` large.
pub fn tau_by_single_root(
    ring: &RingPresentation,
    delta: &DivisorData,
    a: &Ideal,
    lambda: &BigRational,
    q: FrobeniusPower,
) -> Result<Ideal> {
    check_regular(ring)?;
    let mut f = Polynomial::one(ring.domain(), ring.nvars());
    for comp in delta.support() {
        f = &f * &comp.g.pow(ceil_mul(&comp.c, q.q()));
    }
    let j = if a.generators().iter().any(|g| g.is_constant()) {
        Ideal::principal(f)
    } else {
        a.power(ceil_mul(lambda, q.q())).scale(&f)
    };
    let vars: Vec<usize> = (0..ring.nvars()).collect();
    frobenius_root_partial(&j, q, &vars)
}
