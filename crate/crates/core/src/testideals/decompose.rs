//! Skoda-type identities and the decomposition of mixed test ideals into
//! test ideals of pairs.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{frobenius_exponent_for, tau_pair_divisor, tau_pair_mixed, RelativeSetup};
use crate::error::{Error, Result};
use crate::fcriteria::{ceil_mul, DivisorComponent, DivisorData, RingPresentation};
use crate::groebner::{power_generators, Ideal};
use crate::poly::Polynomial;

/// Number of generators of `a`: exact for monomial ideals and the unit
/// ideal, the size of the given generating set otherwise.
pub fn mu(a: &Ideal) -> Result<usize> {
    let gens = a.generators();
    if gens.iter().any(|g| g.is_constant()) {
        return Ok(1);
    }
    if gens.iter().all(|g| g.num_terms() == 1) {
        return Ok(power_generators(gens, 1).len());
    }
    Ok(gens.len())
}

/// `τ_n(a^λ) a = τ_n(a^{λ+1})` in `B_n`.
pub fn skoda_holds(setup: &RelativeSetup, n: u32) -> Result<bool> {
    let left = super::tau_relative(setup, n)?.ideal.product(&setup.a_in_level(n)?)?;
    let shifted = setup.with_lambda(&setup.lambda + BigRational::one())?;
    let right = super::tau_relative(&shifted, n)?.ideal;
    left.equals(&right)
}

/// Outcome of comparing `τ(Δ, Π a_i^{λ_i})` with the sum of the sampled
/// `τ(Δ + Σ div(f_i)/m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumDecomposition {
    /// Every sampled summand lies in the mixed test ideal; always expected.
    pub summands_contained: bool,
    /// The mixed test ideal lies in the sum of the samples; may fail when the
    /// sample is too small.
    pub covered: bool,
    pub samples: usize,
}

// generator products of a^k, their sum, and the sum of pure powers
fn candidates(a: &Ideal, k: u64) -> Vec<Polynomial> {
    let gens = a.generators();
    let mut out = power_generators(gens, k);
    if gens.len() > 1 && k > 0 {
        let total = out.iter().fold(Polynomial::zero(a.domain(), a.nvars()), |acc, g| &acc + g);
        let pure = gens.iter().fold(Polynomial::zero(a.domain(), a.nvars()), |acc, g| &acc + &g.pow(k));
        for f in [total, pure] {
            if !f.is_zero() && !out.contains(&f) {
                out.push(f);
            }
        }
    }
    out
}

const MAX_Q: u64 = 1 << 10;

/// Checks `τ(X, Δ, Π a_i^{λ_i}) = Σ τ(X, Δ + Σ div(f_i)/m)` over
/// `m ≤ max_m` (with a small Frobenius exponent available) and sampled
/// `f_i ∈ a_i^{⌈m λ_i⌉}`.
pub fn sum_decomposition_check(
    ring: &RingPresentation,
    delta: &DivisorData,
    ideals: &[(Ideal, BigRational)],
    max_m: u64,
    n_max: u32,
) -> Result<SumDecomposition> {
    let p = ring.characteristic();
    let left = tau_pair_mixed(ring, delta, ideals, n_max)?.ideal;
    let mut right = Ideal::zero(ring.domain(), ring.nvars());
    let mut contained = true;
    let mut samples = 0usize;
    for m in 1..=max_m {
        let coeff = BigRational::new(BigInt::one(), BigInt::from(m));
        let mut coeffs: Vec<BigRational> = delta.support().map(|c| c.c.clone()).collect();
        coeffs.push(coeff.clone());
        match frobenius_exponent_for(p, &coeffs) {
            Ok(q) if q.q() <= MAX_Q => {}
            Ok(_) | Err(Error::NoValidFrobeniusPower(_)) => continue,
            Err(e) => return Err(e),
        }
        // one candidate list per ideal, combined along the diagonal
        let lists: Vec<Vec<Polynomial>> =
            ideals.iter().map(|(a, l)| candidates(a, ceil_mul(l, m))).collect();
        let width = lists.iter().map(|l| l.len()).max().unwrap_or(0);
        for k in 0..width {
            let mut d = delta.clone();
            for list in &lists {
                let f = &list[k % list.len()];
                if f.is_constant() {
                    continue;
                }
                d.components.push(DivisorComponent { g: f.clone(), c: coeff.clone() });
            }
            let unit = Ideal::unit(ring.domain(), ring.nvars());
            let s = tau_pair_divisor(ring, &d, &unit, &BigRational::one(), n_max)?.ideal;
            samples += 1;
            if !left.contains_ideal(&s)? {
                contained = false;
            }
            right = right.sum(&s)?;
        }
    }
    let covered = right.contains_ideal(&left)?;
    Ok(SumDecomposition { summands_contained: contained, covered, samples })
}
