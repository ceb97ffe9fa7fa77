//! Limiting relative test ideals `τ_n(X/V, φI, a^λ) ⊆ B_n`.
//!
//! An ideal of `B_n` is stored in the ambient variables, a base exponent
//! `k` standing for `t^{k/q^n}`.

use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

use super::{absolute_sum, pair_map, tidy, PLinearMap, SumData, TauResult};
use crate::error::{Error, Result};
use crate::fcriteria::{DivisorData, RingPresentation};
use crate::groebner::Ideal;
use crate::poly::Polynomial;

/// Data of a relative test ideal over `A = F_p[t..]`: the ambient ring
/// (base variables designated), `φ`, `I`, `a` and `λ`.
#[derive(Clone, Debug)]
pub struct RelativeSetup {
    pub ring: RingPresentation,
    pub phi: PLinearMap,
    pub i: Ideal,
    pub a: Ideal,
    pub lambda: BigRational,
}

impl RelativeSetup {
    pub fn new(ring: RingPresentation, phi: PLinearMap, i: Ideal, a: Ideal, lambda: BigRational) -> Result<Self> {
        if !ring.is_regular() {
            return Err(Error::NonRegularAmbient);
        }
        if ring.characteristic() != phi.q.p() {
            return Err(Error::WrongCharacteristic);
        }
        if i.is_zero() || a.is_zero() {
            return Err(Error::Invalid("I and a must be nonzero".into()));
        }
        if lambda <= BigRational::zero() {
            return Err(Error::Invalid("lambda must be positive".into()));
        }
        for f in i.generators().iter().chain(a.generators()).chain(core::iter::once(&phi.u)) {
            if f.domain() != ring.domain() || f.nvars() != ring.nvars() {
                return Err(Error::DomainMismatch);
            }
        }
        Ok(RelativeSetup { ring, phi, i, a, lambda })
    }

    /// The map attached to a divisor, with `I = (Π g_i^{⌈c_i⌉})`.
    pub fn from_divisor(ring: RingPresentation, delta: &DivisorData, a: Ideal, lambda: BigRational) -> Result<Self> {
        let (phi, i) = pair_map(&ring, delta)?;
        RelativeSetup::new(ring, phi, i, a, lambda)
    }

    pub(crate) fn data(&self) -> SumData {
        self.data_with(self.a.clone(), self.lambda.clone())
    }

    pub(crate) fn data_with(&self, a: Ideal, lambda: BigRational) -> SumData {
        SumData {
            q: self.phi.q,
            u: self.phi.u.clone(),
            base: self.ring.base_variables().to_vec(),
            fiber: self.ring.point_variables(),
            ideals: alloc::vec![(a, lambda)],
            i: self.i.clone(),
        }
    }

    /// Same setup with `λ` replaced.
    pub fn with_lambda(&self, lambda: BigRational) -> Result<Self> {
        RelativeSetup::new(self.ring.clone(), self.phi.clone(), self.i.clone(), self.a.clone(), lambda)
    }

    /// `a` extended to `B_n`.
    pub fn a_in_level(&self, n: u32) -> Result<Ideal> {
        self.data().raise(&self.a, 0, n)
    }

    /// Whether `λ > μ(a) - 1` and `(q-1)λ` is integral.
    pub fn persistence_hypotheses(&self) -> Result<bool> {
        self.data().persistence_hypotheses()
    }
}

/// `τ_n` as an ideal of `B_n`.
pub fn tau_relative(setup: &RelativeSetup, n: u32) -> Result<TauResult> {
    let data = setup.data();
    let ideal = data.partial_sum(n)?;
    let stable = if n == 0 {
        false
    } else {
        let prev = data.raise(&data.partial_sum(n - 1)?, n - 1, n)?;
        prev.contains_ideal(&ideal)?
    };
    Ok(TauResult {
        ideal,
        truncation_level: n,
        stabilized: stable,
        stabilization_level: if stable { Some(n) } else { None },
        guaranteed: stable && setup.persistence_hypotheses()?,
    })
}

/// First `n ≥ 1` with `τ_{n-1} B_n = τ_n`, scanning up to `n_max`.
pub fn stabilization_scan(setup: &RelativeSetup, n_max: u32) -> Result<TauResult> {
    let data = setup.data();
    let guaranteed = setup.persistence_hypotheses()?;
    let mut acc = data.summand(0)?;
    for n in 1..=n_max {
        let raised = data.raise(&acc, n - 1, n)?;
        let s = data.summand(n)?;
        if raised.contains_ideal(&s)? {
            return Ok(TauResult {
                ideal: raised,
                truncation_level: n,
                stabilized: true,
                stabilization_level: Some(n),
                guaranteed,
            });
        }
        acc = tidy(raised.sum(&s)?)?;
    }
    Ok(TauResult { ideal: acc, truncation_level: n_max, stabilized: false, stabilization_level: None, guaranteed })
}

/// A morphism `V' -> V` together with the induced map `R -> R'`: the image
/// of every ambient variable. Fiber variables must map to fiber variables
/// and base variables to polynomials over `F_p` in the new base variables.
#[derive(Clone, Debug)]
pub struct BaseChange {
    pub target: RingPresentation,
    pub images: Vec<Polynomial>,
}

impl BaseChange {
    fn validate(&self, source: &RingPresentation) -> Result<()> {
        if self.images.len() != source.nvars() {
            return Err(Error::DomainMismatch);
        }
        if self.target.domain() != source.domain() {
            return Err(Error::DomainMismatch);
        }
        let base = self.target.base_variables();
        let fiber = self.target.point_variables();
        for (v, img) in self.images.iter().enumerate() {
            if img.nvars() != self.target.nvars() {
                return Err(Error::DomainMismatch);
            }
            if source.base_variables().contains(&v) {
                if fiber.iter().any(|&w| img.involves(w)) {
                    return Err(Error::Invalid("a base variable must map into the new base".into()));
                }
            } else {
                let ok = is_variable(img)
                    && fiber.iter().any(|&w| img.involves(w))
                    && base.iter().all(|&w| !img.involves(w));
                if !ok {
                    return Err(Error::Invalid("a fiber variable must map to a fiber variable".into()));
                }
            }
        }
        Ok(())
    }

    // a level-n polynomial of R mapped to level n of R'; coefficients lie in
    // F_p, so h(t')^{1/q^n} = h(s'_n)
    fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        f.substitute(&self.images)
    }

    fn apply_ideal(&self, j: &Ideal) -> Result<Ideal> {
        let gens = j.generators().iter().map(|g| self.apply(g)).collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(self.target.domain(), self.target.nvars(), gens))
    }

    /// The pulled-back setup `(X', φ', I', a')`.
    pub fn pull_back(&self, setup: &RelativeSetup) -> Result<RelativeSetup> {
        self.validate(&setup.ring)?;
        let u = self.apply(&setup.phi.u)?;
        let i = self.apply_ideal(&setup.i)?;
        let a = self.apply_ideal(&setup.a)?;
        if u.is_zero() || i.is_zero() || a.is_zero() {
            return Err(Error::Degenerate(setup.ring.characteristic(), "data vanishes after base change".into()));
        }
        RelativeSetup::new(self.target.clone(), PLinearMap::new(setup.phi.q, u)?, i, a, setup.lambda.clone())
    }
}

fn is_variable(f: &Polynomial) -> bool {
    f.num_terms() == 1 && f.total_degree() == Some(1) && f.terms().all(|(_, c)| f.domain().is_one(c))
}

/// `τ_n(X'/V') = τ_n(X/V) B'_n`.
pub fn base_change_check(setup: &RelativeSetup, change: &BaseChange, n: u32) -> Result<bool> {
    let pulled = change.pull_back(setup)?;
    let left = tau_relative(&pulled, n)?.ideal;
    let right = change.apply_ideal(&tau_relative(setup, n)?.ideal)?;
    left.equals(&right)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberVerdict {
    Agree,
    Disagree,
    /// Some datum vanishes on the fiber.
    BadFiber,
}

/// Compares `τ_n` specialised at the `F_p`-point `t = α` with the absolute
/// test ideal of the fiber computed up to `fiber_n_max`.
pub fn fiber_compare(setup: &RelativeSetup, n: u32, point: &[u64], fiber_n_max: u32) -> Result<FiberVerdict> {
    let ring = &setup.ring;
    let base = ring.base_variables();
    if point.len() != base.len() {
        return Err(Error::Invalid("one value per base variable is required".into()));
    }
    let fiber = ring.point_variables();
    let names: Vec<_> = fiber.iter().map(|&v| ring.variables()[v].clone()).collect();
    let target = RingPresentation::polynomial_ring(names, ring.domain());
    let m = fiber.len();
    let images: Vec<Polynomial> = (0..ring.nvars())
        .map(|v| match base.iter().position(|&b| b == v) {
            Some(k) => Polynomial::constant(ring.domain(), m, ring.domain().from_i64(point[k] as i64)),
            None => {
                let slot = fiber.iter().position(|&w| w == v).expect("fiber variable");
                Polynomial::variable(ring.domain(), m, slot)
            }
        })
        .collect();
    let change = BaseChange { target: target.clone(), images };
    let pulled = match change.pull_back(setup) {
        Ok(p) => p,
        Err(Error::Degenerate(..)) => return Ok(FiberVerdict::BadFiber),
        Err(e) => return Err(e),
    };
    let specialised = change.apply_ideal(&tau_relative(setup, n)?.ideal)?;
    let absolute = absolute_sum(&pulled.data(), fiber_n_max)?;
    Ok(if specialised.equals(&absolute.ideal)? { FiberVerdict::Agree } else { FiberVerdict::Disagree })
}
