use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::poly::{parse_polynomial, CoefficientDomain, Polynomial};

/// `R = P / I` with `P` a polynomial ring, a distinguished point and an
/// optional set of base variables.
///
/// Base variables are treated as transcendentals of the coefficient field
/// (criteria) or as coordinates of the base `A` (relative test ideals). The
/// distinguished maximal ideal is generated by the remaining variables.
#[derive(Clone, Debug)]
pub struct RingPresentation {
    variables: Vec<String>,
    domain: CoefficientDomain,
    relations: Ideal,
    base_variables: Vec<usize>,
}

impl RingPresentation {
    pub fn new(variables: Vec<String>, domain: CoefficientDomain, relations: Vec<Polynomial>) -> Result<Self> {
        Self::with_base(variables, domain, relations, Vec::new())
    }

    pub fn with_base(
        variables: Vec<String>,
        domain: CoefficientDomain,
        relations: Vec<Polynomial>,
        base_variables: Vec<usize>,
    ) -> Result<Self> {
        let n = variables.len();
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(Error::Invalid(format!("duplicate variable `{}`", v)));
            }
        }
        let mut base_variables = base_variables;
        base_variables.sort_unstable();
        base_variables.dedup();
        if base_variables.iter().any(|&b| b >= n) {
            return Err(Error::Invalid("base variable index out of range".into()));
        }
        for r in &relations {
            if r.domain() != domain || r.nvars() != n {
                return Err(Error::DomainMismatch);
            }
        }
        let ring = RingPresentation {
            variables,
            domain,
            relations: Ideal::new(domain, n, relations),
            base_variables,
        };
        let point = ring.point_variables();
        for r in ring.relations.generators() {
            if r.terms().any(|(m, _)| point.iter().all(|&v| m.exponents()[v] == 0)) {
                if point.iter().all(|&v| !r.involves(v)) {
                    return Err(Error::NotOverBase(r.format_with(&ring.variables)));
                }
                return Err(Error::Invalid(format!(
                    "relation {} does not vanish at the distinguished point",
                    r.format_with(&ring.variables)
                )));
            }
        }
        Ok(ring)
    }

    pub fn polynomial_ring(variables: Vec<String>, domain: CoefficientDomain) -> Self {
        Self::new(variables, domain, Vec::new()).expect("no relations")
    }

    /// Convenience constructor from textual relations.
    pub fn parse(variables: &[&str], domain: CoefficientDomain, relations: &[&str]) -> Result<Self> {
        let vars: Vec<String> = variables.iter().map(|s| s.to_string()).collect();
        let rels = relations
            .iter()
            .map(|r| parse_polynomial(r, &vars, domain))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vars, domain, rels)
    }

    pub fn with_base_names(self, names: &[&str]) -> Result<Self> {
        let mut base = Vec::new();
        for n in names {
            match self.variables.iter().position(|v| v == n) {
                Some(i) => base.push(i),
                None => return Err(Error::UnknownIdentifier(n.to_string())),
            }
        }
        Self::with_base(self.variables, self.domain, self.relations.generators().to_vec(), base)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.domain
    }

    pub fn characteristic(&self) -> u64 {
        self.domain.characteristic()
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }

    pub fn is_regular(&self) -> bool {
        self.relations.is_zero()
    }

    pub fn base_variables(&self) -> &[usize] {
        &self.base_variables
    }

    /// Variables generating the distinguished maximal ideal.
    pub fn point_variables(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|i| !self.base_variables.contains(i)).collect()
    }

    pub fn point_ideal(&self) -> Ideal {
        Ideal::variables(self.domain, self.nvars(), &self.point_variables())
    }

    pub fn parse_element(&self, text: &str) -> Result<Polynomial> {
        parse_polynomial(text, &self.variables, self.domain)
    }

    pub fn format(&self, f: &Polynomial) -> String {
        f.format_with(&self.variables)
    }

    /// Same presentation with the relations mapped into `F_p`.
    pub fn reduce_mod(&self, p: u64) -> Result<RingPresentation> {
        let target = CoefficientDomain::prime_field(p)?;
        let rels = self
            .relations
            .generators()
            .iter()
            .map(|r| r.reduce_mod(target))
            .collect::<Result<Vec<_>>>()?;
        RingPresentation::with_base(self.variables.clone(), target, rels, self.base_variables.clone())
    }

    /// Adds relations, e.g. to pass to a hypersurface section.
    pub fn quotient(&self, extra: &[Polynomial]) -> Result<RingPresentation> {
        let mut rels = self.relations.generators().to_vec();
        rels.extend(extra.iter().cloned());
        RingPresentation::with_base(self.variables.clone(), self.domain, rels, self.base_variables.clone())
    }

    pub fn dimension(&self) -> Result<usize> {
        self.relations.dimension()
    }

    /// Number of relations equals the codimension.
    pub fn is_complete_intersection(&self) -> Result<bool> {
        let codim = self.nvars() - self.dimension()?;
        Ok(self.relations.generators().len() <= codim)
    }
}

/// A component `c * div(g)` of an effective Q-divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorComponent {
    pub g: Polynomial,
    pub c: BigRational,
}

/// `Δ = Σ c_i div(g_i)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DivisorData {
    pub components: Vec<DivisorComponent>,
}

impl DivisorData {
    pub fn zero() -> Self {
        DivisorData { components: Vec::new() }
    }

    pub fn new(components: Vec<(Polynomial, BigRational)>) -> Self {
        DivisorData {
            components: components
                .into_iter()
                .map(|(g, c)| DivisorComponent { g, c })
                .collect(),
        }
    }

    pub fn single(g: Polynomial, c: BigRational) -> Self {
        DivisorData::new(alloc::vec![(g, c)])
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|d| d.c.is_zero())
    }

    /// Components with a positive coefficient.
    pub fn support(&self) -> impl Iterator<Item = &DivisorComponent> {
        self.components.iter().filter(|d| d.c.is_positive())
    }

    pub fn validate(&self, ring: &RingPresentation) -> Result<()> {
        for d in &self.components {
            if d.c.is_negative() {
                return Err(Error::Invalid("divisor coefficients must be non-negative".into()));
            }
            if d.g.domain() != ring.domain() || d.g.nvars() != ring.nvars() {
                return Err(Error::DomainMismatch);
            }
            if ring.relations().contains(&d.g)? {
                return Err(Error::Invalid(format!(
                    "divisor component {} vanishes in the ring",
                    ring.format(&d.g)
                )));
            }
        }
        Ok(())
    }

    pub fn map<F: FnMut(&Polynomial) -> Result<Polynomial>>(&self, mut f: F) -> Result<DivisorData> {
        let mut out = Vec::new();
        for d in &self.components {
            out.push(DivisorComponent { g: f(&d.g)?, c: d.c.clone() });
        }
        Ok(DivisorData { components: out })
    }

    /// Denominators of all coefficients.
    pub fn denominators(&self) -> Vec<num_bigint::BigInt> {
        self.components.iter().map(|d| d.c.denom().clone()).collect()
    }
}

/// The triple `(R, Δ, a^λ)`.
#[derive(Clone, Debug)]
pub struct TripleSpec {
    pub ring: RingPresentation,
    pub delta: DivisorData,
    pub a: Ideal,
    pub lambda: BigRational,
}

impl TripleSpec {
    pub fn new(ring: RingPresentation, delta: DivisorData, a: Ideal, lambda: BigRational) -> Result<Self> {
        if !lambda.is_positive() {
            return Err(Error::Invalid("lambda must be positive".into()));
        }
        if a.domain() != ring.domain() || a.nvars() != ring.nvars() {
            return Err(Error::DomainMismatch);
        }
        if a.is_zero() || ring.relations().contains_ideal(&a)? {
            return Err(Error::Invalid("the ideal a is zero in the ring".into()));
        }
        delta.validate(&ring)?;
        Ok(TripleSpec { ring, delta, a, lambda })
    }

    /// `(R, 0, R^1)`.
    pub fn ring_only(ring: RingPresentation) -> Self {
        let a = Ideal::unit(ring.domain(), ring.nvars());
        TripleSpec { ring, delta: DivisorData::zero(), a, lambda: BigRational::one() }
    }

    pub fn pair(ring: RingPresentation, delta: DivisorData) -> Result<Self> {
        let a = Ideal::unit(ring.domain(), ring.nvars());
        TripleSpec::new(ring, delta, a, BigRational::one())
    }

    pub fn a_is_unit(&self) -> bool {
        self.a.generators().iter().any(|g| g.is_constant())
    }

    /// Applies a coefficient or variable map to every piece of data.
    pub fn map_data<F: Fn(&Polynomial) -> Result<Polynomial>>(
        &self,
        ring: RingPresentation,
        f: F,
    ) -> Result<TripleSpec> {
        let delta = self.delta.map(&f)?;
        let a_gens = self
            .a
            .generators()
            .iter()
            .map(&f)
            .collect::<Result<Vec<_>>>()?;
        let a = Ideal::new(ring.domain(), ring.nvars(), a_gens);
        TripleSpec::new(ring, delta, a, self.lambda.clone())
    }
}
