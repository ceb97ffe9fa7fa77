//! The JSON input format for a single job.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use fsing_core::certify::{JobSpec, Mode};
use fsing_core::fcriteria::{DivisorData, RingPresentation, TripleSpec};
use fsing_core::poly::parse_rational;
use fsing_core::{CoefficientDomain, Ideal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coefficient {
    Q,
    Fp,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaTerm {
    pub g: String,
    pub c: String,
}

/// A triple plus the optional mode-specific fields. Command-line flags take
/// precedence over the fields stored here.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub variables: Vec<String>,
    #[serde(default)]
    pub base_variables: Vec<String>,
    pub coefficient: Coefficient,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default)]
    pub delta: Vec<DeltaTerm>,
    /// Generators of `a`; empty means the unit ideal.
    #[serde(default)]
    pub a: Vec<String>,
    #[serde(default = "one")]
    pub lambda: String,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_max: Option<u32>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub assert_q_gorenstein: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_element: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section_test_element: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub excluded_primes: Vec<u64>,
}

fn one() -> String {
    "1".into()
}

impl InputFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| anyhow!("input parse error at line {}, column {}: {}", e.line(), e.column(), e))
    }

    pub fn domain(&self) -> Result<CoefficientDomain> {
        match (self.coefficient, self.p) {
            (Coefficient::Q, None) => Ok(CoefficientDomain::Rationals),
            (Coefficient::Q, Some(_)) => bail!("`p` is only meaningful for Fp input"),
            (Coefficient::Fp, Some(p)) => CoefficientDomain::prime_field(p).map_err(|e| anyhow!("{}", e)),
            (Coefficient::Fp, None) => bail!("Fp input needs `p`"),
        }
    }

    pub fn ring(&self) -> Result<RingPresentation> {
        let domain = self.domain()?;
        let plain = RingPresentation::polynomial_ring(self.variables.clone(), domain);
        let relations = self
            .relations
            .iter()
            .map(|r| plain.parse_element(r).with_context(|| format!("relation `{}`", r)))
            .collect::<Result<Vec<_>>>()?;
        let mut base = Vec::new();
        for b in &self.base_variables {
            let i = self
                .variables
                .iter()
                .position(|v| v == b)
                .ok_or_else(|| anyhow!("base variable `{}` is not a variable", b))?;
            base.push(i);
        }
        RingPresentation::with_base(self.variables.clone(), domain, relations, base).map_err(|e| anyhow!("{}", e))
    }

    pub fn triple(&self) -> Result<TripleSpec> {
        let ring = self.ring()?;
        let mut components = Vec::new();
        for d in &self.delta {
            let g = ring.parse_element(&d.g).with_context(|| format!("divisor component `{}`", d.g))?;
            let c = parse_rational(&d.c).map_err(|e| anyhow!("coefficient `{}`: {}", d.c, e))?;
            components.push((g, c));
        }
        let a = if self.a.is_empty() {
            Ideal::unit(ring.domain(), ring.nvars())
        } else {
            let gens = self
                .a
                .iter()
                .map(|g| ring.parse_element(g).with_context(|| format!("generator `{}` of a", g)))
                .collect::<Result<Vec<_>>>()?;
            Ideal::new(ring.domain(), ring.nvars(), gens)
        };
        let lambda = parse_rational(&self.lambda).map_err(|e| anyhow!("lambda `{}`: {}", self.lambda, e))?;
        TripleSpec::new(ring, DivisorData::new(components), a, lambda).map_err(|e| anyhow!("{}", e))
    }

    /// Builds the job, with `overrides` applied on top of the file.
    pub fn job(&self, mode: Mode, overrides: &Overrides) -> Result<JobSpec> {
        let input = self.triple()?;
        let element = |s: &Option<String>| -> Result<_> {
            s.as_ref()
                .map(|t| input.ring.parse_element(t).with_context(|| format!("element `{}`", t)))
                .transpose()
        };
        let test_element = element(&overrides.test_element.clone().or_else(|| self.test_element.clone()))?;
        let section = element(&self.section)?;
        let section_test_element = element(&self.section_test_element)?;
        let mut job = JobSpec::new(input, mode);
        job.prime = overrides.prime.or(self.prime);
        if let Some(e) = overrides.e_max.or(self.e_max) {
            if e == 0 {
                bail!("e_max must be positive");
            }
            job.e_max = e;
        }
        job.gb_budget = overrides.gb_budget;
        job.assert_q_gorenstein = overrides.assert_q_gorenstein || self.assert_q_gorenstein;
        job.test_element = test_element;
        job.section = section;
        job.section_test_element = section_test_element;
        job.level = self.level.unwrap_or(0);
        job.excluded_primes = self.excluded_primes.clone();
        Ok(job)
    }
}

/// Values given on the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub prime: Option<u64>,
    pub e_max: Option<u32>,
    pub gb_budget: Option<u64>,
    pub assert_q_gorenstein: bool,
    pub test_element: Option<String>,
}
