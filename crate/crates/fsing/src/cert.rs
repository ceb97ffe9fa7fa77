//! Serialized forms of certificates and reports.
//!
//! Field order is fixed by the struct definitions, so equal outcomes
//! serialize to equal bytes apart from `timestamp`.

use anyhow::{anyhow, bail, Result};
use serde::{Deserialize, Serialize};

use fsing_core::certify::{Certificate, FptReport, JobOutcome, TauReport, WitnessRecord, SCHEMA};
use fsing_core::poly::format_rational;
use fsing_core::TOOL_VERSION;

pub const FPT_SCHEMA: &str = "fpt_v1";
pub const TAU_SCHEMA: &str = "tau_v1";

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaJson {
    pub g: String,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub role: String,
    pub variables: Vec<String>,
    pub base_variables: Vec<String>,
    pub p: u64,
    pub relations: Vec<String>,
    pub delta: Vec<DeltaJson>,
    pub a: Vec<String>,
    pub lambda: String,
    pub e: u32,
    pub test_element: String,
    pub a_exponents: Vec<u64>,
    pub colon_element: String,
    pub monomial: String,
    pub coefficient: u64,
}

impl From<&WitnessRecord> for WitnessJson {
    fn from(w: &WitnessRecord) -> Self {
        WitnessJson {
            role: w.role.clone(),
            variables: w.variables.clone(),
            base_variables: w.base_variables.clone(),
            p: w.p,
            relations: w.relations.clone(),
            delta: w.delta.iter().map(|(g, c)| DeltaJson { g: g.clone(), c: c.clone() }).collect(),
            a: w.a.clone(),
            lambda: w.lambda.clone(),
            e: w.e,
            test_element: w.test_element.clone(),
            a_exponents: w.a_exponents.clone(),
            colon_element: w.colon_element.clone(),
            monomial: w.monomial.clone(),
            coefficient: w.coefficient,
        }
    }
}

impl From<&WitnessJson> for WitnessRecord {
    fn from(w: &WitnessJson) -> Self {
        WitnessRecord {
            role: w.role.clone(),
            variables: w.variables.clone(),
            base_variables: w.base_variables.clone(),
            p: w.p,
            relations: w.relations.clone(),
            delta: w.delta.iter().map(|d| (d.g.clone(), d.c.clone())).collect(),
            a: w.a.clone(),
            lambda: w.lambda.clone(),
            e: w.e,
            test_element: w.test_element.clone(),
            a_exponents: w.a_exponents.clone(),
            colon_element: w.colon_element.clone(),
            monomial: w.monomial.clone(),
            coefficient: w.coefficient,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeJson {
    pub p: u64,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub schema: String,
    pub tool_version: String,
    pub timestamp: String,
    pub mode: String,
    pub conclusion: String,
    pub status: String,
    pub theorem_tag: String,
    pub prime: Option<u64>,
    pub exponent_witness: Option<u32>,
    pub witness_element: Option<String>,
    pub assumptions: Vec<String>,
    pub checked_hypotheses: Vec<String>,
    pub primes_tried: Vec<PrimeJson>,
    pub witnesses: Vec<WitnessJson>,
}

impl CertificateJson {
    pub fn new(c: &Certificate, timestamp: String) -> Self {
        CertificateJson {
            schema: SCHEMA.into(),
            tool_version: TOOL_VERSION.into(),
            timestamp,
            mode: c.mode.as_str().into(),
            conclusion: c.conclusion.as_str().into(),
            status: c.status.as_str().into(),
            theorem_tag: c.theorem_tag.clone(),
            prime: c.prime,
            exponent_witness: c.exponent_witness,
            witness_element: c.witness_element.clone(),
            assumptions: c.assumptions.clone(),
            checked_hypotheses: c.checked_hypotheses.clone(),
            primes_tried: c.primes_tried.iter().map(|a| PrimeJson { p: a.p, status: a.status.as_str().into() }).collect(),
            witnesses: c.witnesses.iter().map(WitnessJson::from).collect(),
        }
    }

    pub fn is_inconclusive(&self) -> bool {
        self.conclusion == "inconclusive"
    }

    /// Re-runs every witness. A positive conclusion without witnesses is
    /// rejected as well.
    pub fn verify(&self) -> Result<()> {
        if self.schema != SCHEMA {
            bail!("unknown schema `{}`", self.schema);
        }
        if !self.is_inconclusive() && self.witnesses.is_empty() {
            bail!("conclusion `{}` carries no witness", self.conclusion);
        }
        for (i, w) in self.witnesses.iter().enumerate() {
            fsing_core::certify::verify_witness(&WitnessRecord::from(w))
                .map_err(|e| anyhow!("witness {} ({}): {}", i, w.role, e))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundJson {
    pub e: u32,
    pub nu: u64,
    pub lower_bound: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FptJson {
    pub schema: String,
    pub tool_version: String,
    pub timestamp: String,
    pub prime: u64,
    pub polynomial: String,
    pub bounds: Vec<BoundJson>,
}

impl FptJson {
    pub fn new(r: &FptReport, timestamp: String) -> Self {
        FptJson {
            schema: FPT_SCHEMA.into(),
            tool_version: TOOL_VERSION.into(),
            timestamp,
            prime: r.prime,
            polynomial: r.polynomial.clone(),
            bounds: r
                .bounds
                .iter()
                .map(|(e, nu, b)| BoundJson { e: *e, nu: *nu, lower_bound: format_rational(b) })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauJson {
    pub schema: String,
    pub tool_version: String,
    pub timestamp: String,
    pub prime: u64,
    pub generators: Vec<String>,
    pub truncation_level: u32,
    pub stabilized: bool,
}

impl TauJson {
    pub fn new(r: &TauReport, timestamp: String) -> Self {
        TauJson {
            schema: TAU_SCHEMA.into(),
            tool_version: TOOL_VERSION.into(),
            timestamp,
            prime: r.prime,
            generators: r.generators.clone(),
            truncation_level: r.truncation_level,
            stabilized: r.stabilized,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OutcomeJson {
    Certificate(CertificateJson),
    Fpt(FptJson),
    Tau(TauJson),
}

impl OutcomeJson {
    pub fn new(o: &JobOutcome, timestamp: String) -> Self {
        match o {
            JobOutcome::Certificate(c) => OutcomeJson::Certificate(CertificateJson::new(c, timestamp)),
            JobOutcome::Fpt(r) => OutcomeJson::Fpt(FptJson::new(r, timestamp)),
            JobOutcome::Tau(r) => OutcomeJson::Tau(TauJson::new(r, timestamp)),
        }
    }

    pub fn certificate(&self) -> Option<&CertificateJson> {
        match self {
            OutcomeJson::Certificate(c) => Some(c),
            _ => None,
        }
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        match self {
            OutcomeJson::Certificate(c) => {
                let mut s = format!("{} ({})", c.conclusion, c.status);
                if let Some(p) = c.prime {
                    s += &format!(" p={}", p);
                }
                if let Some(e) = c.exponent_witness {
                    s += &format!(" e={}", e);
                }
                if let Some(w) = &c.witness_element {
                    s += &format!(" witness {}", w);
                }
                s
            }
            OutcomeJson::Fpt(r) => {
                let b: Vec<String> = r.bounds.iter().map(|b| format!("nu({})={} ({})", b.e, b.nu, b.lower_bound)).collect();
                format!("p={} {}", r.prime, b.join(", "))
            }
            OutcomeJson::Tau(r) => format!(
                "p={} tau=({}) level {}{}",
                r.prime,
                r.generators.join(", "),
                r.truncation_level,
                if r.stabilized { "" } else { " (not stabilized)" }
            ),
        }
    }
}

/// Replaces every `timestamp` value by a fixed string.
pub fn strip_timestamps(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(m) => {
            for (k, x) in m.iter_mut() {
                if k == "timestamp" {
                    *x = serde_json::Value::String(String::new());
                } else {
                    strip_timestamps(x);
                }
            }
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(strip_timestamps),
        _ => {}
    }
}
