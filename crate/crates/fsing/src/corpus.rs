//! Batch execution of a job corpus with expectation checking.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use fsing_core::certify::{run_job, Mode};
use fsing_core::TOOL_VERSION;

use crate::cert::{timestamp, OutcomeJson};
use crate::input::{InputFile, Overrides};

pub const REPORT_SCHEMA: &str = "corpus_report_v1";

/// Expected fields; anything left out is not compared.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conclusion: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent_witness: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_element: Option<String>,
    /// Lower bounds `nu(e)/p^e` for e = 1, 2, ...
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fpt_bounds: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<String>>,
    /// The job must fail with an error containing this text.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusJob {
    pub name: String,
    pub mode: String,
    pub input: InputFile,
    #[serde(default)]
    pub expect: Expectation,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corpus {
    #[serde(default)]
    pub gb_budget: Option<u64>,
    #[serde(default)]
    pub jobs: Vec<CorpusJob>,
}

impl Corpus {
    /// Accepts an object with `jobs` or a bare array of jobs. Blank input
    /// is the empty corpus.
    pub fn from_json(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(Corpus::default());
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Shape {
            Jobs(Vec<CorpusJob>),
            Full(Corpus),
        }
        let located = |e: serde_json::Error| anyhow!("corpus parse error at line {}, column {}: {}", e.line(), e.column(), e);
        // untagged errors lose their position, so retry with each shape
        let value: serde_json::Value = serde_json::from_str(text).map_err(located)?;
        match serde_json::from_value::<Shape>(value.clone()) {
            Ok(Shape::Jobs(jobs)) => Ok(Corpus { gb_budget: None, jobs }),
            Ok(Shape::Full(c)) => Ok(c),
            Err(_) if value.is_array() => serde_json::from_str::<Vec<CorpusJob>>(text)
                .map(|jobs| Corpus { gb_budget: None, jobs })
                .map_err(located),
            Err(_) => serde_json::from_str::<Corpus>(text).map_err(located),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Corpus::from_json(&text).with_context(|| format!("in {}", path.display()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobReport {
    pub name: String,
    pub mode: String,
    pub passed: bool,
    pub diff: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<OutcomeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub schema: String,
    pub tool_version: String,
    pub timestamp: String,
    pub passed: usize,
    pub failed: usize,
    pub jobs: Vec<JobReport>,
}

impl CorpusReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn compare<T: PartialEq + std::fmt::Debug>(diff: &mut Vec<String>, field: &str, want: &Option<T>, got: Option<T>) {
    if let Some(w) = want {
        if got.as_ref() != Some(w) {
            diff.push(format!("{}: expected {:?}, got {:?}", field, w, got));
        }
    }
}

fn check(expect: &Expectation, outcome: &OutcomeJson) -> Vec<String> {
    let mut diff = Vec::new();
    let cert = outcome.certificate();
    let wants_cert = expect.conclusion.is_some()
        || expect.status.is_some()
        || expect.exponent_witness.is_some()
        || expect.witness_element.is_some();
    if wants_cert && cert.is_none() {
        diff.push("expected a certificate".into());
    }
    if let Some(c) = cert {
        compare(&mut diff, "conclusion", &expect.conclusion, Some(c.conclusion.clone()));
        compare(&mut diff, "status", &expect.status, Some(c.status.clone()));
        compare(&mut diff, "prime", &expect.prime, c.prime);
        compare(&mut diff, "exponent_witness", &expect.exponent_witness, c.exponent_witness);
        compare(&mut diff, "witness_element", &expect.witness_element, c.witness_element.clone());
    }
    match outcome {
        OutcomeJson::Fpt(r) => {
            compare(&mut diff, "prime", &expect.prime, Some(r.prime));
            let got = r.bounds.iter().map(|b| b.lower_bound.clone()).collect();
            compare(&mut diff, "fpt_bounds", &expect.fpt_bounds, Some(got));
        }
        OutcomeJson::Tau(r) => {
            compare(&mut diff, "prime", &expect.prime, Some(r.prime));
            compare(&mut diff, "tau", &expect.tau, Some(r.generators.clone()));
        }
        OutcomeJson::Certificate(_) => {
            if expect.fpt_bounds.is_some() || expect.tau.is_some() {
                diff.push("expected an fpt or tau report".into());
            }
        }
    }
    if let Some(e) = &expect.error {
        diff.push(format!("expected an error containing {:?}, got a result", e));
    }
    diff
}

fn run_one(job: &CorpusJob) -> JobReport {
    let result = (|| -> Result<OutcomeJson> {
        let mode = Mode::parse(&job.mode).ok_or_else(|| anyhow!("unknown mode `{}`", job.mode))?;
        let spec = job.input.job(mode, &Overrides::default())?;
        let outcome = run_job(&spec)?;
        Ok(OutcomeJson::new(&outcome, timestamp()))
    })();
    let (diff, error, outcome) = match result {
        Ok(o) => (check(&job.expect, &o), None, Some(o)),
        Err(e) => {
            let msg = format!("{:#}", e);
            let diff = match &job.expect.error {
                Some(want) if msg.contains(want.as_str()) => Vec::new(),
                _ => vec![format!("unexpected error: {}", msg)],
            };
            (diff, Some(msg), None)
        }
    };
    JobReport { name: job.name.clone(), mode: job.mode.clone(), passed: diff.is_empty(), diff, error, outcome }
}

/// Runs every job concurrently; the report lists jobs in corpus order.
pub fn run(corpus: &Corpus) -> Result<CorpusReport> {
    let mut names = std::collections::BTreeSet::new();
    for j in &corpus.jobs {
        if !names.insert(j.name.as_str()) {
            bail!("duplicate job name `{}`", j.name);
        }
    }
    // the budget is process-wide, so it is set once for the whole corpus
    if let Some(b) = corpus.gb_budget {
        fsing_core::groebner::set_budget(b);
    }
    let jobs: Vec<JobReport> = corpus.jobs.par_iter().map(run_one).collect();
    let passed = jobs.iter().filter(|j| j.passed).count();
    Ok(CorpusReport {
        schema: REPORT_SCHEMA.into(),
        tool_version: TOOL_VERSION.into(),
        timestamp: timestamp(),
        passed,
        failed: jobs.len() - passed,
        jobs,
    })
}

pub fn run_corpus(path: &Path) -> Result<CorpusReport> {
    run(&Corpus::load(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_corpus() {
        for text in ["", "[]", "{}", "{\"jobs\": []}"] {
            let report = run(&Corpus::from_json(text).unwrap()).unwrap();
            assert!(report.jobs.is_empty());
            assert!(report.all_passed());
        }
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = Corpus::from_json("{\"jobs\": [\n {\"name\": \"a\",\n  \"mode\": 3}\n]}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{}", err);
        let err = Corpus::from_json("[\n{\"name\": \"a\"\n").unwrap_err();
        assert!(err.to_string().contains("line"), "{}", err);
    }

    #[test]
    fn wrong_expectation_is_a_diff() {
        let text = r#"[{
            "name": "cusp",
            "mode": "lc",
            "input": {"variables": ["x", "y"], "coefficient": "Q", "prime": 7, "e_max": 1,
                      "delta": [{"g": "x^2 + y^3", "c": "5/6"}]},
            "expect": {"conclusion": "klt", "witness_element": "x^6*y^6"}
        }, {
            "name": "bad-mode",
            "mode": "lct",
            "input": {"variables": ["x"], "coefficient": "Q"},
            "expect": {"error": "unknown mode"}
        }]"#;
        let report = run(&Corpus::from_json(text).unwrap()).unwrap();
        assert_eq!((report.passed, report.failed), (1, 1));
        assert_eq!(report.jobs[0].diff, vec!["conclusion: expected \"klt\", got Some(\"log_canonical\")".to_string()]);
        assert!(report.jobs[1].passed);
    }
}
