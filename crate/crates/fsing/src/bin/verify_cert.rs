//! Re-checks the witnesses of saved certificates.
//!
//! Accepts certificate files and corpus reports. Exit status 0 means every
//! positive conclusion was re-verified.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use fsing::cert::{CertificateJson, OutcomeJson};
use fsing::corpus::CorpusReport;

#[derive(Parser)]
#[command(name = "verify-cert", version, about = "Re-verify certificate witnesses")]
struct Cli {
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

fn certificates(path: &PathBuf) -> Result<Vec<(String, CertificateJson)>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if let Ok(report) = serde_json::from_str::<CorpusReport>(&text) {
        return Ok(report
            .jobs
            .into_iter()
            .filter_map(|j| match j.outcome {
                Some(OutcomeJson::Certificate(c)) => Some((format!("{}:{}", path.display(), j.name), c)),
                _ => None,
            })
            .collect());
    }
    let cert: CertificateJson = serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("{}: line {}, column {}: {}", path.display(), e.line(), e.column(), e))?;
    Ok(vec![(path.display().to_string(), cert)])
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut ok = true;
    let (mut verified, mut skipped) = (0, 0);
    for path in &cli.files {
        match certificates(path) {
            Ok(certs) => {
                for (name, c) in certs {
                    match c.verify() {
                        Ok(()) if c.is_inconclusive() => {
                            skipped += 1;
                            println!("SKIP {} (inconclusive)", name);
                        }
                        Ok(()) => {
                            verified += 1;
                            println!("OK   {} ({}, {} witness(es))", name, c.conclusion, c.witnesses.len());
                        }
                        Err(e) => {
                            ok = false;
                            println!("FAIL {}: {:#}", name, e);
                        }
                    }
                }
            }
            Err(e) => {
                ok = false;
                println!("FAIL {:#}", e);
            }
        }
    }
    println!("{} verified, {} inconclusive skipped", verified, skipped);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
