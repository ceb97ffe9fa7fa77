//! Command-line certification of F-singularities and corpus runs.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use fsing::cert::{timestamp, OutcomeJson};
use fsing::corpus::run_corpus;
use fsing::input::{InputFile, Overrides};
use fsing_core::certify::{run_job, Mode};

#[derive(Parser)]
#[command(name = "certify", version, about = "Certify F-singularities and their characteristic-zero counterparts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Log canonical via a sharply F-pure fiber (Q input)
    Lc(JobArgs),
    /// Klt via a strongly F-regular fiber (Q input), or strong F-regularity (F_p input)
    Klt(JobArgs),
    /// Strong F-regularity of the given or reduced ring
    Sfr(JobArgs),
    /// Geometric strong F-regularity over a base F_p(t)
    Gsfr(JobArgs),
    /// Strong F-regularity of R and of R/(h), h from the `section` field
    Deform(JobArgs),
    /// Lower bounds nu(e)/p^e for the F-pure threshold of a single divisor
    Fpt(JobArgs),
    /// Test ideal of a pair on a polynomial ring
    Tau(JobArgs),
    /// Run a corpus of jobs and compare against expectations
    Corpus {
        file: PathBuf,
        /// Where to write the JSON report
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct JobArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long)]
    e_max: Option<u32>,
    /// Groebner reduction-step budget
    #[arg(long)]
    gb_budget: Option<u64>,
    #[arg(long)]
    assert_q_gorenstein: bool,
    #[arg(long)]
    test_element: Option<String>,
    /// Write the certificate JSON here (`-` for stdout)
    #[arg(long)]
    json: Option<PathBuf>,
}

fn write_output(path: &Path, text: &str) -> Result<()> {
    if path.as_os_str() == "-" {
        println!("{}", text);
        Ok(())
    } else {
        std::fs::write(path, format!("{}\n", text)).with_context(|| format!("writing {}", path.display()))
    }
}

fn job(mode: Mode, args: &JobArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let input = InputFile::from_json(&text)?;
    let overrides = Overrides {
        prime: args.prime,
        e_max: args.e_max,
        gb_budget: args.gb_budget,
        assert_q_gorenstein: args.assert_q_gorenstein,
        test_element: args.test_element.clone(),
    };
    let outcome = OutcomeJson::new(&run_job(&input.job(mode, &overrides)?)?, timestamp());
    let to_stdout = args.json.as_ref().is_some_and(|p| p.as_os_str() == "-");
    if let Some(path) = &args.json {
        write_output(path, &serde_json::to_string_pretty(&outcome)?)?;
    }
    if !to_stdout {
        println!("{}: {}", mode.as_str(), outcome.summary());
    }
    Ok(())
}

fn corpus(file: &Path, report_path: Option<&Path>) -> Result<bool> {
    let report = run_corpus(file)?;
    for j in &report.jobs {
        println!("{} {}", if j.passed { "PASS" } else { "FAIL" }, j.name);
        for d in &j.diff {
            println!("    {}", d);
        }
    }
    println!("{} passed, {} failed", report.passed, report.failed);
    if let Some(path) = report_path {
        write_output(path, &report.to_json())?;
    }
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Lc(a) => job(Mode::Lc, a).map(|_| true),
        Command::Klt(a) => job(Mode::Klt, a).map(|_| true),
        Command::Sfr(a) => job(Mode::Sfr, a).map(|_| true),
        Command::Gsfr(a) => job(Mode::Gsfr, a).map(|_| true),
        Command::Deform(a) => job(Mode::Deform, a).map(|_| true),
        Command::Fpt(a) => job(Mode::Fpt, a).map(|_| true),
        Command::Tau(a) => job(Mode::Tau, a).map(|_| true),
        Command::Corpus { file, report } => corpus(file, report.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}
