//! Command-line front end: runs the Gaussian experiments from flags or a
//! JSON config file and emits figure-ready CSV, or runs the oracle-backed
//! verification suites.

mod config;
mod experiment;
mod plot;

use clap::Parser;

use config::{Cli, ExperimentConfig};
use recognition_core::verify;

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: &Cli) -> recognition_core::Result<i32> {
    if let Some(suite) = &cli.verify {
        return run_verify(suite, cli.seed.unwrap_or(verify::DEFAULT_SEED));
    }
    let config = ExperimentConfig::resolve(cli)?;
    let status = experiment::run_experiment(&config)?;
    println!("wrote {} files to {}", status.files.len(), config.out_dir);
    if status.unconverged_runs > 0 {
        eprintln!(
            "warning: {} solver run(s) hit the iteration cap before reaching the accuracy target",
            status.unconverged_runs
        );
        return Ok(2);
    }
    Ok(0)
}

fn run_verify(suite: &str, seed: u64) -> recognition_core::Result<i32> {
    let reports = match suite {
        "projection" => vec![verify::projection_suite(seed, verify::PROJECTION_CASES)],
        "concavity" => vec![verify::concavity_suite(seed, verify::CONCAVITY_CASES)],
        "non-domination" => {
            vec![verify::non_domination_suite(seed, verify::NON_DOMINATION_CASES)]
        }
        "compression" => vec![verify::compression_suite(seed, verify::COMPRESSION_CASES)],
        "all" => verify::run_all(seed),
        other => {
            eprintln!(
                "usage: --verify expects projection, concavity, non-domination, compression, or all (got '{other}')"
            );
            return Ok(2);
        }
    };
    let mut all_passed = true;
    for report in &reports {
        println!("{report}");
        if !report.passed() {
            all_passed = false;
            if let Some(example) = &report.failure_example {
                eprintln!("violating input for replay: {example}");
            }
        }
    }
    Ok(if all_passed { 0 } else { 1 })
}
