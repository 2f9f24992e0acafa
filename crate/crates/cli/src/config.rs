//! Experiment configuration: CLI flags, the mirroring JSON config file, and
//! the merge rule (flags override file values).

use clap::Parser;
use serde::{Deserialize, Serialize};

use recognition_core::error::{Error, Result};
use recognition_core::solver::StepSchedule;

/// Procedures that can be compared in an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProcedureKind {
    ClosestToOptimal,
    Ml,
    Robbins,
    Consistent,
    Minimax,
}

impl ProcedureKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProcedureKind::ClosestToOptimal => "closest-to-optimal",
            ProcedureKind::Ml => "ml",
            ProcedureKind::Robbins => "robbins",
            ProcedureKind::Consistent => "consistent",
            ProcedureKind::Minimax => "minimax",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "closest-to-optimal" | "g0" => Ok(ProcedureKind::ClosestToOptimal),
            "ml" => Ok(ProcedureKind::Ml),
            "robbins" => Ok(ProcedureKind::Robbins),
            "consistent" => Ok(ProcedureKind::Consistent),
            "minimax" => Ok(ProcedureKind::Minimax),
            other => Err(Error::InvalidConfig(format!(
                "unknown procedure '{other}' (expected closest-to-optimal, ml, robbins, consistent, or minimax)"
            ))),
        }
    }

    /// Estimate-based rules need at least one observation.
    pub fn needs_sample(&self) -> bool {
        matches!(
            self,
            ProcedureKind::Ml | ProcedureKind::Robbins | ProcedureKind::Consistent
        )
    }
}

/// Command-line interface. Without `--verify` an experiment runs and
/// `--example` is required; with `--verify <suite>` the oracle-backed
/// verification suites run instead.
#[derive(Debug, Parser)]
#[command(
    name = "recognition",
    about = "Synthesize and evaluate recognition strategies for objects with unknown-but-fixed models",
    version
)]
pub struct Cli {
    /// Experiment id: 1 (state counts), 2 (unlabeled signals, means +1/-1),
    /// 3 (known-state signals, unknown mean), 4 (unlabeled signals, unknown mean)
    #[arg(long)]
    pub example: Option<u32>,

    /// Sample sizes, comma separated (default 0,1,2,4; 0 is dropped
    /// automatically for estimate-based procedures)
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,

    /// Procedures to compare, comma separated:
    /// closest-to-optimal, ml, robbins, consistent, minimax
    #[arg(long, value_delimiter = ',')]
    pub procedures: Option<Vec<String>>,

    /// Required solver accuracy (duality gap at termination)
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Signal grid step override
    #[arg(long)]
    pub grid_step: Option<f64>,

    /// Model grid step override
    #[arg(long)]
    pub theta_step: Option<f64>,

    /// Output directory for CSV files and the plot script
    #[arg(long)]
    pub out: Option<String>,

    /// Step schedule: "inv-sqrt", "harmonic", optionally with a scale as in
    /// "inv-sqrt:0.5"
    #[arg(long)]
    pub schedule: Option<String>,

    /// Solver iteration cap
    #[arg(long)]
    pub max_iter: Option<usize>,

    /// Quantizer cell counts for signal-sample sources, one per sample size
    /// or a single value for all (defaults scale down with n to respect the
    /// outcome budget)
    #[arg(long, value_delimiter = ',')]
    pub quantizer_cells: Option<Vec<usize>>,

    /// Run a verification suite instead of an experiment:
    /// projection, concavity, non-domination, compression, or all
    #[arg(long)]
    pub verify: Option<String>,

    /// Random seed recorded in outputs (reserved; pipelines are deterministic)
    #[arg(long)]
    pub seed: Option<u64>,

    /// JSON config file mirroring these flags; flags override file values
    #[arg(long)]
    pub config: Option<String>,
}

/// JSON config file contents; every field mirrors a flag.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub example: Option<u32>,
    #[serde(default)]
    pub n: Option<Vec<usize>>,
    #[serde(default)]
    pub procedures: Option<Vec<String>>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub grid_step: Option<f64>,
    #[serde(default)]
    pub theta_step: Option<f64>,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default)]
    pub schedule: Option<String>,
    #[serde(default)]
    pub max_iter: Option<usize>,
    #[serde(default)]
    pub quantizer_cells: Option<Vec<usize>>,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub example: u32,
    pub sample_sizes: Vec<usize>,
    pub procedures: Vec<ProcedureKind>,
    pub epsilon: f64,
    pub grid_step: Option<f64>,
    pub theta_step: Option<f64>,
    /// Where files land; not part of the fingerprint since it does not
    /// affect file contents.
    #[serde(skip)]
    pub out_dir: String,
    pub schedule: String,
    pub max_iter: usize,
    pub quantizer_cells: Option<Vec<usize>>,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Merge flags over the optional config file and apply defaults.
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let file: ConfigFile = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::InvalidConfig(format!("cannot read config file {path}: {e}"))
                })?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidConfig(format!("config file {path}: {e}")))?
            }
            None => ConfigFile::default(),
        };

        let example = cli
            .example
            .or(file.example)
            .ok_or_else(|| Error::InvalidConfig("missing --example (1..4)".into()))?;
        if !(1..=4).contains(&example) {
            return Err(Error::InvalidConfig(format!(
                "unknown example {example} (valid ids: 1, 2, 3, 4)"
            )));
        }

        let sample_sizes = cli
            .n
            .clone()
            .or(file.n)
            .unwrap_or_else(|| vec![0, 1, 2, 4]);
        if sample_sizes.is_empty() {
            return Err(Error::InvalidConfig("empty sample size list".into()));
        }

        let names = cli
            .procedures
            .clone()
            .or(file.procedures)
            .unwrap_or_else(|| vec!["closest-to-optimal".into(), "ml".into()]);
        let mut procedures = Vec::with_capacity(names.len());
        for name in &names {
            let kind = ProcedureKind::parse(name)?;
            if !procedures.contains(&kind) {
                procedures.push(kind);
            }
        }

        let epsilon = cli.epsilon.or(file.epsilon).unwrap_or(0.01);
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon {epsilon} must be positive"
            )));
        }

        let schedule = cli
            .schedule
            .clone()
            .or(file.schedule)
            .unwrap_or_else(|| "inv-sqrt".into());
        parse_schedule(&schedule)?; // validate now, use later

        Ok(Self {
            example,
            sample_sizes,
            procedures,
            epsilon,
            grid_step: cli.grid_step.or(file.grid_step),
            theta_step: cli.theta_step.or(file.theta_step),
            out_dir: cli
                .out
                .clone()
                .or(file.out)
                .unwrap_or_else(|| "results".into()),
            schedule,
            max_iter: cli.max_iter.or(file.max_iter).unwrap_or(20_000),
            quantizer_cells: cli.quantizer_cells.clone().or(file.quantizer_cells),
            seed: cli.seed.or(file.seed).unwrap_or(0),
        })
    }

    /// FNV-1a hash of the canonical JSON form, recorded in output headers so
    /// runs can be matched to their configuration.
    pub fn fingerprint(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for b in canonical.as_bytes() {
            hash ^= u64::from(*b);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{hash:016x}")
    }
}

/// Parse a schedule string: "inv-sqrt", "harmonic", optional ":scale".
pub fn parse_schedule(text: &str) -> Result<StepSchedule> {
    let (name, scale) = match text.split_once(':') {
        Some((n, s)) => {
            let value: f64 = s.parse().map_err(|_| {
                Error::InvalidConfig(format!("schedule scale '{s}' is not a number"))
            })?;
            (n, Some(value))
        }
        None => (text, None),
    };
    match name {
        "inv-sqrt" => Ok(StepSchedule::InverseSqrt { gamma0: scale }),
        "harmonic" => Ok(StepSchedule::Harmonic { gamma0: scale }),
        other => Err(Error::InvalidConfig(format!(
            "unknown schedule '{other}' (expected inv-sqrt or harmonic)"
        ))),
    }
}
