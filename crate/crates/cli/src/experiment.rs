//! Experiment pipeline: build the example, construct its learning source
//! per sample size, evaluate the requested procedures, and emit CSV files
//! plus a plot script.

use std::fs;
use std::path::{Path, PathBuf};

use recognition_core::error::{Error, Result};
use recognition_core::gaussian::{
    self, DiscretizationGrid, GaussianExample, GaussianExampleSpec, GaussianVariant, Grid1D,
    HeuristicKind,
};
use recognition_core::learning::{
    self, LearningSource, MultisetSource, DEFAULT_OUTCOME_BUDGET,
};
use recognition_core::object::LossMatrix;
use recognition_core::solver::{self, SolverConfig, SolverOutcome};

use crate::config::{parse_schedule, ExperimentConfig, ProcedureKind};

/// Aggregate outcome of an experiment run.
#[derive(Debug, Default)]
pub struct RunStatus {
    pub files: Vec<PathBuf>,
    pub unconverged_runs: usize,
}

/// Default quantizer sizes: coarser cells for larger samples keep the
/// multiset outcome space within a workable budget.
fn default_quantizer_cells(n: usize) -> usize {
    match n {
        0 | 1 => 200,
        2 => 60,
        3 => 30,
        _ => 16,
    }
}

fn quantizer_cells_for(config: &ExperimentConfig, index: usize, n: usize) -> usize {
    match &config.quantizer_cells {
        Some(cells) if cells.len() == 1 => cells[0],
        Some(cells) => cells.get(index).copied().unwrap_or_else(|| {
            cells.last().copied().unwrap_or_else(|| default_quantizer_cells(n))
        }),
        None => default_quantizer_cells(n),
    }
}

/// Build the example object for an experiment id, honoring grid overrides.
pub fn build_example(config: &ExperimentConfig) -> Result<GaussianExample> {
    let variant = match config.example {
        1 | 2 => GaussianVariant::Robbins,
        3 | 4 => GaussianVariant::TwoMean,
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown example {other} (valid ids: 1, 2, 3, 4)"
            )))
        }
    };
    let spec = match variant {
        GaussianVariant::Robbins => GaussianExampleSpec::robbins(
            config.theta_step.unwrap_or(gaussian::DEFAULT_ROBBINS_THETA_STEP),
        )?,
        GaussianVariant::TwoMean => GaussianExampleSpec::two_mean(
            config.theta_step.unwrap_or(gaussian::DEFAULT_TWO_MEAN_THETA_STEP),
        )?,
        GaussianVariant::TwoModel2d => unreachable!("experiments use the 1-D variants"),
    };
    let grid = match (variant, config.grid_step) {
        (_, None) => gaussian::default_grid(variant),
        (GaussianVariant::Robbins, Some(step)) => {
            DiscretizationGrid::Line(Grid1D::new(-6.0, 6.0, step)?)
        }
        (GaussianVariant::TwoMean, Some(step)) => {
            DiscretizationGrid::Line(Grid1D::new(-10.0, 10.0, step)?)
        }
        (GaussianVariant::TwoModel2d, Some(_)) => unreachable!(),
    };
    gaussian::discretize(&spec, &grid)
}

/// The learning source of an experiment id at one sample size, with the
/// multiset decoding and representative values when the source is quantized.
pub struct ExperimentSource {
    pub source: LearningSource,
    pub quantized: Option<(MultisetSource, Vec<f64>)>,
}

pub fn build_source(
    config: &ExperimentConfig,
    example: &GaussianExample,
    n_index: usize,
    n: usize,
) -> Result<ExperimentSource> {
    if n == 0 {
        return Ok(ExperimentSource {
            source: LearningSource::no_learning(example.object.model_count())?,
            quantized: None,
        });
    }
    match config.example {
        1 => {
            let ms = learning::state_count_source(&example.object, n, DEFAULT_OUTCOME_BUDGET)?;
            Ok(ExperimentSource {
                source: ms.source.clone(),
                quantized: Some((ms, Vec::new())),
            })
        }
        2 | 4 => {
            let cells = quantizer_cells_for(config, n_index, n);
            let (quantizer, reps) = example.uniform_quantizer(cells)?;
            let ms = learning::quantized_signal_source(
                &example.object,
                &quantizer,
                n,
                DEFAULT_OUTCOME_BUDGET,
            )?;
            Ok(ExperimentSource {
                source: ms.source.clone(),
                quantized: Some((ms, reps)),
            })
        }
        3 => {
            let cells = quantizer_cells_for(config, n_index, n);
            let (quantizer, reps) = example.uniform_quantizer(cells)?;
            // signals are generated with the object held in state y=2
            let ms = learning::quantized_state_signal_source(
                &example.object,
                1,
                &quantizer,
                n,
                DEFAULT_OUTCOME_BUDGET,
            )?;
            Ok(ExperimentSource {
                source: ms.source.clone(),
                quantized: Some((ms, reps)),
            })
        }
        other => Err(Error::InvalidConfig(format!("unknown example {other}"))),
    }
}

/// Which heuristic realizes a procedure on a given example, if any.
fn heuristic_for(example_id: u32, kind: ProcedureKind) -> Result<HeuristicKind> {
    match (kind, example_id) {
        (ProcedureKind::Ml, 1 | 3) => Ok(HeuristicKind::MlSupervised),
        (ProcedureKind::Ml, 2 | 4) => Ok(HeuristicKind::MlUnsupervised),
        (ProcedureKind::Robbins, 2) => Ok(HeuristicKind::Robbins),
        (ProcedureKind::Consistent, 2 | 4) => Ok(HeuristicKind::Consistent),
        (kind, id) => Err(Error::InvalidConfig(format!(
            "procedure '{}' is not defined for example {id}",
            kind.as_str()
        ))),
    }
}

fn solver_config(config: &ExperimentConfig) -> Result<SolverConfig> {
    Ok(SolverConfig {
        epsilon: config.epsilon,
        step_schedule: parse_schedule(&config.schedule)?,
        max_iterations: config.max_iter,
        initial_weights: None,
        projection_tolerance: 1e-12,
    })
}

struct CurveResult {
    risks: Vec<f64>,
    status: &'static str,
    solver: Option<SolverOutcome>,
}

fn evaluate_procedure(
    config: &ExperimentConfig,
    example: &GaussianExample,
    loss: &LossMatrix,
    source: &ExperimentSource,
    kind: ProcedureKind,
) -> Result<CurveResult> {
    match kind {
        ProcedureKind::ClosestToOptimal | ProcedureKind::Minimax => {
            let sc = solver_config(config)?;
            let outcome = if kind == ProcedureKind::Minimax {
                solver::solve_minimax(&example.object, loss, &source.source, &sc)?
            } else {
                solver::solve_closest_to_optimal(&example.object, loss, &source.source, &sc)?
            };
            let risks = learning::procedure_risk_curve(
                &example.object,
                loss,
                &source.source,
                &outcome.procedure,
            )?;
            Ok(CurveResult {
                risks,
                status: if outcome.converged { "ok" } else { "unconverged" },
                solver: Some(outcome),
            })
        }
        ProcedureKind::Ml | ProcedureKind::Robbins | ProcedureKind::Consistent => {
            let heuristic = heuristic_for(config.example, kind)?;
            let (ms, reps) = source.quantized.as_ref().ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "procedure '{}' needs a learning sample; n=0 carries none",
                    kind.as_str()
                ))
            })?;
            let risks = gaussian::heuristic_risk_curve(example, loss, heuristic, ms, reps)?;
            Ok(CurveResult {
                risks,
                status: "ok",
                solver: None,
            })
        }
    }
}

fn write_curve_csv(
    path: &Path,
    header: &str,
    thetas: &[f64],
    risks: &[f64],
    optimal: &[f64],
    status: &str,
) -> Result<PathBuf> {
    let mut text = String::new();
    text.push_str(header);
    text.push_str("theta,risk,optimal_risk,regret,status\n");
    for (i, &theta) in thetas.iter().enumerate() {
        let regret = risks[i] - optimal[i];
        text.push_str(&format!(
            "{theta:.6},{:.12},{:.12},{regret:.12},{status}\n",
            risks[i], optimal[i]
        ));
    }
    fs::write(path, text).map_err(|e| Error::InvalidConfig(format!("write {path:?}: {e}")))?;
    Ok(path.to_path_buf())
}

fn write_trace_csv(path: &Path, header: &str, outcome: &SolverOutcome) -> Result<PathBuf> {
    let mut buf = Vec::new();
    buf.extend_from_slice(header.as_bytes());
    outcome
        .trace
        .write_csv(&mut buf, false)
        .map_err(|e| Error::InvalidConfig(format!("write {path:?}: {e}")))?;
    fs::write(path, buf).map_err(|e| Error::InvalidConfig(format!("write {path:?}: {e}")))?;
    Ok(path.to_path_buf())
}

/// Run a full experiment: one curve CSV per (procedure, n), one trace CSV
/// per solver run, and one plot script for the example.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunStatus> {
    let out_dir = Path::new(&config.out_dir);
    fs::create_dir_all(out_dir)
        .map_err(|e| Error::InvalidConfig(format!("cannot create {out_dir:?}: {e}")))?;

    let example = build_example(config)?;
    let loss = LossMatrix::zero_one(example.object.state_count());
    let optimal = recognition_core::decision::optimal_risks(&example.object, &loss)?;
    let thetas = example.thetas().to_vec();
    let header = format!(
        "# config {} recognition-core {}\n",
        config.fingerprint(),
        env!("CARGO_PKG_VERSION")
    );

    let mut status = RunStatus::default();
    let mut curve_files: Vec<(String, String, usize)> = Vec::new(); // (file, procedure, n)

    for kind in &config.procedures {
        for (n_index, &n) in config.sample_sizes.iter().enumerate() {
            if n == 0 && kind.needs_sample() {
                continue; // estimate-based rules are undefined without data
            }
            let source = build_source(config, &example, n_index, n)?;
            let result = evaluate_procedure(config, &example, &loss, &source, *kind)?;
            if result.status != "ok" {
                status.unconverged_runs += 1;
            }

            let stem = format!("example{}_{}_n{}", config.example, kind.as_str(), n);
            let curve_path = out_dir.join(format!("{stem}.csv"));
            status.files.push(write_curve_csv(
                &curve_path,
                &header,
                &thetas,
                &result.risks,
                &optimal,
                result.status,
            )?);
            curve_files.push((format!("{stem}.csv"), kind.as_str().to_string(), n));

            if let Some(outcome) = &result.solver {
                let trace_path = out_dir.join(format!("{stem}_trace.csv"));
                status.files.push(write_trace_csv(&trace_path, &header, outcome)?);
                let max_regret: f64 = result
                    .risks
                    .iter()
                    .zip(&optimal)
                    .map(|(r, o)| r - o)
                    .fold(f64::NEG_INFINITY, f64::max);
                println!(
                    "example {} {} n={}: S={:.6} s={:.6} gap={:.6} iterations={} max-regret={:.6} [{}]",
                    config.example,
                    kind.as_str(),
                    n,
                    outcome.upper,
                    outcome.lower,
                    outcome.gap(),
                    outcome.iterations,
                    max_regret,
                    result.status
                );
            } else {
                let max_regret: f64 = result
                    .risks
                    .iter()
                    .zip(&optimal)
                    .map(|(r, o)| r - o)
                    .fold(f64::NEG_INFINITY, f64::max);
                println!(
                    "example {} {} n={}: max-regret={:.6} [{}]",
                    config.example,
                    kind.as_str(),
                    n,
                    max_regret,
                    result.status
                );
            }
        }
    }

    let plot_path = out_dir.join(format!("plot_example{}.py", config.example));
    let plot = crate::plot::plot_script(config.example, &curve_files);
    fs::write(&plot_path, plot)
        .map_err(|e| Error::InvalidConfig(format!("write {plot_path:?}: {e}")))?;
    status.files.push(plot_path);

    Ok(status)
}
