//! Supergradient solver for closest-to-optimal and minimax procedures.
//!
//! The dual objective is the concave function
//!
//! ```text
//! Phi(tau) = [ min_g sum_theta tau(theta) R_Z(g, theta) ]
//!          - [ sum_theta tau(theta) min_q R_X(q, theta) ]
//! ```
//!
//! whose inner minimum is attained by the Bayesian procedure for `tau`. The
//! vector `Delta(theta) = R_Z(g_tau, theta) - min_q R_X(q, theta)` is a
//! supergradient of `Phi` at `tau`. Each iteration evaluates the Bayesian
//! procedure, updates the bounds `S = min(S, max_theta Delta)` and
//! `s = max(s, sum_theta tau Delta)`, stops once `S - s < epsilon`, and
//! otherwise ascends along the supergradient and projects back onto the
//! simplex. On termination the best procedure found is within `epsilon` of
//! the optimum.
//!
//! The minimax variant runs the same iteration with the optimal-risk offset
//! removed, bounding `min_g max_theta R_Z(g, theta)` instead.

use crate::decision::RiskKernel;
use crate::error::{Error, Result};
use crate::learning::{bayes_risk_curve_kernel, LearningProcedure, LearningSource};
use crate::object::{FiniteComplexObject, LossMatrix, WeightFunction};

/// Step-size rule producing `gamma_i` for `i = 1, 2, ...`.
///
/// Any rule must satisfy `gamma_i > 0`, `gamma_i -> 0`, and a divergent sum.
/// When `gamma0` is `None` it defaults to `1 / (1 + max_theta Delta(theta))`
/// evaluated at the initial weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule {
    /// `gamma_i = gamma0 / sqrt(i)`.
    InverseSqrt { gamma0: Option<f64> },
    /// `gamma_i = gamma0 / i`.
    Harmonic { gamma0: Option<f64> },
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule::InverseSqrt { gamma0: None }
    }
}

impl StepSchedule {
    fn validate(&self) -> Result<()> {
        let gamma0 = match self {
            StepSchedule::InverseSqrt { gamma0 } | StepSchedule::Harmonic { gamma0 } => gamma0,
        };
        if let Some(g) = gamma0 {
            if !g.is_finite() || *g <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "step scale {g} must be positive and finite"
                )));
            }
        }
        Ok(())
    }

    fn step(&self, iteration: usize, auto_gamma0: f64) -> f64 {
        let (base, decay): (f64, f64) = match self {
            StepSchedule::InverseSqrt { gamma0 } => (
                gamma0.unwrap_or(auto_gamma0),
                (iteration as f64).sqrt(),
            ),
            StepSchedule::Harmonic { gamma0 } => (gamma0.unwrap_or(auto_gamma0), iteration as f64),
        };
        base / decay
    }
}

/// Solver configuration.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Required accuracy of the duality gap at termination.
    pub epsilon: f64,
    pub step_schedule: StepSchedule,
    /// Safety cap; hitting it returns the current bounds flagged unconverged.
    pub max_iterations: usize,
    /// Initial weights; uniform when `None`.
    pub initial_weights: Option<WeightFunction>,
    /// Termination tolerance of the projection loop.
    pub projection_tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.01,
            step_schedule: StepSchedule::default(),
            max_iterations: 20_000,
            initial_weights: None,
            projection_tolerance: 1e-12,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "epsilon {} must be positive",
                self.epsilon
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive".into()));
        }
        if !self.projection_tolerance.is_finite() || self.projection_tolerance <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "projection tolerance {} must be positive",
                self.projection_tolerance
            )));
        }
        self.step_schedule.validate()
    }
}

/// One iteration record of the solver.
#[derive(Debug, Clone)]
pub struct TraceRow {
    /// 1-based iteration counter.
    pub iteration: usize,
    /// Weights at which the Bayesian procedure was built.
    pub tau: Vec<f64>,
    /// Supergradient entries `Delta(theta)`.
    pub delta: Vec<f64>,
    /// `max_theta Delta(theta)`: the quality of the current procedure.
    pub delta_max: f64,
    /// `sum_theta tau(theta) Delta(theta)`: the value `Phi(tau)`.
    pub delta_bar: f64,
    /// Running upper bound after this iteration's update.
    pub upper: f64,
    /// Running lower bound after this iteration's update.
    pub lower: f64,
}

/// Append-only per-iteration log with the running bounds.
#[derive(Debug, Clone, Default)]
pub struct SolverTrace {
    pub rows: Vec<TraceRow>,
}

impl SolverTrace {
    /// Write the trace as CSV: `iteration,upper,lower,gap,delta_max,delta_bar`
    /// plus one `tau_i` column per model when `include_tau` is set.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W, include_tau: bool) -> std::io::Result<()> {
        write!(out, "iteration,upper,lower,gap,delta_max,delta_bar")?;
        if include_tau {
            if let Some(first) = self.rows.first() {
                for t in 0..first.tau.len() {
                    write!(out, ",tau_{t}")?;
                }
            }
        }
        writeln!(out)?;
        for row in &self.rows {
            write!(
                out,
                "{},{:.12},{:.12},{:.12},{:.12},{:.12}",
                row.iteration,
                row.upper,
                row.lower,
                row.upper - row.lower,
                row.delta_max,
                row.delta_bar
            )?;
            if include_tau {
                for v in &row.tau {
                    write!(out, ",{v:.12}")?;
                }
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Solver result: the best procedure found (achieving the upper bound `S`),
/// the best weights found (achieving the lower bound `s`), both bounds, and
/// the full iteration trace. Unconverged runs return data rather than
/// failing; the bounds remain valid certificates.
#[derive(Debug, Clone)]
pub struct SolverOutcome {
    /// Bayesian procedure achieving the upper bound.
    pub procedure: LearningProcedure,
    /// Weights at which the procedure achieving `S` was constructed.
    pub procedure_weights: WeightFunction,
    /// Weights achieving the lower bound `s`.
    pub weights: WeightFunction,
    /// Best upper bound `S` on the optimal value.
    pub upper: f64,
    /// Best lower bound `s` on the optimal value.
    pub lower: f64,
    /// Whether `S - s < epsilon` was reached within the iteration cap.
    pub converged: bool,
    pub iterations: usize,
    pub trace: SolverTrace,
}

impl SolverOutcome {
    /// Duality gap `S - s`.
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Objective {
    /// `Delta(theta) = R_Z(g, theta) - min_q R_X(q, theta)`.
    Regret,
    /// `Delta(theta) = R_Z(g, theta)`.
    Risk,
}

/// Euclidean projection of a point onto the probability simplex.
///
/// Runs the clip-and-recenter loop until every coordinate is above
/// `-tolerance` (the loop alone converges only in the limit for points such
/// as `(2, 0)`), then redistributes the residual exactly over the positive
/// support, shrinking the support while any coordinate goes negative.
pub fn project_to_simplex(v: &[f64], tolerance: f64) -> Result<WeightFunction> {
    if v.is_empty() {
        return Err(Error::DimensionMismatch {
            context: "projection input",
            expected: 1,
            got: 0,
        });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidConfig("projection input must be finite".into()));
    }
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "projection tolerance {tolerance} must be positive"
        )));
    }
    let m = v.len();
    let mut tau: Vec<f64> = v.to_vec();
    // clip-and-recenter until within tolerance of the nonnegative orthant
    loop {
        let shift = (tau.iter().sum::<f64>() - 1.0) / m as f64;
        for x in tau.iter_mut() {
            *x -= shift;
        }
        let min = tau.iter().cloned().fold(f64::INFINITY, f64::min);
        if min >= -tolerance {
            break;
        }
        for x in tau.iter_mut() {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
    }
    // exact redistribution over the positive support
    for x in tau.iter_mut() {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    loop {
        let support: Vec<usize> = (0..m).filter(|&i| tau[i] > 0.0).collect();
        if support.is_empty() {
            // mass vanished to rounding; fall back to the largest input
            let mut best = 0;
            for i in 1..m {
                if v[i] > v[best] {
                    best = i;
                }
            }
            tau.iter_mut().for_each(|x| *x = 0.0);
            tau[best] = 1.0;
            break;
        }
        let shift = (tau.iter().sum::<f64>() - 1.0) / support.len() as f64;
        let mut clipped = false;
        for &i in &support {
            tau[i] -= shift;
            if tau[i] < 0.0 {
                tau[i] = 0.0;
                clipped = true;
            }
        }
        if !clipped {
            break;
        }
    }
    // absorb the remaining ulp-level residual into the largest coordinate
    let residual = 1.0 - tau.iter().sum::<f64>();
    if residual != 0.0 {
        let mut largest = 0;
        for i in 1..m {
            if tau[i] > tau[largest] {
                largest = i;
            }
        }
        tau[largest] += residual;
        if tau[largest] < 0.0 {
            tau[largest] = 0.0;
        }
    }
    WeightFunction::new(tau)
}

struct Evaluation {
    delta: Vec<f64>,
    delta_max: f64,
    delta_bar: f64,
}

fn evaluate(
    kernel: &RiskKernel,
    source: &LearningSource,
    offsets: &[f64],
    tau: &[f64],
) -> Evaluation {
    let risks = bayes_risk_curve_kernel(kernel, source, tau);
    let delta: Vec<f64> = risks
        .iter()
        .zip(offsets)
        .map(|(&r, &o)| r - o)
        .collect();
    let mut delta_max = f64::NEG_INFINITY;
    let mut delta_bar = 0.0;
    for (t, &d) in delta.iter().enumerate() {
        if d > delta_max {
            delta_max = d;
        }
        delta_bar += tau[t] * d;
    }
    Evaluation {
        delta,
        delta_max,
        delta_bar,
    }
}

fn prepare(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    source: &LearningSource,
    objective: Objective,
) -> Result<(RiskKernel, Vec<f64>)> {
    if source.model_count() != object.model_count() {
        return Err(Error::DimensionMismatch {
            context: "learning source model axis",
            expected: object.model_count(),
            got: source.model_count(),
        });
    }
    let kernel = RiskKernel::new(object, loss)?;
    let offsets = match objective {
        Objective::Regret => kernel.optimal_risks(),
        Objective::Risk => vec![0.0; object.model_count()],
    };
    Ok((kernel, offsets))
}

/// The concave dual `Phi(tau)` of the closest-to-optimal problem, evaluated
/// through the Bayesian procedure attaining the inner minimum.
pub fn phi(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    source: &LearningSource,
    weights: &WeightFunction,
) -> Result<f64> {
    if weights.model_count() != object.model_count() {
        return Err(Error::DimensionMismatch {
            context: "weight function length",
            expected: object.model_count(),
            got: weights.model_count(),
        });
    }
    let (kernel, offsets) = prepare(object, loss, source, Objective::Regret)?;
    Ok(evaluate(&kernel, source, &offsets, weights.weights()).delta_bar)
}

/// Supergradient of `Phi` at `tau`:
/// `Delta(theta) = R_Z(g_tau, theta) - min_q R_X(q, theta)`.
pub fn supergradient(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    source: &LearningSource,
    weights: &WeightFunction,
) -> Result<Vec<f64>> {
    if weights.model_count() != object.model_count() {
        return Err(Error::DimensionMismatch {
            context: "weight function length",
            expected: object.model_count(),
            got: weights.model_count(),
        });
    }
    let (kernel, offsets) = prepare(object, loss, source, Objective::Regret)?;
    Ok(evaluate(&kernel, source, &offsets, weights.weights()).delta)
}

fn solve(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    source: &LearningSource,
    config: &SolverConfig,
    objective: Objective,
) -> Result<SolverOutcome> {
    config.validate()?;
    let (kernel, offsets) = prepare(object, loss, source, objective)?;
    let model_count = object.model_count();
    let mut tau = match &config.initial_weights {
        Some(w) => {
            if w.model_count() != model_count {
                return Err(Error::DimensionMismatch {
                    context: "initial weights length",
                    expected: model_count,
                    got: w.model_count(),
                });
            }
            w.weights().to_vec()
        }
        None => vec![1.0 / model_count as f64; model_count],
    };

    let mut upper = f64::INFINITY;
    // The regret objective is nonnegative for every tau, so zero is a valid
    // initial lower bound; risks under general losses need not be.
    let mut lower = match objective {
        Objective::Regret => 0.0,
        Objective::Risk => f64::NEG_INFINITY,
    };
    let mut best_upper_tau = tau.clone();
    let mut best_lower_tau = tau.clone();
    let mut trace = SolverTrace::default();
    let mut converged = false;
    let mut auto_gamma0 = 1.0;
    let mut iterations = 0;

    for i in 1..=config.max_iterations {
        iterations = i;
        let eval = evaluate(&kernel, source, &offsets, &tau);
        if i == 1 {
            auto_gamma0 = 1.0 / (1.0 + eval.delta_max.max(0.0));
        }
        if eval.delta_max < upper {
            upper = eval.delta_max;
            best_upper_tau = tau.clone();
        }
        if eval.delta_bar > lower {
            lower = eval.delta_bar;
            best_lower_tau = tau.clone();
        }
        trace.rows.push(TraceRow {
            iteration: i,
            tau: tau.clone(),
            delta: eval.delta.clone(),
            delta_max: eval.delta_max,
            delta_bar: eval.delta_bar,
            upper,
            lower,
        });
        if upper - lower < config.epsilon {
            converged = true;
            break;
        }
        let gamma = config.step_schedule.step(i, auto_gamma0);
        let moved: Vec<f64> = tau
            .iter()
            .zip(&eval.delta)
            .map(|(&t, &d)| t + gamma * d)
            .collect();
        tau = project_to_simplex(&moved, config.projection_tolerance)?
            .weights()
            .to_vec();
    }

    let procedure_weights = WeightFunction::new(best_upper_tau)?;
    let weights = WeightFunction::new(best_lower_tau)?;
    Ok(SolverOutcome {
        procedure: LearningProcedure::ImplicitBayes(procedure_weights.clone()),
        procedure_weights,
        weights,
        upper,
        lower,
        converged,
        iterations,
        trace,
    })
}

/// Find an epsilon-closest-to-optimal learning procedure: minimize
/// `max_theta [ R_Z(g, theta) - min_q R_X(q, theta) ]`. On convergence the
/// returned procedure exceeds the optimal value by less than `epsilon`.
pub fn solve_closest_to_optimal(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    source: &LearningSource,
    config: &SolverConfig,
) -> Result<SolverOutcome> {
    solve(object, loss, source, config, Objective::Regret)
}

/// Find an epsilon-minimax learning procedure: the same iteration bounding
/// `min_g max_theta R_Z(g, theta)`, with no optimal-risk offset.
pub fn solve_minimax(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    source: &LearningSource,
    config: &SolverConfig,
) -> Result<SolverOutcome> {
    solve(object, loss, source, config, Objective::Risk)
}
