//! Independent brute-force references used by property tests and the
//! verification suites: exhaustive strategy enumeration, sort-based simplex
//! projection, and grid-search duals. Everything here is size-gated so it
//! stays exact; these routines live in the shipped library so the CLI can
//! expose a `verify` command over them.

use crate::decision::{self, RiskKernel};
use crate::error::{Error, Result};
use crate::learning::LearningSource;
use crate::object::{FiniteComplexObject, LossMatrix, Strategy, WeightFunction};

/// Enumeration gate for `|Y|^|X|` deterministic strategies.
pub const ENUMERATION_BOUND: u128 = 1_000_000;

/// Size gate for instances handled by the exhaustive oracles.
pub const TINY_SIGNALS: usize = 4;
pub const TINY_STATES: usize = 4;
pub const TINY_MODELS: usize = 4;
pub const TINY_OUTCOMES: usize = 8;

/// A size-gated instance for exhaustive analysis.
#[derive(Debug, Clone)]
pub struct TinyInstance {
    pub object: FiniteComplexObject,
    pub loss: LossMatrix,
    pub source: Option<LearningSource>,
}

impl TinyInstance {
    pub fn new(
        object: FiniteComplexObject,
        loss: LossMatrix,
        source: Option<LearningSource>,
    ) -> Result<Self> {
        if object.signal_count() > TINY_SIGNALS
            || object.state_count() > TINY_STATES
            || object.model_count() > TINY_MODELS
        {
            return Err(Error::OracleBound(format!(
                "instance {}x{}x{} exceeds the tiny-instance gate {}x{}x{}",
                object.signal_count(),
                object.state_count(),
                object.model_count(),
                TINY_SIGNALS,
                TINY_STATES,
                TINY_MODELS
            )));
        }
        if let Some(s) = &source {
            if s.outcome_count() > TINY_OUTCOMES {
                return Err(Error::OracleBound(format!(
                    "source with {} outcomes exceeds the gate of {TINY_OUTCOMES}",
                    s.outcome_count()
                )));
            }
            if s.model_count() != object.model_count() {
                return Err(Error::DimensionMismatch {
                    context: "tiny instance source",
                    expected: object.model_count(),
                    got: s.model_count(),
                });
            }
        }
        if loss.state_count() != object.state_count() {
            return Err(Error::DimensionMismatch {
                context: "tiny instance loss",
                expected: object.state_count(),
                got: loss.state_count(),
            });
        }
        Ok(Self {
            object,
            loss,
            source,
        })
    }
}

/// Exact Euclidean projection onto the probability simplex via sorted
/// thresholding. Oracle for the iterative projection in the solver.
pub fn sort_projection(v: &[f64]) -> Result<WeightFunction> {
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
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut running = 0.0;
    let mut threshold = 0.0;
    let mut support = 0usize;
    for (j, &u) in sorted.iter().enumerate() {
        running += u;
        let candidate = (running - 1.0) / (j + 1) as f64;
        if u - candidate > 0.0 {
            threshold = candidate;
            support = j + 1;
        }
    }
    debug_assert!(support > 0);
    let tau: Vec<f64> = v.iter().map(|&u| (u - threshold).max(0.0)).collect();
    // remove the rounding residue so the result is a valid weight function
    let sum: f64 = tau.iter().sum();
    let mut tau = tau;
    if sum > 0.0 && (sum - 1.0).abs() > 0.0 {
        let mut largest = 0;
        for i in 1..tau.len() {
            if tau[i] > tau[largest] {
                largest = i;
            }
        }
        tau[largest] += 1.0 - sum;
        if tau[largest] < 0.0 {
            tau[largest] = 0.0;
        }
    }
    WeightFunction::new(tau)
}

/// All deterministic strategies of an instance, in canonical (lexicographic
/// decision-vector) order. Gated by `|Y|^|X| <= ENUMERATION_BOUND`.
pub fn enumerate_deterministic_strategies(instance: &TinyInstance) -> Result<Vec<Strategy>> {
    let nx = instance.object.signal_count();
    let ny = instance.object.state_count();
    let total = (ny as u128)
        .checked_pow(nx as u32)
        .ok_or_else(|| Error::OracleBound("strategy count overflows".into()))?;
    if total > ENUMERATION_BOUND {
        return Err(Error::OracleBound(format!(
            "{total} deterministic strategies exceed the enumeration bound {ENUMERATION_BOUND}"
        )));
    }
    let mut all = Vec::with_capacity(total as usize);
    let mut decisions = vec![0usize; nx];
    loop {
        all.push(Strategy::deterministic(&decisions, ny)?);
        let mut i = nx;
        loop {
            if i == 0 {
                return Ok(all);
            }
            i -= 1;
            decisions[i] += 1;
            if decisions[i] < ny {
                break;
            }
            decisions[i] = 0;
        }
    }
}

/// Search for a deterministic strategy that strictly predominates `target`
/// on every model, or report that none was found.
///
/// Two routes run in order: Bayesian candidates over a weight grid (by the
/// dichotomy argument, when anything predominates a strategy some Bayesian
/// strategy does; risk is linear, so deterministic Bayes responses suffice
/// among the candidates), then exhaustive enumeration when `|Y|^|X|` is
/// within the bound. Instances too large to enumerate with more than three
/// models are rejected.
pub fn domination_search(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    target: &Strategy,
) -> Result<Option<Strategy>> {
    let kernel = RiskKernel::new(object, loss)?;
    let nt = object.model_count();
    let target_risks: Vec<f64> = (0..nt).map(|t| kernel.strategy_risk(target, t)).collect();

    let beats = |risks: &[f64]| -> bool {
        risks
            .iter()
            .zip(&target_risks)
            .all(|(&r, &t)| r < t)
    };

    // route 1: Bayesian candidates on a weight grid
    let grid_points: usize = match nt {
        1 => 1,
        2 => 201,
        3 => 61,
        _ => 11,
    };
    for tau in simplex_grid(nt, grid_points) {
        let (decisions, risks) = kernel.bayes_decisions_and_risks(&tau);
        if beats(&risks) {
            let decisions: Vec<usize> = decisions.into_iter().map(|d| d as usize).collect();
            return Ok(Some(Strategy::deterministic(
                &decisions,
                object.state_count(),
            )?));
        }
    }

    // route 2: exhaustive enumeration on small instances
    let nx = object.signal_count();
    let ny = object.state_count();
    let total = (ny as u128).checked_pow(nx as u32);
    match total {
        Some(total) if total <= ENUMERATION_BOUND => {
            let mut decisions = vec![0usize; nx];
            loop {
                let dec_u32: Vec<u32> = decisions.iter().map(|&d| d as u32).collect();
                let risks = kernel.decision_risks(&dec_u32);
                if beats(&risks) {
                    return Ok(Some(Strategy::deterministic(&decisions, ny)?));
                }
                let mut i = nx;
                loop {
                    if i == 0 {
                        return Ok(None);
                    }
                    i -= 1;
                    decisions[i] += 1;
                    if decisions[i] < ny {
                        break;
                    }
                    decisions[i] = 0;
                }
            }
        }
        _ if nt <= 3 => Ok(None), // the Bayes grid was dense enough to decide
        _ => Err(Error::OracleBound(format!(
            "instance with {nx} signals and {nt} models is too large for the domination search"
        ))),
    }
}

/// Uniform grid over the probability simplex with `points` levels per
/// dimension (exact enumeration of compositions).
fn simplex_grid(dims: usize, points: usize) -> Vec<Vec<f64>> {
    assert!(dims >= 1 && points >= 1);
    let levels = points - 1;
    let mut result = Vec::new();
    if levels == 0 {
        result.push(vec![1.0 / dims as f64; dims]);
        return result;
    }
    // compositions of `levels` into `dims` parts
    let mut parts = vec![0usize; dims];
    fn recurse(parts: &mut Vec<usize>, i: usize, remaining: usize, levels: usize, out: &mut Vec<Vec<f64>>) {
        if i + 1 == parts.len() {
            parts[i] = remaining;
            out.push(parts.iter().map(|&p| p as f64 / levels as f64).collect());
            return;
        }
        for v in 0..=remaining {
            parts[i] = v;
            recurse(parts, i + 1, remaining - v, levels, out);
        }
    }
    recurse(&mut parts, 0, levels, levels, &mut result);
    result
}

/// Exhaustive stand-in for the supergradient ascent: the maximum of
/// `Phi(tau)` over a uniform weight grid. A lower bound on the optimum,
/// certified within the grid resolution times the loss range.
pub fn grid_dual_value(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    source: &LearningSource,
    grid_points: usize,
) -> Result<f64> {
    let nt = object.model_count();
    if nt > 3 {
        return Err(Error::OracleBound(format!(
            "dense weight grids are limited to 3 models, got {nt}"
        )));
    }
    if grid_points < 2 && nt > 1 {
        return Err(Error::InvalidConfig("grid needs at least 2 points".into()));
    }
    let mut best = f64::NEG_INFINITY;
    for tau in simplex_grid(nt, grid_points.max(1)) {
        let w = WeightFunction::new(tau)
            .unwrap_or_else(|_| WeightFunction::uniform(nt).expect("nonempty"));
        let value = crate::solver::phi(object, loss, source, &w)?;
        if value > best {
            best = value;
        }
    }
    Ok(best)
}

/// Brute-force optimal strategy: the enumerated deterministic strategy with
/// the lowest risk for a model (ties toward the canonical order).
pub fn brute_force_optimal(instance: &TinyInstance, model: usize) -> Result<(Strategy, f64)> {
    instance.object.check_model(model)?;
    let all = enumerate_deterministic_strategies(instance)?;
    let mut best: Option<(Strategy, f64)> = None;
    for s in all {
        let r = decision::risk(&instance.object, &instance.loss, &s, model)?;
        match &best {
            Some((_, rb)) if *rb <= r => {}
            _ => best = Some((s, r)),
        }
    }
    Ok(best.expect("at least one strategy exists"))
}
