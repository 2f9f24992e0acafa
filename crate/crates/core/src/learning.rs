//! Learning-information sources and learning procedures.
//!
//! A source emits an outcome `z` whose distribution `p(z; theta)` depends on
//! the unknown model but, given the model, not on the current signal or
//! state. A learning procedure `g` maps each outcome to a recognition
//! strategy; its quality under model `theta` is the expected risk
//!
//! ```text
//! R_Z(g, theta) = sum_z p(z; theta) R_X(g(z), theta)
//! ```
//!
//! Sample-based sources are compressed by default through exchangeable
//! statistics (state counts, pair multisets, quantized-signal multisets):
//! the likelihood of an i.i.d. sample factors through its multiset, so the
//! quotient is lossless for every procedure this crate constructs. The
//! uncompressed product sources remain available as test oracles.

use rayon::prelude::*;

use crate::decision::{self, RiskKernel};
use crate::error::{Error, Result};
use crate::object::{FiniteComplexObject, LossMatrix, Strategy, WeightFunction, PROB_TOL};

/// Default cap on the number of source outcomes. Exceeding it is an error,
/// not silent subsampling.
pub const DEFAULT_OUTCOME_BUDGET: usize = 5_000_000;

/// Outcomes below this chunk count are evaluated sequentially; larger sources
/// are split into fixed chunks whose partial sums are combined in index
/// order, so results do not depend on thread scheduling.
const PAR_CHUNK: usize = 64;

/// Finite source of learning information: `p[z][theta]`.
///
/// For every model the outcome probabilities sum to one within [`PROB_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct LearningSource {
    outcome_count: usize,
    model_count: usize,
    /// Row-major `[z][theta]`.
    cond: Vec<f64>,
    descriptors: Option<Vec<String>>,
}

impl LearningSource {
    pub fn new(outcome_count: usize, model_count: usize, cond: Vec<f64>) -> Result<Self> {
        if outcome_count == 0 || model_count == 0 {
            return Err(Error::DimensionMismatch {
                context: "learning source axes",
                expected: 1,
                got: 0,
            });
        }
        if cond.len() != outcome_count * model_count {
            return Err(Error::DimensionMismatch {
                context: "learning source table",
                expected: outcome_count * model_count,
                got: cond.len(),
            });
        }
        for (i, &p) in cond.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidProbabilities {
                    context: "learning source table",
                    detail: format!("entry {i} is {p}"),
                });
            }
        }
        for t in 0..model_count {
            let sum: f64 = (0..outcome_count).map(|z| cond[z * model_count + t]).sum();
            if (sum - 1.0).abs() > PROB_TOL {
                return Err(Error::InvalidProbabilities {
                    context: "learning source table",
                    detail: format!("model {t} outcome probabilities sum to {sum}"),
                });
            }
        }
        Ok(Self {
            outcome_count,
            model_count,
            cond,
            descriptors: None,
        })
    }

    /// The degenerate source carrying no information: a single outcome with
    /// probability one under every model.
    pub fn no_learning(model_count: usize) -> Result<Self> {
        let mut s = Self::new(1, model_count, vec![1.0; model_count])?;
        s.descriptors = Some(vec!["no learning information".into()]);
        Ok(s)
    }

    pub fn with_descriptors(mut self, descriptors: Vec<String>) -> Result<Self> {
        if descriptors.len() != self.outcome_count {
            return Err(Error::DimensionMismatch {
                context: "outcome descriptors",
                expected: self.outcome_count,
                got: descriptors.len(),
            });
        }
        self.descriptors = Some(descriptors);
        Ok(self)
    }

    pub fn outcome_count(&self) -> usize {
        self.outcome_count
    }

    pub fn model_count(&self) -> usize {
        self.model_count
    }

    /// Probability `p(z; theta)`.
    #[inline]
    pub fn prob(&self, outcome: usize, model: usize) -> f64 {
        self.cond[outcome * self.model_count + model]
    }

    /// Row `p(z; .)` over all models.
    #[inline]
    pub fn row(&self, outcome: usize) -> &[f64] {
        &self.cond[outcome * self.model_count..(outcome + 1) * self.model_count]
    }

    pub fn descriptors(&self) -> Option<&[String]> {
        self.descriptors.as_deref()
    }

    pub fn table(&self) -> &[f64] {
        &self.cond
    }

    fn check_object(&self, object: &FiniteComplexObject) -> Result<()> {
        if self.model_count != object.model_count() {
            return Err(Error::DimensionMismatch {
                context: "learning source model axis",
                expected: object.model_count(),
                got: self.model_count,
            });
        }
        Ok(())
    }
}

/// A learning procedure `g: Z -> Q`.
#[derive(Debug, Clone, PartialEq)]
pub enum LearningProcedure {
    /// One strategy per outcome, listed in outcome order.
    Explicit(Vec<Strategy>),
    /// Bayesian procedure for a weight function: the strategy for outcome
    /// `z` is the Bayes response under unnormalized weights
    /// `tau(theta) p(z; theta)`, computed on demand. When the product is
    /// zero for every model the plain `tau` is used for that outcome.
    ImplicitBayes(WeightFunction),
}

impl LearningProcedure {
    /// Constant procedure that returns the same strategy for every outcome.
    pub fn constant(outcomes: usize, strategy: Strategy) -> Self {
        LearningProcedure::Explicit(vec![strategy; outcomes])
    }
}

fn posterior_weights(tau: &[f64], likelihood: &[f64]) -> Vec<f64> {
    let u: Vec<f64> = tau.iter().zip(likelihood).map(|(&t, &l)| t * l).collect();
    if u.iter().all(|&v| v == 0.0) {
        tau.to_vec()
    } else {
        u
    }
}

/// The strategy a procedure assigns to one outcome.
pub fn procedure_strategy(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    source: &LearningSource,
    procedure: &LearningProcedure,
    outcome: usize,
) -> Result<Strategy> {
    source.check_object(object)?;
    if outcome >= source.outcome_count() {
        return Err(Error::IndexOutOfRange {
            axis: "outcome",
            index: outcome,
            size: source.outcome_count(),
        });
    }
    match procedure {
        LearningProcedure::Explicit(strategies) => {
            if strategies.len() != source.outcome_count() {
                return Err(Error::DimensionMismatch {
                    context: "explicit procedure table",
                    expected: source.outcome_count(),
                    got: strategies.len(),
                });
            }
            Ok(strategies[outcome].clone())
        }
        LearningProcedure::ImplicitBayes(tau) => {
            let u = posterior_weights(tau.weights(), source.row(outcome));
            decision::bayes_strategy_scaled(object, loss, &u)
        }
    }
}

/// Expected risk `R_Z(g, theta)` of a procedure under one model.
pub fn expected_risk(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    source: &LearningSource,
    procedure: &LearningProcedure,
    model: usize,
) -> Result<f64> {
    object.check_model(model)?;
    Ok(procedure_risk_curve(object, loss, source, procedure)?[model])
}

/// Expected risks of a procedure for every model in one pass over outcomes.
pub fn procedure_risk_curve(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    source: &LearningSource,
    procedure: &LearningProcedure,
) -> Result<Vec<f64>> {
    source.check_object(object)?;
    let kernel = RiskKernel::new(object, loss)?;
    match procedure {
        LearningProcedure::Explicit(strategies) => {
            if strategies.len() != source.outcome_count() {
                return Err(Error::DimensionMismatch {
                    context: "explicit procedure table",
                    expected: source.outcome_count(),
                    got: strategies.len(),
                });
            }
            let nt = object.model_count();
            let mut curve = vec![0.0; nt];
            for (z, strategy) in strategies.iter().enumerate() {
                if strategy.signal_count() != object.signal_count()
                    || strategy.state_count() != object.state_count()
                {
                    return Err(Error::DimensionMismatch {
                        context: "explicit procedure strategy",
                        expected: object.signal_count(),
                        got: strategy.signal_count(),
                    });
                }
                let p = source.row(z);
                for t in 0..nt {
                    if p[t] != 0.0 {
                        curve[t] += p[t] * kernel.strategy_risk(strategy, t);
                    }
                }
            }
            Ok(curve)
        }
        LearningProcedure::ImplicitBayes(tau) => {
            if tau.model_count() != object.model_count() {
                return Err(Error::DimensionMismatch {
                    context: "weight function length",
                    expected: object.model_count(),
                    got: tau.model_count(),
                });
            }
            Ok(bayes_risk_curve_kernel(&kernel, source, tau.weights()))
        }
    }
}

/// `R_Z(g_tau, theta)` for every model, where `g_tau` is the Bayesian
/// procedure for weights `tau`. Shared with the solver's inner loop.
pub(crate) fn bayes_risk_curve_kernel(
    kernel: &RiskKernel,
    source: &LearningSource,
    tau: &[f64],
) -> Vec<f64> {
    let nt = kernel.model_count();
    let nz = source.outcome_count();
    let eval_range = |range: std::ops::Range<usize>| {
        let mut acc = vec![0.0; nt];
        for z in range {
            let likelihood = source.row(z);
            let u = posterior_weights(tau, likelihood);
            let (_, risks) = kernel.bayes_decisions_and_risks(&u);
            for t in 0..nt {
                acc[t] += likelihood[t] * risks[t];
            }
        }
        acc
    };
    combine_chunked(nz, eval_range)
}

/// Expected risks of an explicit procedure given per-outcome deterministic
/// decisions, without materializing strategies. Used by the Gaussian
/// heuristics whose outcome spaces can be large.
pub(crate) fn risk_curve_by<F>(
    kernel: &RiskKernel,
    source: &LearningSource,
    decisions_for: F,
) -> Vec<f64>
where
    F: Fn(usize) -> Vec<u32> + Sync,
{
    let nt = kernel.model_count();
    let nz = source.outcome_count();
    let eval_range = |range: std::ops::Range<usize>| {
        let mut acc = vec![0.0; nt];
        for z in range {
            let likelihood = source.row(z);
            let risks = kernel.decision_risks(&decisions_for(z));
            for t in 0..nt {
                acc[t] += likelihood[t] * risks[t];
            }
        }
        acc
    };
    combine_chunked(nz, eval_range)
}

/// Evaluate `eval` over chunked outcome ranges, in parallel when the source
/// is large, and combine partial sums in chunk order for determinism.
fn combine_chunked<F>(nz: usize, eval: F) -> Vec<f64>
where
    F: Fn(std::ops::Range<usize>) -> Vec<f64> + Sync,
{
    if nz <= 2 * PAR_CHUNK {
        return eval(0..nz);
    }
    let chunk_count = nz.div_ceil(PAR_CHUNK);
    let partials: Vec<Vec<f64>> = (0..chunk_count)
        .into_par_iter()
        .map(|c| eval(c * PAR_CHUNK..((c + 1) * PAR_CHUNK).min(nz)))
        .collect();
    let mut total = partials[0].clone();
    for part in &partials[1..] {
        for (a, b) in total.iter_mut().zip(part) {
            *a += b;
        }
    }
    total
}

/// Bayesian learning procedure for a weight function: minimizes
/// `sum_theta tau(theta) R_Z(g, theta)` over all procedures. The objective
/// decomposes per outcome, so the minimizer responds to each `z` with the
/// Bayes strategy under weights `tau(theta) p(z; theta)`.
pub fn bayes_learning_procedure(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    source: &LearningSource,
    weights: &WeightFunction,
) -> Result<LearningProcedure> {
    source.check_object(object)?;
    if loss.state_count() != object.state_count() {
        return Err(Error::DimensionMismatch {
            context: "loss matrix side",
            expected: object.state_count(),
            got: loss.state_count(),
        });
    }
    if weights.model_count() != object.model_count() {
        return Err(Error::DimensionMismatch {
            context: "weight function length",
            expected: object.model_count(),
            got: weights.model_count(),
        });
    }
    Ok(LearningProcedure::ImplicitBayes(weights.clone()))
}

// ---------------------------------------------------------------------------
// Maximum-likelihood learning
// ---------------------------------------------------------------------------

/// Index of the model maximizing a log-likelihood slice; ties go to the
/// lowest index; an all `-inf` slice means no model explains the sample.
fn argmax_finite(scores: &[f64]) -> Result<usize> {
    let mut best = 0usize;
    let mut best_score = scores[0];
    for (t, &s) in scores.iter().enumerate().skip(1) {
        if s > best_score {
            best_score = s;
            best = t;
        }
    }
    if best_score == f64::NEG_INFINITY {
        return Err(Error::ImpossibleSample);
    }
    Ok(best)
}

/// Maximum-likelihood model for a labeled sample of `(signal, state)` pairs:
/// `argmax_theta prod_i p(x_i, y_i; theta)`, scanned exhaustively in the log
/// domain. A zero factor sends a model to `-inf`; such a model never wins
/// unless all do, in which case the sample is impossible. The sample is
/// scored in a canonical order so permutations yield identical results.
pub fn ml_supervised_estimate(
    object: &FiniteComplexObject,
    sample: &[(usize, usize)],
) -> Result<usize> {
    if sample.is_empty() {
        return Err(Error::EmptySample("supervised learning sample"));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_unstable();
    let nt = object.model_count();
    let mut scores = vec![0.0; nt];
    for &(x, y) in &sorted {
        if x >= object.signal_count() {
            return Err(Error::IndexOutOfRange {
                axis: "signal",
                index: x,
                size: object.signal_count(),
            });
        }
        if y >= object.state_count() {
            return Err(Error::IndexOutOfRange {
                axis: "state",
                index: y,
                size: object.state_count(),
            });
        }
        for (t, score) in scores.iter_mut().enumerate() {
            *score += object.prob(x, y, t).ln();
        }
    }
    argmax_finite(&scores)
}

/// Supervised maximum-likelihood learning: estimate the model from the
/// labeled sample, then recognize as if the estimate were the true model.
pub fn ml_supervised_learn(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    sample: &[(usize, usize)],
) -> Result<Strategy> {
    let model = ml_supervised_estimate(object, sample)?;
    decision::optimal_strategy(object, loss, model)
}

/// Maximum-likelihood model for an unlabeled signal sample:
/// `argmax_theta sum_i log sum_y p(x_i, y; theta)`. The model set is finite,
/// so the scan is exact and no iterative reestimation is needed.
pub fn ml_unsupervised_estimate(object: &FiniteComplexObject, signals: &[usize]) -> Result<usize> {
    if signals.is_empty() {
        return Err(Error::EmptySample("unsupervised learning sample"));
    }
    let mut sorted = signals.to_vec();
    sorted.sort_unstable();
    let nt = object.model_count();
    let mut scores = vec![0.0; nt];
    for &x in &sorted {
        if x >= object.signal_count() {
            return Err(Error::IndexOutOfRange {
                axis: "signal",
                index: x,
                size: object.signal_count(),
            });
        }
        for (t, score) in scores.iter_mut().enumerate() {
            *score += object.signal_marginal(x, t).ln();
        }
    }
    argmax_finite(&scores)
}

/// Unsupervised maximum-likelihood learning: marginal-likelihood scan over
/// the finite model set, then the optimal strategy at the winner.
pub fn ml_unsupervised_learn(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    signals: &[usize],
) -> Result<Strategy> {
    let model = ml_unsupervised_estimate(object, signals)?;
    decision::optimal_strategy(object, loss, model)
}

/// Plug-in procedure that treats the source-likelihood maximizer as the true
/// model: `g(z) = optimal_strategy(argmax_theta p(z; theta))`. Outcomes with
/// zero probability under every model fall back to the lowest model index;
/// they occur with probability zero and contribute nothing to `R_Z`.
pub fn ml_procedure(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    source: &LearningSource,
) -> Result<LearningProcedure> {
    source.check_object(object)?;
    let mut strategies = Vec::with_capacity(source.outcome_count());
    let mut per_model: Vec<Option<Strategy>> = vec![None; object.model_count()];
    for z in 0..source.outcome_count() {
        let row = source.row(z);
        let mut best = 0usize;
        let mut best_p = row[0];
        for (t, &p) in row.iter().enumerate().skip(1) {
            if p > best_p {
                best_p = p;
                best = t;
            }
        }
        let strategy = match &per_model[best] {
            Some(s) => s.clone(),
            None => {
                let s = decision::optimal_strategy(object, loss, best)?;
                per_model[best] = Some(s.clone());
                s
            }
        };
        strategies.push(strategy);
    }
    Ok(LearningProcedure::Explicit(strategies))
}

// ---------------------------------------------------------------------------
// Source constructors
// ---------------------------------------------------------------------------

/// A compressed sample source together with the multiset of cells behind
/// each outcome. The multiset is what downstream code needs to reconstruct a
/// representative sample for an outcome.
#[derive(Debug, Clone)]
pub struct MultisetSource {
    pub source: LearningSource,
    /// Per outcome, the sorted cell indices of the sample (length = n).
    pub outcomes: Vec<Vec<u32>>,
}

/// Signal quantizer: maps each signal index onto one of `cell_count` cells.
#[derive(Debug, Clone)]
pub struct SignalQuantizer {
    cell_of: Vec<u32>,
    cell_count: usize,
}

impl SignalQuantizer {
    pub fn new(cell_of: Vec<u32>, cell_count: usize) -> Result<Self> {
        if cell_count == 0 || cell_of.is_empty() {
            return Err(Error::DimensionMismatch {
                context: "quantizer cells",
                expected: 1,
                got: 0,
            });
        }
        if let Some(&bad) = cell_of.iter().find(|&&c| c as usize >= cell_count) {
            return Err(Error::IndexOutOfRange {
                axis: "quantizer cell",
                index: bad as usize,
                size: cell_count,
            });
        }
        Ok(Self { cell_of, cell_count })
    }

    pub fn signal_count(&self) -> usize {
        self.cell_of.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cell_count
    }

    #[inline]
    pub fn cell(&self, signal: usize) -> usize {
        self.cell_of[signal] as usize
    }
}

fn multiset_count(cells: usize, n: usize) -> Result<u128> {
    // C(cells + n - 1, n) with overflow checks.
    let mut value: u128 = 1;
    for i in 0..n {
        value = value
            .checked_mul((cells + i) as u128)
            .ok_or(Error::OutcomeBudget {
                required: u128::MAX,
                budget: 0,
            })?;
        value /= (i + 1) as u128;
    }
    Ok(value)
}

fn check_budget(required: u128, budget: usize) -> Result<()> {
    if required > budget as u128 {
        return Err(Error::OutcomeBudget { required, budget });
    }
    Ok(())
}

/// Enumerate all non-decreasing index sequences of length `n` over `cells`
/// cells, in lexicographic order.
fn enumerate_multisets(cells: usize, n: usize) -> Vec<Vec<u32>> {
    let mut all = Vec::new();
    let mut current = vec![0u32; n];
    loop {
        all.push(current.clone());
        // advance to the next non-decreasing sequence
        let mut i = n;
        loop {
            if i == 0 {
                return all;
            }
            i -= 1;
            if (current[i] as usize) < cells - 1 {
                let v = current[i] + 1;
                for slot in current.iter_mut().skip(i) {
                    *slot = v;
                }
                break;
            }
        }
        if n == 0 {
            return all;
        }
    }
}

/// Multinomial probability of a sorted multiset under per-cell probabilities.
fn multiset_prob(multiset: &[u32], cell_probs: &[f64]) -> f64 {
    let n = multiset.len();
    let mut prob = 1.0;
    let mut coeff = 1.0;
    let mut placed = 0usize;
    let mut i = 0;
    while i < n {
        let cell = multiset[i];
        let mut m = 0usize;
        while i < n && multiset[i] == cell {
            m += 1;
            i += 1;
        }
        // running multinomial coefficient: prod over groups of C(placed + m, m)
        for k in 1..=m {
            placed += 1;
            coeff = coeff * placed as f64 / k as f64;
        }
        prob *= cell_probs[cell as usize].powi(m as i32);
    }
    coeff * prob
}

fn describe_multiset(multiset: &[u32], prefix: &str) -> String {
    if multiset.is_empty() {
        return "empty sample".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < multiset.len() {
        let cell = multiset[i];
        let mut m = 0;
        while i < multiset.len() && multiset[i] == cell {
            m += 1;
            i += 1;
        }
        parts.push(format!("{prefix}{cell}*{m}"));
    }
    parts.join(",")
}

/// Build a multiset source from per-cell, per-model probabilities
/// (`cell_probs[cell][theta]`, each model column summing to one).
fn multiset_source(
    cell_probs: &[Vec<f64>],
    model_count: usize,
    n: usize,
    budget: usize,
    prefix: &str,
) -> Result<MultisetSource> {
    let cells = cell_probs.len();
    check_budget(multiset_count(cells, n)?, budget)?;
    let outcomes = enumerate_multisets(cells, n);
    let mut cond = Vec::with_capacity(outcomes.len() * model_count);
    let mut per_model_cells = vec![vec![0.0; cells]; model_count];
    for (c, probs) in cell_probs.iter().enumerate() {
        for t in 0..model_count {
            per_model_cells[t][c] = probs[t];
        }
    }
    for multiset in &outcomes {
        for cells_t in per_model_cells.iter() {
            cond.push(multiset_prob(multiset, cells_t));
        }
    }
    let descriptors = outcomes.iter().map(|m| describe_multiset(m, prefix)).collect();
    let source = LearningSource::new(outcomes.len(), model_count, cond)?
        .with_descriptors(descriptors)?;
    Ok(MultisetSource { source, outcomes })
}

/// Source observing `n` i.i.d. state labels, compressed to state counts.
/// For two states this is the binomial count of state-0 labels.
pub fn state_count_source(
    object: &FiniteComplexObject,
    n: usize,
    budget: usize,
) -> Result<MultisetSource> {
    let ny = object.state_count();
    let nt = object.model_count();
    let cell_probs: Vec<Vec<f64>> = (0..ny)
        .map(|y| (0..nt).map(|t| object.state_marginal(y, t)).collect())
        .collect();
    multiset_source(&cell_probs, nt, n, budget, "y")
}

/// Source observing `n` i.i.d. labeled pairs, compressed to the multiset of
/// `(signal, state)` pairs. Pair cell index is `x * |Y| + y`.
pub fn supervised_source(
    object: &FiniteComplexObject,
    n: usize,
    budget: usize,
) -> Result<MultisetSource> {
    let (nx, ny, nt) = (
        object.signal_count(),
        object.state_count(),
        object.model_count(),
    );
    let mut cell_probs = Vec::with_capacity(nx * ny);
    for x in 0..nx {
        for y in 0..ny {
            cell_probs.push((0..nt).map(|t| object.prob(x, y, t)).collect());
        }
    }
    multiset_source(&cell_probs, nt, n, budget, "xy")
}

/// Uncompressed supervised source over ordered tuples in `(X x Y)^n`.
/// Outcome index encodes the tuple in base `|X| * |Y|`, most significant
/// observation first. Kept as a small-sample oracle for compression tests.
pub fn supervised_source_uncompressed(
    object: &FiniteComplexObject,
    n: usize,
    budget: usize,
) -> Result<LearningSource> {
    let (nx, ny, nt) = (
        object.signal_count(),
        object.state_count(),
        object.model_count(),
    );
    let pair_count = nx * ny;
    let required = (pair_count as u128)
        .checked_pow(n as u32)
        .ok_or(Error::OutcomeBudget {
            required: u128::MAX,
            budget,
        })?;
    check_budget(required, budget)?;
    let nz = required as usize;
    let mut cond = Vec::with_capacity(nz * nt);
    let mut descriptors = Vec::with_capacity(nz);
    for z in 0..nz {
        let mut prob = vec![1.0; nt];
        let mut rest = z;
        let mut parts = Vec::with_capacity(n);
        for _ in 0..n {
            let pair = rest % pair_count;
            rest /= pair_count;
            let (x, y) = (pair / ny, pair % ny);
            parts.push(format!("(x{x},y{y})"));
            for (t, p) in prob.iter_mut().enumerate() {
                *p *= object.prob(x, y, t);
            }
        }
        parts.reverse();
        descriptors.push(if parts.is_empty() {
            "empty sample".into()
        } else {
            parts.join(",")
        });
        cond.extend(prob);
    }
    LearningSource::new(nz, nt, cond)?.with_descriptors(descriptors)
}

/// Uncompressed source over ordered state sequences in `Y^n`; the sequence
/// oracle matching [`state_count_source`].
pub fn state_sequence_source(
    object: &FiniteComplexObject,
    n: usize,
    budget: usize,
) -> Result<LearningSource> {
    let (ny, nt) = (object.state_count(), object.model_count());
    let required = (ny as u128).checked_pow(n as u32).ok_or(Error::OutcomeBudget {
        required: u128::MAX,
        budget,
    })?;
    check_budget(required, budget)?;
    let nz = required as usize;
    let marginals: Vec<Vec<f64>> = (0..ny)
        .map(|y| (0..nt).map(|t| object.state_marginal(y, t)).collect())
        .collect();
    let mut cond = Vec::with_capacity(nz * nt);
    for z in 0..nz {
        let mut prob = vec![1.0; nt];
        let mut rest = z;
        for _ in 0..n {
            let y = rest % ny;
            rest /= ny;
            for (t, p) in prob.iter_mut().enumerate() {
                *p *= marginals[y][t];
            }
        }
        cond.extend(prob);
    }
    LearningSource::new(nz, nt, cond)
}

/// Source observing `n` i.i.d. unlabeled signals, quantized to cells and
/// compressed to multisets. Cell probability under a model is the aggregated
/// signal marginal over the cell.
pub fn quantized_signal_source(
    object: &FiniteComplexObject,
    quantizer: &SignalQuantizer,
    n: usize,
    budget: usize,
) -> Result<MultisetSource> {
    if quantizer.signal_count() != object.signal_count() {
        return Err(Error::DimensionMismatch {
            context: "quantizer signal axis",
            expected: object.signal_count(),
            got: quantizer.signal_count(),
        });
    }
    let nt = object.model_count();
    let mut cell_probs = vec![vec![0.0; nt]; quantizer.cell_count()];
    for x in 0..object.signal_count() {
        let cell = quantizer.cell(x);
        for t in 0..nt {
            cell_probs[cell][t] += object.signal_marginal(x, t);
        }
    }
    multiset_source(&cell_probs, nt, n, budget, "cell")
}

/// Source observing `n` i.i.d. signals generated with the object held in one
/// known state, quantized and compressed as in [`quantized_signal_source`].
/// Cell probabilities aggregate the conditional `p(x | y = state; theta)`;
/// every model must give the conditioning state positive probability.
pub fn quantized_state_signal_source(
    object: &FiniteComplexObject,
    state: usize,
    quantizer: &SignalQuantizer,
    n: usize,
    budget: usize,
) -> Result<MultisetSource> {
    if state >= object.state_count() {
        return Err(Error::IndexOutOfRange {
            axis: "state",
            index: state,
            size: object.state_count(),
        });
    }
    if quantizer.signal_count() != object.signal_count() {
        return Err(Error::DimensionMismatch {
            context: "quantizer signal axis",
            expected: object.signal_count(),
            got: quantizer.signal_count(),
        });
    }
    let nt = object.model_count();
    let mut state_mass = vec![0.0; nt];
    for (t, mass) in state_mass.iter_mut().enumerate() {
        *mass = object.state_marginal(state, t);
        if *mass <= PROB_TOL {
            return Err(Error::InvalidProbabilities {
                context: "conditional signal source",
                detail: format!("state {state} has probability {mass} under model {t}"),
            });
        }
    }
    let mut cell_probs = vec![vec![0.0; nt]; quantizer.cell_count()];
    for x in 0..object.signal_count() {
        let cell = quantizer.cell(x);
        for t in 0..nt {
            cell_probs[cell][t] += object.prob(x, state, t) / state_mass[t];
        }
    }
    multiset_source(&cell_probs, nt, n, budget, "cell")
}
