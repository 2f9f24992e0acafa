//! Risks, optimal strategies, Bayesian strategies, and regrets.
//!
//! The risk of a strategy `q` under model `theta` is
//!
//! ```text
//! R_X(q, theta) = sum_x sum_y' sum_y q(y'|x) p(y, x; theta) w(y, y')
//! ```
//!
//! All operations here are pure functions of immutable inputs; risks for
//! different `(strategy, theta)` pairs may be evaluated concurrently.

use crate::error::{Error, Result};
use crate::object::{FiniteComplexObject, LossMatrix, Strategy, WeightFunction};

/// Precomputed partial risks `A[x][y'][theta] = sum_y p(x, y; theta) w(y, y')`.
///
/// Every synthesis and evaluation routine in the crate reduces to sums and
/// argmins over this tensor: the risk of a deterministic strategy `d` is
/// `sum_x A[x][d(x)][theta]`, and the Bayesian decision at `x` for weights
/// `u` minimizes `dot(u, A[x][y'])` over `y'`.
#[derive(Debug, Clone)]
pub(crate) struct RiskKernel {
    signal_count: usize,
    state_count: usize,
    model_count: usize,
    /// Row-major `[x][y'][theta]`, contiguous over `theta`.
    partial: Vec<f64>,
}

impl RiskKernel {
    pub(crate) fn new(object: &FiniteComplexObject, loss: &LossMatrix) -> Result<Self> {
        if loss.state_count() != object.state_count() {
            return Err(Error::DimensionMismatch {
                context: "loss matrix side",
                expected: object.state_count(),
                got: loss.state_count(),
            });
        }
        let (nx, ny, nt) = (
            object.signal_count(),
            object.state_count(),
            object.model_count(),
        );
        let mut partial = vec![0.0; nx * ny * nt];
        for x in 0..nx {
            for decided in 0..ny {
                let base = (x * ny + decided) * nt;
                for actual in 0..ny {
                    let w = loss.loss(actual, decided);
                    if w == 0.0 {
                        continue;
                    }
                    for t in 0..nt {
                        partial[base + t] += object.prob(x, actual, t) * w;
                    }
                }
            }
        }
        Ok(Self {
            signal_count: nx,
            state_count: ny,
            model_count: nt,
            partial,
        })
    }

    pub(crate) fn model_count(&self) -> usize {
        self.model_count
    }

    #[inline]
    pub(crate) fn row(&self, signal: usize, decided: usize) -> &[f64] {
        let base = (signal * self.state_count + decided) * self.model_count;
        &self.partial[base..base + self.model_count]
    }

    /// Bayesian decisions for (possibly unnormalized, nonnegative) weights
    /// `u`: per signal, the lowest state index minimizing `dot(u, A[x][y'])`.
    pub(crate) fn bayes_decisions(&self, u: &[f64]) -> Vec<u32> {
        debug_assert_eq!(u.len(), self.model_count);
        let mut decisions = Vec::with_capacity(self.signal_count);
        for x in 0..self.signal_count {
            let mut best = 0u32;
            let mut best_score = dot(u, self.row(x, 0));
            for decided in 1..self.state_count {
                let score = dot(u, self.row(x, decided));
                if score < best_score {
                    best_score = score;
                    best = decided as u32;
                }
            }
            decisions.push(best);
        }
        decisions
    }

    /// Risk vector over models of a deterministic strategy.
    pub(crate) fn decision_risks(&self, decisions: &[u32]) -> Vec<f64> {
        let mut risks = vec![0.0; self.model_count];
        for (x, &d) in decisions.iter().enumerate() {
            let row = self.row(x, d as usize);
            for (r, &a) in risks.iter_mut().zip(row) {
                *r += a;
            }
        }
        risks
    }

    /// Bayesian decisions together with their per-model risks, then the
    /// risks accumulated in one pass.
    pub(crate) fn bayes_decisions_and_risks(&self, u: &[f64]) -> (Vec<u32>, Vec<f64>) {
        let mut decisions = Vec::with_capacity(self.signal_count);
        let mut risks = vec![0.0; self.model_count];
        for x in 0..self.signal_count {
            let mut best = 0usize;
            let mut best_score = dot(u, self.row(x, 0));
            for decided in 1..self.state_count {
                let score = dot(u, self.row(x, decided));
                if score < best_score {
                    best_score = score;
                    best = decided;
                }
            }
            decisions.push(best as u32);
            let row = self.row(x, best);
            for (r, &a) in risks.iter_mut().zip(row) {
                *r += a;
            }
        }
        (decisions, risks)
    }

    /// Risk of an arbitrary randomized strategy under one model.
    pub(crate) fn strategy_risk(&self, strategy: &Strategy, model: usize) -> f64 {
        let mut total = 0.0;
        for x in 0..self.signal_count {
            let row = strategy.row(x);
            for (decided, &qv) in row.iter().enumerate() {
                if qv != 0.0 {
                    total += qv * self.row(x, decided)[model];
                }
            }
        }
        total
    }

    /// Per-model optimal risks `min_q R_X(q, theta)` for every model.
    pub(crate) fn optimal_risks(&self) -> Vec<f64> {
        let mut risks = vec![0.0; self.model_count];
        for x in 0..self.signal_count {
            for t in 0..self.model_count {
                let mut best = self.row(x, 0)[t];
                for decided in 1..self.state_count {
                    let v = self.row(x, decided)[t];
                    if v < best {
                        best = v;
                    }
                }
                risks[t] += best;
            }
        }
        risks
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn check_strategy_dims(object: &FiniteComplexObject, strategy: &Strategy) -> Result<()> {
    if strategy.signal_count() != object.signal_count() {
        return Err(Error::DimensionMismatch {
            context: "strategy signal axis",
            expected: object.signal_count(),
            got: strategy.signal_count(),
        });
    }
    if strategy.state_count() != object.state_count() {
        return Err(Error::DimensionMismatch {
            context: "strategy state axis",
            expected: object.state_count(),
            got: strategy.state_count(),
        });
    }
    Ok(())
}

fn check_weights_dims(object: &FiniteComplexObject, count: usize) -> Result<()> {
    if count != object.model_count() {
        return Err(Error::DimensionMismatch {
            context: "weight function length",
            expected: object.model_count(),
            got: count,
        });
    }
    Ok(())
}

/// Risk `R_X(q, theta)` of a strategy with respect to one model.
pub fn risk(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    strategy: &Strategy,
    model: usize,
) -> Result<f64> {
    check_strategy_dims(object, strategy)?;
    object.check_model(model)?;
    let kernel = RiskKernel::new(object, loss)?;
    Ok(kernel.strategy_risk(strategy, model))
}

/// Deterministic strategy minimizing the risk for a known model: per signal,
/// mass one on the lowest state index minimizing `sum_y p(x, y; theta) w(y, y')`.
pub fn optimal_strategy(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    model: usize,
) -> Result<Strategy> {
    object.check_model(model)?;
    bayes_strategy(object, loss, &WeightFunction::point_mass(model, object.model_count())?)
}

/// Risk of the optimal strategy, `min_q R_X(q, theta)`.
pub fn optimal_risk(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    model: usize,
) -> Result<f64> {
    object.check_model(model)?;
    let kernel = RiskKernel::new(object, loss)?;
    Ok(kernel.optimal_risks()[model])
}

/// Optimal risks for every model in one pass.
pub fn optimal_risks(object: &FiniteComplexObject, loss: &LossMatrix) -> Result<Vec<f64>> {
    Ok(RiskKernel::new(object, loss)?.optimal_risks())
}

/// Bayesian strategy for a weight function `tau`: for each signal the decision
///
/// ```text
/// y* = argmin_y' sum_y [ sum_theta tau(theta) p(x, y; theta) ] w(y, y')
/// ```
///
/// with ties broken toward the lowest state index. With 0-1 loss this equals
/// `argmax_y sum_theta tau(theta) p(x, y; theta)`; the general rule above is
/// always what runs.
pub fn bayes_strategy(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    weights: &WeightFunction,
) -> Result<Strategy> {
    check_weights_dims(object, weights.model_count())?;
    let kernel = RiskKernel::new(object, loss)?;
    let decisions = kernel.bayes_decisions(weights.weights());
    let decisions: Vec<usize> = decisions.into_iter().map(|d| d as usize).collect();
    Strategy::deterministic(&decisions, object.state_count())
}

/// Bayesian strategy for unnormalized nonnegative weights. The argmin is
/// invariant under positive rescaling, so callers may pass raw products such
/// as `tau(theta) p(z; theta)` without normalizing first.
pub fn bayes_strategy_scaled(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    raw_weights: &[f64],
) -> Result<Strategy> {
    check_weights_dims(object, raw_weights.len())?;
    if raw_weights.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidProbabilities {
            context: "unnormalized weights",
            detail: "entries must be finite and nonnegative".into(),
        });
    }
    let kernel = RiskKernel::new(object, loss)?;
    let decisions = kernel.bayes_decisions(raw_weights);
    let decisions: Vec<usize> = decisions.into_iter().map(|d| d as usize).collect();
    Strategy::deterministic(&decisions, object.state_count())
}

/// Regret `R_X(q, theta) - min_q' R_X(q', theta)`.
pub fn regret(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    strategy: &Strategy,
    model: usize,
) -> Result<f64> {
    check_strategy_dims(object, strategy)?;
    object.check_model(model)?;
    let kernel = RiskKernel::new(object, loss)?;
    Ok(kernel.strategy_risk(strategy, model) - kernel.optimal_risks()[model])
}

/// True iff `a` has strictly lower risk than `b` for every model.
/// The comparison is exact, with no tolerance.
pub fn predominates(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    a: &Strategy,
    b: &Strategy,
) -> Result<bool> {
    check_strategy_dims(object, a)?;
    check_strategy_dims(object, b)?;
    let kernel = RiskKernel::new(object, loss)?;
    for t in 0..object.model_count() {
        if kernel.strategy_risk(a, t) >= kernel.strategy_risk(b, t) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_object() -> FiniteComplexObject {
        // 2 signals, 2 states, 1 model, uniform joint probability.
        FiniteComplexObject::new(2, 2, 1, vec![0.25; 4]).unwrap()
    }

    #[test]
    fn zero_loss_forces_zero_risk() {
        let obj = tiny_object();
        let w = LossMatrix::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let q = Strategy::uniform(2, 2).unwrap();
        assert_eq!(risk(&obj, &w, &q, 0).unwrap(), 0.0);
        assert_eq!(optimal_risk(&obj, &w, 0).unwrap(), 0.0);
    }

    #[test]
    fn uniform_object_uniform_strategy_risk_half() {
        // Hand-expanded triple sum: each signal contributes two wrong
        // (y, y') combinations of mass 0.25 * 0.5 each.
        let obj = tiny_object();
        let w = LossMatrix::zero_one(2);
        let q = Strategy::uniform(2, 2).unwrap();
        assert!((risk(&obj, &w, &q, 0).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_loss_optimal_strategy_ties_to_state_zero() {
        let obj = tiny_object();
        let w = LossMatrix::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let s = optimal_strategy(&obj, &w, 0).unwrap();
        assert_eq!(s.decisions(), Some(vec![0, 0]));
    }

    #[test]
    fn single_state_risk_is_forced() {
        let obj = FiniteComplexObject::new(2, 1, 1, vec![0.4, 0.6]).unwrap();
        let w = LossMatrix::new(vec![vec![0.3]]).unwrap();
        let expected = 0.4 * 0.3 + 0.6 * 0.3;
        assert!((optimal_risk(&obj, &w, 0).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn point_mass_bayes_equals_optimal() {
        let probs = vec![
            // x=0: (y0,t0) (y0,t1) (y1,t0) (y1,t1)
            0.1, 0.3, 0.2, 0.1, //
            0.3, 0.2, 0.4, 0.4,
        ];
        let obj = FiniteComplexObject::new(2, 2, 2, probs).unwrap();
        let w = LossMatrix::zero_one(2);
        for t in 0..2 {
            let tau = WeightFunction::point_mass(t, 2).unwrap();
            assert_eq!(
                bayes_strategy(&obj, &w, &tau).unwrap(),
                optimal_strategy(&obj, &w, t).unwrap()
            );
        }
    }

    #[test]
    fn scaled_weights_leave_bayes_unchanged() {
        let probs = vec![0.1, 0.3, 0.2, 0.1, 0.3, 0.2, 0.4, 0.4];
        let obj = FiniteComplexObject::new(2, 2, 2, probs).unwrap();
        let w = LossMatrix::zero_one(2);
        let tau = WeightFunction::new(vec![0.3, 0.7]).unwrap();
        let base = bayes_strategy(&obj, &w, &tau).unwrap();
        let scaled = bayes_strategy_scaled(&obj, &w, &[0.3 * 17.5, 0.7 * 17.5]).unwrap();
        assert_eq!(base, scaled);
    }

    #[test]
    fn regret_of_optimal_is_zero() {
        let obj = tiny_object();
        let w = LossMatrix::zero_one(2);
        let s = optimal_strategy(&obj, &w, 0).unwrap();
        assert!(regret(&obj, &w, &s, 0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn strategy_never_predominates_itself() {
        let obj = tiny_object();
        let w = LossMatrix::zero_one(2);
        let s = Strategy::uniform(2, 2).unwrap();
        assert!(!predominates(&obj, &w, &s, &s).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let obj = tiny_object();
        let w = LossMatrix::zero_one(2);
        let q = Strategy::uniform(3, 2).unwrap();
        assert!(matches!(
            risk(&obj, &w, &q, 0),
            Err(Error::DimensionMismatch { .. })
        ));
        let q = Strategy::uniform(2, 2).unwrap();
        assert!(matches!(
            risk(&obj, &w, &q, 5),
            Err(Error::IndexOutOfRange { .. })
        ));
    }
}
