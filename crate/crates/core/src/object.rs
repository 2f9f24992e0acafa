//! Domain types for finite complex objects and decision strategies.
//!
//! A complex object couples a set of observable signals `X`, a set of hidden
//! states `Y`, and a finite set of candidate models `Theta`; the joint
//! probability `p(x, y; theta)` is known for every model but the model that
//! actually generates the data is fixed and unknown. Recognition strategies
//! are stochastic maps from signals to state decisions, and weight functions
//! are points on the probability simplex over models.

use crate::error::{Error, Result};

/// Tolerance used when validating probability normalization at construction.
pub const PROB_TOL: f64 = 1e-9;

/// Joint probability tensor `p[x][y][theta]` over signals, states, and models.
///
/// Invariants enforced at construction: every entry is a finite nonnegative
/// number and, for every model, the entries sum to one within [`PROB_TOL`].
/// Values are immutable after construction and safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteComplexObject {
    signal_count: usize,
    state_count: usize,
    model_count: usize,
    /// Row-major `[x][y][theta]`.
    probs: Vec<f64>,
    signal_labels: Option<Vec<String>>,
    state_labels: Option<Vec<String>>,
    model_labels: Option<Vec<String>>,
}

impl FiniteComplexObject {
    pub fn new(
        signal_count: usize,
        state_count: usize,
        model_count: usize,
        probs: Vec<f64>,
    ) -> Result<Self> {
        if signal_count == 0 || state_count == 0 || model_count == 0 {
            return Err(Error::DimensionMismatch {
                context: "complex object axes",
                expected: 1,
                got: 0,
            });
        }
        let expected = signal_count * state_count * model_count;
        if probs.len() != expected {
            return Err(Error::DimensionMismatch {
                context: "complex object tensor",
                expected,
                got: probs.len(),
            });
        }
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidProbabilities {
                    context: "complex object tensor",
                    detail: format!("entry {i} is {p}"),
                });
            }
        }
        for t in 0..model_count {
            let mut sum = 0.0;
            for x in 0..signal_count {
                for y in 0..state_count {
                    sum += probs[(x * state_count + y) * model_count + t];
                }
            }
            if (sum - 1.0).abs() > PROB_TOL {
                return Err(Error::InvalidProbabilities {
                    context: "complex object tensor",
                    detail: format!("model {t} sums to {sum}, expected 1"),
                });
            }
        }
        Ok(Self {
            signal_count,
            state_count,
            model_count,
            probs,
            signal_labels: None,
            state_labels: None,
            model_labels: None,
        })
    }

    /// Attach display labels to the signal, state, and model axes.
    /// Each list, when present, must match its axis length.
    pub fn with_labels(
        mut self,
        signal_labels: Option<Vec<String>>,
        state_labels: Option<Vec<String>>,
        model_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let check = |labels: &Option<Vec<String>>, len: usize, context: &'static str| {
            if let Some(l) = labels {
                if l.len() != len {
                    return Err(Error::DimensionMismatch {
                        context,
                        expected: len,
                        got: l.len(),
                    });
                }
            }
            Ok(())
        };
        check(&signal_labels, self.signal_count, "signal labels")?;
        check(&state_labels, self.state_count, "state labels")?;
        check(&model_labels, self.model_count, "model labels")?;
        self.signal_labels = signal_labels;
        self.state_labels = state_labels;
        self.model_labels = model_labels;
        Ok(self)
    }

    pub fn signal_count(&self) -> usize {
        self.signal_count
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn model_count(&self) -> usize {
        self.model_count
    }

    /// Joint probability `p(x, y; theta)`.
    #[inline]
    pub fn prob(&self, signal: usize, state: usize, model: usize) -> f64 {
        debug_assert!(signal < self.signal_count);
        debug_assert!(state < self.state_count);
        debug_assert!(model < self.model_count);
        self.probs[(signal * self.state_count + state) * self.model_count + model]
    }

    /// Marginal signal probability `sum_y p(x, y; theta)`.
    pub fn signal_marginal(&self, signal: usize, model: usize) -> f64 {
        (0..self.state_count).map(|y| self.prob(signal, y, model)).sum()
    }

    /// Marginal state probability `sum_x p(x, y; theta)`.
    pub fn state_marginal(&self, state: usize, model: usize) -> f64 {
        (0..self.signal_count).map(|x| self.prob(x, state, model)).sum()
    }

    /// Raw tensor in row-major `[x][y][theta]` order.
    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn signal_labels(&self) -> Option<&[String]> {
        self.signal_labels.as_deref()
    }

    pub fn state_labels(&self) -> Option<&[String]> {
        self.state_labels.as_deref()
    }

    pub fn model_labels(&self) -> Option<&[String]> {
        self.model_labels.as_deref()
    }

    pub(crate) fn check_model(&self, model: usize) -> Result<()> {
        if model >= self.model_count {
            return Err(Error::IndexOutOfRange {
                axis: "model",
                index: model,
                size: self.model_count,
            });
        }
        Ok(())
    }
}

/// Loss `w[y][y']` of deciding `y'` when the true state is `y`.
/// Entries are arbitrary finite reals; the matrix is square of side `|Y|`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossMatrix {
    state_count: usize,
    w: Vec<f64>,
}

impl LossMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let state_count = rows.len();
        if state_count == 0 {
            return Err(Error::InvalidLoss("empty matrix".into()));
        }
        let mut w = Vec::with_capacity(state_count * state_count);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != state_count {
                return Err(Error::InvalidLoss(format!(
                    "row {i} has length {}, expected {state_count}",
                    row.len()
                )));
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::InvalidLoss(format!("non-finite entry {v} in row {i}")));
                }
                w.push(v);
            }
        }
        Ok(Self { state_count, w })
    }

    /// 0-1 loss: zero on the diagonal, one off it.
    pub fn zero_one(state_count: usize) -> Self {
        let mut w = vec![1.0; state_count * state_count];
        for y in 0..state_count {
            w[y * state_count + y] = 0.0;
        }
        Self { state_count, w }
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    #[inline]
    pub fn loss(&self, actual: usize, decided: usize) -> f64 {
        self.w[actual * self.state_count + decided]
    }

    pub fn min_entry(&self) -> f64 {
        self.w.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_entry(&self) -> f64 {
        self.w.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Randomized recognition strategy `q(y' | x)`.
///
/// Rows index signals; each row is a probability distribution over decided
/// states (nonnegative, summing to one within [`PROB_TOL`]). Synthesis
/// operations return deterministic strategies (one unit entry per row), but
/// the type admits arbitrary randomization for mixing and property tests.
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    signal_count: usize,
    state_count: usize,
    /// Row-major `[x][y']`.
    q: Vec<f64>,
}

impl Strategy {
    pub fn new(signal_count: usize, state_count: usize, q: Vec<f64>) -> Result<Self> {
        if signal_count == 0 || state_count == 0 {
            return Err(Error::DimensionMismatch {
                context: "strategy axes",
                expected: 1,
                got: 0,
            });
        }
        if q.len() != signal_count * state_count {
            return Err(Error::DimensionMismatch {
                context: "strategy matrix",
                expected: signal_count * state_count,
                got: q.len(),
            });
        }
        for x in 0..signal_count {
            let row = &q[x * state_count..(x + 1) * state_count];
            let mut sum = 0.0;
            for &v in row {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidProbabilities {
                        context: "strategy row",
                        detail: format!("signal {x} has entry {v}"),
                    });
                }
                sum += v;
            }
            if (sum - 1.0).abs() > PROB_TOL {
                return Err(Error::InvalidProbabilities {
                    context: "strategy row",
                    detail: format!("signal {x} sums to {sum}, expected 1"),
                });
            }
        }
        Ok(Self {
            signal_count,
            state_count,
            q,
        })
    }

    /// Deterministic strategy from one decided state per signal.
    pub fn deterministic(decisions: &[usize], state_count: usize) -> Result<Self> {
        let signal_count = decisions.len();
        if signal_count == 0 || state_count == 0 {
            return Err(Error::DimensionMismatch {
                context: "strategy axes",
                expected: 1,
                got: 0,
            });
        }
        let mut q = vec![0.0; signal_count * state_count];
        for (x, &d) in decisions.iter().enumerate() {
            if d >= state_count {
                return Err(Error::IndexOutOfRange {
                    axis: "state",
                    index: d,
                    size: state_count,
                });
            }
            q[x * state_count + d] = 1.0;
        }
        Ok(Self {
            signal_count,
            state_count,
            q,
        })
    }

    /// Strategy that decides every state with equal probability.
    pub fn uniform(signal_count: usize, state_count: usize) -> Result<Self> {
        let p = 1.0 / state_count as f64;
        Self::new(signal_count, state_count, vec![p; signal_count * state_count])
    }

    /// Convex mixture `lambda * a + (1 - lambda) * b`.
    pub fn mix(lambda: f64, a: &Strategy, b: &Strategy) -> Result<Strategy> {
        if a.signal_count != b.signal_count || a.state_count != b.state_count {
            return Err(Error::DimensionMismatch {
                context: "strategy mixture",
                expected: a.q.len(),
                got: b.q.len(),
            });
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidConfig(format!(
                "mixture weight {lambda} outside [0, 1]"
            )));
        }
        let q = a
            .q
            .iter()
            .zip(&b.q)
            .map(|(&u, &v)| lambda * u + (1.0 - lambda) * v)
            .collect();
        Strategy::new(a.signal_count, a.state_count, q)
    }

    pub fn signal_count(&self) -> usize {
        self.signal_count
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    #[inline]
    pub fn prob(&self, signal: usize, decided: usize) -> f64 {
        self.q[signal * self.state_count + decided]
    }

    pub fn row(&self, signal: usize) -> &[f64] {
        &self.q[signal * self.state_count..(signal + 1) * self.state_count]
    }

    /// The decided state for a deterministic row, if the row is a unit vector.
    pub fn decision_for(&self, signal: usize) -> Option<usize> {
        let row = self.row(signal);
        let mut hit = None;
        for (y, &v) in row.iter().enumerate() {
            if v == 1.0 {
                if hit.is_some() {
                    return None;
                }
                hit = Some(y);
            } else if v != 0.0 {
                return None;
            }
        }
        hit
    }

    /// Per-signal decisions of a fully deterministic strategy.
    pub fn decisions(&self) -> Option<Vec<usize>> {
        (0..self.signal_count).map(|x| self.decision_for(x)).collect()
    }

    pub fn matrix(&self) -> &[f64] {
        &self.q
    }
}

/// Weight function `tau` over models: a point on the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction {
    tau: Vec<f64>,
}

impl WeightFunction {
    pub fn new(tau: Vec<f64>) -> Result<Self> {
        if tau.is_empty() {
            return Err(Error::DimensionMismatch {
                context: "weight function",
                expected: 1,
                got: 0,
            });
        }
        let mut sum = 0.0;
        for (i, &v) in tau.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidProbabilities {
                    context: "weight function",
                    detail: format!("entry {i} is {v}"),
                });
            }
            sum += v;
        }
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidProbabilities {
                context: "weight function",
                detail: format!("sums to {sum}, expected 1"),
            });
        }
        Ok(Self { tau })
    }

    /// Uniform weights `tau(theta) = 1 / |Theta|`.
    pub fn uniform(model_count: usize) -> Result<Self> {
        if model_count == 0 {
            return Err(Error::DimensionMismatch {
                context: "weight function",
                expected: 1,
                got: 0,
            });
        }
        Ok(Self {
            tau: vec![1.0 / model_count as f64; model_count],
        })
    }

    /// All mass on a single model.
    pub fn point_mass(model: usize, model_count: usize) -> Result<Self> {
        if model >= model_count {
            return Err(Error::IndexOutOfRange {
                axis: "model",
                index: model,
                size: model_count,
            });
        }
        let mut tau = vec![0.0; model_count];
        tau[model] = 1.0;
        Ok(Self { tau })
    }

    pub fn model_count(&self) -> usize {
        self.tau.len()
    }

    #[inline]
    pub fn weight(&self, model: usize) -> f64 {
        self.tau[model]
    }

    pub fn weights(&self) -> &[f64] {
        &self.tau
    }
}
