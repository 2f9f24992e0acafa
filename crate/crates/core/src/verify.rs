//! Oracle-backed verification suites.
//!
//! Each suite draws seeded random inputs, checks an exact property against
//! the brute-force oracles, and reports case counts and the worst deviation
//! observed. The CLI exposes them through `--verify`; the acceptance tests
//! run the same functions with their published case counts.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::decision;
use crate::learning::{self, LearningSource};
use crate::object::{FiniteComplexObject, LossMatrix, Strategy, WeightFunction};
use crate::oracles::{self, TinyInstance};
use crate::schema;
use crate::solver;

/// Outcome of one verification suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest violation margin observed (0 when every check held exactly).
    pub worst_deviation: f64,
    /// Serialized inputs of the first failing case, for replay.
    pub failure_example: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} | cases {} | failures {} | worst deviation {:.3e}",
            self.name,
            if self.passed() { "pass" } else { "FAIL" },
            self.cases,
            self.failures,
            self.worst_deviation
        )
    }
}

/// Default seed for the suites; fixed so reports are reproducible.
pub const DEFAULT_SEED: u64 = 0x5eed_cafe;

// ---------------------------------------------------------------------------
// Random generators shared by the suites and the acceptance tests
// ---------------------------------------------------------------------------

pub fn random_object(
    rng: &mut ChaCha8Rng,
    signals: usize,
    states: usize,
    models: usize,
) -> FiniteComplexObject {
    let mut probs = vec![0.0; signals * states * models];
    for t in 0..models {
        let mut total = 0.0;
        let mut raw = Vec::with_capacity(signals * states);
        for _ in 0..signals * states {
            let v: f64 = rng.gen_range(0.01..1.0);
            raw.push(v);
            total += v;
        }
        let mut i = 0;
        for x in 0..signals {
            for y in 0..states {
                probs[(x * states + y) * models + t] = raw[i] / total;
                i += 1;
            }
        }
    }
    FiniteComplexObject::new(signals, states, models, probs).expect("normalized by construction")
}

pub fn random_loss(rng: &mut ChaCha8Rng, states: usize) -> LossMatrix {
    if rng.gen_bool(0.5) {
        LossMatrix::zero_one(states)
    } else {
        let rows = (0..states)
            .map(|y| {
                (0..states)
                    .map(|d| if y == d { 0.0 } else { rng.gen_range(0.1..2.0) })
                    .collect()
            })
            .collect();
        LossMatrix::new(rows).expect("finite by construction")
    }
}

pub fn random_weights(rng: &mut ChaCha8Rng, models: usize) -> WeightFunction {
    let raw: Vec<f64> = (0..models).map(|_| -rng.gen::<f64>().max(1e-12).ln()).collect();
    let sum: f64 = raw.iter().sum();
    WeightFunction::new(raw.into_iter().map(|v| v / sum).collect())
        .expect("normalized by construction")
}

pub fn random_source(rng: &mut ChaCha8Rng, outcomes: usize, models: usize) -> LearningSource {
    let mut cond = vec![0.0; outcomes * models];
    for t in 0..models {
        let raw: Vec<f64> = (0..outcomes).map(|_| rng.gen_range(0.01..1.0)).collect();
        let sum: f64 = raw.iter().sum();
        for (z, v) in raw.into_iter().enumerate() {
            cond[z * models + t] = v / sum;
        }
    }
    LearningSource::new(outcomes, models, cond).expect("normalized by construction")
}

pub fn random_strategy(rng: &mut ChaCha8Rng, signals: usize, states: usize) -> Strategy {
    let mut q = vec![0.0; signals * states];
    for x in 0..signals {
        let raw: Vec<f64> = (0..states).map(|_| rng.gen_range(0.01..1.0)).collect();
        let sum: f64 = raw.iter().sum();
        for (y, v) in raw.into_iter().enumerate() {
            q[x * states + y] = v / sum;
        }
    }
    Strategy::new(signals, states, q).expect("normalized by construction")
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

/// Projection suite: random vectors of dimension 2..=64 must project onto
/// the simplex (sum within 1e-12, entries nonnegative), idempotently, and
/// within 1e-9 of the sort-based oracle.
pub fn projection_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    let mut failure_example = None;
    for _ in 0..cases {
        let dim = rng.gen_range(2..=64);
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let projected = match solver::project_to_simplex(&v, 1e-12) {
            Ok(p) => p,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let sum: f64 = projected.weights().iter().sum();
        let min = projected.weights().iter().cloned().fold(f64::INFINITY, f64::min);
        let again = solver::project_to_simplex(projected.weights(), 1e-12)
            .expect("reprojection of a simplex point");
        let idem = projected
            .weights()
            .iter()
            .zip(again.weights())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let oracle = oracles::sort_projection(&v).expect("finite input");
        let dist = projected
            .weights()
            .iter()
            .zip(oracle.weights())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let deviation = (sum - 1.0).abs().max((-min).max(0.0)).max(idem).max(dist);
        worst = worst.max(deviation);
        let ok = (sum - 1.0).abs() <= 1e-12 && min >= 0.0 && idem <= 1e-12 && dist <= 1e-9;
        if !ok {
            failures += 1;
            failure_example
                .get_or_insert_with(|| format!("{{\"vector\": {:?}}}", v));
        }
    }
    SuiteReport {
        name: "projection",
        cases,
        failures,
        worst_deviation: worst,
        failure_example,
    }
}

/// Concavity suite: on random tiny instances with random sources, the dual
/// must satisfy the concavity inequality and the supergradient inequality
/// within 1e-9 for random weight pairs.
pub fn concavity_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    let mut failure_example = None;
    for _ in 0..cases {
        let (nx, ny, nt) = (
            rng.gen_range(1..=3),
            rng.gen_range(2..=3),
            rng.gen_range(2..=4),
        );
        let object = random_object(&mut rng, nx, ny, nt);
        let loss = random_loss(&mut rng, ny);
        let source = if rng.gen_bool(0.3) {
            LearningSource::no_learning(nt).unwrap()
        } else {
            let outcomes = rng.gen_range(1..=4);
            random_source(&mut rng, outcomes, nt)
        };
        let tau_a = random_weights(&mut rng, nt);
        let tau_b = random_weights(&mut rng, nt);
        let lambda: f64 = rng.gen_range(0.0..=1.0);
        let mixed: Vec<f64> = tau_a
            .weights()
            .iter()
            .zip(tau_b.weights())
            .map(|(&a, &b)| lambda * a + (1.0 - lambda) * b)
            .collect();
        let sum: f64 = mixed.iter().sum();
        let mixed = WeightFunction::new(mixed.into_iter().map(|v| v / sum).collect()).unwrap();

        let phi_a = solver::phi(&object, &loss, &source, &tau_a).unwrap();
        let phi_b = solver::phi(&object, &loss, &source, &tau_b).unwrap();
        let phi_mixed = solver::phi(&object, &loss, &source, &mixed).unwrap();
        let concavity_violation = lambda * phi_a + (1.0 - lambda) * phi_b - phi_mixed;

        let grad = solver::supergradient(&object, &loss, &source, &tau_a).unwrap();
        let linear: f64 = grad
            .iter()
            .zip(tau_b.weights().iter().zip(tau_a.weights()))
            .map(|(&g, (&b, &a))| g * (b - a))
            .sum();
        let supergradient_violation = (phi_b - phi_a) - linear;

        let deviation = concavity_violation.max(supergradient_violation).max(0.0);
        worst = worst.max(deviation);
        if deviation > 1e-9 {
            failures += 1;
            failure_example.get_or_insert_with(|| {
                format!(
                    "{{\"object\": {}, \"loss\": {}, \"tau_a\": {}, \"tau_b\": {}}}",
                    schema::object_to_json(&object),
                    schema::loss_to_json(&loss),
                    schema::weights_to_json(&tau_a),
                    schema::weights_to_json(&tau_b),
                )
            });
        }
    }
    SuiteReport {
        name: "concavity",
        cases,
        failures,
        worst_deviation: worst,
        failure_example,
    }
}

/// Non-domination suite: on random tiny instances, the Bayesian strategy
/// minimizes the weighted risk over every enumerated deterministic strategy
/// and over sampled randomized competitors, and the domination search never
/// finds a strategy predominating it.
pub fn non_domination_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    let mut failure_example = None;
    for _ in 0..cases {
        let (nx, ny, nt) = (
            rng.gen_range(1..=4),
            rng.gen_range(2..=4),
            rng.gen_range(1..=4),
        );
        let object = random_object(&mut rng, nx, ny, nt);
        let loss = random_loss(&mut rng, ny);
        let tau = random_weights(&mut rng, nt);
        let bayes = decision::bayes_strategy(&object, &loss, &tau).unwrap();
        let weighted = |s: &Strategy| -> f64 {
            (0..nt)
                .map(|t| tau.weight(t) * decision::risk(&object, &loss, s, t).unwrap())
                .sum()
        };
        let bayes_value = weighted(&bayes);

        let instance =
            TinyInstance::new(object.clone(), loss.clone(), None).expect("sizes gated above");
        let mut min_enumerated = f64::INFINITY;
        for s in oracles::enumerate_deterministic_strategies(&instance).unwrap() {
            min_enumerated = min_enumerated.min(weighted(&s));
        }
        let mut min_random = f64::INFINITY;
        for _ in 0..20 {
            let s = random_strategy(&mut rng, nx, ny);
            min_random = min_random.min(weighted(&s));
        }
        let minimality_violation = bayes_value - min_enumerated.min(min_random);

        let dominated = oracles::domination_search(&object, &loss, &bayes)
            .unwrap()
            .is_some();

        let deviation = minimality_violation.max(0.0);
        worst = worst.max(deviation);
        if deviation > 1e-9 || dominated {
            failures += 1;
            failure_example.get_or_insert_with(|| {
                format!(
                    "{{\"object\": {}, \"loss\": {}, \"tau\": {}}}",
                    schema::object_to_json(&object),
                    schema::loss_to_json(&loss),
                    schema::weights_to_json(&tau),
                )
            });
        }
    }
    SuiteReport {
        name: "non-domination",
        cases,
        failures,
        worst_deviation: worst,
        failure_example,
    }
}

/// Compression suite: compressed and uncompressed sample sources give
/// identical expected risks (within 1e-9) for procedures measurable with
/// respect to the compressing statistic, for n <= 2 on 2x2 objects.
pub fn compression_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    let mut failure_example = None;
    for _ in 0..cases {
        let nt = rng.gen_range(2..=3);
        let object = random_object(&mut rng, 2, 2, nt);
        let loss = random_loss(&mut rng, 2);
        let tau = random_weights(&mut rng, nt);
        let mut case_worst: f64 = 0.0;
        for n in 0..=2usize {
            // supervised pairs: multiset quotient vs ordered tuples
            let compressed = learning::supervised_source(&object, n, 10_000).unwrap();
            let uncompressed =
                learning::supervised_source_uncompressed(&object, n, 10_000).unwrap();
            for procedure_kind in 0..2 {
                let (gc, gu) = if procedure_kind == 0 {
                    (
                        learning::bayes_learning_procedure(&object, &loss, &compressed.source, &tau)
                            .unwrap(),
                        learning::bayes_learning_procedure(&object, &loss, &uncompressed, &tau)
                            .unwrap(),
                    )
                } else {
                    (
                        learning::ml_procedure(&object, &loss, &compressed.source).unwrap(),
                        learning::ml_procedure(&object, &loss, &uncompressed).unwrap(),
                    )
                };
                let rc =
                    learning::procedure_risk_curve(&object, &loss, &compressed.source, &gc)
                        .unwrap();
                let ru =
                    learning::procedure_risk_curve(&object, &loss, &uncompressed, &gu).unwrap();
                for (a, b) in rc.iter().zip(&ru) {
                    case_worst = case_worst.max((a - b).abs());
                }
            }
            // state samples: count quotient vs ordered sequences
            let counts = learning::state_count_source(&object, n, 10_000).unwrap();
            let sequences = learning::state_sequence_source(&object, n, 10_000).unwrap();
            let gc =
                learning::bayes_learning_procedure(&object, &loss, &counts.source, &tau).unwrap();
            let gu = learning::bayes_learning_procedure(&object, &loss, &sequences, &tau).unwrap();
            let rc = learning::procedure_risk_curve(&object, &loss, &counts.source, &gc).unwrap();
            let ru = learning::procedure_risk_curve(&object, &loss, &sequences, &gu).unwrap();
            for (a, b) in rc.iter().zip(&ru) {
                case_worst = case_worst.max((a - b).abs());
            }
        }
        worst = worst.max(case_worst);
        if case_worst > 1e-9 {
            failures += 1;
            failure_example.get_or_insert_with(|| {
                format!(
                    "{{\"object\": {}, \"loss\": {}, \"tau\": {}}}",
                    schema::object_to_json(&object),
                    schema::loss_to_json(&loss),
                    schema::weights_to_json(&tau),
                )
            });
        }
    }
    SuiteReport {
        name: "compression",
        cases,
        failures,
        worst_deviation: worst,
        failure_example,
    }
}

/// Published case counts for the suites.
pub const PROJECTION_CASES: usize = 10_000;
pub const CONCAVITY_CASES: usize = 1_000;
pub const NON_DOMINATION_CASES: usize = 1_000;
pub const COMPRESSION_CASES: usize = 100;

/// Run every suite at its published case count.
pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    vec![
        projection_suite(seed, PROJECTION_CASES),
        concavity_suite(seed, CONCAVITY_CASES),
        non_domination_suite(seed, NON_DOMINATION_CASES),
        compression_suite(seed, COMPRESSION_CASES),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learning::LearningProcedure;

    #[test]
    fn quick_suites_pass() {
        assert!(projection_suite(7, 200).passed());
        assert!(concavity_suite(7, 50).passed());
        assert!(non_domination_suite(7, 50).passed());
        assert!(compression_suite(7, 5).passed());
    }

    #[test]
    fn reports_are_reproducible() {
        let a = projection_suite(11, 50);
        let b = projection_suite(11, 50);
        assert_eq!(a.worst_deviation, b.worst_deviation);
    }

    #[test]
    fn expected_risk_of_implicit_bayes_beats_random_procedures() {
        // tau-weighted R_Z of the Bayesian procedure never exceeds that of
        // random explicit procedures
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let nt = rng.gen_range(2..=3);
            let object = random_object(&mut rng, 2, 2, nt);
            let loss = random_loss(&mut rng, 2);
            let source = random_source(&mut rng, 3, nt);
            let tau = random_weights(&mut rng, nt);
            let bayes =
                learning::bayes_learning_procedure(&object, &loss, &source, &tau).unwrap();
            let bayes_curve =
                learning::procedure_risk_curve(&object, &loss, &source, &bayes).unwrap();
            let bayes_value: f64 = (0..nt).map(|t| tau.weight(t) * bayes_curve[t]).sum();
            for _ in 0..100 {
                let table: Vec<Strategy> = (0..3).map(|_| random_strategy(&mut rng, 2, 2)).collect();
                let g = LearningProcedure::Explicit(table);
                let curve = learning::procedure_risk_curve(&object, &loss, &source, &g).unwrap();
                let value: f64 = (0..nt).map(|t| tau.weight(t) * curve[t]).sum();
                assert!(bayes_value <= value + 1e-9);
            }
        }
    }
}
