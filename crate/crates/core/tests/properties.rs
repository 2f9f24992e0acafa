//! Property tests over random instances.

use proptest::prelude::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use recognition_core::decision::{bayes_strategy, optimal_risk, risk};
use recognition_core::learning::LearningSource;
use recognition_core::object::{FiniteComplexObject, LossMatrix, Strategy};
use recognition_core::oracles::{self, domination_search, sort_projection};
use recognition_core::schema;
use recognition_core::solver::{project_to_simplex, solve_closest_to_optimal, SolverConfig};
use recognition_core::verify;

/// A random normalized object with the given shape.
fn object_strategy(
    nx: usize,
    ny: usize,
    nt: usize,
) -> impl Strategy2<Value = FiniteComplexObject> {
    proptest::collection::vec(0.01f64..1.0, nx * ny * nt).prop_map(move |raw| {
        let mut probs = vec![0.0; raw.len()];
        for t in 0..nt {
            let total: f64 = (0..nx * ny).map(|i| raw[i * nt + t]).sum();
            for i in 0..nx * ny {
                probs[i * nt + t] = raw[i * nt + t] / total;
            }
        }
        FiniteComplexObject::new(nx, ny, nt, probs).expect("normalized")
    })
}

/// A random row-stochastic strategy matrix.
fn strategy_strategy(nx: usize, ny: usize) -> impl Strategy2<Value = Strategy> {
    proptest::collection::vec(0.01f64..1.0, nx * ny).prop_map(move |raw| {
        let mut q = vec![0.0; raw.len()];
        for x in 0..nx {
            let total: f64 = raw[x * ny..(x + 1) * ny].iter().sum();
            for y in 0..ny {
                q[x * ny + y] = raw[x * ny + y] / total;
            }
        }
        Strategy::new(nx, ny, q).expect("normalized")
    })
}

use proptest::strategy::Strategy as Strategy2;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Risk is linear in the strategy mixture weight.
    #[test]
    fn risk_is_linear_in_mixtures(
        object in object_strategy(3, 3, 2),
        a in strategy_strategy(3, 3),
        b in strategy_strategy(3, 3),
        lambda in 0.0f64..=1.0,
    ) {
        let loss = LossMatrix::zero_one(3);
        let mixed = Strategy::mix(lambda, &a, &b).unwrap();
        for t in 0..2 {
            let lhs = risk(&object, &loss, &mixed, t).unwrap();
            let rhs = lambda * risk(&object, &loss, &a, t).unwrap()
                + (1.0 - lambda) * risk(&object, &loss, &b, t).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }
    }

    /// No strategy beats the optimal risk of its model.
    #[test]
    fn optimal_risk_is_a_lower_bound(
        object in object_strategy(3, 2, 3),
        q in strategy_strategy(3, 2),
    ) {
        let loss = LossMatrix::zero_one(2);
        for t in 0..3 {
            let best = optimal_risk(&object, &loss, t).unwrap();
            prop_assert!(best <= risk(&object, &loss, &q, t).unwrap() + 1e-12);
        }
    }

    /// The iterative projection agrees with the sort-based oracle.
    #[test]
    fn projection_agrees_with_the_sorting_oracle(
        v in proptest::collection::vec(-25.0f64..25.0, 2..32),
    ) {
        let fast = project_to_simplex(&v, 1e-12).unwrap();
        let exact = sort_projection(&v).unwrap();
        for (a, b) in fast.weights().iter().zip(exact.weights()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    /// Serialized artifacts reload to equal values.
    #[test]
    fn schema_round_trips(
        object in object_strategy(2, 2, 2),
        q in strategy_strategy(2, 2),
    ) {
        let restored = schema::object_from_json(&schema::object_to_json(&object)).unwrap();
        prop_assert_eq!(&restored, &object);
        let restored = schema::strategy_from_json(&schema::strategy_to_json(&q)).unwrap();
        prop_assert_eq!(&restored, &q);
    }
}

/// Bayesian strategies survive ten thousand domination searches.
#[test]
fn bayes_strategies_survive_many_domination_trials() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10_000 {
        let object = verify::random_object(&mut rng, 2, 2, 2);
        let loss = verify::random_loss(&mut rng, 2);
        let tau = verify::random_weights(&mut rng, 2);
        let bayes = bayes_strategy(&object, &loss, &tau).unwrap();
        assert!(
            domination_search(&object, &loss, &bayes).unwrap().is_none(),
            "a Bayesian strategy was predominated"
        );
    }
}

/// The solver's upper bound is never beaten by the grid-search dual.
#[test]
fn grid_dual_stays_below_the_upper_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for round in 0..25 {
        let object = verify::random_object(&mut rng, 2, 2, 2);
        let loss = verify::random_loss(&mut rng, 2);
        let source = if round % 2 == 0 {
            LearningSource::no_learning(2).unwrap()
        } else {
            verify::random_source(&mut rng, 3, 2)
        };
        let config = SolverConfig {
            epsilon: 0.005,
            max_iterations: 5_000,
            ..SolverConfig::default()
        };
        let outcome = solve_closest_to_optimal(&object, &loss, &source, &config).unwrap();
        let dual = oracles::grid_dual_value(&object, &loss, &source, 201).unwrap();
        assert!(dual <= outcome.upper + 1e-9);
        assert!(outcome.lower <= dual + 0.02);
    }
}
