//! Integration tests anchoring the Gaussian experiment machinery to
//! independently computed values: binomial posteriors, closed-form expected
//! risks, the planar domination example, and discretization stability.

use recognition_core::decision::{
    bayes_strategy, bayes_strategy_scaled, optimal_risk, optimal_risks, risk,
};
use recognition_core::gaussian::{
    discretize, gaussian_cdf, heuristic_risk_curve, DiscretizationGrid, GaussianExample,
    GaussianExampleSpec, GaussianVariant, Grid1D, HeuristicKind,
};
use recognition_core::learning::{
    self, bayes_learning_procedure, procedure_risk_curve, procedure_strategy,
    DEFAULT_OUTCOME_BUDGET,
};
use recognition_core::object::{LossMatrix, Strategy, WeightFunction};
use recognition_core::oracles;
use recognition_core::solver::{self, SolverConfig};

fn loss2() -> LossMatrix {
    LossMatrix::zero_one(2)
}

#[test]
fn binomial_posterior_oracle_on_the_prior_model() {
    // state-count source with n = 2 over the Robbins example: the Bayesian
    // response at count k must match weights tau * C(2,k) theta^k (1-theta)^(2-k)
    let example = GaussianExample::default_for(GaussianVariant::Robbins).unwrap();
    let object = &example.object;
    let loss = loss2();
    let ms = learning::state_count_source(object, 2, DEFAULT_OUTCOME_BUDGET).unwrap();
    let tau = WeightFunction::uniform(object.model_count()).unwrap();
    let g = bayes_learning_procedure(object, &loss, &ms.source, &tau).unwrap();
    for (z, outcome) in ms.outcomes.iter().enumerate() {
        let k = outcome.iter().filter(|&&c| c == 0).count() as i32; // state-1 observations
        let coeff = if k == 1 { 2.0 } else { 1.0 };
        let weights: Vec<f64> = example
            .thetas()
            .iter()
            .map(|&theta| {
                tau.weight(0) * coeff * theta.powi(k) * (1.0 - theta).powi(2 - k)
            })
            .collect();
        let oracle = bayes_strategy_scaled(object, &loss, &weights).unwrap();
        let got = procedure_strategy(object, &loss, &ms.source, &g, z).unwrap();
        assert_eq!(got, oracle, "count outcome {z}");
    }
}

#[test]
fn ml_plugin_risk_is_two_theta_one_minus_theta_at_n1() {
    // With a single observed state label, the likelihood maximizer is an
    // extreme prior and the plug-in strategy decides that state everywhere;
    // the expected risk under 0-1 loss expands to 2 theta (1 - theta).
    let example = GaussianExample::default_for(GaussianVariant::Robbins).unwrap();
    let ms = learning::state_count_source(&example.object, 1, DEFAULT_OUTCOME_BUDGET).unwrap();
    let curve =
        heuristic_risk_curve(&example, &loss2(), HeuristicKind::MlSupervised, &ms, &[]).unwrap();
    for (t, &theta) in example.thetas().iter().enumerate() {
        let expected = 2.0 * theta * (1.0 - theta);
        assert!(
            (curve[t] - expected).abs() < 1e-9,
            "theta={theta}: {} vs {expected}",
            curve[t]
        );
    }
}

#[test]
fn count_compression_matches_sequence_oracle_on_the_gaussian_object() {
    // n = 2 state samples: count quotient versus ordered sequences, for both
    // the Bayesian and the plug-in procedures
    let example = GaussianExample::default_for(GaussianVariant::Robbins).unwrap();
    let object = &example.object;
    let loss = loss2();
    let counts = learning::state_count_source(object, 2, DEFAULT_OUTCOME_BUDGET).unwrap();
    let sequences = learning::state_sequence_source(object, 2, DEFAULT_OUTCOME_BUDGET).unwrap();
    let tau = WeightFunction::uniform(object.model_count()).unwrap();

    let bayes_counts = bayes_learning_procedure(object, &loss, &counts.source, &tau).unwrap();
    let bayes_sequences = bayes_learning_procedure(object, &loss, &sequences, &tau).unwrap();
    let rc = procedure_risk_curve(object, &loss, &counts.source, &bayes_counts).unwrap();
    let ru = procedure_risk_curve(object, &loss, &sequences, &bayes_sequences).unwrap();
    for (a, b) in rc.iter().zip(&ru) {
        assert!((a - b).abs() < 1e-9);
    }

    let ml_counts = learning::ml_procedure(object, &loss, &counts.source).unwrap();
    let ml_sequences = learning::ml_procedure(object, &loss, &sequences).unwrap();
    let rc = procedure_risk_curve(object, &loss, &counts.source, &ml_counts).unwrap();
    let ru = procedure_risk_curve(object, &loss, &sequences, &ml_sequences).unwrap();
    for (a, b) in rc.iter().zip(&ru) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn dual_value_expands_by_hand_on_a_coarse_model_grid() {
    // Phi(tau) at the uniform tau with no learning equals the weighted sum
    // of regrets of the Bayes strategy, expanded through the public ops
    let spec = GaussianExampleSpec {
        variant: GaussianVariant::Robbins,
        thetas: vec![0.0, 0.25, 0.5, 0.75, 1.0],
    };
    let example = discretize(
        &spec,
        &recognition_core::gaussian::default_grid(GaussianVariant::Robbins),
    )
    .unwrap();
    let object = &example.object;
    let loss = loss2();
    let source = learning::LearningSource::no_learning(5).unwrap();
    let tau = WeightFunction::uniform(5).unwrap();

    let value = solver::phi(object, &loss, &source, &tau).unwrap();
    let bayes = bayes_strategy(object, &loss, &tau).unwrap();
    let mut expanded = 0.0;
    for t in 0..5 {
        expanded += tau.weight(t)
            * (risk(object, &loss, &bayes, t).unwrap() - optimal_risk(object, &loss, t).unwrap());
    }
    assert!((value - expanded).abs() < 1e-12, "{value} vs {expanded}");
}

#[test]
fn planar_ml_strategy_has_a_predominator_even_on_a_coarse_grid() {
    // 40x40 downsampling of the planar example: the corner rule stays
    // strictly predominated, and the search finds a witness
    let spec = GaussianExampleSpec::two_model_2d();
    let axis = Grid1D::new(-5.0, 6.0, 0.275).unwrap();
    assert_eq!(axis.cell_count(), 40);
    let example = discretize(&spec, &DiscretizationGrid::Plane(axis.clone(), axis)).unwrap();
    let object = &example.object;
    let loss = loss2();

    let (a1, a2) = match &example.grid {
        DiscretizationGrid::Plane(a1, a2) => (a1, a2),
        _ => unreachable!(),
    };
    let mut decisions = Vec::with_capacity(object.signal_count());
    for i1 in 0..a1.cell_count() {
        for i2 in 0..a2.cell_count() {
            let corner = a1.center(i1) <= 0.5 && a2.center(i2) <= 0.5;
            decisions.push(usize::from(!corner));
        }
    }
    let corner = Strategy::deterministic(&decisions, 2).unwrap();
    let witness = oracles::domination_search(object, &loss, &corner)
        .unwrap()
        .expect("a predominator exists for the corner rule");
    for t in 0..2 {
        assert!(
            risk(object, &loss, &witness, t).unwrap() < risk(object, &loss, &corner, t).unwrap()
        );
    }
}

#[test]
fn planar_single_signal_ml_picks_the_vertical_split_model() {
    let example = GaussianExample::default_for(GaussianVariant::TwoModel2d).unwrap();
    let x = example.signal_index_of_plane(2.0, 0.0).unwrap();
    let model = learning::ml_unsupervised_estimate(&example.object, &[x]).unwrap();
    assert_eq!(model, 1, "the signal near (2, 0) favors the mean-(1,0) model");
    let strategy = learning::ml_unsupervised_learn(&example.object, &loss2(), &[x]).unwrap();
    let optimal = recognition_core::decision::optimal_strategy(&example.object, &loss2(), 1).unwrap();
    assert_eq!(strategy, optimal);
}

#[test]
fn plugin_regret_shrinks_with_the_sample_at_interior_models() {
    // consistency trend on the exact count source: the plug-in procedure's
    // regret at interior models drops from n=1 to n=50
    let example = GaussianExample::default_for(GaussianVariant::Robbins).unwrap();
    let loss = loss2();
    let optimal = optimal_risks(&example.object, &loss).unwrap();
    let regret_at = |n: usize, t: usize| -> f64 {
        let ms = learning::state_count_source(&example.object, n, DEFAULT_OUTCOME_BUDGET).unwrap();
        let curve =
            heuristic_risk_curve(&example, &loss, HeuristicKind::MlSupervised, &ms, &[]).unwrap();
        curve[t] - optimal[t]
    };
    for theta in [0.35, 0.5, 0.65] {
        let t = example.nearest_theta_index(theta);
        let small = regret_at(1, t);
        let large = regret_at(50, t);
        assert!(
            large < small,
            "theta={theta}: regret {large} at n=50 should be below {small} at n=1"
        );
    }
}

#[test]
fn discretized_optimal_risks_are_grid_stable() {
    // halving the signal grid step moves no optimal risk by 0.001 or more
    let check = |spec: &GaussianExampleSpec, coarse: &DiscretizationGrid, fine: &DiscretizationGrid| {
        let a = discretize(spec, coarse).unwrap();
        let b = discretize(spec, fine).unwrap();
        let w = loss2();
        let ra = optimal_risks(&a.object, &w).unwrap();
        let rb = optimal_risks(&b.object, &w).unwrap();
        for (x, y) in ra.iter().zip(&rb) {
            assert!((x - y).abs() < 0.001, "{x} vs {y}");
        }
    };
    let robbins = GaussianExampleSpec::robbins(0.05).unwrap();
    check(
        &robbins,
        &DiscretizationGrid::Line(Grid1D::new(-6.0, 6.0, 0.01).unwrap()),
        &DiscretizationGrid::Line(Grid1D::new(-6.0, 6.0, 0.005).unwrap()),
    );
    let two_mean = GaussianExampleSpec::two_mean(0.2).unwrap();
    check(
        &two_mean,
        &DiscretizationGrid::Line(Grid1D::new(-10.0, 10.0, 0.02).unwrap()),
        &DiscretizationGrid::Line(Grid1D::new(-10.0, 10.0, 0.01).unwrap()),
    );
    let planar = GaussianExampleSpec::two_model_2d();
    check(
        &planar,
        &DiscretizationGrid::Plane(
            Grid1D::new(-5.0, 6.0, 0.05).unwrap(),
            Grid1D::new(-5.0, 6.0, 0.05).unwrap(),
        ),
        &DiscretizationGrid::Plane(
            Grid1D::new(-5.0, 6.0, 0.025).unwrap(),
            Grid1D::new(-5.0, 6.0, 0.025).unwrap(),
        ),
    );
}

#[test]
fn cdf_matches_a_quadrature_oracle() {
    // composite Simpson integration of the density is an independent route
    // to the CDF; the closed form must agree to 1e-10 absolute
    let density = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let simpson = |a: f64, b: f64| -> f64 {
        let n = 4096usize; // even
        let h = (b - a) / n as f64;
        let mut total = density(a) + density(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            total += w * density(a + i as f64 * h);
        }
        total * h / 3.0
    };
    for x in [-6.0f64, -2.5, -1.0, -0.3, 0.0, 0.31, 1.0, 1.7, 2.5, 4.0, 6.0] {
        let oracle = 0.5 + simpson(0.0, x.max(0.0)) - simpson(x.min(0.0), 0.0);
        assert!(
            (gaussian_cdf(x) - oracle).abs() < 1e-10,
            "x={x}: {} vs {oracle}",
            gaussian_cdf(x)
        );
    }
}

#[test]
fn minimax_value_dominates_the_regret_value() {
    let example = GaussianExample::default_for(GaussianVariant::Robbins).unwrap();
    let loss = loss2();
    let source = learning::state_count_source(&example.object, 2, DEFAULT_OUTCOME_BUDGET)
        .unwrap()
        .source;
    let config = SolverConfig::default();
    let minimax = solver::solve_minimax(&example.object, &loss, &source, &config).unwrap();
    let regret = solver::solve_closest_to_optimal(&example.object, &loss, &source, &config).unwrap();
    assert!(minimax.upper >= regret.upper - 1e-9);
}

#[test]
fn solved_value_is_monotone_for_nested_quantized_sources() {
    // same quantizer, growing sample: the optimal value cannot increase
    let example = GaussianExample::default_for(GaussianVariant::TwoMean).unwrap();
    let loss = loss2();
    let (quantizer, _) = example.uniform_quantizer(16).unwrap();
    let config = SolverConfig::default();
    let mut previous = f64::INFINITY;
    for n in [1usize, 2, 3] {
        let source = learning::quantized_signal_source(
            &example.object,
            &quantizer,
            n,
            DEFAULT_OUTCOME_BUDGET,
        )
        .unwrap()
        .source;
        let outcome =
            solver::solve_closest_to_optimal(&example.object, &loss, &source, &config).unwrap();
        assert!(outcome.converged);
        assert!(
            outcome.upper <= previous + 2.0 * config.epsilon,
            "value {} at n={n} exceeds previous {previous}",
            outcome.upper
        );
        previous = outcome.upper;
    }
}
