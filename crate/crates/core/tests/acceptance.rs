//! Acceptance suite: runs every published criterion at its stated tolerance
//! and prints one pass/fail line per criterion (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::sync::OnceLock;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use recognition_core::decision::{self, optimal_risks, predominates, risk};
use recognition_core::gaussian::{
    heuristic_risk_curve, GaussianExample, GaussianVariant, HeuristicKind,
};
use recognition_core::learning::{
    self, procedure_risk_curve, LearningSource, MultisetSource, DEFAULT_OUTCOME_BUDGET,
};
use recognition_core::object::{LossMatrix, Strategy, WeightFunction};
use recognition_core::oracles;
use recognition_core::solver::{solve_closest_to_optimal, solve_minimax, SolverConfig};
use recognition_core::verify;

fn report(criterion: &str, pass: bool, detail: String) {
    println!(
        "ACCEPTANCE {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion} failed: {detail}");
}

fn loss2() -> LossMatrix {
    LossMatrix::zero_one(2)
}

fn robbins() -> &'static GaussianExample {
    static CELL: OnceLock<GaussianExample> = OnceLock::new();
    CELL.get_or_init(|| GaussianExample::default_for(GaussianVariant::Robbins).expect("defaults"))
}

fn two_mean() -> &'static GaussianExample {
    static CELL: OnceLock<GaussianExample> = OnceLock::new();
    CELL.get_or_init(|| GaussianExample::default_for(GaussianVariant::TwoMean).expect("defaults"))
}

fn count_source(n: usize) -> MultisetSource {
    learning::state_count_source(&robbins().object, n, DEFAULT_OUTCOME_BUDGET).expect("in budget")
}

/// Quantizer sizes used for the two-mean signal sources, matching the CLI
/// defaults: coarser with larger n to keep the outcome space workable.
fn two_mean_source(n: usize) -> MultisetSource {
    let cells = match n {
        0 | 1 => 200,
        2 => 60,
        3 => 30,
        _ => 16,
    };
    let (quantizer, _) = two_mean().uniform_quantizer(cells).expect("line grid");
    learning::quantized_signal_source(&two_mean().object, &quantizer, n, DEFAULT_OUTCOME_BUDGET)
        .expect("in budget")
}

fn default_config() -> SolverConfig {
    SolverConfig::default()
}

fn max_regret(example: &GaussianExample, risks: &[f64]) -> f64 {
    let optimal = optimal_risks(&example.object, &loss2()).expect("dims agree");
    risks
        .iter()
        .zip(&optimal)
        .map(|(r, o)| r - o)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn solver_max_regret(example: &GaussianExample, source: &LearningSource) -> (f64, bool) {
    let outcome =
        solve_closest_to_optimal(&example.object, &loss2(), source, &default_config())
            .expect("solver runs");
    let risks = procedure_risk_curve(&example.object, &loss2(), source, &outcome.procedure)
        .expect("dims agree");
    (max_regret(example, &risks), outcome.converged)
}

// ---------------------------------------------------------------------------
// A criteria
// ---------------------------------------------------------------------------

#[test]
fn a1_minimax_without_learning() {
    let start = Instant::now();
    let example = robbins();
    let source = LearningSource::no_learning(example.object.model_count()).unwrap();
    let outcome = solve_minimax(&example.object, &loss2(), &source, &default_config()).unwrap();
    let risks =
        procedure_risk_curve(&example.object, &loss2(), &source, &outcome.procedure).unwrap();
    let max_risk = risks.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let elapsed = start.elapsed();
    let pass = outcome.converged && (0.153..=0.165).contains(&max_risk) && elapsed.as_secs() < 60;
    report(
        "A1",
        pass,
        format!(
            "max risk {max_risk:.6} in [0.153, 0.165], converged={}, {:.2}s",
            outcome.converged,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn a2_planar_example_separation() {
    let start = Instant::now();
    let example = GaussianExample::default_for(GaussianVariant::TwoModel2d).unwrap();
    let object = &example.object;
    let loss = loss2();

    // the likelihood-maximization rule decides A exactly on the corner
    // region x1 <= 0.5 and x2 <= 0.5
    let (a1, a2) = match &example.grid {
        recognition_core::gaussian::DiscretizationGrid::Plane(a1, a2) => (a1, a2),
        _ => unreachable!("planar example"),
    };
    let mut decisions = Vec::with_capacity(object.signal_count());
    for i1 in 0..a1.cell_count() {
        for i2 in 0..a2.cell_count() {
            let corner = a1.center(i1) <= 0.5 && a2.center(i2) <= 0.5;
            decisions.push(usize::from(!corner));
        }
    }
    let corner_strategy = Strategy::deterministic(&decisions, 2).unwrap();

    let bayes = decision::bayes_strategy(
        object,
        &loss,
        &WeightFunction::new(vec![0.5, 0.5]).unwrap(),
    )
    .unwrap();

    let corner_risks: Vec<f64> = (0..2)
        .map(|t| risk(object, &loss, &corner_strategy, t).unwrap())
        .collect();
    let bayes_risks: Vec<f64> = (0..2)
        .map(|t| risk(object, &loss, &bayes, t).unwrap())
        .collect();
    let dominated = predominates(object, &loss, &bayes, &corner_strategy).unwrap();
    let elapsed = start.elapsed();

    let pass = corner_risks
        .iter()
        .all(|r| (0.365..=0.375).contains(r))
        && bayes_risks.iter().all(|r| (0.345..=0.355).contains(r))
        && dominated
        && elapsed.as_secs() < 120;
    report(
        "A2",
        pass,
        format!(
            "corner risks {:.4}/{:.4}, weighted-rule risks {:.4}/{:.4}, predominates={dominated}, {:.1}s",
            corner_risks[0], corner_risks[1], bayes_risks[0], bayes_risks[1],
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn a3_solver_certificates() {
    // convergence on the two experiment families
    let mut detail = String::new();
    let mut pass = true;
    for n in [1usize, 2, 4] {
        let (_, converged) = {
            let source = count_source(n).source;
            let outcome =
                solve_closest_to_optimal(&robbins().object, &loss2(), &source, &default_config())
                    .unwrap();
            (outcome.gap(), outcome.converged)
        };
        pass &= converged;
        detail.push_str(&format!("counts n={n} converged={converged}; "));
    }
    for n in [1usize, 2, 4] {
        let source = two_mean_source(n).source;
        let outcome =
            solve_closest_to_optimal(&two_mean().object, &loss2(), &source, &default_config())
                .unwrap();
        pass &= outcome.converged;
        detail.push_str(&format!("signals n={n} converged={}; ", outcome.converged));
    }

    // dual value against the exhaustive weight-grid oracle
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_101);
    let mut worst_dev: f64 = 0.0;
    for case in 0..20 {
        let object = verify::random_object(&mut rng, 2, 2, 2);
        let loss = verify::random_loss(&mut rng, 2);
        let source = if case < 15 {
            LearningSource::no_learning(2).unwrap()
        } else {
            verify::random_source(&mut rng, 3, 2)
        };
        let config = SolverConfig {
            epsilon: 0.005,
            max_iterations: 30_000,
            ..SolverConfig::default()
        };
        let outcome = solve_closest_to_optimal(&object, &loss, &source, &config).unwrap();
        let grid_value = oracles::grid_dual_value(&object, &loss, &source, 201).unwrap();
        worst_dev = worst_dev.max((outcome.lower - grid_value).abs());
    }
    pass &= worst_dev <= 0.02;
    detail.push_str(&format!("worst |value - grid dual| = {worst_dev:.4}"));
    report("A3", pass, detail);
}

#[test]
fn a4_ml_failure_at_small_n() {
    let example = robbins();
    let source = count_source(1);
    let ml_risks = heuristic_risk_curve(
        example,
        &loss2(),
        HeuristicKind::MlSupervised,
        &source,
        &[],
    )
    .unwrap();
    let ml_regret = max_regret(example, &ml_risks);
    let (solver_regret, converged) = solver_max_regret(example, &source.source);
    let margin = ml_regret - solver_regret;
    let pass = converged && margin >= 0.05;
    report(
        "A4",
        pass,
        format!(
            "ml max regret {ml_regret:.4}, solved max regret {solver_regret:.4}, margin {margin:.4} >= 0.05"
        ),
    );
}

#[test]
fn a5_minimax_ignores_the_sample() {
    let example = robbins();
    let no_learning = LearningSource::no_learning(example.object.model_count()).unwrap();
    let sample4 = count_source(4).source;
    let v0 = solve_minimax(&example.object, &loss2(), &no_learning, &default_config()).unwrap();
    let v4 = solve_minimax(&example.object, &loss2(), &sample4, &default_config()).unwrap();
    let delta = (v4.upper - v0.upper).abs();
    let pass = v0.converged && v4.converged && delta < 0.02;
    report(
        "A5",
        pass,
        format!(
            "minimax value {:.6} at n=0 vs {:.6} at n=4, |delta| = {delta:.4} < 0.02",
            v0.upper, v4.upper
        ),
    );
}

#[test]
fn a6_asymptotic_trends() {
    let example = robbins();

    // maximum-likelihood regret collapses between n=4 and n=50
    let ml_regret_at = |n: usize| {
        let source = count_source(n);
        let risks = heuristic_risk_curve(
            example,
            &loss2(),
            HeuristicKind::MlSupervised,
            &source,
            &[],
        )
        .unwrap();
        max_regret(example, &risks)
    };
    let ml4 = ml_regret_at(4);
    let ml50 = ml_regret_at(50);
    let ml_pass = ml50 < 0.5 * ml4;

    // solved max regret is non-increasing in the sample size within 2 epsilon
    let epsilon = default_config().epsilon;
    let mut solved = Vec::new();
    let mut all_converged = true;
    for n in [0usize, 1, 2, 4] {
        let source = if n == 0 {
            LearningSource::no_learning(example.object.model_count()).unwrap()
        } else {
            count_source(n).source
        };
        let (value, converged) = solver_max_regret(example, &source);
        all_converged &= converged;
        solved.push(value);
    }
    let monotone = solved.windows(2).all(|w| w[1] <= w[0] + 2.0 * epsilon);

    let pass = ml_pass && monotone && all_converged;
    report(
        "A6",
        pass,
        format!(
            "ml regret n=50 {ml50:.4} < half of n=4 {ml4:.4}; solved regrets {:?} non-increasing within {:.2}",
            solved.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>(),
            2.0 * epsilon
        ),
    );
}

// ---------------------------------------------------------------------------
// P criteria
// ---------------------------------------------------------------------------

#[test]
fn p1_projection_suite() {
    let r = verify::projection_suite(verify::DEFAULT_SEED, verify::PROJECTION_CASES);
    report(
        "P1",
        r.passed(),
        format!("{} cases, worst deviation {:.3e}", r.cases, r.worst_deviation),
    );
}

#[test]
fn p2_concavity_suite() {
    let r = verify::concavity_suite(verify::DEFAULT_SEED, verify::CONCAVITY_CASES);
    report(
        "P2",
        r.passed(),
        format!("{} cases, worst deviation {:.3e}", r.cases, r.worst_deviation),
    );
}

#[test]
fn p3_bayes_optimality_suite() {
    let r = verify::non_domination_suite(verify::DEFAULT_SEED, verify::NON_DOMINATION_CASES);
    report(
        "P3",
        r.passed(),
        format!("{} cases, worst deviation {:.3e}", r.cases, r.worst_deviation),
    );
}

#[test]
fn p4_compression_soundness() {
    let r = verify::compression_suite(verify::DEFAULT_SEED, verify::COMPRESSION_CASES);
    report(
        "P4",
        r.passed(),
        format!("{} cases, worst deviation {:.3e}", r.cases, r.worst_deviation),
    );
}
