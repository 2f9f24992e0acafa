//! Strategy synthesis and evaluation for finite complex statistical objects.
//!
//! A complex object is a quadruple of signals, hidden states, a finite model
//! set, and per-model joint probabilities; the generating model is fixed but
//! unknown. This crate computes risks and Bayesian strategies for arbitrary
//! model weights, models learning-information sources and learning
//! procedures, and finds approximately closest-to-optimal (minimax-regret)
//! and minimax procedures by supergradient ascent of the concave dual with a
//! certified duality gap.
//!
//! Modules:
//! - [`object`]: complex objects, loss matrices, strategies, weight functions
//! - [`decision`]: risks, optimal and Bayesian strategies, regrets
//! - [`learning`]: learning sources, procedures, maximum-likelihood learning
//! - [`solver`]: simplex projection, the dual function, the iteration
//! - [`gaussian`]: discretized Gaussian example objects and heuristics
//! - [`oracles`]: exhaustive brute-force references for verification
//! - [`verify`]: seeded property suites built on the oracles
//! - [`schema`]: JSON serialization of the core artifacts

pub mod decision;
pub mod error;
pub mod gaussian;
pub mod learning;
pub mod object;
pub mod oracles;
pub mod schema;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use object::{FiniteComplexObject, LossMatrix, Strategy, WeightFunction, PROB_TOL};
