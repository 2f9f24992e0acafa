//! JSON schemas for the core artifacts.
//!
//! Every document carries a `kind` discriminator and row-major tensors:
//!
//! - `complex_object`: `signals`, `states`, `models`, `probabilities`
//!   (row-major `[x][y][theta]`), optional axis labels
//! - `loss_matrix`: `states`, `losses` as nested rows
//! - `strategy`: `signals`, `states`, `rows` (row-major `[x][y']`)
//! - `learning_source`: `outcomes`, `models`, `probabilities`
//!   (row-major `[z][theta]`), optional outcome descriptors
//! - `weight_function`: `weights`
//! - `gaussian_example`: `variant`, `theta` description, `grid` parameters
//!
//! Loading validates through the ordinary constructors, so documents with
//! broken normalization are rejected rather than renormalized.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    DiscretizationGrid, GaussianExampleSpec, GaussianVariant, Grid1D,
};
use crate::learning::LearningSource;
use crate::object::{FiniteComplexObject, LossMatrix, Strategy, WeightFunction};

fn decode<'a, T: Deserialize<'a>>(json: &'a str) -> Result<T> {
    serde_json::from_str(json).map_err(|e| Error::Schema(e.to_string()))
}

fn encode<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("schema types always serialize")
}

fn expect_kind(kind: &str, expected: &str) -> Result<()> {
    if kind != expected {
        return Err(Error::Schema(format!(
            "expected kind '{expected}', found '{kind}'"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// complex_object
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct ObjectDoc {
    pub kind: String,
    pub signals: usize,
    pub states: usize,
    pub models: usize,
    /// Row-major `[x][y][theta]`.
    pub probabilities: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signal_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_labels: Option<Vec<String>>,
}

pub fn object_to_json(object: &FiniteComplexObject) -> String {
    encode(&ObjectDoc {
        kind: "complex_object".into(),
        signals: object.signal_count(),
        states: object.state_count(),
        models: object.model_count(),
        probabilities: object.probabilities().to_vec(),
        signal_labels: object.signal_labels().map(|l| l.to_vec()),
        state_labels: object.state_labels().map(|l| l.to_vec()),
        model_labels: object.model_labels().map(|l| l.to_vec()),
    })
}

pub fn object_from_json(json: &str) -> Result<FiniteComplexObject> {
    let doc: ObjectDoc = decode(json)?;
    expect_kind(&doc.kind, "complex_object")?;
    FiniteComplexObject::new(doc.signals, doc.states, doc.models, doc.probabilities)?
        .with_labels(doc.signal_labels, doc.state_labels, doc.model_labels)
}

// ---------------------------------------------------------------------------
// loss_matrix
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct LossDoc {
    pub kind: String,
    pub states: usize,
    pub losses: Vec<Vec<f64>>,
}

pub fn loss_to_json(loss: &LossMatrix) -> String {
    let rows = (0..loss.state_count())
        .map(|y| {
            (0..loss.state_count())
                .map(|d| loss.loss(y, d))
                .collect::<Vec<_>>()
        })
        .collect();
    encode(&LossDoc {
        kind: "loss_matrix".into(),
        states: loss.state_count(),
        losses: rows,
    })
}

pub fn loss_from_json(json: &str) -> Result<LossMatrix> {
    let doc: LossDoc = decode(json)?;
    expect_kind(&doc.kind, "loss_matrix")?;
    if doc.losses.len() != doc.states {
        return Err(Error::Schema(format!(
            "loss matrix declares {} states but has {} rows",
            doc.states,
            doc.losses.len()
        )));
    }
    LossMatrix::new(doc.losses)
}

// ---------------------------------------------------------------------------
// strategy
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct StrategyDoc {
    pub kind: String,
    pub signals: usize,
    pub states: usize,
    /// Row-major `[x][y']`.
    pub rows: Vec<f64>,
}

pub fn strategy_to_json(strategy: &Strategy) -> String {
    encode(&StrategyDoc {
        kind: "strategy".into(),
        signals: strategy.signal_count(),
        states: strategy.state_count(),
        rows: strategy.matrix().to_vec(),
    })
}

pub fn strategy_from_json(json: &str) -> Result<Strategy> {
    let doc: StrategyDoc = decode(json)?;
    expect_kind(&doc.kind, "strategy")?;
    Strategy::new(doc.signals, doc.states, doc.rows)
}

// ---------------------------------------------------------------------------
// learning_source
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct SourceDoc {
    pub kind: String,
    pub outcomes: usize,
    pub models: usize,
    /// Row-major `[z][theta]`.
    pub probabilities: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptors: Option<Vec<String>>,
}

pub fn source_to_json(source: &LearningSource) -> String {
    encode(&SourceDoc {
        kind: "learning_source".into(),
        outcomes: source.outcome_count(),
        models: source.model_count(),
        probabilities: source.table().to_vec(),
        descriptors: source.descriptors().map(|d| d.to_vec()),
    })
}

pub fn source_from_json(json: &str) -> Result<LearningSource> {
    let doc: SourceDoc = decode(json)?;
    expect_kind(&doc.kind, "learning_source")?;
    let source = LearningSource::new(doc.outcomes, doc.models, doc.probabilities)?;
    match doc.descriptors {
        Some(d) => source.with_descriptors(d),
        None => Ok(source),
    }
}

// ---------------------------------------------------------------------------
// weight_function
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct WeightsDoc {
    pub kind: String,
    pub weights: Vec<f64>,
}

pub fn weights_to_json(weights: &WeightFunction) -> String {
    encode(&WeightsDoc {
        kind: "weight_function".into(),
        weights: weights.weights().to_vec(),
    })
}

pub fn weights_from_json(json: &str) -> Result<WeightFunction> {
    let doc: WeightsDoc = decode(json)?;
    expect_kind(&doc.kind, "weight_function")?;
    WeightFunction::new(doc.weights)
}

// ---------------------------------------------------------------------------
// gaussian_example
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct GridDoc {
    pub lower: f64,
    pub upper: f64,
    pub step: f64,
}

impl GridDoc {
    fn to_grid(&self) -> Result<Grid1D> {
        Grid1D::new(self.lower, self.upper, self.step)
    }

    fn of(grid: &Grid1D) -> Self {
        Self {
            lower: grid.lower(),
            upper: grid.upper(),
            step: grid.step(),
        }
    }
}

/// Model parameter description: an explicit list or an even grid.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaDoc {
    Grid { lower: f64, upper: f64, step: f64 },
    List { values: Vec<f64> },
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GaussianExampleDoc {
    pub kind: String,
    pub variant: String,
    pub theta: ThetaDoc,
    /// One grid for line variants, two for the planar variant.
    pub grid: Vec<GridDoc>,
}

pub fn gaussian_spec_to_json(spec: &GaussianExampleSpec, grid: &DiscretizationGrid) -> String {
    let grids = match grid {
        DiscretizationGrid::Line(a) => vec![GridDoc::of(a)],
        DiscretizationGrid::Plane(a, b) => vec![GridDoc::of(a), GridDoc::of(b)],
    };
    encode(&GaussianExampleDoc {
        kind: "gaussian_example".into(),
        variant: spec.variant.as_str().into(),
        theta: ThetaDoc::List {
            values: spec.thetas.clone(),
        },
        grid: grids,
    })
}

pub fn gaussian_spec_from_json(json: &str) -> Result<(GaussianExampleSpec, DiscretizationGrid)> {
    let doc: GaussianExampleDoc = decode(json)?;
    expect_kind(&doc.kind, "gaussian_example")?;
    let variant = GaussianVariant::parse(&doc.variant)?;
    let thetas = match doc.theta {
        ThetaDoc::List { values } => values,
        ThetaDoc::Grid { lower, upper, step } => {
            let g = Grid1D::new(lower, upper, step)?;
            let count = g.cell_count() + 1;
            (0..count)
                .map(|i| if i + 1 == count { upper } else { lower + i as f64 * step })
                .collect()
        }
    };
    let spec = GaussianExampleSpec { variant, thetas };
    let grid = match (variant, doc.grid.as_slice()) {
        (GaussianVariant::TwoModel2d, [a, b]) => {
            DiscretizationGrid::Plane(a.to_grid()?, b.to_grid()?)
        }
        (GaussianVariant::TwoModel2d, [a]) => {
            DiscretizationGrid::Plane(a.to_grid()?, a.to_grid()?)
        }
        (_, [a]) => DiscretizationGrid::Line(a.to_grid()?),
        _ => {
            return Err(Error::Schema(format!(
                "variant '{}' expects one signal grid, found {}",
                doc.variant,
                doc.grid.len()
            )))
        }
    };
    Ok((spec, grid))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn object_round_trip_preserves_everything() {
        let object = FiniteComplexObject::new(2, 2, 1, vec![0.1, 0.2, 0.3, 0.4])
            .unwrap()
            .with_labels(
                Some(vec!["a".into(), "b".into()]),
                Some(vec!["s".into(), "t".into()]),
                Some(vec!["m".into()]),
            )
            .unwrap();
        let json = object_to_json(&object);
        let loaded = object_from_json(&json).unwrap();
        assert_eq!(object, loaded);
    }

    #[test]
    fn kind_discriminator_is_checked() {
        let object = FiniteComplexObject::new(1, 2, 1, vec![0.5, 0.5]).unwrap();
        let json = object_to_json(&object);
        assert!(matches!(loss_from_json(&json), Err(Error::Schema(_))));
    }

    #[test]
    fn invalid_documents_are_rejected_not_renormalized() {
        let json = r#"{"kind":"complex_object","signals":1,"states":2,"models":1,
                       "probabilities":[0.6,0.6]}"#;
        assert!(object_from_json(json).is_err());
    }

    #[test]
    fn loss_strategy_source_weights_round_trip() {
        let loss = LossMatrix::new(vec![vec![0.0, 2.5], vec![1.0, 0.0]]).unwrap();
        assert_eq!(loss_from_json(&loss_to_json(&loss)).unwrap(), loss);

        let strategy = Strategy::new(2, 2, vec![0.25, 0.75, 1.0, 0.0]).unwrap();
        assert_eq!(
            strategy_from_json(&strategy_to_json(&strategy)).unwrap(),
            strategy
        );

        let source = LearningSource::new(2, 2, vec![0.3, 0.6, 0.7, 0.4])
            .unwrap()
            .with_descriptors(vec!["z0".into(), "z1".into()])
            .unwrap();
        assert_eq!(source_from_json(&source_to_json(&source)).unwrap(), source);

        let weights = WeightFunction::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(
            weights_from_json(&weights_to_json(&weights)).unwrap(),
            weights
        );
    }

    #[test]
    fn gaussian_spec_round_trip_and_theta_grid_form() {
        let spec = GaussianExampleSpec::robbins(0.25).unwrap();
        let grid = crate::gaussian::default_grid(GaussianVariant::Robbins);
        let json = gaussian_spec_to_json(&spec, &grid);
        let (loaded, lgrid) = gaussian_spec_from_json(&json).unwrap();
        assert_eq!(loaded, spec);
        assert_eq!(lgrid, grid);

        let json = r#"{
            "kind": "gaussian_example",
            "variant": "two-mean",
            "theta": {"lower": -6.0, "upper": 6.0, "step": 0.2},
            "grid": [{"lower": -10.0, "upper": 10.0, "step": 0.02}]
        }"#;
        let (spec, _) = gaussian_spec_from_json(json).unwrap();
        assert_eq!(spec.thetas.len(), 61);
        assert_eq!(*spec.thetas.last().unwrap(), 6.0);
    }
}
