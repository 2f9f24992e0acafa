//! Discretized Gaussian example objects and model-specific heuristics.
//!
//! The continuous examples share one density family: unit-variance Gaussians
//! whose state priors or means carry the unknown model parameter. A grid
//! turns each density into a finite complex object by assigning every cell
//! the CDF difference across its edges; leftover tail mass is folded into
//! the two boundary cells so each model's tensor sums to one exactly.
//!
//! Three variants are built here:
//! - `Robbins`: means +1/-1, unknown state prior `theta` in [0, 1]
//! - `TwoMean`: state-1 mean 0, unknown state-2 mean `theta` in [-6, 6]
//! - `TwoModel2d`: two 2-D models with state means (0,0)/(0,1) and (0,0)/(1,0)
//!
//! The heuristics reproduce the classical plug-in rules: the threshold rule
//! `alpha = 0.5 ln((n - sum x) / (n + sum x))` for the Robbins model, and
//! consistent-estimate plug-ins for the one-dimensional variants.

use crate::decision::{self, RiskKernel};
use crate::error::{Error, Result};
use crate::learning::{self, LearningSource, MultisetSource, SignalQuantizer};
use crate::object::{FiniteComplexObject, LossMatrix, Strategy};

// ---------------------------------------------------------------------------
// Standard normal CDF
// ---------------------------------------------------------------------------

/// Coefficients of the rational approximations below come from the FreeBSD
/// msun `erf` implementation (as ported to Go's `math.Erfc`); absolute error
/// is within a few ulps across the whole range.
mod erfc_consts {
    pub const ERX: f64 = 8.450_629_115_104_675_3e-1;
    pub const PP0: f64 = 1.283_791_670_955_125_6e-1;
    pub const PP1: f64 = -3.250_421_072_470_015e-1;
    pub const PP2: f64 = -2.848_174_957_559_851e-2;
    pub const PP3: f64 = -5.770_270_296_489_442e-3;
    pub const PP4: f64 = -2.376_301_665_665_016_3e-5;
    pub const QQ1: f64 = 3.979_172_239_591_553_5e-1;
    pub const QQ2: f64 = 6.502_224_998_876_729e-2;
    pub const QQ3: f64 = 5.081_306_281_875_766e-3;
    pub const QQ4: f64 = 1.324_947_380_043_216_4e-4;
    pub const QQ5: f64 = -3.960_228_278_775_368e-6;
    pub const PA0: f64 = -2.362_118_560_752_659_4e-3;
    pub const PA1: f64 = 4.148_561_186_837_483_4e-1;
    pub const PA2: f64 = -3.722_078_760_357_013_3e-1;
    pub const PA3: f64 = 3.183_466_199_011_617_5e-1;
    pub const PA4: f64 = -1.108_946_942_823_966_8e-1;
    pub const PA5: f64 = 3.547_830_432_561_823_6e-2;
    pub const PA6: f64 = -2.166_375_594_868_790_8e-3;
    pub const QA1: f64 = 1.064_208_804_008_442_3e-1;
    pub const QA2: f64 = 5.403_979_177_021_710_5e-1;
    pub const QA3: f64 = 7.182_865_441_419_627e-2;
    pub const QA4: f64 = 1.261_712_198_087_616_4e-1;
    pub const QA5: f64 = 1.363_708_391_202_905e-2;
    pub const QA6: f64 = 1.198_449_984_679_910_7e-2;
    pub const RA0: f64 = -9.864_944_034_847_148e-3;
    pub const RA1: f64 = -6.938_585_727_071_818e-1;
    pub const RA2: f64 = -1.055_862_622_532_329_1e1;
    pub const RA3: f64 = -6.237_533_245_032_6e1;
    pub const RA4: f64 = -1.623_966_694_625_734_7e2;
    pub const RA5: f64 = -1.846_050_929_067_110_4e2;
    pub const RA6: f64 = -8.128_743_550_630_66e1;
    pub const RA7: f64 = -9.814_329_344_169_146;
    pub const SA1: f64 = 1.965_127_166_743_925_7e1;
    pub const SA2: f64 = 1.376_577_541_435_190_4e2;
    pub const SA3: f64 = 4.345_658_774_752_292e2;
    pub const SA4: f64 = 6.453_872_717_332_679e2;
    pub const SA5: f64 = 4.290_081_400_275_678e2;
    pub const SA6: f64 = 1.086_350_055_417_794_4e2;
    pub const SA7: f64 = 6.570_249_770_319_282;
    pub const SA8: f64 = -6.042_441_521_485_81e-2;
    pub const RB0: f64 = -9.864_942_924_700_099e-3;
    pub const RB1: f64 = -7.992_832_376_805_23e-1;
    pub const RB2: f64 = -1.775_795_491_775_475_2e1;
    pub const RB3: f64 = -1.606_363_848_558_219_2e2;
    pub const RB4: f64 = -6.375_664_433_683_896e2;
    pub const RB5: f64 = -1.025_095_131_611_077_2e3;
    pub const RB6: f64 = -4.835_191_916_086_514e2;
    pub const SB1: f64 = 3.033_806_074_348_246e1;
    pub const SB2: f64 = 3.257_925_129_965_739_2e2;
    pub const SB3: f64 = 1.536_729_586_084_437e3;
    pub const SB4: f64 = 3.199_858_219_508_595_4e3;
    pub const SB5: f64 = 2.553_050_406_433_164_3e3;
    pub const SB6: f64 = 4.745_285_412_069_554e2;
    pub const SB7: f64 = -2.244_095_244_658_581_8e1;
    /// 2^-56
    pub const TINY: f64 = 1.387_778_780_781_445_7e-17;
}

/// Complementary error function, accurate to a few ulps.
fn erfc(x: f64) -> f64 {
    use erfc_consts::*;
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if x == f64::NEG_INFINITY {
        return 2.0;
    }
    let sign = x < 0.0;
    let x = x.abs();
    if x < 0.84375 {
        let temp = if x < TINY {
            x
        } else {
            let z = x * x;
            let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
            let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
            let y = r / s;
            if x < 0.25 {
                x + x * y
            } else {
                0.5 + (x * y + (x - 0.5))
            }
        };
        return if sign { 1.0 + temp } else { 1.0 - temp };
    }
    if x < 1.25 {
        let s = x - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        return if sign { 1.0 + ERX + p / q } else { 1.0 - ERX - p / q };
    }
    if x < 28.0 {
        let s = 1.0 / (x * x);
        let (r, t) = if x < 1.0 / 0.35 {
            (
                RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7)))))),
                1.0 + s
                    * (SA1
                        + s * (SA2
                            + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8))))))),
            )
        } else {
            if sign && x > 6.0 {
                return 2.0;
            }
            (
                RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6))))),
                1.0 + s * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7)))))),
            )
        };
        // pseudo-single precision split keeps exp(-x^2) accurate
        let z = f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000);
        let v = f64::exp(-z * z - 0.5625) * f64::exp((z - x) * (z + x) + r / t);
        return if sign { 2.0 - v / x } else { v / x };
    }
    if sign {
        2.0
    } else {
        0.0
    }
}

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Standard normal CDF, absolute error well below 1e-10.
pub fn gaussian_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

/// Uniform one-dimensional signal grid: cells `[lower + i*step, lower + (i+1)*step)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    lower: f64,
    upper: f64,
    step: f64,
    cells: usize,
}

impl Grid1D {
    pub fn new(lower: f64, upper: f64, step: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && step.is_finite()) || step <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "grid [{lower}, {upper}] step {step} must be finite with positive step"
            )));
        }
        let span = upper - lower;
        if span <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "grid upper bound {upper} must exceed lower bound {lower}"
            )));
        }
        let cells_f = span / step;
        let cells = cells_f.round();
        if cells < 1.0 || (cells_f - cells).abs() > 1e-6 {
            return Err(Error::InvalidConfig(format!(
                "grid span {span} is not an integer number of steps of {step}"
            )));
        }
        Ok(Self {
            lower,
            upper,
            step,
            cells: cells as usize,
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn cell_count(&self) -> usize {
        self.cells
    }

    /// Lower edge of cell `i`; the final edge is pinned to the upper bound.
    pub fn edge(&self, i: usize) -> f64 {
        if i >= self.cells {
            self.upper
        } else {
            self.lower + i as f64 * self.step
        }
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lower + (i as f64 + 0.5) * self.step
    }

    /// Index of the cell containing `x`, clamping values outside the range.
    pub fn cell_containing(&self, x: f64) -> usize {
        if x <= self.lower {
            return 0;
        }
        let i = ((x - self.lower) / self.step).floor() as usize;
        i.min(self.cells - 1)
    }

    /// Per-cell probability mass of a unit-variance Gaussian centered at
    /// `mean`, with both tails folded into the boundary cells.
    fn gaussian_masses(&self, mean: f64) -> Vec<f64> {
        let mut edges = Vec::with_capacity(self.cells + 1);
        for i in 0..=self.cells {
            edges.push(gaussian_cdf(self.edge(i) - mean));
        }
        let mut masses: Vec<f64> = (0..self.cells).map(|i| edges[i + 1] - edges[i]).collect();
        masses[0] += edges[0];
        let last = self.cells - 1;
        masses[last] += 1.0 - edges[self.cells];
        masses
    }
}

/// Signal grid of an example: a line for the 1-D variants, a product of two
/// axis grids for the 2-D variant (signal index = `i1 * cells2 + i2`).
#[derive(Debug, Clone, PartialEq)]
pub enum DiscretizationGrid {
    Line(Grid1D),
    Plane(Grid1D, Grid1D),
}

// ---------------------------------------------------------------------------
// Example specifications
// ---------------------------------------------------------------------------

/// Which continuous example family to discretize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussianVariant {
    /// Means +1/-1, unknown state prior `theta` on [0, 1].
    Robbins,
    /// State-1 mean 0, unknown state-2 mean `theta` on [-6, 6].
    TwoMean,
    /// Two 2-D models: state B mean (0,1) under model 1, (1,0) under model 2.
    TwoModel2d,
}

impl GaussianVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            GaussianVariant::Robbins => "robbins",
            GaussianVariant::TwoMean => "two-mean",
            GaussianVariant::TwoModel2d => "two-model-2d",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "robbins" => Ok(GaussianVariant::Robbins),
            "two-mean" => Ok(GaussianVariant::TwoMean),
            "two-model-2d" => Ok(GaussianVariant::TwoModel2d),
            other => Err(Error::InvalidConfig(format!("unknown variant '{other}'"))),
        }
    }
}

/// A variant together with its model parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianExampleSpec {
    pub variant: GaussianVariant,
    /// Model parameters: priors for `Robbins`, means for `TwoMean`, and the
    /// fixed labels 1, 2 for `TwoModel2d`.
    pub thetas: Vec<f64>,
}

/// Evenly spaced parameter values with the final point pinned to `upper`.
fn theta_grid(lower: f64, upper: f64, step: f64) -> Result<Vec<f64>> {
    let grid = Grid1D::new(lower, upper, step)?;
    let count = grid.cell_count() + 1;
    let mut thetas = Vec::with_capacity(count);
    for i in 0..count {
        thetas.push(if i + 1 == count { upper } else { lower + i as f64 * step });
    }
    Ok(thetas)
}

impl GaussianExampleSpec {
    /// Robbins model with priors discretized at `theta_step` over [0, 1].
    pub fn robbins(theta_step: f64) -> Result<Self> {
        Ok(Self {
            variant: GaussianVariant::Robbins,
            thetas: theta_grid(0.0, 1.0, theta_step)?,
        })
    }

    /// Two-mean model with the unknown mean discretized at `theta_step`
    /// over [-6, 6]; the default step 0.2 yields 61 values.
    pub fn two_mean(theta_step: f64) -> Result<Self> {
        Ok(Self {
            variant: GaussianVariant::TwoMean,
            thetas: theta_grid(-6.0, 6.0, theta_step)?,
        })
    }

    /// The two-model planar example.
    pub fn two_model_2d() -> Self {
        Self {
            variant: GaussianVariant::TwoModel2d,
            thetas: vec![1.0, 2.0],
        }
    }

    /// Mean vector of `(state, model)`; 1-D variants use only the first slot.
    fn mean(&self, state: usize, model: usize) -> (f64, f64) {
        match self.variant {
            GaussianVariant::Robbins => (if state == 0 { 1.0 } else { -1.0 }, 0.0),
            GaussianVariant::TwoMean => (if state == 0 { 0.0 } else { self.thetas[model] }, 0.0),
            GaussianVariant::TwoModel2d => match (state, model) {
                (0, _) => (0.0, 0.0),
                (1, 0) => (0.0, 1.0),
                _ => (1.0, 0.0),
            },
        }
    }

    /// State prior under a model.
    fn prior(&self, state: usize, model: usize) -> f64 {
        match self.variant {
            GaussianVariant::Robbins => {
                let theta = self.thetas[model];
                if state == 0 {
                    theta
                } else {
                    1.0 - theta
                }
            }
            _ => 0.5,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.thetas.is_empty() {
            return Err(Error::InvalidConfig("empty model parameter list".into()));
        }
        match self.variant {
            GaussianVariant::Robbins => {
                if self.thetas.iter().any(|&t| !(0.0..=1.0).contains(&t)) {
                    return Err(Error::InvalidConfig(
                        "robbins priors must lie in [0, 1]".into(),
                    ));
                }
            }
            GaussianVariant::TwoMean => {
                if self.thetas.iter().any(|&t| !(-6.0..=6.0).contains(&t)) {
                    return Err(Error::InvalidConfig(
                        "two-mean parameters must lie in [-6, 6]".into(),
                    ));
                }
            }
            GaussianVariant::TwoModel2d => {
                if self.thetas != vec![1.0, 2.0] {
                    return Err(Error::InvalidConfig(
                        "the planar example has exactly the two models 1 and 2".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Default grids: chosen so that tail mass stays below 1e-8 and the
/// published scalar values are reproduced within 0.005.
pub fn default_grid(variant: GaussianVariant) -> DiscretizationGrid {
    match variant {
        GaussianVariant::Robbins => DiscretizationGrid::Line(Grid1D::new(-6.0, 6.0, 0.01).unwrap()),
        GaussianVariant::TwoMean => {
            DiscretizationGrid::Line(Grid1D::new(-10.0, 10.0, 0.02).unwrap())
        }
        GaussianVariant::TwoModel2d => DiscretizationGrid::Plane(
            Grid1D::new(-5.0, 6.0, 0.05).unwrap(),
            Grid1D::new(-5.0, 6.0, 0.05).unwrap(),
        ),
    }
}

pub const DEFAULT_ROBBINS_THETA_STEP: f64 = 0.05;
pub const DEFAULT_TWO_MEAN_THETA_STEP: f64 = 0.2;

/// A discretized example: spec, grid, and the resulting finite object.
#[derive(Debug, Clone)]
pub struct GaussianExample {
    pub spec: GaussianExampleSpec,
    pub grid: DiscretizationGrid,
    pub object: FiniteComplexObject,
}

/// Discretize a Gaussian example spec on a grid. Cell probability is the
/// CDF difference across the cell's edges times the state prior; the grid
/// must cover mean +/- 4 for every model's components.
pub fn discretize(spec: &GaussianExampleSpec, grid: &DiscretizationGrid) -> Result<GaussianExample> {
    spec.validate()?;
    let state_count = 2usize;
    let model_count = spec.thetas.len();

    // coverage check, reporting the worst-covered model
    let mut worst: Option<(usize, f64, f64)> = None; // (model, mean, violation)
    {
        let mut check_axis = |axis: &Grid1D, mean: f64, model: usize| {
            let violation = (axis.lower() - (mean - 4.0)).max((mean + 4.0) - axis.upper());
            if violation > 1e-12 {
                match worst {
                    Some((_, _, v)) if v >= violation => {}
                    _ => worst = Some((model, mean, violation)),
                }
            }
        };
        for t in 0..model_count {
            for y in 0..state_count {
                let (m1, m2) = spec.mean(y, t);
                match grid {
                    DiscretizationGrid::Line(axis) => check_axis(axis, m1, t),
                    DiscretizationGrid::Plane(a1, a2) => {
                        check_axis(a1, m1, t);
                        check_axis(a2, m2, t);
                    }
                }
            }
        }
    }
    if let Some((model, mean, _)) = worst {
        let (lower, upper) = match grid {
            DiscretizationGrid::Line(axis) => (axis.lower(), axis.upper()),
            DiscretizationGrid::Plane(a1, _) => (a1.lower(), a1.upper()),
        };
        return Err(Error::InsufficientCoverage {
            lower,
            upper,
            mean,
            model,
        });
    }

    let object = match grid {
        DiscretizationGrid::Line(axis) => {
            // distinct means share their mass vectors
            let mut mean_masses: Vec<(f64, Vec<f64>)> = Vec::new();
            let mut mass_index = vec![0usize; state_count * model_count];
            for y in 0..state_count {
                for t in 0..model_count {
                    let mean = spec.mean(y, t).0;
                    let idx = match mean_masses.iter().position(|(m, _)| *m == mean) {
                        Some(i) => i,
                        None => {
                            mean_masses.push((mean, axis.gaussian_masses(mean)));
                            mean_masses.len() - 1
                        }
                    };
                    mass_index[y * model_count + t] = idx;
                }
            }
            let nx = axis.cell_count();
            let mut probs = vec![0.0; nx * state_count * model_count];
            for x in 0..nx {
                for y in 0..state_count {
                    for t in 0..model_count {
                        let masses = &mean_masses[mass_index[y * model_count + t]].1;
                        probs[(x * state_count + y) * model_count + t] =
                            spec.prior(y, t) * masses[x];
                    }
                }
            }
            let signal_labels = (0..nx).map(|i| format!("x={:.4}", axis.center(i))).collect();
            FiniteComplexObject::new(nx, state_count, model_count, probs)?.with_labels(
                Some(signal_labels),
                Some(state_labels(spec)),
                Some(model_labels(spec)),
            )?
        }
        DiscretizationGrid::Plane(a1, a2) => {
            let (n1, n2) = (a1.cell_count(), a2.cell_count());
            let nx = n1 * n2;
            let mut probs = vec![0.0; nx * state_count * model_count];
            for y in 0..state_count {
                for t in 0..model_count {
                    let (m1, m2) = spec.mean(y, t);
                    let d1 = a1.gaussian_masses(m1);
                    let d2 = a2.gaussian_masses(m2);
                    let prior = spec.prior(y, t);
                    for i1 in 0..n1 {
                        let row_mass = prior * d1[i1];
                        for (i2, &mass2) in d2.iter().enumerate() {
                            let x = i1 * n2 + i2;
                            probs[(x * state_count + y) * model_count + t] = row_mass * mass2;
                        }
                    }
                }
            }
            FiniteComplexObject::new(nx, state_count, model_count, probs)?.with_labels(
                None,
                Some(state_labels(spec)),
                Some(model_labels(spec)),
            )?
        }
    };

    Ok(GaussianExample {
        spec: spec.clone(),
        grid: grid.clone(),
        object,
    })
}

fn state_labels(spec: &GaussianExampleSpec) -> Vec<String> {
    match spec.variant {
        GaussianVariant::Robbins => vec!["y=1 (mean +1)".into(), "y=2 (mean -1)".into()],
        GaussianVariant::TwoMean => vec!["y=1 (mean 0)".into(), "y=2 (mean theta)".into()],
        GaussianVariant::TwoModel2d => vec!["A".into(), "B".into()],
    }
}

fn model_labels(spec: &GaussianExampleSpec) -> Vec<String> {
    spec.thetas.iter().map(|t| format!("theta={t}")).collect()
}

impl GaussianExample {
    /// Build a variant on its default grids.
    pub fn default_for(variant: GaussianVariant) -> Result<Self> {
        let spec = match variant {
            GaussianVariant::Robbins => GaussianExampleSpec::robbins(DEFAULT_ROBBINS_THETA_STEP)?,
            GaussianVariant::TwoMean => GaussianExampleSpec::two_mean(DEFAULT_TWO_MEAN_THETA_STEP)?,
            GaussianVariant::TwoModel2d => GaussianExampleSpec::two_model_2d(),
        };
        discretize(&spec, &default_grid(variant))
    }

    pub fn thetas(&self) -> &[f64] {
        &self.spec.thetas
    }

    /// The signal axis for 1-D variants.
    pub fn line_grid(&self) -> Result<&Grid1D> {
        match &self.grid {
            DiscretizationGrid::Line(axis) => Ok(axis),
            DiscretizationGrid::Plane(..) => Err(Error::InvalidConfig(
                "operation requires a one-dimensional signal grid".into(),
            )),
        }
    }

    /// Signal index of the grid cell containing a real signal value (1-D).
    pub fn signal_index_of(&self, value: f64) -> Result<usize> {
        Ok(self.line_grid()?.cell_containing(value))
    }

    /// Signal index of the cell containing a planar signal (2-D).
    pub fn signal_index_of_plane(&self, v1: f64, v2: f64) -> Result<usize> {
        match &self.grid {
            DiscretizationGrid::Plane(a1, a2) => {
                Ok(a1.cell_containing(v1) * a2.cell_count() + a2.cell_containing(v2))
            }
            DiscretizationGrid::Line(_) => Err(Error::InvalidConfig(
                "operation requires the planar signal grid".into(),
            )),
        }
    }

    /// Index of the model parameter nearest to `value`, clamped into the
    /// parameter range; exact ties snap toward the lower parameter.
    pub fn nearest_theta_index(&self, value: f64) -> usize {
        let thetas = &self.spec.thetas;
        let lo = thetas.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = thetas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let v = value.clamp(lo, hi);
        let mut best = 0usize;
        let mut best_dist = (thetas[0] - v).abs();
        for (i, &t) in thetas.iter().enumerate().skip(1) {
            let d = (t - v).abs();
            if d < best_dist || (d == best_dist && t < thetas[best]) {
                best = i;
                best_dist = d;
            }
        }
        best
    }

    /// Uniform quantizer over the 1-D signal range: `cells` equal-width
    /// groups, assigned by cell center, with group centers as representative
    /// signal values.
    pub fn uniform_quantizer(&self, cells: usize) -> Result<(SignalQuantizer, Vec<f64>)> {
        let axis = self.line_grid()?;
        if cells == 0 {
            return Err(Error::InvalidConfig("quantizer needs at least one cell".into()));
        }
        let width = (axis.upper() - axis.lower()) / cells as f64;
        let mut cell_of = Vec::with_capacity(axis.cell_count());
        for i in 0..axis.cell_count() {
            let g = ((axis.center(i) - axis.lower()) / width).floor() as usize;
            cell_of.push(g.min(cells - 1) as u32);
        }
        let representatives = (0..cells)
            .map(|g| axis.lower() + (g as f64 + 0.5) * width)
            .collect();
        Ok((SignalQuantizer::new(cell_of, cells)?, representatives))
    }
}

// ---------------------------------------------------------------------------
// Heuristic learning rules
// ---------------------------------------------------------------------------

/// Threshold clamp used when the log argument degenerates; a threshold of
/// +/-50 exits every grid, which makes the decision constant.
pub const THRESHOLD_CLAMP: f64 = 50.0;

/// Robbins' heuristic threshold `alpha = 0.5 ln((n - sum x) / (n + sum x))`.
/// Decide state 1 iff `x >= alpha`. When `sum x >= n` the argument is
/// nonpositive and the rule always decides state 1 (`alpha = -50`); when
/// `sum x <= -n` it never does (`alpha = +50`).
pub fn robbins_threshold(sample: &[f64]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample("threshold heuristic sample"));
    }
    let n = sample.len() as f64;
    let sum: f64 = sample.iter().sum();
    if sum >= n {
        return Ok(-THRESHOLD_CLAMP);
    }
    if sum <= -n {
        return Ok(THRESHOLD_CLAMP);
    }
    let alpha = 0.5 * ((n - sum) / (n + sum)).ln();
    Ok(alpha.clamp(-THRESHOLD_CLAMP, THRESHOLD_CLAMP))
}

/// Deterministic strategy deciding state 1 (index 0) on all cells whose
/// center is at or above the threshold. Robbins variant only.
pub fn threshold_strategy(example: &GaussianExample, alpha: f64) -> Result<Strategy> {
    if example.spec.variant != GaussianVariant::Robbins {
        return Err(Error::InvalidConfig(
            "threshold strategies apply to the robbins variant".into(),
        ));
    }
    let axis = example.line_grid()?;
    let decisions: Vec<usize> = (0..axis.cell_count())
        .map(|i| usize::from(axis.center(i) < alpha))
        .collect();
    Strategy::deterministic(&decisions, example.object.state_count())
}

/// The published consistent estimates: `sum x / (2n) + 1/2` for the Robbins
/// prior and `2 sum x / n` for the unknown two-mean parameter.
pub fn consistent_estimate(variant: GaussianVariant, sample: &[f64]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample("consistent-estimate sample"));
    }
    let n = sample.len() as f64;
    let sum: f64 = sample.iter().sum();
    match variant {
        GaussianVariant::Robbins => Ok(sum / (2.0 * n) + 0.5),
        GaussianVariant::TwoMean => Ok(2.0 * sum / n),
        GaussianVariant::TwoModel2d => Err(Error::InvalidConfig(
            "no consistent estimate is defined for the planar example".into(),
        )),
    }
}

/// Plug-in strategy from the consistent estimate: clamp into the parameter
/// range, snap to the nearest grid parameter (ties toward the lower value),
/// and recognize optimally for that model.
pub fn consistent_estimate_strategy(
    example: &GaussianExample,
    loss: &LossMatrix,
    sample: &[f64],
) -> Result<(usize, Strategy)> {
    let estimate = consistent_estimate(example.spec.variant, sample)?;
    let model = example.nearest_theta_index(estimate);
    let strategy = decision::optimal_strategy(&example.object, loss, model)?;
    Ok((model, strategy))
}

/// Heuristic learning rules evaluated against a quantized source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeuristicKind {
    /// Plug in the model maximizing the source likelihood `p(z; theta)`.
    MlSupervised,
    /// Plug in the model maximizing the marginal signal likelihood at the
    /// representative signal values of the outcome's cells.
    MlUnsupervised,
    /// Robbins' threshold rule applied to the representative values.
    Robbins,
    /// Consistent-estimate plug-in applied to the representative values.
    Consistent,
}

impl HeuristicKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            HeuristicKind::MlSupervised => "ml-supervised",
            HeuristicKind::MlUnsupervised => "ml-unsupervised",
            HeuristicKind::Robbins => "robbins",
            HeuristicKind::Consistent => "consistent",
        }
    }
}

/// Expected risks `R_Z` over all models of the explicit procedure obtained
/// by applying a heuristic to every source outcome. The sum over outcomes is
/// exact; nothing is sampled. Representative values decode quantizer cells
/// back to real signals for the estimate-based rules.
pub fn heuristic_risk_curve(
    example: &GaussianExample,
    loss: &LossMatrix,
    kind: HeuristicKind,
    source: &MultisetSource,
    representatives: &[f64],
) -> Result<Vec<f64>> {
    let object = &example.object;
    if source.source.model_count() != object.model_count() {
        return Err(Error::DimensionMismatch {
            context: "learning source model axis",
            expected: object.model_count(),
            got: source.source.model_count(),
        });
    }
    if source.outcomes.iter().any(|o| o.is_empty()) {
        return Err(Error::EmptySample(
            "model estimates are meaningless without observations; use n >= 1",
        ));
    }
    let needs_reps = kind != HeuristicKind::MlSupervised;
    if needs_reps {
        let max_cell = source
            .outcomes
            .iter()
            .flat_map(|o| o.iter())
            .max()
            .copied()
            .unwrap_or(0) as usize;
        if representatives.len() <= max_cell {
            return Err(Error::DimensionMismatch {
                context: "quantizer representatives",
                expected: max_cell + 1,
                got: representatives.len(),
            });
        }
    }
    if matches!(kind, HeuristicKind::Robbins) && example.spec.variant != GaussianVariant::Robbins {
        return Err(Error::InvalidConfig(
            "the threshold heuristic applies to the robbins variant".into(),
        ));
    }
    let axis = if needs_reps { Some(example.line_grid()?) } else { None };

    let kernel = RiskKernel::new(object, loss)?;
    // per-model optimal decisions, shared by all plug-in rules
    let optimal_decisions: Vec<Vec<u32>> = (0..object.model_count())
        .map(|t| {
            let mut point = vec![0.0; object.model_count()];
            point[t] = 1.0;
            kernel.bayes_decisions(&point)
        })
        .collect();
    // log marginal signal likelihood at each representative, per model
    let rep_log_marginals: Vec<Vec<f64>> = if kind == HeuristicKind::MlUnsupervised {
        let axis = axis.expect("checked above");
        representatives
            .iter()
            .map(|&v| {
                let x = axis.cell_containing(v);
                (0..object.model_count())
                    .map(|t| object.signal_marginal(x, t).ln())
                    .collect()
            })
            .collect()
    } else {
        Vec::new()
    };

    let decisions_for = |z: usize| -> Vec<u32> {
        let outcome = &source.outcomes[z];
        match kind {
            HeuristicKind::MlSupervised => {
                let row = source.source.row(z);
                let mut best = 0usize;
                let mut best_p = row[0];
                for (t, &p) in row.iter().enumerate().skip(1) {
                    if p > best_p {
                        best_p = p;
                        best = t;
                    }
                }
                optimal_decisions[best].clone()
            }
            HeuristicKind::MlUnsupervised => {
                let mut best = 0usize;
                let mut best_score = f64::NEG_INFINITY;
                for t in 0..object.model_count() {
                    let score: f64 = outcome
                        .iter()
                        .map(|&c| rep_log_marginals[c as usize][t])
                        .sum();
                    if score > best_score {
                        best_score = score;
                        best = t;
                    }
                }
                optimal_decisions[best].clone()
            }
            HeuristicKind::Robbins => {
                let values: Vec<f64> =
                    outcome.iter().map(|&c| representatives[c as usize]).collect();
                let alpha = robbins_threshold(&values).expect("outcome is nonempty");
                let axis = axis.expect("checked above");
                (0..axis.cell_count())
                    .map(|i| u32::from(axis.center(i) < alpha))
                    .collect()
            }
            HeuristicKind::Consistent => {
                let values: Vec<f64> =
                    outcome.iter().map(|&c| representatives[c as usize]).collect();
                let estimate = consistent_estimate(example.spec.variant, &values)
                    .expect("outcome is nonempty");
                let model = example.nearest_theta_index(estimate);
                optimal_decisions[model].clone()
            }
        }
    };

    Ok(learning::risk_curve_by(&kernel, &source.source, decisions_for))
}

/// Expected risk of a heuristic procedure under a single model.
pub fn heuristic_procedure_risk(
    example: &GaussianExample,
    loss: &LossMatrix,
    kind: HeuristicKind,
    source: &MultisetSource,
    representatives: &[f64],
    model: usize,
) -> Result<f64> {
    example.object.check_model(model)?;
    Ok(heuristic_risk_curve(example, loss, kind, source, representatives)?[model])
}

/// Expected risks of the source-likelihood plug-in procedure
/// `g(z) = optimal_strategy(argmax_theta p(z; theta))`, streamed without
/// materializing the per-outcome strategies.
pub fn ml_plugin_risk_curve(
    object: &FiniteComplexObject,
    loss: &LossMatrix,
    source: &LearningSource,
) -> Result<Vec<f64>> {
    if source.model_count() != object.model_count() {
        return Err(Error::DimensionMismatch {
            context: "learning source model axis",
            expected: object.model_count(),
            got: source.model_count(),
        });
    }
    let kernel = RiskKernel::new(object, loss)?;
    let optimal_decisions: Vec<Vec<u32>> = (0..object.model_count())
        .map(|t| {
            let mut point = vec![0.0; object.model_count()];
            point[t] = 1.0;
            kernel.bayes_decisions(&point)
        })
        .collect();
    let decisions_for = |z: usize| -> Vec<u32> {
        let row = source.row(z);
        let mut best = 0usize;
        let mut best_p = row[0];
        for (t, &p) in row.iter().enumerate().skip(1) {
            if p > best_p {
                best_p = p;
                best = t;
            }
        }
        optimal_decisions[best].clone()
    };
    Ok(learning::risk_curve_by(&kernel, source, decisions_for))
}
