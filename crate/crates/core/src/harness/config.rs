use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::{CurvatureKind, NoiseModel, ObjectiveId};
use crate::optimizer::{FeasibleSet, ScStepRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DriverKind {
    /// Unconstrained descent for PL objectives.
    Pl,
    /// Projected descent with weighted averaging for strongly convex objectives.
    Sc,
}

impl DriverKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DriverKind::Pl => "pl",
            DriverKind::Sc => "sc",
        }
    }

    pub fn curvature(&self) -> CurvatureKind {
        match self {
            DriverKind::Pl => CurvatureKind::Pl,
            DriverKind::Sc => CurvatureKind::StronglyConvex,
        }
    }
}

/// Starting point: an explicit vector, or `{"fill": v}` for `(v, ..., v)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum X1Spec {
    Point(Vec<f64>),
    Fill { fill: f64 },
}

/// One experiment grid, read from a JSON document.
///
/// ```json
/// {
///   "driver": "sc",
///   "objective": "quadratic:a=2",
///   "d": 2,
///   "beta": 2.0,
///   "horizons": [256, 1024, 4096, 16384],
///   "replications": 20,
///   "seed": 1,
///   "noise": { "kind": "gaussian", "sigma": 0.3 },
///   "feasible_set": { "kind": "ball", "center": [0, 0], "radius": 1 }
/// }
/// ```
///
/// Optional fields: `sigma2` (defaults to the noise model's bound and is
/// required for noiseless runs), `h_multiplier` (1), `sc_step`
/// (`"anytime"`), `feasible_set` (whole space) and `x1`. Without `x1`, PL
/// runs start at `(3, ..., 3)` and SC runs at the point of `Θ` reached from
/// its center along `e_1` (the outermost corner for a box).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub driver: DriverKind,
    pub objective: String,
    pub d: usize,
    pub beta: f64,
    pub horizons: Vec<usize>,
    pub replications: usize,
    pub seed: u64,
    pub noise: NoiseModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<f64>,
    #[serde(default = "one")]
    pub h_multiplier: f64,
    #[serde(default)]
    pub sc_step: ScStepRule,
    #[serde(default = "whole_space")]
    pub feasible_set: FeasibleSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x1: Option<X1Spec>,
}

fn one() -> f64 {
    1.0
}

fn whole_space() -> FeasibleSet {
    FeasibleSet::WholeSpace
}

/// Default PL starting coordinate.
pub const PL_START: f64 = 3.0;

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn objective_id(&self) -> Result<ObjectiveId> {
        self.objective.parse()
    }

    /// Noise bound handed to the schedules.
    pub fn sigma2(&self) -> f64 {
        self.sigma2.unwrap_or_else(|| self.noise.sigma2())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        self.objective_id()?;
        if self.d == 0 {
            return bad("d must be >= 1".into());
        }
        if !(self.beta.is_finite() && self.beta >= 2.0) {
            return Err(Error::InvalidBeta(self.beta));
        }
        if self.horizons.is_empty() {
            return bad("horizons must be nonempty".into());
        }
        if self.horizons[0] == 0 || self.horizons.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!(
                "horizons must be positive and strictly increasing, got {:?}",
                self.horizons
            ));
        }
        if self.replications == 0 {
            return bad("replications must be >= 1".into());
        }
        self.noise.validate()?;
        let s2 = self.sigma2();
        if !(s2.is_finite() && s2 > 0.0) {
            return bad("sigma2 must be > 0; noiseless runs need an explicit floor such as \"sigma2\": 1e-6".into());
        }
        if !(self.h_multiplier.is_finite() && self.h_multiplier > 0.0) {
            return bad("h_multiplier must be > 0".into());
        }
        self.feasible_set.validate(self.d)?;
        match self.driver {
            DriverKind::Sc if !self.feasible_set.is_compact() => {
                return bad("the sc driver needs a compact feasible set (ball or box)".into());
            }
            DriverKind::Pl if self.feasible_set.is_compact() => {
                return bad("the pl driver runs unconstrained; use the whole space".into());
            }
            _ => {}
        }
        let x1 = self.start()?;
        if !self.feasible_set.contains(&x1, 0.0) {
            return Err(Error::InfeasibleStart);
        }
        Ok(())
    }

    /// Resolved starting point.
    pub fn start(&self) -> Result<Vec<f64>> {
        let x = match &self.x1 {
            Some(X1Spec::Point(p)) => p.clone(),
            Some(X1Spec::Fill { fill }) => vec![*fill; self.d],
            None => match &self.feasible_set {
                FeasibleSet::WholeSpace => vec![PL_START; self.d],
                FeasibleSet::Ball { center, radius } => {
                    let mut x = center.clone();
                    x[0] += radius;
                    x
                }
                FeasibleSet::Box { hi, .. } => hi.clone(),
            },
        };
        if x.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("x1 must be finite".into()));
        }
        Ok(x)
    }
}
