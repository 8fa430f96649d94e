//! Additive test objectives with certified constants, and noise models.
//!
//! Objectives are addressed by string ids such as `quadratic:a=2,c=1`,
//! `quad-sine:a=1,c=0.5`, `quad-sin2:s=1` or `linear:c=1`; every coordinate
//! uses the same component. `zero` is shorthand for `linear:c=0`.

mod certify;
mod component;
mod noise;

pub use certify::{verify_holder, verify_pl, verify_sc, CurvatureKind, ObjectiveCertificate, Verification};
pub use component::Component1D;
pub use noise::{NoiseModel, Side};

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::estimator::{GradientOracle, ZerothOrderOracle};

/// `f(x) = Σ_j f_j(x_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdditiveObjective {
    components: Vec<Component1D>,
}

impl AdditiveObjective {
    pub fn new(components: Vec<Component1D>) -> Result<Self> {
        if components.is_empty() {
            return Err(invalid("d", "an objective needs at least one component"));
        }
        for c in &components {
            c.validate()?;
        }
        Ok(Self { components })
    }

    /// `d` copies of the same component.
    pub fn uniform(component: Component1D, d: usize) -> Result<Self> {
        Self::new(vec![component; d])
    }

    /// `⟨c, x⟩`.
    pub fn linear(c: &[f64]) -> Result<Self> {
        Self::new(c.iter().map(|&c| Component1D::Linear { c }).collect())
    }

    pub fn components(&self) -> &[Component1D] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        Ok(self.value_unchecked(x))
    }

    pub fn grad(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        Ok(self.gradient_unchecked(x))
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    fn value_unchecked(&self, x: &[f64]) -> f64 {
        self.components.iter().zip(x).map(|(c, &xi)| c.value(xi)).sum()
    }

    fn gradient_unchecked(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().zip(x).map(|(c, &xi)| c.gradient(xi)).collect()
    }
}

impl ZerothOrderOracle for AdditiveObjective {
    fn dim(&self) -> usize {
        self.components.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        self.value_unchecked(x)
    }
}

impl GradientOracle for AdditiveObjective {
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim());
        self.gradient_unchecked(x)
    }
}

/// One noisy observation `f(x) + ξ` for the `side` query of round `t`.
pub fn query_noisy<R: Rng + ?Sized>(
    obj: &AdditiveObjective,
    noise: &NoiseModel,
    x: &[f64],
    t: u64,
    side: Side,
    rng: &mut R,
) -> Result<f64> {
    if t == 0 {
        return Err(invalid("t", "rounds start at 1"));
    }
    Ok(obj.eval(x)? + noise.draw(t, side, rng))
}

/// Parsed objective id, e.g. `quadratic:a=2,c=1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveId(Component1D);

impl ObjectiveId {
    pub fn component(&self) -> Component1D {
        self.0
    }

    pub fn build(&self, d: usize) -> Result<AdditiveObjective> {
        AdditiveObjective::uniform(self.0, d)
    }
}

impl FromStr for ObjectiveId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownObjective(s.to_string());
        if s.trim() == "zero" {
            return Ok(ObjectiveId(Component1D::Linear { c: 0.0 }));
        }
        let (family, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = Vec::new();
        for kv in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(unknown)?;
            let v: f64 = v.trim().parse().map_err(|_| unknown())?;
            params.push((k.trim(), v));
        }
        let get = |name: &str, default: Option<f64>| -> Result<f64> {
            params
                .iter()
                .find(|(k, _)| *k == name)
                .map(|(_, v)| *v)
                .or(default)
                .ok_or_else(unknown)
        };
        let allowed: &[&str] = match family.trim() {
            "quadratic" => &["a", "c"],
            "quad-sine" => &["a", "c"],
            "quad-sin2" => &["s"],
            "linear" => &["c"],
            _ => return Err(unknown()),
        };
        if params.iter().any(|(k, _)| !allowed.contains(k)) {
            return Err(unknown());
        }
        let component = match family.trim() {
            "quadratic" => Component1D::Quadratic {
                a: get("a", None)?,
                c: get("c", Some(0.0))?,
            },
            "quad-sine" => Component1D::QuadSine {
                a: get("a", None)?,
                c: get("c", None)?,
            },
            "quad-sin2" => Component1D::QuadSin2 {
                s: get("s", Some(1.0))?,
            },
            _ => Component1D::Linear { c: get("c", None)? },
        };
        component.validate()?;
        Ok(ObjectiveId(component))
    }
}

impl fmt::Display for ObjectiveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Component1D::Quadratic { a, c } => write!(f, "quadratic:a={a},c={c}"),
            Component1D::QuadSine { a, c } => write!(f, "quad-sine:a={a},c={c}"),
            Component1D::QuadSin2 { s } => write!(f, "quad-sin2:s={s}"),
            Component1D::Linear { c } => write!(f, "linear:c={c}"),
        }
    }
}
