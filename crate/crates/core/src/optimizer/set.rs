use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Closed convex feasible set `Θ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FeasibleSet {
    WholeSpace,
    Ball { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
}

impl FeasibleSet {
    pub fn unit_ball(d: usize) -> Self {
        FeasibleSet::Ball {
            center: vec![0.0; d],
            radius: 1.0,
        }
    }

    pub fn cube(d: usize, lo: f64, hi: f64) -> Self {
        FeasibleSet::Box {
            lo: vec![lo; d],
            hi: vec![hi; d],
        }
    }

    /// Check the set's own invariants, and its dimension when it has one.
    pub fn validate(&self, d: usize) -> Result<()> {
        match self {
            FeasibleSet::WholeSpace => Ok(()),
            FeasibleSet::Ball { center, radius } => {
                check_dim(center.len(), d)?;
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(invalid("radius", "must be finite and > 0"));
                }
                if center.iter().any(|c| !c.is_finite()) {
                    return Err(invalid("center", "must be finite"));
                }
                Ok(())
            }
            FeasibleSet::Box { lo, hi } => {
                check_dim(lo.len(), d)?;
                check_dim(hi.len(), d)?;
                if lo
                    .iter()
                    .zip(hi)
                    .any(|(l, h)| !(l.is_finite() && h.is_finite() && l <= h))
                {
                    return Err(invalid("box", "needs finite lo <= hi componentwise"));
                }
                Ok(())
            }
        }
    }

    pub fn is_compact(&self) -> bool {
        !matches!(self, FeasibleSet::WholeSpace)
    }

    /// Euclidean projection of `p` onto the set.
    pub fn project(&self, p: &[f64]) -> Result<Vec<f64>> {
        match self {
            FeasibleSet::WholeSpace => Ok(p.to_vec()),
            FeasibleSet::Ball { center, radius } => {
                check_dim(p.len(), center.len())?;
                let dist = p.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt();
                if dist <= *radius {
                    return Ok(p.to_vec());
                }
                let s = radius / dist;
                Ok(p.iter().zip(center).map(|(a, c)| c + s * (a - c)).collect())
            }
            FeasibleSet::Box { lo, hi } => {
                check_dim(p.len(), lo.len())?;
                Ok(p.iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(v, (l, h))| v.clamp(*l, *h))
                    .collect())
            }
        }
    }

    /// Membership with absolute slack `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        match self {
            FeasibleSet::WholeSpace => true,
            FeasibleSet::Ball { center, radius } => {
                x.len() == center.len()
                    && x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt() <= radius + tol
            }
            FeasibleSet::Box { lo, hi } => {
                x.len() == lo.len()
                    && x.iter()
                        .zip(lo.iter().zip(hi))
                        .all(|(v, (l, h))| *v >= l - tol && *v <= h + tol)
            }
        }
    }

    /// Smallest axis-aligned box containing the set, if bounded.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            FeasibleSet::WholeSpace => None,
            FeasibleSet::Ball { center, radius } => Some((
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            )),
            FeasibleSet::Box { lo, hi } => Some((lo.clone(), hi.clone())),
        }
    }
}

fn check_dim(got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}
