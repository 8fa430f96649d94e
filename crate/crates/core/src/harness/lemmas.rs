use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{bias_bound, mc_bias, mc_second_moment, second_moment_bound, GradientOracle};
use crate::kernel::{build_kernel, SmoothnessOrder};
use crate::objectives::{Component1D, NoiseModel, ObjectiveId};
use crate::rng::derive_seed;

/// Bias cells: every combination of `dims × betas × radii` for one objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiasGrid {
    pub objective: String,
    pub dims: Vec<usize>,
    pub betas: Vec<f64>,
    pub radii: Vec<f64>,
    /// Every coordinate of the query point.
    #[serde(default = "default_x")]
    pub x: f64,
}

/// Second-moment cells: every combination of `dims × noises × radii`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarianceGrid {
    pub objective: String,
    pub dims: Vec<usize>,
    pub noises: Vec<NoiseModel>,
    pub radii: Vec<f64>,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_x")]
    pub x: f64,
}

fn default_x() -> f64 {
    0.5
}

fn default_beta() -> f64 {
    2.0
}

fn default_samples() -> usize {
    100_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaConfig {
    #[serde(default = "default_samples")]
    pub samples: usize,
    pub seed: u64,
    #[serde(default)]
    pub bias: Vec<BiasGrid>,
    #[serde(default)]
    pub variance: Vec<VarianceGrid>,
}

impl Default for LemmaConfig {
    /// The shipped objective zoo.
    fn default() -> Self {
        let gaussian = |sigma| NoiseModel::Gaussian { sigma };
        let bias = |objective: &str, betas: Vec<f64>| BiasGrid {
            objective: objective.into(),
            dims: vec![1, 4],
            betas,
            radii: vec![0.4, 0.2, 0.1],
            x: default_x(),
        };
        let variance = |objective: &str, noises: Vec<NoiseModel>| VarianceGrid {
            objective: objective.into(),
            dims: vec![1, 4],
            noises,
            radii: vec![0.1, 0.3],
            beta: default_beta(),
            x: default_x(),
        };
        Self {
            samples: default_samples(),
            seed: 20_240_601,
            bias: vec![
                bias("quad-sine:a=1,c=0.5", vec![2.0, 3.0]),
                bias("quadratic:a=2,c=1", vec![2.0, 3.0]),
                bias("quad-sin2:s=1", vec![2.0]),
                bias("linear:c=1", vec![2.0]),
            ],
            variance: vec![
                variance("zero", vec![gaussian(0.3), gaussian(1.0)]),
                variance("quadratic:a=2,c=0", vec![gaussian(0.3), gaussian(1.0)]),
                variance(
                    "quad-sine:a=1,c=0.5",
                    vec![
                        gaussian(1.0),
                        NoiseModel::UniformBounded { b: 1.0 },
                        NoiseModel::AdversarialDeterministic { sigma: 1.0 },
                    ],
                ),
            ],
        }
    }
}

impl LemmaConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let cfg: Self = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(Error::Config("samples must be >= 2".into()));
        }
        let radii_ok = |r: &[f64]| r.iter().all(|h| h.is_finite() && *h > 0.0);
        for g in &self.bias {
            g.objective.parse::<ObjectiveId>()?;
            for &b in &g.betas {
                SmoothnessOrder::new(b)?;
            }
            if !radii_ok(&g.radii) || g.dims.contains(&0) {
                return Err(Error::Config(format!("bad bias grid for {}", g.objective)));
            }
        }
        for g in &self.variance {
            g.objective.parse::<ObjectiveId>()?;
            SmoothnessOrder::new(g.beta)?;
            for n in &g.noises {
                n.validate()?;
            }
            if !radii_ok(&g.radii) || g.dims.contains(&0) {
                return Err(Error::Config(format!("bad variance grid for {}", g.objective)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasCell {
    pub objective: String,
    pub d: usize,
    pub beta: f64,
    pub h: f64,
    pub bias_norm: f64,
    pub std_err: f64,
    pub bound: f64,
    /// `bound + 3 SE - ‖bias‖`; nonnegative on success.
    pub margin: f64,
    pub pass: bool,
}

/// Ratio `‖bias(h)‖ / ‖bias(h/2)‖` for `β = 2` cells whose bias at `h`
/// exceeds 5 standard errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalvingCheck {
    pub objective: String,
    pub d: usize,
    pub h: f64,
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceCell {
    pub objective: String,
    pub d: usize,
    pub beta: f64,
    pub h: f64,
    pub noise: NoiseModel,
    pub second_moment: f64,
    pub std_err: f64,
    pub bound: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub bias: Vec<BiasCell>,
    pub halving: Vec<HalvingCheck>,
    pub variance: Vec<VarianceCell>,
    pub pass: bool,
}

/// Smallest ratio accepted by the halving check.
pub const HALVING_RATIO: f64 = 1.5;

fn component_constants(c: &Component1D, order: SmoothnessOrder) -> (f64, f64) {
    (c.holder_constant(order), c.smoothness())
}

/// Monte Carlo check of the bias and second-moment bounds on every cell.
pub fn verify_lemmas(config: &LemmaConfig) -> Result<LemmaReport> {
    config.validate()?;

    struct BiasJob<'a> {
        grid: &'a BiasGrid,
        d: usize,
        beta: f64,
        h: f64,
    }
    let mut bias_jobs = Vec::new();
    for grid in &config.bias {
        for &d in &grid.dims {
            for &beta in &grid.betas {
                for &h in &grid.radii {
                    bias_jobs.push(BiasJob { grid, d, beta, h });
                }
            }
        }
    }

    let bias: Vec<BiasCell> = bias_jobs
        .par_iter()
        .enumerate()
        .map(|(i, job)| -> Result<BiasCell> {
            let id: ObjectiveId = job.grid.objective.parse()?;
            let obj = id.build(job.d)?;
            let kernel = build_kernel(job.beta)?;
            let (holder_l, _) = component_constants(&id.component(), kernel.order());
            let x = vec![job.grid.x; job.d];
            let est = mc_bias(
                &obj,
                &x,
                job.h,
                &kernel,
                config.samples,
                derive_seed(config.seed, 1, i as u64),
            )?;
            let bound = bias_bound(kernel.kappa_beta(), holder_l, job.d, job.h, job.beta);
            let (norm, se) = (est.norm(), est.norm_std_err());
            let margin = bound + 3.0 * se - norm;
            Ok(BiasCell {
                objective: id.to_string(),
                d: job.d,
                beta: job.beta,
                h: job.h,
                bias_norm: norm,
                std_err: se,
                bound,
                margin,
                pass: margin >= 0.0,
            })
        })
        .collect::<Result<_>>()?;

    let mut halving = Vec::new();
    for a in bias.iter().filter(|c| c.beta == 2.0 && c.bias_norm > 5.0 * c.std_err) {
        let half = bias
            .iter()
            .find(|b| b.objective == a.objective && b.d == a.d && b.beta == a.beta && (b.h - a.h / 2.0).abs() < 1e-12);
        if let Some(b) = half {
            let ratio = a.bias_norm / b.bias_norm;
            halving.push(HalvingCheck {
                objective: a.objective.clone(),
                d: a.d,
                h: a.h,
                ratio,
                pass: ratio >= HALVING_RATIO,
            });
        }
    }

    struct VarJob<'a> {
        grid: &'a VarianceGrid,
        d: usize,
        noise: NoiseModel,
        h: f64,
    }
    let mut var_jobs = Vec::new();
    for grid in &config.variance {
        for &d in &grid.dims {
            for &noise in &grid.noises {
                for &h in &grid.radii {
                    var_jobs.push(VarJob { grid, d, noise, h });
                }
            }
        }
    }
    let variance: Vec<VarianceCell> = var_jobs
        .par_iter()
        .enumerate()
        .map(|(i, job)| -> Result<VarianceCell> {
            let id: ObjectiveId = job.grid.objective.parse()?;
            let obj = id.build(job.d)?;
            let kernel = build_kernel(job.grid.beta)?;
            let (_, lbar) = component_constants(&id.component(), kernel.order());
            let x = vec![job.grid.x; job.d];
            let grad_sq: f64 = obj.gradient(&x).iter().map(|g| g * g).sum();
            let est = mc_second_moment(
                &obj,
                &x,
                job.h,
                &kernel,
                &job.noise,
                config.samples,
                derive_seed(config.seed, 2, i as u64),
            )?;
            let bound = second_moment_bound(kernel.kappa(), job.d, lbar, job.h, grad_sq, job.noise.sigma2());
            let margin = bound + 3.0 * est.std_err - est.mean;
            Ok(VarianceCell {
                objective: id.to_string(),
                d: job.d,
                beta: job.grid.beta,
                h: job.h,
                noise: job.noise,
                second_moment: est.mean,
                std_err: est.std_err,
                bound,
                margin,
                pass: margin >= 0.0,
            })
        })
        .collect::<Result<_>>()?;

    let pass = bias.iter().all(|c| c.pass) && halving.iter().all(|c| c.pass) && variance.iter().all(|c| c.pass);
    Ok(LemmaReport {
        bias,
        halving,
        variance,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_bias_within_noise() {
        let cfg = LemmaConfig {
            samples: 20_000,
            seed: 1,
            bias: vec![BiasGrid {
                objective: "linear:c=1".into(),
                dims: vec![3],
                betas: vec![2.0],
                radii: vec![0.1],
                x: 0.2,
            }],
            variance: vec![],
        };
        let r = verify_lemmas(&cfg).unwrap();
        assert_eq!(r.bias.len(), 1);
        assert_eq!(r.bias[0].bound, 0.0);
        assert!(r.pass, "{:?}", r.bias[0]);
    }

    #[test]
    fn default_grid_shape() {
        let cfg = LemmaConfig::default();
        cfg.validate().unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: LemmaConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }
}
