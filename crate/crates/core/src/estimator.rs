//! Two-point kernel-randomized gradient estimator.
//!
//! At a point `x` with radius `h`, draw `r` with independent `U[-1, 1]`
//! coordinates, observe `y = f(x + h r) + ξ` and `y' = f(x - h r) + ξ'`, and set
//!
//! ```text
//! g_j = (y - y') / (2h) * K(r_j) / p(r_j)
//! ```
//!
//! where `p = 1/2` is the density of `U[-1, 1]`. The kernel moment conditions
//! are Lebesgue integrals over `[-1, 1]`, and dividing by the density turns
//! them into expectations: `E[r K(r) / p(r)] = ∫ u K(u) du = 1`. For an additive
//! objective the estimate is then unbiased up to the Taylor remainder of each
//! component, with bias at most `κ_β L √d h^{β-1}`.
//!
//! For non-additive objectives the same formula is evaluated, but the
//! cross-coordinate terms no longer average out and the bias bound does not
//! apply.

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::kernel::Kernel;
use crate::objectives::NoiseModel;
use crate::rng::Streams;

/// Smallest admissible perturbation radius.
pub const MIN_RADIUS: f64 = 1e-8;

/// Density of `U[-1, 1]`.
pub const DIRECTION_DENSITY: f64 = 0.5;

/// Noise-free function values. The optimizer only ever sees this trait.
pub trait ZerothOrderOracle {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
}

/// Exact gradients, reserved for diagnostics and certificates.
pub trait GradientOracle: ZerothOrderOracle {
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
}

/// Perturbation direction with coordinates in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomDirection(Vec<f64>);

impl RandomDirection {
    pub fn new(r: Vec<f64>) -> Result<Self> {
        if r.is_empty() {
            return Err(invalid("d", "direction needs at least one coordinate"));
        }
        if r.iter().any(|v| !(-1.0..=1.0).contains(v)) {
            return Err(invalid("r", "coordinates must lie in [-1, 1]"));
        }
        Ok(Self(r))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// `d` independent uniforms on `[-1, 1]`, in draw order.
pub fn sample_direction<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<RandomDirection> {
    if d == 0 {
        return Err(invalid("d", "must be >= 1"));
    }
    Ok(RandomDirection((0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect()))
}

/// The two noisy observations of one round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QueryOutcome {
    pub y_plus: f64,
    pub y_minus: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientSample(Vec<f64>);

impl GradientSample {
    pub fn new(g: Vec<f64>) -> Result<Self> {
        if g.iter().any(|v| !v.is_finite()) {
            return Err(invalid("g", "entries must be finite"));
        }
        Ok(Self(g))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|g| g * g).sum()
    }
}

fn check_radius(h: f64) -> Result<()> {
    if !h.is_finite() || h < MIN_RADIUS {
        return Err(Error::RadiusTooSmall(h));
    }
    Ok(())
}

/// Query `f(x + h r) + ξ` and `f(x - h r) + ξ'`. Exactly two oracle calls.
pub fn query_pair<O: ZerothOrderOracle + ?Sized>(
    oracle: &O,
    x: &[f64],
    h: f64,
    dir: &RandomDirection,
    noise: (f64, f64),
) -> Result<QueryOutcome> {
    check_radius(h)?;
    if x.len() != oracle.dim() || dir.dim() != oracle.dim() {
        return Err(Error::DimensionMismatch {
            expected: oracle.dim(),
            got: if x.len() != oracle.dim() { x.len() } else { dir.dim() },
        });
    }
    let mut z: Vec<f64> = x.iter().zip(&dir.0).map(|(xi, ri)| xi + h * ri).collect();
    let y_plus = oracle.value(&z) + noise.0;
    for ((zi, xi), ri) in z.iter_mut().zip(x).zip(&dir.0) {
        *zi = xi - h * ri;
    }
    let y_minus = oracle.value(&z) + noise.1;
    if !y_plus.is_finite() {
        return Err(Error::NonFiniteOracle {
            value: y_plus,
            side: "plus",
        });
    }
    if !y_minus.is_finite() {
        return Err(Error::NonFiniteOracle {
            value: y_minus,
            side: "minus",
        });
    }
    Ok(QueryOutcome { y_plus, y_minus, h })
}

/// Turn a pair of observations into a gradient estimate.
pub fn gradient_from_queries(q: &QueryOutcome, kernel: &Kernel, dir: &RandomDirection) -> GradientSample {
    let scale = (q.y_plus - q.y_minus) / (2.0 * q.h) / DIRECTION_DENSITY;
    GradientSample(dir.0.iter().map(|&r| scale * kernel.eval(r)).collect())
}

/// One gradient estimate from two noisy queries around `x`.
pub fn estimate_gradient<O: ZerothOrderOracle + ?Sized>(
    oracle: &O,
    x: &[f64],
    h: f64,
    kernel: &Kernel,
    dir: &RandomDirection,
    noise: (f64, f64),
) -> Result<GradientSample> {
    let q = query_pair(oracle, x, h, dir, noise)?;
    Ok(gradient_from_queries(&q, kernel, dir))
}

/// Monte-Carlo estimate of `E[g] - ∇f(x)` with componentwise standard errors.
#[derive(Debug, Clone, Serialize)]
pub struct BiasEstimate {
    pub bias: Vec<f64>,
    pub std_err: Vec<f64>,
    pub samples: usize,
}

impl BiasEstimate {
    pub fn norm(&self) -> f64 {
        self.bias.iter().map(|b| b * b).sum::<f64>().sqrt()
    }

    /// Standard error of the norm, `sqrt(Σ se_j²)`.
    pub fn norm_std_err(&self) -> f64 {
        self.std_err.iter().map(|s| s * s).sum::<f64>().sqrt()
    }
}

/// Monte-Carlo estimate of `E‖g‖²`.
#[derive(Debug, Clone, Serialize)]
pub struct SecondMomentEstimate {
    pub mean: f64,
    pub std_err: f64,
    /// `‖mean of g‖²`, never larger than `mean`.
    pub mean_norm_sq: f64,
    pub samples: usize,
}

/// Running mean and variance (Welford).
#[derive(Debug, Clone, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.n += 1.0;
        let delta = v - self.mean;
        self.mean += delta / self.n;
        self.m2 += delta * (v - self.mean);
    }

    fn std_err(&self) -> f64 {
        if self.n < 2.0 {
            return f64::INFINITY;
        }
        (self.m2 / (self.n - 1.0) / self.n).sqrt()
    }
}

/// Bias of the estimator at `x`, measured without noise.
///
/// Under the noise assumption `E[ξ K(r)] = 0`, so noise adds variance but no
/// bias; leaving it out tightens the Monte-Carlo error. Sample `i` uses the
/// direction stream of round `i + 1`.
pub fn mc_bias<O: GradientOracle + ?Sized>(
    objective: &O,
    x: &[f64],
    h: f64,
    kernel: &Kernel,
    n_samples: usize,
    seed: u64,
) -> Result<BiasEstimate> {
    if n_samples == 0 {
        return Err(invalid("n_samples", "must be >= 1"));
    }
    let d = objective.dim();
    let streams = Streams::new(seed);
    let grad = objective.gradient(x);
    let mut acc = vec![Moments::default(); d];
    for i in 0..n_samples {
        let mut rng = streams.directions(i as u64 + 1);
        let dir = sample_direction(&mut rng, d)?;
        let g = estimate_gradient(objective, x, h, kernel, &dir, (0.0, 0.0))?;
        for (m, gj) in acc.iter_mut().zip(g.as_slice()) {
            m.push(*gj);
        }
    }
    Ok(BiasEstimate {
        bias: acc.iter().zip(&grad).map(|(m, gj)| m.mean - gj).collect(),
        std_err: acc.iter().map(Moments::std_err).collect(),
        samples: n_samples,
    })
}

/// Second moment `E‖g‖²` at `x` under the given noise model.
///
/// Sample `i` plays round `t = i + 1`: its direction and noise come from that
/// round's streams, and deterministic noise uses `t`.
pub fn mc_second_moment<O: ZerothOrderOracle + ?Sized>(
    objective: &O,
    x: &[f64],
    h: f64,
    kernel: &Kernel,
    noise: &NoiseModel,
    n_samples: usize,
    seed: u64,
) -> Result<SecondMomentEstimate> {
    if n_samples == 0 {
        return Err(invalid("n_samples", "must be >= 1"));
    }
    let d = objective.dim();
    let streams = Streams::new(seed);
    let mut sq = Moments::default();
    let mut mean_g = vec![Moments::default(); d];
    for i in 0..n_samples {
        let t = i as u64 + 1;
        let dir = sample_direction(&mut streams.directions(t), d)?;
        let xi = noise.draw_pair(t, &mut streams.noise(t));
        let g = estimate_gradient(objective, x, h, kernel, &dir, xi)?;
        sq.push(g.norm_sq());
        for (m, gj) in mean_g.iter_mut().zip(g.as_slice()) {
            m.push(*gj);
        }
    }
    Ok(SecondMomentEstimate {
        mean: sq.mean,
        std_err: sq.std_err(),
        mean_norm_sq: mean_g.iter().map(|m| m.mean * m.mean).sum(),
        samples: n_samples,
    })
}

/// Upper bound `κ_β L √d h^{β-1}` on the bias norm.
pub fn bias_bound(kappa_beta: f64, holder_l: f64, d: usize, h: f64, beta: f64) -> f64 {
    kappa_beta * holder_l * (d as f64).sqrt() * h.powf(beta - 1.0)
}

/// Upper bound `(3/2) κ d ( (3/4)(d L̄² h² + 8‖∇f‖²) + σ²/h² )` on `E‖g‖²`.
pub fn second_moment_bound(kappa: f64, d: usize, lbar: f64, h: f64, grad_norm_sq: f64, sigma2: f64) -> f64 {
    let d = d as f64;
    1.5 * kappa * d * (0.75 * (d * lbar * lbar * h * h + 8.0 * grad_norm_sq) + sigma2 / (h * h))
}
