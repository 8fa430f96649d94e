//! Projected gradient descent driven by two-point gradient estimates.
//!
//! Each round `t` draws a direction, queries the objective at `x_t ± h_t r_t`
//! (these points may lie outside `Θ`, so objectives must be defined on the
//! whole space), forms the estimate `g_t` and moves to
//! `x_{t+1} = Proj_Θ(x_t - η_t g_t)`.

mod schedule;
mod set;

pub use schedule::{pl_schedule, sc_schedule, RoundSchedule, ScStepRule, ScheduleParams};
pub use set::FeasibleSet;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::estimator::{estimate_gradient, sample_direction, GradientSample, ZerothOrderOracle};
use crate::kernel::Kernel;
use crate::objectives::NoiseModel;
use crate::rng::Streams;

/// Iterates larger than this abort the run.
pub const DIVERGENCE_NORM: f64 = 1e12;

/// One projected gradient step `Proj_Θ(x - η g)`.
pub fn step(x: &[f64], g: &GradientSample, eta: f64, set: &FeasibleSet) -> Result<Vec<f64>> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(invalid("eta", "must be finite and > 0"));
    }
    let g = g.as_slice();
    if g.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: g.len(),
        });
    }
    let moved: Vec<f64> = x.iter().zip(g).map(|(xi, gi)| xi - eta * gi).collect();
    set.project(&moved)
}

/// Running `2/(T(T+1)) Σ t x_t`.
#[derive(Debug, Clone)]
pub struct WeightedAverage {
    sum: Vec<f64>,
    count: usize,
}

impl WeightedAverage {
    pub fn new(d: usize) -> Self {
        Self {
            sum: vec![0.0; d],
            count: 0,
        }
    }

    pub fn push(&mut self, x: &[f64]) {
        self.count += 1;
        let w = self.count as f64;
        for (s, xi) in self.sum.iter_mut().zip(x) {
            *s += w * xi;
        }
    }

    pub fn value(&self) -> Option<Vec<f64>> {
        if self.count == 0 {
            return None;
        }
        let n = self.count as f64;
        let norm = 2.0 / (n * (n + 1.0));
        Some(self.sum.iter().map(|s| s * norm).collect())
    }
}

/// `2/(T(T+1)) Σ_{t=1}^T t x_t` over `iterates = [x_1, ..., x_T]`.
pub fn weighted_average(iterates: &[Vec<f64>]) -> Result<Vec<f64>> {
    let first = iterates.first().ok_or(Error::Empty("iterates"))?;
    let mut avg = WeightedAverage::new(first.len());
    for x in iterates {
        if x.len() != first.len() {
            return Err(Error::DimensionMismatch {
                expected: first.len(),
                got: x.len(),
            });
        }
        avg.push(x);
    }
    Ok(avg.value().expect("nonempty"))
}

/// Output of a driver run.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    /// `x_1, ..., x_T`.
    pub iterates: Vec<Vec<f64>>,
    /// `2T`: two oracle evaluations per round.
    pub queries_used: usize,
    /// `x_T`.
    pub final_point: Vec<f64>,
    /// `x_{T+1}`, produced by the last round and not part of `iterates`.
    pub next_point: Vec<f64>,
    /// `x̄_T`, strongly convex driver only.
    pub weighted_average: Option<Vec<f64>>,
}

impl Trajectory {
    /// The point a driver reports: `x̄_T` if present, else `x_T`.
    pub fn output(&self) -> &[f64] {
        self.weighted_average.as_deref().unwrap_or(&self.final_point)
    }
}

#[derive(Clone, Copy)]
enum Driver {
    Pl,
    Sc,
}

/// PL driver: unconstrained updates with the PL schedule.
pub fn run_pl<O: ZerothOrderOracle + ?Sized>(
    objective: &O,
    noise: &NoiseModel,
    kernel: &Kernel,
    params: &ScheduleParams,
    x1: &[f64],
    seed: u64,
) -> Result<Trajectory> {
    run(
        objective,
        noise,
        kernel,
        params,
        &FeasibleSet::WholeSpace,
        x1,
        seed,
        Driver::Pl,
    )
}

/// Strongly convex driver: projected updates, reports the weighted average.
pub fn run_sc<O: ZerothOrderOracle + ?Sized>(
    objective: &O,
    noise: &NoiseModel,
    kernel: &Kernel,
    params: &ScheduleParams,
    set: &FeasibleSet,
    x1: &[f64],
    seed: u64,
) -> Result<Trajectory> {
    run(objective, noise, kernel, params, set, x1, seed, Driver::Sc)
}

#[allow(clippy::too_many_arguments)]
fn run<O: ZerothOrderOracle + ?Sized>(
    objective: &O,
    noise: &NoiseModel,
    kernel: &Kernel,
    params: &ScheduleParams,
    set: &FeasibleSet,
    x1: &[f64],
    seed: u64,
    driver: Driver,
) -> Result<Trajectory> {
    params.validate()?;
    noise.validate()?;
    let d = objective.dim();
    if x1.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: x1.len(),
        });
    }
    if params.d != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: params.d,
        });
    }
    set.validate(d)?;
    if !set.contains(x1, 0.0) {
        return Err(Error::InfeasibleStart);
    }

    let streams = Streams::new(seed);
    let horizon = params.horizon;
    let mut iterates = Vec::with_capacity(horizon);
    let mut avg = matches!(driver, Driver::Sc).then(|| WeightedAverage::new(d));
    let mut x = x1.to_vec();
    let mut queries = 0;

    for t in 1..=horizon {
        let sched = match driver {
            Driver::Pl => pl_schedule(t, params)?,
            Driver::Sc => sc_schedule(t, params)?,
        };
        let round = t as u64;
        let dir = sample_direction(&mut streams.directions(round), d)?;
        let xi = noise.draw_pair(round, &mut streams.noise(round));
        let g = estimate_gradient(objective, &x, sched.h, kernel, &dir, xi)?;
        queries += 2;
        let next = step(&x, &g, sched.eta, set)?;

        let norm = next.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !norm.is_finite() || norm > DIVERGENCE_NORM {
            return Err(Error::Diverged { round: t, norm });
        }
        if let Some(a) = avg.as_mut() {
            a.push(&x);
        }
        iterates.push(std::mem::replace(&mut x, next));
    }

    Ok(Trajectory {
        final_point: iterates.last().cloned().unwrap_or_else(|| x1.to_vec()),
        next_point: x,
        weighted_average: avg.and_then(|a| a.value()),
        queries_used: queries,
        iterates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(v: &[f64]) -> GradientSample {
        GradientSample::new(v.to_vec()).unwrap()
    }

    #[test]
    fn step_examples() {
        let x = step(&[1.0, 1.0], &sample(&[2.0, 0.0]), 0.5, &FeasibleSet::WholeSpace).unwrap();
        assert_eq!(x, vec![0.0, 1.0]);
        let x = step(&[0.3, 0.2], &sample(&[0.0, 0.0]), 0.5, &FeasibleSet::unit_ball(2)).unwrap();
        assert_eq!(x, vec![0.3, 0.2]);
        let x = step(&[1.0, 0.0], &sample(&[-2.0, 0.0]), 1.0, &FeasibleSet::unit_ball(2)).unwrap();
        assert_eq!(x, vec![1.0, 0.0]);
        assert!(step(&[1.0], &sample(&[1.0, 2.0]), 1.0, &FeasibleSet::WholeSpace).is_err());
        assert!(step(&[1.0], &sample(&[1.0]), 0.0, &FeasibleSet::WholeSpace).is_err());
    }

    #[test]
    fn weighted_average_examples() {
        assert_eq!(weighted_average(&[vec![2.0, -1.0]]).unwrap(), vec![2.0, -1.0]);
        let a = weighted_average(&[vec![3.0], vec![6.0]]).unwrap();
        assert!((a[0] - 5.0).abs() < 1e-15);
        let v = vec![0.25, -4.0, 1.5];
        let a = weighted_average(&vec![v.clone(); 17]).unwrap();
        for (ai, vi) in a.iter().zip(&v) {
            assert!((ai - vi).abs() < 1e-14);
        }
        assert!(matches!(weighted_average(&[]), Err(Error::Empty(_))));
    }
}
