use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use super::{AdditiveObjective, Component1D};
use crate::error::{invalid, Error, Result};
use crate::estimator::{GradientOracle, ZerothOrderOracle};
use crate::kernel::SmoothnessOrder;
use crate::optimizer::FeasibleSet;

/// Region on which PL constants of nonconvex components are grid-certified.
pub const PL_REGION: (f64, f64) = (-10.0, 10.0);
const PL_GRID: usize = 200_001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurvatureKind {
    Pl,
    StronglyConvex,
}

/// Constants of an objective as used by the schedules and the bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObjectiveCertificate {
    pub kind: CurvatureKind,
    pub alpha: f64,
    pub lbar: f64,
    pub holder_l: f64,
    pub beta: f64,
    /// Minimum over the feasible set (the whole space for PL).
    pub f_star: f64,
    pub x_star: Vec<f64>,
    /// Bound on `‖∇f‖` over the feasible set inflated by the query
    /// excursion; 0 for the whole space.
    pub g_bound: f64,
}

/// Outcome of a numeric certificate check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub pass: bool,
    /// Hölder: largest remainder ratio. PL: smallest PL ratio. SC: largest
    /// violation of the strong-convexity inequality.
    pub worst: f64,
    pub worst_point: Vec<f64>,
    pub checked: usize,
}

impl AdditiveObjective {
    /// Certify the objective for order `beta` and the given curvature kind.
    ///
    /// `excursion` is the largest distance a query can leave `set`
    /// (`h_1 √d` for the schedules here) and only affects `g_bound`.
    pub fn certify(
        &self,
        beta: f64,
        kind: CurvatureKind,
        set: &FeasibleSet,
        excursion: f64,
    ) -> Result<ObjectiveCertificate> {
        let order = SmoothnessOrder::new(beta)?;
        set.validate(self.dim())?;
        let name = || format!("{:?}", self.components()[0]);
        let comps = self.components();

        let alpha = match kind {
            CurvatureKind::Pl => {
                if set.is_compact() {
                    return Err(invalid("set", "PL certificates are for unconstrained problems"));
                }
                comps
                    .iter()
                    .map(|c| c.pl_constant(PL_REGION.0, PL_REGION.1, PL_GRID))
                    .try_fold(f64::INFINITY, |acc, a| a.map(|a| acc.min(a)))
            }
            CurvatureKind::StronglyConvex => comps
                .iter()
                .map(Component1D::curvature_lower_bound)
                .try_fold(f64::INFINITY, |acc, a| a.map(|a| acc.min(a))),
        }
        .ok_or_else(|| Error::NotCertifiable(name()))?;

        let lbar = comps.iter().map(Component1D::smoothness).fold(0.0, f64::max);
        let holder_l = comps.iter().map(|c| c.holder_constant(order)).fold(0.0, f64::max);
        let x_star = constrained_minimizer(self, set).ok_or_else(|| Error::NotCertifiable(name()))?;
        let f_star = self.value(&x_star);
        let g_bound = gradient_bound(comps, set, excursion);

        Ok(ObjectiveCertificate {
            kind,
            alpha,
            lbar,
            holder_l,
            beta,
            f_star,
            x_star,
            g_bound,
        })
    }
}

fn constrained_minimizer(obj: &AdditiveObjective, set: &FeasibleSet) -> Option<Vec<f64>> {
    let free: Vec<f64> = obj
        .components()
        .iter()
        .map(Component1D::minimizer)
        .collect::<Option<_>>()?;
    if set.contains(&free, 0.0) {
        return Some(free);
    }
    // Only strongly convex objectives are certified on compact sets.
    if !obj.components().iter().all(Component1D::is_convex) {
        return None;
    }
    match set {
        FeasibleSet::WholeSpace => Some(free),
        FeasibleSet::Box { .. } => set.project(&free).ok(),
        FeasibleSet::Ball { .. } => {
            let lbar = obj.components().iter().map(Component1D::smoothness).fold(0.0, f64::max);
            let step = 1.0 / lbar;
            let mut x = set.project(&free).ok()?;
            for _ in 0..200_000 {
                let g = obj.gradient(&x);
                let moved: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - step * gi).collect();
                let next = set.project(&moved).ok()?;
                let change = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                x = next;
                if change < 1e-15 {
                    break;
                }
            }
            Some(x)
        }
    }
}

fn gradient_bound(comps: &[Component1D], set: &FeasibleSet, excursion: f64) -> f64 {
    let Some((lo, hi)) = set.bounding_box() else {
        return 0.0;
    };
    const N: usize = 2001;
    comps
        .iter()
        .zip(lo.iter().zip(&hi))
        .map(|(c, (l, h))| {
            let (l, h) = (l - excursion, h + excursion);
            (0..N)
                .map(|i| c.gradient(l + (h - l) * i as f64 / (N - 1) as f64).abs())
                .fold(0.0, f64::max)
                .powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

/// Grid check of the Hölder condition of order `beta` with constant `l`.
///
/// Base points form an `n_grid` grid over `region`; offsets are log-spaced
/// from `10^{-7/β}` (below that, rounding dominates the remainder) to the
/// region width, in both directions, keeping `z` inside the region.
pub fn verify_holder(
    component: &Component1D,
    beta: f64,
    l: f64,
    region: (f64, f64),
    n_grid: usize,
) -> Result<Verification> {
    let order = SmoothnessOrder::new(beta)?;
    let (lo, hi) = region;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi || n_grid < 2 {
        return Err(invalid("region", "need lo < hi and n_grid >= 2"));
    }
    let width = hi - lo;
    let r_min = 10f64.powf(-7.0 / beta);
    const OFFSETS: usize = 80;
    let offsets: Vec<f64> = (0..OFFSETS)
        .map(|k| r_min * (width / r_min).powf(k as f64 / (OFFSETS - 1) as f64))
        .collect();

    let mut worst = 0.0f64;
    let mut worst_point = vec![lo, lo];
    let mut checked = 0;
    for i in 0..n_grid {
        let x = lo + width * i as f64 / (n_grid - 1) as f64;
        for &r in &offsets {
            for z in [x + r, x - r] {
                if z < lo || z > hi {
                    continue;
                }
                checked += 1;
                let ratio = component.taylor_remainder(order.ell(), x, z) / (z - x).abs().powf(beta);
                if ratio > worst {
                    worst = ratio;
                    worst_point = vec![x, z];
                }
            }
        }
    }
    Ok(Verification {
        pass: worst <= l * (1.0 + 1e-6),
        worst,
        worst_point,
        checked,
    })
}

/// Grid check of `2α(f(x) - f*) <= ‖∇f(x)‖²` over the cube `region^d`.
///
/// Points where `f - f* <= 1e-12` are skipped (both sides vanish at the
/// minimizer).
pub fn verify_pl(obj: &AdditiveObjective, alpha: f64, region: (f64, f64), n_grid: usize) -> Result<Verification> {
    let d = obj.dim();
    let (lo, hi) = region;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi || n_grid < 2 {
        return Err(invalid("region", "need lo < hi and n_grid >= 2"));
    }
    let total = (n_grid as f64).powi(d as i32);
    if total > 2e7 {
        return Err(invalid("n_grid", format!("{n_grid}^{d} grid points is too many")));
    }
    let x_star: Vec<f64> = obj
        .components()
        .iter()
        .map(Component1D::minimizer)
        .collect::<Option<_>>()
        .ok_or_else(|| Error::NotCertifiable(format!("{:?}", obj.components()[0])))?;
    let f_star = obj.value(&x_star);
    let axis: Vec<f64> = (0..n_grid)
        .map(|i| lo + (hi - lo) * i as f64 / (n_grid - 1) as f64)
        .collect();

    let mut idx = vec![0usize; d];
    let mut x = vec![lo; d];
    let mut worst = f64::INFINITY;
    let mut worst_point = x.clone();
    let mut checked = 0;
    loop {
        for (xi, &k) in x.iter_mut().zip(&idx) {
            *xi = axis[k];
        }
        let gap = obj.value(&x) - f_star;
        if gap > 1e-12 {
            checked += 1;
            let g2: f64 = obj.gradient(&x).iter().map(|g| g * g).sum();
            let ratio = g2 / (2.0 * gap);
            if ratio < worst {
                worst = ratio;
                worst_point.clone_from(&x);
            }
        }
        // odometer increment
        let mut k = 0;
        while k < d {
            idx[k] += 1;
            if idx[k] < n_grid {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == d {
            break;
        }
    }
    Ok(Verification {
        pass: worst >= alpha * (1.0 - 1e-9),
        worst,
        worst_point,
        checked,
    })
}

/// Random-pair check of
/// `f(x) - f(x') <= ⟨∇f(x), x - x'⟩ - (α/2)‖x - x'‖²` on the cube `region^d`.
pub fn verify_sc(
    obj: &AdditiveObjective,
    alpha: f64,
    region: (f64, f64),
    n_pairs: usize,
    seed: u64,
) -> Result<Verification> {
    let d = obj.dim();
    let (lo, hi) = region;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(invalid("region", "need lo < hi"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_point = Vec::new();
    for _ in 0..n_pairs {
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(lo..=hi)).collect();
        let y: Vec<f64> = (0..d).map(|_| rng.gen_range(lo..=hi)).collect();
        let v = sc_violation(obj, alpha, &x, &y);
        if v > worst {
            worst = v;
            worst_point = x.into_iter().chain(y).collect();
        }
    }
    Ok(Verification {
        pass: worst <= 1e-9,
        worst,
        worst_point,
        checked: n_pairs,
    })
}

/// `f(x) - f(y) - ⟨∇f(x), x - y⟩ + (α/2)‖x - y‖²`; positive means violated.
pub fn sc_violation(obj: &AdditiveObjective, alpha: f64, x: &[f64], y: &[f64]) -> f64 {
    let g = obj.gradient(x);
    let inner: f64 = g.iter().zip(x.iter().zip(y)).map(|(gi, (xi, yi))| gi * (xi - yi)).sum();
    let dist2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    obj.value(x) - obj.value(y) - inner + 0.5 * alpha * dist2
}
