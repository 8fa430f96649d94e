use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::estimator::MIN_RADIUS;
use crate::kernel::Kernel;

/// Step size rule of the strongly convex driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScStepRule {
    /// `η = 4 / (α (T + 1))` for every round.
    Constant,
    /// `η_t = 4 / (α (t + 1))`.
    #[default]
    Anytime,
}

/// Problem constants that drive the step and radius schedules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleParams {
    /// PL or strong-convexity constant.
    pub alpha: f64,
    /// Lipschitz constant of each `f_j'`.
    pub lbar: f64,
    /// Hölder constant.
    pub holder_l: f64,
    pub beta: f64,
    /// Noise second-moment bound; must be positive.
    pub sigma2: f64,
    pub d: usize,
    pub horizon: usize,
    pub kappa: f64,
    pub kappa_beta: f64,
    #[serde(default = "one")]
    pub h_multiplier: f64,
    #[serde(default)]
    pub sc_step: ScStepRule,
}

fn one() -> f64 {
    1.0
}

/// Step size and perturbation radius of one round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundSchedule {
    pub eta: f64,
    pub h: f64,
}

impl ScheduleParams {
    /// Schedule constants for a kernel; `h_multiplier = 1`, anytime SC steps.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: f64,
        lbar: f64,
        holder_l: f64,
        sigma2: f64,
        d: usize,
        horizon: usize,
        kernel: &Kernel,
    ) -> Result<Self> {
        let p = Self {
            alpha,
            lbar,
            holder_l,
            beta: kernel.order().beta(),
            sigma2,
            d,
            horizon,
            kappa: kernel.kappa(),
            kappa_beta: kernel.kappa_beta(),
            h_multiplier: 1.0,
            sc_step: ScStepRule::default(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_h_multiplier(mut self, m: f64) -> Result<Self> {
        self.h_multiplier = m;
        self.validate()?;
        Ok(self)
    }

    pub fn with_sc_step(mut self, rule: ScStepRule) -> Self {
        self.sc_step = rule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64, name: &'static str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(name, format!("must be finite and > 0, got {v}")))
            }
        };
        pos(self.alpha, "alpha")?;
        pos(self.lbar, "lbar")?;
        pos(self.holder_l, "holder_l")?;
        pos(self.kappa, "kappa")?;
        pos(self.kappa_beta, "kappa_beta")?;
        pos(self.h_multiplier, "h_multiplier")?;
        // sigma2 = 0 would set every radius to zero
        pos(self.sigma2, "sigma2")?;
        if !(self.beta.is_finite() && self.beta >= 2.0) {
            return Err(Error::InvalidBeta(self.beta));
        }
        if self.d == 0 {
            return Err(invalid("d", "must be >= 1"));
        }
        if self.horizon == 0 {
            return Err(invalid("horizon", "must be >= 1"));
        }
        Ok(())
    }

    fn check_round(&self, t: usize) -> Result<()> {
        if t == 0 || t > self.horizon {
            return Err(Error::RoundOutOfRange {
                round: t,
                horizon: self.horizon,
            });
        }
        Ok(())
    }

    /// `(3 L̄/α · κσ² / (L² κ_β²))^{1/(2β)}`, scaled by `h_multiplier`.
    pub fn pl_radius_prefactor(&self) -> f64 {
        let base = 3.0 * self.lbar / self.alpha * self.kappa * self.sigma2
            / (self.holder_l * self.holder_l * self.kappa_beta * self.kappa_beta);
        self.h_multiplier * base.powf(1.0 / (2.0 * self.beta))
    }

    /// Cap `1 / (18 L̄ d κ)` on the PL step size.
    pub fn pl_step_cap(&self) -> f64 {
        1.0 / (18.0 * self.lbar * self.d as f64 * self.kappa)
    }
}

/// PL schedule: `η_t = min(4/(αt), 1/(18 L̄ d κ))`.
///
/// The radius decays as `t^{-1/(2β)}` on rounds where `4/(αt)` attains the
/// minimum (ties included) and is frozen at `T^{-1/(2β)}` while the cap is
/// active. The radius therefore jumps up at the round where the branch
/// switches.
pub fn pl_schedule(t: usize, p: &ScheduleParams) -> Result<RoundSchedule> {
    p.check_round(t)?;
    let decaying = 4.0 / (p.alpha * t as f64);
    let cap = p.pl_step_cap();
    let expo = -1.0 / (2.0 * p.beta);
    let (eta, clock) = if decaying <= cap {
        (decaying, t as f64)
    } else {
        (cap, p.horizon as f64)
    };
    let h = (p.pl_radius_prefactor() * clock.powf(expo)).max(MIN_RADIUS);
    Ok(RoundSchedule { eta, h })
}

/// Strongly convex schedule: `h_t = (3κσ² / (2t κ_β² L²))^{1/(2β)}` and the
/// step from [`ScStepRule`].
pub fn sc_schedule(t: usize, p: &ScheduleParams) -> Result<RoundSchedule> {
    p.check_round(t)?;
    let eta = match p.sc_step {
        ScStepRule::Anytime => 4.0 / (p.alpha * (t as f64 + 1.0)),
        ScStepRule::Constant => 4.0 / (p.alpha * (p.horizon as f64 + 1.0)),
    };
    let base = 3.0 * p.kappa * p.sigma2 / (2.0 * t as f64 * p.kappa_beta * p.kappa_beta * p.holder_l * p.holder_l);
    let h = (p.h_multiplier * base.powf(1.0 / (2.0 * p.beta))).max(MIN_RADIUS);
    Ok(RoundSchedule { eta, h })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64, lbar: f64, l: f64, sigma2: f64, d: usize, horizon: usize, beta: f64) -> ScheduleParams {
        let kernel = crate::kernel::build_kernel(beta).unwrap();
        ScheduleParams::new(alpha, lbar, l, sigma2, d, horizon, &kernel).unwrap()
    }

    #[test]
    fn pl_step_branches() {
        let p = params(1.0, 1.0, 1.0, 1.0, 2, 1000, 2.0);
        assert_eq!(p.pl_step_cap(), 1.0 / 54.0);
        let s = pl_schedule(300, &p).unwrap();
        assert!((s.eta - 1.0 / 75.0).abs() < 1e-18);
        assert!((s.h - p.pl_radius_prefactor() * 300f64.powf(-0.25)).abs() < 1e-15);
        let s = pl_schedule(10, &p).unwrap();
        assert_eq!(s.eta, 1.0 / 54.0);
        assert!((s.h - p.pl_radius_prefactor() * 1000f64.powf(-0.25)).abs() < 1e-15);
    }

    #[test]
    fn pl_tie_takes_decaying_branch() {
        // 4/(αt) = cap at t = 216 when α = 1, L̄ = 1, d = 2, κ = 1.5
        let p = params(1.0, 1.0, 1.0, 1.0, 2, 1000, 2.0);
        let s = pl_schedule(216, &p).unwrap();
        assert!((s.h - p.pl_radius_prefactor() * 216f64.powf(-0.25)).abs() < 1e-15);
    }

    #[test]
    fn pl_prefactor() {
        let p = params(1.0, 1.0, 1.0, 1.0, 2, 1000, 2.0);
        assert!((p.pl_radius_prefactor() - 8f64.powf(0.25)).abs() < 1e-14);
        let p2 = p.clone().with_h_multiplier(0.5).unwrap();
        assert!((p2.pl_radius_prefactor() - 0.5 * 8f64.powf(0.25)).abs() < 1e-14);
    }

    #[test]
    fn sc_examples() {
        let p = params(2.0, 1.0, 1.0, 1.0, 1, 99, 2.0).with_sc_step(ScStepRule::Constant);
        for t in [1, 50, 99] {
            assert!((sc_schedule(t, &p).unwrap().eta - 0.02).abs() < 1e-17);
        }
        let p = params(1.0, 1.0, 1.0, 1.0, 1, 100, 2.0);
        let h1 = sc_schedule(1, &p).unwrap().h;
        assert!((h1 - 2f64.sqrt()).abs() < 1e-14);
        assert!((sc_schedule(16, &p).unwrap().h - h1 * 16f64.powf(-0.25)).abs() < 1e-14);
        assert!((sc_schedule(3, &p).unwrap().eta - 1.0).abs() < 1e-15);
    }

    #[test]
    fn monotone_within_branches() {
        let p = params(0.5, 2.0, 1.0, 0.1, 3, 5000, 3.0);
        let rounds: Vec<_> = (1..=5000).map(|t| (t, pl_schedule(t, &p).unwrap())).collect();
        for w in rounds.windows(2) {
            let ((ta, a), (tb, b)) = (w[0], w[1]);
            assert!(b.eta <= a.eta);
            let capped = |t: usize| 4.0 / (p.alpha * t as f64) > p.pl_step_cap();
            let same_branch = capped(ta) == capped(tb);
            if same_branch {
                assert!(b.h <= a.h);
            }
        }
        for rule in [ScStepRule::Constant, ScStepRule::Anytime] {
            let p = p.clone().with_sc_step(rule);
            let s: Vec<_> = (1..=5000).map(|t| sc_schedule(t, &p).unwrap()).collect();
            assert!(s.windows(2).all(|w| w[1].eta <= w[0].eta && w[1].h <= w[0].h));
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let kernel = crate::kernel::build_kernel(2.0).unwrap();
        assert!(ScheduleParams::new(1.0, 1.0, 1.0, 0.0, 1, 10, &kernel).is_err());
        assert!(ScheduleParams::new(0.0, 1.0, 1.0, 1.0, 1, 10, &kernel).is_err());
        assert!(ScheduleParams::new(1.0, 1.0, 1.0, 1.0, 1, 0, &kernel).is_err());
        let p = params(1.0, 1.0, 1.0, 1.0, 1, 10, 2.0);
        assert!(matches!(pl_schedule(0, &p), Err(Error::RoundOutOfRange { .. })));
        assert!(matches!(sc_schedule(11, &p), Err(Error::RoundOutOfRange { .. })));
        assert!(p.with_h_multiplier(-1.0).is_err());
    }
}
