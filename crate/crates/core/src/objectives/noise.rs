use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Which of the two queries of a round a noise draw belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

/// Additive observation noise `ξ_t`, `ξ'_t`.
///
/// Only a second-moment bound `E ξ² <= σ²` is assumed by the method, so the
/// deterministic variant is allowed: it has nonzero mean and is correlated
/// across rounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NoiseModel {
    None,
    Gaussian {
        sigma: f64,
    },
    /// Uniform on `[-b, b]`.
    UniformBounded {
        b: f64,
    },
    /// `ξ_t = σ sin(7t)`, `ξ'_t = σ cos(11t)`.
    AdversarialDeterministic {
        sigma: f64,
    },
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        let v = match *self {
            NoiseModel::None => 0.0,
            NoiseModel::Gaussian { sigma } => sigma,
            NoiseModel::UniformBounded { b } => b,
            NoiseModel::AdversarialDeterministic { sigma } => sigma,
        };
        if !v.is_finite() || v < 0.0 {
            return Err(invalid("noise", "scale must be finite and >= 0"));
        }
        Ok(())
    }

    /// Declared bound `σ²` on the second moment of each draw.
    pub fn sigma2(&self) -> f64 {
        match *self {
            NoiseModel::None => 0.0,
            NoiseModel::Gaussian { sigma } => sigma * sigma,
            NoiseModel::UniformBounded { b } => b * b / 3.0,
            NoiseModel::AdversarialDeterministic { sigma } => sigma * sigma,
        }
    }

    pub fn is_stochastic(&self) -> bool {
        matches!(self, NoiseModel::Gaussian { .. } | NoiseModel::UniformBounded { .. })
    }

    /// Noise added to the `side` query of round `t`.
    ///
    /// The deterministic variant ignores `rng`.
    pub fn draw<R: Rng + ?Sized>(&self, t: u64, side: Side, rng: &mut R) -> f64 {
        match *self {
            NoiseModel::None => 0.0,
            NoiseModel::Gaussian { sigma } => {
                let z: f64 = rng.sample(StandardNormal);
                sigma * z
            }
            NoiseModel::UniformBounded { b } => {
                if b == 0.0 {
                    0.0
                } else {
                    rng.gen_range(-b..=b)
                }
            }
            NoiseModel::AdversarialDeterministic { sigma } => {
                let t = t as f64;
                match side {
                    Side::Plus => sigma * (7.0 * t).sin(),
                    Side::Minus => sigma * (11.0 * t).cos(),
                }
            }
        }
    }

    /// Both draws of round `t`, plus side first.
    pub fn draw_pair<R: Rng + ?Sized>(&self, t: u64, rng: &mut R) -> (f64, f64) {
        let plus = self.draw(t, Side::Plus, rng);
        let minus = self.draw(t, Side::Minus, rng);
        (plus, minus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn deterministic_variant_formula() {
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let n = NoiseModel::AdversarialDeterministic { sigma: 1.0 };
        assert_eq!(n.draw(1, Side::Plus, &mut rng), 7f64.sin());
        assert_eq!(n.draw(1, Side::Minus, &mut rng), 11f64.cos());
        assert_eq!(n.draw(3, Side::Plus, &mut rng), 21f64.sin());
    }

    #[test]
    fn declared_second_moments() {
        assert_eq!(NoiseModel::None.sigma2(), 0.0);
        assert_eq!(NoiseModel::Gaussian { sigma: 0.3 }.sigma2(), 0.09);
        assert!((NoiseModel::UniformBounded { b: 3.0 }.sigma2() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_negative_scale() {
        assert!(NoiseModel::Gaussian { sigma: -1.0 }.validate().is_err());
        assert!(NoiseModel::UniformBounded { b: f64::NAN }.validate().is_err());
    }

    #[test]
    fn uniform_stays_in_range() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let n = NoiseModel::UniformBounded { b: 0.5 };
        for t in 1..1000 {
            let v = n.draw(t, Side::Plus, &mut rng);
            assert!((-0.5..=0.5).contains(&v));
        }
    }
}
