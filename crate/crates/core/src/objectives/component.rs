use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::kernel::SmoothnessOrder;

/// One univariate term `f_j` of an additive objective.
///
/// Every family splits into a polynomial part of degree <= 2 and a single
/// trigonometric part `A sin(ωx + φ)`; Taylor remainders and derivative bounds
/// are computed part by part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Component1D {
    /// `(a/2)(x - c)²`
    Quadratic { a: f64, c: f64 },
    /// `(a/2)x² + c sin(x)`, strongly convex since `c < a`
    QuadSine { a: f64, c: f64 },
    /// `s x² + 3 sin²(x)`, PL but nonconvex for `s < 3`
    QuadSin2 { s: f64 },
    /// `c x`, for estimator diagnostics only; no minimizer.
    Linear { c: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Trig {
    amp: f64,
    freq: f64,
    phase: f64,
}

impl Trig {
    fn derivative(&self, m: usize, x: f64) -> f64 {
        let theta = self.freq * x + self.phase;
        let s = match m % 4 {
            0 => theta.sin(),
            1 => theta.cos(),
            2 => -theta.sin(),
            _ => -theta.cos(),
        };
        self.amp * self.freq.powi(m as i32) * s
    }

    /// Holder constant of the degree-`ell` Taylor remainder of this term.
    ///
    /// The remainder is bounded both by `A ω^{ell+1} r^{ell+1} / (ell+1)!`
    /// and by `2 A ω^ell r^ell / ell!`; dividing the smaller one by `r^beta`
    /// peaks where the two cross, at `r = 2(ell+1)/ω`.
    fn holder_constant(&self, order: SmoothnessOrder) -> f64 {
        let ell = order.ell() as i32;
        let beta = order.beta();
        let fact: f64 = (1..=ell + 1).map(f64::from).product();
        let top = self.amp.abs() * self.freq.powi(ell + 1) / fact;
        if beta >= f64::from(ell + 1) {
            top
        } else {
            let cross = 2.0 * f64::from(ell + 1) / self.freq;
            top * cross.powf(f64::from(ell + 1) - beta)
        }
    }
}

impl Component1D {
    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64, name| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(invalid(name, "must be finite"))
            }
        };
        match *self {
            Component1D::Quadratic { a, c } => {
                finite(a, "a")?;
                finite(c, "c")?;
                if a <= 0.0 {
                    return Err(invalid("a", "quadratic curvature must be > 0"));
                }
            }
            Component1D::QuadSine { a, c } => {
                finite(a, "a")?;
                finite(c, "c")?;
                if a <= 0.0 || c < 0.0 || c >= a {
                    return Err(invalid("c", "quad-sine needs a > 0 and 0 <= c < a"));
                }
            }
            Component1D::QuadSin2 { s } => {
                finite(s, "s")?;
                if s <= 0.0 {
                    return Err(invalid("s", "quad-sin2 needs s > 0"));
                }
            }
            Component1D::Linear { c } => finite(c, "c")?,
        }
        Ok(())
    }

    /// Coefficients `(q0, q1, q2)` of the polynomial part.
    fn poly(&self) -> [f64; 3] {
        match *self {
            Component1D::Quadratic { a, c } => [0.5 * a * c * c, -a * c, 0.5 * a],
            Component1D::QuadSine { a, .. } => [0.0, 0.0, 0.5 * a],
            Component1D::QuadSin2 { s } => [1.5, 0.0, s],
            Component1D::Linear { c } => [0.0, c, 0.0],
        }
    }

    fn trig(&self) -> Option<Trig> {
        match *self {
            Component1D::QuadSine { c, .. } if c != 0.0 => Some(Trig {
                amp: c,
                freq: 1.0,
                phase: 0.0,
            }),
            // 3 sin²x = 1.5 - 1.5 cos 2x = 1.5 + 1.5 sin(2x - π/2)
            Component1D::QuadSin2 { .. } => Some(Trig {
                amp: 1.5,
                freq: 2.0,
                phase: -FRAC_PI_2,
            }),
            _ => None,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match *self {
            Component1D::Quadratic { a, c } => 0.5 * a * (x - c) * (x - c),
            Component1D::QuadSine { a, c } => 0.5 * a * x * x + c * x.sin(),
            Component1D::QuadSin2 { s } => {
                let sx = x.sin();
                s * x * x + 3.0 * sx * sx
            }
            Component1D::Linear { c } => c * x,
        }
    }

    pub fn gradient(&self, x: f64) -> f64 {
        match *self {
            Component1D::Quadratic { a, c } => a * (x - c),
            Component1D::QuadSine { a, c } => a * x + c * x.cos(),
            Component1D::QuadSin2 { s } => 2.0 * s * x + 3.0 * (2.0 * x).sin(),
            Component1D::Linear { c } => c,
        }
    }

    /// `m`-th derivative at `x`.
    pub fn derivative(&self, m: usize, x: f64) -> f64 {
        if m == 0 {
            return self.value(x);
        }
        let [_, q1, q2] = self.poly();
        let poly = match m {
            1 => q1 + 2.0 * q2 * x,
            2 => 2.0 * q2,
            _ => 0.0,
        };
        poly + self.trig().map_or(0.0, |t| t.derivative(m, x))
    }

    /// `|f(z) - Σ_{m<=ell} f^(m)(x)(z-x)^m / m!|`, computed part by part.
    ///
    /// The polynomial part has an exact closed-form remainder, which keeps the
    /// evaluation free of cancellation against large polynomial values.
    pub fn taylor_remainder(&self, ell: usize, x: f64, z: f64) -> f64 {
        let r = z - x;
        let [_, _, q2] = self.poly();
        let poly = if ell <= 1 { q2 * r * r } else { 0.0 };
        let trig = self.trig().map_or(0.0, |t| {
            let mut taylor = 0.0;
            let mut pow = 1.0;
            let mut fact = 1.0;
            for m in 0..=ell {
                if m > 0 {
                    pow *= r;
                    fact *= m as f64;
                }
                taylor += t.derivative(m, x) * pow / fact;
            }
            t.derivative(0, z) - taylor
        });
        (poly + trig).abs()
    }

    /// Certified Hölder constant `L` for order `beta`.
    ///
    /// The polynomial part contributes only when `ell = 1` (its quadratic
    /// coefficient); for `ell >= 2` its remainder vanishes identically. A
    /// polynomial-only component with `ell >= 2` keeps the `ell = 1`
    /// constant so that schedules receive a positive `L`.
    pub fn holder_constant(&self, order: SmoothnessOrder) -> f64 {
        let [_, _, q2] = self.poly();
        let trig = self.trig().map_or(0.0, |t| t.holder_constant(order));
        if order.ell() <= 1 {
            q2.abs() + trig
        } else if trig > 0.0 {
            trig
        } else {
            q2.abs()
        }
    }

    /// `sup |f''|`, the Lipschitz constant of `f'`.
    pub fn smoothness(&self) -> f64 {
        let [_, _, q2] = self.poly();
        2.0 * q2.abs() + self.trig().map_or(0.0, |t| t.amp.abs() * t.freq * t.freq)
    }

    /// `inf f''` when positive, i.e. the strong-convexity constant.
    pub fn curvature_lower_bound(&self) -> Option<f64> {
        let [_, _, q2] = self.poly();
        let lb = 2.0 * q2 - self.trig().map_or(0.0, |t| t.amp.abs() * t.freq * t.freq);
        (lb > 0.0).then_some(lb)
    }

    /// Unconstrained minimizer, if one exists.
    pub fn minimizer(&self) -> Option<f64> {
        match *self {
            Component1D::Quadratic { c, .. } => Some(c),
            Component1D::QuadSine { a, c } => {
                // a x + c cos x = 0 has a unique root in [-c/a, c/a]
                let mut x = 0.0f64;
                for _ in 0..100 {
                    let step = (a * x + c * x.cos()) / (a - c * x.sin());
                    x -= step;
                    if step.abs() < 1e-16 {
                        break;
                    }
                }
                Some(x)
            }
            Component1D::QuadSin2 { .. } => Some(0.0),
            Component1D::Linear { .. } => None,
        }
    }

    pub fn is_convex(&self) -> bool {
        matches!(self, Component1D::Linear { .. }) || self.curvature_lower_bound().is_some()
    }

    /// Certified PL constant on `[lo, hi]`.
    ///
    /// Strongly convex components reuse their curvature bound. Otherwise the
    /// PL ratio `f'² / (2(f - f*))` is minimized over a grid of `n` points and
    /// shrunk by 1% to cover points between grid nodes.
    pub fn pl_constant(&self, lo: f64, hi: f64, n: usize) -> Option<f64> {
        if let Some(lb) = self.curvature_lower_bound() {
            return Some(lb);
        }
        let xstar = self.minimizer()?;
        let fstar = self.value(xstar);
        let mut worst = f64::INFINITY;
        for i in 0..n {
            let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let gap = self.value(x) - fstar;
            if gap <= 1e-10 {
                continue;
            }
            let g = self.gradient(x);
            worst = worst.min(g * g / (2.0 * gap));
        }
        (worst.is_finite() && worst > 0.0).then_some(0.99 * worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn order(beta: f64) -> SmoothnessOrder {
        SmoothnessOrder::new(beta).unwrap()
    }

    #[test]
    fn holder_constants() {
        let q = Component1D::Quadratic { a: 3.0, c: -1.0 };
        for beta in [2.0, 2.5, 3.0, 5.0] {
            assert_eq!(q.holder_constant(order(beta)), 1.5);
        }
        let s = Component1D::QuadSine { a: 1.0, c: 0.5 };
        assert_eq!(s.holder_constant(order(2.0)), 0.75);
        assert_eq!(s.holder_constant(order(3.0)), 0.5 / 6.0);
        // sup |f''| / 2 = (2s + 6) / 2
        assert_eq!(Component1D::QuadSin2 { s: 1.0 }.holder_constant(order(2.0)), 4.0);
    }

    #[test]
    fn smoothness_and_curvature() {
        let s = Component1D::QuadSine { a: 1.0, c: 0.5 };
        assert_eq!(s.smoothness(), 1.5);
        assert_eq!(s.curvature_lower_bound(), Some(0.5));
        let n = Component1D::QuadSin2 { s: 1.0 };
        assert_eq!(n.smoothness(), 8.0);
        assert_eq!(n.curvature_lower_bound(), None);
        assert!(!n.is_convex());
        assert_eq!(Component1D::QuadSin2 { s: 4.0 }.curvature_lower_bound(), Some(2.0));
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(9);
        let comps = [
            Component1D::Quadratic { a: 2.0, c: 1.0 },
            Component1D::QuadSine { a: 1.0, c: 0.5 },
            Component1D::QuadSin2 { s: 1.0 },
        ];
        for c in comps {
            for _ in 0..100 {
                let x: f64 = rng.gen_range(-10.0..10.0);
                let fd = (c.value(x + 1e-5) - c.value(x - 1e-5)) / 2e-5;
                let g = c.gradient(x);
                assert!((fd - g).abs() <= 1e-6 * g.abs().max(1.0), "{c:?} at {x}");
                assert!((c.derivative(1, x) - g).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn higher_derivatives_by_differences() {
        let c = Component1D::QuadSine { a: 1.0, c: 0.5 };
        for m in 1..5 {
            for x in [-2.0, 0.3, 4.0] {
                let fd = (c.derivative(m - 1, x + 1e-6) - c.derivative(m - 1, x - 1e-6)) / 2e-6;
                assert!((fd - c.derivative(m, x)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn quad_sine_minimizer() {
        let c = Component1D::QuadSine { a: 1.0, c: 0.5 };
        let x = c.minimizer().unwrap();
        assert!(c.gradient(x).abs() < 1e-15);
        assert!(x < 0.0 && x > -0.5);
    }

    #[test]
    fn pl_constant_of_quad_sin2() {
        let c = Component1D::QuadSin2 { s: 1.0 };
        let alpha = c.pl_constant(-10.0, 10.0, 200_001).unwrap();
        assert!(alpha > 0.17 && alpha < 0.18, "{alpha}");
        assert_eq!(Component1D::Linear { c: 1.0 }.pl_constant(-1.0, 1.0, 11), None);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(Component1D::Quadratic { a: 0.0, c: 0.0 }.validate().is_err());
        assert!(Component1D::QuadSine { a: 1.0, c: 1.0 }.validate().is_err());
        assert!(Component1D::QuadSin2 { s: -1.0 }.validate().is_err());
        assert!(Component1D::Linear { c: f64::NAN }.validate().is_err());
    }
}
