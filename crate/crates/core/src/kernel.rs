//! Polynomial smoothing kernels on `[-1, 1]`.
//!
//! For a smoothness order `beta` with degree bound `ell` (the largest integer
//! strictly below `beta`), the kernel satisfies
//!
//! ```text
//! ∫ K(u) du = 0,   ∫ u K(u) du = 1,   ∫ u^j K(u) du = 0  for j = 2..=ell
//! ```
//!
//! over `[-1, 1]` with Lebesgue measure. It is built from the Legendre
//! polynomials `p_m` orthonormal on `[-1, 1]` as `K(u) = Σ_{m<=ell} p_m'(0) p_m(u)`.
//! Orthonormality gives `∫ u^j K = d/du (u^j) at 0`, which is exactly the
//! moment system above.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use serde::Serialize;

use crate::error::{Error, Result};

/// Hölder order `beta` together with its Taylor degree `ell`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothnessOrder {
    beta: f64,
    ell: usize,
}

impl SmoothnessOrder {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta < 2.0 {
            return Err(Error::InvalidBeta(beta));
        }
        // strictly below beta: 3.0 -> 2, 3.5 -> 3
        let ell = beta.ceil() as usize - 1;
        Ok(Self { beta, ell })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn ell(&self) -> usize {
        self.ell
    }
}

/// Dense polynomial in the monomial basis, `coeffs[i]` multiplies `u^i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![0.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    fn scale(&self, s: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).copied().unwrap_or(0.0) + other.coeffs.get(i).copied().unwrap_or(0.0))
                .collect(),
        )
    }

    fn shift_up(&self) -> Polynomial {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(0.0);
        c.extend_from_slice(&self.coeffs);
        Polynomial::new(c)
    }

    /// Real roots strictly inside `(lo, hi)` where the polynomial changes sign.
    ///
    /// Sign changes are located on a uniform scan and refined by bisection
    /// to an interval width of `1e-12`. Exact zeros hit by the scan are kept.
    pub fn sign_change_roots(&self, lo: f64, hi: f64) -> Vec<f64> {
        if self.is_zero() || self.degree() == 0 {
            return Vec::new();
        }
        const SCAN: usize = 4096;
        let mut roots = Vec::new();
        let step = (hi - lo) / SCAN as f64;
        let mut a = lo;
        let mut fa = self.eval(a);
        for i in 1..=SCAN {
            let b = if i == SCAN { hi } else { lo + step * i as f64 };
            let fb = self.eval(b);
            if fb == 0.0 && i < SCAN {
                roots.push(b);
            } else if fa != 0.0 && fa.signum() != fb.signum() && fb != 0.0 {
                roots.push(self.bisect(a, b, fa));
            }
            a = b;
            fa = fb;
        }
        roots
    }

    fn bisect(&self, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
        while b - a > 1e-12 {
            let m = 0.5 * (a + b);
            let fm = self.eval(m);
            if fm == 0.0 {
                return m;
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }
}

/// Legendre polynomial `P_m` (standard normalization `P_m(1) = 1`).
///
/// Built with `(m+1) P_{m+1} = (2m+1) u P_m - m P_{m-1}`; all coefficients
/// are dyadic rationals and are exact in `f64` for the degrees used here.
pub fn legendre(m: usize) -> Polynomial {
    let mut prev = Polynomial::new(vec![1.0]);
    if m == 0 {
        return prev;
    }
    let mut cur = Polynomial::new(vec![0.0, 1.0]);
    for k in 1..m {
        let kf = k as f64;
        let next = cur
            .shift_up()
            .scale((2.0 * kf + 1.0) / (kf + 1.0))
            .add(&prev.scale(-kf / (kf + 1.0)));
        prev = cur;
        cur = next;
    }
    cur
}

/// Smoothing kernel with its moment constants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Kernel {
    order: SmoothnessOrder,
    poly: Polynomial,
    kappa: f64,
    kappa_beta: f64,
}

impl Kernel {
    pub fn order(&self) -> SmoothnessOrder {
        self.order
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn coeffs(&self) -> &[f64] {
        self.poly.coeffs()
    }

    /// `∫ K²` over `[-1, 1]`.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `∫ |u|^beta |K(u)|` over `[-1, 1]`.
    pub fn kappa_beta(&self) -> f64 {
        self.kappa_beta
    }

    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        self.poly.eval(u)
    }

    pub fn moment(&self, j: usize) -> f64 {
        kernel_moment(&self.poly, j)
    }
}

/// Build the Legendre kernel for smoothness order `beta`.
pub fn build_kernel(beta: f64) -> Result<Kernel> {
    let order = SmoothnessOrder::new(beta)?;
    let mut poly = Polynomial::zero();
    for m in 0..=order.ell() {
        let p = legendre(m);
        // p_m = sqrt((2m+1)/2) P_m, so p_m'(0) p_m = (2m+1)/2 * P_m'(0) * P_m
        let slope_at_zero = p.derivative().eval(0.0);
        if slope_at_zero != 0.0 {
            poly = poly.add(&p.scale(0.5 * (2 * m + 1) as f64 * slope_at_zero));
        }
    }
    let kappa = compute_kappa(&poly);
    let kappa_beta = compute_kappa_beta(&poly, beta);
    Ok(Kernel {
        order,
        poly,
        kappa,
        kappa_beta,
    })
}

fn gauss_legendre(nodes: usize) -> GaussLegendre {
    GaussLegendre::new(NonZeroUsize::new(nodes.max(1)).expect("nonzero"))
}

/// `∫_{-1}^{1} u^j K(u) du`, exact up to rounding.
///
/// The integrand is a polynomial of degree `j + deg K`, so a Gauss–Legendre
/// rule with `(j + deg K) / 2 + 2` nodes integrates it exactly.
pub fn kernel_moment(k: &Polynomial, j: usize) -> f64 {
    let deg = j + k.degree();
    let nodes = (deg / 2 + 2).max(k.degree() + 2);
    let j = j as i32;
    gauss_legendre(nodes).integrate(-1.0, 1.0, |u| u.powi(j) * k.eval(u))
}

/// `∫_{-1}^{1} K²(u) du`, exact up to rounding.
pub fn compute_kappa(k: &Polynomial) -> f64 {
    let nodes = k.degree() + 2;
    gauss_legendre(nodes).integrate(-1.0, 1.0, |u| {
        let v = k.eval(u);
        v * v
    })
}

/// `∫_{-1}^{1} |u|^beta |K(u)| du`.
///
/// The integrand has kinks at `0` and at the sign changes of `K`; the domain
/// is split there and each smooth piece is integrated adaptively.
pub fn compute_kappa_beta(k: &Polynomial, beta: f64) -> f64 {
    let mut breaks = vec![-1.0, 0.0, 1.0];
    breaks.extend(k.sign_change_roots(-1.0, 1.0));
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite break points"));
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-14);

    let rule = gauss_legendre(20);
    let f = |u: f64| u.abs().powf(beta) * k.eval(u).abs();
    breaks
        .windows(2)
        .map(|w| adaptive(&rule, &f, w[0], w[1], 1e-15, 0))
        .sum()
}

fn adaptive<F: Fn(f64) -> f64>(rule: &GaussLegendre, f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let whole = rule.integrate(a, b, f);
    let m = 0.5 * (a + b);
    let halves = rule.integrate(a, m, f) + rule.integrate(m, b, f);
    if depth >= 40 || (whole - halves).abs() <= tol.max(1e-13 * halves.abs()) {
        halves
    } else {
        adaptive(rule, f, a, m, 0.5 * tol, depth + 1) + adaptive(rule, f, m, b, 0.5 * tol, depth + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn degree_bound_is_strict() {
        let ell = |b: f64| SmoothnessOrder::new(b).unwrap().ell();
        assert_eq!(ell(2.0), 1);
        assert_eq!(ell(2.5), 2);
        assert_eq!(ell(3.0), 2);
        assert_eq!(ell(3.5), 3);
        assert_eq!(ell(4.0), 3);
        assert_eq!(ell(5.0), 4);
    }

    #[test]
    fn rejects_bad_beta() {
        assert!(matches!(build_kernel(1.99), Err(Error::InvalidBeta(_))));
        assert!(build_kernel(f64::NAN).is_err());
        assert!(build_kernel(f64::INFINITY).is_err());
    }

    #[test]
    fn legendre_polynomials() {
        assert_eq!(legendre(2).coeffs(), &[-0.5, 0.0, 1.5]);
        assert_eq!(legendre(3).coeffs(), &[0.0, -1.5, 0.0, 2.5]);
        for m in 0..8 {
            assert_relative_eq!(legendre(m).eval(1.0), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn closed_form_kernels() {
        assert_eq!(build_kernel(2.0).unwrap().coeffs(), &[0.0, 1.5]);
        assert_eq!(build_kernel(3.0).unwrap().coeffs(), &[0.0, 1.5]);
        assert_eq!(build_kernel(4.0).unwrap().coeffs(), &[0.0, 9.375, 0.0, -13.125]);
    }

    #[test]
    fn moments_of_linear_kernel() {
        let k = build_kernel(2.0).unwrap();
        assert_relative_eq!(k.moment(1), 1.0, epsilon = 1e-14);
        assert!(k.moment(0).abs() < 1e-15);
        let k4 = build_kernel(4.0).unwrap();
        assert!(k4.moment(3).abs() < 1e-13);
    }

    #[test]
    fn kappa_values() {
        assert_relative_eq!(compute_kappa(&Polynomial::new(vec![0.0, 1.5])), 1.5, epsilon = 1e-14);
        assert_eq!(compute_kappa(&Polynomial::zero()), 0.0);
        let lin = Polynomial::new(vec![0.0, 1.5]);
        assert_relative_eq!(compute_kappa_beta(&lin, 2.0), 0.75, max_relative = 1e-12);
        assert_relative_eq!(compute_kappa_beta(&lin, 3.0), 0.6, max_relative = 1e-12);
    }

    #[test]
    fn kernels_are_odd() {
        for beta in [2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.5] {
            let k = build_kernel(beta).unwrap();
            for (i, c) in k.coeffs().iter().enumerate() {
                if i % 2 == 0 {
                    assert_eq!(*c, 0.0, "beta={beta} coefficient {i}");
                }
            }
        }
    }

    #[test]
    fn roots_of_cubic_kernel() {
        let k = build_kernel(4.0).unwrap();
        let mut r = k.polynomial().sign_change_roots(-1.0, 1.0);
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let root = (9.375f64 / 13.125).sqrt();
        assert_eq!(r.len(), 3);
        assert!((r[0] + root).abs() < 1e-11);
        assert!(r[1].abs() < 1e-11);
        assert!((r[2] - root).abs() < 1e-11);
    }
}
