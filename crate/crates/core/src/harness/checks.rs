use serde::Serialize;

use crate::error::Result;
use crate::kernel::build_kernel;
use crate::objectives::{
    verify_holder, verify_pl, verify_sc, CurvatureKind, ObjectiveCertificate, ObjectiveId, Verification,
};
use crate::optimizer::FeasibleSet;

/// Moment conditions must hold to this absolute tolerance.
pub const MOMENT_TOL: f64 = 1e-10;
/// Relative agreement required between quadrature and the midpoint rule.
pub const RIEMANN_TOL: f64 = 1e-6;
pub const RIEMANN_NODES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentCheck {
    pub j: usize,
    pub value: f64,
    pub target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelReport {
    pub beta: f64,
    pub ell: usize,
    pub coeffs: Vec<f64>,
    pub moments: Vec<MomentCheck>,
    pub max_moment_error: f64,
    pub kappa: f64,
    pub kappa_riemann: f64,
    pub kappa_beta: f64,
    pub kappa_beta_riemann: f64,
    pub pass: bool,
}

/// Midpoint rule on `[-1, 1]`.
pub fn midpoint(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    let w = 2.0 / n as f64;
    (0..n).map(|i| f(-1.0 + (i as f64 + 0.5) * w)).sum::<f64>() * w
}

/// Check the moment conditions and the constants `κ`, `κ_β` of one kernel.
pub fn verify_kernel(beta: f64) -> Result<KernelReport> {
    let k = build_kernel(beta)?;
    let ell = k.order().ell();
    let moments: Vec<MomentCheck> = (0..=ell)
        .map(|j| MomentCheck {
            j,
            value: k.moment(j),
            target: if j == 1 { 1.0 } else { 0.0 },
        })
        .collect();
    let max_moment_error = moments.iter().map(|m| (m.value - m.target).abs()).fold(0.0, f64::max);
    let kappa_riemann = midpoint(|u| k.eval(u).powi(2), RIEMANN_NODES);
    let kappa_beta_riemann = midpoint(|u| u.abs().powf(beta) * k.eval(u).abs(), RIEMANN_NODES);
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    let pass = max_moment_error <= MOMENT_TOL
        && rel(k.kappa(), kappa_riemann) <= RIEMANN_TOL
        && rel(k.kappa_beta(), kappa_beta_riemann) <= RIEMANN_TOL;
    Ok(KernelReport {
        beta,
        ell,
        coeffs: k.coeffs().to_vec(),
        moments,
        max_moment_error,
        kappa: k.kappa(),
        kappa_riemann,
        kappa_beta: k.kappa_beta(),
        kappa_beta_riemann,
        pass,
    })
}

/// Certificate of an objective together with its numeric verifications.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifyReport {
    pub objective: String,
    pub d: usize,
    pub certificate: ObjectiveCertificate,
    pub holder: Verification,
    pub curvature: Verification,
    pub pass: bool,
}

/// Region for Hölder and curvature checks.
pub const CHECK_REGION: (f64, f64) = (-10.0, 10.0);

/// Certify `id` in dimension `d` and re-verify the stored constants.
///
/// PL certificates are unconstrained and checked on a grid over
/// `[-10, 10]^d`; strongly convex ones are certified on `set` and checked on
/// random pairs from the same cube.
pub fn certify_objective(
    id: &ObjectiveId,
    d: usize,
    beta: f64,
    kind: CurvatureKind,
    set: &FeasibleSet,
) -> Result<CertifyReport> {
    let obj = id.build(d)?;
    let certificate = obj.certify(beta, kind, set, 0.0)?;
    let holder = verify_holder(&id.component(), beta, certificate.holder_l, CHECK_REGION, 401)?;
    let curvature = match kind {
        CurvatureKind::Pl => {
            // keep the grid near a million points
            let n = (1e6f64.powf(1.0 / d as f64).floor() as usize).clamp(2, 20_001);
            verify_pl(&obj, certificate.alpha, CHECK_REGION, n)?
        }
        CurvatureKind::StronglyConvex => verify_sc(&obj, certificate.alpha, CHECK_REGION, 100_000, 1)?,
    };
    let pass = holder.pass && curvature.pass;
    Ok(CertifyReport {
        objective: id.to_string(),
        d,
        certificate,
        holder,
        curvature,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernels_pass() {
        for beta in [2.0, 3.0, 4.5] {
            let r = verify_kernel(beta).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn zoo_certifies() {
        for (id, kind) in [
            ("quadratic:a=2,c=1", CurvatureKind::StronglyConvex),
            ("quad-sine:a=1,c=0.5", CurvatureKind::StronglyConvex),
            ("quad-sin2:s=1", CurvatureKind::Pl),
            ("quadratic:a=2,c=1", CurvatureKind::Pl),
        ] {
            let id: ObjectiveId = id.parse().unwrap();
            let set = match kind {
                CurvatureKind::Pl => FeasibleSet::WholeSpace,
                CurvatureKind::StronglyConvex => FeasibleSet::unit_ball(2),
            };
            for beta in [2.0, 3.0] {
                let r = certify_objective(&id, 2, beta, kind, &set).unwrap();
                assert!(r.pass, "{id} beta={beta}: {r:?}");
            }
        }
    }
}
