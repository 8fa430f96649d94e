//! The drivers only need a second-moment bound on the noise. The same
//! problem is run under Gaussian, bounded uniform and deterministic
//! (biased, correlated) noise with equal `σ²`.

use zeroth_additive::harness::median;
use zeroth_additive::objectives::CurvatureKind;
use zeroth_additive::{
    build_kernel, run_sc, AdditiveObjective, Component1D, FeasibleSet, NoiseModel, ScheduleParams, ZerothOrderOracle,
};

fn main() -> zeroth_additive::Result<()> {
    let d = 2;
    let f = AdditiveObjective::uniform(Component1D::Quadratic { a: 2.0, c: 0.0 }, d)?;
    let set = FeasibleSet::unit_ball(d);
    let cert = f.certify(2.0, CurvatureKind::StronglyConvex, &set, 1.0)?;
    let kernel = build_kernel(2.0)?;
    let sigma = 0.3f64;
    let models = [
        NoiseModel::Gaussian { sigma },
        NoiseModel::UniformBounded { b: sigma * 3f64.sqrt() },
        NoiseModel::AdversarialDeterministic { sigma },
    ];
    for noise in models {
        let p = ScheduleParams::new(cert.alpha, cert.lbar, cert.holder_l, noise.sigma2(), d, 4096, &kernel)?;
        let errs = (0..20)
            .map(|s| Ok(f.value(run_sc(&f, &noise, &kernel, &p, &set, &[1.0, 0.0], s)?.output()) - cert.f_star))
            .collect::<zeroth_additive::Result<Vec<f64>>>()?;
        println!(
            "{noise:?}: sigma^2 = {:.3}, median error {:.3e}",
            noise.sigma2(),
            median(&errs).unwrap()
        );
    }
    Ok(())
}
