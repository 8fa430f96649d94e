//! Unconstrained descent on a nonconvex PL objective, `x² + 3 sin² x` per
//! coordinate, across increasing horizons.

use zeroth_additive::harness::median;
use zeroth_additive::objectives::CurvatureKind;
use zeroth_additive::{
    build_kernel, run_pl, AdditiveObjective, Component1D, FeasibleSet, NoiseModel, ScheduleParams, ZerothOrderOracle,
};

fn main() -> zeroth_additive::Result<()> {
    let d = 2;
    let f = AdditiveObjective::uniform(Component1D::QuadSin2 { s: 1.0 }, d)?;
    let cert = f.certify(2.0, CurvatureKind::Pl, &FeasibleSet::WholeSpace, 0.0)?;
    println!(
        "alpha = {:.5}, lbar = {}, L = {}, f* = {}",
        cert.alpha, cert.lbar, cert.holder_l, cert.f_star
    );

    let kernel = build_kernel(2.0)?;
    let noise = NoiseModel::Gaussian { sigma: 0.3 };
    for t in [256, 1024, 4096, 16384] {
        let p = ScheduleParams::new(cert.alpha, cert.lbar, cert.holder_l, noise.sigma2(), d, t, &kernel)?;
        let errs = (0..20)
            .map(|s| Ok(f.value(&run_pl(&f, &noise, &kernel, &p, &[3.0, 3.0], s)?.final_point) - cert.f_star))
            .collect::<zeroth_additive::Result<Vec<f64>>>()?;
        println!("T = {t:>5}: median f(x_T) - f* = {:.3e}", median(&errs).unwrap());
    }
    Ok(())
}
