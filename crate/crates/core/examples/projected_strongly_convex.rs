//! Projected descent on a strongly convex objective over a ball and a box.
//! The output is the weighted average of the iterates.

use zeroth_additive::objectives::CurvatureKind;
use zeroth_additive::optimizer::ScStepRule;
use zeroth_additive::{
    build_kernel, run_sc, AdditiveObjective, Component1D, FeasibleSet, NoiseModel, ScheduleParams, ZerothOrderOracle,
};

fn main() -> zeroth_additive::Result<()> {
    let d = 3;
    let f = AdditiveObjective::uniform(Component1D::Quadratic { a: 2.0, c: 1.5 }, d)?;
    let kernel = build_kernel(2.0)?;
    let noise = NoiseModel::Gaussian { sigma: 0.3 };
    let sets = [
        ("unit ball", FeasibleSet::unit_ball(d), vec![0.0; d]),
        ("box [-1, 1]^3", FeasibleSet::cube(d, -1.0, 1.0), vec![-1.0; d]),
    ];
    for (name, set, x1) in sets {
        let cert = f.certify(2.0, CurvatureKind::StronglyConvex, &set, 1.0)?;
        println!(
            "{name}: constrained minimizer {:?}, f* = {:.4}",
            cert.x_star, cert.f_star
        );
        for rule in [ScStepRule::Anytime, ScStepRule::Constant] {
            let p = ScheduleParams::new(cert.alpha, cert.lbar, cert.holder_l, noise.sigma2(), d, 5000, &kernel)?
                .with_sc_step(rule);
            let tr = run_sc(&f, &noise, &kernel, &p, &set, &x1, 11)?;
            println!(
                "  {rule:?}: f(avg) - f* = {:.3e}, feasible: {}",
                f.value(tr.output()) - cert.f_star,
                set.contains(tr.output(), 1e-12)
            );
        }
    }
    Ok(())
}
