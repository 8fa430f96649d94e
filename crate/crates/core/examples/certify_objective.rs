//! Certify the objective zoo and re-verify each certificate numerically.

use zeroth_additive::harness::certify_objective;
use zeroth_additive::objectives::CurvatureKind;
use zeroth_additive::{FeasibleSet, ObjectiveId};

fn main() -> zeroth_additive::Result<()> {
    let d = 2;
    let cases = [
        ("quadratic:a=2,c=1", CurvatureKind::StronglyConvex, 2.0),
        ("quad-sine:a=1,c=0.5", CurvatureKind::StronglyConvex, 3.0),
        ("quad-sin2:s=1", CurvatureKind::Pl, 2.0),
        ("quad-sin2:s=1", CurvatureKind::Pl, 3.0),
    ];
    for (id, kind, beta) in cases {
        let id: ObjectiveId = id.parse()?;
        let set = match kind {
            CurvatureKind::Pl => FeasibleSet::WholeSpace,
            CurvatureKind::StronglyConvex => FeasibleSet::unit_ball(d),
        };
        let r = certify_objective(&id, d, beta, kind, &set)?;
        let c = &r.certificate;
        println!(
            "{id} beta={beta}: alpha {:.5}, lbar {}, L {:.4}, f* {:.4}; holder worst {:.4}, curvature worst {:.3e}, pass {}",
            c.alpha, c.lbar, c.holder_l, c.f_star, r.holder.worst, r.curvature.worst, r.pass
        );
    }
    Ok(())
}
