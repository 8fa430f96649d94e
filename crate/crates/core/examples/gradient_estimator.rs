//! One two-point gradient estimate, then the Monte Carlo bias and second
//! moment next to their theoretical bounds.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use zeroth_additive::estimator::{bias_bound, mc_bias, mc_second_moment, sample_direction, second_moment_bound};
use zeroth_additive::{build_kernel, estimate_gradient, AdditiveObjective, Component1D, GradientOracle, NoiseModel};

fn main() -> zeroth_additive::Result<()> {
    let d = 4;
    let comp = Component1D::QuadSine { a: 1.0, c: 0.5 };
    let f = AdditiveObjective::uniform(comp, d)?;
    let kernel = build_kernel(2.0)?;
    let x = vec![0.5; d];
    let h = 0.2;

    let mut rng = ChaCha12Rng::seed_from_u64(7);
    let dir = sample_direction(&mut rng, d)?;
    let g = estimate_gradient(&f, &x, h, &kernel, &dir, (0.0, 0.0))?;
    println!("direction  {:?}", dir.as_slice());
    println!("estimate   {:?}", g.as_slice());
    println!("gradient   {:?}", f.gradient(&x));

    let order = kernel.order();
    let b = mc_bias(&f, &x, h, &kernel, 200_000, 1)?;
    let bound = bias_bound(kernel.kappa_beta(), comp.holder_constant(order), d, h, order.beta());
    println!(
        "bias norm  {:.3e} ± {:.1e}   (bound {bound:.3e})",
        b.norm(),
        b.norm_std_err()
    );
    println!("within bound + 3 SE: {}", b.norm() <= bound + 3.0 * b.norm_std_err());

    let noise = NoiseModel::Gaussian { sigma: 0.3 };
    let m = mc_second_moment(&f, &x, h, &kernel, &noise, 200_000, 2)?;
    let g2: f64 = f.gradient(&x).iter().map(|v| v * v).sum();
    let bound = second_moment_bound(kernel.kappa(), d, comp.smoothness(), h, g2, noise.sigma2());
    println!("E|g|^2     {:.3} ± {:.2}   (bound {bound:.3})", m.mean, m.std_err);
    println!("within bound + 3 SE: {}", m.mean <= bound + 3.0 * m.std_err);
    Ok(())
}
