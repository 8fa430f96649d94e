use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use zeroth_additive::objectives::{query_noisy, CurvatureKind, NoiseModel, Side};
use zeroth_additive::optimizer::FeasibleSet;
use zeroth_additive::{AdditiveObjective, Component1D, GradientOracle, ObjectiveId, ZerothOrderOracle};

fn second_moment(noise: &NoiseModel, n: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let sq: Vec<f64> = (1..=n as u64)
        .flat_map(|t| {
            let (a, b) = noise.draw_pair(t, &mut rng);
            [a * a, b * b]
        })
        .collect();
    let m = sq.iter().sum::<f64>() / sq.len() as f64;
    let var = sq.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (sq.len() - 1) as f64;
    (m, (var / sq.len() as f64).sqrt())
}

#[test]
fn noise_respects_declared_second_moment() {
    let n = 50_000;
    for noise in [
        NoiseModel::Gaussian { sigma: 0.3 },
        NoiseModel::Gaussian { sigma: 1.0 },
        NoiseModel::UniformBounded { b: 2.0 },
        NoiseModel::AdversarialDeterministic { sigma: 0.7 },
    ] {
        let (m, se) = second_moment(&noise, n, 99);
        assert!(m <= noise.sigma2() + 3.0 * se, "{noise:?}: {m} vs {}", noise.sigma2());
    }
    // E z⁴ = 3 gives an SE of σ² √(2 / (2n))
    let (m, _) = second_moment(&NoiseModel::Gaussian { sigma: 1.0 }, n, 5);
    assert!(m <= 1.0 + 3.0 * (2.0 / (2.0 * n as f64)).sqrt(), "{m}");
    assert_eq!(second_moment(&NoiseModel::None, 100, 1).0, 0.0);
}

#[test]
fn adversarial_noise_is_bounded_and_deterministic() {
    let noise = NoiseModel::AdversarialDeterministic { sigma: 0.5 };
    let mut a = ChaCha12Rng::seed_from_u64(1);
    let mut b = ChaCha12Rng::seed_from_u64(2);
    for t in 1..2000u64 {
        let x = noise.draw(t, Side::Plus, &mut a);
        assert_eq!(x, noise.draw(t, Side::Plus, &mut b));
        assert!(x.abs() <= 0.5);
        assert_eq!(noise.draw(t, Side::Minus, &mut a), 0.5 * (11.0 * t as f64).cos());
    }
}

#[test]
fn noisy_query_adds_noise_to_value() {
    let obj = AdditiveObjective::uniform(Component1D::Quadratic { a: 2.0, c: 1.0 }, 3).unwrap();
    let noise = NoiseModel::Gaussian { sigma: 0.5 };
    let x = [0.0, 2.0, -1.0];
    let mut r1 = ChaCha12Rng::seed_from_u64(3);
    let mut r2 = ChaCha12Rng::seed_from_u64(3);
    let y = query_noisy(&obj, &noise, &x, 4, Side::Plus, &mut r1).unwrap();
    assert_eq!(y, obj.value(&x) + noise.draw(4, Side::Plus, &mut r2));
    assert!(query_noisy(&obj, &noise, &x, 0, Side::Plus, &mut r1).is_err());
    assert!(query_noisy(&obj, &noise, &x[..2], 1, Side::Plus, &mut r1).is_err());
}

#[test]
fn gradients_match_central_differences() {
    let mut rng = ChaCha12Rng::seed_from_u64(8);
    for id in [
        "quadratic:a=2,c=1",
        "quad-sine:a=1,c=0.5",
        "quad-sin2:s=1",
        "linear:c=-2",
    ] {
        let obj = id.parse::<ObjectiveId>().unwrap().build(5).unwrap();
        for _ in 0..200 {
            let x: Vec<f64> = (0..5).map(|_| rng.gen_range(-6.0..6.0)).collect();
            let g = obj.gradient(&x);
            for j in 0..5 {
                let e = 1e-5;
                let (mut p, mut m) = (x.clone(), x.clone());
                p[j] += e;
                m[j] -= e;
                let fd = (obj.value(&p) - obj.value(&m)) / (2.0 * e);
                assert!(
                    (fd - g[j]).abs() < 1e-6 * (1.0 + g[j].abs()),
                    "{id} at {x:?}: {fd} vs {}",
                    g[j]
                );
            }
        }
    }
}

#[test]
fn pl_certificate_holds_at_random_points() {
    // ‖∇f‖² >= 2α (f - f*) checked away from the certificate's own grid
    let obj = AdditiveObjective::uniform(Component1D::QuadSin2 { s: 1.0 }, 3).unwrap();
    let cert = obj
        .certify(3.0, CurvatureKind::Pl, &FeasibleSet::WholeSpace, 0.0)
        .unwrap();
    assert_eq!(cert.f_star, 0.0);
    let mut rng = ChaCha12Rng::seed_from_u64(21);
    for _ in 0..200_000 {
        let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let gap = obj.value(&x) - cert.f_star;
        let g2: f64 = obj.gradient(&x).iter().map(|v| v * v).sum();
        assert!(g2 >= 2.0 * cert.alpha * gap - 1e-12, "{x:?}");
    }
}

#[test]
fn sc_certificate_holds_on_random_pairs() {
    let set = FeasibleSet::Ball {
        center: vec![0.0; 4],
        radius: 2.0,
    };
    for id in ["quadratic:a=3,c=0.5", "quad-sine:a=1,c=0.5"] {
        let obj = id.parse::<ObjectiveId>().unwrap().build(4).unwrap();
        let cert = obj.certify(2.0, CurvatureKind::StronglyConvex, &set, 0.5).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        for _ in 0..100_000 {
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let y: Vec<f64> = (0..4).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let g = obj.gradient(&x);
            let lin: f64 = g.iter().zip(x.iter().zip(&y)).map(|(g, (a, b))| g * (b - a)).sum();
            let d2: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
            let lower = obj.value(&x) + lin + 0.5 * cert.alpha * d2;
            assert!(obj.value(&y) >= lower - 1e-9, "{id}");
        }
        // the constrained minimum is not beaten by any feasible sample
        for _ in 0..20_000 {
            let p: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let p = set.project(&p).unwrap();
            assert!(obj.value(&p) >= cert.f_star - 1e-9);
        }
        assert!(set.contains(&cert.x_star, 1e-9));
        assert!(cert.g_bound > 0.0);
    }
}

#[test]
fn nonconvex_objective_has_no_sc_certificate() {
    let obj = AdditiveObjective::uniform(Component1D::QuadSin2 { s: 1.0 }, 2).unwrap();
    assert!(obj
        .certify(2.0, CurvatureKind::StronglyConvex, &FeasibleSet::unit_ball(2), 0.0)
        .is_err());
}
