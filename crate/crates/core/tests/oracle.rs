use std::f64::consts::PI;

use stiefel_qg::oracle::{
    covariant_accel_numeric, econ_full_block, full_qg_eval, riemannian_dist, stiefel_log_shooting,
    FullFrame, ShootingConfig,
};
use stiefel_qg::{
    econ_qg_connect, random_tangent, stiefel_exp, Geodesic, RngSeed, SeededRng, StiefelPoint,
};

#[test]
fn economy_forms_agree() {
    let mut rng = SeededRng::new(77);
    for case in 0..100u64 {
        let n = 4 + (rng.uniform() * 21.0) as usize;
        let n = n.min(24);
        let p = 1 + (rng.uniform() * (n / 2) as f64) as usize;
        let p = p.min(n / 2);
        let d = 0.1 + rng.uniform() * 1.4;
        let u = StiefelPoint::random(n, p, RngSeed(case));
        let delta = random_tangent(&u, d, RngSeed(case).derive(4)).unwrap();
        let curve = econ_qg_connect(&u, &stiefel_exp(&delta, 1.0)).unwrap();
        let frame = FullFrame::complete(&u).unwrap();
        let b_full = econ_full_block(&frame, &curve);
        for i in 0..=4 {
            let t = i as f64 / 4.0;
            let full = full_qg_eval(&frame, curve.a(), &b_full, t).unwrap();
            let err = full.frobenius_distance(&curve.point(t));
            assert!(err <= 1e-10, "case {case} St({n},{p}) t {t}: {err}");
        }
    }
}

#[test]
fn geodesics_have_vanishing_covariant_acceleration() {
    for seed in 0..10 {
        let u = StiefelPoint::random(12, 4, RngSeed(seed));
        let delta = random_tangent(&u, 0.5 * PI, RngSeed(seed).derive(5)).unwrap();
        let speed = delta.norm();
        let geo = Geodesic::new(delta);
        for i in 1..10 {
            let d = covariant_accel_numeric(&geo, i as f64 / 10.0, 1e-5);
            assert!(d.norm() <= 1e-4 * (1.0 + speed * speed));
        }
    }
}

#[test]
fn shooting_recovers_initial_velocity() {
    let cfg = ShootingConfig {
        tol: 1e-12,
        max_iter: 500,
        step: 1.0,
    };
    for seed in 0..100 {
        let norm = 0.5 * PI * (0.05 + 0.95 * SeededRng::new(seed).uniform());
        let u = StiefelPoint::random(12, 3, RngSeed(seed));
        let delta = random_tangent(&u, norm, RngSeed(seed).derive(6)).unwrap();
        let target = stiefel_exp(&delta, 1.0);
        let found = stiefel_log_shooting(&u, &target, None, &cfg).unwrap();
        let err = (found.to_ambient() - delta.to_ambient()).norm();
        assert!(err <= 1e-8, "seed {seed} norm {norm}: {err}");
    }
}

#[test]
fn distance_is_symmetric() {
    let cfg = ShootingConfig::default();
    for seed in 0..10 {
        let u = StiefelPoint::random(10, 3, RngSeed(seed));
        let delta = random_tangent(&u, 0.4 * PI, RngSeed(seed).derive(7)).unwrap();
        let target = stiefel_exp(&delta, 1.0);
        let forward = riemannian_dist(&u, &target, &cfg).unwrap();
        let backward = riemannian_dist(&target, &u, &cfg).unwrap();
        assert!((forward - backward).abs() <= 1e-6);
        assert!((forward - delta.norm()).abs() <= 1e-6);
    }
}
