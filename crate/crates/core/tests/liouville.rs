mod common;

use common::{p_star, random_omega, random_params, rng};
use suslov::flow::{flow_map_with_jacobian, integrate_suslov, IntegratorOptions};
use suslov::{SuslovSystem, Vec3};

#[test]
fn log_det_equals_integrated_divergence() {
    let mut r = rng(70);
    let opts = IntegratorOptions::default();
    for _ in 0..20 {
        let sys = SuslovSystem::new(random_params(&mut r));
        let w = random_omega(&mut r, 1.0);
        for t in [1.0, 7.5, 20.0] {
            let (_, d) = flow_map_with_jacobian(&sys, w.as_slice(), t, &opts).unwrap();
            let traj = integrate_suslov(&sys, &w, t, &opts, false).unwrap();
            let quad = traj.integrate_along(|x| sys.divergence_analytic(&Vec3::from_row_slice(x)));
            let log_det = d.determinant().abs().ln();
            assert!((log_det - quad).abs() <= 1e-6, "t = {t}: {log_det} vs {quad}");
        }
    }
}

#[test]
fn euler_case_is_volume_preserving() {
    let mut r = rng(71);
    let sys = SuslovSystem::new(p_star(0.0, 0.0));
    for _ in 0..10 {
        let w = random_omega(&mut r, 1.0);
        let (_, d) = flow_map_with_jacobian(&sys, w.as_slice(), 20.0, &IntegratorOptions::default()).unwrap();
        assert!((d.determinant() - 1.0).abs() <= 1e-8, "{}", d.determinant());
    }
}
