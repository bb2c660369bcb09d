mod common;

use common::{p_star, random_omega, random_params, rng};
use suslov::measures::{
    class_a_measure_exists, density_params, max_divergence_on_unit_ball, pde_residual_sweep, plane_invariance_defect,
    positive_c1_measure_exists, ClassADensity,
};
use suslov::{SuslovParams, SuslovSystem, Vec3};

fn class_a_instances() -> Vec<SuslovParams> {
    let mut r = rng(31);
    let mut out = vec![p_star(1.0, 0.0)];
    while out.len() < 5 {
        let p = random_params(&mut r);
        out.push(p.with_a(p.a1, 0.0));
    }
    out
}

#[test]
fn class_a_density_is_stationary() {
    for p in class_a_instances() {
        let sys = SuslovSystem::new(p);
        let density = ClassADensity::new(&p).unwrap();
        let mut r = rng(32);
        let points: Vec<Vec<f64>> = (0..10_000)
            .map(|_| random_omega(&mut r, 2.0).as_slice().to_vec())
            .collect();
        let sweep = pde_residual_sweep(&sys, &density, &points, 1e-6);
        assert!(sweep.pass, "{p:?}: {sweep:?}");
        assert!(sweep.sample_count >= 9_900);
    }
}

#[test]
fn planes_are_invariant() {
    for p in class_a_instances() {
        let dp = density_params(&p).unwrap();
        let sys = SuslovSystem::new(p);
        let mut r = rng(33);
        for k in 0..1000 {
            let xi = if k % 2 == 0 { dp.xi_plus } else { dp.xi_minus };
            let w = random_omega(&mut r, 2.0);
            let on = Vec3::new(xi * w.z, w.y, w.z);
            let defect = plane_invariance_defect(&p, &dp, &on).unwrap();
            assert!(
                defect <= 1e-10 * sys.field(&on).norm().max(f64::MIN_POSITIVE),
                "{defect}"
            );
        }
    }
}

#[test]
fn divergence_vanishes_only_without_a1_a2() {
    for a1 in [-1.0, 0.0, 1.0] {
        for a2 in [-1.0, 0.0, 1.0] {
            let p = p_star(a1, a2);
            let max = max_divergence_on_unit_ball(&p, 10);
            if a1 == 0.0 && a2 == 0.0 {
                assert_eq!(max, 0.0);
                assert!(positive_c1_measure_exists(&p));
            } else {
                assert!(max > 1e-6, "a = ({a1}, {a2}): {max}");
                assert!(!positive_c1_measure_exists(&p));
            }
            assert_eq!(class_a_measure_exists(&p), a2 == 0.0);
        }
    }
}

#[test]
fn uniform_density_fails_when_divergence_is_nonzero() {
    let p = p_star(1.0, 1.0);
    let sys = SuslovSystem::new(p);
    let mut r = rng(34);
    let points: Vec<Vec<f64>> = (0..200)
        .map(|_| random_omega(&mut r, 1.0).as_slice().to_vec())
        .collect();
    let sweep = pde_residual_sweep(&sys, &suslov::fields::UnitDensity { dim: 3 }, &points, 1e-6);
    assert!(!sweep.pass);
}
