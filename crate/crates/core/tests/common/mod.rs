#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use suslov::flow::sample_rng;
use suslov::{SuslovParams, Vec3};

pub fn rng(seed: u64) -> ChaCha8Rng {
    sample_rng(seed, 0)
}

/// Random valid parameters with I1 > I2 > I3 and a in [-2, 2]^2.
pub fn random_params(rng: &mut impl Rng) -> SuslovParams {
    let i3 = rng.random_range(0.1..2.0);
    let i2 = i3 + rng.random_range(0.05..2.0);
    let i1 = i2 + rng.random_range(0.05..2.0);
    let k1 = rng.random_range(0.0..1.0);
    let k3 = rng.random_range(0.05..2.0);
    let a1 = rng.random_range(-2.0..2.0);
    let a2 = rng.random_range(-2.0..2.0);
    SuslovParams::new([i1, i2, i3], k1, k3, [a1, a2, 1.0]).unwrap()
}

pub fn random_omega(rng: &mut impl Rng, scale: f64) -> Vec3 {
    Vec3::from_fn(|_, _| rng.random_range(-scale..scale))
}

pub fn p_star(a1: f64, a2: f64) -> SuslovParams {
    SuslovParams::new([3.0, 2.0, 1.0], 0.5, 1.0, [a1, a2, 1.0]).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
