//! Seeded sampling. A single 64-bit seed expands into one ChaCha stream per
//! sample index, so results do not depend on how work is split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::system::{SuslovSystem, Vec3};

/// Generator for sample `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Points on `E(Ω) = eta`: `Ω = sqrt(2 eta) L^{-T} g / |g|` with `K_a = L L^T`
/// and `g` standard normal.
pub fn sample_ellipsoid(sys: &SuslovSystem, eta: f64, count: usize, seed: u64) -> Vec<Vec3> {
    let chol = sys.m.ka.cholesky().expect("K_a is positive definite");
    let lt = chol.l().transpose();
    (0..count)
        .map(|k| {
            let mut rng = sample_rng(seed, k as u64);
            let g = Vec3::new(
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            );
            let y = lt.solve_upper_triangular(&(g / g.norm())).expect("nonsingular factor");
            y * (2.0 * eta).sqrt()
        })
        .collect()
}

/// Axis-aligned box `[lower_i, upper_i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl AxisBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        assert!(lower.iter().zip(&upper).all(|(l, u)| l < u), "empty box");
        Self { lower, upper }
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn volume(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(l, u)| u - l).product()
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&l, &u)| l + (u - l) * rng.random::<f64>())
            .collect()
    }
}
