//! Monte Carlo check of `μ(φ_t(A)) = μ(A)` for `μ = M dx`, using the change
//! of variables `μ(φ_t(A)) = ∫_A M(φ_t(x)) |det Dφ_t(x)| dx`.

use rayon::prelude::*;
use serde::Serialize;

use super::integrator::{Failure, IntegratorOptions};
use super::sampling::{sample_rng, AxisBox};
use super::variational::flow_map_with_jacobian;
use crate::fields::{Density, VectorField};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportReport {
    #[serde(rename = "box")]
    pub region: AxisBox,
    pub t: f64,
    pub seed: u64,
    pub sample_count: usize,
    pub mu_a: f64,
    pub mu_a_standard_error: f64,
    pub mu_phi_t_a: f64,
    pub mu_phi_t_a_standard_error: f64,
    /// `(μ(φ_t A) - μ(A)) / μ(A)`.
    pub relative_error: f64,
    /// Combined standard error of both estimates, relative to `μ(A)`.
    pub standard_error_estimate: f64,
    /// Largest `|M(φ_t x)|det Dφ_t| - M(x)|` over samples, relative to the mean of `M`.
    pub max_pointwise_defect: f64,
    /// `|relative_error| <= 3 * standard_error_estimate`.
    pub pass: bool,
}

/// Integration failed for `failed_sample`; `partial` aggregates the samples
/// with smaller index.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportFailure {
    pub failed_sample: usize,
    pub failure: Failure,
    pub partial: Option<Box<TransportReport>>,
}

impl std::fmt::Display for TransportFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "transport sample {} failed: {}", self.failed_sample, self.failure)
    }
}

impl std::error::Error for TransportFailure {}

fn mean_and_se(values: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let mean = values.clone().sum::<f64>() / nf;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    (mean, (var / nf).sqrt())
}

fn aggregate(region: &AxisBox, t: f64, seed: u64, pairs: &[(f64, f64)]) -> TransportReport {
    let n = pairs.len();
    let vol = region.volume();
    let (mean_a, se_a) = mean_and_se(pairs.iter().map(|p| p.0), n);
    let (mean_phi, se_phi) = mean_and_se(pairs.iter().map(|p| p.1), n);
    let mu_a = vol * mean_a;
    let mu_phi = vol * mean_phi;
    let relative_error = if t == 0.0 { 0.0 } else { (mu_phi - mu_a) / mu_a };
    let standard_error_estimate = (se_a * se_a + se_phi * se_phi).sqrt() / mean_a;
    let max_defect = pairs.iter().fold(0.0_f64, |m, (f, g)| m.max((g - f).abs())) / mean_a;
    TransportReport {
        region: region.clone(),
        t,
        seed,
        sample_count: n,
        mu_a,
        mu_a_standard_error: vol * se_a,
        mu_phi_t_a: mu_phi,
        mu_phi_t_a_standard_error: vol * se_phi,
        relative_error,
        standard_error_estimate,
        max_pointwise_defect: max_defect,
        pass: relative_error.abs() <= 3.0 * standard_error_estimate,
    }
}

/// Runs `count` seeded uniform samples in `region` through the flow for time `t`.
pub fn measure_transport_check(
    field: &dyn VectorField,
    density: &dyn Density,
    region: &AxisBox,
    t: f64,
    count: usize,
    seed: u64,
    opts: &IntegratorOptions,
) -> Result<TransportReport, TransportFailure> {
    assert_eq!(region.dim(), field.dim(), "box dimension must match the field");
    let samples: Vec<Result<(f64, f64), Failure>> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_rng(seed, k as u64);
            let x = region.sample(&mut rng);
            let m0 = density.eval(&x);
            if t == 0.0 {
                return Ok((m0, m0));
            }
            let (xt, d) = flow_map_with_jacobian(field, &x, t, opts)?;
            Ok((m0, density.eval(&xt) * d.determinant().abs()))
        })
        .collect();
    let mut pairs = Vec::with_capacity(count);
    for (k, s) in samples.into_iter().enumerate() {
        match s {
            Ok(p) => pairs.push(p),
            Err(failure) => {
                return Err(TransportFailure {
                    failed_sample: k,
                    failure,
                    partial: (!pairs.is_empty()).then(|| Box::new(aggregate(region, t, seed, &pairs))),
                })
            }
        }
    }
    Ok(aggregate(region, t, seed, &pairs))
}
