//! Empirical attractor detection: integrate many seeded samples and count
//! how many end up captured by each candidate equilibrium.

use rayon::prelude::*;
use serde::Serialize;

use super::integrator::{flow_to, IntegratorOptions};
use super::sampling::sample_ellipsoid;
use crate::equilibria::{equilibrium_directions, scale_to_ellipsoid};
use crate::fields::VectorField;
use crate::system::{SuslovSystem, Vec3};

/// Default angular capture radius on an energy ellipsoid (radians).
pub const DEFAULT_CAPTURE_RADIUS: f64 = 0.05;
/// The approach test compares distances at `(1 - TAIL_FRACTION) T` and `T`.
pub const TAIL_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaptureMetric {
    Euclidean,
    /// Angle between the state and the target direction.
    Angular,
}

impl CaptureMetric {
    pub fn distance(&self, x: &[f64], target: &[f64]) -> f64 {
        match self {
            CaptureMetric::Euclidean => x.iter().zip(target).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt(),
            CaptureMetric::Angular => {
                let nx = x.iter().map(|a| a * a).sum::<f64>().sqrt();
                let nt = target.iter().map(|a| a * a).sum::<f64>().sqrt();
                if nx == 0.0 || nt == 0.0 {
                    return std::f64::consts::PI;
                }
                // angle = 2 atan2(|x̂ - t̂|, |x̂ + t̂|)
                let (mut dm, mut dp) = (0.0, 0.0);
                for (a, b) in x.iter().zip(target) {
                    dm += (a / nx - b / nt).powi(2);
                    dp += (a / nx + b / nt).powi(2);
                }
                2.0 * dm.sqrt().atan2(dp.sqrt())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaptureTarget {
    pub label: String,
    pub point: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaptureCount {
    pub label: String,
    pub count: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttractorReport {
    pub sample_count: usize,
    pub horizon: f64,
    pub capture_radius: f64,
    pub metric: CaptureMetric,
    pub captures: Vec<CaptureCount>,
    pub uncaptured_fraction: f64,
    /// Samples whose integration failed (counted as uncaptured).
    pub failures: usize,
}

impl AttractorReport {
    pub fn fraction(&self, label: &str) -> f64 {
        self.captures
            .iter()
            .find(|c| c.label == label)
            .map_or(0.0, |c| c.fraction)
    }
}

/// Index of the target capturing the orbit from `x0`, if any.
///
/// A sample is captured when its endpoint at `T` lies within `radius` of the
/// nearest target and is no farther from it than at `(1 - TAIL_FRACTION) T`.
fn classify_sample(
    field: &dyn VectorField,
    x0: &[f64],
    targets: &[CaptureTarget],
    horizon: f64,
    radius: f64,
    metric: CaptureMetric,
    opts: &IntegratorOptions,
) -> Result<Option<usize>, ()> {
    let t_tail = (1.0 - TAIL_FRACTION) * horizon;
    let x_tail = flow_to(field, x0, t_tail, opts).map_err(|_| ())?;
    let x_end = flow_to(field, &x_tail, horizon - t_tail, opts).map_err(|_| ())?;
    let (idx, d_end) = targets
        .iter()
        .enumerate()
        .map(|(i, t)| (i, metric.distance(&x_end, &t.point)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or(())?;
    let d_tail = metric.distance(&x_tail, &targets[idx].point);
    let approaching = d_end < d_tail || d_end <= 1e-12;
    Ok((d_end <= radius && approaching).then_some(idx))
}

pub fn detect_attractor(
    field: &dyn VectorField,
    initial: &[Vec<f64>],
    targets: &[CaptureTarget],
    horizon: f64,
    radius: f64,
    metric: CaptureMetric,
    opts: &IntegratorOptions,
) -> AttractorReport {
    let outcomes: Vec<Result<Option<usize>, ()>> = initial
        .par_iter()
        .map(|x0| classify_sample(field, x0, targets, horizon, radius, metric, opts))
        .collect();
    let n = initial.len();
    let mut counts = vec![0usize; targets.len()];
    let mut failures = 0;
    for o in &outcomes {
        match o {
            Ok(Some(i)) => counts[*i] += 1,
            Ok(None) => {}
            Err(()) => failures += 1,
        }
    }
    let captured: usize = counts.iter().sum();
    let frac = |c: usize| if n == 0 { 0.0 } else { c as f64 / n as f64 };
    AttractorReport {
        sample_count: n,
        horizon,
        capture_radius: radius,
        metric,
        captures: targets
            .iter()
            .zip(&counts)
            .map(|(t, &c)| CaptureCount {
                label: t.label.clone(),
                count: c,
                fraction: frac(c),
            })
            .collect(),
        uncaptured_fraction: frac(n - captured),
        failures,
    }
}

/// The six equilibria `±v_i` on the ellipsoid `E = eta`, labelled `+v1`, `-v1`, ...
pub fn suslov_equilibrium_targets(sys: &SuslovSystem, eta: f64) -> Vec<CaptureTarget> {
    let dirs = equilibrium_directions(&sys.params);
    let mut targets = Vec::with_capacity(6);
    for (i, v) in dirs.iter().enumerate() {
        for (sign, tag) in [(1.0, '+'), (-1.0, '-')] {
            let p: Vec3 = scale_to_ellipsoid(&sys.params, v, eta, sign).expect("nonzero direction, positive energy");
            targets.push(CaptureTarget {
                label: format!("{tag}v{}", i + 1),
                point: p.as_slice().to_vec(),
            });
        }
    }
    targets
}

/// Attractor probe on the energy ellipsoid with seeded uniform samples.
pub fn suslov_attractor_probe(
    sys: &SuslovSystem,
    eta: f64,
    samples: usize,
    seed: u64,
    horizon: f64,
    radius: f64,
    opts: &IntegratorOptions,
) -> AttractorReport {
    let initial: Vec<Vec<f64>> = sample_ellipsoid(sys, eta, samples, seed)
        .iter()
        .map(|w| w.as_slice().to_vec())
        .collect();
    let targets = suslov_equilibrium_targets(sys, eta);
    detect_attractor(sys, &initial, &targets, horizon, radius, CaptureMetric::Angular, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::example1d;
    use crate::system::tests::p_star;
    use std::f64::consts::PI;

    #[test]
    fn angular_metric() {
        let m = CaptureMetric::Angular;
        assert!(m.distance(&[1.0, 0.0, 0.0], &[2.0, 0.0, 0.0]).abs() < 1e-15);
        assert!((m.distance(&[1.0, 0.0, 0.0], &[0.0, 3.0, 0.0]) - PI / 2.0).abs() < 1e-15);
        assert!((m.distance(&[1.0, 0.0, 0.0], &[-1.0, 0.0, 0.0]) - PI).abs() < 1e-15);
        assert!((m.distance(&[1.0, 1e-9, 0.0], &[1.0, 0.0, 0.0]) - 1e-9).abs() < 1e-22);
    }

    #[test]
    fn scalar_partial_attractor() {
        // x' = sin^2 x: orbits in (0, π) climb to π, orbits in (-π, 0) climb to 0
        let initial: Vec<Vec<f64>> = (1..40)
            .map(|k| -PI + 2.0 * PI * k as f64 / 40.0)
            .filter(|x| x.abs() > 0.05)
            .map(|x| vec![x])
            .collect();
        let targets: Vec<CaptureTarget> = [-PI, 0.0, PI]
            .iter()
            .map(|&p| CaptureTarget {
                label: format!("{p:.3}"),
                point: vec![p],
            })
            .collect();
        let report = detect_attractor(
            &example1d(),
            &initial,
            &targets,
            2000.0,
            0.05,
            CaptureMetric::Euclidean,
            &IntegratorOptions::default(),
        );
        assert_eq!(report.uncaptured_fraction, 0.0, "{report:?}");
        assert_eq!(report.failures, 0);
        assert_eq!(report.captures[0].count, 0);
        assert!(report.captures[1].count > 0 && report.captures[2].count > 0);
    }

    #[test]
    fn targets_lie_on_ellipsoid() {
        let sys = SuslovSystem::new(p_star(1.0, 1.0));
        let targets = suslov_equilibrium_targets(&sys, 2.0);
        assert_eq!(targets.len(), 6);
        assert_eq!(targets[1].label, "-v1");
        for t in &targets {
            assert!((sys.energy(&Vec3::from_row_slice(&t.point)) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn recurrent_regime_has_no_captures() {
        let sys = SuslovSystem::new(p_star(1.0, 0.0));
        let opts = IntegratorOptions::with_tol(1e-8);
        let report = suslov_attractor_probe(&sys, 1.0, 40, 3, 100.0, DEFAULT_CAPTURE_RADIUS, &opts);
        let captured: usize = report.captures.iter().map(|c| c.count).sum();
        assert!(captured <= 1, "{report:?}");
    }
}
