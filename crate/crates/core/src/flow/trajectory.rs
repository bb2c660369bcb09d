use serde::Serialize;

use super::integrator::{dopri5, DenseSegment, Failure, IntegratorOptions, IntegratorStats, Projection};
use crate::fields::VectorField;
use crate::system::{SuslovParams, SuslovSystem, Vec3};

/// Default bound on relative energy drift before a trajectory is flagged.
pub const DEFAULT_ENERGY_DRIFT_BOUND: f64 = 1e-9;

// 5-point Gauss–Legendre nodes and weights on [0, 1].
const GL_NODES: [f64; 5] = [
    0.046_910_077_030_668,
    0.230_765_344_947_158_5,
    0.5,
    0.769_234_655_052_841_5,
    0.953_089_922_969_332,
];
const GL_WEIGHTS: [f64; 5] = [
    0.118_463_442_528_094_5,
    0.239_314_335_249_683_2,
    0.284_444_444_444_444_4,
    0.239_314_335_249_683_2,
    0.118_463_442_528_094_5,
];

/// States at every accepted step together with the continuous extension.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// `max |E(t) - E(0)| / E(0)` over samples, for Suslov trajectories.
    pub energy_drift: Option<f64>,
    pub energy_drift_bound: f64,
    /// Energy drift exceeded the bound.
    pub flagged: bool,
    /// States were projected back onto the initial energy ellipsoid after each step.
    pub projected: bool,
    pub integrator_stats: IntegratorStats,
    #[serde(skip)]
    pub params: Option<SuslovParams>,
    #[serde(skip)]
    segments: Vec<DenseSegment>,
}

impl Trajectory {
    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().expect("nonempty trajectory")
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("nonempty trajectory")
    }

    pub fn segments(&self) -> &[DenseSegment] {
        &self.segments
    }

    /// Dense-output state at `t` (clamped to the integration interval).
    pub fn at(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        if self.segments.is_empty() {
            out.copy_from_slice(&self.states[0]);
            return out;
        }
        let forward = self.t_end() >= self.t_start();
        // number of segments whose end lies before t (in integration direction)
        let idx = self
            .segments
            .partition_point(|s| if forward { s.t1() < t } else { s.t1() > t });
        let seg = &self.segments[idx.min(self.segments.len() - 1)];
        let tc = if forward {
            t.clamp(self.t_start(), self.t_end())
        } else {
            t.clamp(self.t_end(), self.t_start())
        };
        seg.eval_into(tc, &mut out);
        out
    }

    /// `∫ f(x(s)) ds` from the start to the end time by Gauss–Legendre
    /// quadrature on each dense-output segment (signed for backward runs).
    pub fn integrate_along(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        let mut buf = vec![0.0; self.dim()];
        self.segments
            .iter()
            .map(|seg| {
                let inner: f64 = GL_NODES
                    .iter()
                    .zip(GL_WEIGHTS)
                    .map(|(&node, weight)| {
                        seg.eval_into(seg.t0 + node * seg.h, &mut buf);
                        weight * f(&buf)
                    })
                    .sum();
                inner * seg.h
            })
            .sum()
    }

    /// Maximum relative drift `|q(x(t)) - q(x(0))| / |q(x(0))|` over stored states.
    pub fn relative_drift(&self, q: impl Fn(&[f64]) -> f64) -> f64 {
        let q0 = q(&self.states[0]);
        let denom = if q0 != 0.0 { q0.abs() } else { 1.0 };
        self.states
            .iter()
            .fold(0.0_f64, |m, s| m.max((q(s) - q0).abs() / denom))
    }

    /// States resampled at `count` equally spaced times (inclusive of both ends).
    pub fn resample(&self, count: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
        let (t0, t1) = (self.t_start(), self.t_end());
        let times: Vec<f64> = (0..count)
            .map(|k| {
                if count == 1 {
                    t0
                } else {
                    t0 + (t1 - t0) * k as f64 / (count - 1) as f64
                }
            })
            .collect();
        let states = times.iter().map(|&t| self.at(t)).collect();
        (times, states)
    }
}

fn run(
    field: &dyn VectorField,
    x0: &[f64],
    horizon: f64,
    opts: &IntegratorOptions,
    project: Option<Projection<'_>>,
) -> Result<Trajectory, Failure> {
    let mut times = vec![0.0];
    let mut states = vec![x0.to_vec()];
    let mut segments = Vec::new();
    let (_, stats) = dopri5(field, 0.0, x0, horizon, opts, project, |seg, y| {
        times.push(seg.t1());
        states.push(y.to_vec());
        segments.push(seg.clone());
    })?;
    Ok(Trajectory {
        times,
        states,
        energy_drift: None,
        energy_drift_bound: DEFAULT_ENERGY_DRIFT_BOUND,
        flagged: false,
        projected: project.is_some(),
        integrator_stats: stats,
        params: None,
        segments,
    })
}

/// Integrates any field from `x0` over `[0, horizon]` (horizon may be negative).
pub fn integrate(
    field: &dyn VectorField,
    x0: &[f64],
    horizon: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory, Failure> {
    run(field, x0, horizon, opts, None)
}

/// Integrates the Suslov field and records energy drift.
///
/// With `project_energy`, every accepted state is rescaled back onto the
/// initial energy ellipsoid; the trajectory is then marked `projected`.
pub fn integrate_suslov(
    sys: &SuslovSystem,
    omega0: &Vec3,
    horizon: f64,
    opts: &IntegratorOptions,
    project_energy: bool,
) -> Result<Trajectory, Failure> {
    let e0 = sys.energy(omega0);
    let projector = move |y: &mut [f64]| {
        let e = sys.energy(&Vec3::new(y[0], y[1], y[2]));
        if e > 0.0 {
            let c = (e0 / e).sqrt();
            y.iter_mut().for_each(|v| *v *= c);
        }
    };
    let project: Option<Projection<'_>> = if project_energy && e0 > 0.0 {
        Some(&projector)
    } else {
        None
    };
    let mut traj = run(sys, omega0.as_slice(), horizon, opts, project)?;
    let drift = if e0 > 0.0 {
        traj.relative_drift(|x| sys.energy(&Vec3::new(x[0], x[1], x[2])))
    } else {
        0.0
    };
    traj.energy_drift = Some(drift);
    traj.flagged = drift > traj.energy_drift_bound;
    traj.params = Some(sys.params);
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::example2d;
    use crate::system::tests::p_star;

    #[test]
    fn equilibrium_trajectory_is_constant() {
        let sys = SuslovSystem::new(p_star(1.0, 0.0));
        let v3 = Vec3::new(0.0, 0.0, 1.0);
        let traj = integrate_suslov(&sys, &v3, 50.0, &IntegratorOptions::default(), false).unwrap();
        for s in &traj.states {
            assert!((Vec3::new(s[0], s[1], s[2]) - v3).norm() <= 1e-9);
        }
        assert!((Vec3::from_row_slice(&traj.at(17.3)) - v3).norm() <= 1e-9);
        assert!(!traj.flagged);
    }

    #[test]
    fn suslov_energy_drift_is_small() {
        let sys = SuslovSystem::new(p_star(1.0, 0.0));
        let traj = integrate_suslov(
            &sys,
            &Vec3::new(1.0, 1.0, 1.0),
            100.0,
            &IntegratorOptions::default(),
            false,
        )
        .unwrap();
        let drift = traj.energy_drift.unwrap();
        assert!(drift <= 1e-9, "{drift}");
        assert!(!traj.flagged);
        assert_eq!(traj.params, Some(sys.params));
    }

    #[test]
    fn linear_fixture_matches_closed_form() {
        let tol = 1e-10;
        let traj = integrate(&example2d(), &[1.0, 1.0], 3.0, &IntegratorOptions::with_tol(tol)).unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            assert!((s[0] - (-t).exp()).abs() <= tol * 10.0);
            assert!((s[1] - (2.0 * t).exp()).abs() <= tol * 10.0 * (2.0 * t).exp());
        }
        let mid = traj.at(1.234);
        assert!((mid[1] - (2.0 * 1.234_f64).exp()).abs() <= 1e-8);
    }

    #[test]
    fn backward_trajectory_and_quadrature() {
        let traj = integrate(&example2d(), &[1.0, 1.0], -2.0, &IntegratorOptions::default()).unwrap();
        assert_eq!(traj.t_end(), -2.0);
        let x = traj.at(-1.0);
        assert!((x[0] - 1f64.exp()).abs() < 1e-8);
        // ∫_0^{-2} x1(s) ds = ∫_0^{-2} e^{-s} ds = 1 - e^2
        let integral = traj.integrate_along(|x| x[0]);
        assert!((integral - (1.0 - 2f64.exp())).abs() < 1e-8, "{integral}");
    }

    #[test]
    fn projection_keeps_energy() {
        let sys = SuslovSystem::new(p_star(1.0, 1.0));
        let opts = IntegratorOptions::with_tol(1e-6);
        let traj = integrate_suslov(&sys, &Vec3::new(0.3, -1.0, 0.8), 50.0, &opts, true).unwrap();
        assert!(traj.projected);
        assert!(traj.energy_drift.unwrap() < 1e-13);
    }

    #[test]
    fn resample_endpoints() {
        let traj = integrate(&example2d(), &[1.0, 1.0], 1.0, &IntegratorOptions::default()).unwrap();
        let (times, states) = traj.resample(11);
        assert_eq!(times.len(), 11);
        assert_eq!(times[10], 1.0);
        assert_eq!(states[0], vec![1.0, 1.0]);
    }
}
