//! Reconstruction of the carrier attitude `g' = g hat(Ω)` and rotor angle
//! `θ' = -<a, Ω>` along a reduced trajectory.

use nalgebra::{Quaternion, UnitQuaternion};
use serde::Serialize;

use super::trajectory::Trajectory;
use crate::error::SuslovError;
use crate::system::{SuslovParams, Vec3};

/// Largest rotation angle allowed in one RK4 substep.
const MAX_SUBSTEP_ANGLE: f64 = 0.01;

#[derive(Debug, Clone, Serialize)]
pub struct AttitudeTrajectory {
    pub times: Vec<f64>,
    /// Unit quaternions `[w, x, y, z]` for the carrier attitude.
    pub rotations: Vec<[f64; 4]>,
    pub theta: Vec<f64>,
    /// `<a, Ω + θ' E3>` at each sample, with `θ'` from the reconstruction equation.
    pub constraint_residual: Vec<f64>,
}

impl AttitudeTrajectory {
    pub fn rotation(&self, k: usize) -> UnitQuaternion<f64> {
        let [w, x, y, z] = self.rotations[k];
        UnitQuaternion::new_unchecked(Quaternion::new(w, x, y, z))
    }
}

fn quat_rate(q: &Quaternion<f64>, omega: &Vec3) -> Quaternion<f64> {
    // body-frame angular velocity: q' = ½ q ⊗ (0, Ω)
    q * Quaternion::new(0.0, omega.x, omega.y, omega.z) * 0.5
}

/// Integrates the kinematics on the dense output of `traj` with angle-limited
/// RK4 substeps; the quaternion is renormalized after every substep.
pub fn reconstruct(
    params: &SuslovParams,
    traj: &Trajectory,
    g0: UnitQuaternion<f64>,
    theta0: f64,
) -> Result<AttitudeTrajectory, SuslovError> {
    if traj.params.as_ref() != Some(params) || traj.dim() != 3 {
        return Err(SuslovError::MismatchedParams);
    }
    let a = params.a();
    let omega_at = |t: f64| Vec3::from_row_slice(&traj.at(t));
    let mut q = *g0.quaternion();
    let mut theta = theta0;

    let mut times = vec![traj.t_start()];
    let mut rotations = vec![[q.w, q.i, q.j, q.k]];
    let mut thetas = vec![theta];

    for seg in traj.segments() {
        let speed = [0.0, 0.5, 1.0]
            .iter()
            .map(|s| omega_at(seg.t0 + s * seg.h).norm())
            .fold(0.0_f64, f64::max);
        let substeps = ((speed * seg.h.abs() / MAX_SUBSTEP_ANGLE).ceil() as usize).max(1);
        let dt = seg.h / substeps as f64;
        for m in 0..substeps {
            let t = seg.t0 + dt * m as f64;
            let w0 = omega_at(t);
            let wm = omega_at(t + 0.5 * dt);
            let w1 = omega_at(t + dt);
            let k1 = quat_rate(&q, &w0);
            let k2 = quat_rate(&(q + k1 * (0.5 * dt)), &wm);
            let k3 = quat_rate(&(q + k2 * (0.5 * dt)), &wm);
            let k4 = quat_rate(&(q + k3 * dt), &w1);
            q = (q + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)).normalize();
            // same Simpson weights as the RK4 stages
            theta -= dt / 6.0 * (a.dot(&w0) + 4.0 * a.dot(&wm) + a.dot(&w1));
        }
        times.push(seg.t1());
        rotations.push([q.w, q.i, q.j, q.k]);
        thetas.push(theta);
    }

    let constraint_residual = traj
        .states
        .iter()
        .map(|s| {
            let omega = Vec3::from_row_slice(s);
            let theta_dot = -a.dot(&omega);
            a.dot(&(omega + Vec3::z() * theta_dot))
        })
        .collect();

    Ok(AttitudeTrajectory {
        times,
        rotations,
        theta: thetas,
        constraint_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::integrator::IntegratorOptions;
    use crate::flow::trajectory::integrate_suslov;
    use crate::system::tests::p_star;
    use crate::system::SuslovSystem;

    #[test]
    fn zero_velocity_keeps_attitude() {
        let p = p_star(1.0, 0.0);
        let sys = SuslovSystem::new(p);
        let traj = integrate_suslov(&sys, &Vec3::zeros(), 10.0, &IntegratorOptions::default(), false).unwrap();
        let g0 = UnitQuaternion::from_euler_angles(0.1, 0.2, 0.3);
        let att = reconstruct(&p, &traj, g0, 0.7).unwrap();
        for k in 0..att.times.len() {
            assert!(att.rotation(k).angle_to(&g0) < 1e-14);
            assert_eq!(att.theta[k], 0.7);
        }
    }

    #[test]
    fn steady_rotation_about_e3() {
        let p = p_star(0.0, 0.0);
        let sys = SuslovSystem::new(p);
        let traj = integrate_suslov(
            &sys,
            &Vec3::new(0.0, 0.0, 1.0),
            10.0,
            &IntegratorOptions::default(),
            false,
        )
        .unwrap();
        let g0 = UnitQuaternion::from_euler_angles(0.3, -0.2, 0.5);
        let att = reconstruct(&p, &traj, g0, 0.0).unwrap();
        for (k, &t) in att.times.iter().enumerate() {
            let expected = g0 * UnitQuaternion::from_axis_angle(&Vec3::z_axis(), t);
            assert!(att.rotation(k).angle_to(&expected) < 1e-9, "t = {t}");
            assert!((att.theta[k] + t).abs() < 1e-12);
            assert!((att.rotation(k).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constraint_and_theta_rate() {
        let p = p_star(1.0, 0.5);
        let sys = SuslovSystem::new(p);
        let traj = integrate_suslov(
            &sys,
            &Vec3::new(0.4, -0.3, 0.9),
            20.0,
            &IntegratorOptions::default(),
            false,
        )
        .unwrap();
        let att = reconstruct(&p, &traj, UnitQuaternion::identity(), 0.0).unwrap();
        assert!(att.constraint_residual.iter().all(|r| r.abs() <= 1e-9));
        // θ(t) equals the quadrature of -<a, Ω>
        let expected = -traj.integrate_along(|x| p.a().dot(&Vec3::from_row_slice(x)));
        assert!((att.theta.last().unwrap() - expected).abs() < 1e-8);
    }

    #[test]
    fn mismatched_params_rejected() {
        let sys = SuslovSystem::new(p_star(1.0, 0.0));
        let traj = integrate_suslov(
            &sys,
            &Vec3::new(0.1, 0.2, 0.3),
            1.0,
            &IntegratorOptions::default(),
            false,
        )
        .unwrap();
        let err = reconstruct(&p_star(1.0, 1.0), &traj, UnitQuaternion::identity(), 0.0).unwrap_err();
        assert_eq!(err, SuslovError::MismatchedParams);
    }
}
