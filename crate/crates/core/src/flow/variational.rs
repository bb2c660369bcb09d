//! Flow-map Jacobians from the variational equations `D' = J(x) D`, `D(0) = I`.

use nalgebra::DMatrix;

use super::integrator::{flow_to, Failure, IntegratorOptions};
use crate::error::IntegrationError;
use crate::fields::VectorField;

/// The augmented field on `(x, D)` with `D` stored row-major after `x`.
pub struct VariationalField<'a, F: ?Sized> {
    base: &'a F,
}

impl<'a, F: VectorField + ?Sized> VariationalField<'a, F> {
    pub fn new(base: &'a F) -> Result<Self, IntegrationError> {
        if base.has_jacobian() {
            Ok(Self { base })
        } else {
            Err(IntegrationError::MissingJacobian)
        }
    }

    pub fn initial_state(&self, x0: &[f64]) -> Vec<f64> {
        let n = self.base.dim();
        let mut y = Vec::with_capacity(n + n * n);
        y.extend_from_slice(x0);
        for i in 0..n {
            for j in 0..n {
                y.push(if i == j { 1.0 } else { 0.0 });
            }
        }
        y
    }
}

impl<F: VectorField + ?Sized> VectorField for VariationalField<'_, F> {
    fn dim(&self) -> usize {
        let n = self.base.dim();
        n + n * n
    }

    fn eval(&self, y: &[f64], out: &mut [f64]) {
        let n = self.base.dim();
        let (x, d) = y.split_at(n);
        let (dx, dd) = out.split_at_mut(n);
        self.base.eval(x, dx);
        let mut stack = [0.0; 9];
        let mut heap;
        let jac: &mut [f64] = if n * n <= 9 {
            &mut stack[..n * n]
        } else {
            heap = vec![0.0; n * n];
            &mut heap
        };
        self.base.jacobian(x, jac);
        for i in 0..n {
            for j in 0..n {
                dd[i * n + j] = (0..n).map(|k| jac[i * n + k] * d[k * n + j]).sum();
            }
        }
    }
}

/// `(φ_t(x0), Dφ_t(x0))`, with the Jacobian row-major.
pub fn flow_map_with_jacobian(
    field: &dyn VectorField,
    x0: &[f64],
    t: f64,
    opts: &IntegratorOptions,
) -> Result<(Vec<f64>, DMatrix<f64>), Failure> {
    let var = VariationalField::new(field).map_err(|error| Failure { error, last_time: 0.0 })?;
    let n = field.dim();
    let y = flow_to(&var, &var.initial_state(x0), t, opts)?;
    let d = DMatrix::from_row_slice(n, n, &y[n..]);
    Ok((y[..n].to_vec(), d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{example2d, FnField};
    use crate::system::tests::p_star;
    use crate::system::SuslovSystem;

    #[test]
    fn identity_at_time_zero() {
        let (x, d) = flow_map_with_jacobian(&example2d(), &[0.4, -0.2], 0.0, &IntegratorOptions::default()).unwrap();
        assert_eq!(x, vec![0.4, -0.2]);
        assert_eq!(d, DMatrix::identity(2, 2));
    }

    #[test]
    fn linear_fundamental_matrix() {
        for t in [0.5, 1.0, -0.7] {
            let (_, d) = flow_map_with_jacobian(&example2d(), &[1.3, 0.2], t, &IntegratorOptions::default()).unwrap();
            assert!((d[(0, 0)] - (-t).exp()).abs() < 1e-9);
            assert!((d[(1, 1)] / (2.0 * t).exp() - 1.0).abs() < 1e-9);
            assert!(d[(0, 1)].abs() < 1e-15 && d[(1, 0)].abs() < 1e-15);
            assert!((d.determinant() / t.exp() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn euler_case_preserves_volume() {
        let sys = SuslovSystem::new(p_star(0.0, 0.0));
        let (_, d) = flow_map_with_jacobian(&sys, &[0.6, -0.4, 0.9], 50.0, &IntegratorOptions::default()).unwrap();
        assert!((d.determinant() - 1.0).abs() < 1e-8, "{}", d.determinant());
    }

    #[test]
    fn jacobian_matches_finite_difference_of_flow() {
        let sys = SuslovSystem::new(p_star(1.0, 1.0));
        let opts = IntegratorOptions::default();
        let x0 = [0.3, -0.5, 0.8];
        let (_, d) = flow_map_with_jacobian(&sys, &x0, 2.0, &opts).unwrap();
        for j in 0..3 {
            let h = 1e-5;
            let mut xp = x0;
            xp[j] += h;
            let mut xm = x0;
            xm[j] -= h;
            let fp = flow_to(&sys, &xp, 2.0, &opts).unwrap();
            let fm = flow_to(&sys, &xm, 2.0, &opts).unwrap();
            for i in 0..3 {
                assert!(((fp[i] - fm[i]) / (2.0 * h) - d[(i, j)]).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn requires_jacobian() {
        let f = FnField::new(1, |x: &[f64], out: &mut [f64]| out[0] = x[0]);
        let err = flow_map_with_jacobian(&f, &[1.0], 1.0, &IntegratorOptions::default()).unwrap_err();
        assert_eq!(err.error, IntegrationError::MissingJacobian);
    }
}
