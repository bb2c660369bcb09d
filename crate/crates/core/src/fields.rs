//! Autonomous vector fields and candidate invariant densities.
//!
//! Everything downstream (integration, PDE residuals, transport checks,
//! attractor probes) works against the [`VectorField`] and [`Density`]
//! traits, so the Suslov field and the small planar and scalar fixtures
//! below can be exercised by the same machinery.

use serde::Serialize;

/// An autonomous vector field `x' = X(x)` on `R^dim`.
pub trait VectorField: Send + Sync {
    fn dim(&self) -> usize;

    /// Writes `X(x)` into `out`.
    fn eval(&self, x: &[f64], out: &mut [f64]);

    fn has_jacobian(&self) -> bool {
        false
    }

    /// Writes the row-major Jacobian `dX_i/dx_j` into `jac` (length `dim*dim`).
    /// Returns `false` when no analytic Jacobian is available.
    fn jacobian(&self, _x: &[f64], _jac: &mut [f64]) -> bool {
        false
    }

    fn eval_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.eval(x, &mut out);
        out
    }

    fn jacobian_vec(&self, x: &[f64]) -> Option<Vec<f64>> {
        let n = self.dim();
        let mut jac = vec![0.0; n * n];
        self.jacobian(x, &mut jac).then_some(jac)
    }
}

impl<T: VectorField + ?Sized> VectorField for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64], out: &mut [f64]) {
        (**self).eval(x, out)
    }
    fn has_jacobian(&self) -> bool {
        (**self).has_jacobian()
    }
    fn jacobian(&self, x: &[f64], jac: &mut [f64]) -> bool {
        (**self).jacobian(x, jac)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DifferentiabilityClass {
    C1,
    MeasurableOnly,
}

/// A candidate invariant density `M`.
pub trait Density: Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, x: &[f64]) -> f64;

    fn zero_set_description(&self) -> &str;

    fn differentiability_class(&self) -> DifferentiabilityClass;

    /// Euclidean distance from `x` to the declared zero set, if the set is one
    /// where derivatives of `M` become unreliable. `None` means no such set.
    fn zero_set_distance(&self, _x: &[f64]) -> Option<f64> {
        None
    }

    /// Writes `∇M(x)` into `out`; returns false if no analytic gradient exists.
    fn gradient(&self, _x: &[f64], _out: &mut [f64]) -> bool {
        false
    }
}

impl<T: Density + ?Sized> Density for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (**self).eval(x)
    }
    fn zero_set_description(&self) -> &str {
        (**self).zero_set_description()
    }
    fn differentiability_class(&self) -> DifferentiabilityClass {
        (**self).differentiability_class()
    }
    fn zero_set_distance(&self, x: &[f64]) -> Option<f64> {
        (**self).zero_set_distance(x)
    }
    fn gradient(&self, x: &[f64], out: &mut [f64]) -> bool {
        (**self).gradient(x, out)
    }
}

/// Central-difference step for coordinate value `xi`: `cbrt(eps) * max(1, |xi|)`.
pub fn fd_step(xi: f64) -> f64 {
    f64::EPSILON.cbrt() * xi.abs().max(1.0)
}

/// Row-major central-difference Jacobian of `field` at `x`.
pub fn finite_difference_jacobian<F: VectorField + ?Sized>(field: &F, x: &[f64]) -> Vec<f64> {
    let n = field.dim();
    let mut jac = vec![0.0; n * n];
    let mut xp = x.to_vec();
    let mut fp = vec![0.0; n];
    let mut fm = vec![0.0; n];
    for j in 0..n {
        let h = fd_step(x[j]);
        xp[j] = x[j] + h;
        field.eval(&xp, &mut fp);
        xp[j] = x[j] - h;
        field.eval(&xp, &mut fm);
        xp[j] = x[j];
        // actual spacing after rounding
        let width = (x[j] + h) - (x[j] - h);
        for i in 0..n {
            jac[i * n + j] = (fp[i] - fm[i]) / width;
        }
    }
    jac
}

/// Central-difference gradient of a scalar function.
pub fn finite_difference_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|j| {
            let h = fd_step(x[j]);
            xp[j] = x[j] + h;
            let fp = f(&xp);
            xp[j] = x[j] - h;
            let fm = f(&xp);
            xp[j] = x[j];
            (fp - fm) / ((x[j] + h) - (x[j] - h))
        })
        .collect()
}

/// Largest entrywise deviation between the analytic and finite-difference
/// Jacobians, relative to the larger of the two Jacobian max-norms (floored at 1).
///
/// Returns `None` when the field has no analytic Jacobian.
pub fn jacobian_fd_deviation<F: VectorField + ?Sized>(field: &F, x: &[f64]) -> Option<f64> {
    let analytic = field.jacobian_vec(x)?;
    let numeric = finite_difference_jacobian(field, x);
    let scale = analytic
        .iter()
        .chain(numeric.iter())
        .fold(1.0_f64, |m, v| m.max(v.abs()));
    let dev = analytic
        .iter()
        .zip(&numeric)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    Some(dev / scale)
}

/// A field given by closures, handy for fixtures and tests.
pub struct FnField<F, J = fn(&[f64], &mut [f64])> {
    dim: usize,
    f: F,
    jac: Option<J>,
}

impl<F> FnField<F>
where
    F: Fn(&[f64], &mut [f64]) + Send + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f, jac: None }
    }
}

impl<F, J> FnField<F, J>
where
    F: Fn(&[f64], &mut [f64]) + Send + Sync,
    J: Fn(&[f64], &mut [f64]) + Send + Sync,
{
    pub fn with_jacobian(dim: usize, f: F, jac: J) -> Self {
        Self { dim, f, jac: Some(jac) }
    }
}

impl<F, J> VectorField for FnField<F, J>
where
    F: Fn(&[f64], &mut [f64]) + Send + Sync,
    J: Fn(&[f64], &mut [f64]) + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, x: &[f64], out: &mut [f64]) {
        (self.f)(x, out)
    }
    fn has_jacobian(&self) -> bool {
        self.jac.is_some()
    }
    fn jacobian(&self, x: &[f64], jac: &mut [f64]) -> bool {
        match &self.jac {
            Some(j) => {
                j(x, jac);
                true
            }
            None => false,
        }
    }
}

/// The planar saddle `x1' = -x1, x2' = 2 x2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Example2d;

/// Returns the planar linear saddle fixture.
pub fn example2d() -> Example2d {
    Example2d
}

impl VectorField for Example2d {
    fn dim(&self) -> usize {
        2
    }
    fn eval(&self, x: &[f64], out: &mut [f64]) {
        out[0] = -x[0];
        out[1] = 2.0 * x[1];
    }
    fn has_jacobian(&self) -> bool {
        true
    }
    fn jacobian(&self, _x: &[f64], jac: &mut [f64]) -> bool {
        jac.copy_from_slice(&[-1.0, 0.0, 0.0, 2.0]);
        true
    }
}

/// `M(x1, x2) = |x1|^5 x2^2`, stationary for [`Example2d`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Example2dDensity;

pub fn example2d_density() -> Example2dDensity {
    Example2dDensity
}

impl Density for Example2dDensity {
    fn dim(&self) -> usize {
        2
    }
    fn eval(&self, x: &[f64]) -> f64 {
        x[0].abs().powi(5) * x[1] * x[1]
    }
    fn zero_set_description(&self) -> &str {
        "coordinate axes x1 = 0 and x2 = 0"
    }
    fn differentiability_class(&self) -> DifferentiabilityClass {
        DifferentiabilityClass::C1
    }
    // M is C^4 across the axes, so no exclusion is needed.
}

/// The scalar field `x' = sin^2(x)`; every multiple of pi is a one-sided attractor.
#[derive(Debug, Clone, Copy, Default)]
pub struct Example1d;

pub fn example1d() -> Example1d {
    Example1d
}

impl VectorField for Example1d {
    fn dim(&self) -> usize {
        1
    }
    fn eval(&self, x: &[f64], out: &mut [f64]) {
        let s = x[0].sin();
        out[0] = s * s;
    }
    fn has_jacobian(&self) -> bool {
        true
    }
    fn jacobian(&self, x: &[f64], jac: &mut [f64]) -> bool {
        jac[0] = (2.0 * x[0]).sin();
        true
    }
}

/// Lebesgue measure, `M = 1`.
#[derive(Debug, Clone, Copy)]
pub struct UnitDensity {
    pub dim: usize,
}

impl Density for UnitDensity {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, _x: &[f64]) -> f64 {
        1.0
    }
    fn zero_set_description(&self) -> &str {
        "empty"
    }
    fn differentiability_class(&self) -> DifferentiabilityClass {
        DifferentiabilityClass::C1
    }
}

/// A density given by a closure.
pub struct FnDensity<F> {
    dim: usize,
    f: F,
    description: String,
    class: DifferentiabilityClass,
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> FnDensity<F> {
    pub fn new(dim: usize, f: F, description: impl Into<String>, class: DifferentiabilityClass) -> Self {
        Self {
            dim,
            f,
            description: description.into(),
            class,
        }
    }
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> Density for FnDensity<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
    fn zero_set_description(&self) -> &str {
        &self.description
    }
    fn differentiability_class(&self) -> DifferentiabilityClass {
        self.class
    }
}
