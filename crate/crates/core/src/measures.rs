//! Invariant measures: the stationarity residual `div(M X)`, existence
//! predicates, and the explicit density vanishing on the invariant planes
//! `Ω1 = ξ± Ω3` when `a2 = 0`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::SuslovError;
use crate::fields::{fd_step, Density, DifferentiabilityClass, VectorField};
use crate::system::{SuslovParams, SuslovSystem, Vec3};

/// Points closer than this many finite-difference steps to a declared zero set
/// are skipped by residual sweeps.
pub const EXCLUSION_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassADensityParams {
    #[serde(rename = "R")]
    pub r: f64,
    pub xi_plus: f64,
    pub xi_minus: f64,
    pub gamma: f64,
    pub n: u32,
}

/// A C^1 positive invariant density exists iff `a1 = a2 = 0`.
pub fn positive_c1_measure_exists(params: &SuslovParams) -> bool {
    params.a1 == 0.0 && params.a2 == 0.0
}

/// A class-A invariant density exists iff `a2 = 0`.
pub fn class_a_measure_exists(params: &SuslovParams) -> bool {
    params.a2 == 0.0
}

/// `R`, `ξ±`, `γ` and the smallest odd `n` with `n - 1 >= 1` and `nγ - 1 >= 1`.
pub fn density_params(params: &SuslovParams) -> Result<ClassADensityParams, SuslovError> {
    if params.a2 != 0.0 {
        return Err(SuslovError::NonzeroA2(params.a2));
    }
    let [l1, l2, l3] = params.lambdas();
    let (a1, k3) = (params.a1, params.k3);
    assert!(l1 > l2, "strict inertia ordering guarantees λ1 > λ2");
    let b = a1 * k3 * l3;
    let k11 = l1 + a1 * a1 * k3;
    let r = (b * b + 4.0 * k11 * l3 * (l1 - l2) * (l2 - l3)).sqrt();
    let denom = 2.0 * (l1 - l2) * k11;
    let gamma = (r - b) / (r + b);
    let mut n = 3u32;
    while f64::from(n) * gamma - 1.0 < 1.0 {
        n += 2;
    }
    Ok(ClassADensityParams {
        r,
        xi_plus: (b + r) / denom,
        xi_minus: (b - r) / denom,
        gamma,
        n,
    })
}

impl ClassADensityParams {
    /// Euclidean distances from `Ω` to the planes `π+` and `π-`.
    pub fn plane_distances(&self, omega: &Vec3) -> (f64, f64) {
        let d = |xi: f64| (omega.x - xi * omega.z).abs() / (1.0 + xi * xi).sqrt();
        (d(self.xi_plus), d(self.xi_minus))
    }
}

/// `M(Ω) = (Ω1 - ξ+ Ω3)^(n-1) |Ω1 - ξ- Ω3|^(nγ-1)`.
pub fn density_m(dp: &ClassADensityParams, omega: &Vec3) -> f64 {
    let up = omega.x - dp.xi_plus * omega.z;
    let um = omega.x - dp.xi_minus * omega.z;
    if up == 0.0 || um == 0.0 {
        return 0.0;
    }
    up.powi(dp.n as i32 - 1) * um.abs().powf(f64::from(dp.n) * dp.gamma - 1.0)
}

/// `F(Ω) = (Ω1 - ξ+ Ω3) |Ω1 - ξ- Ω3|^γ`.
pub fn first_integral_f(dp: &ClassADensityParams, omega: &Vec3) -> f64 {
    let up = omega.x - dp.xi_plus * omega.z;
    let um = omega.x - dp.xi_minus * omega.z;
    up * um.abs().powf(dp.gamma)
}

/// Rate of change of `Ω1 - ξ Ω3` at a point of `π+` or `π-`.
pub fn plane_invariance_defect(
    params: &SuslovParams,
    dp: &ClassADensityParams,
    omega: &Vec3,
) -> Result<f64, SuslovError> {
    if params.a2 != 0.0 {
        return Err(SuslovError::NonzeroA2(params.a2));
    }
    let tol = 1e-12 * omega.norm() * (1.0 + dp.xi_plus.abs().max(dp.xi_minus.abs()));
    let on = |xi: f64| (omega.x - xi * omega.z).abs();
    let xi = if on(dp.xi_plus) <= tol {
        dp.xi_plus
    } else if on(dp.xi_minus) <= tol {
        dp.xi_minus
    } else {
        return Err(SuslovError::OffPlane(on(dp.xi_plus).min(on(dp.xi_minus))));
    };
    let x = SuslovSystem::new(*params).field(omega);
    Ok((x.x - xi * x.z).abs())
}

/// The class-A density, optionally multiplied by an even power of `F`.
#[derive(Debug, Clone, Copy)]
pub struct ClassADensity {
    pub dp: ClassADensityParams,
    f_power: u32,
}

impl ClassADensity {
    pub fn new(params: &SuslovParams) -> Result<Self, SuslovError> {
        Ok(Self {
            dp: density_params(params)?,
            f_power: 0,
        })
    }

    /// `M F^k`; `k` must be even to keep the density nonnegative.
    pub fn times_first_integral_power(mut self, k: u32) -> Self {
        assert!(k.is_multiple_of(2), "odd powers of F change sign across π+");
        self.f_power = k;
        self
    }
}

impl Density for ClassADensity {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, x: &[f64]) -> f64 {
        let w = Vec3::new(x[0], x[1], x[2]);
        let m = density_m(&self.dp, &w);
        if self.f_power == 0 {
            m
        } else {
            m * first_integral_f(&self.dp, &w).powi(self.f_power as i32)
        }
    }
    fn zero_set_description(&self) -> &str {
        "planes Ω1 = ξ+ Ω3 and Ω1 = ξ- Ω3"
    }
    fn differentiability_class(&self) -> DifferentiabilityClass {
        DifferentiabilityClass::C1
    }
    fn zero_set_distance(&self, x: &[f64]) -> Option<f64> {
        let (dp, dm) = self.dp.plane_distances(&Vec3::new(x[0], x[1], x[2]));
        Some(dp.min(dm))
    }
    fn gradient(&self, x: &[f64], out: &mut [f64]) -> bool {
        let w = Vec3::new(x[0], x[1], x[2]);
        let dp = &self.dp;
        let up = w.x - dp.xi_plus * w.z;
        let um = w.x - dp.xi_minus * w.z;
        out[..3].fill(0.0);
        if up == 0.0 || um == 0.0 {
            return true;
        }
        // ∇M = M ∇log M, with log M = p+ log|u+| + p- log|u-|
        let k = f64::from(self.f_power);
        let pp = f64::from(dp.n) - 1.0 + k;
        let pm = (f64::from(dp.n) + k) * dp.gamma - 1.0;
        let m = self.eval(x);
        let (cp, cm) = (m * pp / up, m * pm / um);
        out[0] = cp + cm;
        out[2] = -(cp * dp.xi_plus + cm * dp.xi_minus);
        true
    }
}

/// `div(M X)` at one point together with the magnitude of the terms summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdeResidual {
    pub value: f64,
    pub scale: f64,
}

impl PdeResidual {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.value.abs() / self.scale
        } else {
            self.value.abs()
        }
    }
}

/// Richardson-extrapolated central difference of `f` along coordinate `j`.
fn density_partial(density: &dyn Density, x: &[f64], j: usize, buf: &mut [f64]) -> f64 {
    let h = fd_step(x[j]);
    let mut central = |h: f64| {
        buf[j] = x[j] + h;
        let fp = density.eval(buf);
        buf[j] = x[j] - h;
        let fm = density.eval(buf);
        buf[j] = x[j];
        (fp - fm) / ((x[j] + h) - (x[j] - h))
    };
    let coarse = central(h);
    let fine = central(0.5 * h);
    (4.0 * fine - coarse) / 3.0
}

/// `Σ_i ∂(M X_i)/∂x_i` at `x`.
///
/// With an analytic Jacobian the product rule `X·∇M + M div X` is used, with
/// `∇M` analytic when the density provides it and differenced otherwise.
/// Without a Jacobian each product `M X_i` is differenced.
pub fn pde_residual_detail(field: &dyn VectorField, density: &dyn Density, x: &[f64]) -> PdeResidual {
    let n = field.dim();
    let mut buf = x.to_vec();
    let m = density.eval(x);
    let mut jac = vec![0.0; n * n];
    if field.jacobian(x, &mut jac) {
        let mut xv = vec![0.0; n];
        field.eval(x, &mut xv);
        let mut grad = vec![0.0; n];
        if !density.gradient(x, &mut grad) {
            for (i, g) in grad.iter_mut().enumerate() {
                *g = density_partial(density, x, i, &mut buf);
            }
        }
        let (mut value, mut scale) = (0.0, 0.0);
        for i in 0..n {
            let transport = xv[i] * grad[i];
            let source = m * jac[i * n + i];
            value += transport + source;
            scale += transport.abs() + source.abs();
        }
        PdeResidual { value, scale }
    } else {
        let mut fp = vec![0.0; n];
        let mut fm = vec![0.0; n];
        let (mut value, mut scale) = (0.0, 0.0);
        for i in 0..n {
            let h = fd_step(x[i]);
            buf[i] = x[i] + h;
            field.eval(&buf, &mut fp);
            let mp = density.eval(&buf);
            buf[i] = x[i] - h;
            field.eval(&buf, &mut fm);
            let mm = density.eval(&buf);
            buf[i] = x[i];
            let d = (mp * fp[i] - mm * fm[i]) / ((x[i] + h) - (x[i] - h));
            value += d;
            scale += d.abs();
        }
        PdeResidual { value, scale }
    }
}

/// Signed residual `div(M X)(x)`; NaN propagates.
pub fn pde_residual(field: &dyn VectorField, density: &dyn Density, x: &[f64]) -> f64 {
    pde_residual_detail(field, density, x).value
}

/// Exclusion radius around a density's zero set at `x`.
pub fn exclusion_radius(x: &[f64]) -> f64 {
    let scale = x.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    EXCLUSION_FACTOR * fd_step(scale)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSweep {
    pub sample_count: usize,
    pub skipped: usize,
    /// Largest `|div(MX)| / scale` over checked points.
    pub max_residual: f64,
    pub tolerance: f64,
    pub exclusion_factor: f64,
    pub pass: bool,
}

/// Checks `|div(M X)| <= tol * scale` at every point not within the exclusion
/// radius of the density's zero set.
pub fn pde_residual_sweep(
    field: &dyn VectorField,
    density: &dyn Density,
    points: &[Vec<f64>],
    tolerance: f64,
) -> ResidualSweep {
    let results: Vec<Option<f64>> = points
        .par_iter()
        .map(|x| {
            if let Some(d) = density.zero_set_distance(x) {
                if d < exclusion_radius(x) {
                    return None;
                }
            }
            Some(pde_residual_detail(field, density, x).relative())
        })
        .collect();
    let checked: Vec<f64> = results.iter().flatten().copied().collect();
    let max_residual = checked.iter().fold(
        0.0_f64,
        |m, &v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) },
    );
    ResidualSweep {
        sample_count: checked.len(),
        skipped: points.len() - checked.len(),
        max_residual,
        tolerance,
        exclusion_factor: EXCLUSION_FACTOR,
        pass: !checked.is_empty() && max_residual <= tolerance,
    }
}

/// Largest `|div X|` over the points of a `res^3` grid on `[-1,1]^3` inside the unit ball.
pub fn max_divergence_on_unit_ball(params: &SuslovParams, res: usize) -> f64 {
    let sys = SuslovSystem::new(*params);
    let coord = |k: usize| -1.0 + 2.0 * k as f64 / (res - 1) as f64;
    let mut max = 0.0_f64;
    for i in 0..res {
        for j in 0..res {
            for k in 0..res {
                let w = Vec3::new(coord(i), coord(j), coord(k));
                if w.norm() <= 1.0 {
                    max = max.max(sys.divergence_analytic(&w).abs());
                }
            }
        }
    }
    max
}
