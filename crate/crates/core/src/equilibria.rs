//! Relative equilibria: the eigenlines `V_i` of `B_a`, their linearization
//! and the `(α, β)` sign classification on constant-energy ellipsoids.

use serde::Serialize;

use crate::error::SuslovError;
use crate::system::{Mat3, SuslovParams, SuslovSystem, Vec3};

/// Relative tolerance for the vanishing constant term of `det(z K_a - G)`.
pub const CONSTANT_TERM_TOL: f64 = 1e-10;
/// Relative tolerance under which `α` (or `β`) is treated as zero.
pub const ZERO_COEFF_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Classification {
    Saddle,
    LinearCenterPair,
    /// `source_sign = +1` means `v_i` is the source and `-v_i` the sink.
    SourceSinkPair {
        source_sign: i8,
        sink_sign: i8,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumReport {
    pub index: usize,
    pub lambda: f64,
    pub direction: [f64; 3],
    pub alpha: f64,
    pub beta: f64,
    pub classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annotation: Option<String>,
}

/// Representatives `v1 = (λ3-λ1, 0, a1 K3)`, `v2 = (0, λ3-λ2, a2 K3)`, `v3 = (0, 0, 1)`.
pub fn equilibrium_directions(params: &SuslovParams) -> [Vec3; 3] {
    let [l1, l2, l3] = params.lambdas();
    let dirs = [
        Vec3::new(l3 - l1, 0.0, params.a1 * params.k3),
        Vec3::new(0.0, l3 - l2, params.a2 * params.k3),
        Vec3::new(0.0, 0.0, 1.0),
    ];
    debug_assert!({
        let sys = SuslovSystem::new(*params);
        dirs.iter()
            .all(|v| sys.field(v).norm() <= 1e-12 * (1.0 + v.norm_squared()) * params.lambdas()[0])
    });
    dirs
}

/// Returns `sign * c * v` with `c > 0` chosen so that the energy equals `eta`.
pub fn scale_to_ellipsoid(params: &SuslovParams, v: &Vec3, eta: f64, sign: f64) -> Result<Vec3, SuslovError> {
    if v.norm() == 0.0 {
        return Err(SuslovError::ZeroVector);
    }
    if eta.is_nan() || eta <= 0.0 {
        return Err(SuslovError::NonPositiveEnergy(eta));
    }
    let e = SuslovSystem::new(*params).energy(v);
    let c = (eta / e).sqrt();
    Ok(v * (c * sign.signum()))
}

/// Index `i` (0-based) of the eigenvalue of `B_a` with eigenvector `v`.
fn eigen_index(params: &SuslovParams, sys: &SuslovSystem, v: &Vec3) -> Result<usize, SuslovError> {
    if v.norm() == 0.0 {
        return Err(SuslovError::ZeroVector);
    }
    let bv = sys.m.ba * v;
    let lambdas = params.lambdas();
    let (idx, residual) = lambdas
        .iter()
        .enumerate()
        .map(|(i, l)| (i, (bv - v * *l).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("three eigenvalues");
    let scale = sys.m.ba.norm() * v.norm();
    if residual > 1e-10 * scale {
        return Err(SuslovError::NotAnEquilibrium(residual / scale));
    }
    Ok(idx)
}

/// `G_v` with columns `(b_j - λ_i e_j) × v`, so that `K_a δ' = G_v δ`.
pub fn linearization(params: &SuslovParams, v: &Vec3) -> Result<Mat3, SuslovError> {
    let sys = SuslovSystem::new(*params);
    let i = eigen_index(params, &sys, v)?;
    Ok(linearization_at(&sys.m.ba, params.lambdas()[i], v))
}

fn linearization_at(ba: &Mat3, lambda: f64, v: &Vec3) -> Mat3 {
    let shifted = ba - Mat3::identity() * lambda;
    let mut g = Mat3::zeros();
    for j in 0..3 {
        g.set_column(j, &shifted.column(j).into_owned().cross(v));
    }
    g
}

/// Monomial coefficients `[c0, c1, c2, c3]` of `p(z) = det(z K - G)`.
///
/// The cubic is sampled at `z = s * {-1, 0, 1, 2}` and interpolated exactly;
/// `s` balances the magnitudes of `K` and `G`.
pub fn characteristic_coefficients(k: &Mat3, g: &Mat3) -> [f64; 4] {
    let s = if g.norm() > 0.0 { g.norm() / k.norm() } else { 1.0 };
    let p = |t: f64| (k * (s * t) - g).determinant();
    let (ym, y0, y1, y2) = (p(-1.0), p(0.0), p(1.0), p(2.0));
    let d0 = y0;
    let d2 = 0.5 * (y1 + ym - 2.0 * y0);
    let odd = 0.5 * (y1 - ym);
    let d3 = (y2 - y0 - 4.0 * d2 - 2.0 * odd) / 6.0;
    let d1 = odd - d3;
    [d0, d1 / s, d2 / (s * s), d3 / (s * s * s)]
}

/// `(α, β)` from `det(z K_a - G_{v_i}) = det(K_a) z^3 + α z^2 + β z` at the
/// representative `v_i` of [`equilibrium_directions`]. `index` is 1-based.
pub fn stability_coefficients(params: &SuslovParams, index: usize) -> Result<(f64, f64), SuslovError> {
    if !(1..=3).contains(&index) {
        return Err(SuslovError::BadIndex(index));
    }
    let v = equilibrium_directions(params)[index - 1];
    coefficients_at(params, index, &v)
}

fn coefficients_at(params: &SuslovParams, index: usize, v: &Vec3) -> Result<(f64, f64), SuslovError> {
    let sys = SuslovSystem::new(*params);
    let g = linearization_at(&sys.m.ba, params.lambdas()[index - 1], v);
    let [c0, c1, c2, _] = characteristic_coefficients(&sys.m.ka, &g);
    let scale = g.norm().powi(3).max(f64::MIN_POSITIVE);
    if c0.abs() > CONSTANT_TERM_TOL * scale {
        return Err(SuslovError::NonzeroConstantTerm { constant: c0, scale });
    }
    Ok((c2, c1))
}

/// Natural magnitudes of `α` and `β`: `|K|^2 |G|` and `|K| |G|^2` (Frobenius norms).
fn coefficient_scales(ka: &Mat3, g: &Mat3) -> (f64, f64) {
    let (k, gn) = (ka.norm(), g.norm());
    (k * k * gn, k * gn * gn)
}

/// Sign classification of the pair `±v_i` on its energy ellipsoid.
pub fn classify(params: &SuslovParams, index: usize) -> Result<EquilibriumReport, SuslovError> {
    if !(1..=3).contains(&index) {
        return Err(SuslovError::BadIndex(index));
    }
    let v = equilibrium_directions(params)[index - 1];
    classify_at(params, index, &v)
}

/// Like [`classify`] but at an arbitrary nonzero point `v` of the line `V_index`.
pub fn classify_at(params: &SuslovParams, index: usize, v: &Vec3) -> Result<EquilibriumReport, SuslovError> {
    let sys = SuslovSystem::new(*params);
    let lambda = params.lambdas()[index - 1];
    if eigen_index(params, &sys, v)? != index - 1 {
        return Err(SuslovError::NotAnEquilibrium(f64::NAN));
    }
    let (alpha, beta) = coefficients_at(params, index, v)?;
    let g = linearization_at(&sys.m.ba, lambda, v);
    let (alpha_scale, beta_scale) = coefficient_scales(&sys.m.ka, &g);
    let classification = classify_signs(alpha, beta, alpha_scale, beta_scale)?;
    let annotation = match classification {
        Classification::LinearCenterPair => {
            let reversible = (index == 1 && params.a2 == 0.0) || (index == 3 && params.a1 * params.a2 == 0.0);
            reversible.then(|| "nonlinear center (reversible system, Poincaré center theorem)".to_string())
        }
        Classification::SourceSinkPair { .. } => {
            Some("reported at this representative; the antipode swaps source and sink".to_string())
        }
        Classification::Saddle => None,
    };
    Ok(EquilibriumReport {
        index,
        lambda,
        direction: [v.x, v.y, v.z],
        alpha,
        beta,
        classification,
        annotation,
    })
}

/// Lemma-style table: `β < 0` saddle; `β > 0` with `α = 0` centers, `α < 0`
/// source at `+v`, `α > 0` sink at `+v`.
pub fn classify_signs(alpha: f64, beta: f64, alpha_scale: f64, beta_scale: f64) -> Result<Classification, SuslovError> {
    if beta.abs() <= ZERO_COEFF_TOL * beta_scale {
        return Err(SuslovError::DegenerateBeta(beta));
    }
    if beta < 0.0 {
        return Ok(Classification::Saddle);
    }
    if alpha.abs() <= ZERO_COEFF_TOL * alpha_scale {
        Ok(Classification::LinearCenterPair)
    } else if alpha < 0.0 {
        Ok(Classification::SourceSinkPair {
            source_sign: 1,
            sink_sign: -1,
        })
    } else {
        Ok(Classification::SourceSinkPair {
            source_sign: -1,
            sink_sign: 1,
        })
    }
}

/// Reports for `i = 1, 2, 3`.
pub fn stability_table(params: &SuslovParams) -> Result<Vec<EquilibriumReport>, SuslovError> {
    (1..=3).map(|i| classify(params, i)).collect()
}
