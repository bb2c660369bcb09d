//! The reduced carrier-plus-rotor system `K_a Ω' = (B_a Ω) × Ω`.
//!
//! Parameters are normalized once so that the forbidden-rotation vector has
//! `a3 = 1`; every formula below assumes that normalization.

use std::path::Path;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::SuslovError;
use crate::fields::VectorField;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Absolute margin used when checking the strict inertia inequalities.
pub const ORDERING_MARGIN: f64 = 1e-12;

/// Raw, unvalidated parameters as they appear in a parameter file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsInput {
    #[serde(rename = "I1")]
    pub i1: f64,
    #[serde(rename = "I2")]
    pub i2: f64,
    #[serde(rename = "I3")]
    pub i3: f64,
    #[serde(rename = "K1")]
    pub k1: f64,
    #[serde(rename = "K3")]
    pub k3: f64,
    pub a1: f64,
    pub a2: f64,
    #[serde(default = "one")]
    pub a3: f64,
}

fn one() -> f64 {
    1.0
}

impl ParamsInput {
    pub fn new(inertia: [f64; 3], k1: f64, k3: f64, a: [f64; 3]) -> Self {
        Self {
            i1: inertia[0],
            i2: inertia[1],
            i3: inertia[2],
            k1,
            k3,
            a1: a[0],
            a2: a[1],
            a3: a[2],
        }
    }
}

/// Validated parameters with `a3 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuslovParams {
    #[serde(rename = "I1")]
    pub i1: f64,
    #[serde(rename = "I2")]
    pub i2: f64,
    #[serde(rename = "I3")]
    pub i3: f64,
    #[serde(rename = "K1")]
    pub k1: f64,
    #[serde(rename = "K3")]
    pub k3: f64,
    pub a1: f64,
    pub a2: f64,
}

/// Checks the physical constraints and rescales `a` so that `a3 = 1`.
pub fn validate(input: &ParamsInput) -> Result<SuslovParams, SuslovError> {
    let named = [
        ("I1", input.i1),
        ("I2", input.i2),
        ("I3", input.i3),
        ("K1", input.k1),
        ("K3", input.k3),
        ("a1", input.a1),
        ("a2", input.a2),
        ("a3", input.a3),
    ];
    if let Some((name, _)) = named.iter().find(|(_, v)| !v.is_finite()) {
        return Err(SuslovError::NonFinite(name));
    }
    let ordered =
        input.i3 > ORDERING_MARGIN && input.i2 - input.i3 > ORDERING_MARGIN && input.i1 - input.i2 > ORDERING_MARGIN;
    if !ordered {
        return Err(SuslovError::InertiaOrdering {
            i1: input.i1,
            i2: input.i2,
            i3: input.i3,
        });
    }
    if input.k3 <= 0.0 || input.k1 < 0.0 {
        return Err(SuslovError::RotorMoments {
            k1: input.k1,
            k3: input.k3,
        });
    }
    if input.a3 == 0.0 {
        return Err(SuslovError::ZeroAxialComponent);
    }
    Ok(SuslovParams {
        i1: input.i1,
        i2: input.i2,
        i3: input.i3,
        k1: input.k1,
        k3: input.k3,
        a1: input.a1 / input.a3,
        a2: input.a2 / input.a3,
    })
}

/// Reads a JSON parameter file (keys `I1,I2,I3,K1,K3,a1,a2,a3`) and validates it.
pub fn load_params(path: impl AsRef<Path>) -> Result<SuslovParams, ParamsFileError> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| ParamsFileError::Io(path.display().to_string(), e.to_string()))?;
    parse_params(&text)
}

pub fn parse_params(text: &str) -> Result<SuslovParams, ParamsFileError> {
    let input: ParamsInput = serde_json::from_str(text).map_err(|e| ParamsFileError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(validate(&input)?)
}

#[derive(Debug, thiserror::Error)]
pub enum ParamsFileError {
    #[error("cannot read {0}: {1}")]
    Io(String, String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Invalid(#[from] SuslovError),
}

impl SuslovParams {
    /// Shorthand for `validate(&ParamsInput::new(..))`.
    pub fn new(inertia: [f64; 3], k1: f64, k3: f64, a: [f64; 3]) -> Result<Self, SuslovError> {
        validate(&ParamsInput::new(inertia, k1, k3, a))
    }

    /// Effective moments `(λ1, λ2, λ3) = (I1 + K1, I2 + K1, I3)`.
    pub fn lambdas(&self) -> [f64; 3] {
        [self.i1 + self.k1, self.i2 + self.k1, self.i3]
    }

    /// Forbidden-rotation vector `(a1, a2, 1)`.
    pub fn a(&self) -> Vec3 {
        Vec3::new(self.a1, self.a2, 1.0)
    }

    /// Same inertia with a different forbidden-rotation vector.
    pub fn with_a(&self, a1: f64, a2: f64) -> Self {
        Self { a1, a2, ..*self }
    }

    pub fn input(&self) -> ParamsInput {
        ParamsInput::new([self.i1, self.i2, self.i3], self.k1, self.k3, [self.a1, self.a2, 1.0])
    }
}

/// `K_a`, `B_a`, `K_a^{-1}` and `det K_a` for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemMatrices {
    pub ka: Mat3,
    pub ba: Mat3,
    pub ka_inv: Mat3,
    pub det_ka: f64,
}

pub fn matrices(p: &SuslovParams) -> SystemMatrices {
    let [l1, l2, l3] = p.lambdas();
    let (a1, a2, k3) = (p.a1, p.a2, p.k3);
    let k11 = l1 + a1 * a1 * k3;
    let k12 = a1 * a2 * k3;
    let k22 = l2 + a2 * a2 * k3;
    #[rustfmt::skip]
    let ka = Mat3::new(
        k11, k12, 0.0,
        k12, k22, 0.0,
        0.0, 0.0, l3,
    );
    #[rustfmt::skip]
    let ba = Mat3::new(
        l1,       0.0,      0.0,
        0.0,      l2,       0.0,
        -a1 * k3, -a2 * k3, l3,
    );
    // 2x2 upper block plus the decoupled λ3 entry
    let det_block = k11 * k22 - k12 * k12;
    #[rustfmt::skip]
    let ka_inv = Mat3::new(
        k22 / det_block,  -k12 / det_block, 0.0,
        -k12 / det_block, k11 / det_block,  0.0,
        0.0,              0.0,              1.0 / l3,
    );
    SystemMatrices {
        ka,
        ba,
        ka_inv,
        det_ka: det_block * l3,
    }
}

/// `hat(v) w = v × w`.
pub fn hat(v: &Vec3) -> Mat3 {
    #[rustfmt::skip]
    let m = Mat3::new(
        0.0,  -v.z, v.y,
        v.z,  0.0,  -v.x,
        -v.y, v.x,  0.0,
    );
    m
}

/// The reduced Suslov vector field `X(Ω) = K_a^{-1}((B_a Ω) × Ω)` with its
/// parameters and precomputed matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuslovSystem {
    pub params: SuslovParams,
    pub m: SystemMatrices,
}

pub fn vector_field(params: &SuslovParams) -> SuslovSystem {
    SuslovSystem::new(*params)
}

impl SuslovSystem {
    pub fn new(params: SuslovParams) -> Self {
        Self {
            params,
            m: matrices(&params),
        }
    }

    pub fn field(&self, omega: &Vec3) -> Vec3 {
        self.m.ka_inv * (self.m.ba * omega).cross(omega)
    }

    /// `J(Ω) = K_a^{-1} (hat(B_a Ω) - hat(Ω) B_a)`.
    pub fn jacobian_matrix(&self, omega: &Vec3) -> Mat3 {
        self.m.ka_inv * (hat(&(self.m.ba * omega)) - hat(omega) * self.m.ba)
    }

    /// `E(Ω) = ½ <K_a Ω, Ω>`.
    pub fn energy(&self, omega: &Vec3) -> f64 {
        0.5 * omega.dot(&(self.m.ka * omega))
    }

    /// Constraint reaction `ζ = K3 (Ω3' - <a, Ω'>)` evaluated along the field.
    pub fn multiplier_zeta(&self, omega: &Vec3) -> f64 {
        let d = self.field(omega);
        self.params.k3 * (d.z - self.params.a().dot(&d))
    }

    /// Closed-form divergence of the field.
    pub fn divergence_analytic(&self, omega: &Vec3) -> f64 {
        let [l1, l2, l3] = self.params.lambdas();
        let (a1, a2) = (self.params.a1, self.params.a2);
        l3 * self.params.k3 / self.m.det_ka * (-a2 * l1 * omega.x + a1 * l2 * omega.y + a1 * a2 * (l1 - l2) * omega.z)
    }
}

pub fn energy(params: &SuslovParams, omega: &Vec3) -> f64 {
    SuslovSystem::new(*params).energy(omega)
}

pub fn multiplier_zeta(params: &SuslovParams, omega: &Vec3) -> f64 {
    SuslovSystem::new(*params).multiplier_zeta(omega)
}

pub fn divergence_analytic(params: &SuslovParams, omega: &Vec3) -> f64 {
    SuslovSystem::new(*params).divergence_analytic(omega)
}

impl VectorField for SuslovSystem {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, x: &[f64], out: &mut [f64]) {
        let v = self.field(&Vec3::new(x[0], x[1], x[2]));
        out.copy_from_slice(v.as_slice());
    }
    fn has_jacobian(&self) -> bool {
        true
    }
    fn jacobian(&self, x: &[f64], jac: &mut [f64]) -> bool {
        let j = self.jacobian_matrix(&Vec3::new(x[0], x[1], x[2]));
        for r in 0..3 {
            for c in 0..3 {
                jac[r * 3 + c] = j[(r, c)];
            }
        }
        true
    }
}
