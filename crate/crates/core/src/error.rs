use thiserror::Error;

/// Errors raised while building or analysing a Suslov system.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SuslovError {
    #[error("inertia ordering violated: expected 0 < I3 < I2 < I1, got I = ({i1}, {i2}, {i3})")]
    InertiaOrdering { i1: f64, i2: f64, i3: f64 },
    #[error("rotor moments invalid: need K3 > 0 and K1 >= 0, got K1 = {k1}, K3 = {k3}")]
    RotorMoments { k1: f64, k3: f64 },
    #[error("a3 = 0 reduces to the classical Suslov problem and is not supported")]
    ZeroAxialComponent,
    #[error("non-finite parameter `{0}`")]
    NonFinite(&'static str),
    #[error("class-A density requires a2 = 0, got a2 = {0}")]
    NonzeroA2(f64),
    #[error("equilibrium index must be 1, 2 or 3, got {0}")]
    BadIndex(usize),
    #[error("vector is not an equilibrium direction (residual {0:e})")]
    NotAnEquilibrium(f64),
    #[error("zero vector cannot be scaled onto an energy ellipsoid")]
    ZeroVector,
    #[error("energy level must be positive, got {0}")]
    NonPositiveEnergy(f64),
    #[error("point is off the invariant plane (defect {0:e})")]
    OffPlane(f64),
    #[error("characteristic polynomial has a nonzero constant term {constant:e} (scale {scale:e})")]
    NonzeroConstantTerm { constant: f64, scale: f64 },
    #[error("trajectory was not produced by these parameters")]
    MismatchedParams,
    #[error("degenerate equilibrium: beta = {0:e} is zero within tolerance")]
    DegenerateBeta(f64),
}

/// Failures of the time integrator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrationError {
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("maximum number of steps ({max_steps}) exceeded at t = {t}")]
    TooManySteps { t: f64, max_steps: usize },
    #[error("non-finite state at t = {0}")]
    NonFinite(f64),
    #[error("state has dimension {got}, field expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("field has no analytic Jacobian")]
    MissingJacobian,
}
