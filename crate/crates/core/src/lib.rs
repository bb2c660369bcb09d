//! Numerical toolkit for the Suslov problem with an internal rotor.
//!
//! The reduced dynamics live on `R^3` as `K_a Ω' = (B_a Ω) × Ω` under the
//! constraint `<a, Ω + θ' E3> = 0`. The crate builds that system, classifies
//! its steady rotations, and checks which invariant measures it admits:
//!
//! * [`system`]: parameters, `K_a`, `B_a`, the field, energy, divergence.
//! * [`equilibria`]: eigenlines of `B_a` and their `(α, β)` classification.
//! * [`measures`]: `div(M X)` residuals and the density vanishing on two planes.
//! * [`flow`]: integration, variational equations, reconstruction, attractor
//!   probes and Monte Carlo transport checks.
//! * [`fields`]: the generic field/density traits plus small fixtures.

pub mod equilibria;
pub mod error;
pub mod fields;
pub mod flow;
pub mod measures;
pub mod system;

pub use error::{IntegrationError, SuslovError};
pub use fields::{Density, DifferentiabilityClass, VectorField};
pub use system::{SuslovParams, SuslovSystem, Vec3};
