//! Time integration and everything built on top of it: flow-map Jacobians,
//! attitude reconstruction, attractor probes and measure transport.

pub mod attractor;
pub mod integrator;
pub mod reconstruct;
pub mod sampling;
pub mod trajectory;
pub mod transport;
pub mod variational;

pub use attractor::{
    detect_attractor, suslov_attractor_probe, suslov_equilibrium_targets, AttractorReport, CaptureMetric,
    CaptureTarget, DEFAULT_CAPTURE_RADIUS,
};
pub use integrator::{dopri5, flow_to, DenseSegment, Failure, IntegratorOptions, IntegratorStats, Projection};
pub use reconstruct::{reconstruct, AttitudeTrajectory};
pub use sampling::{sample_ellipsoid, sample_rng, AxisBox};
pub use trajectory::{integrate, integrate_suslov, Trajectory, DEFAULT_ENERGY_DRIFT_BOUND};
pub use transport::{measure_transport_check, TransportFailure, TransportReport};
pub use variational::{flow_map_with_jacobian, VariationalField};
