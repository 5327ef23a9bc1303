//! Oscillator models, fixed-step RK4, and the coupled network `ẋ = F(x) - (L ⊗ E) x`.

mod initial;
mod integrate;
mod model;
mod network;

pub use initial::{attractor_warmup, perturbed_sync_ic};
pub use integrate::{rk4_integrate, rk4_trajectory, Rk4, BLOWUP_THRESHOLD};
pub use model::{JacobianField, OscillatorModel, VectorField};
pub use network::{
    simulate_network, sync_error, BlowUp, NetworkSystem, Simulation, SimulationOptions, SyncMetric, SyncSeries,
    NETWORK_ROW_SUM_TOL,
};

/// Default integration step.
pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("unknown model `{0}` (expected van_der_pol or rossler)")]
    UnknownModel(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("state blew up at step {step} (t = {time})")]
    BlowUp { step: usize, time: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("coupling rows do not sum to zero (max |row sum| = {0:e})")]
    NotZeroRowSum(f64),
}
