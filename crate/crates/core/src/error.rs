//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while building or solving a transport model.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An operating point whose bath temperatures are not both positive.
    #[error("operating point yields non-positive bath temperature: T_mean = {t_mean}, delta_t = {delta_t} gives min(T_L, T_R) = {t_min}")]
    NonPositiveTemperature {
        t_mean: f64,
        delta_t: f64,
        t_min: f64,
    },

    /// A bath constructed directly with T <= 0.
    #[error("bath temperature must be positive, got {0}")]
    InvalidBathTemperature(f64),

    /// Occupation numbers must be 0 or 1.
    #[error("occupation must be 0 or 1, got {0}")]
    InvalidOccupation(u8),

    /// State indices run over 0..=3.
    #[error("state index out of range: {0} (valid: 0..=3)")]
    InvalidStateIndex(usize),

    /// Negative bare tunnel rate in a device description.
    #[error("bare tunnel rate must be non-negative, got {value} for {channel}")]
    NegativeTunnelRate { value: f64, channel: String },

    /// A capacitance that is not strictly positive.
    #[error("capacitance {name} must be positive, got {value}")]
    NonPositiveCapacitance { name: &'static str, value: f64 },

    /// Capacitance matrix with non-positive determinant.
    #[error("singular capacitance matrix: C_sum_t*C_sum_b - C^2 = {det} <= 0")]
    SingularCapacitanceMatrix { det: f64 },

    /// Invalid parameter in a charging model.
    #[error("invalid charging model: {0}")]
    InvalidChargingModel(String),

    /// The generator has no unique stationary state.
    #[error("no unique stationary state: {0}")]
    ReducibleGenerator(String),

    /// The solver produced a probability more negative than round-off allows.
    #[error("stationary solve produced probability {value} at state {index}; below the -1e-13 round-off clamp")]
    NegativeProbability { value: f64, index: usize },

    /// A probability vector that fails its own invariants.
    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    /// Time step too large for the explicit integrator.
    #[error("time step {dt} violates stability margin: dt * max|M_ii| = {product} >= 0.1")]
    StepTooLarge { dt: f64, product: f64 },

    /// Equilibrium construction requires identical baths.
    #[error("baths differ: left (T={t_l}, mu={mu_l}) vs right (T={t_r}, mu={mu_r})")]
    BathsDiffer {
        t_l: f64,
        mu_l: f64,
        t_r: f64,
        mu_r: f64,
    },

    /// Malformed sweep grid.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A sweep point failed to evaluate; coordinates identify the point.
    #[error("sweep aborted at {coords}: {source}")]
    SweepPointFailed {
        coords: String,
        #[source]
        source: Box<Error>,
    },

    /// A physics invariant failed at an evaluated point.
    #[error("invariant violation ({name}) at {coords}: {detail}")]
    InvariantViolation {
        name: &'static str,
        coords: String,
        detail: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
