use thiserror::Error;

/// Failure modes of the physics routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhysicsError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("root not bracketed on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("light-cone singularity: E - p_z vanishes")]
    LightCone,

    #[error("kinematic domain error: {0}")]
    Kinematic(String),

    #[error("closed emission channel: {0}")]
    ClosedChannel(String),

    #[error("closed polarization channel: amplitude vector vanishes")]
    ClosedPolarization,
}

pub type Result<T, E = PhysicsError> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(PhysicsError::Domain(msg.into()))
}
