use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("evaluation at a pole: {0}")]
    Pole(String),

    #[error("Drude rate collides with Matsubara frequency k={k} (beta*gamma = 2*pi*k); shift gamma by a tiny amount")]
    PoleCollision { k: u64 },

    #[error(
        "stability violated: effective coupling {eta_eff} >= omega_s/2 = {half_omega} (static response chi(0+) must be positive)"
    )]
    StabilityViolation { eta_eff: f64, half_omega: f64 },

    #[error("critical point: {0}")]
    CriticalPoint(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("tolerance {requested} not reached within {terms} terms (achieved {achieved})")]
    ToleranceNotReached {
        requested: f64,
        achieved: f64,
        terms: usize,
    },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("numerical differentiation did not converge (error estimate {estimate})")]
    Differentiation { estimate: f64 },

    #[error("step size collapsed at t = {t}")]
    StepSizeCollapse { t: f64 },

    #[error("{0} modes are not enough for the requested tolerance; increase the mode count")]
    InsufficientModes(usize),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}
