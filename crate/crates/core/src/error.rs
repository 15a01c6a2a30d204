use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("missing required key `{0}`")]
    MissingKey(String),

    #[error("cannot parse value for `{key}`: {value:?}")]
    Parse { key: String, value: String },

    #[error("`{key}` must be {requirement}, got {value}")]
    NonPhysical {
        key: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("linearisation invalid: separation d = {d:e} m must exceed 10·R = {limit:e} m")]
    Linearization { d: f64, limit: f64 },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("attractive coupling with δ² = {delta2} ≥ 1 makes the differential mode unstable")]
    Unstable { delta2: f64 },

    #[error("no steady state without damping (γ = 0)")]
    NoSteadyState,

    #[error("squeezing witness requires repulsive coupling (η = +1)")]
    AttractiveCoupling,

    #[error("operation needs `{0}`, which the configuration does not provide")]
    MissingParameter(&'static str),

    #[error("short-time expansion needs t·ω < 0.05, got {0}")]
    OutOfRegime(f64),

    #[error("step {dt:e} s exceeds the stability bound {limit:e} s")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("non-finite value encountered during {0}")]
    NonFinite(&'static str),

    #[error("symplectic spectrum degenerate: Δ̃² − 4·detσ = {0:e}")]
    Degenerate(f64),

    #[error("thermal noise too strong for entanglement (f = {f}); need Q > {q_min:e}")]
    NoEntanglement { f: f64, q_min: f64 },

    #[error("quadrature did not converge: estimate {value:e}, error {error:e}")]
    Quadrature { value: f64, error: f64 },

    #[error("noise covariance not positive semidefinite (|D12| > D11)")]
    NoiseNotPsd,

    #[error("invalid argument: {0}")]
    Invalid(String),
}
