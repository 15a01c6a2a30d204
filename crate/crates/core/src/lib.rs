//! Collapse-model diffusion coefficients, Gaussian covariance dynamics of two
//! Coulomb-coupled trapped nanospheres, and the inversion of squeezing and
//! entanglement witnesses into exclusion bounds on collapse parameters.
//!
//! All public quantities are SI. Quadrature covariances are dimensionless
//! with the vacuum at `½·I`.

// `!(x > 0.0)` is used on purpose so that NaN fails validation; index loops
// mirror the matrix notation of the update formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bounds;
pub mod config;
pub mod constants;
pub mod diffusion;
pub mod dynamics;
pub mod error;
pub mod numeric;
pub mod presets;
pub mod quadrature;
pub mod sde;
pub mod short_time;
pub mod special;
pub mod symplectic;

pub use config::{CollapseModel, CollapseParams, ExperimentConfig, LoadedConfig};
pub use constants::PhysicalConstants;
pub use diffusion::{DiffusionSet, MassModel};
pub use dynamics::{CovMatrix2, Mode, ModeParams};
pub use error::{Error, Result};
pub use presets::Preset;
pub use symplectic::{CovMatrix4, SymplecticPair};
