//! CODATA-2018 constants.

use serde::{Deserialize, Serialize};

pub const HBAR: f64 = 1.054_571_817e-34;
pub const K_B: f64 = 1.380_649e-23;
pub const G: f64 = 6.674_30e-11;
pub const EPS0: f64 = 8.854_187_812_8e-12;
pub const E_CHARGE: f64 = 1.602_176_634e-19;
pub const C_LIGHT: f64 = 299_792_458.0;
pub const PROTON_MASS: f64 = 1.672_621_923_69e-27;

/// Physical constants used throughout. Only the reference nucleon mass `m0`
/// is meant to be overridden (config key `m0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub k_b: f64,
    pub g: f64,
    pub eps0: f64,
    pub e_charge: f64,
    pub c_light: f64,
    pub m0_nucleon: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: HBAR,
            k_b: K_B,
            g: G,
            eps0: EPS0,
            e_charge: E_CHARGE,
            c_light: C_LIGHT,
            m0_nucleon: PROTON_MASS,
        }
    }
}

impl PhysicalConstants {
    pub fn with_m0(self, m0: f64) -> Self {
        Self { m0_nucleon: m0, ..self }
    }
}
