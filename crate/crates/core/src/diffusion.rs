//! Closed-form momentum-diffusion coefficients (kg²·m²·s⁻³) for collapse
//! noise acting on two spheres, plus thermal diffusion.
//!
//! CSL self terms use a homogeneous sphere; CSL cross terms only have a
//! closed form for Gaussian mass distributions, so those use a Gaussian blob
//! of the same radius. DP terms use the Gaussian blob throughout.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::config::{CollapseParams, ExperimentConfig};
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::special::{coth, csl_sphere_bracket, dp_cross_series, erf};

/// Exponents beyond this give subnormal or zero factors.
const UNDERFLOW_EXPONENT: f64 = 708.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MassKind {
    HomogeneousSphere,
    GaussianBlob,
}

/// Rigid mass distribution of one sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassModel {
    pub kind: MassKind,
    pub mass: f64,
    pub radius: f64,
}

impl MassModel {
    pub fn sphere(mass: f64, radius: f64) -> Self {
        Self {
            kind: MassKind::HomogeneousSphere,
            mass,
            radius,
        }
    }

    pub fn gaussian(mass: f64, radius: f64) -> Self {
        Self {
            kind: MassKind::GaussianBlob,
            mass,
            radius,
        }
    }

    /// Fourier transform of the mass density at wavenumber `p` (1/m).
    pub fn form_factor(&self, p: f64) -> f64 {
        match self.kind {
            MassKind::GaussianBlob => self.mass * (-0.5 * (p * self.radius).powi(2)).exp(),
            MassKind::HomogeneousSphere => {
                let x = p * self.radius;
                if x < 1e-3 {
                    let x2 = x * x;
                    self.mass * (1.0 - x2 / 10.0 + x2 * x2 / 280.0)
                } else {
                    3.0 * self.mass * (x.sin() - x * x.cos()) / x.powi(3)
                }
            }
        }
    }
}

/// A coefficient whose exponential factor may have underflowed to an exact 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub value: f64,
    pub underflow: bool,
}

impl Coefficient {
    fn exact(value: f64) -> Self {
        Self {
            value,
            underflow: false,
        }
    }

    fn underflowed() -> Self {
        Self {
            value: 0.0,
            underflow: true,
        }
    }
}

/// Self, cross and mode-resolved diffusion plus thermal diffusion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffusionSet {
    pub d11: f64,
    pub d12: f64,
    /// Differential mode, `d11 − d12`.
    pub dd: f64,
    /// Common mode, `d11 + d12`.
    pub dc: f64,
    pub dth: f64,
    /// Set when the cross term underflowed to an exact zero.
    pub cross_underflow: bool,
}

impl DiffusionSet {
    pub fn new(d11: f64, d12: f64, dth: f64) -> Self {
        let (dd, dc) = mode_diffusion(d11, d12);
        Self {
            d11,
            d12,
            dd,
            dc,
            dth,
            cross_underflow: false,
        }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    /// Collapse coefficients for a configuration, with thermal diffusion
    /// evaluated at `thermal_omega` (ω_d for the differential-mode witness).
    pub fn for_experiment(
        cfg: &ExperimentConfig,
        collapse: Option<&CollapseParams>,
        thermal_omega: f64,
        consts: &PhysicalConstants,
    ) -> Self {
        let dth = thermal_diffusion(cfg.mass, cfg.gamma, thermal_omega, cfg.temperature, consts);
        let Some(params) = collapse else {
            return Self::new(0.0, 0.0, dth);
        };
        let (d11, d12) = collapse_pair(cfg, params, consts);
        let mut set = Self::new(d11, d12.value, dth);
        set.cross_underflow = d12.underflow;
        set
    }
}

/// (D11, D12) for a configuration and collapse model.
pub fn collapse_pair(
    cfg: &ExperimentConfig,
    params: &CollapseParams,
    consts: &PhysicalConstants,
) -> (f64, Coefficient) {
    match *params {
        CollapseParams::Csl { lambda, r_csl } | CollapseParams::ColouredCsl { lambda, r_csl, .. } => {
            let d11 = csl_self_diffusion(lambda, r_csl, &MassModel::sphere(cfg.mass, cfg.radius), consts);
            let d12 = csl_cross_diffusion(
                lambda,
                r_csl,
                &MassModel::gaussian(cfg.mass, cfg.radius),
                cfg.separation,
                consts,
            );
            (d11, d12)
        }
        CollapseParams::Dp { r0 } => {
            let blob = MassModel::gaussian(cfg.mass, cfg.radius);
            let d11 = dp_self_diffusion(r0, &blob, consts);
            // separation is always > 10R here, so the cross term is defined
            let d12 = dp_cross_diffusion(r0, &blob, cfg.separation, consts).expect("validated separation is positive");
            (d11, Coefficient::exact(d12))
        }
    }
}

/// CSL self term for a homogeneous sphere:
/// λ(ħ/r)²(3m²/m₀²)(r/R)⁶[(1 + x/2)e^{−x} + (−1 + x/2)], x = R²/r².
pub fn csl_self_diffusion(lambda: f64, r_csl: f64, model: &MassModel, consts: &PhysicalConstants) -> f64 {
    let m_ratio = model.mass / consts.m0_nucleon;
    let x = (model.radius / r_csl).powi(2);
    // (r/R)⁶·bracket = bracket/x³
    lambda * (consts.hbar / r_csl).powi(2) * 3.0 * m_ratio * m_ratio * csl_sphere_bracket(x)
}

/// CSL cross term for two Gaussian blobs a distance `d` apart.
pub fn csl_cross_diffusion(
    lambda: f64,
    r_csl: f64,
    model: &MassModel,
    d: f64,
    consts: &PhysicalConstants,
) -> Coefficient {
    let rc2 = model.radius.powi(2) + r_csl.powi(2);
    let rc = rc2.sqrt();
    let exponent = d * d / (4.0 * rc2);
    if exponent > UNDERFLOW_EXPONENT {
        return Coefficient::underflowed();
    }
    let m_ratio = model.mass / consts.m0_nucleon;
    let shape = (2.0 - d * d / rc2) / rc.powi(5);
    let value =
        lambda / 8.0 * (consts.hbar / r_csl).powi(2) * m_ratio * m_ratio * r_csl.powi(5) * shape * (-exponent).exp();
    if value != 0.0 && value.abs() < f64::MIN_POSITIVE {
        return Coefficient::underflowed();
    }
    Coefficient::exact(value)
}

fn dp_regulator(r0: f64, model: &MassModel) -> f64 {
    (model.radius.powi(2) + r0.powi(2)).sqrt()
}

/// DP self term: Għm²/(12√π R_D³), R_D = √(R² + R₀²).
pub fn dp_self_diffusion(r0: f64, model: &MassModel, consts: &PhysicalConstants) -> f64 {
    let rd = dp_regulator(r0, model);
    consts.g * consts.hbar * model.mass.powi(2) / (12.0 * PI.sqrt() * rd.powi(3))
}

/// DP cross term for two Gaussian blobs a distance `d` apart. Tends to
/// −Għm²/d³ for d ≫ R_D and to the self term for d → 0.
pub fn dp_cross_diffusion(r0: f64, model: &MassModel, d: f64, consts: &PhysicalConstants) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::NonPhysical {
            key: "d",
            requirement: "positive",
            value: d,
        });
    }
    let rd = dp_regulator(r0, model);
    let pref = consts.g * consts.hbar * model.mass.powi(2);
    let y = d / (2.0 * rd);
    if y < 1.0 {
        return Ok(pref / (4.0 * PI.sqrt() * rd.powi(3)) * dp_cross_series(y));
    }
    let gaussian_part = if d / rd > 50.0 {
        0.0
    } else {
        (4.0 * rd * rd + d * d) * (-y * y).exp() / (PI.sqrt() * rd.powi(3) * d * d)
    };
    Ok(pref / 4.0 * (gaussian_part - 4.0 * erf(y) / d.powi(3)))
}

/// Thermal diffusion mγħω·coth(ħω/2k_BT) of a mode at `omega_mode`.
pub fn thermal_diffusion(mass: f64, gamma: f64, omega_mode: f64, temperature: f64, consts: &PhysicalConstants) -> f64 {
    if gamma == 0.0 {
        return 0.0;
    }
    let n = if temperature <= 0.0 {
        1.0
    } else {
        coth(consts.hbar * omega_mode / (2.0 * consts.k_b * temperature))
    };
    mass * gamma * consts.hbar * omega_mode * n
}

/// (D_d, D_c) = (D11 − D12, D11 + D12).
pub fn mode_diffusion(d11: f64, d12: f64) -> (f64, f64) {
    (d11 - d12, d11 + d12)
}
