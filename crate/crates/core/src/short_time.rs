//! First-order expansions of the squeezing figure ν(t) and the partially
//! transposed symplectic eigenvalue ν̃₋(t) about a thermal initial state,
//! plus the short-time entanglement criterion.

use crate::config::ExperimentConfig;
use crate::constants::PhysicalConstants;
use crate::dynamics::{mode_params, ModeParams};
use crate::error::{Error, Result};

/// Largest t·ω accepted by the expansions.
pub const MAX_PHASE: f64 = 0.05;

fn check_regime(t: f64, omega: f64) -> Result<()> {
    let phase = t * omega;
    if !(t >= 0.0) || phase >= MAX_PHASE {
        return Err(Error::OutOfRegime(phase));
    }
    Ok(())
}

/// Effective diffusion D_d + D_th − mħωγN: in the high-temperature limit the
/// thermal terms cancel and only collapse diffusion remains.
pub fn effective_diffusion(
    cfg: &ExperimentConfig,
    mp: &ModeParams,
    dd: f64,
    dth: f64,
    consts: &PhysicalConstants,
) -> f64 {
    dd + dth - cfg.mass * consts.hbar * cfg.omega * cfg.gamma * mp.n
}

/// Minimum eigenvalue of the differential-mode covariance at short times,
/// starting from the thermal state N/2·I:
/// ν(t) = ½(N + (t/ħmω)(D_eff − √(D_eff² + δ⁴ω⁴ħ²m²N²))).
pub fn short_time_nu(t: f64, cfg: &ExperimentConfig, dd: f64, dth: f64, consts: &PhysicalConstants) -> Result<f64> {
    check_regime(t, cfg.omega)?;
    let mp = mode_params(cfg, consts)?;
    let d_eff = effective_diffusion(cfg, &mp, dd, dth, consts);
    let hmw = consts.hbar * cfg.mass * cfg.omega;
    let coupling = mp.delta2 * cfg.omega * hmw * mp.n;
    Ok(0.5 * (mp.n + t / hmw * (d_eff - d_eff.hypot(coupling))))
}

/// ν̃₋ at short times for two particles each squeezed by `r` from the
/// thermal state:
/// ½(N + (t·eʳ/2mħω)[(2D11 + 2D_th − 2e^{−r}mγħωN) − √(4D12² + δ⁴m²ħ²ω⁴N²)]).
#[allow(clippy::too_many_arguments)]
pub fn short_time_nu_tilde(
    t: f64,
    r: f64,
    cfg: &ExperimentConfig,
    d11: f64,
    d12: f64,
    dth: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    check_regime(t, cfg.omega)?;
    let mp = mode_params(cfg, consts)?;
    let hmw = consts.hbar * cfg.mass * cfg.omega;
    let local = 2.0 * d11 + 2.0 * dth - 2.0 * (-r).exp() * hmw * cfg.gamma * mp.n;
    let coupling = (2.0 * d12).hypot(mp.delta2 * cfg.omega * hmw * mp.n);
    Ok(0.5 * (mp.n + t * r.exp() / (2.0 * hmw) * (local - coupling)))
}

/// Short-time entanglement from the ground state:
/// 4(D11 + D_th)² < 4D12² + δ⁴m²ω⁴ħ² (strict).
pub fn entanglement_witness(
    d11: f64,
    d12: f64,
    dth: f64,
    mp: &ModeParams,
    mass: f64,
    omega: f64,
    consts: &PhysicalConstants,
) -> bool {
    entanglement_margin(d11, d12, dth, mp, mass, omega, consts) > 0.0
}

/// 4D12² + δ⁴m²ω⁴ħ² − 4(D11 + D_th)²; positive iff entangling.
pub fn entanglement_margin(
    d11: f64,
    d12: f64,
    dth: f64,
    mp: &ModeParams,
    mass: f64,
    omega: f64,
    consts: &PhysicalConstants,
) -> f64 {
    let k = mp.delta2 * mass * omega * omega * consts.hbar;
    4.0 * d12 * d12 + k * k - 4.0 * (d11 + dth).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;

    #[test]
    fn initial_values() {
        let c = PhysicalConstants::default();
        let cfg = preset("table1").unwrap().config;
        let mp = mode_params(&cfg, &c).unwrap();
        assert_eq!(short_time_nu(0.0, &cfg, 1e-40, 1e-40, &c).unwrap(), 0.5 * mp.n);
        assert_eq!(
            short_time_nu_tilde(0.0, 0.3, &cfg, 1e-40, 0.0, 1e-40, &c).unwrap(),
            0.5 * mp.n
        );
    }

    #[test]
    fn regime_enforced() {
        let c = PhysicalConstants::default();
        let cfg = preset("table1").unwrap().config;
        let t = 0.06 / cfg.omega;
        assert!(matches!(
            short_time_nu(t, &cfg, 0.0, 0.0, &c),
            Err(Error::OutOfRegime(_))
        ));
        assert!(short_time_nu_tilde(t, 0.0, &cfg, 0.0, 0.0, 0.0, &c).is_err());
    }

    #[test]
    fn noiseless_ground_state_entangles() {
        let c = PhysicalConstants::default();
        let mut cfg = preset("table1").unwrap().config;
        cfg.temperature = 0.0;
        cfg.gamma = 0.0;
        let t = 0.01 / cfg.omega;
        let nu = short_time_nu_tilde(t, 0.0, &cfg, 0.0, 0.0, 0.0, &c).unwrap();
        let mp = mode_params(&cfg, &c).unwrap();
        assert!((nu - 0.5 * (1.0 - t * mp.delta2 * cfg.omega / 2.0)).abs() < 1e-15);
        assert!(nu < 0.5);
        assert!(entanglement_witness(0.0, 0.0, 0.0, &mp, cfg.mass, cfg.omega, &c));
    }

    #[test]
    fn witness_boundary_is_exclusive() {
        let c = PhysicalConstants::default();
        let cfg = preset("table1").unwrap().config;
        let mp = mode_params(&cfg, &c).unwrap();
        let half = mp.delta2 * cfg.mass * cfg.omega.powi(2) * c.hbar / 2.0;
        assert!(!entanglement_witness(half, 0.0, 0.0, &mp, cfg.mass, cfg.omega, &c));
        assert!(entanglement_witness(
            0.999 * half,
            0.0,
            0.0,
            &mp,
            cfg.mass,
            cfg.omega,
            &c
        ));
    }

    #[test]
    fn high_temperature_cancels_thermal_diffusion() {
        let c = PhysicalConstants::default();
        let mut cfg = preset("table1").unwrap().config;
        cfg.temperature = c.hbar * cfg.omega / (2.0 * c.k_b * 1e-8);
        let mp = mode_params(&cfg, &c).unwrap();
        let dth = crate::diffusion::thermal_diffusion(cfg.mass, cfg.gamma, cfg.omega, cfg.temperature, &c);
        let dd = 1e-3 * dth;
        let d_eff = effective_diffusion(&cfg, &mp, dd, dth, &c);
        assert!(((d_eff - dd) / dd).abs() < 1e-6);
    }
}
