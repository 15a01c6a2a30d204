//! Inversion of the squeezing and entanglement witnesses into upper bounds on
//! collapse parameters, exclusion curves, run-time estimates, Diósi–Penrose
//! feasibility figures and the coloured X-ray comparison.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{canonical_number, CollapseParams, ExperimentConfig};
use crate::constants::PhysicalConstants;
use crate::diffusion::{csl_cross_diffusion, csl_self_diffusion, thermal_diffusion, MassModel};
use crate::dynamics::mode_params;
use crate::error::{Error, Result};
use crate::special::occupation;

/// Steady-state squeezing budget for collapse diffusion on the differential mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezingBound {
    /// N·mγħωδ², kg²m²s⁻³.
    pub d_max: f64,
    /// High-temperature form 2k_B·mγTδ² (diagnostic).
    pub d_max_high_t: f64,
    /// Collapse diffusion at which σ_ZZ equals N/2 exactly.
    pub d_threshold_exact: f64,
    pub n: f64,
    pub delta2: f64,
}

fn require_squeezing_preconditions(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.eta.value() < 0.0 {
        return Err(Error::AttractiveCoupling);
    }
    if !(cfg.gamma > 0.0) {
        return Err(Error::NoSteadyState);
    }
    Ok(())
}

/// Largest differential-mode collapse diffusion compatible with observing
/// steady-state position variance below N/2.
pub fn squeezing_diffusion_bound(cfg: &ExperimentConfig, consts: &PhysicalConstants) -> Result<SqueezingBound> {
    require_squeezing_preconditions(cfg)?;
    let mp = mode_params(cfg, consts)?;
    let mgh = cfg.mass * cfg.gamma * consts.hbar;
    let d_max = mp.n * mgh * cfg.omega * mp.delta2;
    let d_max_high_t = 2.0 * consts.k_b * cfg.mass * cfg.gamma * cfg.temperature * mp.delta2;
    // σ_ZZ = (ω/2ω_d)N_d + Dω/(2mγħω_d²) = N/2
    let d_threshold_exact = mgh * mp.omega_d.powi(2) / cfg.omega * (mp.n - cfg.omega / mp.omega_d * mp.nd);
    Ok(SqueezingBound {
        d_max,
        d_max_high_t,
        d_threshold_exact,
        n: mp.n,
        delta2: mp.delta2,
    })
}

/// Status of one λ bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundFlag {
    Ok,
    /// Cross term underflowed to zero; the bound rests on D11 alone.
    CrossUnderflow,
    /// D11 − D12 ≤ 0: collapse noise does not reach the differential mode.
    CompleteCancellation,
}

impl BoundFlag {
    pub fn key(self) -> &'static str {
        match self {
            BoundFlag::Ok => "ok",
            BoundFlag::CrossUnderflow => "cross-underflow",
            BoundFlag::CompleteCancellation => "complete-cancellation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaBound {
    /// s⁻¹; +∞ when flagged as complete cancellation.
    pub lambda_max: f64,
    pub flag: BoundFlag,
}

/// Differential-mode CSL diffusion per unit λ: sphere self term minus
/// Gaussian-blob cross term.
pub fn csl_dd_per_lambda(cfg: &ExperimentConfig, r_csl: f64, consts: &PhysicalConstants) -> (f64, f64, bool) {
    let d11 = csl_self_diffusion(1.0, r_csl, &MassModel::sphere(cfg.mass, cfg.radius), consts);
    let d12 = csl_cross_diffusion(
        1.0,
        r_csl,
        &MassModel::gaussian(cfg.mass, cfg.radius),
        cfg.separation,
        consts,
    );
    (d11, d12.value, d12.underflow)
}

/// λ at which the differential-mode CSL diffusion equals `budget`.
pub fn lambda_for_budget(cfg: &ExperimentConfig, r_csl: f64, budget: f64, consts: &PhysicalConstants) -> LambdaBound {
    let (d11, d12, underflow) = csl_dd_per_lambda(cfg, r_csl, consts);
    let per_lambda = d11 - d12;
    if !(per_lambda > 0.0) {
        return LambdaBound {
            lambda_max: f64::INFINITY,
            flag: BoundFlag::CompleteCancellation,
        };
    }
    LambdaBound {
        lambda_max: budget / per_lambda,
        flag: if underflow {
            BoundFlag::CrossUnderflow
        } else {
            BoundFlag::Ok
        },
    }
}

/// λ_max = D_max / [D11(λ=1) − D12(λ=1)].
pub fn lambda_bound_squeezing(cfg: &ExperimentConfig, r_csl: f64, consts: &PhysicalConstants) -> Result<LambdaBound> {
    let bound = squeezing_diffusion_bound(cfg, consts)?;
    Ok(lambda_for_budget(cfg, r_csl, bound.d_max, consts))
}

/// Entanglement-route bound on λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementBound {
    /// Positive root of 4(D11 + D_th)² = 4D12² + δ⁴m²ω⁴ħ².
    pub lambda_max: f64,
    /// Root of D11(λ) = δ²mω²ħ(1 − f)/2 (cross term dropped).
    pub lambda_simplified: f64,
    /// Thermal fraction 2D_th/(δ²mω²ħ).
    pub f: f64,
}

/// Solves the short-time entanglement criterion for λ. D11 and D12 are
/// linear in λ, so the criterion is a quadratic with an exact root.
pub fn lambda_bound_entanglement(
    cfg: &ExperimentConfig,
    r_csl: f64,
    consts: &PhysicalConstants,
) -> Result<EntanglementBound> {
    let mp = mode_params(cfg, consts)?;
    let dth = thermal_diffusion(cfg.mass, cfg.gamma, cfg.omega, cfg.temperature, consts);
    let k = mp.delta2 * cfg.mass * cfg.omega.powi(2) * consts.hbar;
    let f = 2.0 * dth / k;
    if f >= 1.0 {
        return Err(Error::NoEntanglement {
            f,
            q_min: q_requirement(cfg.temperature, cfg.omega, mp.delta2, consts),
        });
    }
    let (a, b, _) = csl_dd_per_lambda(cfg, r_csl, consts);
    // 4(a²−b²)λ² + 8a·D_th·λ + (4D_th² − k²) = 0 with a negative constant term
    let qa = 4.0 * (a * a - b * b);
    let qb = 8.0 * a * dth;
    let qc = 4.0 * dth * dth - k * k;
    let disc = qb * qb - 4.0 * qa * qc;
    let lambda_max = if disc < 0.0 {
        f64::INFINITY
    } else {
        let den = qb + disc.sqrt();
        if den > 0.0 {
            -2.0 * qc / den
        } else {
            f64::INFINITY
        }
    };
    Ok(EntanglementBound {
        lambda_max,
        lambda_simplified: k * (1.0 - f) / (2.0 * a),
        f,
    })
}

/// Q_min = 4(k_BT/ħω)/δ² for short-time entanglement.
pub fn q_requirement(temperature: f64, omega: f64, delta2: f64, consts: &PhysicalConstants) -> f64 {
    4.0 * consts.k_b * temperature / (consts.hbar * omega) / delta2
}

/// t_min = prefactor/(δ⁴γ).
pub fn min_runtime(delta2: f64, gamma: f64, prefactor: f64) -> f64 {
    prefactor / (delta2 * delta2 * gamma)
}

/// Default t_min prefactor, chosen to match tabulated run-times.
pub const RUNTIME_PREFACTOR: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    SteadySqueezing,
    ShortTimeEntanglement,
}

impl Witness {
    pub fn key(self) -> &'static str {
        match self {
            Witness::SteadySqueezing => "steady-squeezing",
            Witness::ShortTimeEntanglement => "short-time-entanglement",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub r_csl: f64,
    pub lambda_max: f64,
    pub flag: BoundFlag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExclusionCurve {
    pub points: Vec<CurvePoint>,
    /// SHA-256 of the canonical experiment description.
    pub config_id: String,
    pub witness: Witness,
    /// Set by the caller (RFC 3339); the library itself never reads a clock.
    pub generated_at: Option<String>,
}

impl ExclusionCurve {
    /// `r_csl,lambda_max,flag` rows with a `#` metadata header.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# config_id = {}\n", self.config_id));
        out.push_str(&format!("# witness = {}\n", self.witness.key()));
        if let Some(ts) = &self.generated_at {
            out.push_str(&format!("# generated_at = {ts}\n"));
        }
        out.push_str("r_csl,lambda_max,flag\n");
        for p in &self.points {
            out.push_str(&format!("{:e},{:e},{}\n", p.r_csl, p.lambda_max, p.flag.key()));
        }
        out
    }
}

/// Stable identifier of an experiment configuration.
pub fn config_hash(cfg: &ExperimentConfig, consts: &PhysicalConstants) -> String {
    let mut h = Sha256::new();
    for (k, v) in [
        ("m", cfg.mass),
        ("q", cfg.charge),
        ("eta", cfg.eta.value()),
        ("R", cfg.radius),
        ("omega", cfg.omega),
        ("gamma", cfg.gamma),
        ("T", cfg.temperature),
        ("d", cfg.separation),
        ("m0", consts.m0_nucleon),
    ] {
        h.update(format!("{k}={}\n", canonical_number(v)));
    }
    if let Some(rho) = cfg.density {
        h.update(format!("rho={}\n", canonical_number(rho)));
    }
    hex::encode(h.finalize())
}

/// `n` log-spaced points on [lo, hi].
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

pub const R_GRID_MIN: f64 = 1e-8;
pub const R_GRID_MAX: f64 = 1e-2;

/// Pointwise bound over an increasing grid of r_CSL values in [1e-8, 1e-2] m.
pub fn exclusion_curve(
    cfg: &ExperimentConfig,
    r_grid: &[f64],
    witness: Witness,
    consts: &PhysicalConstants,
) -> Result<ExclusionCurve> {
    if r_grid.is_empty() {
        return Err(Error::Invalid("empty r_CSL grid".into()));
    }
    for w in r_grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Invalid("r_CSL grid must be strictly increasing".into()));
        }
    }
    let tol = 1e-12;
    if r_grid[0] < R_GRID_MIN * (1.0 - tol) || r_grid[r_grid.len() - 1] > R_GRID_MAX * (1.0 + tol) {
        return Err(Error::Invalid(format!(
            "r_CSL grid must lie within [{R_GRID_MIN:e}, {R_GRID_MAX:e}] m"
        )));
    }
    let point = |r: f64| -> Result<CurvePoint> {
        match witness {
            Witness::SteadySqueezing => {
                let b = lambda_bound_squeezing(cfg, r, consts)?;
                Ok(CurvePoint {
                    r_csl: r,
                    lambda_max: b.lambda_max,
                    flag: b.flag,
                })
            }
            Witness::ShortTimeEntanglement => {
                let b = lambda_bound_entanglement(cfg, r, consts)?;
                let (_, _, underflow) = csl_dd_per_lambda(cfg, r, consts);
                Ok(CurvePoint {
                    r_csl: r,
                    lambda_max: b.lambda_max,
                    flag: if b.lambda_max.is_infinite() {
                        BoundFlag::CompleteCancellation
                    } else if underflow {
                        BoundFlag::CrossUnderflow
                    } else {
                        BoundFlag::Ok
                    },
                })
            }
        }
    };
    #[cfg(feature = "parallel")]
    let points: Result<Vec<CurvePoint>> = {
        use rayon::prelude::*;
        r_grid.par_iter().map(|&r| point(r)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let points: Result<Vec<CurvePoint>> = r_grid.iter().map(|&r| point(r)).collect();
    Ok(ExclusionCurve {
        points: points?,
        config_id: config_hash(cfg, consts),
        witness,
        generated_at: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeasibilityRoute {
    Squeezing,
    Entanglement,
}

/// Whether a setup can constrain the Diósi–Penrose length R₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub route: FeasibilityRoute,
    /// Gρ√π/(9δ²ωγN) (squeezing route).
    pub eta_g: Option<f64>,
    /// R·√(η_G^{2/3} − 1), present iff feasible on the squeezing route.
    pub r0_min: Option<f64>,
    /// Gm/(12√π δ²ω²), m³ (entanglement route).
    pub gamma_g: Option<f64>,
    /// Gρ√π/(9ω²) (entanglement route).
    pub delta2_max: Option<f64>,
    pub delta2: f64,
    pub feasible: bool,
}

fn density(cfg: &ExperimentConfig) -> Result<f64> {
    cfg.density.ok_or(Error::MissingParameter("rho"))
}

/// Squeezing route: non-trivial R₀ constraint iff η_G > 1.
pub fn dp_squeezing_feasibility(cfg: &ExperimentConfig, consts: &PhysicalConstants) -> Result<FeasibilityReport> {
    let rho = density(cfg)?;
    require_squeezing_preconditions(cfg)?;
    let mp = mode_params(cfg, consts)?;
    let eta_g = consts.g * rho * PI.sqrt() / (9.0 * mp.delta2 * cfg.omega * cfg.gamma * mp.n);
    let feasible = eta_g > 1.0;
    Ok(FeasibilityReport {
        route: FeasibilityRoute::Squeezing,
        eta_g: Some(eta_g),
        r0_min: feasible.then(|| cfg.radius * (eta_g.powf(2.0 / 3.0) - 1.0).sqrt()),
        gamma_g: None,
        delta2_max: None,
        delta2: mp.delta2,
        feasible,
    })
}

/// Entanglement route: non-trivial iff γ_G > R³, i.e. δ² < Gρ√π/(9ω²).
pub fn dp_entanglement_feasibility(cfg: &ExperimentConfig, consts: &PhysicalConstants) -> Result<FeasibilityReport> {
    let rho = density(cfg)?;
    let mp = mode_params(cfg, consts)?;
    let gamma_g = consts.g * cfg.mass / (12.0 * PI.sqrt() * mp.delta2 * cfg.omega.powi(2));
    let delta2_max = dp_entanglement_delta2_max(rho, cfg.omega, consts);
    Ok(FeasibilityReport {
        route: FeasibilityRoute::Entanglement,
        eta_g: None,
        r0_min: None,
        gamma_g: Some(gamma_g),
        delta2_max: Some(delta2_max),
        delta2: mp.delta2,
        feasible: mp.delta2 < delta2_max,
    })
}

pub fn dp_entanglement_delta2_max(rho: f64, omega: f64, consts: &PhysicalConstants) -> f64 {
    consts.g * rho * PI.sqrt() / (9.0 * omega * omega)
}

/// Cutoff energy E_Ω = ħΩ.
pub fn cutoff_energy(cutoff: f64, consts: &PhysicalConstants) -> f64 {
    consts.hbar * cutoff
}

/// Spontaneous X-ray emission rate density dΓ/dE (s⁻¹J⁻¹) from `np`
/// protons and `ne` electrons. With a cutoff the rate is multiplied by
/// E_Ω²/(E_Ω² + E²).
pub fn xray_rate(
    params: &CollapseParams,
    energy: f64,
    np: f64,
    ne: f64,
    cutoff: Option<f64>,
    consts: &PhysicalConstants,
) -> Result<f64> {
    if !(energy > 0.0) {
        return Err(Error::NonPhysical {
            key: "E",
            requirement: "positive",
            value: energy,
        });
    }
    let e2 = consts.e_charge.powi(2);
    let c3 = consts.c_light.powi(3);
    let charges = np * np + ne;
    let (white, model_cutoff) = match *params {
        CollapseParams::Csl { lambda, r_csl } => (csl_xray(lambda, r_csl, energy, charges, consts, e2, c3), None),
        CollapseParams::ColouredCsl { lambda, r_csl, cutoff } => {
            (csl_xray(lambda, r_csl, energy, charges, consts, e2, c3), Some(cutoff))
        }
        CollapseParams::Dp { r0 } => {
            if !(r0 > 0.0) {
                return Err(Error::NonPhysical {
                    key: "R0",
                    requirement: "positive for the emission rate",
                    value: r0,
                });
            }
            (
                consts.g * e2 * charges / (12.0 * PI.powf(2.5) * consts.eps0 * c3 * r0.powi(3) * energy),
                None,
            )
        }
    };
    match cutoff.or(model_cutoff) {
        Some(om) => {
            let eo = cutoff_energy(om, consts);
            Ok(white * eo * eo / (eo * eo + energy * energy))
        }
        None => Ok(white),
    }
}

fn csl_xray(lambda: f64, r_csl: f64, energy: f64, charges: f64, consts: &PhysicalConstants, e2: f64, c3: f64) -> f64 {
    consts.hbar * e2 * lambda * charges
        / (4.0 * PI * PI * consts.eps0 * c3 * r_csl * r_csl * consts.m0_nucleon.powi(2) * energy)
}

/// Experimental white-noise X-ray bound on λ/r², s⁻¹m⁻².
pub const XRAY_WHITE_BOUND: f64 = 3e-3;
/// Coloured rescaling of that bound at Ω = 10¹² rad/s.
pub const XRAY_COLOURED_BOUND: f64 = 7.09e11;
pub const XRAY_REFERENCE_CUTOFF: f64 = 1e12;

/// Representative photon energy (J) implied by the white and
/// coloured bounds: E_rep = E_Ω·√(ratio − 1). About 10.1 keV.
pub fn default_representative_energy(consts: &PhysicalConstants) -> f64 {
    let eo = cutoff_energy(XRAY_REFERENCE_CUTOFF, consts);
    eo * (XRAY_COLOURED_BOUND / XRAY_WHITE_BOUND - 1.0).sqrt()
}

/// Weakens a white-noise bound for a collapse cutoff Ω:
/// bound·(E_Ω² + E_rep²)/E_Ω².
pub fn xray_coloured_rescale(bound_white: f64, cutoff: f64, e_rep: f64, consts: &PhysicalConstants) -> f64 {
    let eo = cutoff_energy(cutoff, consts);
    bound_white * (eo * eo + e_rep * e_rep) / (eo * eo)
}

/// Ratio coth(βx)/coth(x), which lies in [1/β, 1] for β > 1.
pub fn coth_ratio(x: f64, beta: f64) -> f64 {
    crate::special::coth(beta * x) / crate::special::coth(x)
}

/// Thermal occupation at the trap frequency, exposed for reports.
pub fn trap_occupation(cfg: &ExperimentConfig, consts: &PhysicalConstants) -> f64 {
    occupation(consts.hbar * cfg.omega, consts.k_b * cfg.temperature)
}
