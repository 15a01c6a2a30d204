//! Brute-force momentum-space evaluation of collapse diffusion coefficients.
//!
//! The linearised collapse generator gives
//!
//! ```text
//! D = C ∫ d³p  p_z² w(p) μ̃₁(p) μ̃₂(−p) e^{−ℓ²p²} e^{i p·d}
//! ```
//!
//! with `w = 1`, `C = λħ²r³/(2m₀²π^{3/2})`, `ℓ = r_CSL` for CSL and
//! `w = 1/p²`, `C = Għ/(4π²)`, `ℓ = R₀` for DP. With `d` along z the azimuth
//! integrates to 2π and the remaining (radial × polar) integral is done with
//! nested adaptive Gauss–Kronrod. This module shares nothing with the
//! closed forms in [`crate::diffusion`] except the mass models.

use std::f64::consts::PI;

use crate::constants::PhysicalConstants;
use crate::diffusion::{MassKind, MassModel};
use crate::error::Result;
use crate::quadrature::{Estimate, Quadrature};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    Csl { lambda: f64, r_csl: f64 },
    Dp { r0: f64 },
}

/// Relative tolerance of the radial integral.
pub const ORACLE_REL_TOL: f64 = 1e-8;

/// ∫_{−1}^{1} u² cos(xu) du by adaptive quadrature.
fn polar_integral(x: f64, quad: &Quadrature) -> Result<f64> {
    if x == 0.0 {
        return Ok(2.0 / 3.0);
    }
    // seed one break per half period so the rule never straddles many lobes
    let lobes = ((x / PI).ceil() as usize).clamp(1, 4096);
    let breaks: Vec<f64> = (0..=lobes).map(|i| i as f64 / lobes as f64).collect();
    let half = quad.integrate_with_breaks(|u| u * u * (x * u).cos(), &breaks)?;
    Ok(2.0 * half.value)
}

/// Numerical diffusion coefficient between two mass distributions a distance
/// `d` apart (use `d = 0` and the same model twice for a self term).
pub fn numeric_diffusion(
    first: &MassModel,
    second: &MassModel,
    kernel: Kernel,
    d: f64,
    consts: &PhysicalConstants,
) -> Result<Estimate> {
    if first.mass == 0.0 || second.mass == 0.0 {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let (prefactor, ell, radial_power) = match kernel {
        Kernel::Csl { lambda, r_csl } => (
            lambda * consts.hbar.powi(2) * r_csl.powi(3) / (2.0 * consts.m0_nucleon.powi(2) * PI.powf(1.5)),
            r_csl,
            4,
        ),
        Kernel::Dp { r0 } => (consts.g * consts.hbar / (4.0 * PI * PI), r0, 2),
    };

    // Gaussian decay rate of the full integrand in p²
    let blob = |m: &MassModel| match m.kind {
        MassKind::GaussianBlob => 0.5 * m.radius * m.radius,
        MassKind::HomogeneousSphere => 0.0,
    };
    let decay = ell * ell + blob(first) + blob(second);
    let p_max = (46.0 / decay).sqrt();

    let inner = Quadrature {
        rel_tol: 1e-13,
        abs_tol: 1e-14,
        max_intervals: 20_000,
    };
    let integrand = |p: f64| -> f64 {
        if p == 0.0 {
            return 0.0;
        }
        let radial = p.powi(radial_power) * first.form_factor(p) * second.form_factor(p) * (-ell * ell * p * p).exp();
        // integrand errors only surface through the outer estimate
        let polar = polar_integral(p * d, &inner).unwrap_or(f64::NAN);
        2.0 * PI * radial * polar
    };

    // breakpoints: oscillation of the separation phase and of sphere form factors
    let mut scales = vec![p_max];
    if d > 0.0 {
        scales.push(PI / d);
    }
    for m in [first, second] {
        if m.kind == MassKind::HomogeneousSphere {
            scales.push(PI / m.radius);
        }
    }
    let step = scales.iter().cloned().fold(f64::INFINITY, f64::min);
    let pieces = ((p_max / step).ceil() as usize).clamp(8, 4000);
    let breaks: Vec<f64> = (0..=pieces).map(|i| p_max * i as f64 / pieces as f64).collect();

    // absolute floor: the d = 0 magnitude times a small fraction, so that
    // strongly cancelling cross terms still terminate
    let scale = {
        let probe = Quadrature::new(1e-6, 0.0);
        probe
            .integrate_with_breaks(
                |p| {
                    p.powi(radial_power)
                        * (first.form_factor(p) * second.form_factor(p)).abs()
                        * (-ell * ell * p * p).exp()
                },
                &breaks,
            )?
            .value
    };
    let outer = Quadrature {
        rel_tol: ORACLE_REL_TOL,
        abs_tol: 1e-14 * scale,
        max_intervals: 20_000,
    };
    let est = outer.integrate_with_breaks(integrand, &breaks)?;
    Ok(Estimate {
        value: prefactor * est.value,
        error: prefactor * est.error,
        intervals: est.intervals,
    })
}
