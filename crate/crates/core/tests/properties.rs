//! Structural properties of the bounds, the dynamics and the noise model.

mod common;

use collapse_kit::bounds::{dp_squeezing_feasibility, lambda_bound_squeezing, log_grid, squeezing_diffusion_bound};
use collapse_kit::diffusion::{csl_cross_diffusion, csl_self_diffusion, dp_cross_diffusion, dp_self_diffusion};
use collapse_kit::dynamics::{mode_params, steady_state};
use collapse_kit::presets::preset;
use collapse_kit::{MassModel, Mode, PhysicalConstants};

const TABLE2: [&str; 6] = ["table2-A", "table2-B", "table2-C", "table2-D", "table2-E", "table2-F"];

#[test]
fn coth_ratio_lies_between_inverse_beta_and_one() {
    let (ok, total) = common::coth_inequality(10_000, 21);
    assert_eq!(ok, total);
}

#[test]
fn squeezing_budget_saturates_the_witness_in_the_high_temperature_rows() {
    for name in ["table2-A", "table2-B", "table2-C"] {
        let r = common::squeezing_saturation(name, false);
        assert!(r.abs() <= 1e-9, "{name}: {r:e}");
    }
}

#[test]
fn exact_threshold_saturates_the_witness_in_every_row() {
    for name in TABLE2 {
        let r = common::squeezing_saturation(name, true);
        assert!(r.abs() <= 1e-9, "{name}: {r:e}");
    }
}

#[test]
fn squeezing_budget_is_conservative_at_low_temperature() {
    // N·mγħωδ² exceeds the exact threshold by ≈ x²/3, x = ħω/2k_BT
    let c = PhysicalConstants::default();
    for name in ["table2-D", "table2-E", "table2-F"] {
        let cfg = preset(name).unwrap().config;
        let x = c.hbar * cfg.omega / (2.0 * c.k_b * cfg.temperature);
        let r = common::squeezing_saturation(name, false);
        assert!(r > 0.0 && r < x * x / 3.0, "{name}: {r:e}");
        assert!(r < 0.02);
    }
}

#[test]
fn entanglement_bound_sits_on_the_witness_boundary() {
    for name in ["table3-A", "table3-B", "table3-C"] {
        let r = common::entanglement_saturation(name);
        assert!(r.abs() <= 1e-9, "{name}: {r:e}");
    }
}

#[test]
fn squeezing_bound_increases_with_temperature_and_damping() {
    let c = PhysicalConstants::default();
    let base = preset("table2-C").unwrap().config;
    let mut last = 0.0;
    for t in log_grid(1e-5, 1.0, 25) {
        let cfg = collapse_kit::ExperimentConfig { temperature: t, ..base };
        let l = lambda_bound_squeezing(&cfg, 1e-7, &c).unwrap().lambda_max;
        assert!(l > last, "T = {t:e}");
        last = l;
    }
    let mut last = 0.0;
    for g in log_grid(1e-6, 1e-2, 25) {
        let cfg = collapse_kit::ExperimentConfig { gamma: g, ..base };
        let l = lambda_bound_squeezing(&cfg, 1e-7, &c).unwrap().lambda_max;
        assert!(l > last, "γ = {g:e}");
        last = l;
    }
}

#[test]
fn thermal_steady_state_is_squeezed_below_n_over_two() {
    let c = PhysicalConstants::default();
    let base = preset("table1").unwrap().config;
    for t in log_grid(1e-9, 10.0, 30) {
        let cfg = collapse_kit::ExperimentConfig { temperature: t, ..base };
        let mp = mode_params(&cfg, &c).unwrap();
        let s = steady_state(&mp, Mode::Differential, 0.0, &cfg, &c).unwrap();
        assert!(s.szz() < 0.5 * mp.n, "T = {t:e}");
    }
}

#[test]
fn dp_feasibility_is_consistent_with_the_squeezing_budget() {
    let c = PhysicalConstants::default();
    let cfg = preset("appendixD-dp").unwrap().config;
    let rep = dp_squeezing_feasibility(&cfg, &c).unwrap();
    let r0 = rep.r0_min.unwrap();
    let blob = MassModel::gaussian(cfg.mass, cfg.radius);
    let dd = dp_self_diffusion(r0, &blob, &c) - dp_cross_diffusion(r0, &blob, cfg.separation, &c).unwrap();
    let budget = squeezing_diffusion_bound(&cfg, &c).unwrap().d_max;
    assert!(common::rel(dd, budget) < 0.1, "{dd:e} vs {budget:e}");

    // R0_min grows with η_G, here driven by lowering the damping
    let mut last = 0.0;
    for scale in [1.0, 0.5, 0.25, 0.1] {
        let cfg = collapse_kit::ExperimentConfig {
            gamma: cfg.gamma * scale,
            ..cfg
        };
        let rep = dp_squeezing_feasibility(&cfg, &c).unwrap();
        let r = rep.r0_min.unwrap();
        assert!(r > last);
        last = r;
    }
}

#[test]
fn two_particle_system_decouples_into_normal_modes() {
    let worst = common::mode_decoupling(200, 22);
    assert!(worst < 1e-14, "{worst:e}");
}

#[test]
fn propagation_preserves_the_uncertainty_principle() {
    let lowest = common::physicality(50, 23);
    assert!(lowest >= 0.5 - 1e-9, "{lowest}");
}

#[test]
fn correlated_noise_has_the_requested_covariance() {
    let z = common::noise_factorisation(24);
    assert!(z < 3.0, "|z| = {z}");
}

#[test]
fn csl_coefficients_are_linear_in_lambda() {
    let c = PhysicalConstants::default();
    let sphere = MassModel::sphere(0.44e-16, 150e-9);
    let blob = MassModel::gaussian(0.44e-16, 150e-9);
    for r in log_grid(1e-8, 1e-3, 11) {
        let a = csl_self_diffusion(1.0, r, &sphere, &c);
        let b = csl_self_diffusion(3.0, r, &sphere, &c);
        assert!(common::rel(b, 3.0 * a) < 4.0 * f64::EPSILON);
        let a = csl_cross_diffusion(1.0, r, &blob, 1e-6, &c).value;
        let b = csl_cross_diffusion(3.0, r, &blob, 1e-6, &c).value;
        assert!(a == 0.0 && b == 0.0 || common::rel(b, 3.0 * a) < 4.0 * f64::EPSILON);
    }
}

#[test]
fn csl_cross_term_is_bounded_by_the_self_term_and_decays() {
    let c = PhysicalConstants::default();
    let radius = 150e-9;
    let blob = MassModel::gaussian(0.44e-16, radius);
    for r in log_grid(1e-8, 1e-3, 11) {
        let self_term = csl_cross_diffusion(1.0, r, &blob, 0.0, &c).value;
        let rc = (r * r + radius * radius).sqrt();
        let mut last = f64::INFINITY;
        for f in log_grid(0.01, 40.0, 60) {
            let d12 = csl_cross_diffusion(1.0, r, &blob, f * rc, &c).value;
            assert!(d12.abs() <= self_term * (1.0 + 1e-12));
            if f > 6f64.sqrt() {
                assert!(d12.abs() <= last);
                last = d12.abs();
            }
        }
    }
}

#[test]
fn dp_cross_term_turns_negative_far_away() {
    let c = PhysicalConstants::default();
    let blob = MassModel::gaussian(0.44e-16, 150e-9);
    for r0 in [0.0, 1e-7, 1e-6] {
        let rd = (150e-9f64.powi(2) + r0 * r0).sqrt();
        for f in [20.0, 100.0, 1e3] {
            assert!(dp_cross_diffusion(r0, &blob, f * rd, &c).unwrap() < 0.0);
        }
    }
}

#[test]
fn table2_presets_share_the_coupling_strength() {
    let c = PhysicalConstants::default();
    for name in TABLE2 {
        let d2 = mode_params(&preset(name).unwrap().config, &c).unwrap().delta2;
        assert!(common::rel(d2, 0.1324) < 0.005, "{name}: {d2}");
    }
}
