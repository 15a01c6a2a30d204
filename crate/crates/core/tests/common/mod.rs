//! Reproduction and consistency checks shared by the acceptance report and
//! the topic test files. Each check returns a verdict plus a one-line
//! summary of the numbers behind it.

#![allow(dead_code)]

use std::f64::consts::PI;

use collapse_kit::bounds::{
    coth_ratio, cutoff_energy, default_representative_energy, dp_entanglement_delta2_max, dp_squeezing_feasibility,
    exclusion_curve, lambda_bound_entanglement, lambda_bound_squeezing, lambda_for_budget, log_grid, min_runtime,
    q_requirement, squeezing_diffusion_bound, xray_coloured_rescale, Witness, RUNTIME_PREFACTOR, R_GRID_MAX,
    R_GRID_MIN, XRAY_REFERENCE_CUTOFF, XRAY_WHITE_BOUND,
};
use collapse_kit::config::{ChargeSign, ExperimentConfig};
use collapse_kit::diffusion::{
    csl_cross_diffusion, csl_self_diffusion, dp_cross_diffusion, dp_self_diffusion, thermal_diffusion,
};
use collapse_kit::dynamics::{
    diffusion_matrix, drift_matrix, evolve, evolve_exact, lyapunov_steady, max_step, mode_params, mode_rotation,
    steady_state, two_mode_matrices,
};
use collapse_kit::numeric::{numeric_diffusion, Kernel};
use collapse_kit::presets::preset;
use collapse_kit::sde::{sample_noise_covariance, validate_mode_steady_state};
use collapse_kit::short_time::{entanglement_margin, short_time_nu, short_time_nu_tilde};
use collapse_kit::symplectic::{maps, ppt_eigen, ppt_eigen_direct};
use collapse_kit::{CovMatrix4, DiffusionSet, MassModel, Mode, PhysicalConstants};
use nalgebra::{Matrix2, Matrix4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Check {
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail }
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn consts() -> PhysicalConstants {
    PhysicalConstants::default()
}

const SECONDS_PER_DAY: f64 = 86_400.0;
const TABLE2_ROWS: [&str; 6] = ["A", "B", "C", "D", "E", "F"];
const TABLE3_ROWS: [&str; 3] = ["A", "B", "C"];

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.gen_range(lo.log10()..hi.log10()))
}

// ---------------------------------------------------------------- 1

pub fn delta2_reproduction() -> Check {
    let c = consts();
    let cfg = preset("table1").unwrap().config;
    let d2 = mode_params(&cfg, &c).unwrap().delta2;
    let pass = rel(d2, 0.132) <= 0.005 && rel(d2, 0.13) <= 0.02;
    Check::new(
        pass,
        format!(
            "δ² = {d2:.6} ({:+.2}% vs 0.132, {:+.2}% vs 0.13)",
            100.0 * (d2 / 0.132 - 1.0),
            100.0 * (d2 / 0.13 - 1.0)
        ),
    )
}

// ---------------------------------------------------------------- 2

pub fn table2_lambdas() -> Vec<f64> {
    let c = consts();
    TABLE2_ROWS
        .iter()
        .map(|row| {
            let cfg = preset(&format!("table2-{row}")).unwrap().config;
            lambda_bound_squeezing(&cfg, 1e-7, &c).unwrap().lambda_max
        })
        .collect()
}

pub fn table2_bounds() -> Check {
    let lambdas = table2_lambdas();
    let mut pass = true;
    let mut worst_value: f64 = 0.0;
    for (row, lam) in TABLE2_ROWS.iter().zip(&lambdas) {
        let reported = preset(&format!("table2-{row}"))
            .unwrap()
            .extra("reported_lambda")
            .unwrap();
        let e = rel(*lam, reported);
        worst_value = worst_value.max(e);
        pass &= e <= 0.15;
    }
    // λ_i/λ_j against (Tγ)_i/(Tγ)_j for neighbouring rows
    let mut worst_scaling: f64 = 0.0;
    for i in 0..5 {
        let a = preset(&format!("table2-{}", TABLE2_ROWS[i])).unwrap().config;
        let b = preset(&format!("table2-{}", TABLE2_ROWS[i + 1])).unwrap().config;
        let expected = (a.temperature * a.gamma) / (b.temperature * b.gamma);
        let e = rel(lambdas[i] / lambdas[i + 1], expected);
        worst_scaling = worst_scaling.max(e);
        pass &= e <= 1e-3;
    }
    Check::new(
        pass,
        format!(
            "λ = [{}] s⁻¹; worst deviation {:.1}%, worst T·γ scaling error {:.2e}",
            lambdas
                .iter()
                .map(|l| format!("{l:.3e}"))
                .collect::<Vec<_>>()
                .join(", "),
            100.0 * worst_value,
            worst_scaling
        ),
    )
}

// ---------------------------------------------------------------- 3

pub fn runtimes() -> Check {
    let c = consts();
    let mut pass = true;
    let mut days = Vec::new();
    for row in TABLE2_ROWS {
        let p = preset(&format!("table2-{row}")).unwrap();
        let d2 = mode_params(&p.config, &c).unwrap().delta2;
        let t = min_runtime(d2, p.config.gamma, RUNTIME_PREFACTOR) / SECONDS_PER_DAY;
        pass &= rel(t, p.extra("reported_t_min_days").unwrap()) <= 0.10;
        days.push(t);
    }
    Check::new(
        pass,
        format!(
            "t_min = [{}] days",
            days.iter().map(|d| format!("{d:.2}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

// ---------------------------------------------------------------- 4

pub fn curve_shape() -> Check {
    let c = consts();
    let cfg = preset("table1").unwrap().config;
    let grid = log_grid(R_GRID_MIN, R_GRID_MAX, 61);
    let curve = exclusion_curve(&cfg, &grid, Witness::SteadySqueezing, &c).unwrap();
    let at = |r: f64| {
        curve
            .points
            .iter()
            .find(|p| rel(p.r_csl, r) < 1e-12)
            .map(|p| p.lambda_max)
            .expect("grid contains decade points")
    };
    let ratio = at(1e-3) / at(1e-5);
    Check::new(
        ratio > 10.0 && curve.points.len() == 61,
        format!(
            "λ_max(1e-3)/λ_max(1e-5) = {ratio:.3e} over {} grid points",
            curve.points.len()
        ),
    )
}

// ---------------------------------------------------------------- 5

pub fn table3_bounds() -> Check {
    let c = consts();
    let mut pass = true;
    let mut parts = Vec::new();
    for row in TABLE3_ROWS {
        let p = preset(&format!("table3-{row}")).unwrap();
        let b = lambda_bound_entanglement(&p.config, 1e-7, &c).unwrap();
        let el = rel(b.lambda_max, p.extra("reported_lambda").unwrap());
        let ef = rel(b.f, p.extra("reported_f").unwrap());
        pass &= el <= 0.20 && ef <= 0.05;
        parts.push(format!(
            "{row}: λ={:.3e} ({:+.1}%), f={:.4}",
            b.lambda_max,
            100.0 * el,
            b.f
        ));
    }
    Check::new(pass, parts.join("; "))
}

// ---------------------------------------------------------------- 6

pub fn q_requirement_check() -> Check {
    let q = q_requirement(1.0, 2.0 * PI * 1e3, 1.4e-3, &consts());
    Check::new((5e10..=1e11).contains(&q), format!("Q_min = {q:.3e}"))
}

// ---------------------------------------------------------------- 7

pub fn dp_feasibility() -> Check {
    let c = consts();
    let cfg = preset("appendixD-dp").unwrap().config;
    let rep = dp_squeezing_feasibility(&cfg, &c).unwrap();
    let eta = rep.eta_g.unwrap();
    let r0 = rep.r0_min.unwrap_or(f64::NAN);
    let d2max = dp_entanglement_delta2_max(2.6e3, 2.0 * PI * 100.0, &c);
    let pass = eta > 1.0 && rel(r0, 5.9e-8) <= 0.10 && rel(rep.delta2, 1.26e-7) <= 0.05 && rel(d2max, 8.6e-14) <= 0.03;
    Check::new(
        pass,
        format!(
            "η_G = {eta:.4}, R0_min = {r0:.4e} m, δ² = {:.4e}, δ²_max = {d2max:.4e}",
            rep.delta2
        ),
    )
}

// ---------------------------------------------------------------- 8

pub fn xray_rescale() -> Check {
    let c = consts();
    let e_omega_ev = cutoff_energy(XRAY_REFERENCE_CUTOFF, &c) / c.e_charge;
    let e_rep = default_representative_energy(&c);
    let bound = xray_coloured_rescale(XRAY_WHITE_BOUND, XRAY_REFERENCE_CUTOFF, e_rep, &c);
    let lambda = bound * 1e-7 * 1e-7;
    let pass = rel(e_omega_ev, 6.5e-4) <= 0.02 && rel(bound, 7.09e11) <= 0.05 && rel(lambda, 7.09e-3) <= 0.05;
    Check::new(
        pass,
        format!(
            "E_Ω = {e_omega_ev:.4e} eV, E_rep = {:.3} keV, bound = {bound:.4e} s⁻¹m⁻², λ_max(1e-7) = {lambda:.4e} s⁻¹",
            e_rep / c.e_charge / 1e3
        ),
    )
}

// ---------------------------------------------------------------- 9

/// Closed forms against momentum-space quadrature over 20 log-spaced
/// collapse lengths and four separations per length.
pub fn diffusion_oracle() -> Check {
    let c = consts();
    let m = 0.44e-16;
    let radius = 150e-9;
    let sphere = MassModel::sphere(m, radius);
    let blob = MassModel::gaussian(m, radius);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for r in log_grid(1e-8, 1e-3, 20) {
        let kernel = Kernel::Csl { lambda: 1.0, r_csl: r };
        let closed = csl_self_diffusion(1.0, r, &sphere, &c);
        let num = numeric_diffusion(&sphere, &sphere, kernel, 0.0, &c).unwrap().value;
        worst = worst.max(rel(closed, num));
        n += 1;
        let rc = (r * r + radius * radius).sqrt();
        let scale = csl_cross_diffusion(1.0, r, &blob, 0.0, &c).value;
        for f in [0.5, 1.0, 5.0, 100.0] {
            let d = f * rc;
            let closed = csl_cross_diffusion(1.0, r, &blob, d, &c).value;
            let num = numeric_diffusion(&blob, &blob, kernel, d, &c).unwrap().value;
            // far beyond R_c the closed form underflows to zero while the
            // quadrature returns noise at its 1e-16·scale resolution
            worst = worst.max((closed - num).abs() / closed.abs().max(1e-10 * scale));
            n += 1;
        }
    }
    for r0 in [0.0, 5.9e-8, 1e-7, 1e-6] {
        let closed = dp_self_diffusion(r0, &blob, &c);
        let num = numeric_diffusion(&blob, &blob, Kernel::Dp { r0 }, 0.0, &c)
            .unwrap()
            .value;
        worst = worst.max(rel(closed, num));
        n += 1;
        let rd = (radius * radius + r0 * r0).sqrt();
        for f in [0.5, 1.0, 5.0, 100.0] {
            let d = f * rd;
            let closed = dp_cross_diffusion(r0, &blob, d, &c).unwrap();
            let num = numeric_diffusion(&blob, &blob, Kernel::Dp { r0 }, d, &c).unwrap().value;
            worst = worst.max(rel(closed, num));
            n += 1;
        }
    }
    Check::new(
        worst <= 1e-6,
        format!("{n} coefficients, worst relative error {worst:.2e}"),
    )
}

// ---------------------------------------------------------------- 10

/// A random configuration with δ² ∈ [1e-6, 0.5], γ/ω ∈ [1e-5, 1e-1] and
/// T ∈ [100 nK, 10 K].
pub fn random_config(rng: &mut ChaCha8Rng, c: &PhysicalConstants) -> ExperimentConfig {
    let mass = log_uniform(rng, 1e-18, 1e-15);
    let radius = (3.0 * mass / (4.0 * PI * 2000.0)).cbrt();
    let separation = radius * log_uniform(rng, 15.0, 1e3);
    let omega = 2.0 * PI * log_uniform(rng, 10.0, 1e4);
    let d2 = log_uniform(rng, 1e-6, 0.5);
    let charge = (d2 * PI * c.eps0 * mass * omega * omega * separation.powi(3)).sqrt();
    ExperimentConfig {
        mass,
        charge,
        eta: ChargeSign::Repulsive,
        radius,
        omega,
        gamma: omega * log_uniform(rng, 1e-5, 1e-1),
        temperature: log_uniform(rng, 1e-7, 10.0),
        separation,
        density: None,
    }
}

/// Worst relative discrepancy between the Lyapunov fixed point and the
/// closed-form steady state over `n` random configurations.
pub fn lyapunov_vs_closed_form(n: usize, seed: u64) -> f64 {
    let c = consts();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let cfg = random_config(&mut rng, &c);
        let mode = if k % 2 == 0 { Mode::Differential } else { Mode::Common };
        let mp = mode_params(&cfg, &c).unwrap();
        let wm = mp.omega_of(mode);
        let dth = thermal_diffusion(cfg.mass, cfg.gamma, wm, cfg.temperature, &c);
        let d_mode = dth * log_uniform(&mut rng, 1e-3, 1e3);
        let set = match mode {
            Mode::Differential => DiffusionSet::new(0.5 * d_mode, -0.5 * d_mode, dth),
            Mode::Common => DiffusionSet::new(0.5 * d_mode, 0.5 * d_mode, dth),
        };
        let a = drift_matrix(&mp, mode, cfg.gamma);
        let d = diffusion_matrix(&set, mode, cfg.mass, cfg.omega, &c);
        let lyap = lyapunov_steady(&a, &d).unwrap();
        let closed = steady_state(&mp, mode, d_mode, &cfg, &c).unwrap();
        worst = worst
            .max(rel(lyap[(0, 0)], closed.szz()))
            .max(rel(lyap[(1, 1)], closed.spp()))
            .max(lyap[(0, 1)].abs() / (closed.szz() * closed.spp()).sqrt());
    }
    worst
}

/// Least-squares slope of log(error) against log(t).
pub fn fitted_order(ts: &[f64], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub const SHORT_TIME_PHASES: [f64; 4] = [1e-3, 5e-4, 2.5e-4, 1.25e-4];

/// Errors of the first-order ν(t) against exact propagation of the
/// differential mode from N/2·I.
pub fn short_time_nu_errors() -> (Vec<f64>, Vec<f64>) {
    let c = consts();
    let mut cfg = preset("table1").unwrap().config;
    cfg.gamma = 1e-2 * cfg.omega;
    let mp = mode_params(&cfg, &c).unwrap();
    let dth = thermal_diffusion(cfg.mass, cfg.gamma, mp.omega_d, cfg.temperature, &c);
    let dd = 0.3 * mp.delta2 * cfg.mass * c.hbar * cfg.omega.powi(2) * mp.n;
    let set = DiffusionSet::new(0.5 * dd, -0.5 * dd, dth);
    let a = drift_matrix(&mp, Mode::Differential, cfg.gamma);
    let d = diffusion_matrix(&set, Mode::Differential, cfg.mass, cfg.omega, &c);
    let s0 = Matrix2::identity() * (0.5 * mp.n);
    let mut ts = Vec::new();
    let mut errs = Vec::new();
    for phase in SHORT_TIME_PHASES {
        let t = phase / cfg.omega;
        let exact = evolve_exact(&s0, &a, &d, t).symmetric_eigenvalues().min();
        let approx = short_time_nu(t, &cfg, dd, dth, &c).unwrap();
        ts.push(t);
        errs.push((approx - exact).abs());
    }
    (ts, errs)
}

/// Errors of the first-order ν̃₋(t) against exact propagation of two
/// particles, each squeezed by r from the thermal state.
pub fn short_time_nu_tilde_errors() -> (Vec<f64>, Vec<f64>) {
    let c = consts();
    let mut cfg = preset("table3-A").unwrap().config;
    cfg.gamma = 1e-2 * cfg.omega;
    cfg.temperature = 1e-3;
    let r = 0.4;
    let mp = mode_params(&cfg, &c).unwrap();
    let dth = thermal_diffusion(cfg.mass, cfg.gamma, cfg.omega, cfg.temperature, &c);
    let scale = mp.delta2 * cfg.mass * c.hbar * cfg.omega.powi(2) * mp.n;
    let (d11, d12) = (0.2 * scale, 0.1 * scale);
    let set = DiffusionSet::new(d11, d12, dth);
    let (a, d) = two_mode_matrices(cfg.omega, mp.delta2, cfg.gamma, &set, cfg.mass, &c);
    let s0 = CovMatrix4::squeezed_thermal(mp.n, r).0;
    let mut ts = Vec::new();
    let mut errs = Vec::new();
    for phase in SHORT_TIME_PHASES {
        let t = phase / cfg.omega;
        let exact = ppt_eigen(&CovMatrix4::new(evolve_exact(&s0, &a, &d, t)))
            .unwrap()
            .nu_minus;
        let approx = short_time_nu_tilde(t, r, &cfg, d11, d12, dth, &c).unwrap();
        ts.push(t);
        errs.push((approx - exact).abs());
    }
    (ts, errs)
}

/// A random physical two-mode covariance S·diag(ν₁,ν₁,ν₂,ν₂)·Sᵀ.
pub fn random_physical_state(rng: &mut ChaCha8Rng) -> CovMatrix4 {
    let nu1 = 0.5 + log_uniform(rng, 1e-6, 5.0);
    let nu2 = 0.5 + log_uniform(rng, 1e-6, 5.0);
    let williamson = Matrix4::from_diagonal(&nalgebra::Vector4::new(nu1, nu1, nu2, nu2));
    let mut angle = || rng.gen_range(0.0..2.0 * PI);
    let r1 = maps::rotations(angle(), angle());
    let r2 = maps::rotations(angle(), angle());
    let bs = maps::beam_splitter(angle());
    let sq = maps::squeezers(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
    let s = r2 * bs * sq * r1;
    CovMatrix4::new(s * williamson * s.transpose())
}

/// Worst relative difference between the closed-form partially transposed
/// spectrum and the moduli of iΣσ̃ eigenvalues.
pub fn ppt_agreement(n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let sigma = random_physical_state(&mut rng);
        let f = ppt_eigen(&sigma).unwrap();
        let g = ppt_eigen_direct(&sigma);
        worst = worst.max(rel(f.nu_minus, g.nu_minus)).max(rel(f.nu_plus, g.nu_plus));
    }
    worst
}

pub fn dynamics_oracle() -> Check {
    let lyap = lyapunov_vs_closed_form(100, 11);
    let (ts, e_nu) = short_time_nu_errors();
    let (ts2, e_tilde) = short_time_nu_tilde_errors();
    let p_nu = fitted_order(&ts, &e_nu);
    let p_tilde = fitted_order(&ts2, &e_tilde);
    let ppt = ppt_agreement(1000, 12);
    let pass = lyap <= 1e-10 && (p_nu - 2.0).abs() <= 0.1 && (p_tilde - 2.0).abs() <= 0.1 && ppt <= 1e-10;
    Check::new(
        pass,
        format!(
            "Lyapunov vs closed form {lyap:.2e}; error order ν {p_nu:.3}, ν̃₋ {p_tilde:.3}; PPT formula vs eigen-moduli {ppt:.2e}"
        ),
    )
}

// ---------------------------------------------------------------- 11

pub fn monte_carlo(n_traj: usize, seed: u64) -> Check {
    let c = consts();
    let mut cfg = preset("table1").unwrap().config;
    cfg.gamma = 1e-2 * cfg.omega;
    let mp = mode_params(&cfg, &c).unwrap();
    let dth = thermal_diffusion(cfg.mass, cfg.gamma, mp.omega_d, cfg.temperature, &c);
    let white = validate_mode_steady_state(&cfg, Mode::Differential, dth, None, n_traj, seed, &c).unwrap();
    let coloured =
        validate_mode_steady_state(&cfg, Mode::Differential, dth, Some(mp.omega_d), n_traj, seed + 1, &c).unwrap();
    let (frac, frac_se) = coloured.collapse_fraction.unwrap();
    let zs = |r: &collapse_kit::sde::ValidationReport| {
        r.entries
            .iter()
            .map(|e| format!("{}={:+.2}", e.entry, e.z))
            .collect::<Vec<_>>()
            .join(" ")
    };
    Check::new(
        white.pass && coloured.pass,
        format!(
            "γ/ω = {}, {} trajectories; white z: {}; coloured (Ω = ω_d) z: {}; collapse part suppressed to {:.3} ± {:.3}",
            white.gamma_over_omega,
            n_traj,
            zs(&white),
            zs(&coloured),
            frac,
            frac_se
        ),
    )
}

// ---------------------------------------------------------------- 12

pub fn coth_inequality(n: usize, seed: u64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..n {
        let x = log_uniform(&mut rng, 1e-6, 20.0);
        let beta = 1.0 + log_uniform(&mut rng, 1e-6, 100.0);
        let r = coth_ratio(x, beta);
        let slack = 4.0 * f64::EPSILON;
        if !(r >= (1.0 / beta) * (1.0 - slack) && r <= 1.0 + slack) {
            bad += 1;
        }
    }
    (n - bad, n)
}

/// σ_ZZ/(N/2) − 1 when collapse diffusion equals the squeezing budget.
/// `exact` picks the exact threshold instead of the N·mγħωδ² budget.
pub fn squeezing_saturation(preset_name: &str, exact: bool) -> f64 {
    let c = consts();
    let cfg = preset(preset_name).unwrap().config;
    let bound = squeezing_diffusion_bound(&cfg, &c).unwrap();
    let lam = if exact {
        lambda_for_budget(&cfg, 1e-7, bound.d_threshold_exact, &c).lambda_max
    } else {
        lambda_bound_squeezing(&cfg, 1e-7, &c).unwrap().lambda_max
    };
    let d11 = csl_self_diffusion(lam, 1e-7, &MassModel::sphere(cfg.mass, cfg.radius), &c);
    let d12 = csl_cross_diffusion(
        lam,
        1e-7,
        &MassModel::gaussian(cfg.mass, cfg.radius),
        cfg.separation,
        &c,
    )
    .value;
    let mp = mode_params(&cfg, &c).unwrap();
    let s = steady_state(&mp, Mode::Differential, d11 - d12, &cfg, &c).unwrap();
    s.szz() / (0.5 * mp.n) - 1.0
}

/// Residual of the entanglement criterion at the λ bound, relative to
/// the squared coupling term.
pub fn entanglement_saturation(preset_name: &str) -> f64 {
    let c = consts();
    let cfg = preset(preset_name).unwrap().config;
    let lam = lambda_bound_entanglement(&cfg, 1e-7, &c).unwrap().lambda_max;
    let mp = mode_params(&cfg, &c).unwrap();
    let dth = thermal_diffusion(cfg.mass, cfg.gamma, cfg.omega, cfg.temperature, &c);
    let d11 = csl_self_diffusion(lam, 1e-7, &MassModel::sphere(cfg.mass, cfg.radius), &c);
    let d12 = csl_cross_diffusion(
        lam,
        1e-7,
        &MassModel::gaussian(cfg.mass, cfg.radius),
        cfg.separation,
        &c,
    )
    .value;
    let k = mp.delta2 * cfg.mass * cfg.omega.powi(2) * c.hbar;
    entanglement_margin(d11, d12, dth, &mp, cfg.mass, cfg.omega, &c) / (k * k)
}

/// Worst off-block norm of the rotated drift and diffusion, relative to ‖A‖.
pub fn mode_decoupling(n: usize, seed: u64) -> f64 {
    let c = consts();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = mode_rotation();
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let cfg = random_config(&mut rng, &c);
        let mp = mode_params(&cfg, &c).unwrap();
        let d11 = log_uniform(&mut rng, 1e-45, 1e-35);
        let d12 = d11 * rng.gen_range(-1.0..1.0);
        let dth = thermal_diffusion(cfg.mass, cfg.gamma, cfg.omega, cfg.temperature, &c);
        let (a, d) = two_mode_matrices(
            cfg.omega,
            mp.delta2,
            cfg.gamma,
            &DiffusionSet::new(d11, d12, dth),
            cfg.mass,
            &c,
        );
        for (m, norm) in [(a, a.norm()), (d, d.norm())] {
            let rot = r * m * r.transpose();
            let off = rot
                .fixed_view::<2, 2>(0, 2)
                .norm()
                .hypot(rot.fixed_view::<2, 2>(2, 0).norm());
            worst = worst.max(off / norm);
        }
    }
    worst
}

/// Smallest ν₋ seen while propagating random physical states under
/// random physical noise (thermal diffusion plus |D12| ≤ D11 collapse).
pub fn physicality(n: usize, seed: u64) -> f64 {
    let c = consts();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lowest = f64::INFINITY;
    for _ in 0..n {
        let mut cfg = random_config(&mut rng, &c);
        cfg.gamma = cfg.omega * log_uniform(&mut rng, 1e-3, 1e-1);
        let mp = mode_params(&cfg, &c).unwrap();
        let dth = thermal_diffusion(cfg.mass, cfg.gamma, cfg.omega, cfg.temperature, &c);
        let d11 = dth * log_uniform(&mut rng, 1e-4, 10.0);
        let d12 = d11 * rng.gen_range(-1.0..1.0);
        let set = DiffusionSet::new(d11, d12, dth);
        let (a, d) = two_mode_matrices(cfg.omega, mp.delta2, cfg.gamma, &set, cfg.mass, &c);
        let mut sigma = random_physical_state(&mut rng).0;
        let h = max_step(&a);
        let period = 2.0 * PI / cfg.omega;
        for _ in 0..40 {
            sigma = evolve(&sigma, &a, &d, 0.25 * period, h).unwrap();
            let nu = CovMatrix4::new(sigma).symplectic_eigen().unwrap().nu_minus;
            lowest = lowest.min(nu);
        }
    }
    lowest
}

/// Largest |z| of the sampled (dW₁, dW₂) covariance against its target.
pub fn noise_factorisation(seed: u64) -> f64 {
    let (d11, d12, n) = (2.0, 1.3, 200_000usize);
    let s = sample_noise_covariance(d11, d12, n, seed).unwrap();
    let nf = n as f64;
    let se_var = (2.0 * d11 * d11 / nf).sqrt();
    let se_cov = ((d11 * d11 + d12 * d12) / nf).sqrt();
    [(s[0] - d11) / se_var, (s[1] - d12) / se_cov, (s[2] - d11) / se_var]
        .iter()
        .fold(0.0f64, |m, z| m.max(z.abs()))
}

pub fn property_suites() -> Check {
    let (ok, total) = coth_inequality(10_000, 21);
    let sq_high_t = ["table2-A", "table2-B", "table2-C"]
        .iter()
        .map(|p| squeezing_saturation(p, false).abs())
        .fold(0.0, f64::max);
    let sq_exact = TABLE2_ROWS
        .iter()
        .map(|r| squeezing_saturation(&format!("table2-{r}"), true).abs())
        .fold(0.0, f64::max);
    let ent = TABLE3_ROWS
        .iter()
        .map(|r| entanglement_saturation(&format!("table3-{r}")).abs())
        .fold(0.0, f64::max);
    let block = mode_decoupling(200, 22);
    let nu_min = physicality(50, 23);
    let zmax = noise_factorisation(24);
    let pass = ok == total
        && sq_high_t <= 1e-9
        && sq_exact <= 1e-9
        && ent <= 1e-9
        && block < 1e-14
        && nu_min >= 0.5 - 1e-9
        && zmax < 3.0;
    Check::new(
        pass,
        format!(
            "coth {ok}/{total}; squeezing saturation {sq_high_t:.1e} (high-T rows), {sq_exact:.1e} (exact threshold, all rows); \
             entanglement residual {ent:.1e}; off-block {block:.1e}; min ν₋ {nu_min:.12}; noise |z| ≤ {zmax:.2}"
        ),
    )
}
