//! Monte Carlo ensembles: conservation, correlated-noise bookkeeping,
//! discretisation bias, the coloured-force generator and steady states.

mod common;

use collapse_kit::diffusion::thermal_diffusion;
use collapse_kit::dynamics::{drift_matrix, mode_params, steady_state};
use collapse_kit::presets::preset;
use collapse_kit::sde::{ou_path, simulate, validate_mode_steady_state, Drift, NoiseBlock, SdeConfig};
use collapse_kit::{Mode, PhysicalConstants};
use nalgebra::{DMatrix, Matrix2, Matrix4};

fn base(drift: Drift, white: NoiseBlock, dt: f64, t_end: f64, n_traj: usize) -> SdeConfig {
    let dim = drift.dim();
    SdeConfig {
        drift,
        white,
        coloured: None,
        sigma0: DMatrix::identity(dim, dim) * 0.5,
        dt,
        t_end,
        n_traj,
        seed: 99,
        n_records: 10,
        window: None,
    }
}

#[test]
fn undamped_noiseless_motion_keeps_its_energy() {
    let w = 1.0;
    let drift = Drift::Mode(Matrix2::new(0.0, w, -w, 0.0));
    let mut cfg = base(
        drift,
        NoiseBlock::single(0.0),
        0.0,
        1000.0 * 2.0 * std::f64::consts::PI,
        64,
    );
    cfg.dt = cfg.step_limit();
    let stats = simulate(&cfg).unwrap();
    let energy = |k: usize| stats.cov_estimates[k][(0, 0)] + stats.cov_estimates[k][(1, 1)];
    let e0 = energy(0);
    for k in 1..stats.times.len() {
        // the kick–drift–kick step conserves a modified energy; Z² + P² only wobbles by O((ωh)²)
        assert!(common::rel(energy(k), e0) < 2e-3, "t = {}", stats.times[k]);
    }
}

#[test]
fn identical_noise_drives_only_the_common_mode() {
    let w = 1.0;
    #[rustfmt::skip]
    let a = Matrix4::new(
        0.0, w,   0.0, 0.0,
        -w,  0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, w,
        0.0, 0.0, -w,  0.0,
    );
    let d = 0.02;
    let mut cfg = base(
        Drift::TwoParticle(a),
        NoiseBlock {
            self_pp: d,
            cross_pp: d,
        },
        0.0,
        50.0,
        4000,
    );
    cfg.dt = cfg.step_limit();
    let stats = simulate(&cfg).unwrap();
    let last = stats.times.len() - 1;
    let c = |k: usize, i: usize, j: usize| stats.cov_estimates[k][(i, j)];
    let se = |k: usize, i: usize, j: usize| stats.std_errors[k][(i, j)];
    // (Z_d² + P_d²) and (Z_c² + P_c²) from the lab-frame second moments
    let diff = |k| 0.5 * (c(k, 0, 0) + c(k, 2, 2) - 2.0 * c(k, 0, 2) + c(k, 1, 1) + c(k, 3, 3) - 2.0 * c(k, 1, 3));
    let comm = |k| 0.5 * (c(k, 0, 0) + c(k, 2, 2) + 2.0 * c(k, 0, 2) + c(k, 1, 1) + c(k, 3, 3) + 2.0 * c(k, 1, 3));
    assert!(common::rel(diff(last), diff(0)) < 2e-3);
    let growth = comm(last) - comm(0);
    let expected = 2.0 * d * stats.times[last];
    let se_sum: f64 = [(0, 0), (2, 2), (0, 2), (1, 1), (3, 3), (1, 3)]
        .iter()
        .map(|&(i, j)| se(last, i, j) + se(0, i, j))
        .sum();
    assert!(
        (growth - expected).abs() < 3.0 * se_sum,
        "{growth} vs {expected} (se {se_sum})"
    );
}

/// Stationary covariance of the discrete map actually used by the
/// integrator (kick–drift–kick, then Euler damping and noise) for one mode.
fn discrete_steady_state(a: &Matrix2<f64>, d_pp: f64, h: f64) -> Matrix2<f64> {
    let (w, k, g) = (a[(0, 1)], a[(1, 0)], -a[(1, 1)]);
    let kick = Matrix2::new(1.0, 0.0, 0.5 * h * k, 1.0);
    let drift = Matrix2::new(1.0, h * w, 0.0, 1.0);
    let damp = Matrix2::new(1.0, 0.0, 0.0, 1.0 - g * h);
    let m = damp * kick * drift * kick;
    let q = Matrix2::new(0.0, 0.0, 0.0, d_pp * h);
    // Σ = MΣMᵀ + Q by doubling: Σ_{2n} = Σ_n + Mⁿ Σ_n (Mⁿ)ᵀ
    let mut s = q;
    let mut power = m;
    for _ in 0..64 {
        let term = power * s * power.transpose();
        s += term;
        if term.norm() < 1e-17 * s.norm() {
            break;
        }
        power = power * power;
    }
    s
}

#[test]
fn halving_the_step_moves_the_steady_state_by_less_than_one_standard_error() {
    let c = PhysicalConstants::default();
    let mut cfg = preset("table1").unwrap().config;
    cfg.gamma = 1e-2 * cfg.omega;
    let mp = mode_params(&cfg, &c).unwrap();
    let dth = thermal_diffusion(cfg.mass, cfg.gamma, mp.omega_d, cfg.temperature, &c);
    let a = drift_matrix(&mp, Mode::Differential, cfg.gamma);
    let d_pp = 2.0 * dth / (cfg.mass * c.hbar * cfg.omega);

    // a short run fixes the ensemble standard error, rescaled to 10⁴ trajectories
    let n = 1000;
    let report = validate_mode_steady_state(&cfg, Mode::Differential, dth, None, n, 5, &c).unwrap();
    assert!(report.pass, "{report:?}");
    let se_10k: Vec<f64> = report
        .entries
        .iter()
        .map(|e| e.std_error * (n as f64 / 1e4).sqrt())
        .collect();

    let s1 = discrete_steady_state(&a, d_pp, report.dt);
    let s2 = discrete_steady_state(&a, d_pp, 0.5 * report.dt);
    let exact = steady_state(&mp, Mode::Differential, dth, &cfg, &c).unwrap();
    for (e, (i, j)) in [(0, 0), (0, 1), (1, 1)].into_iter().enumerate() {
        assert!((s1[(i, j)] - s2[(i, j)]).abs() < se_10k[e], "entry {e}");
    }
    // the bias vanishes with the step: O(γh) from the Euler damping plus
    // O((ωh)²) from kick–drift–kick, so halving divides it by 2 to 4
    let b1 = s1[(0, 0)] - exact.szz();
    let b2 = s2[(0, 0)] - exact.szz();
    assert!((1.9..4.1).contains(&(b1 / b2)), "bias ratio {}: {b1:e} {b2:e}", b1 / b2);
    assert!(b1.abs() < 1e-3 * exact.szz());
}

#[test]
fn coloured_force_has_exponential_autocorrelation() {
    let (d, cutoff) = (3.0, 2.0);
    let h = 0.05 / cutoff;
    let n = 400_000;
    let path = ou_path(d, cutoff, h, n, 17);
    for lag_time in [0.0, 1.0 / cutoff, 3.0 / cutoff] {
        let lag = (lag_time / h).round() as usize;
        let m = path.len() - lag;
        let prods: Vec<f64> = (0..m).map(|i| path[i] * path[i + lag]).collect();
        let mean = prods.iter().sum::<f64>() / m as f64;
        // the samples are correlated over ~1/Ω; use block means for the error
        let block = (10.0 / (cutoff * h)) as usize;
        let blocks: Vec<f64> = prods
            .chunks(block)
            .filter(|b| b.len() == block)
            .map(|b| b.iter().sum::<f64>() / block as f64)
            .collect();
        let nb = blocks.len() as f64;
        let bm = blocks.iter().sum::<f64>() / nb;
        let se = (blocks.iter().map(|x| (x - bm).powi(2)).sum::<f64>() / (nb - 1.0) / nb).sqrt();
        let target = d * 0.5 * cutoff * (-cutoff * lag as f64 * h).exp();
        assert!(
            (mean - target).abs() < 3.0 * se,
            "lag {lag_time}: {mean} vs {target} ± {se}"
        );
    }
}

#[test]
fn white_and_coloured_steady_states_at_moderate_ensemble_size() {
    let c = PhysicalConstants::default();
    let mut cfg = preset("table1").unwrap().config;
    cfg.gamma = 1e-2 * cfg.omega;
    let mp = mode_params(&cfg, &c).unwrap();
    let dth = thermal_diffusion(cfg.mass, cfg.gamma, mp.omega, cfg.temperature, &c);
    let white = validate_mode_steady_state(&cfg, Mode::Common, 0.5 * dth, None, 1000, 3, &c).unwrap();
    assert!(white.pass, "{white:?}");
    let coloured = validate_mode_steady_state(&cfg, Mode::Common, dth, Some(3.0 * mp.omega), 500, 4, &c).unwrap();
    assert!(coloured.pass, "{coloured:?}");
}
