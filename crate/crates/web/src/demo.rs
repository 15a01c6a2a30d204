//! Plain-Rust implementations behind the browser bindings.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use collapse_kit::bounds::{exclusion_curve as curve, log_grid, Witness};
use collapse_kit::diffusion::{collapse_pair, thermal_diffusion};
use collapse_kit::dynamics::{
    coloured_steady_state, diffusion_matrix, drift_matrix, evolve_exact, mode_params, steady_state,
};
use collapse_kit::presets::{catalog, preset};
use collapse_kit::{CollapseParams, CovMatrix2, DiffusionSet, Mode, PhysicalConstants, Preset};

pub type Result<T> = std::result::Result<T, String>;

/// Longest series the page may request.
pub const MAX_POINTS: usize = 2000;

fn load(name: &str) -> Result<Preset> {
    preset(name).map_err(|e| e.to_string())
}

fn check_points(n: usize) -> Result<()> {
    if n == 0 || n > MAX_POINTS {
        return Err(format!("number of points must be in 1..={MAX_POINTS}"));
    }
    Ok(())
}

fn check_range(lo: f64, hi: f64) -> Result<()> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err("range must satisfy 0 < lo ≤ hi".into());
    }
    Ok(())
}

fn interleave(xs: &[f64], ys: impl IntoIterator<Item = f64>) -> Vec<f64> {
    xs.iter().zip(ys).flat_map(|(&x, y)| [x, y]).collect()
}

pub fn preset_names() -> Vec<String> {
    catalog().into_iter().map(|p| p.name).collect()
}

pub fn exclusion_curve(name: &str, witness: &str, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    check_points(n)?;
    check_range(lo, hi)?;
    let witness = match witness {
        "squeeze" => Witness::SteadySqueezing,
        "entangle" => Witness::ShortTimeEntanglement,
        other => return Err(format!("unknown witness `{other}`")),
    };
    let p = load(name)?;
    let grid = log_grid(lo, hi, n);
    let c = curve(&p.config, &grid, witness, &PhysicalConstants::default()).map_err(|e| e.to_string())?;
    Ok(c.points.iter().flat_map(|q| [q.r_csl, q.lambda_max]).collect())
}

fn csl(lambda: f64, r_csl: f64) -> Result<CollapseParams> {
    let params = CollapseParams::Csl { lambda, r_csl };
    params.validate().map_err(|e| e.to_string())?;
    Ok(params)
}

pub fn squeezing_trace(name: &str, lambda: f64, r_csl: f64, t_end: f64, n: usize) -> Result<Vec<f64>> {
    check_points(n)?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err("end time must be positive".into());
    }
    let p = load(name)?;
    let cfg = &p.config;
    let consts = PhysicalConstants::default();
    let mp = mode_params(cfg, &consts).map_err(|e| e.to_string())?;
    let (d11, d12) = collapse_pair(cfg, &csl(lambda, r_csl)?, &consts);
    let mode = Mode::Differential;
    let dth = thermal_diffusion(cfg.mass, cfg.gamma, mp.omega_of(mode), cfg.temperature, &consts);
    let set = DiffusionSet::new(d11, d12.value, dth);
    let a = drift_matrix(&mp, mode, cfg.gamma);
    let d = diffusion_matrix(&set, mode, cfg.mass, cfg.omega, &consts);

    let half_n = 0.5 * mp.n;
    let dt = t_end / n as f64;
    let mut s = CovMatrix2::thermal(mp.n).0;
    let mut out = Vec::with_capacity(2 * (n + 1));
    for k in 0..=n {
        if k > 0 {
            s = evolve_exact(&s, &a, &d, dt);
        }
        out.push(k as f64 * dt);
        out.push(s.symmetric_eigenvalues().min() / half_n);
    }
    Ok(out)
}

pub fn coloured_scan(name: &str, lambda: f64, r_csl: f64, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    check_points(n)?;
    check_range(lo, hi)?;
    let p = load(name)?;
    let cfg = &p.config;
    let consts = PhysicalConstants::default();
    let mp = mode_params(cfg, &consts).map_err(|e| e.to_string())?;
    let (d11, d12) = collapse_pair(cfg, &csl(lambda, r_csl)?, &consts);
    let dd = d11 - d12.value;
    let half_n = 0.5 * mp.n;
    let cutoffs = log_grid(lo, hi, n);
    let ratios = cutoffs
        .iter()
        .map(|&w| {
            coloured_steady_state(&mp, Mode::Differential, dd, cfg, &consts, w)
                .map(|s| s.szz() / half_n)
                .map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(interleave(&cutoffs, ratios))
}

pub fn white_steady_ratio(name: &str, lambda: f64, r_csl: f64) -> Result<f64> {
    let p = load(name)?;
    let cfg = &p.config;
    let consts = PhysicalConstants::default();
    let mp = mode_params(cfg, &consts).map_err(|e| e.to_string())?;
    let (d11, d12) = collapse_pair(cfg, &csl(lambda, r_csl)?, &consts);
    let s = steady_state(&mp, Mode::Differential, d11 - d12.value, cfg, &consts).map_err(|e| e.to_string())?;
    Ok(s.szz() / (0.5 * mp.n))
}
