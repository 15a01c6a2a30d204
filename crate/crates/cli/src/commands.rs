//! One function per subcommand, each a thin wrapper over the library.

use std::path::Path;

use collapse_kit::bounds::{
    cutoff_energy, default_representative_energy, dp_entanglement_feasibility, dp_squeezing_feasibility,
    exclusion_curve, lambda_bound_entanglement, lambda_bound_squeezing, q_requirement, squeezing_diffusion_bound,
    xray_coloured_rescale, xray_rate, FeasibilityReport, Witness, XRAY_REFERENCE_CUTOFF, XRAY_WHITE_BOUND,
};
use collapse_kit::config::load_config;
use collapse_kit::diffusion::{collapse_pair, thermal_diffusion};
use collapse_kit::dynamics::{
    coloured_steady_state, diffusion_matrix, drift_matrix, evolve, evolve_exact, max_step, mode_params, steady_state,
    two_mode_system,
};
use collapse_kit::presets::{catalog, preset_with_user_dir};
use collapse_kit::sde::validate_steady_state;
use collapse_kit::short_time::{entanglement_margin, short_time_nu, short_time_nu_tilde};
use collapse_kit::symplectic::{log_negativity_from_nu, ppt_eigen};
use collapse_kit::{CollapseParams, CovMatrix2, CovMatrix4, DiffusionSet, LoadedConfig, Mode, PhysicalConstants};
use nalgebra::SMatrix;
use serde_json::{json, Value};

use crate::args::{Cli, CollapseArgs, Command, ModeArg, ModelArg, Source, SystemArg, WitnessArg};
use crate::error::CliError;
use crate::output::{emit, timestamp, Report};

/// Above this many RK4 steps per output interval the exact propagator is used.
const MAX_RK_STEPS: f64 = 1e5;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let report = match &cli.command {
        Command::Coeffs { source, collapse } => coeffs(source, collapse)?,
        Command::Exclude { source, grid, witness } => exclude(source, grid, *witness)?,
        Command::Steady { source, collapse, mode } => steady(source, collapse, *mode)?,
        Command::Evolve {
            source,
            collapse,
            t_end,
            records,
            system,
            mode,
            squeeze,
        } => evolve_cmd(source, collapse, *t_end, *records, *system, *mode, *squeeze)?,
        Command::Nu {
            source,
            collapse,
            t,
            squeeze,
        } => nu(source, collapse, *t, *squeeze)?,
        Command::Entangle { source, collapse } => entangle(source, collapse)?,
        Command::Dp { source } => dp(source)?,
        Command::Xray {
            collapse,
            energy_kev,
            protons,
            electrons,
            e_rep_kev,
            at_r,
        } => xray(collapse, *energy_kev, *protons, *electrons, *e_rep_kev, *at_r)?,
        Command::Validate {
            source,
            collapse,
            mode,
            seed,
            n_traj,
            gamma_over_omega,
        } => {
            let report = validate(source, collapse, *mode, *seed, *n_traj, *gamma_over_omega)?;
            emit(&report, cli.json, cli.out.as_deref())?;
            if report.result["pass"] != Value::Bool(true) {
                return Err(CliError::Validation(format!(
                    "Monte Carlo steady state deviates from the closed form (max |z| = {})",
                    report.result["max_abs_z"]
                )));
            }
            return Ok(());
        }
        Command::Presets => presets(),
    };
    emit(&report, cli.json, cli.out.as_deref())
}

// ------------------------------------------------------------ inputs

fn load(source: &Source) -> Result<LoadedConfig, CliError> {
    if let Some(path) = &source.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        return Ok(load_config(&text)?);
    }
    let name = source.preset.as_deref().expect("clap enforces one source");
    let dir = std::env::var_os("COLLAPSE_KIT_PRESETS");
    let p = preset_with_user_dir(name, dir.as_deref().map(Path::new))?;
    Ok(LoadedConfig {
        experiment: p.config,
        collapse: p.collapse,
        constants: PhysicalConstants::default(),
        extras: p.extras,
        warnings: Vec::new(),
    })
}

fn require(value: Option<f64>, flag: &str, model: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--model {model} requires --{flag}")))
}

/// Loads the configuration and applies collapse flags on top of it.
fn load_with_collapse(source: &Source, args: &CollapseArgs) -> Result<LoadedConfig, CliError> {
    let mut cfg = load(source)?;
    if let Some(model) = args.model {
        cfg.collapse = Some(collapse_from_flags(model, args)?);
    }
    for w in &cfg.warnings {
        eprintln!("warning: {w}");
    }
    Ok(cfg)
}

fn collapse_from_flags(model: ModelArg, args: &CollapseArgs) -> Result<CollapseParams, CliError> {
    let params = match model {
        ModelArg::Csl => CollapseParams::Csl {
            lambda: require(args.lambda, "lambda", "csl")?,
            r_csl: require(args.r, "r", "csl")?,
        },
        ModelArg::ColouredCsl => CollapseParams::ColouredCsl {
            lambda: require(args.lambda, "lambda", "coloured-csl")?,
            r_csl: require(args.r, "r", "coloured-csl")?,
            cutoff: require(args.cutoff, "cutoff", "coloured-csl")?,
        },
        ModelArg::Dp => CollapseParams::Dp {
            r0: require(args.r0, "R0", "dp")?,
        },
    };
    params.validate()?;
    Ok(params)
}

fn model_json(c: &Option<CollapseParams>) -> Value {
    match c {
        None => Value::Null,
        Some(CollapseParams::Csl { lambda, r_csl }) => json!({"model": "csl", "lambda": lambda, "r_csl": r_csl}),
        Some(CollapseParams::ColouredCsl { lambda, r_csl, cutoff }) => {
            json!({"model": "coloured-csl", "lambda": lambda, "r_csl": r_csl, "cutoff": cutoff})
        }
        Some(CollapseParams::Dp { r0 }) => json!({"model": "dp", "R0": r0}),
    }
}

fn describe_model(report: &mut Report, c: &Option<CollapseParams>) {
    match c {
        None => report.meta("model", "none"),
        Some(p) => report.meta("model", p.model().key()),
    }
}

/// Collapse (D11, D12) for the configuration, zero without a model.
fn collapse_coefficients(cfg: &LoadedConfig) -> (f64, f64, bool) {
    match &cfg.collapse {
        None => (0.0, 0.0, false),
        Some(p) => {
            let (d11, d12) = collapse_pair(&cfg.experiment, p, &cfg.constants);
            (d11, d12.value, d12.underflow)
        }
    }
}

fn mode_diffusion(mode: Mode, d11: f64, d12: f64) -> f64 {
    match mode {
        Mode::Differential => d11 - d12,
        Mode::Common => d11 + d12,
    }
}

fn mode_key(mode: ModeArg) -> &'static str {
    match mode {
        ModeArg::Differential => "differential",
        ModeArg::Common => "common",
    }
}

// ------------------------------------------------------------ commands

fn coeffs(source: &Source, args: &CollapseArgs) -> Result<Report, CliError> {
    let cfg = load_with_collapse(source, args)?;
    let Some(params) = cfg.collapse else {
        return Err(CliError::Usage("coeffs needs a collapse model (--model)".into()));
    };
    let e = &cfg.experiment;
    let mp = mode_params(e, &cfg.constants)?;
    let set = DiffusionSet::for_experiment(e, Some(&params), e.omega, &cfg.constants);
    let dth_d = thermal_diffusion(e.mass, e.gamma, mp.omega_d, e.temperature, &cfg.constants);
    let mut r = Report::new("coeffs", Some(cfg.clone()), "quantity,value");
    describe_model(&mut r, &cfg.collapse);
    r.meta("units", "kg^2 m^2 s^-3");
    for (k, v) in [
        ("d11", set.d11),
        ("d12", set.d12),
        ("dd", set.dd),
        ("dc", set.dc),
        ("dth", set.dth),
        ("dth_differential", dth_d),
    ] {
        r.rows.push(format!("{k},{v:.8e}"));
    }
    r.rows.push(format!("cross_underflow,{}", set.cross_underflow as u8));
    r.result = json!({
        "collapse": model_json(&cfg.collapse),
        "d11": set.d11,
        "d12": set.d12,
        "dd": set.dd,
        "dc": set.dc,
        "dth": set.dth,
        "dth_differential": dth_d,
        "cross_underflow": set.cross_underflow,
    });
    Ok(r)
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "--grid expects lo:hi:n with 0 < lo < hi and n ≥ 1, got {spec:?}"
        ))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !(lo > 0.0) || !(hi >= lo) || (n > 1 && hi == lo) {
        return Err(bad());
    }
    Ok(collapse_kit::bounds::log_grid(lo, hi, n))
}

fn exclude(source: &Source, grid: &str, witness: WitnessArg) -> Result<Report, CliError> {
    let cfg = load_with_collapse(source, &CollapseArgs::default())?;
    let grid = parse_grid(grid)?;
    let w = match witness {
        WitnessArg::Squeeze => Witness::SteadySqueezing,
        WitnessArg::Entangle => Witness::ShortTimeEntanglement,
    };
    let mut curve = exclusion_curve(&cfg.experiment, &grid, w, &cfg.constants)?;
    curve.generated_at = Some(timestamp());
    let mut r = Report::new("exclude", Some(cfg), "r_csl,lambda_max,flag");
    r.meta("witness", w.key());
    r.meta("generated_at", curve.generated_at.as_deref().unwrap_or_default());
    for p in &curve.points {
        r.rows
            .push(format!("{:e},{:e},{}", p.r_csl, p.lambda_max, p.flag.key()));
    }
    r.result = json!({
        "witness": w.key(),
        "config_id": curve.config_id,
        "points": curve.points.iter().map(|p| json!({
            "r_csl": p.r_csl,
            "lambda_max": p.lambda_max,
            "flag": p.flag.key(),
        })).collect::<Vec<_>>(),
    });
    Ok(r)
}

fn steady(source: &Source, args: &CollapseArgs, mode_arg: ModeArg) -> Result<Report, CliError> {
    let cfg = load_with_collapse(source, args)?;
    let e = &cfg.experiment;
    let c = &cfg.constants;
    let mode: Mode = mode_arg.into();
    let mp = mode_params(e, c)?;
    let (d11, d12, _) = collapse_coefficients(&cfg);
    let d_mode = mode_diffusion(mode, d11, d12);
    let sigma = match cfg.collapse {
        Some(CollapseParams::ColouredCsl { cutoff, .. }) => coloured_steady_state(&mp, mode, d_mode, e, c, cutoff)?,
        _ => steady_state(&mp, mode, d_mode, e, c)?,
    };
    let half_n = 0.5 * mp.n;
    let ratio = sigma.szz() / half_n;
    let mut r = Report::new("steady", Some(cfg.clone()), "quantity,value");
    describe_model(&mut r, &cfg.collapse);
    r.meta("mode", mode_key(mode_arg));
    for (k, v) in [
        ("sigma_zz", sigma.szz()),
        ("sigma_zp", sigma.szp()),
        ("sigma_pp", sigma.spp()),
        ("half_n", half_n),
        ("zz_over_half_n", ratio),
        ("d_mode", d_mode),
    ] {
        r.quantity(k, v);
    }
    let mut result = json!({
        "collapse": model_json(&cfg.collapse),
        "mode": mode_key(mode_arg),
        "sigma_zz": sigma.szz(),
        "sigma_zp": sigma.szp(),
        "sigma_pp": sigma.spp(),
        "half_n": half_n,
        "zz_over_half_n": ratio,
        "squeezed": ratio < 1.0,
        "d_mode": d_mode,
    });
    if mode == Mode::Differential && e.eta.value() > 0.0 {
        let bound = squeezing_diffusion_bound(e, c)?;
        r.quantity("d_max", bound.d_max);
        result["d_max"] = json!(bound.d_max);
        if let Some(CollapseParams::Csl { r_csl, .. } | CollapseParams::ColouredCsl { r_csl, .. }) = cfg.collapse {
            let lb = lambda_bound_squeezing(e, r_csl, c)?;
            r.quantity("lambda_max", lb.lambda_max);
            result["lambda_max"] = json!(lb.lambda_max);
        }
    }
    r.rows.push(format!("squeezed,{}", (ratio < 1.0) as u8));
    r.result = result;
    Ok(r)
}

fn reject_coloured(cfg: &LoadedConfig, command: &str) -> Result<(), CliError> {
    if matches!(cfg.collapse, Some(CollapseParams::ColouredCsl { .. })) {
        return Err(CliError::Usage(format!(
            "{command} propagates white noise only; use `steady` or `validate` for coloured CSL"
        )));
    }
    Ok(())
}

/// Advances σ by `dt`, by RK4 when affordable and exactly otherwise.
fn advance<const N: usize>(
    s: &SMatrix<f64, N, N>,
    a: &SMatrix<f64, N, N>,
    d: &SMatrix<f64, N, N>,
    dt: f64,
) -> Result<SMatrix<f64, N, N>, CliError> {
    let h = max_step(a);
    if dt / h > MAX_RK_STEPS {
        Ok(evolve_exact(s, a, d, dt))
    } else {
        Ok(evolve(s, a, d, dt, h)?)
    }
}

fn squeeze_of(cfg: &LoadedConfig, flag: Option<f64>) -> f64 {
    flag.or_else(|| cfg.extras.get("squeeze_r").copied()).unwrap_or(0.0)
}

#[allow(clippy::too_many_arguments)]
fn evolve_cmd(
    source: &Source,
    args: &CollapseArgs,
    t_end: f64,
    records: usize,
    system: SystemArg,
    mode_arg: ModeArg,
    squeeze: Option<f64>,
) -> Result<Report, CliError> {
    if !(t_end > 0.0) || records == 0 {
        return Err(CliError::Usage(
            "--t-end must be positive and --records at least 1".into(),
        ));
    }
    let cfg = load_with_collapse(source, args)?;
    reject_coloured(&cfg, "evolve")?;
    let e = &cfg.experiment;
    let c = &cfg.constants;
    let mp = mode_params(e, c)?;
    let (d11, d12, _) = collapse_coefficients(&cfg);
    let dt = t_end / records as f64;
    let mut times = Vec::with_capacity(records + 1);
    let mut series = Vec::with_capacity(records + 1);
    let mut r = match system {
        SystemArg::Mode => {
            let mode: Mode = mode_arg.into();
            let wm = mp.omega_of(mode);
            let dth = thermal_diffusion(e.mass, e.gamma, wm, e.temperature, c);
            let set = DiffusionSet::new(d11, d12, dth);
            let a = drift_matrix(&mp, mode, e.gamma);
            let d = diffusion_matrix(&set, mode, e.mass, e.omega, c);
            let mut s = CovMatrix2::thermal(mp.n).0;
            let mut rows = Vec::new();
            for k in 0..=records {
                if k > 0 {
                    s = advance(&s, &a, &d, dt)?;
                }
                let t = k as f64 * dt;
                let nu = s.symmetric_eigenvalues().min();
                rows.push(format!("{t:e},{:e},{:e},{:e},{nu:e}", s[(0, 0)], s[(0, 1)], s[(1, 1)]));
                times.push(t);
                series.push(json!({"sigma_zz": s[(0, 0)], "sigma_zp": s[(0, 1)], "sigma_pp": s[(1, 1)], "nu_min": nu}));
            }
            let mut r = Report::new("evolve", Some(cfg.clone()), "t,ZZ,ZP,PP,nu_min");
            r.meta("system", format!("mode {}", mode_key(mode_arg)));
            r.rows = rows;
            r
        }
        SystemArg::Pair => {
            let rsq = squeeze_of(&cfg, squeeze);
            let dth = thermal_diffusion(e.mass, e.gamma, e.omega, e.temperature, c);
            let set = DiffusionSet::new(d11, d12, dth);
            let (a, d) = two_mode_system(e, &set, c)?;
            let mut s = CovMatrix4::squeezed_thermal(mp.n, rsq).0;
            let mut rows = Vec::new();
            for k in 0..=records {
                if k > 0 {
                    s = advance(&s, &a, &d, dt)?;
                }
                let t = k as f64 * dt;
                let sigma = CovMatrix4::new(s);
                let nu_minus = sigma.symplectic_eigen()?.nu_minus;
                let nu_tilde = ppt_eigen(&sigma)?.nu_minus;
                let en = log_negativity_from_nu(nu_tilde);
                let entries: Vec<f64> = PAIR_ENTRIES.iter().map(|&(i, j)| s[(i, j)]).collect();
                rows.push(format!(
                    "{t:e},{},{nu_minus:e},{nu_tilde:e},{en:e}",
                    entries.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(",")
                ));
                times.push(t);
                series.push(json!({
                    "sigma": entries,
                    "nu_minus": nu_minus,
                    "nu_tilde_minus": nu_tilde,
                    "log_negativity": en,
                }));
            }
            let mut r = Report::new(
                "evolve",
                Some(cfg.clone()),
                "t,Z1Z1,Z1P1,Z1Z2,Z1P2,P1P1,P1Z2,P1P2,Z2Z2,Z2P2,P2P2,nu_minus,nu_tilde_minus,log_negativity",
            );
            r.meta("system", "pair");
            r.meta("squeeze_r", rsq);
            r.rows = rows;
            r
        }
    };
    describe_model(&mut r, &cfg.collapse);
    r.result = json!({
        "collapse": model_json(&cfg.collapse),
        "system": match system { SystemArg::Mode => "mode", SystemArg::Pair => "pair" },
        "times": times,
        "states": series,
    });
    Ok(r)
}

/// Upper-triangle order of the two-particle covariance columns.
const PAIR_ENTRIES: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

fn nu(source: &Source, args: &CollapseArgs, t: f64, squeeze: Option<f64>) -> Result<Report, CliError> {
    let cfg = load_with_collapse(source, args)?;
    reject_coloured(&cfg, "nu")?;
    let e = &cfg.experiment;
    let c = &cfg.constants;
    let mp = mode_params(e, c)?;
    let (d11, d12, _) = collapse_coefficients(&cfg);

    let dd = d11 - d12;
    let dth_d = thermal_diffusion(e.mass, e.gamma, mp.omega_d, e.temperature, c);
    let approx = short_time_nu(t, e, dd, dth_d, c)?;
    let set = DiffusionSet::new(d11, d12, dth_d);
    let a = drift_matrix(&mp, Mode::Differential, e.gamma);
    let d = diffusion_matrix(&set, Mode::Differential, e.mass, e.omega, c);
    let exact = evolve_exact(&CovMatrix2::thermal(mp.n).0, &a, &d, t)
        .symmetric_eigenvalues()
        .min();

    let mut r = Report::new("nu", Some(cfg.clone()), "quantity,value");
    describe_model(&mut r, &cfg.collapse);
    r.quantity("t", t);
    r.quantity("phase", t * e.omega);
    r.quantity("half_n", 0.5 * mp.n);
    r.quantity("nu_short_time", approx);
    r.quantity("nu_exact", exact);
    let mut result = json!({
        "collapse": model_json(&cfg.collapse),
        "t": t,
        "phase": t * e.omega,
        "half_n": 0.5 * mp.n,
        "nu_short_time": approx,
        "nu_exact": exact,
    });
    if squeeze.is_some() || cfg.extras.contains_key("squeeze_r") {
        let rsq = squeeze_of(&cfg, squeeze);
        let dth = thermal_diffusion(e.mass, e.gamma, e.omega, e.temperature, c);
        let approx = short_time_nu_tilde(t, rsq, e, d11, d12, dth, c)?;
        let (a, d) = two_mode_system(e, &DiffusionSet::new(d11, d12, dth), c)?;
        let s = evolve_exact(&CovMatrix4::squeezed_thermal(mp.n, rsq).0, &a, &d, t);
        let exact = ppt_eigen(&CovMatrix4::new(s))?.nu_minus;
        r.quantity("squeeze_r", rsq);
        r.quantity("nu_tilde_short_time", approx);
        r.quantity("nu_tilde_exact", exact);
        result["squeeze_r"] = json!(rsq);
        result["nu_tilde_short_time"] = json!(approx);
        result["nu_tilde_exact"] = json!(exact);
    }
    r.result = result;
    Ok(r)
}

fn entangle(source: &Source, args: &CollapseArgs) -> Result<Report, CliError> {
    let cfg = load_with_collapse(source, args)?;
    let e = &cfg.experiment;
    let c = &cfg.constants;
    let mp = mode_params(e, c)?;
    let (d11, d12, _) = collapse_coefficients(&cfg);
    let dth = thermal_diffusion(e.mass, e.gamma, e.omega, e.temperature, c);
    let margin = entanglement_margin(d11, d12, dth, &mp, e.mass, e.omega, c);
    let k = mp.delta2 * e.mass * e.omega.powi(2) * c.hbar;
    let f = 2.0 * dth / k;
    let q_min = q_requirement(e.temperature, e.omega, mp.delta2, c);
    let mut r = Report::new("entangle", Some(cfg.clone()), "quantity,value");
    describe_model(&mut r, &cfg.collapse);
    for (name, v) in [
        ("delta2", mp.delta2),
        ("d11", d11),
        ("d12", d12),
        ("dth", dth),
        ("margin", margin),
        ("thermal_fraction", f),
        ("q", e.omega / e.gamma),
        ("q_min", q_min),
    ] {
        r.quantity(name, v);
    }
    r.rows.push(format!("entangles,{}", (margin > 0.0) as u8));
    let mut result = json!({
        "collapse": model_json(&cfg.collapse),
        "delta2": mp.delta2,
        "d11": d11,
        "d12": d12,
        "dth": dth,
        "margin": margin,
        "entangles": margin > 0.0,
        "thermal_fraction": f,
        "q": e.omega / e.gamma,
        "q_min": q_min,
    });
    let r_csl = match (cfg.collapse, args.r) {
        (Some(CollapseParams::Csl { r_csl, .. } | CollapseParams::ColouredCsl { r_csl, .. }), _) => Some(r_csl),
        (_, r) => r,
    };
    if let Some(r_csl) = r_csl {
        if f < 1.0 {
            let b = lambda_bound_entanglement(e, r_csl, c)?;
            r.quantity("lambda_max", b.lambda_max);
            r.quantity("lambda_simplified", b.lambda_simplified);
            result["r_csl"] = json!(r_csl);
            result["lambda_max"] = json!(b.lambda_max);
            result["lambda_simplified"] = json!(b.lambda_simplified);
        }
    }
    r.result = result;
    Ok(r)
}

fn feasibility_json(rep: &FeasibilityReport) -> Value {
    json!({
        "eta_g": rep.eta_g,
        "r0_min": rep.r0_min,
        "gamma_g": rep.gamma_g,
        "delta2_max": rep.delta2_max,
        "delta2": rep.delta2,
        "feasible": rep.feasible,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

fn dp(source: &Source) -> Result<Report, CliError> {
    let cfg = load_with_collapse(source, &CollapseArgs::default())?;
    let e = &cfg.experiment;
    let c = &cfg.constants;
    let sq = dp_squeezing_feasibility(e, c)?;
    let en = dp_entanglement_feasibility(e, c)?;
    let mut r = Report::new(
        "dp",
        Some(cfg.clone()),
        "route,eta_g,r0_min,gamma_g,delta2_max,delta2,feasible",
    );
    for (name, rep) in [("squeezing", &sq), ("entanglement", &en)] {
        r.rows.push(format!(
            "{name},{},{},{},{},{:e},{}",
            opt(rep.eta_g),
            opt(rep.r0_min),
            opt(rep.gamma_g),
            opt(rep.delta2_max),
            rep.delta2,
            rep.feasible as u8
        ));
    }
    r.result = json!({
        "squeezing": feasibility_json(&sq),
        "entanglement": feasibility_json(&en),
        "radius": e.radius,
    });
    Ok(r)
}

fn xray(
    args: &CollapseArgs,
    energy_kev: Option<f64>,
    protons: f64,
    electrons: f64,
    e_rep_kev: Option<f64>,
    at_r: f64,
) -> Result<Report, CliError> {
    let c = PhysicalConstants::default();
    let kev = 1e3 * c.e_charge;
    let e_rep = e_rep_kev
        .map(|k| k * kev)
        .unwrap_or_else(|| default_representative_energy(&c));
    let params = args.model.map(|m| collapse_from_flags(m, args)).transpose()?;
    let cutoff = match (args.cutoff, params) {
        (Some(om), _) => om,
        (None, Some(CollapseParams::ColouredCsl { cutoff, .. })) => cutoff,
        _ => XRAY_REFERENCE_CUTOFF,
    };
    if !(cutoff > 0.0) || !(at_r > 0.0) || !(e_rep > 0.0) {
        return Err(CliError::Usage(
            "cutoff, --at-r and --e-rep-kev must be positive".into(),
        ));
    }
    let bound = xray_coloured_rescale(XRAY_WHITE_BOUND, cutoff, e_rep, &c);
    let e_omega = cutoff_energy(cutoff, &c);
    let mut r = Report::new("xray", None, "quantity,value");
    describe_model(&mut r, &params);
    r.quantity("cutoff", cutoff);
    r.quantity("e_omega_ev", e_omega / c.e_charge);
    r.quantity("e_rep_kev", e_rep / kev);
    r.quantity("white_bound", XRAY_WHITE_BOUND);
    r.quantity("coloured_bound", bound);
    r.quantity("at_r", at_r);
    r.quantity("lambda_max_white", XRAY_WHITE_BOUND * at_r * at_r);
    r.quantity("lambda_max_coloured", bound * at_r * at_r);
    let mut result = json!({
        "collapse": model_json(&params),
        "cutoff": cutoff,
        "e_omega_ev": e_omega / c.e_charge,
        "e_rep_kev": e_rep / kev,
        "white_bound": XRAY_WHITE_BOUND,
        "coloured_bound": bound,
        "at_r": at_r,
        "lambda_max_white": XRAY_WHITE_BOUND * at_r * at_r,
        "lambda_max_coloured": bound * at_r * at_r,
    });
    if let Some(p) = params {
        let energy = energy_kev.map(|k| k * kev).unwrap_or(e_rep);
        let explicit_cutoff = args.cutoff;
        let rate = xray_rate(&p, energy, protons, electrons, explicit_cutoff, &c)?;
        // per keV rather than per joule
        r.quantity("energy_kev", energy / kev);
        r.quantity("rate_per_kev", rate * kev);
        result["energy_kev"] = json!(energy / kev);
        result["rate_per_kev"] = json!(rate * kev);
    }
    r.result = result;
    Ok(r)
}

fn validate(
    source: &Source,
    args: &CollapseArgs,
    mode_arg: ModeArg,
    seed: u64,
    n_traj: usize,
    gamma_over_omega: Option<f64>,
) -> Result<Report, CliError> {
    let mut cfg = load_with_collapse(source, args)?;
    if let Some(x) = gamma_over_omega {
        if !(x > 0.0) {
            return Err(CliError::Usage("--gamma-over-omega must be positive".into()));
        }
        cfg.experiment.gamma = x * cfg.experiment.omega;
    }
    let rep = validate_steady_state(
        &cfg.experiment,
        cfg.collapse.as_ref(),
        mode_arg.into(),
        n_traj,
        seed,
        &cfg.constants,
    )?;
    let mut r = Report::new("validate", Some(cfg.clone()), "entry,estimate,std_error,expected,z");
    describe_model(&mut r, &cfg.collapse);
    r.meta("mode", mode_key(mode_arg));
    r.meta("seed", seed);
    r.meta("n_traj", n_traj);
    r.meta("dt", format!("{:e}", rep.dt));
    r.meta("t_end", format!("{:e}", rep.t_end));
    r.meta("gamma_over_omega", format!("{:e}", rep.gamma_over_omega));
    r.meta("pass", rep.pass);
    for e in &rep.entries {
        r.rows.push(format!(
            "{},{:e},{:e},{:e},{:e}",
            e.entry, e.estimate, e.std_error, e.expected, e.z
        ));
    }
    r.result = json!({
        "collapse": model_json(&cfg.collapse),
        "mode": mode_key(mode_arg),
        "seed": seed,
        "pass": rep.pass,
        "max_abs_z": rep.max_abs_z,
        "entries": rep.entries,
        "exact_coloured_z": rep.exact_coloured_z,
        "collapse_fraction": rep.collapse_fraction,
        "gamma_over_omega": rep.gamma_over_omega,
        "n_traj": rep.n_traj,
        "dt": rep.dt,
        "t_end": rep.t_end,
        "note": rep.note,
    });
    Ok(r)
}

fn presets() -> Report {
    let c = PhysicalConstants::default();
    let mut r = Report::new("presets", None, "name,m,q,R,omega,gamma,T,d,delta2");
    let mut list = Vec::new();
    for p in catalog() {
        let e = &p.config;
        let d2 = mode_params(e, &c).map(|m| m.delta2).unwrap_or(f64::NAN);
        r.rows.push(format!(
            "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            p.name, e.mass, e.charge, e.radius, e.omega, e.gamma, e.temperature, e.separation, d2
        ));
        list.push(json!({
            "name": p.name,
            "m": e.mass,
            "q": e.charge,
            "R": e.radius,
            "omega": e.omega,
            "gamma": e.gamma,
            "T": e.temperature,
            "d": e.separation,
            "rho": e.density,
            "delta2": d2,
            "extras": p.extras,
        }));
    }
    r.result = json!({ "presets": list });
    r
}
