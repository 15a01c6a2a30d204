//! Named parameter sets.
//!
//! | name            | what it is                                              |
//! |-----------------|---------------------------------------------------------|
//! | `table1`        | squeezing setup, T = 10 µK, γ = 1e-4 s⁻¹                |
//! | `table2-A`..`F` | `table1` geometry with the six (T, γ) choices           |
//! | `table3-A`..`C` | entanglement setup, Q = 1e11, three (T, d) choices      |
//! | `appendixD-dp`  | DP squeezing feasibility setup, mass from density       |
//!
//! `reported_*` extras hold the reference values each preset is
//! expected to reproduce.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use crate::config::{load_config, sphere_mass, ChargeSign, CollapseParams, ExperimentConfig};
use crate::constants::E_CHARGE;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub config: ExperimentConfig,
    pub collapse: Option<CollapseParams>,
    pub extras: BTreeMap<String, f64>,
}

impl Preset {
    pub fn extra(&self, key: &str) -> Option<f64> {
        self.extras.get(key).copied()
    }
}

const TABLE1: ExperimentConfig = ExperimentConfig {
    mass: 0.44e-16,
    charge: 4e-17,
    eta: ChargeSign::Repulsive,
    radius: 150e-9,
    omega: 2.0 * PI * 500.0,
    gamma: 1e-4,
    temperature: 10e-6,
    separation: 1e-4,
    density: None,
};

/// (choice, T [K], γ [1/s], t_min [days], λ [1/s])
const TABLE2: [(&str, f64, f64, f64, f64); 6] = [
    ("A", 100e-3, 1e-4, 14.0, 2.09e-11),
    ("B", 1e-3, 1e-3, 1.4, 2.09e-12),
    ("C", 1e-3, 1e-4, 14.0, 2.09e-13),
    ("D", 10e-6, 1e-4, 14.0, 2.09e-15),
    ("E", 10e-6, 1e-5, 140.0, 2.09e-16),
    ("F", 1e-6, 1e-5, 140.0, 2.09e-17),
];

/// (choice, λ [1/s], T [K], d [m], δ², f)
///
/// Row B's separation is printed as "4.5.0×10⁻⁴" and read as 4.5e-4 m.
/// Row C is printed with T = 1 mK, but its reported f = 0.37 and
/// λ = 4.03e-14 both follow from T = 10 mK (1 mK gives f ≈ 0.037), so the
/// preset stores 10 mK.
const TABLE3: [(&str, f64, f64, f64, f64, f64); 3] = [
    ("A", 1.7e-12, 1.0, 2.0e-4, 1.4e-3, 0.58),
    ("B", 1.19e-13, 100e-3, 4.5e-4, 1.25e-4, 0.67),
    ("C", 4.03e-14, 10e-3, 8.0e-4, 2.2e-5, 0.37),
];

const TABLE3_Q: f64 = 1e11;

fn table3_base() -> ExperimentConfig {
    let omega = 2.0 * PI * 1e3;
    ExperimentConfig {
        mass: 1.8e-17,
        charge: 150e-19,
        eta: ChargeSign::Repulsive,
        radius: 150e-9,
        omega,
        gamma: omega / TABLE3_Q,
        temperature: 1.0,
        separation: 2.0e-4,
        density: None,
    }
}

fn appendix_d() -> ExperimentConfig {
    let radius = 150e-9;
    let rho = 2.6e3;
    ExperimentConfig {
        mass: sphere_mass(radius, rho),
        charge: 300.0 * E_CHARGE,
        eta: ChargeSign::Repulsive,
        radius,
        omega: 2.0 * PI * 1.28e3,
        gamma: 8e-6,
        temperature: 100e-9,
        separation: 6.5e-3,
        density: Some(rho),
    }
}

fn extras(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Every built-in preset, in display order.
pub fn catalog() -> Vec<Preset> {
    let mut out = vec![Preset {
        name: "table1".into(),
        config: TABLE1,
        collapse: None,
        extras: extras(&[("reported_delta2", 0.13)]),
    }];
    for (choice, t, gamma, days, lambda) in TABLE2 {
        out.push(Preset {
            name: format!("table2-{choice}"),
            config: ExperimentConfig {
                temperature: t,
                gamma,
                ..TABLE1
            },
            collapse: None,
            extras: extras(&[
                ("reported_delta2", 0.13),
                ("reported_t_min_days", days),
                ("reported_lambda", lambda),
            ]),
        });
    }
    for (choice, lambda, t, d, delta2, f) in TABLE3 {
        out.push(Preset {
            name: format!("table3-{choice}"),
            config: ExperimentConfig {
                temperature: t,
                separation: d,
                ..table3_base()
            },
            collapse: None,
            extras: extras(&[
                ("Q", TABLE3_Q),
                ("squeeze_r", 0.0),
                ("reported_delta2", delta2),
                ("reported_f", f),
                ("reported_lambda", lambda),
            ]),
        });
    }
    out.push(Preset {
        name: "appendixD-dp".into(),
        config: appendix_d(),
        collapse: None,
        extras: extras(&[("reported_delta2", 1.26e-7), ("reported_R0", 5.9e-8)]),
    });
    out
}

/// Looks up a built-in preset.
pub fn preset(name: &str) -> Result<Preset> {
    catalog()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

/// Looks up a preset, first in `user_dir/<name>.cfg` (a config document),
/// then in the built-in catalog.
pub fn preset_with_user_dir(name: &str, user_dir: Option<&Path>) -> Result<Preset> {
    if let Some(dir) = user_dir {
        let path = dir.join(format!("{name}.cfg"));
        if let Ok(text) = std::fs::read_to_string(&path) {
            let cfg = load_config(&text)?;
            return Ok(Preset {
                name: name.to_string(),
                config: cfg.experiment,
                collapse: cfg.collapse,
                extras: cfg.extras,
            });
        }
    }
    preset(name)
}
