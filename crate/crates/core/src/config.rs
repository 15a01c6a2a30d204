//! Experiment and collapse-model parameters, plus the flat `key = value`
//! configuration format.
//!
//! ```text
//! # Table-1 setup
//! m = 0.44e-16
//! q = 4e-17
//! eta = +1
//! R = 150e-9
//! freq_hz = 500
//! gamma = 1e-4
//! T = 10e-6
//! d = 1e-4
//! ```
//!
//! Canonical serialization writes every number in lowercase scientific
//! notation with 17 significant digits, so a document survives a
//! load/serialize/load cycle bit for bit.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// Relative sign of the two charges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChargeSign {
    /// η = +1
    Repulsive,
    /// η = −1
    Attractive,
}

impl ChargeSign {
    pub fn value(self) -> f64 {
        match self {
            ChargeSign::Repulsive => 1.0,
            ChargeSign::Attractive => -1.0,
        }
    }

    fn from_value(v: f64) -> Option<Self> {
        if v == 1.0 {
            Some(ChargeSign::Repulsive)
        } else if v == -1.0 {
            Some(ChargeSign::Attractive)
        } else {
            None
        }
    }
}

/// Two identical trapped spheres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Mass per sphere, kg.
    pub mass: f64,
    /// Charge magnitude, C.
    pub charge: f64,
    pub eta: ChargeSign,
    /// Sphere radius, m.
    pub radius: f64,
    /// Trap angular frequency, rad/s.
    pub omega: f64,
    /// Mechanical damping, 1/s.
    pub gamma: f64,
    /// Bath temperature, K.
    pub temperature: f64,
    /// Mean separation, m.
    pub separation: f64,
    /// Material density, kg/m³.
    pub density: Option<f64>,
}

impl ExperimentConfig {
    /// Checks the physical invariants. Returns non-fatal warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        positive("m", self.mass)?;
        positive("q", self.charge)?;
        positive("R", self.radius)?;
        positive("omega", self.omega)?;
        positive("T", self.temperature)?;
        positive("d", self.separation)?;
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::NonPhysical {
                key: "gamma",
                requirement: "non-negative",
                value: self.gamma,
            });
        }
        if self.separation <= 10.0 * self.radius {
            return Err(Error::Linearization {
                d: self.separation,
                limit: 10.0 * self.radius,
            });
        }
        let mut warnings = Vec::new();
        if let Some(rho) = self.density {
            positive("rho", rho)?;
            let m_rho = sphere_mass(self.radius, rho);
            let mismatch = (self.mass - m_rho).abs() / self.mass;
            if mismatch > 0.05 {
                warnings.push(format!(
                    "mass {:e} kg differs from (4/3)πR³ρ = {:e} kg by {:.1}%",
                    self.mass,
                    m_rho,
                    100.0 * mismatch
                ));
            }
        }
        Ok(warnings)
    }

    /// Trap frequency in Hz.
    pub fn freq_hz(&self) -> f64 {
        self.omega / (2.0 * PI)
    }
}

/// Mass of a homogeneous sphere.
pub fn sphere_mass(radius: f64, density: f64) -> f64 {
    4.0 / 3.0 * PI * radius.powi(3) * density
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CollapseModel {
    Csl,
    ColouredCsl,
    Dp,
}

impl CollapseModel {
    pub fn key(self) -> &'static str {
        match self {
            CollapseModel::Csl => "csl",
            CollapseModel::ColouredCsl => "ccsl",
            CollapseModel::Dp => "dp",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csl" => Some(CollapseModel::Csl),
            "ccsl" | "coloured-csl" | "colored-csl" | "colouredcsl" => Some(CollapseModel::ColouredCsl),
            "dp" => Some(CollapseModel::Dp),
            _ => None,
        }
    }
}

/// Collapse-model parameters. Each variant carries exactly the fields its
/// model needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CollapseParams {
    Csl { lambda: f64, r_csl: f64 },
    ColouredCsl { lambda: f64, r_csl: f64, cutoff: f64 },
    Dp { r0: f64 },
}

impl CollapseParams {
    pub fn model(&self) -> CollapseModel {
        match self {
            CollapseParams::Csl { .. } => CollapseModel::Csl,
            CollapseParams::ColouredCsl { .. } => CollapseModel::ColouredCsl,
            CollapseParams::Dp { .. } => CollapseModel::Dp,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            CollapseParams::Csl { lambda, r_csl } => {
                non_negative("lambda_csl", lambda)?;
                positive("r_csl", r_csl)
            }
            CollapseParams::ColouredCsl { lambda, r_csl, cutoff } => {
                non_negative("lambda_csl", lambda)?;
                positive("r_csl", r_csl)?;
                positive("Omega", cutoff)
            }
            CollapseParams::Dp { r0 } => non_negative("R0", r0),
        }
    }
}

/// A parsed configuration document.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub experiment: ExperimentConfig,
    pub collapse: Option<CollapseParams>,
    pub constants: PhysicalConstants,
    /// Auxiliary values such as `squeeze_r` and `Q`.
    pub extras: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

const KNOWN_KEYS: &[&str] = &[
    "m",
    "q",
    "eta",
    "R",
    "freq_hz",
    "omega",
    "gamma",
    "T",
    "d",
    "rho",
    "model",
    "lambda_csl",
    "r_csl",
    "Omega",
    "R0",
    "m0",
    "squeeze_r",
    "Q",
];

/// Keys carrying reference values; kept verbatim in `extras`.
pub const REFERENCE_PREFIX: &str = "reported_";

/// Parses a `key = value` document.
///
/// `gamma` may be omitted when `Q` is given (γ = ω/Q), and `m` may be
/// omitted when `rho` is given (mass derived from the sphere volume).
pub fn load_config(source: &str) -> Result<LoadedConfig> {
    let mut values: BTreeMap<String, String> = BTreeMap::new();
    let mut warnings = Vec::new();
    for line in source.lines() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                key: line.to_string(),
                value: String::new(),
            });
        };
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) && !key.starts_with(REFERENCE_PREFIX) {
            warnings.push(format!("unknown key `{key}` ignored"));
            continue;
        }
        values.insert(key.to_string(), value.trim().to_string());
    }

    let num = |key: &str| -> Result<Option<f64>> {
        match values.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<f64>().map(Some).map_err(|_| Error::Parse {
                key: key.to_string(),
                value: v.clone(),
            }),
        }
    };
    let req = |key: &str| -> Result<f64> { num(key)?.ok_or_else(|| Error::MissingKey(key.to_string())) };

    let radius = req("R")?;
    let density = num("rho")?;
    let mass = match (num("m")?, density) {
        (Some(m), _) => m,
        (None, Some(rho)) => sphere_mass(radius, rho),
        (None, None) => return Err(Error::MissingKey("m".into())),
    };
    let omega = match (num("omega")?, num("freq_hz")?) {
        (Some(w), _) => w,
        (None, Some(f)) => 2.0 * PI * f,
        (None, None) => return Err(Error::MissingKey("freq_hz".into())),
    };
    let quality = num("Q")?;
    let gamma = match (num("gamma")?, quality) {
        (Some(g), _) => g,
        (None, Some(q)) => {
            positive("Q", q)?;
            omega / q
        }
        (None, None) => return Err(Error::MissingKey("gamma".into())),
    };
    let eta = match num("eta")? {
        None => ChargeSign::Repulsive,
        Some(v) => ChargeSign::from_value(v).ok_or(Error::NonPhysical {
            key: "eta",
            requirement: "+1 or -1",
            value: v,
        })?,
    };

    let experiment = ExperimentConfig {
        mass,
        charge: req("q")?,
        eta,
        radius,
        omega,
        gamma,
        temperature: req("T")?,
        separation: req("d")?,
        density,
    };
    warnings.extend(experiment.validate()?);

    let collapse = match values.get("model") {
        None => None,
        Some(name) => {
            let model = CollapseModel::parse(name).ok_or_else(|| Error::Parse {
                key: "model".into(),
                value: name.clone(),
            })?;
            let params = match model {
                CollapseModel::Csl => CollapseParams::Csl {
                    lambda: req("lambda_csl")?,
                    r_csl: req("r_csl")?,
                },
                CollapseModel::ColouredCsl => CollapseParams::ColouredCsl {
                    lambda: req("lambda_csl")?,
                    r_csl: req("r_csl")?,
                    cutoff: req("Omega")?,
                },
                CollapseModel::Dp => CollapseParams::Dp { r0: req("R0")? },
            };
            params.validate()?;
            Some(params)
        }
    };

    let mut constants = PhysicalConstants::default();
    if let Some(m0) = num("m0")? {
        positive("m0", m0)?;
        constants = constants.with_m0(m0);
    }

    let mut extras = BTreeMap::new();
    for key in ["squeeze_r", "Q"] {
        if let Some(v) = num(key)? {
            extras.insert(key.to_string(), v);
        }
    }
    for key in values.keys().filter(|k| k.starts_with(REFERENCE_PREFIX)) {
        extras.insert(key.clone(), num(key)?.expect("key present"));
    }

    Ok(LoadedConfig {
        experiment,
        collapse,
        constants,
        extras,
        warnings,
    })
}

/// Lowercase scientific notation, 17 significant digits.
pub fn canonical_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Canonical document for a configuration. Frequencies are written as
/// `omega` so that no Hz round trip is involved.
pub fn serialize_config(cfg: &LoadedConfig) -> String {
    let e = &cfg.experiment;
    let mut out = String::new();
    let mut put = |k: &str, v: f64| {
        let _ = writeln!(out, "{k} = {}", canonical_number(v));
    };
    put("m", e.mass);
    put("q", e.charge);
    put("eta", e.eta.value());
    put("R", e.radius);
    put("omega", e.omega);
    put("gamma", e.gamma);
    put("T", e.temperature);
    put("d", e.separation);
    if let Some(rho) = e.density {
        put("rho", rho);
    }
    if cfg.constants.m0_nucleon != PhysicalConstants::default().m0_nucleon {
        put("m0", cfg.constants.m0_nucleon);
    }
    for (k, v) in &cfg.extras {
        put(k, *v);
    }
    if let Some(c) = cfg.collapse {
        match c {
            CollapseParams::Csl { lambda, r_csl } => {
                put("lambda_csl", lambda);
                put("r_csl", r_csl);
            }
            CollapseParams::ColouredCsl { lambda, r_csl, cutoff } => {
                put("lambda_csl", lambda);
                put("r_csl", r_csl);
                put("Omega", cutoff);
            }
            CollapseParams::Dp { r0 } => put("R0", r0),
        }
        let _ = writeln!(out, "model = {}", c.model().key());
    }
    out
}

fn positive(key: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPhysical {
            key,
            requirement: "positive",
            value: v,
        })
    }
}

fn non_negative(key: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPhysical {
            key,
            requirement: "non-negative",
            value: v,
        })
    }
}
