use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "collapse-kit",
    version,
    about = "Collapse-model bounds from Coulomb-coupled levitated nanospheres"
)]
pub struct Cli {
    /// Emit a JSON document instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,

    /// Also write the CSV, the canonical config and a run manifest here.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Collapse and thermal momentum-diffusion coefficients.
    Coeffs {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        collapse: CollapseArgs,
    },
    /// Exclusion curve λ_max(r_CSL) for one witness.
    Exclude {
        #[command(flatten)]
        source: Source,
        /// Log-spaced grid `lo:hi:n` in metres.
        #[arg(long, default_value = "1e-8:1e-2:60")]
        grid: String,
        #[arg(long, value_enum, default_value_t = WitnessArg::Squeeze)]
        witness: WitnessArg,
    },
    /// Steady-state covariance of one normal mode.
    Steady {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        collapse: CollapseArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Differential)]
        mode: ModeArg,
    },
    /// Covariance propagation from the thermal state.
    Evolve {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        collapse: CollapseArgs,
        /// End time, s.
        #[arg(long)]
        t_end: f64,
        /// Number of output intervals.
        #[arg(long, default_value_t = 100)]
        records: usize,
        /// Propagate one normal mode or both particles.
        #[arg(long, value_enum, default_value_t = SystemArg::Mode)]
        system: SystemArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Differential)]
        mode: ModeArg,
        /// Local squeezing of each particle's initial state (pair system).
        #[arg(long)]
        squeeze: Option<f64>,
    },
    /// Short-time squeezing figure ν(t), and ν̃₋(t) with --squeeze.
    Nu {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        collapse: CollapseArgs,
        /// Time after preparation, s.
        #[arg(long)]
        t: f64,
        /// Evaluate the partially transposed ν̃₋ for this local squeezing.
        #[arg(long)]
        squeeze: Option<f64>,
    },
    /// Short-time entanglement criterion from the ground state.
    Entangle {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        collapse: CollapseArgs,
    },
    /// Diósi–Penrose feasibility on both routes.
    Dp {
        #[command(flatten)]
        source: Source,
    },
    /// Spontaneous X-ray emission and the coloured-noise rescaling of the
    /// white X-ray bound.
    Xray {
        #[command(flatten)]
        collapse: CollapseArgs,
        /// Photon energy, keV (default: the representative energy).
        #[arg(long)]
        energy_kev: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        protons: f64,
        #[arg(long, default_value_t = 1.0)]
        electrons: f64,
        /// Representative energy for the rescaling, keV.
        #[arg(long)]
        e_rep_kev: Option<f64>,
        /// Collapse length at which to quote λ_max, m.
        #[arg(long = "at-r", default_value_t = 1e-7)]
        at_r: f64,
    },
    /// Monte Carlo check of the steady state against the closed forms.
    Validate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        collapse: CollapseArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Differential)]
        mode: ModeArg,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        n_traj: usize,
        /// Replace the damping by this multiple of ω.
        #[arg(long)]
        gamma_over_omega: Option<f64>,
    },
    /// List the built-in presets.
    Presets,
}

/// Where the experiment parameters come from.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Built-in preset, or `<name>.cfg` in $COLLAPSE_KIT_PRESETS.
    #[arg(long)]
    pub preset: Option<String>,
    /// `key = value` configuration document.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct CollapseArgs {
    /// Collapse model; overrides any model in the configuration.
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// CSL collapse rate λ, 1/s.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// CSL collapse length r_CSL, m.
    #[arg(long)]
    pub r: Option<f64>,
    /// Noise cutoff Ω, rad/s (coloured CSL).
    #[arg(long)]
    pub cutoff: Option<f64>,
    /// Diósi–Penrose regularisation length R₀, m.
    #[arg(long = "R0")]
    pub r0: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Csl,
    ColouredCsl,
    Dp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WitnessArg {
    Squeeze,
    Entangle,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Differential,
    Common,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SystemArg {
    Mode,
    Pair,
}

impl From<ModeArg> for collapse_kit::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Differential => collapse_kit::Mode::Differential,
            ModeArg::Common => collapse_kit::Mode::Common,
        }
    }
}
