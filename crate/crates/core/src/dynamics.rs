//! Moment dynamics of the Coulomb-coupled pair.
//!
//! Each normal mode obeys, in the dimensionless quadratures
//! `Z = √(mω/ħ)·z`, `P = p/√(ħmω)` (vacuum covariance ½·I),
//!
//! ```text
//! dZ = ω P dt
//! dP = −(ω_mode²/ω) Z dt − γ P dt + noise,   ⟨noise²⟩ = (D_mode + D_th)/(mħω) dt
//! ```
//!
//! so the covariance obeys `σ̇ = Aσ + σAᵀ + D`. Damping and noise act on
//! momentum only; that is the minimal model whose fixed point reproduces the
//! closed-form steady state in [`steady_state`].

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4, SMatrix};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::constants::PhysicalConstants;
use crate::diffusion::DiffusionSet;
use crate::error::{Error, Result};
use crate::special::occupation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// (z₁ − z₂)/√2, frequency ω_d
    Differential,
    /// (z₁ + z₂)/√2, frequency ω
    Common,
}

/// Frequencies and occupation factors of the two normal modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeParams {
    /// δ² = q²/(πε₀mω²d³)
    pub delta2: f64,
    /// Trap frequency ω.
    pub omega: f64,
    pub omega_d: f64,
    pub omega_c: f64,
    /// coth(ħω/2k_BT)
    pub n: f64,
    /// coth(ħω_d/2k_BT)
    pub nd: f64,
    pub eta: f64,
}

impl ModeParams {
    pub fn omega_of(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Differential => self.omega_d,
            Mode::Common => self.omega_c,
        }
    }

    pub fn occupation_of(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Differential => self.nd,
            Mode::Common => self.n,
        }
    }
}

/// Coulomb frequency shift q²/(πε₀mω²d³).
pub fn delta2(cfg: &ExperimentConfig, consts: &PhysicalConstants) -> f64 {
    cfg.charge.powi(2) / (std::f64::consts::PI * consts.eps0 * cfg.mass * cfg.omega.powi(2) * cfg.separation.powi(3))
}

pub fn mode_params(cfg: &ExperimentConfig, consts: &PhysicalConstants) -> Result<ModeParams> {
    let delta2 = delta2(cfg, consts);
    let eta = cfg.eta.value();
    let shift = 1.0 + eta * delta2;
    if shift <= 0.0 {
        return Err(Error::Unstable { delta2 });
    }
    let omega_d = cfg.omega * shift.sqrt();
    let kt = consts.k_b * cfg.temperature;
    Ok(ModeParams {
        delta2,
        omega: cfg.omega,
        omega_d,
        omega_c: cfg.omega,
        n: occupation(consts.hbar * cfg.omega, kt),
        nd: occupation(consts.hbar * omega_d, kt),
        eta,
    })
}

/// Single-mode covariance in the (Z, P) basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovMatrix2(pub Matrix2<f64>);

impl CovMatrix2 {
    pub fn new(szz: f64, szp: f64, spp: f64) -> Self {
        Self(Matrix2::new(szz, szp, szp, spp))
    }

    pub fn vacuum() -> Self {
        Self::new(0.5, 0.0, 0.5)
    }

    pub fn thermal(n: f64) -> Self {
        Self::new(0.5 * n, 0.0, 0.5 * n)
    }

    pub fn szz(&self) -> f64 {
        self.0[(0, 0)]
    }

    pub fn szp(&self) -> f64 {
        self.0[(0, 1)]
    }

    pub fn spp(&self) -> f64 {
        self.0[(1, 1)]
    }

    /// Smallest eigenvalue (the squeezing figure ν).
    pub fn min_eigenvalue(&self) -> f64 {
        let (a, b, c) = (self.szz(), self.szp(), self.spp());
        0.5 * (a + c - ((a - c).powi(2) + 4.0 * b * b).sqrt())
    }

    /// Uncertainty relation det σ ≥ ¼.
    pub fn is_physical(&self) -> bool {
        self.szz() > 0.0 && self.spp() > 0.0 && self.0.determinant() >= 0.25 - 1e-12
    }
}

/// A = [[0, ω], [−ω_mode²/ω, −γ]].
pub fn drift_matrix(mp: &ModeParams, mode: Mode, gamma: f64) -> Matrix2<f64> {
    let w = mp.omega;
    let wm = mp.omega_of(mode);
    Matrix2::new(0.0, w, -wm * wm / w, -gamma)
}

/// Momentum-only diffusion, D_PP = (D_mode + D_th)/(mħω).
pub fn diffusion_matrix(
    set: &DiffusionSet,
    mode: Mode,
    mass: f64,
    omega: f64,
    consts: &PhysicalConstants,
) -> Matrix2<f64> {
    let d_mode = match mode {
        Mode::Differential => set.dd,
        Mode::Common => set.dc,
    };
    Matrix2::new(0.0, 0.0, 0.0, (d_mode + set.dth) / (mass * consts.hbar * omega))
}

/// Closed-form steady state with white collapse noise `d_mode` on `mode`:
///
/// σ_ZZ = (ω/2ω_m)N_m + D·ω/(2mγħω_m²),  σ_PP = (ω_m/2ω)N_m + D/(2mγħω),  σ_ZP = 0.
pub fn steady_state(
    mp: &ModeParams,
    mode: Mode,
    d_mode: f64,
    cfg: &ExperimentConfig,
    consts: &PhysicalConstants,
) -> Result<CovMatrix2> {
    coloured_parts(mp, mode, d_mode, cfg, consts, 1.0, 1.0)
}

/// Suppression of the collapse contribution by an exponentially correlated
/// noise with cutoff Ω: Ω(Ω+γ)/(Ω² + ω_m² + Ωγ/2). This is the form used
/// for the coloured steady state; it is exact as γ/Ω → 0.
pub fn coloured_factor(omega_mode: f64, gamma: f64, cutoff: f64) -> f64 {
    cutoff * (cutoff + gamma) / (cutoff * cutoff + omega_mode * omega_mode + 0.5 * cutoff * gamma)
}

/// Exact suppression factors (σ_ZZ, σ_PP) for an oscillator driven by an
/// Ornstein–Uhlenbeck force with autocorrelation D(Ω/2)e^{−Ω|τ|}, from the
/// augmented three-variable Lyapunov equation. They differ from
/// [`coloured_factor`] at order γ/Ω.
pub fn coloured_factors_exact(omega_mode: f64, gamma: f64, cutoff: f64) -> (f64, f64) {
    let den = cutoff * cutoff + cutoff * gamma + omega_mode * omega_mode;
    (cutoff * (cutoff + gamma) / den, cutoff * cutoff / den)
}

/// Steady state with coloured collapse noise: the collapse parts of
/// [`steady_state`] scaled by [`coloured_factor`]; thermal parts unchanged.
pub fn coloured_steady_state(
    mp: &ModeParams,
    mode: Mode,
    d_mode: f64,
    cfg: &ExperimentConfig,
    consts: &PhysicalConstants,
    cutoff: f64,
) -> Result<CovMatrix2> {
    if !(cutoff > 0.0) {
        return Err(Error::NonPhysical {
            key: "Omega",
            requirement: "positive",
            value: cutoff,
        });
    }
    let f = coloured_factor(mp.omega_of(mode), cfg.gamma, cutoff);
    coloured_parts(mp, mode, d_mode, cfg, consts, f, f)
}

fn coloured_parts(
    mp: &ModeParams,
    mode: Mode,
    d_mode: f64,
    cfg: &ExperimentConfig,
    consts: &PhysicalConstants,
    zz_factor: f64,
    pp_factor: f64,
) -> Result<CovMatrix2> {
    if !(cfg.gamma > 0.0) {
        return Err(Error::NoSteadyState);
    }
    let w = mp.omega;
    let wm = mp.omega_of(mode);
    let nm = mp.occupation_of(mode);
    let mg_hbar = cfg.mass * cfg.gamma * consts.hbar;
    let szz = w / (2.0 * wm) * nm + zz_factor * d_mode * w / (2.0 * mg_hbar * wm * wm);
    let spp = wm / (2.0 * w) * nm + pp_factor * d_mode / (2.0 * mg_hbar * w);
    Ok(CovMatrix2::new(szz, 0.0, spp))
}

/// Kronecker-sum generator of σ ↦ Aσ + σAᵀ acting on column-major vec(σ).
fn lyapunov_operator<const N: usize>(a: &SMatrix<f64, N, N>) -> DMatrix<f64> {
    let n2 = N * N;
    let mut k = DMatrix::zeros(n2, n2);
    for col in 0..N {
        for row in 0..N {
            let idx = row + N * col;
            // (Aσ)_{row,col} = Σ_j A_{row,j} σ_{j,col}
            for j in 0..N {
                k[(idx, j + N * col)] += a[(row, j)];
                // (σAᵀ)_{row,col} = Σ_j σ_{row,j} A_{col,j}
                k[(idx, row + N * j)] += a[(col, j)];
            }
        }
    }
    k
}

fn vec_of<const N: usize>(m: &SMatrix<f64, N, N>) -> DVector<f64> {
    DVector::from_iterator(N * N, m.iter().cloned())
}

fn mat_of<const N: usize>(v: &DVector<f64>) -> SMatrix<f64, N, N> {
    SMatrix::<f64, N, N>::from_iterator(v.iter().cloned())
}

fn symmetrize<const N: usize>(m: &SMatrix<f64, N, N>) -> SMatrix<f64, N, N> {
    (m + m.transpose()) * 0.5
}

/// Solves Aσ + σAᵀ + D = 0 by a dense Kronecker-sum linear solve.
pub fn lyapunov_steady<const N: usize>(a: &SMatrix<f64, N, N>, d: &SMatrix<f64, N, N>) -> Result<SMatrix<f64, N, N>> {
    let k = lyapunov_operator(a);
    let rhs = -vec_of(d);
    let sol = k
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Invalid("Lyapunov operator is singular (undamped drift)".into()))?;
    Ok(symmetrize(&mat_of::<N>(&sol)))
}

/// Largest step accepted by [`evolve`]: 1% of the shortest oscillation
/// period and of the fastest decay time of `a`.
pub fn max_step<const N: usize>(a: &SMatrix<f64, N, N>) -> f64 {
    let eig = DMatrix::from_column_slice(N, N, a.as_slice()).complex_eigenvalues();
    let mut limit = f64::INFINITY;
    for l in eig.iter() {
        let modulus = l.norm();
        if modulus > 0.0 {
            limit = limit.min(2.0 * std::f64::consts::PI / modulus);
        }
        if l.re != 0.0 {
            limit = limit.min(1.0 / l.re.abs());
        }
    }
    0.01 * limit
}

/// Integrates σ̇ = Aσ + σAᵀ + D to time `t` with classical RK4 at a fixed
/// step no larger than `dt_max`.
pub fn evolve<const N: usize>(
    sigma0: &SMatrix<f64, N, N>,
    a: &SMatrix<f64, N, N>,
    d: &SMatrix<f64, N, N>,
    t: f64,
    dt_max: f64,
) -> Result<SMatrix<f64, N, N>> {
    let limit = max_step(a);
    if !(dt_max > 0.0) || dt_max > limit * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { dt: dt_max, limit });
    }
    if t == 0.0 {
        return Ok(*sigma0);
    }
    let steps = (t / dt_max).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let rhs = |s: &SMatrix<f64, N, N>| a * s + s * a.transpose() + d;
    let mut s = *sigma0;
    for _ in 0..steps {
        let k1 = rhs(&s);
        let k2 = rhs(&(s + k1 * (0.5 * h)));
        let k3 = rhs(&(s + k2 * (0.5 * h)));
        let k4 = rhs(&(s + k3 * h));
        s = symmetrize(&(s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)));
        if s.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("covariance propagation"));
        }
    }
    Ok(s)
}

/// σ(t) = e^{At}σ₀e^{Aᵀt} + ∫₀ᵗ e^{As}De^{Aᵀs}ds, evaluated through the
/// exponential of the augmented Kronecker generator [[K, vec D], [0, 0]].
/// Valid for singular K (undamped motion).
pub fn evolve_exact<const N: usize>(
    sigma0: &SMatrix<f64, N, N>,
    a: &SMatrix<f64, N, N>,
    d: &SMatrix<f64, N, N>,
    t: f64,
) -> SMatrix<f64, N, N> {
    let n2 = N * N;
    let k = lyapunov_operator(a);
    let dv = vec_of(d);
    let mut m = DMatrix::zeros(n2 + 1, n2 + 1);
    m.view_mut((0, 0), (n2, n2)).copy_from(&(k * t));
    m.view_mut((0, n2), (n2, 1)).copy_from(&(dv * t));
    let e = m.exp();
    let mut s0 = vec_of(sigma0).push(1.0);
    s0 = &e * s0;
    let out = DVector::from_iterator(n2, s0.iter().take(n2).cloned());
    symmetrize(&mat_of::<N>(&out))
}

/// Lab-frame drift and diffusion over (Z₁, P₁, Z₂, P₂).
///
/// The Coulomb term couples positions with strength k = ηδ²ω/2:
/// dP₁ = −ωZ₁ − k(Z₁ − Z₂) − γP₁, which rotates to ω_c = ω and
/// ω_d² = ω²(1 + ηδ²). Both particles see momentum diffusion
/// (D11 + D_th)/(mħω) with cross term D12/(mħω).
pub fn two_mode_system(
    cfg: &ExperimentConfig,
    set: &DiffusionSet,
    consts: &PhysicalConstants,
) -> Result<(Matrix4<f64>, Matrix4<f64>)> {
    let mp = mode_params(cfg, consts)?;
    Ok(two_mode_matrices(
        mp.omega,
        mp.eta * mp.delta2,
        cfg.gamma,
        set,
        cfg.mass,
        consts,
    ))
}

/// [`two_mode_system`] from raw parameters; `signed_delta2` is ηδ².
pub fn two_mode_matrices(
    omega: f64,
    signed_delta2: f64,
    gamma: f64,
    set: &DiffusionSet,
    mass: f64,
    consts: &PhysicalConstants,
) -> (Matrix4<f64>, Matrix4<f64>) {
    let w = omega;
    let k = 0.5 * signed_delta2 * w;
    #[rustfmt::skip]
    let a = Matrix4::new(
        0.0,     w,      0.0,     0.0,
        -w - k,  -gamma, k,       0.0,
        0.0,     0.0,    0.0,     w,
        k,       0.0,    -w - k,  -gamma,
    );
    let scale = 1.0 / (mass * consts.hbar * w);
    let mut d = Matrix4::zeros();
    d[(1, 1)] = (set.d11 + set.dth) * scale;
    d[(3, 3)] = (set.d11 + set.dth) * scale;
    d[(1, 3)] = set.d12 * scale;
    d[(3, 1)] = set.d12 * scale;
    (a, d)
}

/// Orthogonal map (Z₁, P₁, Z₂, P₂) → (Z_c, P_c, Z_d, P_d).
pub fn mode_rotation() -> Matrix4<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    #[rustfmt::skip]
    let r = Matrix4::new(
        s,   0.0, s,   0.0,
        0.0, s,   0.0, s,
        s,   0.0, -s,  0.0,
        0.0, s,   0.0, -s,
    );
    r
}
