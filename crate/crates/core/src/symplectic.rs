//! Two-mode Gaussian states: symplectic spectra, the PPT criterion and the
//! logarithmic negativity.
//!
//! Covariances are ordered (Z₁, P₁, Z₂, P₂) with the vacuum at ½·I. Writing
//! σ = [[A, C], [Cᵀ, B]], partial transposition of the second mode flips the
//! sign of det C, so the partially transposed invariant is
//! Δ̃ = det A + det B − 2 det C and ν̃∓² = (Δ̃ ∓ √(Δ̃² − 4 det σ))/2.

use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack allowed on Δ̃² − 4 det σ before declaring it negative.
const DEGENERACY_TOL: f64 = 1e-10;

/// Below this relative discriminant the square root in the closed form
/// amplifies rounding (√ε), so the spectrum is taken from a symmetric
/// eigenproblem instead.
const NEAR_DEGENERATE: f64 = 1e-4;

/// Two-mode covariance over (Z₁, P₁, Z₂, P₂).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovMatrix4(pub Matrix4<f64>);

impl CovMatrix4 {
    /// Symmetrises its argument.
    pub fn new(m: Matrix4<f64>) -> Self {
        Self((m + m.transpose()) * 0.5)
    }

    pub fn vacuum() -> Self {
        Self(Matrix4::identity() * 0.5)
    }

    pub fn thermal(n: f64) -> Self {
        Self(Matrix4::identity() * (0.5 * n))
    }

    /// Product of two thermal states with occupation factor `n`, each
    /// squeezed by `r` (position variance stretched by e^r).
    pub fn squeezed_thermal(n: f64, r: f64) -> Self {
        let (up, down) = (r.exp(), (-r).exp());
        Self(Matrix4::from_diagonal(&nalgebra::Vector4::new(up, down, up, down)) * (0.5 * n))
    }

    /// Two-mode squeezed vacuum with squeezing parameter `r`.
    pub fn two_mode_squeezed(r: f64) -> Self {
        let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        #[rustfmt::skip]
        let m = Matrix4::new(
            c,   0.0, s,   0.0,
            0.0, c,   0.0, -s,
            s,   0.0, c,   0.0,
            0.0, -s,  0.0, c,
        );
        Self(m * 0.5)
    }

    pub fn block_a(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn block_b(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn block_c(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 2).into_owned()
    }

    /// Partial transpose of the second mode (P₂ → −P₂).
    pub fn partial_transpose(&self) -> Self {
        let p = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
        Self(p * self.0 * p)
    }

    /// Symplectic spectrum of σ itself.
    pub fn symplectic_eigen(&self) -> Result<SymplecticPair> {
        let delta = self.block_a().determinant() + self.block_b().determinant() + 2.0 * self.block_c().determinant();
        spectrum(delta, self.0.determinant(), self)
    }

    /// Heisenberg uncertainty relation σ + (i/2)Σ ≥ 0, checked as ν₋ ≥ ½ − tol.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.0.cholesky().is_some()
            && self
                .symplectic_eigen()
                .map(|s| s.nu_minus >= 0.5 - tol)
                .unwrap_or(false)
    }
}

/// Symplectic eigenvalues ν₋ ≤ ν₊ and the invariant Δ that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticPair {
    pub nu_minus: f64,
    pub nu_plus: f64,
    pub delta_tilde: f64,
}

/// Spectrum from the invariants (Δ, det σ); `sigma` is the matrix whose
/// symplectic eigenvalues they describe, used when they nearly coincide.
fn spectrum(delta: f64, det: f64, sigma: &CovMatrix4) -> Result<SymplecticPair> {
    let disc = delta * delta - 4.0 * det;
    if disc < -DEGENERACY_TOL * delta * delta {
        return Err(Error::Degenerate(disc));
    }
    if disc < NEAR_DEGENERATE * delta * delta {
        if let Some((nu_minus, nu_plus)) = hermitian_spectrum(&sigma.0) {
            return Ok(SymplecticPair {
                nu_minus,
                nu_plus,
                delta_tilde: delta,
            });
        }
    }
    let root = disc.max(0.0).sqrt();
    // ν₋²·ν₊² = det σ; take ν₋ from the quotient to avoid cancellation
    let nu_plus_sq = 0.5 * (delta + root);
    let nu_minus_sq = if nu_plus_sq > 0.0 { det / nu_plus_sq } else { 0.0 };
    Ok(SymplecticPair {
        nu_minus: nu_minus_sq.max(0.0).sqrt(),
        nu_plus: nu_plus_sq.sqrt(),
        delta_tilde: delta,
    })
}

/// Symplectic eigenvalues of the partially transposed state.
pub fn ppt_eigen(sigma: &CovMatrix4) -> Result<SymplecticPair> {
    let delta = sigma.block_a().determinant() + sigma.block_b().determinant() - 2.0 * sigma.block_c().determinant();
    spectrum(delta, sigma.0.determinant(), &sigma.partial_transpose())
}

/// Symplectic eigenvalues of a positive-definite σ from the symmetric matrix
/// KᵀK, K = σ^{½}Σσ^{½}, whose eigenvalues are ν₋², ν₋², ν₊², ν₊². Being a
/// symmetric eigenproblem it stays accurate when ν₋ ≈ ν₊.
fn hermitian_spectrum(sigma: &Matrix4<f64>) -> Option<(f64, f64)> {
    let eig = sigma.symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
        return None;
    }
    let root =
        eig.eigenvectors * Matrix4::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * eig.eigenvectors.transpose();
    let k = root * symplectic_form() * root;
    let mut sq: Vec<f64> = (k.transpose() * k)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .collect();
    sq.sort_by(|a, b| a.total_cmp(b));
    Some((
        (0.5 * (sq[0] + sq[1])).max(0.0).sqrt(),
        (0.5 * (sq[2] + sq[3])).max(0.0).sqrt(),
    ))
}

/// Standard symplectic form Σ = J ⊕ J, J = [[0, 1], [−1, 0]].
pub fn symplectic_form() -> Matrix4<f64> {
    #[rustfmt::skip]
    let s = Matrix4::new(
        0.0,  1.0, 0.0,  0.0,
        -1.0, 0.0, 0.0,  0.0,
        0.0,  0.0, 0.0,  1.0,
        0.0,  0.0, -1.0, 0.0,
    );
    s
}

/// Partially transposed spectrum from the moduli of the eigenvalues of
/// Σσ̃ (which come in pairs ±iν̃). Independent of the Δ̃ formula; less
/// accurate than [`ppt_eigen`] when the two eigenvalues nearly coincide.
pub fn ppt_eigen_direct(sigma: &CovMatrix4) -> SymplecticPair {
    let pt = sigma.partial_transpose();
    let m = symplectic_form() * pt.0;
    let mut moduli: Vec<f64> = m.complex_eigenvalues().iter().map(|l| l.norm()).collect();
    moduli.sort_by(|a, b| a.total_cmp(b));
    let delta = pt.block_a().determinant() + pt.block_b().determinant() + 2.0 * pt.block_c().determinant();
    SymplecticPair {
        nu_minus: 0.5 * (moduli[0] + moduli[1]),
        nu_plus: 0.5 * (moduli[2] + moduli[3]),
        delta_tilde: delta,
    }
}

/// E_N = max{0, −log₂(2ν̃₋)}, zero exactly at the separability threshold.
pub fn log_negativity(sigma: &CovMatrix4) -> Result<f64> {
    Ok(log_negativity_from_nu(ppt_eigen(sigma)?.nu_minus))
}

pub fn log_negativity_from_nu(nu_tilde_minus: f64) -> f64 {
    (-(2.0 * nu_tilde_minus).log2()).max(0.0)
}

/// Elementary symplectic maps, for building random physical states.
pub mod maps {
    use nalgebra::Matrix4;

    /// Phase-space rotation of each mode.
    pub fn rotations(theta1: f64, theta2: f64) -> Matrix4<f64> {
        let (c1, s1) = (theta1.cos(), theta1.sin());
        let (c2, s2) = (theta2.cos(), theta2.sin());
        #[rustfmt::skip]
        let m = Matrix4::new(
            c1,  s1,  0.0, 0.0,
            -s1, c1,  0.0, 0.0,
            0.0, 0.0, c2,  s2,
            0.0, 0.0, -s2, c2,
        );
        m
    }

    /// Single-mode squeezers diag(e^{r}, e^{−r}) on each mode.
    pub fn squeezers(r1: f64, r2: f64) -> Matrix4<f64> {
        Matrix4::from_diagonal(&nalgebra::Vector4::new(r1.exp(), (-r1).exp(), r2.exp(), (-r2).exp()))
    }

    /// Beam splitter mixing the two modes with angle `theta`.
    pub fn beam_splitter(theta: f64) -> Matrix4<f64> {
        let (c, s) = (theta.cos(), theta.sin());
        #[rustfmt::skip]
        let m = Matrix4::new(
            c,   0.0, s,   0.0,
            0.0, c,   0.0, s,
            -s,  0.0, c,   0.0,
            0.0, -s,  0.0, c,
        );
        m
    }
}
