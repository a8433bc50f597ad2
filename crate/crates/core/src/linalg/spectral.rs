//! Spectral calculus on Hermitian matrices: operator absolute value, matrix
//! functions of PSD matrices, and Loewner-order tests.

use super::eigen::{hermitian_eig, HermitianEigen};
use super::matrix::CMatrix;
use crate::error::{invalid, Result};

/// Relative depth below zero to which eigenvalues of a nominally PSD matrix
/// are clamped to zero.
pub const CLAMP_TOL: f64 = 1e-10;

/// Spectral norm of a Hermitian matrix from its eigendecomposition.
fn spectral_radius(eig: &HermitianEigen) -> f64 {
    eig.max_eigenvalue().abs().max(eig.min_eigenvalue().abs())
}

/// Clamps eigenvalues in `[-CLAMP_TOL·max(1,‖H‖₂), 0)` to zero; anything more
/// negative is rejected.
fn clamped_spectrum(eig: &HermitianEigen) -> Result<Vec<f64>> {
    let floor = -CLAMP_TOL * spectral_radius(eig).max(1.0);
    eig.eigenvalues
        .iter()
        .map(|&l| {
            if l >= 0.0 {
                Ok(l)
            } else if l >= floor {
                Ok(0.0)
            } else {
                Err(invalid(format!("matrix is not PSD: eigenvalue {l:e} below {floor:e}")))
            }
        })
        .collect()
}

/// `f(H) = V·diag(f(λᵢ))·V*` for a PSD matrix `H`, after clamping rounding
/// negatives in the spectrum to zero.
pub fn apply_scalar_fn(h: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let eig = hermitian_eig(h)?;
    apply_to_eigen(&eig, f)
}

fn apply_to_eigen(eig: &HermitianEigen, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let spectrum = clamped_spectrum(eig)?;
    let mapped: Vec<f64> = spectrum.iter().map(|&l| f(l)).collect();
    if let Some(pos) = mapped.iter().position(|v| !v.is_finite()) {
        return Err(invalid(format!(
            "scalar function undefined at eigenvalue {:e}",
            spectrum[pos]
        )));
    }
    let mapped_eig = HermitianEigen { eigenvalues: mapped, vectors: eig.vectors.clone() };
    Ok(mapped_eig.reconstruct())
}

/// `|A| = (A*A)^{1/2}`.
pub fn abs_op(a: &CMatrix) -> Result<CMatrix> {
    apply_scalar_fn(&a.gram(), f64::sqrt)
}

/// Outcome of a Loewner-order test `H ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsdCheck {
    pub psd: bool,
    pub min_eigenvalue: f64,
    /// `‖H‖₂`, the scale the tolerance was applied against.
    pub spectral_norm: f64,
}

/// `H ≥ 0` iff `λ_min(H) ≥ −tol·max(1, ‖H‖₂)`.
pub fn is_psd(h: &CMatrix, tol: f64) -> Result<PsdCheck> {
    let eig = hermitian_eig(h)?;
    let spectral_norm = spectral_radius(&eig);
    let min_eigenvalue = eig.min_eigenvalue();
    Ok(PsdCheck {
        psd: min_eigenvalue >= -tol * spectral_norm.max(1.0),
        min_eigenvalue,
        spectral_norm,
    })
}

/// Hermitian part `(X + X*)/2`, written `Re X`.
pub fn real_part(x: &CMatrix) -> CMatrix {
    x.real_part()
}
