//! Random instance generators.

use serde::{Deserialize, Serialize};

use super::rng::Stream;
use crate::error::Result;
use crate::identities::{AlphaField, WeightConstraint, WeightVector};
use crate::linalg::{hermitian_eig, rank_one, CMatrix, CVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    /// iid standard complex Gaussian entries
    Ginibre,
    /// `(G + G*)/2`
    Hermitian,
    /// `G*G`
    Psd,
    /// eigenvector matrix of a random Hermitian matrix
    Unitary,
    /// `x ⊗ y` for Gaussian `x`, `y`
    RankOne,
}

pub fn gen_vector(dim: usize, stream: &mut Stream) -> CVector {
    CVector::new((0..dim).map(|_| stream.complex_normal()).collect()).expect("finite Gaussian draws")
}

fn ginibre(dim: usize, stream: &mut Stream) -> CMatrix {
    CMatrix::from_fn(dim, |_, _| stream.complex_normal())
}

pub fn gen_matrix(kind: MatrixKind, dim: usize, stream: &mut Stream) -> Result<CMatrix> {
    Ok(match kind {
        MatrixKind::Ginibre => ginibre(dim, stream),
        MatrixKind::Hermitian => ginibre(dim, stream).real_part(),
        MatrixKind::Psd => ginibre(dim, stream).gram(),
        MatrixKind::Unitary => hermitian_eig(&ginibre(dim, stream).real_part())?.vectors,
        MatrixKind::RankOne => {
            let x = gen_vector(dim, stream);
            let y = gen_vector(dim, stream);
            rank_one(&x, &y)?
        }
    })
}

/// `rᵢ = (Σ u)/uᵢ`, so that `Σ 1/rᵢ = 1` up to rounding.
pub fn weights_from_draws(u: &[f64]) -> Result<WeightVector> {
    let total: f64 = u.iter().sum();
    WeightVector::normalized(u.iter().map(|ui| total / ui).collect())
}

/// Constrained mode draws `uᵢ` uniform in `[0.1, 1)` and normalizes; free
/// mode draws `rᵢ` log-uniform in `[0.1, 10)`.
pub fn gen_weights(n: usize, constraint: WeightConstraint, stream: &mut Stream) -> Result<WeightVector> {
    match constraint {
        WeightConstraint::SumReciprocalOne => {
            let u: Vec<f64> = (0..n).map(|_| stream.uniform_in(0.1, 1.0)).collect();
            weights_from_draws(&u)
        }
        WeightConstraint::None => {
            let ln10 = std::f64::consts::LN_10;
            WeightVector::free((0..n).map(|_| stream.uniform_in(-ln10, ln10).exp()).collect())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaMode {
    /// `α(k, l) = √(rₖ/rₗ)` for a free weight vector
    PhaseWeight,
    /// independent off-diagonal draws mirrored by `α(l, k) = 1/conj(α(k, l))`
    Free,
}

/// Builds a valid α-field. In free mode each `α(k, l)`, `k < l`, has modulus
/// log-uniform in `[1/4, 4)` and uniform phase; the diagonal is unimodular.
pub fn gen_alpha(m: usize, mode: AlphaMode, stream: &mut Stream) -> Result<AlphaField> {
    match mode {
        AlphaMode::PhaseWeight => {
            let r = gen_weights(m, WeightConstraint::None, stream)?;
            AlphaField::from_weights(r.values())
        }
        AlphaMode::Free => {
            let mut values = vec![num_complex::Complex64::new(0.0, 0.0); m * m];
            let ln4 = 4f64.ln();
            for k in 0..m {
                values[k * m + k] = stream.unimodular();
                for l in (k + 1)..m {
                    let modulus = stream.uniform_in(-ln4, ln4).exp();
                    let a = stream.unimodular() * modulus;
                    values[k * m + l] = a;
                    values[l * m + k] = 1.0 / a.conj();
                }
            }
            AlphaField::new(m, values)
        }
    }
}

/// Measure weights uniform in `(0, 2]`.
pub fn gen_measure_weights(m: usize, stream: &mut Stream) -> Vec<f64> {
    (0..m).map(|_| 2.0 * stream.uniform_open_zero()).collect()
}
