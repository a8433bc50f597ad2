//! Scale-free residual model shared by every verifier.

use crate::linalg::CMatrix;

/// Default residual tolerance `τ`.
pub const DEFAULT_TAU: f64 = 1e-10;

/// `‖L − R‖_F / (1 + ‖L‖_F + ‖R‖_F)`; an identity holds when this is at most `τ`.
pub fn matrix_residual(lhs: &CMatrix, rhs: &CMatrix) -> f64 {
    (lhs - rhs).frobenius_norm() / (1.0 + lhs.frobenius_norm() + rhs.frobenius_norm())
}

/// Real-valued counterpart of [`matrix_residual`].
pub fn scalar_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / (1.0 + lhs.abs() + rhs.abs())
}

/// `1 + |lhs| + |rhs|`, the scale margins are judged against.
pub fn margin_scale(lhs: f64, rhs: f64) -> f64 {
    1.0 + lhs.abs() + rhs.abs()
}
