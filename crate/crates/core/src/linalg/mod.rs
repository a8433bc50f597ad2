//! Dense complex linear algebra: matrices, the Hermitian eigensolver and the
//! spectral operations built on it.

mod eigen;
mod matrix;
mod spectral;

pub use eigen::{hermitian_eig, HermitianEigen, CONVERGENCE_TOL, HERMITIAN_TOL, MAX_SWEEPS};
pub use matrix::{rank_one, CMatrix, CVector};
pub use spectral::{abs_op, apply_scalar_fn, is_psd, real_part, PsdCheck, CLAMP_TOL};

