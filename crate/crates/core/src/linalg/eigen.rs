//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `h_pq` with a diagonal
//! unitary, then applies the classical real symmetric Jacobi rotation. The
//! composite 2×2 unitary is accumulated into the eigenvector matrix.

use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{invalid, Error, Result};

/// Maximum number of full cyclic sweeps before giving up.
pub const MAX_SWEEPS: usize = 40;

/// Off-diagonal Frobenius norm, relative to `max(1, ‖H‖_F)`, at which the
/// iteration stops.
pub const CONVERGENCE_TOL: f64 = 1e-14;

/// Relative Hermitian defect accepted on input.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigendecomposition `H = V·diag(λ)·V*` with `λ` sorted descending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// `V·diag(f(λ))·V*`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.vectors.dim();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &w) in fl.iter().enumerate() {
                    if w != 0.0 {
                        acc += v[(i, k)] * v[(j, k)].conj() * w;
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)].im = 0.0;
        }
        out
    }

    /// `V·diag(λ)·V*`.
    pub fn reconstruct(&self) -> CMatrix {
        self.map_spectrum(|l| l)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("eigendecomposition of a non-empty matrix")
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Diagonalizes a Hermitian matrix.
///
/// Inputs whose Hermitian defect exceeds `1e-12·max(1, ‖H‖_F)` are rejected.
/// The strictly Hermitian part is what gets diagonalized.
pub fn hermitian_eig(h: &CMatrix) -> Result<HermitianEigen> {
    if !h.is_finite() {
        return Err(invalid("eigensolver input has non-finite entries"));
    }
    let scale = h.frobenius_norm().max(1.0);
    let defect = h.hermitian_defect();
    if defect > HERMITIAN_TOL * scale {
        return Err(invalid(format!(
            "matrix is not Hermitian (defect {defect:e} relative to scale {scale:e})"
        )));
    }
    let n = h.dim();
    let mut a = h.real_part();
    let mut v = CMatrix::identity(n);
    let target = CONVERGENCE_TOL * scale;

    let mut sweep = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= target {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS, off_diagonal: off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweep += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { eigenvalues, vectors })
}

/// Annihilates `a[p][q]` (and `a[q][p]`) with one complex Jacobi rotation.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // phase factor e^{-iφ} with a_pq = |a_pq| e^{iφ}
    let phase = apq.conj() / mag;

    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, phase) · [[c, s], [-s, c]]
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = phase * (-s);
    let g_qq = phase * c;

    let n = a.dim();
    // A ← A·G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A ← G*·A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    // V ← V·G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}
