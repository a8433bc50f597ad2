//! Link-by-link checks that each identity specializes to the next:
//! field law → weighted family law → sum-of-squares form → two-term form →
//! operator parallelogram law.

use serde::Serialize;

use super::gen::{gen_matrix, gen_weights, MatrixKind};
use super::rng::Stream;
use crate::error::Result;
use crate::identities::{
    field_parallelogram, generalized_parallelogram, lemma_parallelogram, two_term_identity,
    sum_of_squares_identity, AlphaField, OperatorField, QuadratureMeasure, WeightConstraint,
};
use crate::linalg::CMatrix;
use crate::tolerance::matrix_residual;

#[derive(Clone, Debug, Serialize)]
pub struct ChainLink {
    pub name: &'static str,
    /// Larger of the left-side and right-side residuals between the two forms.
    pub residual: f64,
}

fn link(name: &'static str, lhs: (&CMatrix, &CMatrix), rhs: (&CMatrix, &CMatrix)) -> ChainLink {
    ChainLink { name, residual: matrix_residual(lhs.0, lhs.1).max(matrix_residual(rhs.0, rhs.1)) }
}

/// Evaluates all four links on one shared random instance with `count ≥ 2`
/// matrices per family.
pub fn reduction_chain(seed: u64, trial: u64, dim: usize, count: usize) -> Result<Vec<ChainLink>> {
    let stream = |role: &str| Stream::for_role(seed, "chain", dim, count, trial, role);
    let draw = |prefix: &str| -> Result<Vec<CMatrix>> {
        (0..count).map(|i| gen_matrix(MatrixKind::Ginibre, dim, &mut stream(&format!("{prefix}{i}")))).collect()
    };
    let a = draw("A")?;
    let b = draw("B")?;
    let r = gen_weights(count, WeightConstraint::SumReciprocalOne, &mut stream("r"))?;

    // counting measure with α(i, j) = √(rᵢ/rⱼ) double-counts each unordered pair
    let field = field_parallelogram(
        &OperatorField::new(a.clone())?,
        &OperatorField::new(b.clone())?,
        &QuadratureMeasure::counting(count)?,
        &AlphaField::from_weights(r.values())?,
    )?;
    let family = generalized_parallelogram(&a, &b, &r)?;
    let (half_l, half_r) = (field.lhs.scale_real(0.5), field.rhs.scale_real(0.5));
    let first = link("field→family", (&half_l, &family.lhs), (&half_r, &family.rhs));

    let zeros = vec![CMatrix::zeros(dim); count];
    let family_b0 = generalized_parallelogram(&a, &zeros, &r)?;
    let sos = sum_of_squares_identity(&a, &r)?;
    let second = link("family→sum-of-squares", (&family_b0.lhs, &sos.lhs), (&family_b0.rhs, &sos.rhs));

    let r2 = gen_weights(2, WeightConstraint::SumReciprocalOne, &mut stream("r2"))?;
    let pair = &a[..2];
    let zf2 = sum_of_squares_identity(pair, &r2)?;
    let t = r2.values()[0] / r2.values()[1];
    let two = two_term_identity(&pair[0], &pair[1], t)?;
    let sum_sq = (&pair[0] + &pair[1]).gram();
    let (zl, zr) = (&zf2.lhs + &sum_sq, &zf2.rhs + &sum_sq);
    let third = link("sum-of-squares→two-term", (&zl, &two.lhs), (&zr, &two.rhs));

    let two_1 = two_term_identity(&pair[0], &pair[1], 1.0)?;
    let lemma = lemma_parallelogram(&pair[0], &pair[1])?;
    let fourth = link("two-term→parallelogram", (&two_1.lhs, &lemma.lhs), (&two_1.rhs, &lemma.rhs));

    Ok(vec![first, second, third, fourth])
}
