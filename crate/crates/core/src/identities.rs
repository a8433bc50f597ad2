//! Exact operator and vector equalities: operator parallelogram and
//! polarization laws, the weighted-field parallelogram law over a finite
//! measure, its counting-measure and Bohr corollaries, and the Hilbert-space
//! norm identities they specialize to.
//!
//! Every evaluator returns both sides and the scale-free residual from
//! [`crate::tolerance`], so callers decide the tolerance.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{is_psd, rank_one, CMatrix, CVector, PsdCheck};
use crate::tolerance::{matrix_residual, scalar_residual};

/// Tolerance on `Σ 1/rᵢ = 1` and on the α-field constraint.
pub const CONSTRAINT_TOL: f64 = 1e-12;

/// A finite measure: node `k` carries mass `weights[k] > 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct QuadratureMeasure {
    weights: Vec<f64>,
}

impl QuadratureMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(invalid("measure needs at least one node"));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(invalid(format!("measure weights must be positive, got {w}")));
        }
        Ok(Self { weights })
    }

    /// Counting measure on `m` nodes.
    pub fn counting(m: usize) -> Result<Self> {
        Self::new(vec![1.0; m])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

impl TryFrom<Vec<f64>> for QuadratureMeasure {
    type Error = Error;

    fn try_from(w: Vec<f64>) -> Result<Self> {
        Self::new(w)
    }
}

impl From<QuadratureMeasure> for Vec<f64> {
    fn from(m: QuadratureMeasure) -> Self {
        m.weights
    }
}

/// Complex table `α(k, l)` with `conj(α(k,l))·α(l,k) = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AlphaLiteral", into = "AlphaLiteral")]
pub struct AlphaField {
    m: usize,
    values: Vec<Complex64>,
}

/// `{"m": m, "values": [[re, im], ...]}`, row-major.
#[derive(Serialize, Deserialize)]
struct AlphaLiteral {
    m: usize,
    values: Vec<[f64; 2]>,
}

impl AlphaField {
    /// Validates the mirror constraint for every ordered pair.
    pub fn new(m: usize, values: Vec<Complex64>) -> Result<Self> {
        if m == 0 || values.len() != m * m {
            return Err(invalid(format!("α-field of size {m} needs {} values", m * m)));
        }
        for k in 0..m {
            for l in 0..m {
                let a = values[k * m + l];
                if !a.is_finite() || a == Complex64::new(0.0, 0.0) {
                    return Err(invalid(format!("α({k},{l}) must be finite and nonzero")));
                }
                let defect = (a.conj() * values[l * m + k] - 1.0).norm();
                if defect > CONSTRAINT_TOL {
                    return Err(invalid(format!(
                        "conj(α({k},{l}))·α({l},{k}) deviates from 1 by {defect:e}"
                    )));
                }
            }
        }
        Ok(Self { m, values })
    }

    /// `α(i, j) = √(rᵢ/rⱼ)`.
    pub fn from_weights(r: &[f64]) -> Result<Self> {
        let m = r.len();
        let values = (0..m * m)
            .map(|idx| Complex64::new((r[idx / m] / r[idx % m]).sqrt(), 0.0))
            .collect();
        Self::new(m, values)
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize) -> Complex64 {
        self.values[k * self.m + l]
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }
}

impl TryFrom<AlphaLiteral> for AlphaField {
    type Error = Error;

    fn try_from(lit: AlphaLiteral) -> Result<Self> {
        Self::new(lit.m, lit.values.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
    }
}

impl From<AlphaField> for AlphaLiteral {
    fn from(a: AlphaField) -> Self {
        AlphaLiteral { m: a.m, values: a.values.iter().map(|z| [z.re, z.im]).collect() }
    }
}

/// A node-indexed family of equally sized matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorField {
    mats: Vec<CMatrix>,
}

impl OperatorField {
    pub fn new(mats: Vec<CMatrix>) -> Result<Self> {
        let first = mats.first().ok_or_else(|| invalid("operator field needs at least one node"))?;
        check_uniform(first.dim(), &mats)?;
        Ok(Self { mats })
    }

    pub fn mats(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.mats[0].dim()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightConstraint {
    None,
    SumReciprocalOne,
}

/// Positive weights `r₁…rₙ`, optionally normalized so that `Σ 1/rᵢ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector {
    values: Vec<f64>,
    constraint: WeightConstraint,
}

impl WeightVector {
    pub fn new(values: Vec<f64>, constraint: WeightConstraint) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("weight vector must be non-empty"));
        }
        if let Some(r) = values.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(invalid(format!("weights must be positive, got {r}")));
        }
        if constraint == WeightConstraint::SumReciprocalOne {
            let defect = (values.iter().map(|r| 1.0 / r).sum::<f64>() - 1.0).abs();
            if defect > CONSTRAINT_TOL {
                return Err(invalid(format!("Σ 1/rᵢ deviates from 1 by {defect:e}")));
            }
        }
        Ok(Self { values, constraint })
    }

    pub fn free(values: Vec<f64>) -> Result<Self> {
        Self::new(values, WeightConstraint::None)
    }

    pub fn normalized(values: Vec<f64>) -> Result<Self> {
        Self::new(values, WeightConstraint::SumReciprocalOne)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn constraint(&self) -> WeightConstraint {
        self.constraint
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn require_normalized(&self) -> Result<()> {
        if self.constraint == WeightConstraint::SumReciprocalOne {
            Ok(())
        } else {
            Err(invalid("weights must satisfy Σ 1/rᵢ = 1"))
        }
    }

    /// `√(rᵢ/rⱼ)`.
    #[inline]
    fn ratio(&self, i: usize, j: usize) -> f64 {
        (self.values[i] / self.values[j]).sqrt()
    }
}

/// Both sides of an equality and their scale-free residual.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityResult<T> {
    pub lhs: T,
    pub rhs: T,
    pub residual: f64,
}

impl<T> IdentityResult<T> {
    pub fn pass(&self, tau: f64) -> bool {
        self.residual <= tau
    }
}

impl IdentityResult<CMatrix> {
    fn matrices(lhs: CMatrix, rhs: CMatrix) -> Self {
        let residual = matrix_residual(&lhs, &rhs);
        Self { lhs, rhs, residual }
    }
}

impl IdentityResult<f64> {
    fn reals(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, residual: scalar_residual(lhs, rhs) }
    }
}

fn check_uniform(dim: usize, mats: &[CMatrix]) -> Result<()> {
    match mats.iter().find(|m| m.dim() != dim) {
        Some(m) => Err(Error::DimensionMismatch { expected: dim, found: m.dim() }),
        None => Ok(()),
    }
}

fn check_lengths(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Shared validation for a pair of equally long, equally sized families.
fn check_families(a: &[CMatrix], b: &[CMatrix]) -> Result<usize> {
    let first = a.first().ok_or_else(|| invalid("operator family must be non-empty"))?;
    check_lengths(a.len(), b.len())?;
    check_uniform(first.dim(), a)?;
    check_uniform(first.dim(), b)?;
    Ok(first.dim())
}

/// `a·X + b·Y`.
fn lin2(a: Complex64, x: &CMatrix, b: Complex64, y: &CMatrix) -> CMatrix {
    &x.scale(a) + &y.scale(b)
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `|A+B|² + |A−B|² = 2|A|² + 2|B|²`.
pub fn lemma_parallelogram(a: &CMatrix, b: &CMatrix) -> Result<IdentityResult<CMatrix>> {
    let sum = a.checked_add(b)?;
    let diff = a.checked_sub(b)?;
    let lhs = &sum.gram() + &diff.gram();
    let rhs = (&a.gram() + &b.gram()).scale_real(2.0);
    Ok(IdentityResult::matrices(lhs, rhs))
}

/// `|A+B|² − |A−B|² = 4 Re(A*B)`.
pub fn lemma_polarization(a: &CMatrix, b: &CMatrix) -> Result<IdentityResult<CMatrix>> {
    let sum = a.checked_add(b)?;
    let diff = a.checked_sub(b)?;
    let lhs = &sum.gram() - &diff.gram();
    let rhs = (&a.adjoint() * b).real_part().scale_real(4.0);
    Ok(IdentityResult::matrices(lhs, rhs))
}

/// The three double sums and the integral entering the field identities.
struct FieldTerms {
    /// `ΣₖΣₗ wₖwₗ |α(k,l)Aₖ − α(l,k)Aₗ|²`
    self_a: CMatrix,
    /// same for `B`
    self_b: CMatrix,
    /// `ΣₖΣₗ wₖwₗ |α(k,l)Aₖ − α(l,k)Bₗ|²`
    cross: CMatrix,
    /// `|Σₖ wₖ(Aₖ − Bₖ)|²`
    integral_sq: CMatrix,
}

fn field_terms(
    a: &OperatorField,
    b: &OperatorField,
    mu: &QuadratureMeasure,
    alpha: &AlphaField,
) -> Result<FieldTerms> {
    let m = a.len();
    check_lengths(m, b.len())?;
    check_lengths(m, mu.len())?;
    check_lengths(m, alpha.len())?;
    check_lengths(a.dim(), b.dim())?;
    let (a, b, w) = (a.mats(), b.mats(), mu.weights());
    let n = a[0].dim();

    let mut self_a = CMatrix::zeros(n);
    let mut self_b = CMatrix::zeros(n);
    let mut cross = CMatrix::zeros(n);
    for k in 0..m {
        for l in 0..m {
            let ww = w[k] * w[l];
            let (akl, alk) = (alpha.get(k, l), -alpha.get(l, k));
            self_a = &self_a + &lin2(akl, &a[k], alk, &a[l]).gram().scale_real(ww);
            self_b = &self_b + &lin2(akl, &b[k], alk, &b[l]).gram().scale_real(ww);
            cross = &cross + &lin2(akl, &a[k], alk, &b[l]).gram().scale_real(ww);
        }
    }
    let mut integral = CMatrix::zeros(n);
    for k in 0..m {
        integral = &integral + &(&a[k] - &b[k]).scale_real(w[k]);
    }
    Ok(FieldTerms { self_a, self_b, cross, integral_sq: integral.gram() })
}

/// Parallelogram law for operator fields over a finite measure with an
/// α-weighting:
///
/// `∫∫|α(t,s)Aₜ−α(s,t)Aₛ|² + ∫∫|α(t,s)Bₜ−α(s,t)Bₛ|²
///   = 2∫∫|α(t,s)Aₜ−α(s,t)Bₛ|² − 2|∫(Aₜ−Bₜ)|²`.
pub fn field_parallelogram(
    a: &OperatorField,
    b: &OperatorField,
    mu: &QuadratureMeasure,
    alpha: &AlphaField,
) -> Result<IdentityResult<CMatrix>> {
    let t = field_terms(a, b, mu, alpha)?;
    let lhs = &t.self_a + &t.self_b;
    let rhs = (&t.cross - &t.integral_sq).scale_real(2.0);
    Ok(IdentityResult::matrices(lhs, rhs))
}

/// Weighted parallelogram law for finite families, pairs `i < j` on the left
/// and all `(i, j)` on the right.
pub fn generalized_parallelogram(
    a: &[CMatrix],
    b: &[CMatrix],
    r: &WeightVector,
) -> Result<IdentityResult<CMatrix>> {
    let n_dim = check_families(a, b)?;
    let n = a.len();
    check_lengths(n, r.len())?;

    let mut lhs = CMatrix::zeros(n_dim);
    for i in 0..n {
        for j in (i + 1)..n {
            let (cij, cji) = (real(r.ratio(i, j)), real(-r.ratio(j, i)));
            lhs = &lhs + &lin2(cij, &a[i], cji, &a[j]).gram();
            lhs = &lhs + &lin2(cij, &b[i], cji, &b[j]).gram();
        }
    }
    let mut rhs = CMatrix::zeros(n_dim);
    let mut diff = CMatrix::zeros(n_dim);
    for i in 0..n {
        for j in 0..n {
            rhs = &rhs + &lin2(real(r.ratio(i, j)), &a[i], real(-r.ratio(j, i)), &b[j]).gram();
        }
        diff = &diff + &(&a[i] - &b[i]);
    }
    let rhs = &rhs - &diff.gram();
    Ok(IdentityResult::matrices(lhs, rhs))
}

/// `Σ_{i<j} |√(rᵢ/rⱼ)Aᵢ − √(rⱼ/rᵢ)Aⱼ|²`.
fn pairwise_sum(a: &[CMatrix], r: &WeightVector) -> CMatrix {
    let n = a.len();
    let mut acc = CMatrix::zeros(a[0].dim());
    for i in 0..n {
        for j in (i + 1)..n {
            acc = &acc + &lin2(real(r.ratio(i, j)), &a[i], real(-r.ratio(j, i)), &a[j]).gram();
        }
    }
    acc
}

/// `Σ rᵢ|Aᵢ|²`.
fn weighted_square_sum(a: &[CMatrix], r: &WeightVector) -> CMatrix {
    let mut acc = CMatrix::zeros(a[0].dim());
    for (ai, &ri) in a.iter().zip(r.values()) {
        acc = &acc + &ai.gram().scale_real(ri);
    }
    acc
}

fn check_weighted_family(a: &[CMatrix], r: &WeightVector) -> Result<()> {
    let first = a.first().ok_or_else(|| invalid("operator family must be non-empty"))?;
    check_uniform(first.dim(), a)?;
    check_lengths(a.len(), r.len())?;
    r.require_normalized()
}

/// For `Σ 1/rᵢ = 1`:
/// `Σ_{i<j} |√(rᵢ/rⱼ)Aᵢ − √(rⱼ/rᵢ)Aⱼ|² = Σ rᵢ|Aᵢ|² − |Σ Aᵢ|²`.
pub fn sum_of_squares_identity(a: &[CMatrix], r: &WeightVector) -> Result<IdentityResult<CMatrix>> {
    check_weighted_family(a, r)?;
    let lhs = pairwise_sum(a, r);
    let total = CMatrix::sum(a).expect("non-empty family");
    let rhs = &weighted_square_sum(a, r) - &total.gram();
    Ok(IdentityResult::matrices(lhs, rhs))
}

/// `|A₁+A₂|² + (1/t)|tA₁−A₂|² = (1+t)|A₁|² + (1+1/t)|A₂|²`.
pub fn two_term_identity(a1: &CMatrix, a2: &CMatrix, t: f64) -> Result<IdentityResult<CMatrix>> {
    if !(t.is_finite() && t > 0.0) {
        return Err(invalid(format!("t must be positive, got {t}")));
    }
    let sum = a1.checked_add(a2)?;
    let skew = &a1.scale_real(t) - a2;
    let lhs = &sum.gram() + &skew.gram().scale_real(1.0 / t);
    let rhs = &a1.gram().scale_real(1.0 + t) + &a2.gram().scale_real(1.0 + 1.0 / t);
    Ok(IdentityResult::matrices(lhs, rhs))
}

/// A gap matrix that must be PSD, with its Loewner check.
#[derive(Clone, Debug)]
pub struct BohrGap {
    pub gap: CMatrix,
    pub psd: PsdCheck,
}

/// `Σ rᵢ|Aᵢ|² − |Σ Aᵢ|²` for `Σ 1/rᵢ = 1`, checked PSD at tolerance `tol`.
pub fn bohr_gap(a: &[CMatrix], r: &WeightVector, tol: f64) -> Result<BohrGap> {
    check_weighted_family(a, r)?;
    let total = CMatrix::sum(a).expect("non-empty family");
    let gap = &weighted_square_sum(a, r) - &total.gram();
    let psd = is_psd(&gap, tol)?;
    Ok(BohrGap { gap, psd })
}

/// `∫∫|α(t,s)Aₜ − α(s,t)Bₛ|² − |∫(Aₜ − Bₜ)|²`, checked PSD at tolerance `tol`.
pub fn field_bohr_gap(
    a: &OperatorField,
    b: &OperatorField,
    mu: &QuadratureMeasure,
    alpha: &AlphaField,
    tol: f64,
) -> Result<BohrGap> {
    let t = field_terms(a, b, mu, alpha)?;
    let gap = &t.cross - &t.integral_sq;
    let psd = is_psd(&gap, tol)?;
    Ok(BohrGap { gap, psd })
}

/// Relative tolerance on `Σ(Aᵢ − Bᵢ) = 0` for the Hilbert–Schmidt identity.
pub const BALANCE_TOL: f64 = 1e-12;

fn hs_dist_sq(x: &CMatrix, y: &CMatrix) -> f64 {
    (x - y).entries().iter().map(|z| z.norm_sqr()).sum()
}

/// For `Σ(Aᵢ − Bᵢ) = 0`:
/// `Σᵢⱼ‖Aᵢ−Aⱼ‖₂² + Σᵢⱼ‖Bᵢ−Bⱼ‖₂² = 2Σᵢⱼ‖Aᵢ−Bⱼ‖₂²`.
pub fn hilbert_schmidt_identity(a: &[CMatrix], b: &[CMatrix]) -> Result<IdentityResult<f64>> {
    let dim = check_families(a, b)?;
    let mut imbalance = CMatrix::zeros(dim);
    let mut mass = 0.0;
    for (ai, bi) in a.iter().zip(b) {
        imbalance = &imbalance + &(ai - bi);
        mass += ai.frobenius_norm() + bi.frobenius_norm();
    }
    let off = imbalance.frobenius_norm();
    if off > BALANCE_TOL * mass.max(1.0) {
        return Err(invalid(format!("Σ(Aᵢ − Bᵢ) must vanish, has Frobenius norm {off:e}")));
    }
    let n = a.len();
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            lhs += hs_dist_sq(&a[i], &a[j]) + hs_dist_sq(&b[i], &b[j]);
            rhs += 2.0 * hs_dist_sq(&a[i], &b[j]);
        }
    }
    Ok(IdentityResult::reals(lhs, rhs))
}

fn check_vectors(x: &[CVector], y: &[CVector]) -> Result<usize> {
    let first = x.first().ok_or_else(|| invalid("vector family must be non-empty"))?;
    check_lengths(x.len(), y.len())?;
    for v in x.iter().chain(y) {
        check_lengths(first.dim(), v.dim())?;
    }
    Ok(first.dim())
}

/// `a·x + b·y` for vectors.
fn vlin2(a: f64, x: &CVector, b: f64, y: &CVector) -> CVector {
    &x.scale_real(a) + &y.scale_real(b)
}

fn vector_diff_sum(x: &[CVector], y: &[CVector]) -> CVector {
    let mut acc = &x[0] - &y[0];
    for (xi, yi) in x.iter().zip(y).skip(1) {
        acc = &acc + &(xi - yi);
    }
    acc
}

/// The weighted vector identity together with the same identity obtained by
/// lifting `xᵢ ↦ xᵢ ⊗ e` and evaluating the operator form.
#[derive(Clone, Debug)]
pub struct VectorWeightedResult {
    pub direct: IdentityResult<f64>,
    pub rank_one_route: IdentityResult<f64>,
    /// Largest scalar residual between the two routes' left and right sides.
    pub route_agreement: f64,
}

impl VectorWeightedResult {
    pub fn pass(&self, tau: f64) -> bool {
        self.direct.pass(tau) && self.rank_one_route.pass(tau) && self.route_agreement <= tau
    }
}

/// `Σ_{i<j}‖√(rᵢ/rⱼ)xᵢ−√(rⱼ/rᵢ)xⱼ‖² + Σ_{i<j}‖√(rᵢ/rⱼ)yᵢ−√(rⱼ/rᵢ)yⱼ‖²
///   = Σᵢⱼ‖√(rᵢ/rⱼ)xᵢ−√(rⱼ/rᵢ)yⱼ‖² − ‖Σ(xᵢ−yᵢ)‖²`.
pub fn vector_weighted_identity(
    x: &[CVector],
    y: &[CVector],
    r: &WeightVector,
) -> Result<VectorWeightedResult> {
    let dim = check_vectors(x, y)?;
    let n = x.len();
    check_lengths(n, r.len())?;

    let (mut lhs, mut rhs) = (0.0, 0.0);
    for i in 0..n {
        for j in (i + 1)..n {
            lhs += vlin2(r.ratio(i, j), &x[i], -r.ratio(j, i), &x[j]).norm_sqr();
            lhs += vlin2(r.ratio(i, j), &y[i], -r.ratio(j, i), &y[j]).norm_sqr();
        }
        for j in 0..n {
            rhs += vlin2(r.ratio(i, j), &x[i], -r.ratio(j, i), &y[j]).norm_sqr();
        }
    }
    rhs -= vector_diff_sum(x, y).norm_sqr();
    let direct = IdentityResult::reals(lhs, rhs);

    // |Σ cᵢ xᵢ ⊗ e|² = ‖Σ cᵢ xᵢ‖² (e ⊗ e) for a unit vector e, and e ⊗ e has trace 1.
    let e = CVector::basis(dim, 0);
    let lift = |v: &[CVector]| -> Result<Vec<CMatrix>> { v.iter().map(|v| rank_one(v, &e)).collect() };
    let lifted = generalized_parallelogram(&lift(x)?, &lift(y)?, r)?;
    let rank_one_route = IdentityResult::reals(lifted.lhs.trace().re, lifted.rhs.trace().re);

    let route_agreement = scalar_residual(direct.lhs, rank_one_route.lhs)
        .max(scalar_residual(direct.rhs, rank_one_route.rhs));
    Ok(VectorWeightedResult { direct, rank_one_route, route_agreement })
}

/// `Σᵢⱼ‖xᵢ−xⱼ‖² + Σᵢⱼ‖yᵢ−yⱼ‖² = 2Σᵢⱼ‖xᵢ−yⱼ‖² − 2‖Σ(xᵢ−yᵢ)‖²`.
pub fn vector_identity(x: &[CVector], y: &[CVector]) -> Result<IdentityResult<f64>> {
    check_vectors(x, y)?;
    let n = x.len();
    let (mut lhs, mut cross) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            lhs += (&x[i] - &x[j]).norm_sqr() + (&y[i] - &y[j]).norm_sqr();
            cross += (&x[i] - &y[j]).norm_sqr();
        }
    }
    let rhs = 2.0 * cross - 2.0 * vector_diff_sum(x, y).norm_sqr();
    Ok(IdentityResult::reals(lhs, rhs))
}
