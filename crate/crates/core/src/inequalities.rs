//! Unitarily invariant norm inequalities driven by convexity: Jensen-type
//! and superadditivity bounds for functions of PSD matrices, the weighted
//! parallelogram norm inequality for `f(t) = g(t²)`, and its Schatten-class
//! specialization.
//!
//! Each evaluator returns a signed [`Margin`] `lhs − rhs` together with the
//! sign the convexity hypothesis requires.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::identities::{WeightConstraint, WeightVector};
use crate::linalg::{apply_scalar_fn, is_psd, CMatrix};
use crate::norms::{singular_values, NormSpec};
use crate::tolerance::{margin_scale, DEFAULT_TAU};

/// Shape of a scalar test function on `[0, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarFnKind {
    /// `t ↦ tᵖ`, `p > 0`
    Power { p: f64 },
    /// `t ↦ max(t − c, 0)`
    Hinge { c: f64 },
    /// `t ↦ t`
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convexity {
    Convex,
    Concave,
    /// Affine: convex and concave.
    Both,
}

impl Convexity {
    pub fn is_convex(self) -> bool {
        matches!(self, Convexity::Convex | Convexity::Both)
    }

    pub fn is_concave(self) -> bool {
        matches!(self, Convexity::Concave | Convexity::Both)
    }
}

/// A scalar function with a declared convexity on `[0, ∞)`.
///
/// The declaration is checked against a midpoint probe on construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarFn {
    pub kind: ScalarFnKind,
    pub convexity: Convexity,
}

/// Number of grid points of the midpoint-convexity probe on `[0, PROBE_MAX]`.
pub const PROBE_POINTS: usize = 50;
pub const PROBE_MAX: f64 = 100.0;

impl ScalarFn {
    /// Declares `kind` with the given convexity, rejecting mislabeled functions.
    pub fn new(kind: ScalarFnKind, convexity: Convexity) -> Result<Self> {
        match kind {
            ScalarFnKind::Power { p } if !(p.is_finite() && p > 0.0) => {
                return Err(invalid(format!("power exponent must be positive, got {p}")))
            }
            ScalarFnKind::Hinge { c } if !(c.is_finite() && c >= 0.0) => {
                return Err(invalid(format!("hinge offset must be nonnegative, got {c}")))
            }
            _ => {}
        }
        let f = Self { kind, convexity };
        f.probe()?;
        Ok(f)
    }

    /// `tᵖ` with its analytic convexity.
    pub fn power(p: f64) -> Result<Self> {
        let convexity = if p == 1.0 {
            Convexity::Both
        } else if p > 1.0 {
            Convexity::Convex
        } else {
            Convexity::Concave
        };
        Self::new(ScalarFnKind::Power { p }, convexity)
    }

    pub fn hinge(c: f64) -> Result<Self> {
        Self::new(ScalarFnKind::Hinge { c }, Convexity::Convex)
    }

    pub fn linear() -> Self {
        Self { kind: ScalarFnKind::Linear, convexity: Convexity::Both }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match self.kind {
            ScalarFnKind::Power { p } => {
                if p == 1.0 {
                    t
                } else if p == 2.0 {
                    t * t
                } else {
                    t.powf(p)
                }
            }
            ScalarFnKind::Hinge { c } => (t - c).max(0.0),
            ScalarFnKind::Linear => t,
        }
    }

    pub fn value_at_zero(&self) -> f64 {
        self.eval(0.0)
    }

    /// Midpoint test `g((s+t)/2) ≤ (g(s)+g(t))/2` (or `≥` when concave) on
    /// every pair of a uniform grid.
    fn probe(&self) -> Result<()> {
        let grid: Vec<f64> =
            (0..PROBE_POINTS).map(|i| PROBE_MAX * i as f64 / (PROBE_POINTS - 1) as f64).collect();
        for (i, &s) in grid.iter().enumerate() {
            for &t in &grid[i + 1..] {
                let (gs, gt) = (self.eval(s), self.eval(t));
                let mid = self.eval(0.5 * (s + t));
                let chord = 0.5 * (gs + gt);
                let slack = 1e-12 * (1.0 + gs.abs() + gt.abs());
                if self.convexity.is_convex() && mid > chord + slack {
                    return Err(invalid(format!("{self} is not convex: midpoint test fails on [{s}, {t}]")));
                }
                if self.convexity.is_concave() && mid < chord - slack {
                    return Err(invalid(format!("{self} is not concave: midpoint test fails on [{s}, {t}]")));
                }
            }
        }
        Ok(())
    }

    /// `g(H)` by spectral mapping of a PSD matrix.
    pub fn apply(&self, h: &CMatrix) -> Result<CMatrix> {
        apply_scalar_fn(h, |t| self.eval(t))
    }

    /// `f(|X|) = g(|X|²) = g(X*X)`.
    pub fn apply_to_abs_square(&self, x: &CMatrix) -> Result<CMatrix> {
        self.apply(&x.gram())
    }

    fn required_sign(&self) -> RequiredSign {
        match self.convexity {
            Convexity::Convex => RequiredSign::Nonnegative,
            Convexity::Concave => RequiredSign::Nonpositive,
            Convexity::Both => RequiredSign::Zero,
        }
    }

    fn require_vanishing_at_zero(&self) -> Result<()> {
        if self.value_at_zero() == 0.0 {
            Ok(())
        } else {
            Err(invalid(format!("{self} must vanish at 0")))
        }
    }
}

impl fmt::Display for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ScalarFnKind::Power { p } => write!(f, "t^{p}"),
            ScalarFnKind::Hinge { c } => write!(f, "hinge({c})"),
            ScalarFnKind::Linear => f.write_str("t"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RequiredSign {
    Nonnegative,
    Nonpositive,
    Zero,
}

/// Signed difference `lhs − rhs` of an inequality and the sign it must have.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub lhs: f64,
    pub rhs: f64,
    pub value: f64,
    pub required_sign: RequiredSign,
}

impl Margin {
    pub fn new(lhs: f64, rhs: f64, required_sign: RequiredSign) -> Self {
        Self { lhs, rhs, value: lhs - rhs, required_sign }
    }

    /// `1 + |lhs| + |rhs|`.
    pub fn scale(&self) -> f64 {
        margin_scale(self.lhs, self.rhs)
    }

    /// Margin in the required direction, divided by the scale. Nonnegative
    /// exactly when the requirement holds with zero tolerance.
    pub fn normalized(&self) -> f64 {
        let v = self.value / self.scale();
        // `+ 0.0` turns a negated zero margin into +0
        let directed = match self.required_sign {
            RequiredSign::Nonnegative => v,
            RequiredSign::Nonpositive => -v,
            RequiredSign::Zero => -v.abs(),
        };
        directed + 0.0
    }

    pub fn pass(&self, tau: f64) -> bool {
        self.normalized() >= -tau
    }
}

/// Norms of one matrix for several specs from a single singular value pass.
fn norms_of(a: &CMatrix, specs: &[NormSpec]) -> Result<Vec<f64>> {
    let sv = singular_values(a)?;
    specs.iter().map(|s| s.eval_singular_values(&sv)).collect()
}

fn margins(lhs: &CMatrix, rhs: &CMatrix, specs: &[NormSpec], sign: RequiredSign) -> Result<Vec<Margin>> {
    for spec in specs {
        spec.validate(lhs.dim())?;
    }
    let l = norms_of(lhs, specs)?;
    let r = norms_of(rhs, specs)?;
    Ok(l.into_iter().zip(r).map(|(l, r)| Margin::new(l, r, sign)).collect())
}

fn check_psd_family(a: &[CMatrix]) -> Result<()> {
    let first = a.first().ok_or_else(|| invalid("matrix family must be non-empty"))?;
    for (i, m) in a.iter().enumerate() {
        if m.dim() != first.dim() {
            return Err(invalid(format!("matrix {i} has dim {}, expected {}", m.dim(), first.dim())));
        }
        if !is_psd(m, DEFAULT_TAU)?.psd {
            return Err(invalid(format!("matrix {i} is not PSD")));
        }
    }
    Ok(())
}

/// `|||Σ αⱼ g(Aⱼ)||| − |||g(Σ αⱼ Aⱼ)|||` for every spec, nonnegative for convex `g`.
pub fn convex_combination_margins(
    a: &[CMatrix],
    alphas: &[f64],
    g: &ScalarFn,
    specs: &[NormSpec],
) -> Result<Vec<Margin>> {
    check_psd_family(a)?;
    if alphas.len() != a.len() {
        return Err(invalid(format!("{} weights for {} matrices", alphas.len(), a.len())));
    }
    if alphas.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(invalid("convex weights must be nonnegative"));
    }
    let total: f64 = alphas.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(invalid(format!("convex weights sum to {total}, not 1")));
    }
    let dim = a[0].dim();
    let (mut mapped, mut mixed) = (CMatrix::zeros(dim), CMatrix::zeros(dim));
    for (m, &w) in a.iter().zip(alphas) {
        mapped = &mapped + &g.apply(m)?.scale_real(w);
        mixed = &mixed + &m.scale_real(w);
    }
    margins(&mapped, &g.apply(&mixed)?, specs, g.required_sign())
}

pub fn convex_combination_ineq(
    a: &[CMatrix],
    alphas: &[f64],
    g: &ScalarFn,
    spec: NormSpec,
) -> Result<Margin> {
    Ok(convex_combination_margins(a, alphas, g, &[spec])?[0])
}

/// `|||g(Σ Aⱼ)||| − |||Σ g(Aⱼ)|||` for every spec; nonnegative for convex `g`
/// with `g(0) = 0`, nonpositive for concave `g`.
pub fn superadditivity_margins(a: &[CMatrix], g: &ScalarFn, specs: &[NormSpec]) -> Result<Vec<Margin>> {
    check_psd_family(a)?;
    g.require_vanishing_at_zero()?;
    let dim = a[0].dim();
    let (mut total, mut mapped) = (CMatrix::zeros(dim), CMatrix::zeros(dim));
    for m in a {
        total = &total + m;
        mapped = &mapped + &g.apply(m)?;
    }
    margins(&g.apply(&total)?, &mapped, specs, g.required_sign())
}

pub fn superadditivity_ineq(a: &[CMatrix], g: &ScalarFn, spec: NormSpec) -> Result<Margin> {
    Ok(superadditivity_margins(a, g, &[spec])?[0])
}

fn check_normalized_family(a: &[CMatrix], r: &WeightVector) -> Result<()> {
    let first = a.first().ok_or_else(|| invalid("matrix family must be non-empty"))?;
    if a.iter().any(|m| m.dim() != first.dim()) {
        return Err(invalid("matrices must share a dimension"));
    }
    if a.len() != r.len() {
        return Err(invalid(format!("{} weights for {} matrices", r.len(), a.len())));
    }
    if r.constraint() != WeightConstraint::SumReciprocalOne {
        return Err(invalid("weights must satisfy Σ 1/rᵢ = 1"));
    }
    Ok(())
}

/// `√(rᵢ/rⱼ)Aᵢ − √(rⱼ/rᵢ)Aⱼ` for every `i < j`.
fn weighted_differences(a: &[CMatrix], r: &[f64]) -> Vec<CMatrix> {
    let n = a.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(&a[i].scale_real((r[i] / r[j]).sqrt()) - &a[j].scale_real((r[j] / r[i]).sqrt()));
        }
    }
    out
}

/// The two norm arguments of the weighted parallelogram norm inequality:
/// `Σ (1/rᵢ) f(|rᵢAᵢ|)` and `Σ_{i<j} f(|√(rᵢ/rⱼ)Aᵢ − √(rⱼ/rᵢ)Aⱼ|) + f(|Σ Aᵢ|)`
/// with `f(t) = g(t²)`.
fn theorem_arguments(a: &[CMatrix], r: &WeightVector, g: &ScalarFn) -> Result<(CMatrix, CMatrix)> {
    let dim = a[0].dim();
    let rv = r.values();
    let mut lhs = CMatrix::zeros(dim);
    for (m, &ri) in a.iter().zip(rv) {
        lhs = &lhs + &g.apply_to_abs_square(&m.scale_real(ri))?.scale_real(1.0 / ri);
    }
    let mut rhs = g.apply_to_abs_square(&CMatrix::sum(a).expect("non-empty family"))?;
    for d in weighted_differences(a, rv) {
        rhs = &rhs + &g.apply_to_abs_square(&d)?;
    }
    Ok((lhs, rhs))
}

/// For `Σ 1/rᵢ = 1`, `g ≥ 0` with `g(0) = 0` and `f(t) = g(t²)`:
/// `|||Σ (1/rᵢ) f(|rᵢAᵢ|)||| ≥ |||Σ_{i<j} f(|√(rᵢ/rⱼ)Aᵢ − √(rⱼ/rᵢ)Aⱼ|) + f(|Σ Aᵢ|)|||`
/// for convex `g`, reversed for concave `g`.
pub fn theorem_main_margins(
    a: &[CMatrix],
    r: &WeightVector,
    g: &ScalarFn,
    specs: &[NormSpec],
) -> Result<Vec<Margin>> {
    check_normalized_family(a, r)?;
    g.require_vanishing_at_zero()?;
    let (lhs, rhs) = theorem_arguments(a, r, g)?;
    margins(&lhs, &rhs, specs, g.required_sign())
}

pub fn theorem_main_margin(a: &[CMatrix], r: &WeightVector, g: &ScalarFn, spec: NormSpec) -> Result<Margin> {
    Ok(theorem_main_margins(a, r, g, &[spec])?[0])
}

/// The weighted parallelogram norm inequality decomposed along its proof:
/// a convex-combination step on `Xᵢ = |rᵢAᵢ|²` with weights `1/rᵢ`, the
/// operator identity rewriting `Σ rᵢ|Aᵢ|²`, and a superadditivity step on the
/// pairwise terms.
#[derive(Clone, Copy, Debug)]
pub struct StepwiseMargins {
    pub convex_step: Margin,
    /// Scale-free gap between the two norms the identity says are equal.
    pub identity_gap: f64,
    pub superadditive_step: Margin,
    /// `convex_step.value + (convex rhs − superadditive lhs) + superadditive_step.value`.
    pub composed: f64,
}

pub fn theorem_main_stepwise(
    a: &[CMatrix],
    r: &WeightVector,
    g: &ScalarFn,
    spec: NormSpec,
) -> Result<StepwiseMargins> {
    check_normalized_family(a, r)?;
    g.require_vanishing_at_zero()?;
    let rv = r.values();
    let squares: Vec<CMatrix> = a.iter().zip(rv).map(|(m, &ri)| m.scale_real(ri).gram()).collect();
    let inv: Vec<f64> = rv.iter().map(|ri| 1.0 / ri).collect();
    let inv_sum: f64 = inv.iter().sum();
    // renormalize away the last rounding step of Σ 1/rᵢ
    let inv: Vec<f64> = inv.iter().map(|w| w / inv_sum).collect();
    let convex_step = convex_combination_ineq(&squares, &inv, g, spec)?;

    let mut pieces: Vec<CMatrix> = weighted_differences(a, rv).iter().map(CMatrix::gram).collect();
    pieces.push(CMatrix::sum(a).expect("non-empty family").gram());
    let superadditive_step = superadditivity_ineq(&pieces, g, spec)?;

    let identity_gap = (convex_step.rhs - superadditive_step.lhs).abs()
        / margin_scale(convex_step.rhs, superadditive_step.lhs);
    let composed = convex_step.value
        + (convex_step.rhs - superadditive_step.lhs)
        + superadditive_step.value;
    Ok(StepwiseMargins { convex_step, identity_gap, superadditive_step, composed })
}

/// `Σ σᵢᵖ`, i.e. `‖A‖ₚᵖ` without the outer root.
fn schatten_power(a: &CMatrix, p: f64) -> Result<f64> {
    Ok(singular_values(a)?.iter().map(|s| if p == 2.0 { s * s } else { s.powf(p) }).sum())
}

/// `Σ rᵢ^{p−1}‖Aᵢ‖ₚᵖ − (Σ_{i<j}‖√(rᵢ/rⱼ)Aᵢ − √(rⱼ/rᵢ)Aⱼ‖ₚᵖ + ‖Σ Aᵢ‖ₚᵖ)`:
/// nonnegative for `p ≥ 2`, nonpositive for `0 < p ≤ 2`, zero at `p = 2`.
pub fn schatten_weighted_ineq(a: &[CMatrix], r: &WeightVector, p: f64) -> Result<Margin> {
    check_normalized_family(a, r)?;
    if !(p.is_finite() && p > 0.0) {
        return Err(invalid(format!("Schatten exponent must be positive, got {p}")));
    }
    let rv = r.values();
    let mut lhs = 0.0;
    for (m, &ri) in a.iter().zip(rv) {
        lhs += ri.powf(p - 1.0) * schatten_power(m, p)?;
    }
    let mut rhs = schatten_power(&CMatrix::sum(a).expect("non-empty family"), p)?;
    for d in weighted_differences(a, rv) {
        rhs += schatten_power(&d, p)?;
    }
    let sign = if p == 2.0 {
        RequiredSign::Zero
    } else if p > 2.0 {
        RequiredSign::Nonnegative
    } else {
        RequiredSign::Nonpositive
    };
    Ok(Margin::new(lhs, rhs, sign))
}
