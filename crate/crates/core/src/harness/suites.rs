//! Suite catalog: how each suite draws an instance and how it judges it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::gen::{gen_alpha, gen_matrix, gen_measure_weights, gen_vector, gen_weights, AlphaMode, MatrixKind};
use super::rng::Stream;
use crate::error::{invalid, Error, Result};
use crate::identities::{
    bohr_gap, field_bohr_gap, field_parallelogram, generalized_parallelogram, hilbert_schmidt_identity,
    lemma_parallelogram, lemma_polarization, two_term_identity, vector_identity, vector_weighted_identity,
    sum_of_squares_identity, AlphaField, OperatorField, QuadratureMeasure, WeightConstraint, WeightVector,
};
use crate::inequalities::{
    convex_combination_margins, schatten_weighted_ineq, superadditivity_margins, theorem_main_margins,
    Margin, ScalarFn,
};
use crate::linalg::{CMatrix, CVector, PsdCheck};
use crate::norms::NormSpec;
use crate::tolerance::matrix_residual;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    LemmaA,
    LemmaB,
    Thm22,
    CorOit,
    CorZf,
    RemarkN2,
    Bohr,
    BohrField,
    Eq4,
    Cor26,
    Eq00,
    Ineq41,
    Ineq42,
    Thm31Convex,
    Thm31Concave,
    Cor33,
}

/// How a suite's per-trial metric is judged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// worst scale-free residual; passes when `≤ τ`
    MaxResidual,
    /// worst normalized margin in the required direction; passes when `≥ −τ`
    MinMargin,
}

impl Suite {
    pub const ALL: [Suite; 16] = [
        Suite::LemmaA,
        Suite::LemmaB,
        Suite::Thm22,
        Suite::CorOit,
        Suite::CorZf,
        Suite::RemarkN2,
        Suite::Bohr,
        Suite::BohrField,
        Suite::Eq4,
        Suite::Cor26,
        Suite::Eq00,
        Suite::Ineq41,
        Suite::Ineq42,
        Suite::Thm31Convex,
        Suite::Thm31Concave,
        Suite::Cor33,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::LemmaA => "lemma-a",
            Suite::LemmaB => "lemma-b",
            Suite::Thm22 => "thm22",
            Suite::CorOit => "cor-oit",
            Suite::CorZf => "cor-zf",
            Suite::RemarkN2 => "remark-n2",
            Suite::Bohr => "bohr",
            Suite::BohrField => "bohr-field",
            Suite::Eq4 => "eq4",
            Suite::Cor26 => "cor26",
            Suite::Eq00 => "eq00",
            Suite::Ineq41 => "ineq-41",
            Suite::Ineq42 => "ineq-42",
            Suite::Thm31Convex => "thm31-convex",
            Suite::Thm31Concave => "thm31-concave",
            Suite::Cor33 => "cor33",
        }
    }

    /// What the suite checks, in one line.
    pub fn anchor(self) -> &'static str {
        match self {
            Suite::LemmaA => "operator parallelogram law |A+B|²+|A−B|² = 2|A|²+2|B|²",
            Suite::LemmaB => "operator polarization |A+B|²−|A−B|² = 4Re(A*B)",
            Suite::Thm22 => "parallelogram law for α-weighted operator fields over a finite measure",
            Suite::CorOit => "generalized parallelogram law with √(rᵢ/rⱼ) weights",
            Suite::CorZf => "Σ_{i<j}|√(rᵢ/rⱼ)Aᵢ−√(rⱼ/rᵢ)Aⱼ|² = Σrᵢ|Aᵢ|² − |ΣAᵢ|² when Σ1/rᵢ = 1",
            Suite::RemarkN2 => "two-term form |A₁+A₂|² + (1/t)|tA₁−A₂|² = (1+t)|A₁|² + (1+1/t)|A₂|²",
            Suite::Bohr => "operator Bohr inequality |ΣAᵢ|² ≤ Σrᵢ|Aᵢ|²",
            Suite::BohrField => "field Bohr inequality |∫(Aₜ−Bₜ)dμ|² ≤ ∫∫|α(t,s)Aₜ−α(s,t)Bₛ|²",
            Suite::Eq4 => "Hilbert–Schmidt identity for families with Σ(Aᵢ−Bᵢ) = 0",
            Suite::Cor26 => "weighted vector identity, direct and through rank-one lifting",
            Suite::Eq00 => "inner-product-space identity for two vector families",
            Suite::Ineq41 => "|||Σαⱼg(Aⱼ)||| ≥ |||g(ΣαⱼAⱼ)||| for convex g",
            Suite::Ineq42 => "|||g(ΣAⱼ)||| ≥ |||Σg(Aⱼ)||| for convex g with g(0)=0",
            Suite::Thm31Convex => "weighted parallelogram norm inequality, convex g",
            Suite::Thm31Concave => "reversed weighted parallelogram norm inequality, concave g",
            Suite::Cor33 => "Schatten p-norm weighted parallelogram inequality",
        }
    }

    pub fn metric(self) -> Metric {
        match self {
            Suite::Ineq41 | Suite::Ineq42 | Suite::Thm31Convex | Suite::Thm31Concave | Suite::Cor33 => {
                Metric::MinMargin
            }
            _ => Metric::MaxResidual,
        }
    }

    /// Test functions `g` the inequality suites sweep.
    pub fn scalar_fns(self) -> Vec<ScalarFn> {
        let fns = match self {
            Suite::Ineq41 | Suite::Ineq42 => {
                vec![ScalarFn::power(2.0), ScalarFn::power(3.0), ScalarFn::hinge(0.5)]
            }
            Suite::Thm31Convex => vec![ScalarFn::power(1.5), ScalarFn::power(2.0), ScalarFn::power(3.0)],
            Suite::Thm31Concave => vec![ScalarFn::power(0.3), ScalarFn::power(0.5), ScalarFn::power(0.9)],
            _ => vec![],
        };
        fns.into_iter().map(|f| f.expect("catalog functions are well formed")).collect()
    }

    pub fn known_ids() -> String {
        Suite::ALL.iter().map(|s| s.id()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|suite| suite.id() == s)
            .ok_or_else(|| Error::UnknownSuite { id: s.to_string(), known: Suite::known_ids() })
    }
}

impl Serialize for Suite {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for Suite {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let id = String::deserialize(d)?;
        id.parse().map_err(serde::de::Error::custom)
    }
}

/// A fully materialized random instance, replayable from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Pair { a: CMatrix, b: CMatrix },
    Field { a: Vec<CMatrix>, b: Vec<CMatrix>, measure: QuadratureMeasure, alpha: AlphaField },
    Families { a: Vec<CMatrix>, b: Vec<CMatrix>, r: Vec<f64> },
    Weighted { a: Vec<CMatrix>, r: Vec<f64> },
    TwoTerm { a1: CMatrix, a2: CMatrix, t: f64 },
    HilbertSchmidt { a: Vec<CMatrix>, b: Vec<CMatrix> },
    Vectors { x: Vec<CVector>, y: Vec<CVector>, r: Option<Vec<f64>> },
    PsdFamily { a: Vec<CMatrix>, alphas: Option<Vec<f64>> },
    SchattenWeighted { a: Vec<CMatrix>, r: Vec<f64>, p: Vec<f64> },
}

/// Deterministic draw context for one trial.
pub struct TrialRng<'a> {
    pub seed: u64,
    pub suite: &'a str,
    pub dim: usize,
    pub count: usize,
    pub trial: u64,
}

impl TrialRng<'_> {
    pub fn stream(&self, role: &str) -> Stream {
        Stream::for_role(self.seed, self.suite, self.dim, self.count, self.trial, role)
    }

    fn matrices(&self, prefix: &str, kind: MatrixKind, n: usize) -> Result<Vec<CMatrix>> {
        (0..n).map(|i| gen_matrix(kind, self.dim, &mut self.stream(&format!("{prefix}{i}")))).collect()
    }

    fn vectors(&self, prefix: &str, n: usize) -> Vec<CVector> {
        (0..n).map(|i| gen_vector(self.dim, &mut self.stream(&format!("{prefix}{i}")))).collect()
    }

    fn weights(&self, constraint: WeightConstraint) -> Result<Vec<f64>> {
        Ok(gen_weights(self.count, constraint, &mut self.stream("r"))?.values().to_vec())
    }
}

/// Draws the instance for `suite` at one grid point. `p_grid` is only used by
/// the Schatten suite.
pub fn generate(suite: Suite, ctx: &TrialRng<'_>, p_grid: &[f64]) -> Result<Instance> {
    use MatrixKind::{Ginibre, Psd};
    let n = ctx.count;
    Ok(match suite {
        Suite::LemmaA | Suite::LemmaB => Instance::Pair {
            a: gen_matrix(Ginibre, ctx.dim, &mut ctx.stream("A"))?,
            b: gen_matrix(Ginibre, ctx.dim, &mut ctx.stream("B"))?,
        },
        Suite::Thm22 | Suite::BohrField => {
            let mode = if ctx.trial.is_multiple_of(2) { AlphaMode::Free } else { AlphaMode::PhaseWeight };
            Instance::Field {
                a: ctx.matrices("A", Ginibre, n)?,
                b: ctx.matrices("B", Ginibre, n)?,
                measure: QuadratureMeasure::new(gen_measure_weights(n, &mut ctx.stream("mu")))?,
                alpha: gen_alpha(n, mode, &mut ctx.stream("alpha"))?,
            }
        }
        Suite::CorOit => Instance::Families {
            a: ctx.matrices("A", Ginibre, n)?,
            b: ctx.matrices("B", Ginibre, n)?,
            r: ctx.weights(WeightConstraint::None)?,
        },
        Suite::CorZf | Suite::Bohr | Suite::Thm31Convex | Suite::Thm31Concave => Instance::Weighted {
            a: ctx.matrices("A", Ginibre, n)?,
            r: ctx.weights(WeightConstraint::SumReciprocalOne)?,
        },
        Suite::RemarkN2 => {
            let ln10 = std::f64::consts::LN_10;
            Instance::TwoTerm {
                a1: gen_matrix(Ginibre, ctx.dim, &mut ctx.stream("A1"))?,
                a2: gen_matrix(Ginibre, ctx.dim, &mut ctx.stream("A2"))?,
                t: ctx.stream("t").uniform_in(-ln10, ln10).exp(),
            }
        }
        Suite::Eq4 => {
            let a = ctx.matrices("A", Ginibre, n)?;
            let mut b = ctx.matrices("B", Ginibre, n)?;
            let mut imbalance = CMatrix::zeros(ctx.dim);
            for (ai, bi) in a.iter().zip(&b) {
                imbalance = &imbalance + &(ai - bi);
            }
            let last = b.last_mut().expect("count ≥ 1");
            *last = &*last + &imbalance;
            Instance::HilbertSchmidt { a, b }
        }
        Suite::Cor26 => Instance::Vectors {
            x: ctx.vectors("x", n),
            y: ctx.vectors("y", n),
            r: Some(ctx.weights(WeightConstraint::None)?),
        },
        Suite::Eq00 => Instance::Vectors { x: ctx.vectors("x", n), y: ctx.vectors("y", n), r: None },
        Suite::Ineq41 => {
            let mut s = ctx.stream("alphas");
            let u: Vec<f64> = (0..n).map(|_| s.uniform_in(0.1, 1.0)).collect();
            let total: f64 = u.iter().sum();
            Instance::PsdFamily {
                a: ctx.matrices("A", Psd, n)?,
                alphas: Some(u.iter().map(|x| x / total).collect()),
            }
        }
        Suite::Ineq42 => Instance::PsdFamily { a: ctx.matrices("A", Psd, n)?, alphas: None },
        Suite::Cor33 => Instance::SchattenWeighted {
            a: ctx.matrices("A", Ginibre, n)?,
            r: ctx.weights(WeightConstraint::SumReciprocalOne)?,
            p: p_grid.to_vec(),
        },
    })
}

/// Result of judging one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    /// Residual or normalized margin; `None` when evaluation itself failed.
    pub metric: Option<f64>,
    pub pass: bool,
    pub detail: Option<String>,
}

impl TrialOutcome {
    fn residual(value: f64, tau: f64, what: impl FnOnce() -> String) -> Self {
        let pass = value <= tau;
        Self { metric: Some(value), pass, detail: (!pass).then(what) }
    }

    fn margin(value: f64, tau: f64, what: impl FnOnce() -> String) -> Self {
        let pass = value >= -tau;
        Self { metric: Some(value), pass, detail: (!pass).then(what) }
    }

    pub fn errored(err: &Error) -> Self {
        Self { metric: None, pass: false, detail: Some(format!("evaluation error: {err}")) }
    }
}

/// `max(0, −λ_min / max(1, ‖H‖₂))`; the Loewner check passes when this is `≤ τ`.
pub fn psd_violation(check: &PsdCheck) -> f64 {
    (-check.min_eigenvalue / check.spectral_norm.max(1.0)).max(0.0)
}

fn mismatch(suite: Suite) -> Error {
    invalid(format!("instance kind does not match suite `{suite}`"))
}

/// Worst normalized margin over a set of labelled margins.
fn worst_margin<'a>(items: impl IntoIterator<Item = (String, &'a Margin)>, tau: f64) -> TrialOutcome {
    let mut worst: Option<(f64, String, &Margin)> = None;
    for (label, m) in items {
        let v = m.normalized();
        if worst.as_ref().is_none_or(|(w, _, _)| v < *w) {
            worst = Some((v, label, m));
        }
    }
    let (v, label, m) = worst.expect("at least one margin");
    TrialOutcome::margin(v, tau, || {
        format!("{label}: lhs {:e}, rhs {:e}, margin {:e} ({:?})", m.lhs, m.rhs, m.value, m.required_sign)
    })
}

/// Evaluates the suite's check on `instance` with tolerance `tau`.
pub fn evaluate(suite: Suite, instance: &Instance, tau: f64) -> Result<TrialOutcome> {
    match (suite, instance) {
        (Suite::LemmaA, Instance::Pair { a, b }) => {
            let res = lemma_parallelogram(a, b)?;
            Ok(TrialOutcome::residual(res.residual, tau, || format!("residual {:e}", res.residual)))
        }
        (Suite::LemmaB, Instance::Pair { a, b }) => {
            let res = lemma_polarization(a, b)?;
            Ok(TrialOutcome::residual(res.residual, tau, || format!("residual {:e}", res.residual)))
        }
        (Suite::Thm22, Instance::Field { a, b, measure, alpha }) => {
            let res = field_parallelogram(&OperatorField::new(a.clone())?, &OperatorField::new(b.clone())?, measure, alpha)?;
            Ok(TrialOutcome::residual(res.residual, tau, || format!("residual {:e}", res.residual)))
        }
        (Suite::BohrField, Instance::Field { a, b, measure, alpha }) => {
            let (fa, fb) = (OperatorField::new(a.clone())?, OperatorField::new(b.clone())?);
            let gap = field_bohr_gap(&fa, &fb, measure, alpha, tau)?;
            let par = field_parallelogram(&fa, &fb, measure, alpha)?;
            let consistency = matrix_residual(&gap.gap.scale_real(2.0), &par.lhs);
            let violation = psd_violation(&gap.psd);
            Ok(TrialOutcome::residual(consistency.max(violation), tau, || {
                format!("λ_min {:e}, ‖gap‖₂ {:e}, 2·gap vs field lhs residual {consistency:e}", gap.psd.min_eigenvalue, gap.psd.spectral_norm)
            }))
        }
        (Suite::CorOit, Instance::Families { a, b, r }) => {
            let res = generalized_parallelogram(a, b, &WeightVector::free(r.clone())?)?;
            Ok(TrialOutcome::residual(res.residual, tau, || format!("residual {:e}", res.residual)))
        }
        (Suite::CorZf, Instance::Weighted { a, r }) => {
            let res = sum_of_squares_identity(a, &WeightVector::normalized(r.clone())?)?;
            let psd = crate::linalg::is_psd(&res.lhs, tau)?;
            let violation = psd_violation(&psd);
            Ok(TrialOutcome::residual(res.residual.max(violation), tau, || {
                format!("residual {:e}, lhs λ_min {:e}", res.residual, psd.min_eigenvalue)
            }))
        }
        (Suite::Bohr, Instance::Weighted { a, r }) => {
            let r = WeightVector::normalized(r.clone())?;
            let gap = bohr_gap(a, &r, tau)?;
            let sos = sum_of_squares_identity(a, &r)?;
            let consistency = matrix_residual(&gap.gap, &sos.lhs);
            let violation = psd_violation(&gap.psd);
            Ok(TrialOutcome::residual(consistency.max(violation), tau, || {
                format!("λ_min {:e}, ‖gap‖₂ {:e}, gap vs pairwise-sum residual {consistency:e}", gap.psd.min_eigenvalue, gap.psd.spectral_norm)
            }))
        }
        (Suite::RemarkN2, Instance::TwoTerm { a1, a2, t }) => {
            let res = two_term_identity(a1, a2, *t)?;
            Ok(TrialOutcome::residual(res.residual, tau, || format!("residual {:e}", res.residual)))
        }
        (Suite::Eq4, Instance::HilbertSchmidt { a, b }) => {
            let res = hilbert_schmidt_identity(a, b)?;
            Ok(TrialOutcome::residual(res.residual, tau, || format!("lhs {:e}, rhs {:e}", res.lhs, res.rhs)))
        }
        (Suite::Cor26, Instance::Vectors { x, y, r: Some(r) }) => {
            let res = vector_weighted_identity(x, y, &WeightVector::free(r.clone())?)?;
            let worst = res.direct.residual.max(res.rank_one_route.residual).max(res.route_agreement);
            Ok(TrialOutcome::residual(worst, tau, || {
                format!(
                    "direct residual {:e}, rank-one residual {:e}, route agreement {:e}",
                    res.direct.residual, res.rank_one_route.residual, res.route_agreement
                )
            }))
        }
        (Suite::Eq00, Instance::Vectors { x, y, r: None }) => {
            let res = vector_identity(x, y)?;
            Ok(TrialOutcome::residual(res.residual, tau, || format!("lhs {:e}, rhs {:e}", res.lhs, res.rhs)))
        }
        (Suite::Ineq41, Instance::PsdFamily { a, alphas: Some(alphas) }) => {
            let specs = NormSpec::test_family(a[0].dim());
            let mut all = Vec::new();
            for g in suite.scalar_fns() {
                let ms = convex_combination_margins(a, alphas, &g, &specs)?;
                all.extend(specs.iter().zip(ms).map(|(s, m)| (format!("g={g} norm={s}"), m)));
            }
            Ok(worst_margin(all.iter().map(|(l, m)| (l.clone(), m)), tau))
        }
        (Suite::Ineq42, Instance::PsdFamily { a, alphas: None }) => {
            let specs = NormSpec::test_family(a[0].dim());
            let mut all = Vec::new();
            for g in suite.scalar_fns() {
                let ms = superadditivity_margins(a, &g, &specs)?;
                all.extend(specs.iter().zip(ms).map(|(s, m)| (format!("g={g} norm={s}"), m)));
            }
            Ok(worst_margin(all.iter().map(|(l, m)| (l.clone(), m)), tau))
        }
        (Suite::Thm31Convex | Suite::Thm31Concave, Instance::Weighted { a, r }) => {
            let r = WeightVector::normalized(r.clone())?;
            let specs = NormSpec::test_family(a[0].dim());
            let mut all = Vec::new();
            for g in suite.scalar_fns() {
                let ms = theorem_main_margins(a, &r, &g, &specs)?;
                all.extend(specs.iter().zip(ms).map(|(s, m)| (format!("g={g} norm={s}"), m)));
            }
            Ok(worst_margin(all.iter().map(|(l, m)| (l.clone(), m)), tau))
        }
        (Suite::Cor33, Instance::SchattenWeighted { a, r, p }) => {
            if p.is_empty() {
                return Err(invalid("Schatten suite needs at least one exponent"));
            }
            let r = WeightVector::normalized(r.clone())?;
            let ms = p
                .iter()
                .map(|&p| Ok((format!("p={p}"), schatten_weighted_ineq(a, &r, p)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(worst_margin(ms.iter().map(|(l, m)| (l.clone(), m)), tau))
        }
        (suite, _) => Err(mismatch(suite)),
    }
}
