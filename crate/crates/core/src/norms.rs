//! Unitarily invariant norms: Schatten p-norms (quasi-norms for `p < 1`),
//! Ky Fan k-norms, the operator norm and the trace norm.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{abs_op, apply_scalar_fn, hermitian_eig, CMatrix};

/// Selector for a unitarily invariant norm.
///
/// Serialized as `"schatten:p"`, `"kyfan:k"`, `"operator"` or `"trace"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum NormSpec {
    Schatten(f64),
    KyFan(usize),
    Operator,
    Trace,
}

impl NormSpec {
    /// True for Schatten `p < 1`, which fails the triangle inequality.
    pub fn is_quasi_norm(&self) -> bool {
        matches!(self, NormSpec::Schatten(p) if *p < 1.0)
    }

    /// Checks the parameter against the matrix dimension.
    pub fn validate(&self, dim: usize) -> Result<()> {
        match *self {
            NormSpec::Schatten(p) if !(p.is_finite() && p > 0.0) => {
                Err(invalid(format!("Schatten exponent must be positive and finite, got {p}")))
            }
            NormSpec::KyFan(k) if k == 0 || k > dim => {
                Err(invalid(format!("Ky Fan index must lie in 1..={dim}, got {k}")))
            }
            _ => Ok(()),
        }
    }

    /// The norms every unitarily invariant inequality is checked against:
    /// Schatten `p ∈ {1, 1.5, 2, 3}`, operator, trace, and Ky Fan `k = 1..=dim`.
    pub fn test_family(dim: usize) -> Vec<NormSpec> {
        let mut family = vec![
            NormSpec::Schatten(1.0),
            NormSpec::Schatten(1.5),
            NormSpec::Schatten(2.0),
            NormSpec::Schatten(3.0),
            NormSpec::Operator,
            NormSpec::Trace,
        ];
        family.extend((1..=dim).map(NormSpec::KyFan));
        family
    }

    /// Evaluates the norm from singular values sorted descending.
    pub fn eval_singular_values(&self, sv: &[f64]) -> Result<f64> {
        self.validate(sv.len())?;
        Ok(match *self {
            NormSpec::Schatten(p) => {
                if p == 1.0 {
                    sv.iter().sum()
                } else if p == 2.0 {
                    sv.iter().map(|s| s * s).sum::<f64>().sqrt()
                } else {
                    sv.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p)
                }
            }
            NormSpec::KyFan(k) => sv[..k].iter().sum(),
            NormSpec::Operator => sv[0],
            NormSpec::Trace => sv.iter().sum(),
        })
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::Schatten(p) => write!(f, "schatten:{p}"),
            NormSpec::KyFan(k) => write!(f, "kyfan:{k}"),
            NormSpec::Operator => f.write_str("operator"),
            NormSpec::Trace => f.write_str("trace"),
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "operator" => return Ok(NormSpec::Operator),
            "trace" => return Ok(NormSpec::Trace),
            _ => {}
        }
        let spec = match s.split_once(':') {
            Some(("schatten", p)) => NormSpec::Schatten(
                p.parse().map_err(|_| invalid(format!("bad Schatten exponent `{p}`")))?,
            ),
            Some(("kyfan", k)) => {
                NormSpec::KyFan(k.parse().map_err(|_| invalid(format!("bad Ky Fan index `{k}`")))?)
            }
            _ => return Err(invalid(format!("unknown norm spec `{s}`"))),
        };
        match spec {
            NormSpec::Schatten(p) if !(p.is_finite() && p > 0.0) => {
                Err(invalid(format!("Schatten exponent must be positive, got {p}")))
            }
            NormSpec::KyFan(0) => Err(invalid("Ky Fan index must be at least 1")),
            spec => Ok(spec),
        }
    }
}

impl TryFrom<String> for NormSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<NormSpec> for String {
    fn from(spec: NormSpec) -> String {
        spec.to_string()
    }
}

/// Singular values of `A`, descending: square roots of the (clamped)
/// eigenvalues of `A*A`.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    let eig = hermitian_eig(&a.gram())?;
    Ok(eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect())
}

/// `|||A|||` for the selected norm.
pub fn norm(a: &CMatrix, spec: NormSpec) -> Result<f64> {
    spec.validate(a.dim())?;
    spec.eval_singular_values(&singular_values(a)?)
}

/// Both sides of `‖ |A|ᵖ ‖₁ = ‖A‖ₚᵖ`, computed along independent paths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceIdentity {
    /// Trace norm of the spectral power `|A|ᵖ`.
    pub lhs: f64,
    /// `p`-th power of the Schatten norm.
    pub rhs: f64,
    /// `|lhs − rhs| / (1 + rhs)`.
    pub residual: f64,
}

pub fn trace_identity_check(a: &CMatrix, p: f64) -> Result<TraceIdentity> {
    if !(p.is_finite() && p > 0.0) {
        return Err(invalid(format!("exponent must be positive, got {p}")));
    }
    let power = apply_scalar_fn(&abs_op(a)?, |t| t.powf(p))?;
    let lhs = norm(&power, NormSpec::Trace)?;
    let rhs = norm(a, NormSpec::Schatten(p))?.powf(p);
    Ok(TraceIdentity { lhs, rhs, residual: (lhs - rhs).abs() / (1.0 + rhs.abs()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn diag(d: &[f64]) -> CMatrix {
        CMatrix::from_real_diag(d)
    }

    #[test]
    fn singular_value_examples() {
        let a = CMatrix::from_real_rows(&[vec![0., 2.], vec![0., 0.]]).unwrap();
        assert_eq!(singular_values(&a).unwrap(), vec![2.0, 0.0]);
        assert_eq!(singular_values(&diag(&[3.0, -4.0])).unwrap(), vec![4.0, 3.0]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = CMatrix::from_rows(&[
            vec![Complex64::new(s, 0.), Complex64::new(0., s)],
            vec![Complex64::new(0., s), Complex64::new(s, 0.)],
        ])
        .unwrap();
        for sv in singular_values(&u).unwrap() {
            assert!((sv - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn norm_examples() {
        let a = diag(&[3.0, 4.0]);
        assert_eq!(norm(&a, NormSpec::Schatten(1.0)).unwrap(), 7.0);
        assert_eq!(norm(&a, NormSpec::Schatten(2.0)).unwrap(), 5.0);
        assert_eq!(norm(&a, NormSpec::Operator).unwrap(), 4.0);
        assert!((norm(&diag(&[1.0, 1.0]), NormSpec::Schatten(0.5)).unwrap() - 4.0).abs() < 1e-15);
        let b = diag(&[3.0, 1.0]);
        assert_eq!(norm(&b, NormSpec::KyFan(1)).unwrap(), 3.0);
        assert_eq!(norm(&b, NormSpec::KyFan(2)).unwrap(), 4.0);
    }

    #[test]
    fn invalid_parameters() {
        let a = diag(&[1.0, 2.0]);
        assert!(norm(&a, NormSpec::KyFan(3)).is_err());
        assert!(norm(&a, NormSpec::KyFan(0)).is_err());
        assert!(norm(&a, NormSpec::Schatten(0.0)).is_err());
        assert!(norm(&a, NormSpec::Schatten(-1.0)).is_err());
        assert!(trace_identity_check(&a, 0.0).is_err());
    }

    #[test]
    fn quasi_norm_breaks_triangle_inequality() {
        let a = diag(&[1.0, 0.0]);
        let b = diag(&[0.0, 1.0]);
        let spec = NormSpec::Schatten(0.5);
        assert!(spec.is_quasi_norm());
        let sum = norm(&(&a + &b), spec).unwrap();
        let parts = norm(&a, spec).unwrap() + norm(&b, spec).unwrap();
        assert!((sum - 4.0).abs() < 1e-14);
        assert!((parts - 2.0).abs() < 1e-14);
        assert!(sum > parts);
    }

    #[test]
    fn spec_strings() {
        for (text, spec) in [
            ("schatten:1.5", NormSpec::Schatten(1.5)),
            ("schatten:2", NormSpec::Schatten(2.0)),
            ("kyfan:3", NormSpec::KyFan(3)),
            ("operator", NormSpec::Operator),
            ("trace", NormSpec::Trace),
        ] {
            assert_eq!(text.parse::<NormSpec>().unwrap(), spec);
            assert_eq!(spec.to_string(), text);
        }
        assert!("kyfan:0".parse::<NormSpec>().is_err());
        assert!("schatten:-2".parse::<NormSpec>().is_err());
        assert!("frobenius".parse::<NormSpec>().is_err());
        assert_eq!(serde_json::to_string(&NormSpec::KyFan(2)).unwrap(), "\"kyfan:2\"");
    }

    #[test]
    fn trace_identity_examples() {
        let id = trace_identity_check(&CMatrix::identity(2), 3.0).unwrap();
        assert_eq!((id.lhs, id.rhs), (2.0, 2.0));
        let d = trace_identity_check(&diag(&[2.0, 0.0]), 2.0).unwrap();
        assert!((d.lhs - 4.0).abs() < 1e-14 && (d.rhs - 4.0).abs() < 1e-14);
    }

    #[test]
    fn ky_fan_extremes_match_trace_and_operator() {
        let a = CMatrix::from_fn(4, |i, j| Complex64::new((i * j) as f64 - 1.0, (i + j) as f64 * 0.5));
        let sv = singular_values(&a).unwrap();
        assert_eq!(
            NormSpec::KyFan(4).eval_singular_values(&sv).unwrap(),
            NormSpec::Trace.eval_singular_values(&sv).unwrap()
        );
        assert_eq!(
            NormSpec::KyFan(1).eval_singular_values(&sv).unwrap(),
            NormSpec::Operator.eval_singular_values(&sv).unwrap()
        );
    }
}
