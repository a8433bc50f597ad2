//! Numerical verification of operator parallelogram laws, operator Bohr
//! inequalities and convexity-driven unitarily invariant norm inequalities
//! on finite-dimensional complex matrices.
//!
//! - [`linalg`]: dense complex matrices, a Jacobi Hermitian eigensolver and
//!   spectral calculus (`|A|`, `f(H)`, Loewner tests)
//! - [`norms`]: Schatten, Ky Fan, operator and trace norms
//! - [`identities`]: exact operator and vector identities
//! - [`inequalities`]: norm inequalities with signed margins
//! - [`harness`]: seeded instance generation and suite runs
//! - [`cli`]: the `oplaw` command-line front end

pub mod cli;
pub mod error;
pub mod harness;
pub mod identities;
pub mod inequalities;
pub mod linalg;
pub mod norms;
pub mod tolerance;

pub use error::{Error, Result};
