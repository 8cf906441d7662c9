//! Exact quantum Adams operators and p-curvature for `T*P^{n-1}`.
//!
//! - [`cyclotomic`]: coefficient rings `Z[q]/(q^k - 1)` and `Q[q]/Phi_m(q)`
//! - [`symbolic`]: Laurent polynomials, binomial-denominator fractions, Novikov series
//! - [`quasimap`]: quasimap classes and their pushforwards, the bare operator matrices
//! - [`qdiff`]: normalized operators, p-curvature, theorem and property verifiers
//! - [`hikita`]: abelian hypertoric circuits, Coulomb normal forms, relation matching
//! - [`cli`]: command-line front end

pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod hikita;
pub mod qdiff;
pub mod quasimap;
pub mod symbolic;

pub use error::{Error, Result};
