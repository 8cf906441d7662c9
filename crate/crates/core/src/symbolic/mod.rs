//! Laurent polynomials and binomial-denominator fractions over [`crate::cyclotomic::CycElem`],
//! symmetric-function pushforwards and truncated Novikov series of matrices.

pub mod laurent;
pub mod parse;
pub mod ratfunc;
pub mod series;
pub mod symmetric;

pub use laurent::{LaurentPoly, Mono, VarRegistry};
pub use parse::{parse_cyc, parse_laurent, parse_ratfunc};
pub use ratfunc::{Binomial, FactoredRatFunc};
pub use series::{Mat, SeriesOperator};
pub use symmetric::{chi_oracle_refined, ChiTable, chi_powers, chi_projective, complete_homogeneous, complete_homogeneous_upto};
