//! Normalized q-difference operators, p-curvature, quantum Adams operators and
//! their verifiers.

mod limit;
mod ops;
mod verify;

pub use limit::{cohomological_expand, gauss_valuation, ratfunc_valuation, EntryValuation, ValuationReport};
pub use ops::{
    kahler_shift, normalized_operator, p_curvature, p_curvature_from, quantum_adams, zeta_field, NormalizedOp, Normalizer,
    OpKind,
};
pub use verify::{compare_series, verify_main_theorem, verify_properties, Check, Report, Status};
