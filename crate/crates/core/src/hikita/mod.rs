//! Abelian hypertoric data: circuits, Kähler relations, the quantized Coulomb
//! algebra, trace relations and their matching.

mod coulomb;
mod data;
mod relations;

pub use coulomb::{coulomb_normal_form, coulomb_registry, shift_y, x_generator, CoulombWord, Letter};
pub use data::{circuits, Circuit, HypertoricData};
pub use relations::{hikita_match, kahler_relations, scalar_pcurvature, trace_relations, MatchReport, QDiffPresentation};
