//! Quasimap classes on `QM_d(T*P^{n-1}) = P(C^{n(d+1)})` and their pushforwards.
//!
//! The engine assembles the equivariant class (twisted virtual sheaf times
//! insertions at the two marked points and at the equator), pushes it to a
//! point with [`crate::symbolic::ChiTable`] and returns the bare operator
//! matrices in the stable basis.

mod engine;
mod strata_report;
mod virtual_class;

pub use engine::{Engine, EquatorRule, InsertionSpec, Insertions, P2Twist, Placement};
pub use strata_report::{StratumReport, StrataReport};
pub use virtual_class::{kvir_weight, ohat_weight, obstruction_weights, virtual_tangent, Weight};

use crate::error::{Error, Result};

/// Target `T*P^{n-1}` together with the cyclic order `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TargetSpec {
    pub n: usize,
    pub k: u32,
}

impl TargetSpec {
    pub fn new(n: usize, k: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("framing rank n={n} must be at least 2")));
        }
        if k < 2 {
            return Err(Error::Domain(format!("cyclic order k={k} must be at least 2")));
        }
        Ok(TargetSpec { n, k })
    }

    /// `dim QM_d = n(d+1) - 1`.
    pub fn qm_dimension(&self, d: u32) -> i64 {
        self.n as i64 * (d as i64 + 1) - 1
    }
}

/// One `mu_k`-fixed stratum `F_l = P(m_l * sum_i a_i^{-1} q^l)` of `QM_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StratumData {
    pub ell: u32,
    pub multiplicity: u32,
    /// `n m_l - 1`, or `-1` for an empty stratum.
    pub dimension: i64,
}

/// Multiplicity `floor((d - l)/k) + 1` of residue `l`, or `0` when `l > d`.
pub fn residue_multiplicity(k: u32, d: u32, ell: u32) -> u32 {
    if ell > d {
        0
    } else {
        (d - ell) / k + 1
    }
}

/// The fixed strata of `QM_d`, one per residue `l = 0..k-1`.
pub fn strata(spec: &TargetSpec, d: u32) -> Result<Vec<StratumData>> {
    if d == 0 {
        return Err(Error::Domain("strata are defined for d >= 1".into()));
    }
    Ok((0..spec.k)
        .map(|ell| {
            let m = residue_multiplicity(spec.k, d, ell);
            StratumData { ell, multiplicity: m, dimension: spec.n as i64 * m as i64 - 1 }
        })
        .collect())
}
