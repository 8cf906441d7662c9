//! Normalized operators, Kähler shifts, p-curvature and quantum Adams operators.

use crate::cyclotomic::{CycRing, Mode};
use crate::error::{Error, Result};
use crate::quasimap::{Engine, Insertions};
use crate::symbolic::{LaurentPoly, SeriesOperator};

/// What a [`NormalizedOp`] computes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpKind {
    /// `M_{L^m}`: the insertion `x^m` at the first marked point.
    KahlerShift(i32),
    /// An arbitrary insertion at the first marked point.
    Point,
    /// The quantum cyclic power: insertion at the equator, unspecialized.
    Cyclic,
    /// The cyclic power at `q = zeta_k`.
    Adams,
    /// `M_L(q^{-(k-1)} z) ... M_L(q^{-1} z) M_L(z)` at `q = zeta_k`.
    PCurvature,
}

/// A series operator together with what it represents.
#[derive(Clone, Debug)]
pub struct NormalizedOp {
    pub series: SeriesOperator,
    pub kind: OpKind,
}

impl NormalizedOp {
    pub fn ring(&self) -> &CycRing {
        self.series.ring()
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn reduce_to(&self, target: &CycRing) -> Result<Self> {
        Ok(NormalizedOp { series: self.series.reduce_to(target)?, kind: self.kind.clone() })
    }
}

/// Shared gluing normalization: the inverse of the trivial-insertion series.
#[derive(Clone, Debug)]
pub struct Normalizer {
    engine: Engine,
    order: u32,
    inv: SeriesOperator,
}

impl Normalizer {
    pub fn new(engine: &Engine, order: u32) -> Result<Self> {
        let trivial = engine.raw_series(&Insertions::trivial(engine), order)?;
        let inv = trivial.inverse_with(&engine.gluing_inverse()?);
        Ok(Normalizer { engine: engine.clone(), order, inv })
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `raw(ins) * raw(1)^{-1}`, which equals `bare(ins) * bare(1)^{-1}`.
    pub fn apply(&self, ins: &Insertions, kind: OpKind) -> Result<NormalizedOp> {
        let raw = self.engine.raw_series(ins, self.order)?;
        Ok(NormalizedOp { series: raw.mul(&self.inv).cancel(), kind })
    }

    pub fn kahler_shift(&self, m: i32) -> Result<NormalizedOp> {
        let e = &self.engine;
        let x = LaurentPoly::var_idx(e.registry(), e.ring(), e.x_index(), m);
        self.apply(&Insertions::at_p1(e, x), OpKind::KahlerShift(m))
    }

    /// Unspecialized cyclic power with equator insertion `tau`.
    pub fn quantum_cyclic(&self, tau: &LaurentPoly) -> Result<NormalizedOp> {
        self.apply(&Insertions::at_equator(&self.engine, tau.clone()), OpKind::Cyclic)
    }

    /// Cyclic power specialized to the `Phi_k` component.
    pub fn quantum_adams(&self, tau: &LaurentPoly) -> Result<NormalizedOp> {
        let field = zeta_field(self.engine.ring())?;
        let c = self.quantum_cyclic(tau)?;
        Ok(NormalizedOp { series: c.series.reduce_to(&field)?, kind: OpKind::Adams })
    }

    /// p-curvature from `M_L`, specialized to the `Phi_k` component.
    pub fn p_curvature(&self) -> Result<NormalizedOp> {
        let ml = self.kahler_shift(1)?;
        p_curvature_from(&ml.series, self.engine.spec().k)
    }
}

/// The `Phi_k` component of the ring (identity when already there).
pub fn zeta_field(ring: &CycRing) -> Result<CycRing> {
    let k = ring.k();
    match ring.mode() {
        Mode::Full => CycRing::component(k, k),
        Mode::Component(m) if m == k => Ok(ring.clone()),
        Mode::Component(m) => Err(Error::Domain(format!("ring is the Phi_{m} component, not Phi_{k}"))),
    }
}

/// `prod_{j=k-1..0} M(q^{-j} z)` followed by projection to `Phi_k`.
pub fn p_curvature_from(ml: &SeriesOperator, k: u32) -> Result<NormalizedOp> {
    let field = zeta_field(ml.ring())?;
    let m = ml.reduce_to(&field)?;
    let mut acc = m.zshift(-(k as i64 - 1));
    for j in (0..k as i64 - 1).rev() {
        acc = acc.mul(&m.zshift(-j));
    }
    Ok(NormalizedOp { series: acc.cancel(), kind: OpKind::PCurvature })
}

/// `Op = bare_series(ins) * bare_series(1)^{-1}` through order `D`.
pub fn normalized_operator(engine: &Engine, ins: &Insertions, order: u32) -> Result<NormalizedOp> {
    Normalizer::new(engine, order)?.apply(ins, OpKind::Point)
}

pub fn kahler_shift(engine: &Engine, m: i32, order: u32) -> Result<NormalizedOp> {
    Normalizer::new(engine, order)?.kahler_shift(m)
}

pub fn p_curvature(engine: &Engine, order: u32) -> Result<NormalizedOp> {
    Normalizer::new(engine, order)?.p_curvature()
}

pub fn quantum_adams(engine: &Engine, tau: &LaurentPoly, order: u32) -> Result<NormalizedOp> {
    Normalizer::new(engine, order)?.quantum_adams(tau)
}
