//! Cohomological limit: `w`-adic size of `M_{L,zeta} - Id` near `a = h = 1`.
//!
//! With `q = zeta_p = 1 + w`, substitute `a_i = 1 + beta abar_i` and
//! `h = 1 + beta hbar` where `beta = w / t`. Treating `abar`, `hbar` and `t` as
//! independent units, a polynomial `sum_e c_e y^e` in `y = (abar, hbar)` after
//! the Taylor shift has Gauss valuation `min_e (|e| + v_w(c_e))`. The Gauss
//! valuation is multiplicative, so a fraction has valuation
//! `v(num) - sum mult * v(binomial)`.

use super::ops::Normalizer;
use crate::cyclotomic::{EisensteinElem, Mode};
use crate::error::{Error, Result};
use crate::quasimap::Engine;
use crate::symbolic::{FactoredRatFunc, LaurentPoly};
use rayon::prelude::*;

/// Valuation of one entry of `M - Id`; `None` means the entry vanishes.
#[derive(Clone, Debug, serde::Serialize)]
pub struct EntryValuation {
    pub d: usize,
    pub i: usize,
    pub j: usize,
    pub valuation: Option<i64>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ValuationReport {
    pub p: u32,
    pub entries: Vec<EntryValuation>,
}

impl ValuationReport {
    /// Smallest finite valuation; `None` when every entry vanishes.
    pub fn min_valuation(&self) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.valuation).min()
    }

    /// Every entry has valuation at least `bound`.
    pub fn all_at_least(&self, bound: i64) -> bool {
        self.entries.iter().all(|e| e.valuation.is_none_or(|v| v >= bound))
    }
}

/// Gauss valuation of a polynomial over `Q(zeta_p)` after `v -> 1 + beta v` for each variable in `vars`.
pub fn gauss_valuation(p: &LaurentPoly, vars: &[usize]) -> Result<Option<i64>> {
    if p.is_zero() {
        return Ok(None);
    }
    if !matches!(p.ring().mode(), Mode::Component(_)) {
        return Err(Error::Domain("valuations need a Phi_p component".into()));
    }
    // Clearing a monomial changes nothing: a unit power of 1 + beta v has valuation 0.
    let mut shifted = p.clone();
    for &v in vars {
        if let Some((lo, _)) = shifted.var_range(v) {
            if lo < 0 {
                shifted = shifted.mul(&LaurentPoly::var_idx(p.registry(), p.ring(), v, -lo));
            }
        }
    }
    for &v in vars {
        let one_plus = LaurentPoly::one(p.registry(), p.ring()).add(&LaurentPoly::var_idx(p.registry(), p.ring(), v, 1));
        shifted = shifted.substitute_poly(v, &one_plus)?;
    }
    let mut best: Option<i64> = None;
    for (m, c) in shifted.terms() {
        let deg: i64 = vars.iter().map(|&v| m[v] as i64).sum();
        if let Some(vc) = EisensteinElem::from_cyc(c)?.w_valuation() {
            let t = deg + vc;
            best = Some(best.map_or(t, |b| b.min(t)));
        }
    }
    Ok(best)
}

/// Gauss valuation of a fraction with binomial denominators.
pub fn ratfunc_valuation(f: &FactoredRatFunc, vars: &[usize]) -> Result<Option<i64>> {
    let f = f.cancel();
    let Some(mut v) = gauss_valuation(f.numerator(), vars)? else {
        return Ok(None);
    };
    for (b, &e) in f.denominator() {
        let vb = gauss_valuation(&b.to_poly(f.registry()), vars)?
            .ok_or_else(|| Error::Domain("zero binomial in a denominator".into()))?;
        v -= e as i64 * vb;
    }
    Ok(Some(v))
}

/// Valuations of every entry of `M_{L,zeta} - Id` through order `D`, for prime `k = p`.
pub fn cohomological_expand(engine: &Engine, order: u32) -> Result<ValuationReport> {
    let p = engine.spec().k;
    if !crate::cyclotomic::is_prime(p) {
        return Err(Error::Domain(format!("cohomological limit needs prime k, got {p}")));
    }
    let m = Normalizer::new(engine, order)?.p_curvature()?;
    let n = engine.spec().n;
    let mut vars: Vec<usize> = (0..n).map(|i| engine.a_index(i)).collect();
    vars.push(engine.h_index());
    let reg = m.series.registry().clone();
    let ring = m.series.ring().clone();
    let jobs: Vec<(usize, usize, usize)> =
        (0..=m.order()).flat_map(|d| (0..n).flat_map(move |i| (0..n).map(move |j| (d, i, j)))).collect();
    let entries = jobs
        .par_iter()
        .map(|&(d, i, j)| {
            let mut e = m.series.coeff(d).get(i, j).clone();
            if d == 0 && i == j {
                e = e.sub(&FactoredRatFunc::one(&reg, &ring));
            }
            Ok(EntryValuation { d, i: i + 1, j: j + 1, valuation: ratfunc_valuation(&e, &vars)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ValuationReport { p, entries })
}
