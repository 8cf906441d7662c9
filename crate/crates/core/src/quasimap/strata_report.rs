//! Stratum-by-stratum localization at `a_i = 1`, `q = zeta_k`.
//!
//! On `F_l = P^{N-1}` (`N = n m_l`) the class `L` restricts to `q^{-l} L'` and
//! `K(F_l) = Z[eps]/(eps^N)` with `eps = 1 - L'^{-1}`, so `chi(F_l, eps^r) = 1`
//! for `r < N`. The normal bundle is `sum_{m != l} n m_m q^{m-l} L'` and every
//! factor `1 - q^{l-m} L'^{-1} = (1 - q^{l-m}) + q^{l-m} eps` is invertible.

use super::engine::Engine;
use super::residue_multiplicity;
use crate::cyclotomic::{CycElem, CycRing, Mode};
use crate::error::{Error, Result};
use crate::symbolic::LaurentPoly;
use num::{BigInt, BigRational, One};

/// Contribution of one fixed stratum.
#[derive(Clone, Debug)]
pub struct StratumReport {
    pub ell: u32,
    pub multiplicity: u32,
    pub dimension: i64,
    /// Contribution with the rank-consistent normal bundle (exponent `n m_m` per residue `m`).
    pub chi: LaurentPoly,
    /// Contribution with the scalar normal factor `prod_{m != l} (1 - q^{l-m})^{-(2 m_m - 1)}`
    /// and `L'` dropped.
    pub chi_scalar_factor: LaurentPoly,
}

#[derive(Clone, Debug)]
pub struct StrataReport {
    pub strata: Vec<StratumReport>,
    /// Sum of the rank-consistent contributions.
    pub total: LaurentPoly,
    /// Global pushforward of the same class at `a_i = 1`.
    pub global: LaurentPoly,
    pub total_scalar_factor: LaurentPoly,
}

impl StrataReport {
    pub fn consistent(&self) -> bool {
        self.total == self.global
    }

    pub fn scalar_factor_consistent(&self) -> bool {
        self.total_scalar_factor == self.global
    }
}

/// Truncated power series in `eps` with polynomial coefficients.
#[derive(Clone)]
struct EpsSeries(Vec<LaurentPoly>);

impl EpsSeries {
    fn constant(c: LaurentPoly, len: usize) -> Self {
        let zero = LaurentPoly::zero(c.registry(), c.ring());
        let mut v = vec![zero; len];
        v[0] = c;
        EpsSeries(v)
    }

    fn mul(&self, o: &Self) -> Self {
        let len = self.0.len();
        let zero = LaurentPoly::zero(self.0[0].registry(), self.0[0].ring());
        let mut v = vec![zero; len];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    v[i + j].add_assign(&a.mul(b));
                }
            }
        }
        EpsSeries(v)
    }

    fn sum(&self) -> LaurentPoly {
        let mut acc = LaurentPoly::zero(self.0[0].registry(), self.0[0].ring());
        for c in &self.0 {
            acc.add_assign(c);
        }
        acc
    }
}

fn binom(n: i64, r: i64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..r {
        acc = acc * BigRational::from_integer(BigInt::from(n - i)) / BigRational::from_integer(BigInt::from(i + 1));
    }
    acc
}

/// Coefficients of `L'^e = (1 - eps)^{-e}` up to `eps^{len-1}`.
fn lprime_power(e: i32, len: usize) -> Vec<BigRational> {
    (0..len as i64)
        .map(|r| {
            if e >= 0 {
                binom(e as i64 + r - 1, r)
            } else {
                let s = if r % 2 == 0 { BigRational::one() } else { -BigRational::one() };
                s * binom(-(e as i64), r)
            }
        })
        .collect()
}

/// `(u + v eps)^{-p}` truncated, for a unit `u`.
fn inverse_linear_power(u: &CycElem, v: &CycElem, p: u32, len: usize) -> Result<Vec<CycElem>> {
    let ui = u.inv()?;
    let ratio = v.mul(&ui).neg();
    let mut base: Vec<CycElem> = Vec::with_capacity(len);
    let mut t = ui.clone();
    for _ in 0..len {
        base.push(t.clone());
        t = t.mul(&ratio);
    }
    let mut acc: Vec<CycElem> = (0..len).map(|r| if r == 0 { u.ring().one() } else { u.ring().zero() }).collect();
    for _ in 0..p {
        let mut next = vec![u.ring().zero(); len];
        for i in 0..len {
            for j in 0..len - i {
                next[i + j] = next[i + j].add(&acc[i].mul(&base[j]));
            }
        }
        acc = next;
    }
    Ok(acc)
}

impl Engine {
    /// Localize `chi(QM_d, class)` onto the `mu_k`-fixed strata at `a_i = 1`, `q = zeta_k`.
    pub fn strata_localization(&self, d: u32, class: &LaurentPoly) -> Result<StrataReport> {
        if d == 0 {
            return Err(Error::Domain("strata are defined for d >= 1".into()));
        }
        let spec = *self.spec();
        let k = spec.k;
        let field = CycRing::component(k, k)?;
        let c = match self.ring().mode() {
            Mode::Full => class.reduce_to(&field)?,
            Mode::Component(m) if m == k => class.clone(),
            Mode::Component(m) => {
                return Err(Error::Domain(format!("strata localization needs the Phi_{k} component, not Phi_{m}")))
            }
        };
        let mut c = c;
        for i in 0..spec.n {
            c = c.set_one(self.a_index(i));
        }
        let il = self.l_index();
        let reg = self.registry().clone();
        let global = {
            let e = self.over(field.clone())?;
            let w: Vec<LaurentPoly> = e.fixed_point_weights(d).iter().map(|w| {
                let mut w = w.clone();
                for i in 0..spec.n {
                    w = w.set_one(self.a_index(i));
                }
                w
            }).collect();
            let (lo, hi) = c.var_range(il).unwrap_or((0, 0));
            crate::symbolic::ChiTable::new(&w, lo, hi)?.apply(&c, il)?
        };
        let by_power = c.collect_in(il);
        let mut strata = Vec::new();
        let mut total = LaurentPoly::zero(&reg, &field);
        let mut total_scalar_factor = LaurentPoly::zero(&reg, &field);
        for ell in 0..k {
            let m_l = residue_multiplicity(k, d, ell);
            if m_l == 0 {
                continue;
            }
            let len = spec.n * m_l as usize;
            // Restricted class as a series in eps.
            let zero = LaurentPoly::zero(&reg, &field);
            let mut restricted = EpsSeries(vec![zero.clone(); len]);
            for (e, coef) in &by_power {
                let scaled = coef.scale(&field.q_pow(-(ell as i64) * *e as i64));
                for (r, b) in lprime_power(*e, len).into_iter().enumerate() {
                    restricted.0[r].add_assign(&scaled.scale(&field.from_rational(b)));
                }
            }
            let mut normal = EpsSeries::constant(LaurentPoly::one(&reg, &field), len);
            let mut scalar_factor = field.one();
            for m in 0..k {
                if m == ell {
                    continue;
                }
                let m_m = residue_multiplicity(k, d, m);
                let v = field.q_pow(ell as i64 - m as i64);
                let u = field.one().sub(&v);
                if m_m > 0 {
                    let inv = inverse_linear_power(&u, &v, spec.n as u32 * m_m, len)?;
                    let s = EpsSeries(inv.into_iter().map(|x| LaurentPoly::constant(&reg, x)).collect());
                    normal = normal.mul(&s);
                }
                // Scalar variant: exponent 2 floor((d - m)/k) + 1, i.e. 2 m_m - 1 when m <= d.
                if m <= d {
                    let p = 2 * ((d - m) / k) + 1;
                    scalar_factor = scalar_factor.mul(&u.inv()?.pow(p));
                }
            }
            let chi = restricted.mul(&normal).sum();
            let chi_scalar_factor = restricted.sum().scale(&scalar_factor);
            total.add_assign(&chi);
            total_scalar_factor.add_assign(&chi_scalar_factor);
            strata.push(StratumReport {
                ell,
                multiplicity: m_l,
                dimension: len as i64 - 1,
                chi,
                chi_scalar_factor,
            });
        }
        Ok(StrataReport { strata, total, global, total_scalar_factor })
    }
}
