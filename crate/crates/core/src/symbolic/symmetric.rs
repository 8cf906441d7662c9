//! Complete homogeneous symmetric polynomials and Euler characteristics of
//! `O(m)` on projective spaces `P(W)`.

use super::laurent::{mono_scale, mono_sub, LaurentPoly};
use super::ratfunc::{Binomial, FactoredRatFunc};
use crate::error::{Error, Result};

/// `h_0, ..., h_max` of a weight multiset, by the recursion `H'_j = H_j + w H'_{j-1}`.
pub fn complete_homogeneous_upto(max: usize, weights: &[LaurentPoly]) -> Vec<LaurentPoly> {
    assert!(!weights.is_empty(), "complete_homogeneous: empty weight multiset");
    let reg = weights[0].registry();
    let ring = weights[0].ring();
    let mut h = vec![LaurentPoly::zero(reg, ring); max + 1];
    h[0] = LaurentPoly::one(reg, ring);
    for w in weights {
        for j in 1..=max {
            let prev = h[j - 1].mul(w);
            h[j].add_assign(&prev);
        }
    }
    h
}

/// `h_m` of a weight multiset.
pub fn complete_homogeneous(m: usize, weights: &[LaurentPoly]) -> LaurentPoly {
    complete_homogeneous_upto(m, weights).pop().expect("nonempty")
}

fn inverse_weights(weights: &[LaurentPoly]) -> Result<Vec<LaurentPoly>> {
    weights.iter().map(|w| w.pow_i(-1)).collect()
}

/// `chi(P(W), L^m)` for every `m` in `lo..=hi`, where `L = O(1)` restricts to
/// the dual weights at the fixed points.
///
/// `m >= 0` gives `h_m`; `-N < m < 0` gives `0`; `m <= -N` gives
/// `(-1)^{N-1} (prod w)^{-1} h_{-m-N}(w^{-1})`.
pub fn chi_powers(weights: &[LaurentPoly], lo: i32, hi: i32) -> Result<Vec<(i32, LaurentPoly)>> {
    if weights.is_empty() {
        return Err(Error::Domain("chi over an empty weight multiset".into()));
    }
    let n = weights.len() as i32;
    let reg = weights[0].registry();
    let ring = weights[0].ring();
    let pos = if hi >= 0 { complete_homogeneous_upto(hi as usize, weights) } else { Vec::new() };
    let neg_max = -lo - n;
    let neg = if neg_max >= 0 {
        let inv = inverse_weights(weights)?;
        let mut prod = LaurentPoly::one(reg, ring);
        for w in &inv {
            prod = prod.mul(w);
        }
        if (n - 1) % 2 == 1 {
            prod = prod.neg();
        }
        complete_homogeneous_upto(neg_max as usize, &inv).into_iter().map(|h| h.mul(&prod)).collect()
    } else {
        Vec::new()
    };
    Ok((lo..=hi)
        .map(|m| {
            let v = if m >= 0 {
                pos[m as usize].clone()
            } else if m > -n {
                LaurentPoly::zero(reg, ring)
            } else {
                neg[(-m - n) as usize].clone()
            };
            (m, v)
        })
        .collect())
}

/// Precomputed `chi(P(W), L^m)` for `m` in a window, shared by many classes.
#[derive(Clone, Debug)]
pub struct ChiTable {
    lo: i32,
    vals: Vec<LaurentPoly>,
}

impl ChiTable {
    pub fn new(weights: &[LaurentPoly], lo: i32, hi: i32) -> Result<Self> {
        let vals = chi_powers(weights, lo, hi)?.into_iter().map(|(_, v)| v).collect();
        Ok(ChiTable { lo, vals })
    }

    /// `chi(P(W), class)`; every power of `l` in `class` must lie in the window.
    pub fn apply(&self, class: &LaurentPoly, l: usize) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(class.registry(), class.ring());
        for (m, c) in class.collect_in(l) {
            let idx = m - self.lo;
            let v = usize::try_from(idx)
                .ok()
                .and_then(|i| self.vals.get(i))
                .ok_or_else(|| Error::IndexOutOfRange(format!("power L^{m} outside the chi table")))?;
            if !v.is_zero() {
                out.add_assign(&c.mul(v));
            }
        }
        Ok(out)
    }
}

/// `chi(P(W), class)` for a class Laurent in the variable `l` with `l`-free coefficients.
pub fn chi_projective(weights: &[LaurentPoly], class: &LaurentPoly, l: usize) -> Result<FactoredRatFunc> {
    if weights.is_empty() {
        return Err(Error::Domain("chi over an empty weight multiset".into()));
    }
    let Some((lo, hi)) = class.var_range(l) else {
        return Ok(FactoredRatFunc::zero(class.registry(), class.ring()));
    };
    let table = ChiTable::new(weights, lo, hi)?;
    Ok(FactoredRatFunc::from_poly(table.apply(class, l)?))
}

/// Exact division of `p` by `w_a - w_b` for unit monomials `w_a != w_b`.
fn div_difference(p: &LaurentPoly, wa: &LaurentPoly, wb: &LaurentPoly) -> Result<LaurentPoly> {
    let (ca, ma) = wa.as_monomial().ok_or_else(|| Error::Domain("weight is not a monomial".into()))?;
    let (cb, mb) = wb.as_monomial().ok_or_else(|| Error::Domain("weight is not a monomial".into()))?;
    // w_a - w_b = c_a x^{m_a} (1 - (c_b/c_a) x^{m_b - m_a})
    let cai = ca.unit_inverse().ok_or_else(|| Error::NotInvertible(ca.to_string()))?;
    let ((u, um), b) = Binomial::normalized(&cb.mul(&cai), &mono_sub(&mb, &ma))?;
    let ui = u.unit_inverse().ok_or_else(|| Error::NotInvertible(u.to_string()))?;
    let shifted = p.mul_term(&cai.mul(&ui), &mono_scale(&super::laurent::mono_add(&ma, &um), -1));
    shifted
        .div_binomial(&b)
        .ok_or_else(|| Error::OracleMismatch("divided difference is not a Laurent polynomial".into()))
}

/// Independent oracle for [`chi_projective`].
///
/// Every weight `w_i` is deformed to `w_i u^i` with a fresh symbol `u`, the
/// isolated fixed-point sum `sum_i class(w~_i) / prod_{j != i} (1 - w~_j / w~_i)`
/// is evaluated as the divided difference of `g(x) = class(x) x^{N-1}` on the
/// distinct nodes `w~_i` (each step an exact binomial division), and `u` is
/// then set to `1`.
pub fn chi_oracle_refined(weights: &[LaurentPoly], class: &LaurentPoly, l: usize) -> Result<FactoredRatFunc> {
    if weights.is_empty() {
        return Err(Error::Domain("chi over an empty weight multiset".into()));
    }
    let base = class.registry().clone();
    let reg = base.extended(&["__u"]);
    let u = reg.len() - 1;
    let lr = reg.expect(base.name(l));
    let ring = class.ring();
    let n = weights.len();
    let g = class.rebase(&reg)?.mul(&LaurentPoly::var_idx(&reg, ring, lr, n as i32 - 1));
    let nodes: Vec<LaurentPoly> = weights
        .iter()
        .enumerate()
        .map(|(i, w)| Ok(w.rebase(&reg)?.mul(&LaurentPoly::var_idx(&reg, ring, u, i as i32 + 1))))
        .collect::<Result<_>>()?;
    let mut level: Vec<LaurentPoly> = nodes
        .iter()
        .map(|w| {
            let (c, m) = w.as_monomial().ok_or_else(|| Error::Domain("weight is not a monomial".into()))?;
            g.substitute_monomial(lr, &c, &m)
        })
        .collect::<Result<_>>()?;
    for r in 1..n {
        let mut next = Vec::with_capacity(n - r);
        for i in 0..n - r {
            let diff = level[i + 1].sub(&level[i]);
            next.push(div_difference(&diff, &nodes[i + r], &nodes[i])?);
        }
        level = next;
    }
    let v = level.pop().expect("one entry").set_one(u);
    Ok(FactoredRatFunc::from_poly(v.rebase(&base)?))
}
