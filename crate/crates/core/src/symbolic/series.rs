//! Square matrices over [`FactoredRatFunc`] and truncated Novikov series of them.

use super::laurent::{LaurentPoly, VarRegistry};
use super::ratfunc::FactoredRatFunc;
use crate::cyclotomic::CycRing;
use crate::error::{Error, Result};
use rayon::prelude::*;
use std::sync::Arc;

/// Dense `n x n` matrix, row-major.
#[derive(Clone, Debug)]
pub struct Mat {
    n: usize,
    e: Vec<FactoredRatFunc>,
}

impl Mat {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> FactoredRatFunc) -> Self {
        let e = (0..n * n).map(|t| f(t / n, t % n)).collect();
        Mat { n, e }
    }

    pub fn from_rows(rows: Vec<Vec<FactoredRatFunc>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Mat { n, e: rows.into_iter().flatten().collect() }
    }

    pub fn zero(n: usize, reg: &Arc<VarRegistry>, ring: &CycRing) -> Self {
        Self::from_fn(n, |_, _| FactoredRatFunc::zero(reg, ring))
    }

    pub fn identity(n: usize, reg: &Arc<VarRegistry>, ring: &CycRing) -> Self {
        Self::from_fn(n, |i, j| {
            if i == j {
                FactoredRatFunc::one(reg, ring)
            } else {
                FactoredRatFunc::zero(reg, ring)
            }
        })
    }

    pub fn diagonal(d: Vec<FactoredRatFunc>) -> Self {
        let n = d.len();
        let reg = d[0].registry().clone();
        let ring = d[0].ring().clone();
        Self::from_fn(n, |i, j| if i == j { d[i].clone() } else { FactoredRatFunc::zero(&reg, &ring) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &FactoredRatFunc {
        &self.e[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FactoredRatFunc) {
        self.e[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[FactoredRatFunc] {
        &self.e
    }

    pub fn rows(&self) -> Vec<Vec<FactoredRatFunc>> {
        self.e.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn map(&self, f: impl Fn(&FactoredRatFunc) -> FactoredRatFunc + Sync + Send) -> Self {
        Mat { n: self.n, e: self.e.par_iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&FactoredRatFunc) -> Result<FactoredRatFunc> + Sync + Send) -> Result<Self> {
        Ok(Mat { n: self.n, e: self.e.par_iter().map(f).collect::<Result<Vec<_>>>()? })
    }

    pub fn add(&self, o: &Self) -> Self {
        Mat { n: self.n, e: self.e.iter().zip(&o.e).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Mat { n: self.n, e: self.e.iter().zip(&o.e).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        Mat { n: self.n, e: self.e.iter().map(|a| a.neg()).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    /// Matrix product with denominators cancelled entrywise.
    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let e = (0..n * n)
            .into_par_iter()
            .map(|t| {
                let (i, j) = (t / n, t % n);
                let mut acc = FactoredRatFunc::zero(self.e[0].registry(), self.e[0].ring());
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = o.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc.cancel()
            })
            .collect();
        Mat { n, e }
    }

    pub fn scale_poly(&self, p: &LaurentPoly) -> Self {
        self.map(|a| a.mul_poly(p))
    }

    pub fn cancel(&self) -> Self {
        self.map(|a| a.cancel())
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|a| a.is_zero())
    }

    /// Entrywise exact equality; returns the first differing index.
    pub fn first_difference(&self, o: &Self) -> Option<(usize, usize)> {
        (0..self.n * self.n)
            .into_par_iter()
            .find_first(|&t| !self.e[t].equals(&o.e[t]))
            .map(|t| (t / self.n, t % self.n))
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.first_difference(o).is_none()
    }

    pub fn trace(&self) -> FactoredRatFunc {
        let mut acc = FactoredRatFunc::zero(self.e[0].registry(), self.e[0].ring());
        for i in 0..self.n {
            acc = acc.add(self.get(i, i));
        }
        acc.cancel()
    }

    pub fn reduce_to(&self, target: &CycRing) -> Result<Self> {
        self.try_map(|a| Ok(a.reduce_to(target)?.cancel()))
    }

    /// Inverse by Gauss-Jordan elimination; pivots must have unit-monomial numerators
    /// after cancellation.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let reg = self.e[0].registry().clone();
        let ring = self.e[0].ring().clone();
        let mut a = self.clone();
        let mut inv = Mat::identity(n, &reg, &ring);
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| {
                    let v = a.get(r, col).cancel();
                    !v.is_zero() && v.inv().is_ok()
                })
                .ok_or_else(|| Error::Singular(format!("no invertible pivot in column {col}")))?;
            if piv != col {
                for j in 0..n {
                    a.e.swap(piv * n + j, col * n + j);
                    inv.e.swap(piv * n + j, col * n + j);
                }
            }
            let pinv = a.get(col, col).cancel().inv()?;
            for j in 0..n {
                let v = a.get(col, j).mul(&pinv).cancel();
                a.set(col, j, v);
                let w = inv.get(col, j).mul(&pinv).cancel();
                inv.set(col, j, w);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let v = a.get(r, j).sub(&f.mul(a.get(col, j))).cancel();
                    a.set(r, j, v);
                    let w = inv.get(r, j).sub(&f.mul(inv.get(col, j))).cancel();
                    inv.set(r, j, w);
                }
            }
        }
        Ok(inv)
    }
}

/// Truncated series `sum_{d <= D} coeff[d] z^d` of `n x n` matrices.
#[derive(Clone, Debug)]
pub struct SeriesOperator {
    coeff: Vec<Mat>,
}

impl SeriesOperator {
    pub fn new(coeff: Vec<Mat>) -> Self {
        assert!(!coeff.is_empty(), "series needs at least the constant term");
        SeriesOperator { coeff }
    }

    pub fn identity(n: usize, order: usize, reg: &Arc<VarRegistry>, ring: &CycRing) -> Self {
        let mut coeff = vec![Mat::identity(n, reg, ring)];
        coeff.extend((0..order).map(|_| Mat::zero(n, reg, ring)));
        SeriesOperator { coeff }
    }

    pub fn n(&self) -> usize {
        self.coeff[0].n()
    }

    /// Truncation order `D`.
    pub fn order(&self) -> usize {
        self.coeff.len() - 1
    }

    pub fn coeff(&self, d: usize) -> &Mat {
        &self.coeff[d]
    }

    pub fn coeffs(&self) -> &[Mat] {
        &self.coeff
    }

    pub fn truncate(&self, order: usize) -> Self {
        SeriesOperator { coeff: self.coeff[..=order.min(self.order())].to_vec() }
    }

    pub fn ring(&self) -> &CycRing {
        self.coeff[0].get(0, 0).ring()
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        self.coeff[0].get(0, 0).registry()
    }

    /// Product truncated at the smaller order.
    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        let n = self.n();
        let coeff = (0..=order)
            .map(|d| {
                let mut acc = Mat::zero(n, self.registry(), self.ring());
                for e in 0..=d {
                    acc = acc.add(&self.coeff[e].mul(&o.coeff[d - e]));
                }
                acc.cancel()
            })
            .collect();
        SeriesOperator { coeff }
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        SeriesOperator { coeff: (0..=order).map(|d| self.coeff[d].add(&o.coeff[d]).cancel()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        SeriesOperator { coeff: (0..=order).map(|d| self.coeff[d].sub(&o.coeff[d]).cancel()).collect() }
    }

    /// Inverse given the inverse of the constant term.
    pub fn inverse_with(&self, c0_inv: &Mat) -> Self {
        let mut out = vec![c0_inv.clone()];
        let n = self.n();
        for d in 1..=self.order() {
            let mut acc = Mat::zero(n, self.registry(), self.ring());
            for e in 1..=d {
                acc = acc.add(&self.coeff[e].mul(&out[d - e]));
            }
            out.push(c0_inv.mul(&acc.cancel()).neg());
        }
        SeriesOperator { coeff: out }
    }

    /// Inverse; the constant term must be invertible by [`Mat::inverse`].
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeff[0].inverse()?;
        Ok(self.inverse_with(&c0))
    }

    /// `coeff[d] -> s(d) * coeff[d]` for scalar multipliers.
    pub fn scale_degrees(&self, s: impl Fn(usize) -> LaurentPoly) -> Self {
        SeriesOperator { coeff: self.coeff.iter().enumerate().map(|(d, m)| m.scale_poly(&s(d))).collect() }
    }

    /// `z -> q^j z`: `coeff[d] -> q^{j d} coeff[d]` with `q` from the coefficient ring.
    pub fn zshift(&self, j: i64) -> Self {
        let reg = self.registry().clone();
        let ring = self.ring().clone();
        self.scale_degrees(|d| LaurentPoly::q_pow(&reg, &ring, j * d as i64))
    }

    pub fn reduce_to(&self, target: &CycRing) -> Result<Self> {
        Ok(SeriesOperator { coeff: self.coeff.iter().map(|m| m.reduce_to(target)).collect::<Result<_>>()? })
    }

    pub fn cancel(&self) -> Self {
        SeriesOperator { coeff: self.coeff.iter().map(|m| m.cancel()).collect() }
    }

    /// First `(d, i, j)` where the two series differ exactly.
    pub fn first_difference(&self, o: &Self) -> Option<(usize, usize, usize)> {
        let order = self.order().min(o.order());
        (0..=order).find_map(|d| self.coeff[d].first_difference(&o.coeff[d]).map(|(i, j)| (d, i, j)))
    }

    /// Non-negative power.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = SeriesOperator::identity(self.n(), self.order(), self.registry(), self.ring());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn map_coeffs(&self, f: impl Fn(&Mat) -> Mat) -> Self {
        SeriesOperator { coeff: self.coeff.iter().map(f).collect() }
    }
}
