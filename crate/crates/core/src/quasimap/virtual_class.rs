//! Characters of the virtual tangent space and the derived twists.
//!
//! With `U = sum_i a_i^{-1} O(d)` and `L = O(1)` on `P(U)`, the virtual tangent is
//!
//! ```text
//! T_vir = sum_i a_i^{-1} L chi(O(d)) + hbar^{-1} sum_i a_i L^{-1} chi(O(-d)) - 1 - hbar^{-1}
//! ```
//!
//! where `hbar = h^2`. Its negative part (for `d >= 1`) is the obstruction
//! space `hbar^{-1} + sum_{i, 1 <= j < d} hbar^{-1} a_i q^{-j} L^{-1}`.

use super::TargetSpec;
use crate::error::{Error, Result};

/// Character `h^h * prod a_i^{a_i} * L^l * q^q` with integer exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Weight {
    pub h: i32,
    pub a: Vec<i32>,
    pub l: i32,
    pub q: i64,
}

impl Weight {
    pub fn one(n: usize) -> Self {
        Weight { h: 0, a: vec![0; n], l: 0, q: 0 }
    }

    pub fn is_trivial(&self) -> bool {
        self.h == 0 && self.l == 0 && self.q == 0 && self.a.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Weight {
            h: self.h + o.h,
            a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect(),
            l: self.l + o.l,
            q: self.q + o.q,
        }
    }

    pub fn pow(&self, e: i32) -> Self {
        Weight { h: self.h * e, a: self.a.iter().map(|x| x * e).collect(), l: self.l * e, q: self.q * e as i64 }
    }

    /// Square root when every exponent is even.
    pub fn sqrt(&self) -> Result<Self> {
        let even = self.h % 2 == 0 && self.l % 2 == 0 && self.q % 2 == 0 && self.a.iter().all(|x| x % 2 == 0);
        if !even {
            return Err(Error::Domain(format!("character {self:?} has no square root")));
        }
        Ok(Weight { h: self.h / 2, a: self.a.iter().map(|x| x / 2).collect(), l: self.l / 2, q: self.q / 2 })
    }
}

fn a_inv_l(n: usize, i: usize, q: i64) -> Weight {
    let mut w = Weight::one(n);
    w.a[i] = -1;
    w.l = 1;
    w.q = q;
    w
}

fn hbar_inv_a_l_inv(n: usize, i: usize, q: i64) -> Weight {
    let mut w = Weight::one(n);
    w.h = -2;
    w.a[i] = 1;
    w.l = -1;
    w.q = q;
    w
}

/// `T_vir` at degree `d` as a list of `(weight, multiplicity)`, like terms merged.
pub fn virtual_tangent(spec: &TargetSpec, d: u32) -> Vec<(Weight, i32)> {
    let n = spec.n;
    let mut t: Vec<(Weight, i32)> = Vec::new();
    for i in 0..n {
        for j in 0..=d as i64 {
            t.push((a_inv_l(n, i, j), 1));
        }
    }
    for i in 0..n {
        if d == 0 {
            t.push((hbar_inv_a_l_inv(n, i, 0), 1));
        } else {
            for j in 1..d as i64 {
                t.push((hbar_inv_a_l_inv(n, i, -j), -1));
            }
        }
    }
    t.push((Weight::one(n), -1));
    let mut hb = Weight::one(n);
    hb.h = -2;
    t.push((hb, -1));
    let mut merged: std::collections::BTreeMap<Weight, i32> = Default::default();
    for (w, m) in t {
        *merged.entry(w).or_insert(0) += m;
    }
    merged.into_iter().filter(|(_, m)| *m != 0).collect()
}

/// Obstruction weights (the negative part of `T_vir` without the trivial character).
pub fn obstruction_weights(spec: &TargetSpec, d: u32) -> Vec<Weight> {
    let mut out = Vec::new();
    for (w, m) in virtual_tangent(spec, d) {
        if m < 0 && !w.is_trivial() {
            out.extend(std::iter::repeat_n(w, (-m) as usize));
        }
    }
    out
}

/// `K_vir = det(T_vir)^{-1}` as a character.
pub fn kvir_weight(spec: &TargetSpec, d: u32) -> Weight {
    virtual_tangent(spec, d).iter().fold(Weight::one(spec.n), |acc, (w, m)| acc.mul(&w.pow(-m)))
}

/// The twist `(K_vir q^{nd})^{1/2}`; `O_vir` times this is the symmetrized virtual sheaf.
pub fn ohat_weight(spec: &TargetSpec, d: u32) -> Result<Weight> {
    let mut k = kvir_weight(spec, d);
    k.q += spec.n as i64 * d as i64;
    k.sqrt()
}
