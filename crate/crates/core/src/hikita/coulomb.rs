//! The abelian quantized Coulomb algebra `Z[q^±][y^±]<x^±>/(y_i x_i = q x_i y_i)`.
//!
//! Elements are stored in normal form `sum_a f_a(y) x^a` with every `y` to the
//! left of every `x`. Moving `x^a` past `g(y)` uses `x^a g(y) = g(q^{-a} y) x^a`.

use super::data::HypertoricData;
use crate::cyclotomic::CycRing;
use crate::error::{Error, Result};
use crate::symbolic::{LaurentPoly, VarRegistry};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Registry `y_1..y_n, q` for Coulomb coefficients.
pub fn coulomb_registry(n: usize) -> Arc<VarRegistry> {
    let mut names: Vec<String> = (1..=n).map(|i| format!("y_{i}")).collect();
    names.push("q".into());
    VarRegistry::new(&names)
}

/// One letter of an unordered word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    /// `y_i^e` (0-based `i`).
    Y(usize, i32),
    /// `x_i^e` (0-based `i`).
    X(usize, i32),
    /// `q^e`.
    Q(i32),
    /// An integer scalar.
    Scalar(i64),
}

/// Element of the Coulomb algebra in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoulombWord {
    reg: Arc<VarRegistry>,
    n: usize,
    terms: BTreeMap<Vec<i32>, LaurentPoly>,
}

impl CoulombWord {
    pub fn zero(reg: &Arc<VarRegistry>) -> Self {
        CoulombWord { reg: reg.clone(), n: reg.len() - 1, terms: BTreeMap::new() }
    }

    /// `f(y)` with `x`-degree zero.
    pub fn scalar(f: LaurentPoly) -> Self {
        let reg = f.registry().clone();
        let n = reg.len() - 1;
        let mut w = Self::zero(&reg);
        if !f.is_zero() {
            w.terms.insert(vec![0; n], f);
        }
        w
    }

    pub fn one(reg: &Arc<VarRegistry>) -> Self {
        Self::scalar(LaurentPoly::one(reg, &CycRing::rationals()))
    }

    /// `x^a`.
    pub fn x_mono(reg: &Arc<VarRegistry>, a: Vec<i32>) -> Self {
        let mut w = Self::zero(reg);
        assert_eq!(a.len(), w.n, "x exponent length");
        w.terms.insert(a, LaurentPoly::one(reg, &CycRing::rationals()));
        w
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i32>, LaurentPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The `y`-polynomial when the word has `x`-degree zero.
    pub fn as_scalar(&self) -> Option<LaurentPoly> {
        match self.terms.len() {
            0 => Some(LaurentPoly::zero(&self.reg, &CycRing::rationals())),
            1 => self.terms.get(&vec![0; self.n]).cloned(),
            _ => None,
        }
    }

    /// Graded pieces present in the word.
    pub fn degrees(&self) -> Vec<Vec<i32>> {
        self.terms.keys().cloned().collect()
    }

    fn insert(&mut self, a: Vec<i32>, f: LaurentPoly) {
        let s = match self.terms.remove(&a) {
            Some(g) => g.add(&f),
            None => f,
        };
        if !s.is_zero() {
            self.terms.insert(a, s);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (a, f) in &o.terms {
            out.insert(a.clone(), f.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        CoulombWord { reg: self.reg.clone(), n: self.n, terms: self.terms.iter().map(|(a, f)| (a.clone(), f.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// `(f x^a)(g x^b) = f g(q^{-a} y) x^{a+b}`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let mut out = Self::zero(&self.reg);
        for (a, f) in &self.terms {
            for (b, g) in &o.terms {
                let shifted = shift_y(g, &a.iter().map(|e| -e).collect::<Vec<_>>())?;
                let ab: Vec<i32> = a.iter().zip(b).map(|(u, v)| u + v).collect();
                out.insert(ab, f.mul(&shifted));
            }
        }
        Ok(out)
    }

    /// Normal form of a product of letters taken left to right.
    pub fn from_letters(reg: &Arc<VarRegistry>, letters: &[Letter]) -> Result<Self> {
        let n = reg.len() - 1;
        let ring = CycRing::rationals();
        let mut acc = Self::one(reg);
        for l in letters {
            let w = match *l {
                Letter::Y(i, e) => Self::scalar(LaurentPoly::var_idx(reg, &ring, check(i, n)?, e)),
                Letter::Q(e) => Self::scalar(LaurentPoly::var_idx(reg, &ring, n, e)),
                Letter::Scalar(c) => Self::scalar(LaurentPoly::int(reg, &ring, c)),
                Letter::X(i, e) => {
                    let mut a = vec![0; n];
                    a[check(i, n)?] = e;
                    Self::x_mono(reg, a)
                }
            };
            acc = acc.mul(&w)?;
        }
        Ok(acc)
    }
}

fn check(i: usize, n: usize) -> Result<usize> {
    if i < n {
        Ok(i)
    } else {
        Err(Error::IndexOutOfRange(format!("coordinate {i} not below {n}")))
    }
}

/// `y_i -> q^{s_i} y_i` in a coefficient polynomial over registry `y_1..y_n, q`.
pub fn shift_y(f: &LaurentPoly, s: &[i32]) -> Result<LaurentPoly> {
    let reg = f.registry();
    let n = reg.len() - 1;
    let one = f.ring().one();
    let mut out = f.clone();
    for (i, &e) in s.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let mut m = vec![0; n + 1];
        m[i] = 1;
        m[n] = e;
        out = out.substitute_monomial(i, &one, &m)?;
    }
    Ok(out)
}

/// Normal form (the representation is always normal; zero terms are dropped).
pub fn coulomb_normal_form(word: &CoulombWord) -> CoulombWord {
    let mut out = CoulombWord::zero(&word.reg);
    for (a, f) in &word.terms {
        out.insert(a.clone(), f.clone());
    }
    out
}

/// Dressed generator `x_d = prod_i x_{i, d_i}` with
/// `x_{i,d} = prod_{j=0}^{r_i d - 1} (1 - y_i / q^j) x_i^d` for `d > 0` and `x_i^d` otherwise.
pub fn x_generator(d: &[i32], data: &HypertoricData) -> Result<CoulombWord> {
    let n = data.n();
    if d.len() != n {
        return Err(Error::IndexOutOfRange(format!("degree vector of length {} for n = {n}", d.len())));
    }
    let reg = coulomb_registry(n);
    let ring = CycRing::rationals();
    let mut f = LaurentPoly::one(&reg, &ring);
    for (i, &di) in d.iter().enumerate() {
        if di > 0 {
            let top = data.weights()[i] as i32 * di;
            for j in 0..top {
                let mut m = vec![0; n + 1];
                m[i] = 1;
                m[n] = -j;
                f = f.mul(&LaurentPoly::one(&reg, &ring).sub(&LaurentPoly::term(&reg, ring.one(), m)));
            }
        }
    }
    CoulombWord::scalar(f).mul(&CoulombWord::x_mono(&reg, d.to_vec()))
}

impl fmt::Display for CoulombWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, c)| {
                let xs: Vec<String> = a
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(i, &e)| if e == 1 { format!("x_{}", i + 1) } else { format!("x_{}^{e}", i + 1) })
                    .collect();
                if xs.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", xs.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
