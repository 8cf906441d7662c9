//! Multivariate Laurent polynomials over [`CycElem`].

use crate::cyclotomic::{CycElem, CycRing};
use crate::error::{Error, Result};
use num::BigRational;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Ordered, immutable list of variable names shared by a family of polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarRegistry {
    names: Vec<String>,
}

impl VarRegistry {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Arc<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, a) in names.iter().enumerate() {
            assert!(!names[..i].contains(a), "duplicate variable name {a}");
        }
        Arc::new(VarRegistry { names })
    }

    /// Registry for the quasimap engine: `h, a_1..a_n, L, x`.
    pub fn quasimap(n: usize) -> Arc<Self> {
        let mut names = vec!["h".to_string()];
        names.extend((1..=n).map(|i| format!("a_{i}")));
        names.push("L".into());
        names.push("x".into());
        Self::new(&names)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// Index of a variable; accepts `a1` as an alias of `a_1`.
    pub fn index(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Some(i);
        }
        let alias = alias_name(name)?;
        self.names.iter().position(|n| *n == alias)
    }

    pub fn expect(&self, name: &str) -> usize {
        self.index(name).unwrap_or_else(|| panic!("unknown variable {name}"))
    }

    /// A new registry with extra names appended.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Arc<Self> {
        let mut names = self.names.clone();
        names.extend(extra.iter().map(|s| s.as_ref().to_string()));
        Self::new(&names)
    }
}

fn alias_name(name: &str) -> Option<String> {
    let letters: String = name.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
    let rest = &name[letters.len()..];
    if !letters.is_empty() && !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
        Some(format!("{letters}_{rest}"))
    } else {
        None
    }
}

/// Dense exponent vector indexed by the registry.
pub type Mono = Vec<i32>;

/// Laurent polynomial: a finite map from exponent vectors to nonzero coefficients.
#[derive(Clone, Debug)]
pub struct LaurentPoly {
    reg: Arc<VarRegistry>,
    ring: CycRing,
    terms: BTreeMap<Mono, CycElem>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.reg == other.reg && self.terms == other.terms
    }
}
impl Eq for LaurentPoly {}

/// `true` when the exponent vector is greater than zero in lexicographic order.
pub fn mono_is_positive(m: &[i32]) -> bool {
    m.iter().find(|&&e| e != 0).is_some_and(|&e| e > 0)
}

pub fn mono_add(a: &[i32], b: &[i32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn mono_sub(a: &[i32], b: &[i32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn mono_scale(a: &[i32], s: i32) -> Mono {
    a.iter().map(|x| x * s).collect()
}

impl LaurentPoly {
    pub fn zero(reg: &Arc<VarRegistry>, ring: &CycRing) -> Self {
        LaurentPoly { reg: reg.clone(), ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(reg: &Arc<VarRegistry>, c: CycElem) -> Self {
        let mut p = Self::zero(reg, c.ring());
        if !c.is_zero() {
            p.terms.insert(vec![0; reg.len()], c);
        }
        p
    }

    pub fn one(reg: &Arc<VarRegistry>, ring: &CycRing) -> Self {
        Self::constant(reg, ring.one())
    }

    pub fn int(reg: &Arc<VarRegistry>, ring: &CycRing, n: i64) -> Self {
        Self::constant(reg, ring.from_int(n))
    }

    /// Single term `c * x^mono`.
    pub fn term(reg: &Arc<VarRegistry>, c: CycElem, mono: Mono) -> Self {
        assert_eq!(mono.len(), reg.len());
        let mut p = Self::zero(reg, c.ring());
        if !c.is_zero() {
            p.terms.insert(mono, c);
        }
        p
    }

    /// The variable `name` to the power `e`.
    pub fn var(reg: &Arc<VarRegistry>, ring: &CycRing, name: &str, e: i32) -> Result<Self> {
        let i = reg.index(name).ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
        let mut m = vec![0; reg.len()];
        m[i] = e;
        Ok(Self::term(reg, ring.one(), m))
    }

    /// Same as [`LaurentPoly::var`] for a known index.
    pub fn var_idx(reg: &Arc<VarRegistry>, ring: &CycRing, i: usize, e: i32) -> Self {
        let mut m = vec![0; reg.len()];
        m[i] = e;
        Self::term(reg, ring.one(), m)
    }

    /// `c * q^j` as a constant polynomial.
    pub fn q_pow(reg: &Arc<VarRegistry>, ring: &CycRing, j: i64) -> Self {
        Self::constant(reg, ring.q_pow(j))
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn ring(&self) -> &CycRing {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Mono, CycElem> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Mono, CycElem> {
        self.terms
    }

    pub fn from_terms(reg: &Arc<VarRegistry>, ring: &CycRing, terms: BTreeMap<Mono, CycElem>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        LaurentPoly { reg: reg.clone(), ring: ring.clone(), terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.iter().all(|&e| e == 0) && c.is_one())
    }

    /// Coefficient of the trivial monomial.
    pub fn constant_term(&self) -> CycElem {
        self.terms.get(&vec![0; self.reg.len()]).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Coefficient of one monomial.
    pub fn coeff(&self, m: &[i32]) -> CycElem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    fn same(&self, other: &Self) {
        assert!(self.ring == other.ring, "ring mismatch: {} vs {}", self.ring, other.ring);
        assert!(
            Arc::ptr_eq(&self.reg, &other.reg) || self.reg == other.reg,
            "registry mismatch: {:?} vs {:?}",
            self.reg.names(),
            other.reg.names()
        );
    }

    fn add_term(terms: &mut BTreeMap<Mono, CycElem>, m: Mono, c: CycElem) {
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same(other);
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            Self::add_term(&mut terms, m.clone(), c.clone());
        }
        LaurentPoly { reg: self.reg.clone(), ring: self.ring.clone(), terms }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.same(other);
        for (m, c) in &other.terms {
            Self::add_term(&mut self.terms, m.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        LaurentPoly { reg: self.reg.clone(), ring: self.ring.clone(), terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same(other);
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                Self::add_term(&mut terms, mono_add(m1, m2), c1.mul(c2));
            }
        }
        LaurentPoly { reg: self.reg.clone(), ring: self.ring.clone(), terms }
    }

    /// Multiply by a single term `c * x^m`.
    pub fn mul_term(&self, c: &CycElem, m: &[i32]) -> Self {
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            let v = c1.mul(c);
            if !v.is_zero() {
                terms.insert(mono_add(m1, m), v);
            }
        }
        LaurentPoly { reg: self.reg.clone(), ring: self.ring.clone(), terms }
    }

    pub fn scale(&self, c: &CycElem) -> Self {
        self.mul_term(c, &vec![0; self.reg.len()])
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.reg, &self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Integer power; negative powers need a unit monomial.
    pub fn pow_i(&self, e: i32) -> Result<Self> {
        if e >= 0 {
            return Ok(self.pow(e as u32));
        }
        let (c, m) = self
            .as_monomial()
            .ok_or_else(|| Error::NotInvertible(format!("negative power of non-monomial {self}")))?;
        let ci = c.unit_inverse().ok_or_else(|| Error::NotInvertible(format!("{c}")))?;
        Ok(Self::term(&self.reg, ci, mono_scale(&m, -1)).pow((-e) as u32))
    }

    /// `Some((c, m))` when the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(CycElem, Mono)> {
        if self.terms.len() != 1 {
            return None;
        }
        self.terms.iter().next().map(|(m, c)| (c.clone(), m.clone()))
    }

    /// Smallest and largest exponent of variable `i`.
    pub fn var_range(&self, i: usize) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|m| m[i]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    /// Expand in powers of variable `i`: map from exponent to coefficient polynomial.
    pub fn collect_in(&self, i: usize) -> BTreeMap<i32, LaurentPoly> {
        let mut out: BTreeMap<i32, BTreeMap<Mono, CycElem>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut mm = m.clone();
            let e = mm[i];
            mm[i] = 0;
            out.entry(e).or_default().insert(mm, c.clone());
        }
        out.into_iter()
            .map(|(e, t)| (e, LaurentPoly { reg: self.reg.clone(), ring: self.ring.clone(), terms: t }))
            .collect()
    }

    /// True when variable `i` does not occur.
    pub fn free_of(&self, i: usize) -> bool {
        self.terms.keys().all(|m| m[i] == 0)
    }

    /// Homomorphic substitution `x_i -> c * x^mono` (the image must not involve `x_i`).
    pub fn substitute_monomial(&self, i: usize, c: &CycElem, mono: &[i32]) -> Result<Self> {
        let needs_inv = self.terms.keys().any(|m| m[i] < 0);
        let cinv = if needs_inv {
            Some(c.unit_inverse().ok_or_else(|| {
                Error::NotInvertible(format!("substitution coefficient {c} against negative powers"))
            })?)
        } else {
            None
        };
        let mut terms = BTreeMap::new();
        for (m, coef) in &self.terms {
            let e = m[i];
            let mut mm = m.clone();
            mm[i] = 0;
            for (v, &me) in mm.iter_mut().zip(mono) {
                *v += e * me;
            }
            let f = if e >= 0 { c.pow(e as u32) } else { cinv.as_ref().unwrap().pow((-e) as u32) };
            Self::add_term(&mut terms, mm, coef.mul(&f));
        }
        Ok(LaurentPoly { reg: self.reg.clone(), ring: self.ring.clone(), terms })
    }

    /// Substitution `x_i -> p` for an arbitrary polynomial `p` (negative powers need `p` a unit monomial).
    pub fn substitute_poly(&self, i: usize, p: &LaurentPoly) -> Result<Self> {
        if let Some((c, m)) = p.as_monomial() {
            return self.substitute_monomial(i, &c, &m);
        }
        let by_power = self.collect_in(i);
        let mut out = Self::zero(&self.reg, &self.ring);
        let mut cache: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        for (e, coef) in by_power {
            if e < 0 {
                return Err(Error::NotInvertible(format!("negative power under substitution by {p}")));
            }
            let pe = cache.entry(e).or_insert_with(|| p.pow(e as u32)).clone();
            out.add_assign(&coef.mul(&pe));
        }
        Ok(out)
    }

    /// Remove variable `i` from the coefficient side by setting it to 1.
    pub fn set_one(&self, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut mm = m.clone();
            mm[i] = 0;
            Self::add_term(&mut terms, mm, c.clone());
        }
        LaurentPoly { reg: self.reg.clone(), ring: self.ring.clone(), terms }
    }

    /// Reduce every coefficient into `target` (a quotient of the current ring).
    pub fn reduce_to(&self, target: &CycRing) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let r = c.reduce_to(target)?;
            if !r.is_zero() {
                terms.insert(m.clone(), r);
            }
        }
        Ok(LaurentPoly { reg: self.reg.clone(), ring: target.clone(), terms })
    }

    /// Coefficients mapped by `f` into `target`.
    pub fn map_coeffs(&self, target: &CycRing, f: impl Fn(&CycElem) -> CycElem) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            Self::add_term(&mut terms, m.clone(), f(c));
        }
        LaurentPoly { reg: self.reg.clone(), ring: target.clone(), terms }
    }

    /// Treat variable `i` as `q` and fold it into coefficients of `target`.
    ///
    /// Coefficients must lie in the rationals (`k = 1` ring).
    pub fn absorb_q(&self, i: usize, target: &CycRing) -> Result<Self> {
        if self.ring.degree() != 1 {
            return Err(Error::Domain("absorb_q expects rational coefficients".into()));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut mm = m.clone();
            let e = mm[i];
            mm[i] = 0;
            let v = target.q_pow(e as i64).scale(&c.coeffs()[0]);
            Self::add_term(&mut terms, mm, v);
        }
        Ok(LaurentPoly { reg: self.reg.clone(), ring: target.clone(), terms })
    }

    /// Move to another registry containing every variable that occurs.
    pub fn rebase(&self, reg: &Arc<VarRegistry>) -> Result<Self> {
        let map: Vec<Option<usize>> = self.reg.names().iter().map(|n| reg.index(n)).collect();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut mm = vec![0; reg.len()];
            for (i, &e) in m.iter().enumerate() {
                if e != 0 {
                    let j = map[i].ok_or_else(|| {
                        Error::Domain(format!("variable {} missing from target registry", self.reg.name(i)))
                    })?;
                    mm[j] += e;
                }
            }
            Self::add_term(&mut terms, mm, c.clone());
        }
        Ok(LaurentPoly { reg: reg.clone(), ring: self.ring.clone(), terms })
    }

    /// Evaluate every variable at a nonzero rational, leaving a coefficient.
    pub fn eval_at(&self, point: &[BigRational]) -> Result<CycElem> {
        assert_eq!(point.len(), self.reg.len());
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            let mut v = num::One::one();
            for (&e, x) in m.iter().zip(point) {
                if e != 0 {
                    if num::Zero::is_zero(x) {
                        return Err(Error::DivisionByZero);
                    }
                    let xe: BigRational = num::pow::pow(x.clone(), e.unsigned_abs() as usize);
                    v = if e > 0 { v * xe } else { v / xe };
                }
            }
            acc = acc.add(&c.scale(&v));
        }
        Ok(acc)
    }

    /// Exact division by the binomial `1 - c * x^m` (`m` lexicographically positive, `c` a unit).
    ///
    /// Returns `None` when the division is not exact.
    pub fn div_binomial(&self, b: &super::Binomial) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let nv = self.reg.len();
        let m = b.mono();
        let cinv = b.coeff().unit_inverse()?;
        // Bounding box for quotient exponents from the Newton polytope identity.
        let mut lo = vec![i32::MAX; nv];
        let mut hi = vec![i32::MIN; nv];
        for mono in self.terms.keys() {
            for v in 0..nv {
                lo[v] = lo[v].min(mono[v]);
                hi[v] = hi[v].max(mono[v]);
            }
        }
        for v in 0..nv {
            lo[v] -= m[v].min(0);
            hi[v] -= m[v].max(0);
            if lo[v] > hi[v] {
                return None;
            }
        }
        let mut rem = self.terms.clone();
        let mut quo: BTreeMap<Mono, CycElem> = BTreeMap::new();
        while let Some((top, t)) = rem.pop_last() {
            let qm = mono_sub(&top, m);
            if (0..nv).any(|v| qm[v] < lo[v] || qm[v] > hi[v]) {
                return None;
            }
            // Leading term of b is -c x^m, so the quotient coefficient is -t / c.
            let qc = t.mul(&cinv).neg();
            // rem -= qc x^qm (1 - c x^m); the top term cancels by construction.
            Self::add_term(&mut rem, qm.clone(), qc.neg());
            quo.insert(qm, qc);
        }
        Some(LaurentPoly { reg: self.reg.clone(), ring: self.ring.clone(), terms: quo })
    }

    /// Sparse `(name, exponent)` key used for canonical ordering and printing.
    fn sparse_key(&self, m: &[i32]) -> Vec<(String, i32)> {
        let mut k: Vec<(String, i32)> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (self.reg.name(i).to_string(), e))
            .collect();
        k.sort();
        k
    }

    /// Terms in canonical order: lexicographic by `(variable name, exponent)`.
    pub fn canonical_terms(&self) -> Vec<(&Mono, &CycElem)> {
        let mut v: Vec<(Vec<(String, i32)>, &Mono, &CycElem)> =
            self.terms.iter().map(|(m, c)| (self.sparse_key(m), m, c)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v.into_iter().map(|(_, m, c)| (m, c)).collect()
    }

    pub fn fmt_mono(&self, m: &[i32]) -> String {
        self.sparse_key(m)
            .into_iter()
            .map(|(n, e)| if e == 1 { n } else { format!("{n}^{e}") })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Substitute several variables by polynomials with nonnegative exponents.
    pub fn substitute_many(&self, subs: &[(usize, LaurentPoly)]) -> Result<Self> {
        let mut p = self.clone();
        for (i, s) in subs {
            p = p.substitute_poly(*i, s)?;
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.canonical_terms() {
            let ms = self.fmt_mono(m);
            let (neg, body) = fmt_coeff_times(c, &ms);
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

/// Render `c * mono` as `(sign, unsigned text)` for term-by-term printing.
pub(crate) fn fmt_coeff_times(c: &CycElem, ms: &str) -> (bool, String) {
    use num::{One, Signed};
    if let Some((r, j)) = c.as_scaled_q_power() {
        let neg = r.is_negative();
        let a = r.abs();
        let mut parts = Vec::new();
        if !a.is_one() || (j == 0 && ms.is_empty()) {
            parts.push(a.to_string());
        }
        match j {
            0 => {}
            1 => parts.push("q".into()),
            _ => parts.push(format!("q^{j}")),
        }
        if !ms.is_empty() {
            parts.push(ms.to_string());
        }
        return (neg, parts.join("*"));
    }
    let cs = format!("({c})");
    if ms.is_empty() {
        (false, cs)
    } else {
        (false, format!("{cs}*{ms}"))
    }
}
