//! Fractions whose denominators are products of binomials `1 - c * x^m`.

use super::laurent::{mono_is_positive, mono_scale, LaurentPoly, Mono, VarRegistry};
use crate::cyclotomic::{CycElem, CycRing};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// The binomial `1 - c * x^m`, normalized so that `m` is lexicographically
/// positive and `c` is a unit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Binomial {
    mono: Mono,
    coeff: CycElem,
}

impl Binomial {
    /// Normalize `1 - c x^m` into `unit * binomial`, returning the unit as `(u, mono)`.
    pub fn normalized(c: &CycElem, m: &[i32]) -> Result<((CycElem, Mono), Binomial)> {
        if m.iter().all(|&e| e == 0) {
            return Err(Error::Domain(format!("binomial 1 - ({c}) has no variable part")));
        }
        let cinv = c
            .unit_inverse()
            .ok_or_else(|| Error::NotInvertible(format!("binomial coefficient {c} is not a unit")))?;
        if mono_is_positive(m) {
            Ok(((c.ring().one(), vec![0; m.len()]), Binomial { mono: m.to_vec(), coeff: c.clone() }))
        } else {
            // 1 - c x^m = (-c x^m) (1 - c^{-1} x^{-m})
            Ok(((c.neg(), m.to_vec()), Binomial { mono: mono_scale(m, -1), coeff: cinv }))
        }
    }

    pub fn mono(&self) -> &[i32] {
        &self.mono
    }

    pub fn coeff(&self) -> &CycElem {
        &self.coeff
    }

    /// The binomial as a polynomial.
    pub fn to_poly(&self, reg: &Arc<VarRegistry>) -> LaurentPoly {
        let one = LaurentPoly::one(reg, self.coeff.ring());
        one.sub(&LaurentPoly::term(reg, self.coeff.clone(), self.mono.clone()))
    }

    fn reduce_to(&self, target: &CycRing) -> Result<((CycElem, Mono), Binomial)> {
        Binomial::normalized(&self.coeff.reduce_to(target)?, &self.mono)
    }

    pub fn fmt_with(&self, reg: &Arc<VarRegistry>) -> String {
        format!("({})", self.to_poly(reg))
    }
}

/// `numerator / prod_b b^{mult}` with binomial denominators.
#[derive(Clone, Debug)]
pub struct FactoredRatFunc {
    num: LaurentPoly,
    den: BTreeMap<Binomial, u32>,
}

impl FactoredRatFunc {
    pub fn from_poly(p: LaurentPoly) -> Self {
        FactoredRatFunc { num: p, den: BTreeMap::new() }
    }

    pub fn zero(reg: &Arc<VarRegistry>, ring: &CycRing) -> Self {
        Self::from_poly(LaurentPoly::zero(reg, ring))
    }

    pub fn one(reg: &Arc<VarRegistry>, ring: &CycRing) -> Self {
        Self::from_poly(LaurentPoly::one(reg, ring))
    }

    /// Build `num / prod (1 - c_i x^{m_i})`, normalizing every factor.
    pub fn with_denominator(num: LaurentPoly, factors: &[(CycElem, Mono)]) -> Result<Self> {
        let reg = num.registry().clone();
        let mut out = FactoredRatFunc { num, den: BTreeMap::new() };
        for (c, m) in factors {
            let ((u, um), b) = Binomial::normalized(c, m)?;
            // 1/(u x^um b) = u^{-1} x^{-um} / b
            let ui = u.unit_inverse().ok_or_else(|| Error::NotInvertible(u.to_string()))?;
            out.num = out.num.mul(&LaurentPoly::term(&reg, ui, mono_scale(&um, -1)));
            *out.den.entry(b).or_insert(0) += 1;
        }
        Ok(out)
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<Binomial, u32> {
        &self.den
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        self.num.registry()
    }

    pub fn ring(&self) -> &CycRing {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// The numerator when the denominator is empty.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        self.den.is_empty().then_some(&self.num)
    }

    fn expand(reg: &Arc<VarRegistry>, ring: &CycRing, den: &BTreeMap<Binomial, u32>) -> LaurentPoly {
        let mut p = LaurentPoly::one(reg, ring);
        for (b, &e) in den {
            p = p.mul(&b.to_poly(reg).pow(e));
        }
        p
    }

    /// Denominator expanded as a polynomial.
    pub fn denominator_poly(&self) -> LaurentPoly {
        Self::expand(self.registry(), self.ring(), &self.den)
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let reg = self.registry();
        let ring = self.ring();
        let mut den = self.den.clone();
        let mut miss_self = BTreeMap::new();
        let mut miss_other = BTreeMap::new();
        for (b, &e) in &other.den {
            let mine = self.den.get(b).copied().unwrap_or(0);
            if e > mine {
                miss_self.insert(b.clone(), e - mine);
                den.insert(b.clone(), e);
            }
        }
        for (b, &e) in &self.den {
            let theirs = other.den.get(b).copied().unwrap_or(0);
            if e > theirs {
                miss_other.insert(b.clone(), e - theirs);
            }
        }
        let a = if miss_self.is_empty() { self.num.clone() } else { self.num.mul(&Self::expand(reg, ring, &miss_self)) };
        let b = if miss_other.is_empty() {
            other.num.clone()
        } else {
            other.num.mul(&Self::expand(reg, ring, &miss_other))
        };
        FactoredRatFunc { num: a.add(&b), den }
    }

    pub fn neg(&self) -> Self {
        FactoredRatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.registry(), self.ring());
        }
        let mut den = self.den.clone();
        for (b, &e) in &other.den {
            *den.entry(b.clone()).or_insert(0) += e;
        }
        FactoredRatFunc { num: self.num.mul(&other.num), den }
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        FactoredRatFunc { num: self.num.mul(p), den: self.den.clone() }
    }

    pub fn scale(&self, c: &CycElem) -> Self {
        FactoredRatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Inverse when the numerator is a unit monomial.
    pub fn inv(&self) -> Result<Self> {
        let (c, m) = self
            .num
            .as_monomial()
            .ok_or_else(|| Error::NotInvertible(format!("numerator {} is not a monomial", self.num)))?;
        let ci = c.unit_inverse().ok_or_else(|| Error::NotInvertible(c.to_string()))?;
        let reg = self.registry();
        let num = Self::expand(reg, self.ring(), &self.den).mul(&LaurentPoly::term(reg, ci, mono_scale(&m, -1)));
        Ok(FactoredRatFunc { num, den: BTreeMap::new() })
    }

    /// Divide by a product of binomial-type factors given in polynomial form
    /// `prod_i u_i x^{e_i} (1 - c_i x^{m_i})`.
    pub fn div_factors(&self, unit: (&CycElem, &[i32]), factors: &[(CycElem, Mono)]) -> Result<Self> {
        let ui = unit.0.unit_inverse().ok_or_else(|| Error::NotInvertible(unit.0.to_string()))?;
        let reg = self.registry().clone();
        let base = self.mul_poly(&LaurentPoly::term(&reg, ui, mono_scale(unit.1, -1)));
        let d = Self::with_denominator(LaurentPoly::one(&reg, self.ring()), factors)?;
        Ok(base.mul(&d))
    }

    /// Remove every denominator factor that divides the numerator exactly.
    pub fn cancel(&self) -> Self {
        let mut num = self.num.clone();
        let mut den = BTreeMap::new();
        if num.is_zero() {
            return FactoredRatFunc { num, den };
        }
        for (b, &e) in &self.den {
            let mut left = e;
            while left > 0 {
                match num.div_binomial(b) {
                    Some(qt) => {
                        num = qt;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                den.insert(b.clone(), left);
            }
        }
        FactoredRatFunc { num, den }
    }

    /// Equality by cross-multiplication over the common denominator.
    pub fn equals(&self, other: &Self) -> bool {
        self.sub(other).num.is_zero()
    }

    /// Reduce coefficients into a quotient ring (e.g. a CRT component).
    pub fn reduce_to(&self, target: &CycRing) -> Result<Self> {
        let reg = self.registry().clone();
        let mut num = self.num.reduce_to(target)?;
        let mut den: BTreeMap<Binomial, u32> = BTreeMap::new();
        for (b, &e) in &self.den {
            let ((u, um), nb) = b.reduce_to(target)?;
            if !u.is_one() || um.iter().any(|&x| x != 0) {
                let ui = u.unit_inverse().ok_or_else(|| Error::NotInvertible(u.to_string()))?;
                num = num.mul(&LaurentPoly::term(&reg, ui, mono_scale(&um, -1)).pow(e));
            }
            *den.entry(nb).or_insert(0) += e;
        }
        Ok(FactoredRatFunc { num, den })
    }

    /// Homomorphic substitution `x_i -> c * x^mono` in numerator and denominator.
    pub fn substitute_monomial(&self, i: usize, c: &CycElem, mono: &[i32]) -> Result<Self> {
        let reg = self.registry().clone();
        let mut out = FactoredRatFunc::from_poly(self.num.substitute_monomial(i, c, mono)?);
        for (b, &e) in &self.den {
            let t = LaurentPoly::term(&reg, b.coeff.clone(), b.mono.clone()).substitute_monomial(i, c, mono)?;
            let (tc, tm) = t.as_monomial().ok_or_else(|| Error::Domain("substitution produced a zero term".into()))?;
            let inv = if tm.iter().all(|&x| x == 0) {
                let u = self.ring().one().sub(&tc);
                let ui = u.unit_inverse().ok_or_else(|| Error::NotInvertible(format!("constant denominator {u}")))?;
                FactoredRatFunc::from_poly(LaurentPoly::constant(&reg, ui))
            } else {
                FactoredRatFunc::with_denominator(LaurentPoly::one(&reg, self.ring()), &[(tc, tm)])?
            };
            for _ in 0..e {
                out = out.mul(&inv);
            }
        }
        Ok(out)
    }

    /// Apply a map to the numerator that fixes every denominator factor.
    pub fn map_numerator(&self, f: impl FnOnce(&LaurentPoly) -> LaurentPoly) -> Self {
        FactoredRatFunc { num: f(&self.num), den: self.den.clone() }
    }

    /// Parts for callers that need to walk the structure.
    pub fn parts(&self) -> (&LaurentPoly, &BTreeMap<Binomial, u32>) {
        (&self.num, &self.den)
    }

    pub fn from_parts(num: LaurentPoly, den: BTreeMap<Binomial, u32>) -> Self {
        FactoredRatFunc { num, den }
    }
}

impl fmt::Display for FactoredRatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let reg = self.registry();
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(b, &e)| if e == 1 { b.fmt_with(reg) } else { format!("{}^{}", b.fmt_with(reg), e) })
            .collect();
        write!(f, "({})/({})", self.num, den.join("*"))
    }
}
