//! Exact arithmetic in `Z[q]/(q^k - 1)` and its cyclotomic components `Q[q]/Phi_m(q)`.
//!
//! - [`cyclotomic_poly`]: integer coefficients of `Phi_m`
//! - [`CycRing`] / [`CycElem`]: coefficient scalars for everything downstream
//! - [`crt_split`] / [`crt_join`]: the decomposition over divisors `m | k`
//! - [`EisensteinElem`]: elements of `Q[w]/Phi_p(1 + w)` with the `w`-adic valuation

mod eisenstein;

pub use eisenstein::{is_prime, EisensteinElem};

use crate::error::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// Dense integer polynomial helpers, ascending coefficients.
pub(crate) mod intpoly {
    /// Exact division by a monic polynomial; `None` if the remainder is nonzero.
    pub fn div_exact(a: &[i64], b: &[i64]) -> Option<Vec<i64>> {
        let db = b.len() - 1;
        assert_eq!(b[db], 1, "divisor must be monic");
        if a.len() < b.len() {
            return if a.iter().all(|&c| c == 0) { Some(Vec::new()) } else { None };
        }
        let mut rem = a.to_vec();
        let mut quo = vec![0i64; a.len() - db];
        for i in (0..quo.len()).rev() {
            let c = rem[i + db];
            quo[i] = c;
            if c != 0 {
                for (j, &bj) in b.iter().enumerate() {
                    rem[i + j] -= c * bj;
                }
            }
        }
        if rem.iter().all(|&c| c == 0) {
            Some(trim(quo))
        } else {
            None
        }
    }

    /// Drop trailing zero coefficients.
    pub fn trim(mut v: Vec<i64>) -> Vec<i64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }
}

/// Divisors of `m` in increasing order.
pub fn divisors(m: u32) -> Vec<u32> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

/// The `m`-th cyclotomic polynomial, ascending integer coefficients.
///
/// Computed by dividing `q^m - 1` by `Phi_d` for every proper divisor `d`.
pub fn cyclotomic_poly(m: u32) -> Vec<i64> {
    assert!(m >= 1, "cyclotomic_poly: m must be positive");
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in divisors(m) {
        if d < m {
            num = intpoly::div_exact(&num, &cyclotomic_poly(d))
                .expect("Phi_d divides q^m - 1 for d | m");
        }
    }
    num
}

/// Which quotient of `Q[q]` a ring represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// `Z[q]/(q^k - 1)`.
    Full,
    /// `Q[q]/Phi_m(q)` for `m | k`.
    Component(u32),
}

#[derive(Debug, PartialEq, Eq)]
struct RingInner {
    k: u32,
    mode: Mode,
    modulus: Vec<i64>,
}

/// Coefficient ring: either the full group ring of `mu_k` or one cyclotomic component.
#[derive(Clone, Debug)]
pub struct CycRing(Arc<RingInner>);

impl PartialEq for CycRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.k == other.0.k && self.0.mode == other.0.mode)
    }
}
impl Eq for CycRing {}

impl CycRing {
    /// The full ring `Z[q]/(q^k - 1)`.
    pub fn full(k: u32) -> Self {
        assert!(k >= 1, "CycRing: k must be positive");
        let mut modulus = vec![0i64; k as usize + 1];
        modulus[0] = -1;
        modulus[k as usize] = 1;
        CycRing(Arc::new(RingInner { k, mode: Mode::Full, modulus }))
    }

    /// The component `Q[q]/Phi_m(q)` of `Z[q]/(q^k - 1)`; requires `m | k`.
    pub fn component(k: u32, m: u32) -> Result<Self> {
        if k == 0 || m == 0 || !k.is_multiple_of(m) {
            return Err(Error::Domain(format!("component m={m} does not divide k={k}")));
        }
        Ok(CycRing(Arc::new(RingInner { k, mode: Mode::Component(m), modulus: cyclotomic_poly(m) })))
    }

    /// The rationals, realized as `Z[q]/(q - 1)` with rational coefficients.
    pub fn rationals() -> Self {
        Self::full(1)
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn mode(&self) -> Mode {
        self.0.mode
    }

    /// Order of `q` in this ring (`k` in full mode, `m` in component mode).
    pub fn q_order(&self) -> u32 {
        match self.0.mode {
            Mode::Full => self.0.k,
            Mode::Component(m) => m,
        }
    }

    /// Monic modulus polynomial.
    pub fn modulus(&self) -> &[i64] {
        &self.0.modulus
    }

    /// Degree of the modulus, the length of every coefficient vector.
    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn is_field(&self) -> bool {
        matches!(self.0.mode, Mode::Component(_)) || self.0.k == 1
    }

    pub fn zero(&self) -> CycElem {
        CycElem { ring: self.clone(), c: vec![BigRational::zero(); self.degree()] }
    }

    pub fn one(&self) -> CycElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> CycElem {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(&self, r: BigRational) -> CycElem {
        let mut e = self.zero();
        e.c[0] = r;
        e
    }

    /// `q^j` for any integer `j`.
    pub fn q_pow(&self, j: i64) -> CycElem {
        let ord = self.q_order() as i64;
        let j = j.rem_euclid(ord) as usize;
        let mut raw = vec![BigRational::zero(); j + 1];
        raw[j] = BigRational::one();
        self.reduce(raw)
    }

    /// Element from ascending rational coefficients of any length.
    pub fn from_coeffs(&self, coeffs: Vec<BigRational>) -> CycElem {
        self.reduce(coeffs)
    }

    /// Element from ascending integer coefficients of any length.
    pub fn from_ints(&self, coeffs: &[i64]) -> CycElem {
        self.reduce(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    fn reduce(&self, mut raw: Vec<BigRational>) -> CycElem {
        let deg = self.degree();
        match self.0.mode {
            Mode::Full => {
                let k = self.0.k as usize;
                let mut c = vec![BigRational::zero(); k];
                for (i, v) in raw.into_iter().enumerate() {
                    if !v.is_zero() {
                        c[i % k] += v;
                    }
                }
                CycElem { ring: self.clone(), c }
            }
            Mode::Component(_) => {
                let md = &self.0.modulus;
                if raw.len() > deg {
                    for i in (deg..raw.len()).rev() {
                        let lead = std::mem::take(&mut raw[i]);
                        if lead.is_zero() {
                            continue;
                        }
                        for (j, &mj) in md.iter().enumerate().take(deg) {
                            if mj != 0 {
                                raw[i - deg + j] -= &lead * BigInt::from(mj);
                            }
                        }
                    }
                    raw.truncate(deg);
                }
                raw.resize(deg, BigRational::zero());
                CycElem { ring: self.clone(), c: raw }
            }
        }
    }

    /// Parse the canonical text form, e.g. `"1 - 2*q + q^2"`.
    pub fn parse(&self, s: &str) -> Result<CycElem> {
        crate::symbolic::parse::parse_cyc(s, self)
    }
}

impl fmt::Display for CycRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.mode {
            Mode::Full => write!(f, "Z[q]/(q^{} - 1)", self.0.k),
            Mode::Component(m) => write!(f, "Q[q]/Phi_{}(q)", m),
        }
    }
}

/// Element of a [`CycRing`]: the unique remainder modulo the ring's modulus.
#[derive(Clone, Debug)]
pub struct CycElem {
    ring: CycRing,
    c: Vec<BigRational>,
}

impl PartialEq for CycElem {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.c == other.c
    }
}
impl Eq for CycElem {}

impl PartialOrd for CycElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for CycElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.cmp(&other.c)
    }
}

impl CycElem {
    pub fn ring(&self) -> &CycRing {
        &self.ring
    }

    /// Ascending coefficients of the reduced representative.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|c| c.is_integer())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(self.ring == other.ring);
        let c = self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect();
        CycElem { ring: self.ring.clone(), c }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert!(self.ring == other.ring);
        let c = self.c.iter().zip(&other.c).map(|(a, b)| a - b).collect();
        CycElem { ring: self.ring.clone(), c }
    }

    pub fn neg(&self) -> Self {
        CycElem { ring: self.ring.clone(), c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert!(self.ring == other.ring);
        let deg = self.c.len();
        if deg == 1 {
            return CycElem { ring: self.ring.clone(), c: vec![&self.c[0] * &other.c[0]] };
        }
        let mut raw = vec![BigRational::zero(); 2 * deg - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        self.ring.reduce(raw)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycElem { ring: self.ring.clone(), c: self.c.iter().map(|a| a * r).collect() }
    }

    /// Non-negative power.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// If the element is `c * q^j` with a single nonzero coefficient, return `(c, j)`.
    pub fn as_scaled_q_power(&self) -> Option<(BigRational, usize)> {
        let mut it = self.c.iter().enumerate().filter(|(_, c)| !c.is_zero());
        let (j, c) = it.next()?;
        if it.next().is_some() {
            return None;
        }
        Some((c.clone(), j))
    }

    /// Inverse when the element is a unit that can be found without division
    /// in a ring with zero divisors: `c * q^j` in full mode, anything nonzero
    /// in a field.
    pub fn unit_inverse(&self) -> Option<Self> {
        if let Some((c, j)) = self.as_scaled_q_power() {
            let qi = self.ring.q_pow(-(j as i64));
            return Some(qi.scale(&c.recip()));
        }
        if self.ring.is_field() {
            self.inv().ok()
        } else {
            None
        }
    }

    /// Multiplicative inverse in a component field.
    ///
    /// Full mode has zero divisors and is rejected: route division through
    /// [`crt_split`] instead.
    pub fn inv(&self) -> Result<Self> {
        if !self.ring.is_field() {
            return Err(Error::Domain(
                "inverse requested in full mode Z[q]/(q^k-1); use CRT components".into(),
            ));
        }
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let deg = self.ring.degree();
        if deg == 1 {
            return Ok(self.ring.from_rational(self.c[0].recip()));
        }
        let modulus: Vec<BigRational> =
            self.ring.modulus().iter().map(|&m| BigRational::from_integer(m.into())).collect();
        let (g, s) = rat_poly::ext_gcd_inverse(&self.c, &modulus);
        if g.len() != 1 {
            return Err(Error::DivisionByZero);
        }
        let ginv = g[0].recip();
        Ok(self.ring.from_coeffs(s.into_iter().map(|c| c * &ginv).collect()))
    }

    /// Reduce into another ring whose modulus divides this one's
    /// (full mode of `k` to any component `m | k`, or identity).
    pub fn reduce_to(&self, target: &CycRing) -> Result<Self> {
        let src = self.ring.k();
        let ok = self.ring == *target
            || (self.ring.mode() == Mode::Full
                && match target.mode() {
                    Mode::Component(m) => src.is_multiple_of(m),
                    Mode::Full => src.is_multiple_of(target.k()),
                });
        if !ok {
            return Err(Error::RingMismatch(self.ring.to_string(), target.to_string()));
        }
        Ok(target.from_coeffs(self.c.clone()))
    }

    /// Substitute `q -> q^e` (a ring endomorphism of the full ring for any `e`,
    /// and of a component when `gcd(e, m) = 1`).
    pub fn frobenius(&self, e: i64) -> Self {
        let ord = self.ring.q_order() as i64;
        let mut raw = vec![BigRational::zero(); ord as usize];
        for (j, c) in self.c.iter().enumerate() {
            if !c.is_zero() {
                raw[(j as i64 * e).rem_euclid(ord) as usize] += c;
            }
        }
        self.ring.reduce(raw)
    }
}

impl fmt::Display for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let qpart = match j {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{j}"),
            };
            if j == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{qpart}")?;
            } else {
                write!(f, "{a}*{qpart}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Dense rational polynomial helpers used by inversion and CRT.
pub(crate) mod rat_poly {
    use num::{BigRational, Zero};

    pub fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
        while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        if v.is_empty() {
            v.push(BigRational::zero());
        }
        v
    }

    fn deg(v: &[BigRational]) -> Option<usize> {
        v.iter().rposition(|c| !c.is_zero())
    }

    pub fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    pub fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len().max(b.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, y) in b.iter().enumerate() {
            out[i] -= y;
        }
        trim(out)
    }

    /// Quotient and remainder.
    pub fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let db = deg(b).expect("division by zero polynomial");
        let mut rem = a.to_vec();
        let Some(da) = deg(&rem) else {
            return (vec![BigRational::zero()], rem);
        };
        if da < db {
            return (vec![BigRational::zero()], trim(rem));
        }
        let mut quo = vec![BigRational::zero(); da - db + 1];
        let lead = b[db].clone();
        for i in (0..=da - db).rev() {
            let c = &rem[i + db] / &lead;
            if !c.is_zero() {
                for (j, bj) in b.iter().enumerate().take(db + 1) {
                    rem[i + j] -= &c * bj;
                }
            }
            quo[i] = c;
        }
        (trim(quo), trim(rem))
    }

    /// Returns `(g, s)` with `s * a = g (mod m)` and `g = gcd(a, m)`.
    pub fn ext_gcd_inverse(a: &[BigRational], m: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let (mut r0, mut r1) = (m.to_vec(), trim(a.to_vec()));
        let (mut s0, mut s1) = (vec![BigRational::zero()], vec![num::One::one()]);
        while deg(&r1).is_some() {
            let (qt, r) = divrem(&r0, &r1);
            let s = sub(&s0, &mul(&qt, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        (trim(r0), s0)
    }
}

/// Split a full-mode element into its components `m | k`.
///
/// The entry at `m = k` is the `q = zeta_k` specialization.
pub fn crt_split(x: &CycElem) -> Result<Vec<(u32, CycElem)>> {
    if x.ring().mode() != Mode::Full {
        return Err(Error::Domain("crt_split expects a full-mode element".into()));
    }
    let k = x.ring().k();
    divisors(k)
        .into_iter()
        .map(|m| Ok((m, x.reduce_to(&CycRing::component(k, m)?)?)))
        .collect()
}

/// Reassemble a full-mode element (rational coefficients) from its components.
pub fn crt_join(k: u32, parts: &[(u32, CycElem)]) -> Result<CycElem> {
    let full = CycRing::full(k);
    let qk: Vec<i64> = full.modulus().to_vec();
    let mut acc = full.zero();
    for m in divisors(k) {
        let (_, xm) = parts
            .iter()
            .find(|(mm, _)| *mm == m)
            .ok_or_else(|| Error::Domain(format!("missing CRT component m={m}")))?;
        let comp = CycRing::component(k, m)?;
        if xm.ring() != &comp {
            return Err(Error::RingMismatch(xm.ring().to_string(), comp.to_string()));
        }
        let cofactor = intpoly::div_exact(&qk, &cyclotomic_poly(m)).expect("Phi_m | q^k - 1");
        let g_full = full.from_ints(&cofactor);
        let g_comp = comp.from_ints(&cofactor);
        let idem_comp = g_comp.inv()?.mul(xm);
        let lift = full.from_coeffs(idem_comp.coeffs().to_vec());
        acc = acc.add(&g_full.mul(&lift));
    }
    Ok(acc)
}
