//! Elements of `Q[w]/Phi_p(1 + w)` where `w` stands for `zeta_p - 1`.
//!
//! `Phi_p(1 + w)` is Eisenstein at `p`, so `w` is a uniformizer above `p`
//! and `w^{p-1}` equals `p` times a unit. For an element written as
//! `sum_{i < p-1} d_i w^i` with rational digits the terms `d_i w^i` have
//! pairwise distinct valuations `i + (p-1) v_p(d_i)`, so the valuation is their
//! minimum and no carrying is needed.

use super::{cyclotomic_poly, CycElem, CycRing, Mode};
use crate::error::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;

/// Element of `Q[w]/Phi_p(1 + w)` with digits in the basis `1, w, ..., w^{p-2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinElem {
    p: u32,
    digits: Vec<BigRational>,
}

/// Coefficients of `Phi_p(1 + w)` in `w`, ascending.
pub(crate) fn shifted_modulus(p: u32) -> Vec<BigInt> {
    let phi = cyclotomic_poly(p);
    let deg = phi.len() - 1;
    let mut out = vec![BigInt::zero(); deg + 1];
    // Taylor shift q = 1 + w.
    for (j, &c) in phi.iter().enumerate() {
        let mut binom = BigInt::one();
        for i in 0..=j {
            out[i] += &binom * c;
            binom = binom * (j - i) / (i + 1);
        }
    }
    out
}

/// p-adic valuation of a nonzero rational.
pub(crate) fn vp_rational(x: &BigRational, p: u32) -> i64 {
    fn vp_int(mut n: BigInt, p: &BigInt) -> i64 {
        let mut v = 0;
        while (&n % p).is_zero() {
            n /= p;
            v += 1;
        }
        v
    }
    let pb = BigInt::from(p);
    vp_int(x.numer().abs(), &pb) - vp_int(x.denom().abs(), &pb)
}

impl EisensteinElem {
    /// Requires `p` prime.
    pub fn from_digits(p: u32, digits: Vec<BigRational>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        Ok(Self::reduce(p, digits))
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn digits(&self) -> &[BigRational] {
        &self.digits
    }

    fn reduce(p: u32, mut raw: Vec<BigRational>) -> Self {
        let md = shifted_modulus(p);
        let deg = md.len() - 1;
        for i in (deg..raw.len()).rev() {
            let lead = std::mem::take(&mut raw[i]);
            if lead.is_zero() {
                continue;
            }
            for (j, mj) in md.iter().enumerate().take(deg) {
                if !mj.is_zero() {
                    raw[i - deg + j] -= &lead * mj;
                }
            }
        }
        raw.resize(deg, BigRational::zero());
        raw.truncate(deg);
        EisensteinElem { p, digits: raw }
    }

    /// Rewrite an element of the `Phi_p` component in the `w = q - 1` basis.
    pub fn from_cyc(x: &CycElem) -> Result<Self> {
        let ring = x.ring();
        let p = match ring.mode() {
            Mode::Component(m) => m,
            Mode::Full => return Err(Error::Domain("expected a Phi_p component element".into())),
        };
        if !is_prime(p) {
            return Err(Error::Domain(format!("component {p} is not prime")));
        }
        // Substitute q = 1 + w.
        let c = x.coeffs();
        let mut out = vec![BigRational::zero(); c.len()];
        for (j, cj) in c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let mut binom = BigInt::one();
            for i in 0..=j {
                out[i] += cj * &binom;
                binom = binom * (j - i) / (i + 1);
            }
        }
        Ok(Self::reduce(p, out))
    }

    /// Back to the `q` basis of the `Phi_p` component of `Z[q]/(q^k - 1)`.
    pub fn to_cyc(&self, ring: &CycRing) -> Result<CycElem> {
        if ring.mode() != Mode::Component(self.p) {
            return Err(Error::RingMismatch(format!("Q(zeta_{})", self.p), ring.to_string()));
        }
        // Substitute w = q - 1.
        let mut out = vec![BigRational::zero(); self.digits.len()];
        for (i, di) in self.digits.iter().enumerate() {
            if di.is_zero() {
                continue;
            }
            let mut binom = BigInt::one();
            for j in 0..=i {
                let sign = if (i - j) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                out[j] += di * &binom * sign;
                binom = binom * (i - j) / (j + 1);
            }
        }
        Ok(ring.from_coeffs(out))
    }

    /// `w` itself, i.e. `zeta - 1`.
    pub fn w(p: u32) -> Result<Self> {
        let mut d = vec![BigRational::zero(); 2];
        d[1] = BigRational::one();
        Self::from_digits(p, d)
    }

    pub fn from_rational(p: u32, r: BigRational) -> Result<Self> {
        Self::from_digits(p, vec![r])
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p);
        let digits = self.digits.iter().zip(&o.digits).map(|(a, b)| a + b).collect();
        EisensteinElem { p: self.p, digits }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        EisensteinElem { p: self.p, digits: self.digits.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p);
        let n = self.digits.len();
        let mut raw = vec![BigRational::zero(); (2 * n).saturating_sub(1).max(1)];
        for (i, a) in self.digits.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.digits.iter().enumerate() {
                raw[i + j] += a * b;
            }
        }
        Self::reduce(self.p, raw)
    }

    /// The `w`-adic valuation; `None` stands for infinity (the zero element).
    pub fn w_valuation(&self) -> Option<i64> {
        let e = (self.p - 1) as i64;
        self.digits
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| i as i64 + e * vp_rational(d, self.p))
            .min()
    }
}

impl fmt::Display for EisensteinElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .digits
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| match i {
                0 => format!("{d}"),
                1 => format!("({d})*w"),
                _ => format!("({d})*w^{i}"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}
