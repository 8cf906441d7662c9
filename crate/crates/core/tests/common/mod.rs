//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use num::{BigInt, BigRational, One, Signed, Zero};
use qadams::cyclotomic::CycElem;
use qadams::hikita::{CoulombWord, Letter};
use qadams::symbolic::{LaurentPoly, VarRegistry};
use rand::rngs::StdRng;
use rand::Rng;
use std::collections::BTreeSet;
use std::sync::Arc;

pub fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Seed from `QK_SEED`, defaulting to a fixed value.
pub fn seed() -> u64 {
    std::env::var("QK_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20_240_601)
}

// ---------- integer polynomials ----------

pub fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact long division by a monic polynomial.
pub fn poly_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    assert_eq!(*b.last().unwrap(), 1);
    let mut q = vec![0; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db];
        q[i] = c;
        for (j, y) in b.iter().enumerate() {
            r[i + j] -= c * y;
        }
    }
    assert!(r.iter().all(|&x| x == 0), "inexact division");
    q
}

pub fn mobius(mut n: u32) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// `Phi_k = prod_{d | k} (q^d - 1)^{mu(k/d)}`.
pub fn phi_mobius(k: u32) -> Vec<i64> {
    let divs: Vec<u32> = (1..=k).filter(|d| k.is_multiple_of(*d)).collect();
    let qd = |d: u32| {
        let mut v = vec![0; d as usize + 1];
        v[0] = -1;
        v[d as usize] = 1;
        v
    };
    let mut num = vec![1];
    let mut den = vec![1];
    for &d in &divs {
        match mobius(k / d) {
            1 => num = poly_mul(&num, &qd(d)),
            -1 => den = poly_mul(&den, &qd(d)),
            _ => {}
        }
    }
    // den may have leading coefficient 1 only up to sign.
    let lead = *den.last().unwrap();
    if lead == -1 {
        den.iter_mut().for_each(|x| *x = -*x);
        num.iter_mut().for_each(|x| *x = -*x);
    }
    poly_div(&num, &den)
}

// ---------- rational linear algebra ----------

/// Row-reduce; returns `(rref, pivot columns)`.
pub fn rref(m: &[Vec<BigRational>]) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut a = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        a[r].iter_mut().for_each(|x| *x *= &inv);
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pr = a[r].clone();
                a[i].iter_mut().zip(&pr).for_each(|(x, y)| *x -= &f * y);
            }
        }
        piv.push(c);
        r += 1;
    }
    (a, piv)
}

pub fn rank(m: &[Vec<BigRational>]) -> usize {
    rref(m).1.len()
}

pub fn kernel(m: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    if m.is_empty() {
        return (0..cols).map(|j| (0..cols).map(|i| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect();
    }
    let (a, piv) = rref(m);
    (0..cols)
        .filter(|c| !piv.contains(c))
        .map(|f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (row, &pc) in piv.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

pub fn det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return BigRational::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            let pr = a[c].clone();
            a[i].iter_mut().zip(&pr).for_each(|(x, y)| *x -= &f * y);
        }
    }
    d
}

pub fn vp(x: &BigRational, p: u32) -> i64 {
    let pb = BigInt::from(p);
    let count = |mut n: BigInt| {
        let mut v = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            v += 1;
        }
        v
    };
    count(x.numer().abs()) - count(x.denom().abs())
}

/// `v_p` of the field norm of `x` in `Q(zeta_p)`: the determinant of multiplication by `x`.
/// Since `p` is totally ramified this equals the `(zeta_p - 1)`-adic valuation.
pub fn norm_valuation(x: &CycElem) -> Option<i64> {
    let ring = x.ring().clone();
    let deg = ring.degree();
    let cols: Vec<Vec<BigRational>> = (0..deg)
        .map(|j| {
            let mut c = x.mul(&ring.q_pow(j as i64)).coeffs().to_vec();
            c.resize(deg, BigRational::zero());
            c
        })
        .collect();
    let m: Vec<Vec<BigRational>> = (0..deg).map(|i| (0..deg).map(|j| cols[j][i].clone()).collect()).collect();
    let d = det(&m);
    if d.is_zero() {
        None
    } else {
        Some(vp(&d, ring.k()))
    }
}

// ---------- symmetric functions ----------

/// `h_m` by enumerating nondecreasing index sequences.
pub fn h_brute(m: usize, weights: &[LaurentPoly]) -> LaurentPoly {
    let reg = weights[0].registry().clone();
    let ring = weights[0].ring().clone();
    let mut total = LaurentPoly::zero(&reg, &ring);
    fn rec(start: usize, left: usize, acc: LaurentPoly, w: &[LaurentPoly], total: &mut LaurentPoly) {
        if left == 0 {
            total.add_assign(&acc);
            return;
        }
        for i in start..w.len() {
            rec(i, left - 1, acc.mul(&w[i]), w, total);
        }
    }
    rec(0, m, LaurentPoly::one(&reg, &ring), weights, &mut total);
    total
}

pub fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

// ---------- circuits through the Gale dual ----------

/// Circuits of the column span of `a` (`n x r`), as minimal dependent column sets of
/// a matrix `b` with `b a = 0`. Returns `(support, primitive vector)` pairs.
pub fn circuits_gale(a: &[Vec<i64>]) -> BTreeSet<(Vec<usize>, Vec<BigInt>)> {
    let n = a.len();
    let r = a[0].len();
    // Rows of b span the left kernel of a: solutions of a^T y = 0.
    let at: Vec<Vec<BigRational>> = (0..r).map(|j| (0..n).map(|i| rat(a[i][j])).collect()).collect();
    let b = kernel(&at, n);
    let col = |s: &[usize]| -> Vec<Vec<BigRational>> { b.iter().map(|row| s.iter().map(|&i| row[i].clone()).collect()).collect() };
    let indep = |s: &[usize]| s.is_empty() || (!b.is_empty() && rank(&col(s)) == s.len());
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if indep(&s) {
            continue;
        }
        if !(0..s.len()).all(|t| {
            let mut s2 = s.clone();
            s2.remove(t);
            indep(&s2)
        }) {
            continue;
        }
        let ker = if b.is_empty() {
            vec![vec![BigRational::one()]]
        } else {
            kernel(&col(&s), s.len())
        };
        assert_eq!(ker.len(), 1);
        let mut v = vec![BigRational::zero(); n];
        for (t, &i) in s.iter().enumerate() {
            v[i] = ker[0][t].clone();
        }
        out.insert((s, primitive(&v)));
    }
    out
}

pub fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    use num::Integer;
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let mut out: Vec<BigInt> = ints.into_iter().map(|x| x / &g).collect();
    if out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        out.iter_mut().for_each(|x| *x = -x.clone());
    }
    out
}

/// A random full-column-rank integer matrix with `n` rows and `r` columns.
pub fn random_matrix(rng: &mut StdRng, n: usize, r: usize) -> Vec<Vec<i64>> {
    loop {
        let m: Vec<Vec<i64>> = (0..n).map(|_| (0..r).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let q: Vec<Vec<BigRational>> = m.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect();
        if rank(&q) == r {
            return m;
        }
    }
}

// ---------- Coulomb words by random rewriting ----------

/// Normal form of a word of letters by applying `x_i^a y_i^b -> q^{-ab} y_i^b x_i^a`
/// at random positions until every `y` precedes every `x`.
pub fn rewrite_monomial(reg: &Arc<VarRegistry>, letters: &[Letter], rng: &mut StdRng) -> CoulombWord {
    let n = reg.len() - 1;
    let mut w: Vec<Letter> = letters.to_vec();
    let mut qexp = 0i32;
    let mut scalar = 1i64;
    loop {
        let bad: Vec<usize> = (0..w.len().saturating_sub(1))
            .filter(|&t| matches!((w[t], w[t + 1]), (Letter::X(..), Letter::Y(..)) | (Letter::X(..), Letter::Q(_)) | (Letter::X(..), Letter::Scalar(_))))
            .collect();
        if bad.is_empty() {
            break;
        }
        let t = bad[rng.gen_range(0..bad.len())];
        if let (Letter::X(i, a), Letter::Y(j, b)) = (w[t], w[t + 1]) {
            if i == j {
                qexp -= a * b;
            }
        }
        w.swap(t, t + 1);
    }
    let mut y = vec![0; n];
    let mut x = vec![0; n];
    for l in &w {
        match *l {
            Letter::Y(i, e) => y[i] += e,
            Letter::X(i, e) => x[i] += e,
            Letter::Q(e) => qexp += e,
            Letter::Scalar(c) => scalar *= c,
        }
    }
    let ring = qadams::cyclotomic::CycRing::rationals();
    let mut m = y;
    m.push(qexp);
    let f = LaurentPoly::term(reg, ring.from_int(scalar), m);
    CoulombWord::scalar(f).mul(&CoulombWord::x_mono(reg, x)).unwrap()
}

pub fn random_letters(rng: &mut StdRng, n: usize, len: usize) -> Vec<Letter> {
    (0..len)
        .map(|_| match rng.gen_range(0..8) {
            0..=2 => Letter::Y(rng.gen_range(0..n), rng.gen_range(-2..=2)),
            3..=5 => Letter::X(rng.gen_range(0..n), rng.gen_range(-2..=2)),
            6 => Letter::Q(rng.gen_range(-2..=2)),
            _ => Letter::Scalar(rng.gen_range(1..=3)),
        })
        .collect()
}
