//! The quasimap engine: classes on `QM_d`, pushforwards and bare matrices.

use super::virtual_class::{obstruction_weights, ohat_weight, virtual_tangent, Weight};
use super::TargetSpec;
use crate::cyclotomic::{crt_join, divisors, CycElem, CycRing, Mode};
use crate::error::{Error, Result};
use crate::symbolic::laurent::mono_scale;
use crate::symbolic::{parse_laurent, ChiTable, FactoredRatFunc, LaurentPoly, Mat, Mono, SeriesOperator, VarRegistry};
use num::{BigRational, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Evaluation at the second marked point: `x -> q^d L` or `x -> L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum P2Twist {
    #[default]
    Qd,
    None,
}

impl P2Twist {
    pub fn name(&self) -> &'static str {
        match self {
            P2Twist::Qd => "qd",
            P2Twist::None => "none",
        }
    }
}

/// How an insertion at the equator becomes a class on `QM_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EquatorRule {
    /// The cyclic power operation: component `m | k` is `psi^m(tau)^{k/m}`.
    #[default]
    PowerOperation,
    /// The naive Chern-root rule `prod_j tau(q^j L)`.
    ChernRoot,
}

impl EquatorRule {
    pub fn name(&self) -> &'static str {
        match self {
            EquatorRule::PowerOperation => "power",
            EquatorRule::ChernRoot => "chern-root",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    P1,
    Equator,
    P2,
}

/// A descendant insertion `tau(x)` at one placement.
#[derive(Clone, Debug)]
pub struct InsertionSpec {
    pub tau: LaurentPoly,
    pub placement: Placement,
}

/// Insertions at the three placements, each a Laurent polynomial in `x`.
#[derive(Clone, Debug)]
pub struct Insertions {
    pub p1: LaurentPoly,
    pub eq: LaurentPoly,
    pub p2: LaurentPoly,
}

impl Insertions {
    pub fn trivial(e: &Engine) -> Self {
        let one = e.one();
        Insertions { p1: one.clone(), eq: one.clone(), p2: one }
    }

    pub fn at_p1(e: &Engine, tau: LaurentPoly) -> Self {
        Insertions { p1: tau, ..Self::trivial(e) }
    }

    pub fn at_equator(e: &Engine, tau: LaurentPoly) -> Self {
        Insertions { eq: tau, ..Self::trivial(e) }
    }

    pub fn from_specs(e: &Engine, specs: &[InsertionSpec]) -> Self {
        let mut out = Self::trivial(e);
        for s in specs {
            let slot = match s.placement {
                Placement::P1 => &mut out.p1,
                Placement::Equator => &mut out.eq,
                Placement::P2 => &mut out.p2,
            };
            *slot = slot.mul(&s.tau);
        }
        out
    }
}

/// Engine for one target over one coefficient ring (full `Z[q]/(q^k-1)` or a component).
#[derive(Clone, Debug)]
pub struct Engine {
    spec: TargetSpec,
    ring: CycRing,
    reg: Arc<VarRegistry>,
    twist: P2Twist,
    rule: EquatorRule,
    ih: usize,
    ia: Vec<usize>,
    il: usize,
    ix: usize,
}

impl Engine {
    pub fn new(spec: TargetSpec, ring: CycRing) -> Result<Self> {
        if ring.k() != spec.k {
            return Err(Error::RingMismatch(ring.to_string(), format!("k={}", spec.k)));
        }
        let reg = VarRegistry::quasimap(spec.n);
        let ih = reg.expect("h");
        let ia = (1..=spec.n).map(|i| reg.expect(&format!("a_{i}"))).collect();
        let il = reg.expect("L");
        let ix = reg.expect("x");
        Ok(Engine { spec, ring, reg, twist: P2Twist::Qd, rule: EquatorRule::PowerOperation, ih, ia, il, ix })
    }

    /// Engine over the full ring `Z[q]/(q^k - 1)`.
    pub fn full(spec: TargetSpec) -> Self {
        Self::new(spec, CycRing::full(spec.k)).expect("full ring matches k")
    }

    pub fn with_twist(mut self, twist: P2Twist) -> Self {
        self.twist = twist;
        self
    }

    pub fn with_rule(mut self, rule: EquatorRule) -> Self {
        self.rule = rule;
        self
    }

    /// The same engine over another ring of the same `k`.
    pub fn over(&self, ring: CycRing) -> Result<Self> {
        Ok(Engine::new(self.spec, ring)?.with_twist(self.twist).with_rule(self.rule))
    }

    pub fn spec(&self) -> &TargetSpec {
        &self.spec
    }

    pub fn ring(&self) -> &CycRing {
        &self.ring
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn twist(&self) -> P2Twist {
        self.twist
    }

    pub fn rule(&self) -> EquatorRule {
        self.rule
    }

    pub fn l_index(&self) -> usize {
        self.il
    }

    pub fn x_index(&self) -> usize {
        self.ix
    }

    pub fn h_index(&self) -> usize {
        self.ih
    }

    pub fn a_index(&self, i: usize) -> usize {
        self.ia[i]
    }

    pub fn one(&self) -> LaurentPoly {
        LaurentPoly::one(&self.reg, &self.ring)
    }

    fn mono(&self) -> Mono {
        vec![0; self.reg.len()]
    }

    pub fn x(&self) -> LaurentPoly {
        LaurentPoly::var_idx(&self.reg, &self.ring, self.ix, 1)
    }

    /// `a_i` for `0 <= i < n`.
    pub fn a(&self, i: usize) -> LaurentPoly {
        LaurentPoly::var_idx(&self.reg, &self.ring, self.ia[i], 1)
    }

    /// `hbar = h^2`.
    pub fn hbar(&self) -> LaurentPoly {
        LaurentPoly::var_idx(&self.reg, &self.ring, self.ih, 2)
    }

    pub fn weight_poly(&self, w: &Weight) -> LaurentPoly {
        LaurentPoly::term(&self.reg, self.ring.q_pow(w.q), self.weight_mono(w))
    }

    fn weight_mono(&self, w: &Weight) -> Mono {
        let mut m = self.mono();
        m[self.ih] = w.h;
        for (i, &e) in w.a.iter().enumerate() {
            m[self.ia[i]] = e;
        }
        m[self.il] = w.l;
        m
    }

    /// Parse an insertion: a Laurent polynomial in `x`, `h`, `a_i` and `q` without `L`.
    pub fn parse_insertion(&self, s: &str) -> Result<LaurentPoly> {
        let p = parse_laurent(s, &self.reg, &self.ring)?;
        if !p.free_of(self.il) {
            return Err(Error::Parse(format!("insertion '{s}' must not involve L")));
        }
        Ok(p)
    }

    /// `O_vir = prod_{w in Obs} (1 - w^{-1})` at degree `d >= 1`.
    pub fn ovir(&self, d: u32) -> Result<LaurentPoly> {
        if d == 0 {
            return Err(Error::Domain("O_vir is used for d >= 1".into()));
        }
        let mut p = self.one();
        for w in obstruction_weights(&self.spec, d) {
            p = p.mul(&self.one().sub(&self.weight_poly(&w.pow(-1))));
        }
        Ok(p)
    }

    /// The monomial twist `(K_vir q^{nd})^{1/2}` at degree `d >= 1`.
    pub fn ohat_twist(&self, d: u32) -> Result<LaurentPoly> {
        if d == 0 {
            return Err(Error::Domain("the twist is used for d >= 1".into()));
        }
        Ok(self.weight_poly(&ohat_weight(&self.spec, d)?))
    }

    /// Stable envelope `f_i(x) = prod_{j<i} (a_j - x) prod_{j>i} (a_j - hbar x)`, `1 <= i <= n`.
    pub fn stable_envelope(&self, i: usize) -> Result<LaurentPoly> {
        let n = self.spec.n;
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange(format!("stable envelope index {i} not in 1..={n}")));
        }
        let x = self.x();
        let hx = self.hbar().mul(&x);
        let mut p = self.one();
        for j in 0..n {
            if j + 1 < i {
                p = p.mul(&self.a(j).sub(&x));
            } else if j + 1 > i {
                p = p.mul(&self.a(j).sub(&hx));
            }
        }
        Ok(p)
    }

    fn envelopes(&self) -> Vec<LaurentPoly> {
        (1..=self.spec.n).map(|i| self.stable_envelope(i).expect("index in range")).collect()
    }

    /// Substitute `x -> a_alpha` (0-based `alpha`).
    pub fn at_fixed_point(&self, p: &LaurentPoly, var: usize, alpha: usize) -> Result<LaurentPoly> {
        let mut m = self.mono();
        m[self.ia[alpha]] = 1;
        p.substitute_monomial(var, &self.ring.one(), &m)
    }

    /// `R[alpha][i] = f_i(a_alpha)`; lower triangular.
    pub fn restriction_matrix(&self) -> Result<Mat> {
        let f = self.envelopes();
        let n = self.spec.n;
        let mut rows = Vec::with_capacity(n);
        for alpha in 0..n {
            let row = f
                .iter()
                .map(|fi| Ok(FactoredRatFunc::from_poly(self.at_fixed_point(fi, self.ix, alpha)?)))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(Mat::from_rows(rows))
    }

    /// `1 / R[alpha][alpha]`, using its factorization into binomials.
    fn diagonal_inverse(&self, alpha: usize) -> Result<FactoredRatFunc> {
        let mut num = self.one();
        let mut factors = Vec::new();
        for j in 0..self.spec.n {
            if j == alpha {
                continue;
            }
            // a_j - c a_alpha = a_j (1 - c a_alpha / a_j)
            num = num.mul(&LaurentPoly::var_idx(&self.reg, &self.ring, self.ia[j], -1));
            let mut m = self.mono();
            m[self.ia[alpha]] = 1;
            m[self.ia[j]] = -1;
            if j > alpha {
                m[self.ih] = 2;
            }
            factors.push((self.ring.one(), m));
        }
        FactoredRatFunc::with_denominator(num, &factors)
    }

    /// `R^{-1}` by forward substitution with structurally inverted diagonal.
    pub fn restriction_inverse(&self) -> Result<Mat> {
        let r = self.restriction_matrix()?;
        let n = self.spec.n;
        let mut inv = Mat::zero(n, &self.reg, &self.ring);
        for alpha in 0..n {
            let dinv = self.diagonal_inverse(alpha)?;
            inv.set(alpha, alpha, dinv.clone());
            for i in 0..alpha {
                let mut acc = FactoredRatFunc::zero(&self.reg, &self.ring);
                for beta in i..alpha {
                    acc = acc.add(&r.get(alpha, beta).mul(inv.get(beta, i)));
                }
                inv.set(alpha, i, acc.mul(&dinv).neg().cancel());
            }
        }
        Ok(inv)
    }

    /// `tau(x -> q^j L)`.
    pub fn at_l(&self, tau: &LaurentPoly, j: i64) -> Result<LaurentPoly> {
        let mut m = self.mono();
        m[self.il] = 1;
        tau.substitute_monomial(self.ix, &self.ring.q_pow(j), &m)
    }

    /// `psi^m`: every variable to its `m`-th power; coefficients must be rational.
    fn adams_rational(&self, tau: &LaurentPoly, m: u32, target: &CycRing) -> Result<LaurentPoly> {
        let mut terms = BTreeMap::new();
        for (mono, c) in tau.terms() {
            if c.coeffs().iter().skip(1).any(|v| !v.is_zero()) {
                return Err(Error::Domain(format!("equator insertion {tau} must have q-free coefficients")));
            }
            let r: BigRational = c.coeffs()[0].clone();
            let t = target.from_rational(r);
            if !t.is_zero() {
                terms.insert(mono_scale(mono, m as i32), t);
            }
        }
        Ok(LaurentPoly::from_terms(&self.reg, target, terms))
    }

    /// Equator class of `tau` on `QM_d`, a Laurent polynomial in `L`.
    pub fn equator_class(&self, tau: &LaurentPoly) -> Result<LaurentPoly> {
        if !tau.free_of(self.il) {
            return Err(Error::Domain("equator insertion must not involve L".into()));
        }
        let k = self.spec.k;
        let p = match self.rule {
            EquatorRule::ChernRoot => {
                let mut p = self.one();
                for j in 0..k as i64 {
                    p = p.mul(&self.at_l(tau, j)?);
                }
                return Ok(p);
            }
            EquatorRule::PowerOperation => match self.ring.mode() {
                Mode::Component(m) => self.adams_rational(tau, m, &self.ring)?.pow(k / m),
                Mode::Full => {
                    let parts: Vec<(u32, LaurentPoly)> = divisors(k)
                        .into_iter()
                        .map(|m| {
                            let comp = CycRing::component(k, m)?;
                            Ok((m, self.adams_rational(tau, m, &comp)?.pow(k / m)))
                        })
                        .collect::<Result<_>>()?;
                    crt_join_poly(k, &parts, &self.reg)?
                }
            },
        };
        self.at_l(&p, 0)
    }

    /// `Ohat * O_vir * ins_p1(L) * E(ins_eq) * ins_p2(q^d L)` on `QM_d`.
    pub fn assemble_class(&self, d: u32, p1: &LaurentPoly, eq: &LaurentPoly, p2: &LaurentPoly) -> Result<LaurentPoly> {
        let pre = self.ohat_twist(d)?.mul(&self.ovir(d)?);
        Ok(pre.mul(&self.at_l(p1, 0)?).mul(&self.equator_class(eq)?).mul(&self.at_l(p2, self.p2_shift(d))?))
    }

    fn p2_shift(&self, d: u32) -> i64 {
        match self.twist {
            P2Twist::Qd => d as i64,
            P2Twist::None => 0,
        }
    }

    /// Values of `L` at the torus-fixed points of `QM_d`: `a_i q^{-j}`, `0 <= j <= d`.
    pub fn fixed_point_weights(&self, d: u32) -> Vec<LaurentPoly> {
        let mut out = Vec::new();
        for i in 0..self.spec.n {
            for j in 0..=d as i64 {
                let mut m = self.mono();
                m[self.ia[i]] = 1;
                out.push(LaurentPoly::term(&self.reg, self.ring.q_pow(-j), m));
            }
        }
        out
    }

    /// The `n^2` classes whose pushforwards are the entries of `B_d`, row-major.
    pub fn bare_classes(&self, d: u32, ins: &Insertions) -> Result<Vec<LaurentPoly>> {
        if d == 0 {
            return Err(Error::Domain("bare classes are defined for d >= 1".into()));
        }
        let s = self.p2_shift(d);
        let common = self
            .ohat_twist(d)?
            .mul(&self.ovir(d)?)
            .mul(&self.at_l(&ins.p1, 0)?)
            .mul(&self.equator_class(&ins.eq)?)
            .mul(&self.at_l(&ins.p2, s)?);
        let f = self.envelopes();
        let left: Vec<LaurentPoly> = f.iter().map(|fi| Ok(common.mul(&self.at_l(fi, 0)?))).collect::<Result<_>>()?;
        let right: Vec<LaurentPoly> = f.iter().map(|fj| self.at_l(fj, s)).collect::<Result<_>>()?;
        let n = self.spec.n;
        Ok((0..n * n).into_par_iter().map(|t| left[t / n].mul(&right[t % n])).collect())
    }

    /// `B_d(ins)` for `d >= 1`, and the fixed-point sum [`Self::degree_zero_matrix`] for `d = 0`.
    pub fn bare_matrix(&self, d: u32, ins: &Insertions) -> Result<Mat> {
        if d == 0 {
            return self.degree_zero_matrix(ins);
        }
        let classes = self.bare_classes(d, ins)?;
        let n = self.spec.n;
        let ranges: Vec<(i32, i32)> = classes.iter().filter_map(|c| c.var_range(self.il)).collect();
        if ranges.is_empty() {
            return Ok(Mat::zero(n, &self.reg, &self.ring));
        }
        let lo = ranges.iter().map(|r| r.0).min().unwrap_or(0);
        let hi = ranges.iter().map(|r| r.1).max().unwrap_or(0);
        let table = ChiTable::new(&self.fixed_point_weights(d), lo, hi)?;
        let e: Vec<FactoredRatFunc> = classes
            .par_iter()
            .map(|c| Ok(FactoredRatFunc::from_poly(table.apply(c, self.il)?)))
            .collect::<Result<_>>()?;
        Ok(Mat::from_rows(e.chunks(n).map(|r| r.to_vec()).collect()))
    }

    /// Tangent weights at the fixed point `L = a_alpha` of the target, trivial characters dropped.
    fn target_tangent(&self, alpha: usize) -> Result<Vec<(Weight, i32)>> {
        let mut merged: BTreeMap<Weight, i32> = BTreeMap::new();
        for (w, m) in virtual_tangent(&self.spec, 0) {
            let mut v = w.clone();
            v.a[alpha] += v.l;
            v.l = 0;
            *merged.entry(v).or_insert(0) += m;
        }
        let mut out = Vec::new();
        for (w, m) in merged {
            if w.is_trivial() {
                if m != 0 {
                    return Err(Error::Domain(format!("fixed point {alpha} is not isolated")));
                }
            } else if m != 0 {
                out.push((w, m));
            }
        }
        Ok(out)
    }

    /// Localization weight `c_alpha = K^{1/2} / Lambda(T^vee)` at the fixed point `alpha` of the target.
    pub fn fixed_point_factor(&self, alpha: usize) -> Result<FactoredRatFunc> {
        let t = self.target_tangent(alpha)?;
        let k = t.iter().fold(Weight::one(self.spec.n), |acc, (w, m)| acc.mul(&w.pow(-m)));
        let mut num = self.weight_poly(&k.sqrt()?);
        let mut factors = Vec::new();
        for (w, m) in &t {
            let inv = w.pow(-1);
            if *m > 0 {
                for _ in 0..*m {
                    factors.push((self.ring.q_pow(inv.q), self.weight_mono(&inv)));
                }
            } else {
                let b = self.one().sub(&self.weight_poly(&inv));
                num = num.mul(&b.pow((-m) as u32));
            }
        }
        FactoredRatFunc::with_denominator(num, &factors)
    }

    /// Combined insertion restricted to `L = a_alpha` at degree zero.
    fn insertion_at(&self, ins: &Insertions, alpha: usize) -> Result<LaurentPoly> {
        let t = self.at_l(&ins.p1, 0)?.mul(&self.equator_class(&ins.eq)?).mul(&self.at_l(&ins.p2, 0)?);
        self.at_fixed_point(&t, self.il, alpha)
    }

    /// `B_0(ins)_{ij} = sum_alpha c_alpha f_i(a_alpha) f_j(a_alpha) tau(a_alpha)`.
    pub fn degree_zero_matrix(&self, ins: &Insertions) -> Result<Mat> {
        let n = self.spec.n;
        let r = self.restriction_matrix()?;
        let w: Vec<FactoredRatFunc> = (0..n)
            .map(|alpha| Ok(self.fixed_point_factor(alpha)?.mul_poly(&self.insertion_at(ins, alpha)?)))
            .collect::<Result<_>>()?;
        let d = Mat::diagonal(w);
        Ok(r.transpose().mul(&d).mul(&r))
    }

    /// `G_0 = B_0(1)^{-1} = R^{-1} C^{-1} R^{-T}`.
    pub fn gluing_inverse(&self) -> Result<Mat> {
        let ri = self.restriction_inverse()?;
        let n = self.spec.n;
        let c: Vec<FactoredRatFunc> = (0..n).map(|a| self.fixed_point_factor(a)?.inv()).collect::<Result<_>>()?;
        Ok(ri.mul(&Mat::diagonal(c)).mul(&ri.transpose()))
    }

    /// `z^0` operator `R^T diag(tau(a_alpha)) R^{-T}`.
    pub fn classical_matrix(&self, ins: &Insertions) -> Result<Mat> {
        let n = self.spec.n;
        let r = self.restriction_matrix()?;
        let ri = self.restriction_inverse()?;
        let d: Vec<FactoredRatFunc> =
            (0..n).map(|a| Ok(FactoredRatFunc::from_poly(self.insertion_at(ins, a)?))).collect::<Result<_>>()?;
        Ok(r.transpose().mul(&Mat::diagonal(d)).mul(&ri.transpose()))
    }

    /// `sum_{d <= D} B_d(ins) z^d` without the gluing normalization.
    pub fn raw_series(&self, ins: &Insertions, order: u32) -> Result<SeriesOperator> {
        let coeff = (0..=order).map(|d| self.bare_matrix(d, ins)).collect::<Result<Vec<_>>>()?;
        Ok(SeriesOperator::new(coeff))
    }

    /// `sum_d B_d(ins) G_0 z^d`; the constant term is [`Self::classical_matrix`].
    pub fn bare_series(&self, ins: &Insertions, order: u32) -> Result<SeriesOperator> {
        let g0 = self.gluing_inverse()?;
        Ok(self.raw_series(ins, order)?.map_coeffs(|m| m.mul(&g0)))
    }
}

/// Reassemble a full-ring polynomial from its CRT components, coefficientwise.
pub fn crt_join_poly(k: u32, parts: &[(u32, LaurentPoly)], reg: &Arc<VarRegistry>) -> Result<LaurentPoly> {
    let full = CycRing::full(k);
    let mut monos: Vec<Mono> = parts.iter().flat_map(|(_, p)| p.terms().keys().cloned()).collect();
    monos.sort();
    monos.dedup();
    let mut terms = BTreeMap::new();
    for m in monos {
        let comps: Vec<(u32, CycElem)> = parts.iter().map(|(mm, p)| (*mm, p.coeff(&m))).collect();
        let c = crt_join(k, &comps)?;
        if !c.is_zero() {
            terms.insert(m, c);
        }
    }
    Ok(LaurentPoly::from_terms(reg, &full, terms))
}
