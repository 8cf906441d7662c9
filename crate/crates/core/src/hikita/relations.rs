//! Kähler and trace presentations of the q-difference modules and their matching.

use super::coulomb::x_generator;
use super::data::{circuits, Circuit, HypertoricData};
use crate::cyclotomic::CycRing;
use crate::error::{Error, Result};
use crate::symbolic::parse::binomial_inverse;
use crate::symbolic::{FactoredRatFunc, LaurentPoly, Mono, VarRegistry};
use std::fmt;
use std::sync::Arc;

/// Relations in generators (`Q_i = q^{L_i}` or `y_i`), `q`, possibly `hbar`, and `z`.
#[derive(Clone, Debug)]
pub struct QDiffPresentation {
    reg: Arc<VarRegistry>,
    generators: Vec<String>,
    z_vars: Vec<String>,
    relations: Vec<LaurentPoly>,
}

impl QDiffPresentation {
    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn z_vars(&self) -> &[String] {
        &self.z_vars
    }

    pub fn relations(&self) -> &[LaurentPoly] {
        &self.relations
    }

    /// Every `z` set to zero.
    pub fn classical(&self) -> Vec<LaurentPoly> {
        self.relations
            .iter()
            .map(|r| {
                let keep = r.terms().iter().filter(|(m, _)| self.z_vars.iter().all(|z| m[self.reg.expect(z)] == 0));
                LaurentPoly::from_terms(&self.reg, r.ring(), keep.map(|(m, c)| (m.clone(), c.clone())).collect())
            })
            .collect()
    }
}

impl fmt::Display for QDiffPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.relations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

fn z_names(r: usize) -> Vec<String> {
    if r == 1 {
        vec!["z".into()]
    } else {
        (1..=r).map(|i| format!("z_{i}")).collect()
    }
}

fn registry(gens: &[String], hbar: bool, zs: &[String]) -> Arc<VarRegistry> {
    let mut names = gens.to_vec();
    if hbar {
        names.push("hbar".into());
    }
    names.extend(zs.iter().cloned());
    names.push("q".into());
    VarRegistry::new(&names)
}

fn z_power(reg: &Arc<VarRegistry>, zs: &[String], class: &[i64]) -> LaurentPoly {
    let mut m: Mono = vec![0; reg.len()];
    for (z, &c) in zs.iter().zip(class) {
        m[reg.expect(z)] = c as i32;
    }
    LaurentPoly::term(reg, CycRing::rationals().one(), m)
}

/// `1 - q^{qe} * hbar^{he} * g`.
fn factor(reg: &Arc<VarRegistry>, g: usize, qe: i32, he: i32) -> LaurentPoly {
    let ring = CycRing::rationals();
    let mut m: Mono = vec![0; reg.len()];
    m[g] = 1;
    m[reg.expect("q")] = qe;
    if he != 0 {
        m[reg.expect("hbar")] = he;
    }
    LaurentPoly::one(reg, &ring).sub(&LaurentPoly::term(reg, ring.one(), m))
}

/// One relation per circuit:
/// `prod_{S+} A_i prod_{S-} B_i - z^c prod_{S+} B_i prod_{S-} A_i` with
/// `A_i = prod_{j<|v_i|} (1 - q^{-j} Q_i)` and `B_i = prod_{j<|v_i|} (1 - hbar q^j Q_i)`.
pub fn kahler_relations(data: &HypertoricData) -> Result<QDiffPresentation> {
    let n = data.n();
    let gens: Vec<String> = (1..=n).map(|i| format!("Q_{i}")).collect();
    let zs = z_names(data.rank());
    let reg = registry(&gens, true, &zs);
    let ring = CycRing::rationals();
    let rels = circuits(data)?
        .iter()
        .map(|c| {
            let mut plus = LaurentPoly::one(&reg, &ring);
            let mut minus = LaurentPoly::one(&reg, &ring);
            for &i in &c.support {
                let g = reg.expect(&gens[i]);
                let d = c.vector[i].unsigned_abs() as i32;
                let a: LaurentPoly = (0..d).fold(LaurentPoly::one(&reg, &ring), |acc, j| acc.mul(&factor(&reg, g, -j, 0)));
                let b: LaurentPoly = (0..d).fold(LaurentPoly::one(&reg, &ring), |acc, j| acc.mul(&factor(&reg, g, j, 1)));
                let (to_plus, to_minus) = if c.vector[i] > 0 { (a, b) } else { (b, a) };
                plus = plus.mul(&to_plus);
                minus = minus.mul(&to_minus);
            }
            plus.sub(&z_power(&reg, &zs, &c.class).mul(&minus))
        })
        .collect();
    Ok(QDiffPresentation { reg, generators: gens, z_vars: zs, relations: rels })
}

/// One relation per circuit: `x_v x_{-v} - z^c x_{-v} x_v`, normal ordered.
pub fn trace_relations(data: &HypertoricData) -> Result<QDiffPresentation> {
    let n = data.n();
    let gens: Vec<String> = (1..=n).map(|i| format!("y_{i}")).collect();
    let zs = z_names(data.rank());
    let reg = registry(&gens, false, &zs);
    let rels = circuits(data)?
        .iter()
        .map(|c| trace_relation(data, c, &reg, &zs))
        .collect::<Result<Vec<_>>>()?;
    Ok(QDiffPresentation { reg, generators: gens, z_vars: zs, relations: rels })
}

fn trace_relation(data: &HypertoricData, c: &Circuit, reg: &Arc<VarRegistry>, zs: &[String]) -> Result<LaurentPoly> {
    let v: Vec<i32> = c.vector.iter().map(|&x| x as i32).collect();
    let mv: Vec<i32> = v.iter().map(|x| -x).collect();
    let xv = x_generator(&v, data)?;
    let xmv = x_generator(&mv, data)?;
    let scalar = |w: super::CoulombWord| -> Result<LaurentPoly> {
        w.as_scalar().ok_or_else(|| Error::Domain("x_v x_{-v} is not of degree zero".into()))?.rebase(reg)
    };
    let a = scalar(xv.mul(&xmv)?)?;
    let b = scalar(xmv.mul(&xv)?)?;
    Ok(a.sub(&z_power(reg, zs, &c.class).mul(&b)))
}

/// Outcome of [`hikita_match`].
#[derive(Clone, Debug)]
pub struct MatchReport {
    pub matched: bool,
    /// Variable dictionary applied to the Kähler side.
    pub dictionary: Vec<(String, String)>,
    /// `bijection[i]` is the trace relation matched with Kähler relation `i`.
    pub bijection: Vec<Option<usize>>,
    /// Result of the same comparison at `q = zeta_k`, when requested.
    pub at_zeta: Option<bool>,
}

/// Move a polynomial to `target`, renaming variables by `dict` (others keep their names).
fn rename(p: &LaurentPoly, dict: &[(String, String)], target: &Arc<VarRegistry>) -> Result<LaurentPoly> {
    let src = p.registry();
    let map: Vec<Option<usize>> = src
        .names()
        .iter()
        .map(|nm| {
            let to = dict.iter().find(|(a, _)| a == nm).map(|(_, b)| b.as_str()).unwrap_or(nm);
            target.index(to)
        })
        .collect();
    let mut terms: std::collections::BTreeMap<Mono, crate::cyclotomic::CycElem> = Default::default();
    for (m, c) in p.terms() {
        let mut mm = vec![0; target.len()];
        for (i, &e) in m.iter().enumerate() {
            if e != 0 {
                let j = map[i].ok_or_else(|| Error::Domain(format!("variable {} has no image", src.name(i))))?;
                mm[j] += e;
            }
        }
        let slot = terms.entry(mm).or_insert_with(|| p.ring().zero());
        *slot = slot.add(c);
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(LaurentPoly::from_terms(target, p.ring(), terms))
}

/// Divide by the unit multiple of the first term so that equal-up-to-units relations coincide.
fn normalize(p: &LaurentPoly) -> Result<LaurentPoly> {
    let Some((m, c)) = p.terms().iter().next() else {
        return Ok(p.clone());
    };
    let ci = c.unit_inverse().ok_or_else(|| Error::NotInvertible(c.to_string()))?;
    Ok(p.mul_term(&ci, &m.iter().map(|e| -e).collect::<Vec<_>>()))
}

fn match_sets(a: &[LaurentPoly], b: &[LaurentPoly]) -> Result<Vec<Option<usize>>> {
    let na: Vec<LaurentPoly> = a.iter().map(normalize).collect::<Result<_>>()?;
    let nb: Vec<LaurentPoly> = b.iter().map(normalize).collect::<Result<_>>()?;
    let mut used = vec![false; nb.len()];
    Ok(na
        .iter()
        .map(|x| {
            let j = (0..nb.len()).find(|&j| !used[j] && nb[j] == *x)?;
            used[j] = true;
            Some(j)
        })
        .collect())
}

fn at_zeta(ps: &[LaurentPoly], k: u32) -> Result<Vec<LaurentPoly>> {
    let field = CycRing::component(k, k)?;
    ps.iter().map(|p| p.absorb_q(p.registry().expect("q"), &field)).collect()
}

/// Compare the presentations under `Q_i -> y_i`, `hbar -> q`, up to unit monomial
/// multiples; with `zeta_k = Some(k)` the comparison is repeated at `q = zeta_k`.
pub fn hikita_match(kahler: &QDiffPresentation, trace: &QDiffPresentation, zeta_k: Option<u32>) -> Result<MatchReport> {
    let mut dictionary: Vec<(String, String)> =
        kahler.generators.iter().zip(&trace.generators).map(|(a, b)| (a.clone(), b.clone())).collect();
    dictionary.push(("hbar".into(), "q".into()));
    if kahler.generators.len() != trace.generators.len() || kahler.z_vars != trace.z_vars {
        return Ok(MatchReport { matched: false, dictionary, bijection: vec![None; kahler.relations.len()], at_zeta: None });
    }
    let mapped: Vec<LaurentPoly> =
        kahler.relations.iter().map(|r| rename(r, &dictionary, &trace.reg)).collect::<Result<_>>()?;
    let bijection = match_sets(&mapped, &trace.relations)?;
    let matched = kahler.relations.len() == trace.relations.len() && bijection.iter().all(Option::is_some);
    let at_zeta = match zeta_k {
        Some(k) => {
            let b = match_sets(&at_zeta(&mapped, k)?, &at_zeta(&trace.relations, k)?)?;
            Some(matched && b.iter().all(Option::is_some))
        }
        None => None,
    };
    Ok(MatchReport { matched, dictionary, bijection, at_zeta })
}

/// For a rank-one presentation `c_0(z) + c_1(z) G = 0`, the connection
/// coefficient `M(z) = -c_0 / c_1` and the product `prod_{j<k} M(q^j z)` in `Z[q]/(q^k - 1)`.
pub fn scalar_pcurvature(pres: &QDiffPresentation, k: u32) -> Result<FactoredRatFunc> {
    if pres.generators.len() != 1 || pres.relations.len() != 1 || pres.z_vars.len() != 1 {
        return Err(Error::Domain("scalar p-curvature needs a rank-one presentation".into()));
    }
    let reg = &pres.reg;
    let g = reg.expect(&pres.generators[0]);
    let z = reg.expect(&pres.z_vars[0]);
    let qi = reg.expect("q");
    let parts = pres.relations[0].collect_in(g);
    if parts.keys().any(|&e| e != 0 && e != 1) || !parts.contains_key(&1) {
        return Err(Error::Domain("relation is not linear in the generator".into()));
    }
    let full = CycRing::full(k);
    let zero = LaurentPoly::zero(reg, &CycRing::rationals());
    let c0 = parts.get(&0).unwrap_or(&zero).absorb_q(qi, &full)?;
    let c1 = parts[&1].absorb_q(qi, &full)?;
    let inv = match FactoredRatFunc::from_poly(c1.clone()).inv() {
        Ok(i) => i,
        Err(_) => binomial_inverse(&c1)
            .map_err(|_| Error::Domain(format!("cannot solve for the generator: coefficient {c1}")))?,
    };
    let m = inv.mul_poly(&c0.neg());
    let mut zm: Mono = vec![0; reg.len()];
    zm[z] = 1;
    let mut acc = FactoredRatFunc::one(reg, &full);
    for j in 0..k as i64 {
        acc = acc.mul(&m.substitute_monomial(z, &full.q_pow(j), &zm)?);
    }
    Ok(acc.cancel())
}
