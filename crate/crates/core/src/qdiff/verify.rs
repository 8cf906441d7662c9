//! Degree-by-degree verification of the main identity and of the operator properties.

use super::ops::{p_curvature_from, zeta_field, Normalizer};
use crate::cyclotomic::{divisors, CycRing, Mode};
use crate::error::{Error, Result};
use crate::quasimap::{Engine, Insertions};
use crate::symbolic::SeriesOperator;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One verification record.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub params: String,
    pub status: Status,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

const WITNESS_CHARS: usize = 600;

fn clip(s: String) -> String {
    if s.chars().count() <= WITNESS_CHARS {
        s
    } else {
        let t: String = s.chars().take(WITNESS_CHARS).collect();
        format!("{t}...")
    }
}

/// One check per degree comparing two series exactly.
pub fn compare_series(name: &str, params: &str, lhs: &SeriesOperator, rhs: &SeriesOperator) -> Vec<Check> {
    let order = lhs.order().min(rhs.order());
    (0..=order)
        .map(|d| {
            let diff = lhs.coeff(d).first_difference(rhs.coeff(d));
            let (status, witness) = match diff {
                None => (Status::Pass, None),
                Some((i, j)) => (
                    Status::Fail,
                    Some(clip(format!(
                        "d={d} entry ({},{}): lhs = {} ; rhs = {}",
                        i + 1,
                        j + 1,
                        lhs.coeff(d).get(i, j).cancel(),
                        rhs.coeff(d).get(i, j).cancel()
                    ))),
                ),
            };
            Check { name: name.to_string(), params: format!("{params} d={d}"), status, witness }
        })
        .collect()
}

fn params(e: &Engine) -> String {
    let s = e.spec();
    format!("n={} k={} p2-twist={} equator={}", s.n, s.k, e.twist().name(), e.rule().name())
}

fn require_full(engine: &Engine) -> Result<()> {
    if engine.ring().mode() != Mode::Full {
        return Err(Error::Domain("verification runs over the full ring Z[q]/(q^k-1)".into()));
    }
    Ok(())
}

/// (a) the cyclic power of `x` equals `M_{L^k}` in every CRT component; (b) at
/// `q = zeta_k` the quantum Adams operator of `x` equals the p-curvature.
pub fn verify_main_theorem(engine: &Engine, order: u32) -> Result<Report> {
    require_full(engine)?;
    let k = engine.spec().k;
    let norm = Normalizer::new(engine, order)?;
    let cyc = norm.quantum_cyclic(&engine.x())?;
    let mlk = norm.kahler_shift(k as i32)?;
    let ml = norm.kahler_shift(1)?;
    let p = params(engine);
    let mut report = Report::default();
    for m in divisors(k) {
        let comp = CycRing::component(k, m)?;
        let a = cyc.series.reduce_to(&comp)?;
        let b = mlk.series.reduce_to(&comp)?;
        report.checks.extend(compare_series("cyclic_power_equals_kahler_shift", &format!("{p} component={m}"), &a, &b));
    }
    let field = zeta_field(engine.ring())?;
    let adams = cyc.series.reduce_to(&field)?;
    let pc = p_curvature_from(&ml.series, k)?;
    report.checks.extend(compare_series("adams_equals_p_curvature", &p, &adams, &pc.series));
    Ok(report)
}

/// Additivity at `zeta`, the `q = 1` iteration and Kähler covariant constancy.
pub fn verify_properties(engine: &Engine, order: u32) -> Result<Report> {
    require_full(engine)?;
    let k = engine.spec().k;
    let p = params(engine);
    let mut report = Report::default();

    let ez = engine.over(CycRing::component(k, k)?)?;
    let nz = Normalizer::new(&ez, order)?;
    let xz = ez.x();
    let omx = ez.one().sub(&xz);
    let psi_x = nz.quantum_adams(&xz)?;
    let psi_omx = nz.quantum_adams(&omx)?;
    let psi_one = nz.quantum_adams(&ez.one())?;
    report.checks.extend(compare_series(
        "additivity",
        &format!("{p} tau1=1-x tau2=x"),
        &psi_omx.series.add(&psi_x.series),
        &psi_one.series,
    ));
    let id = SeriesOperator::identity(ez.spec().n, order as usize, ez.registry(), ez.ring());
    report.checks.extend(compare_series("adams_of_one_is_identity", &p, &psi_one.series, &id));

    let e1 = engine.over(CycRing::component(k, 1)?)?;
    let n1 = Normalizer::new(&e1, order)?;
    for (label, tau) in [("x", e1.x()), ("1-x", e1.one().sub(&e1.x()))] {
        let lhs = n1.quantum_cyclic(&tau)?;
        let rhs = n1.apply(&Insertions::at_p1(&e1, tau), super::OpKind::Point)?;
        report.checks.extend(compare_series(
            "q1_iteration",
            &format!("{p} tau={label}"),
            &lhs.series,
            &rhs.series.pow(k),
        ));
    }

    let ml = nz.kahler_shift(1)?;
    for (label, psi) in [("x", &psi_x), ("1-x", &psi_omx)] {
        let lhs = psi.series.zshift(-1).mul(&ml.series);
        let rhs = ml.series.mul(&psi.series);
        report.checks.extend(compare_series("kahler_constancy", &format!("{p} tau={label}"), &lhs, &rhs));
    }
    Ok(report)
}
