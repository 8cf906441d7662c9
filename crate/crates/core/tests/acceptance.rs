//! Acceptance run: one PASS/FAIL line per criterion. All comparisons are exact;
//! the time budgets are the only tolerances. Exits nonzero if any criterion fails.

mod common;

use common::{binom, circuits_gale, h_brute, phi_mobius, poly_mul, random_matrix, seed};
use num::BigInt;
use qadams::cyclotomic::{crt_join, crt_split, cyclotomic_poly, divisors, CycRing};
use qadams::hikita::{circuits, hikita_match, kahler_relations, scalar_pcurvature, trace_relations, HypertoricData};
use qadams::qdiff::{cohomological_expand, verify_main_theorem, verify_properties, Normalizer};
use qadams::quasimap::{strata, Engine, P2Twist, TargetSpec};
use qadams::symbolic::{chi_oracle_refined, chi_projective, complete_homogeneous, parse_laurent, FactoredRatFunc, LaurentPoly, VarRegistry};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn engine(n: usize, k: u32) -> Engine {
    Engine::full(TargetSpec::new(n, k).unwrap())
}

fn c1_cyclotomic() -> Outcome {
    for k in 1..=30u32 {
        ensure(cyclotomic_poly(k) == phi_mobius(k), || format!("Phi_{k} differs from the Mobius product"))?;
        let prod = divisors(k).into_iter().fold(vec![1], |acc, d| poly_mul(&acc, &cyclotomic_poly(d)));
        let mut want = vec![0; k as usize + 1];
        want[0] = -1;
        want[k as usize] = 1;
        ensure(prod == want, || format!("prod Phi_d != q^{k} - 1"))?;
    }
    let mut rng = StdRng::seed_from_u64(seed());
    let mut count = 0;
    for i in 0..1000 {
        let k = 2 + (i % 11) as u32;
        let full = CycRing::full(k);
        let c: Vec<i64> = (0..k).map(|_| rng.gen_range(-50..=50)).collect();
        let x = full.from_ints(&c);
        let back = crt_join(k, &crt_split(&x).map_err(err)?).map_err(err)?;
        ensure(back == x, || format!("CRT round trip failed for k={k}: {x}"))?;
        count += 1;
    }
    Ok(format!("Phi_k for k<=30, {count} CRT round trips"))
}

fn c2_symmetric() -> Outcome {
    let ring = CycRing::rationals();
    for count in 1..=6 {
        let names: Vec<String> = (1..=count).map(|i| format!("t_{i}")).collect();
        let reg = VarRegistry::new(&names);
        let w: Vec<LaurentPoly> = (0..count).map(|i| LaurentPoly::var_idx(&reg, &ring, i, 1)).collect();
        for m in 0..=6 {
            ensure(complete_homogeneous(m, &w) == h_brute(m, &w), || format!("h_{m} with {count} weights"))?;
        }
    }
    let mut rng = StdRng::seed_from_u64(seed() ^ 2);
    for case in 0..200 {
        let n = rng.gen_range(2..=4usize);
        let k = rng.gen_range(2..=4u32);
        let e = engine(n, k);
        let max_d = (8 / n - 1) as u32;
        let d = rng.gen_range(1..=max_d);
        let (reg, r) = (e.registry().clone(), e.ring().clone());
        let mut class = LaurentPoly::zero(&reg, &r);
        for _ in 0..rng.gen_range(1..=4) {
            let mut m = vec![0; reg.len()];
            m[e.l_index()] = rng.gen_range(-4..=6);
            m[e.h_index()] = rng.gen_range(-2..=2);
            m[e.a_index(rng.gen_range(0..n))] = rng.gen_range(-1..=1);
            let c = r.from_int(rng.gen_range(-3..=3)).mul(&r.q_pow(rng.gen_range(0..k as i64)));
            class = class.add(&LaurentPoly::term(&reg, c, m));
        }
        let w = e.fixed_point_weights(d);
        let fast = chi_projective(&w, &class, e.l_index()).map_err(err)?;
        let slow = chi_oracle_refined(&w, &class, e.l_index()).map_err(err)?;
        ensure(fast.equals(&slow), || format!("case {case}: chi of {class} on {} weights", w.len()))?;
    }
    let reg = VarRegistry::new(&["L"]);
    let one = LaurentPoly::one(&reg, &ring);
    for big_n in 0..=6i64 {
        let w = vec![one.clone(); big_n as usize + 1];
        for m in 0..=6i64 {
            let chi = chi_projective(&w, &LaurentPoly::var_idx(&reg, &ring, 0, m as i32), 0).map_err(err)?;
            let want = FactoredRatFunc::from_poly(LaurentPoly::int(&reg, &ring, binom(big_n + m, big_n)));
            ensure(chi.equals(&want), || format!("chi(P^{big_n}, O({m})) = {chi}"))?;
        }
    }
    Ok("h_m brute force, 200 random classes, binomials".into())
}

fn c3_geometry() -> Outcome {
    let mut audited = 0;
    for n in 2..=10usize {
        for d in 1..=(10 / n - 1) as u32 {
            for k in 2..=6 {
                let spec = TargetSpec::new(n, k).unwrap();
                let st = strata(&spec, d).map_err(err)?;
                for s in &st {
                    let m = (0..=d).filter(|j| j % k == s.ell).count() as i64;
                    ensure(s.dimension == n as i64 * m - 1, || format!("n={n} k={k} d={d} l={}", s.ell))?;
                }
                let total: i64 = st.iter().map(|s| s.dimension + 1).sum();
                ensure(total - 1 == spec.qm_dimension(d), || format!("ranks do not add up for n={n} k={k} d={d}"))?;
                audited += 1;
            }
        }
    }
    let dims: Vec<i64> = strata(&TargetSpec::new(2, 3).unwrap(), 4).map_err(err)?.iter().map(|s| s.dimension).collect();
    ensure(dims == vec![3, 3, 1], || format!("n=2 k=3 d=4 dims {dims:?}"))?;
    Ok(format!("{audited} (n,k,d) audits, n=2 k=3 d=4 dims (3,3,1)"))
}

fn c4_main_theorem() -> Outcome {
    let mut total = 0;
    for (n, k) in [(2, 2), (2, 3), (3, 2)] {
        let r = verify_main_theorem(&engine(n, k), 3).map_err(err)?;
        if let Some(c) = r.failures().next() {
            return Err(format!("{} {}: {}", c.name, c.params, c.witness.clone().unwrap_or_default()));
        }
        total += r.checks.len();
    }
    Ok(format!("{total} degree-wise checks at D=3"))
}

fn c5_classical_limit() -> Outcome {
    for n in 2..=3 {
        for k in 2..=3u32 {
            let e = engine(n, k);
            let op = Normalizer::new(&e, 0).map_err(err)?.quantum_adams(&e.one().sub(&e.x())).map_err(err)?;
            let field = CycRing::component(k, k).map_err(err)?;
            let reg = op.series.registry().clone();
            let x0 = op.series.coeff(0);
            let eig: Vec<FactoredRatFunc> = (0..n)
                .map(|i| {
                    let a = e.a(i).reduce_to(&field).unwrap();
                    FactoredRatFunc::from_poly(LaurentPoly::one(&reg, &field).sub(&a.pow(k)))
                })
                .collect();
            // Power sums determine the characteristic polynomial.
            let mut p = x0.clone();
            for j in 1..=n {
                let want = eig.iter().fold(FactoredRatFunc::zero(&reg, &field), |acc, v| acc.add(&(1..j).fold(v.clone(), |a, _| a.mul(v))));
                ensure(p.trace().equals(&want), || format!("n={n} k={k}: tr X^{j}"))?;
                p = p.mul(x0);
            }
        }
    }
    Ok("eigenvalues 1 - a^k for n,k <= 3".into())
}

fn c6_properties() -> Outcome {
    let r = verify_properties(&engine(2, 2), 2).map_err(err)?;
    if let Some(c) = r.failures().next() {
        return Err(format!("{} {}: {}", c.name, c.params, c.witness.clone().unwrap_or_default()));
    }
    Ok(format!("{} checks: additivity, q=1 iteration, Kahler constancy", r.checks.len()))
}

fn c7_flatness() -> Outcome {
    for k in [2, 3] {
        let e = engine(2, k);
        let norm = Normalizer::new(&e, 3).map_err(err)?;
        let m1 = norm.kahler_shift(1).map_err(err)?.series;
        let m2 = norm.kahler_shift(2).map_err(err)?.series;
        let rhs = m1.zshift(-1).mul(&m1).cancel();
        if let Some((d, i, j)) = m2.first_difference(&rhs) {
            return Err(format!("k={k} d={d} entry ({},{})", i + 1, j + 1));
        }
    }
    Ok("M_{L^2} factors through D=3 for k=2,3".into())
}

fn c8_hikita() -> Outcome {
    let d = HypertoricData::parse("(1)").map_err(err)?;
    let k = kahler_relations(&d).map_err(err)?;
    let t = trace_relations(&d).map_err(err)?;
    let rq = CycRing::rationals();
    ensure(k.relations()[0] == parse_laurent("(1 - Q_1) - z*(1 - hbar*Q_1)", k.registry(), &rq).map_err(err)?, || {
        format!("Kahler relation {}", k.relations()[0])
    })?;
    ensure(t.relations()[0] == parse_laurent("(1 - y_1) - z*(1 - q*y_1)", t.registry(), &rq).map_err(err)?, || {
        format!("trace relation {}", t.relations()[0])
    })?;
    ensure(hikita_match(&k, &t, Some(3)).map_err(err)?.matched, || "rank-one match".into())?;
    for n in 1..=4 {
        let d = HypertoricData::sqed(n);
        let m = hikita_match(&kahler_relations(&d).map_err(err)?, &trace_relations(&d).map_err(err)?, Some(2)).map_err(err)?;
        ensure(m.matched && m.at_zeta == Some(true), || format!("SQED_{n}"))?;
    }
    let mut rng = StdRng::seed_from_u64(seed() ^ 8);
    let mut compared = 0;
    for _ in 0..150 {
        let n = rng.gen_range(1..=8usize);
        let r = rng.gen_range(1..=n.min(3));
        let a = random_matrix(&mut rng, n, r);
        let Ok(got) = circuits(&HypertoricData::new(a.clone()).map_err(err)?) else { continue };
        let got: BTreeSet<(Vec<usize>, Vec<BigInt>)> =
            got.iter().map(|c| (c.support.clone(), c.vector.iter().map(|&x| BigInt::from(x)).collect())).collect();
        ensure(got == circuits_gale(&a), || format!("circuits of {a:?}"))?;
        compared += 1;
    }
    ensure(compared >= 50, || format!("only {compared} matrices compared"))?;
    Ok(format!("rank one, SQED_1..4, {compared} random matrices vs Gale dual"))
}

fn c9_telescoping() -> Outcome {
    let t = trace_relations(&HypertoricData::sqed(1)).map_err(err)?;
    for k in 1..=7 {
        let s = scalar_pcurvature(&t, k).map_err(err)?;
        ensure(s.equals(&FactoredRatFunc::one(t.registry(), &CycRing::full(k))), || format!("k={k}: {s}"))?;
    }
    Ok("scalar p-curvature = 1 for k <= 7".into())
}

fn c10_cohomological_limit() -> Outcome {
    let rep = cohomological_expand(&engine(2, 3), 2).map_err(err)?;
    let low: Vec<String> = rep
        .entries
        .iter()
        .filter(|x| x.valuation.is_some_and(|v| v < 3))
        .map(|x| format!("d={} ({},{}) v={:?}", x.d, x.i, x.j, x.valuation))
        .collect();
    ensure(low.is_empty(), || low.join("; "))?;
    Ok(format!("{} entries, min valuation {:?}", rep.entries.len(), rep.min_valuation()))
}

fn c11_negative_control() -> Outcome {
    let r = verify_main_theorem(&engine(2, 2).with_twist(P2Twist::None), 3).map_err(err)?;
    let first = r.failures().next().ok_or("rejected twist passed every check")?;
    let witness = first.witness.clone().ok_or("failure without witness")?;
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_qadams"))
        .args(["verify", "--n", "2", "--k", "2", "--deg", "3", "--theorem-only", "--p2-twist", "none"])
        .output()
        .map_err(err)?;
    ensure(out.status.code() == Some(1), || format!("exit code {:?}", out.status.code()))?;
    let short: String = witness.chars().take(60).collect();
    Ok(format!("{} {} fails, exit 1; witness {short}...", first.name, first.params))
}

fn main() {
    type Criterion = (u32, &'static str, Duration, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        (1, "cyclotomic kernel", Duration::from_secs(5), c1_cyclotomic),
        (2, "symmetric-function pushforward", Duration::from_secs(60), c2_symmetric),
        (3, "geometry bookkeeping", Duration::from_secs(60), c3_geometry),
        (4, "main theorem at D=3", Duration::from_secs(600), c4_main_theorem),
        (5, "classical limit", Duration::from_secs(60), c5_classical_limit),
        (6, "operator properties at D=2", Duration::from_secs(300), c6_properties),
        (7, "flatness factorization", Duration::from_secs(120), c7_flatness),
        (8, "Hikita rank one, SQED, circuits", Duration::from_secs(30), c8_hikita),
        (9, "telescoping", Duration::from_secs(30), c9_telescoping),
        (10, "cohomological limit valuations", Duration::from_secs(120), c10_cohomological_limit),
        (11, "negative control", Duration::from_secs(120), c11_negative_control),
    ];
    let mut failed = 0;
    for (id, title, budget, f) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > budget => Err(format!("over the {budget:?} budget")),
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS criterion {id:>2} {title}: {detail} [{:.2?}]", elapsed),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id:>2} {title}: {why} [{:.2?}]", elapsed);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria passed");
}
