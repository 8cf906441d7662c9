mod common;

use common::{circuits_gale, random_letters, random_matrix, rewrite_monomial, seed};
use num::BigInt;
use qadams::cyclotomic::CycRing;
use qadams::error::Error;
use qadams::hikita::{
    circuits, coulomb_registry, hikita_match, kahler_relations, scalar_pcurvature, shift_y, trace_relations, x_generator,
    CoulombWord, HypertoricData,
};
use qadams::symbolic::{parse_laurent, FactoredRatFunc};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeSet;

#[test]
fn rank_one_relations() {
    let d = HypertoricData::parse("(1)").unwrap();
    let k = kahler_relations(&d).unwrap();
    let t = trace_relations(&d).unwrap();
    let rq = CycRing::rationals();
    assert_eq!(k.relations().len(), 1);
    assert_eq!(k.relations()[0], parse_laurent("(1 - Q_1) - z*(1 - hbar*Q_1)", k.registry(), &rq).unwrap());
    assert_eq!(t.relations()[0], parse_laurent("(1 - y_1) - z*(1 - q*y_1)", t.registry(), &rq).unwrap());
    let m = hikita_match(&k, &t, Some(5)).unwrap();
    assert!(m.matched);
    assert_eq!(m.at_zeta, Some(true));
    assert_eq!(m.bijection, vec![Some(0)]);
}

#[test]
fn telescoping_scalar_p_curvature() {
    let t = trace_relations(&HypertoricData::sqed(1)).unwrap();
    for k in 1..=7 {
        let s = scalar_pcurvature(&t, k).unwrap();
        assert!(s.equals(&FactoredRatFunc::one(t.registry(), &CycRing::full(k))), "k={k}: {s}");
    }
    let kahler = kahler_relations(&HypertoricData::sqed(1)).unwrap();
    assert!(scalar_pcurvature(&trace_relations(&HypertoricData::sqed(2)).unwrap(), 3).is_err());
    // The Kähler side has hbar as a free parameter, so the product does not telescope.
    let s = scalar_pcurvature(&kahler, 3).unwrap();
    assert!(!s.equals(&FactoredRatFunc::one(kahler.registry(), &CycRing::full(3))));
}

#[test]
fn sqed_matches() {
    for n in 1..=4 {
        let d = HypertoricData::sqed(n);
        let c = circuits(&d).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].support, (0..n).collect::<Vec<_>>());
        let m = hikita_match(&kahler_relations(&d).unwrap(), &trace_relations(&d).unwrap(), Some(3)).unwrap();
        assert!(m.matched && m.at_zeta == Some(true), "SQED_{n}");
    }
}

#[test]
fn higher_rank_and_signed_examples_match() {
    for s in ["(1,1,-1)", "(1,-2)", "(2,1,1)", "1,0;0,1;1,1", "1,0;0,1;1,1;1,-1", "1,0;1,1;0,1;1,2"] {
        let d = match HypertoricData::parse(s) {
            Ok(d) => d,
            Err(e) => panic!("{s}: {e}"),
        };
        let k = kahler_relations(&d).unwrap();
        let t = trace_relations(&d).unwrap();
        assert_eq!(k.relations().len(), circuits(&d).unwrap().len());
        let m = hikita_match(&k, &t, Some(2)).unwrap();
        assert!(m.matched, "{s}");
        assert_eq!(m.at_zeta, Some(true), "{s}");
    }
}

#[test]
fn classical_quotients_agree() {
    for s in ["(1,1)", "(1,1,-1)", "1,0;0,1;1,1"] {
        let d = HypertoricData::parse(s).unwrap();
        let k = kahler_relations(&d).unwrap();
        let t = trace_relations(&d).unwrap();
        // At z = 0 the relations are prod A_i over S+ and prod B over S-, which match term by term.
        let kc = k.classical();
        let tc = t.classical();
        assert_eq!(kc.len(), tc.len());
        for (a, b) in kc.iter().zip(&tc) {
            let a = a.to_string().replace("hbar", "q").replace("Q_", "y_");
            assert_eq!(parse_laurent(&a, t.registry(), &CycRing::rationals()).unwrap(), *b, "{s}");
        }
    }
}

#[test]
fn circuits_agree_with_gale_dual() {
    let mut rng = StdRng::seed_from_u64(seed());
    let mut tested = 0;
    for _ in 0..120 {
        let n = rng.gen_range(1..=8usize);
        let r = rng.gen_range(1..=n.min(3));
        let a = random_matrix(&mut rng, n, r);
        let want = circuits_gale(&a);
        let d = HypertoricData::new(a.clone()).unwrap();
        match circuits(&d) {
            Ok(got) => {
                let got: BTreeSet<(Vec<usize>, Vec<BigInt>)> =
                    got.iter().map(|c| (c.support.clone(), c.vector.iter().map(|&x| BigInt::from(x)).collect())).collect();
                assert_eq!(got, want, "matrix {a:?}");
                tested += 1;
            }
            Err(Error::Degenerate(_)) => {}
            Err(e) => panic!("{a:?}: {e}"),
        }
    }
    assert!(tested >= 40, "only {tested} saturated samples");
}

#[test]
fn circuit_classes_reproduce_vectors() {
    let d = HypertoricData::parse("1,0;0,1;1,1;1,-1").unwrap();
    for c in circuits(&d).unwrap() {
        for (i, row) in d.matrix().iter().enumerate() {
            let v: i64 = row.iter().zip(&c.class).map(|(a, b)| a * b).sum();
            assert_eq!(v, c.vector[i]);
        }
        assert!(c.vector[c.support[0]] > 0);
    }
}

#[test]
fn matrix_errors() {
    assert!(HypertoricData::parse("1,0;0").is_err());
    assert!(HypertoricData::parse("(0,0)").is_err());
    assert!(HypertoricData::parse("1,1;2,2").is_err(), "rank deficient");
    assert!(HypertoricData::parse("(1,x)").is_err());
    assert!(matches!(circuits(&HypertoricData::parse("(2)").unwrap()), Err(Error::Degenerate(_))));
}

#[test]
fn normal_form_is_confluent() {
    let mut rng = StdRng::seed_from_u64(seed() ^ 7);
    for _ in 0..300 {
        let n = rng.gen_range(1..=3);
        let reg = coulomb_registry(n);
        let len = rng.gen_range(0..=10);
        let w = random_letters(&mut rng, n, len);
        let direct = CoulombWord::from_letters(&reg, &w).unwrap();
        let a = rewrite_monomial(&reg, &w, &mut rng);
        let b = rewrite_monomial(&reg, &w, &mut rng);
        assert_eq!(a, b, "{w:?}");
        assert_eq!(direct, a, "{w:?}");
    }
}

#[test]
fn opposite_generators_commute_up_to_shift() {
    let mut rng = StdRng::seed_from_u64(seed() ^ 11);
    for _ in 0..40 {
        let n = rng.gen_range(1..=3usize);
        let d = HypertoricData::sqed(n);
        let v: Vec<i32> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let mv: Vec<i32> = v.iter().map(|x| -x).collect();
        let a = x_generator(&v, &d).unwrap().mul(&x_generator(&mv, &d).unwrap()).unwrap();
        let b = x_generator(&mv, &d).unwrap().mul(&x_generator(&v, &d).unwrap()).unwrap();
        // x_{-v} x_v is x_v x_{-v} with y_i replaced by q^{v_i} y_i.
        let sa = shift_y(&a.as_scalar().unwrap(), &v).unwrap();
        assert_eq!(sa, b.as_scalar().unwrap(), "v={v:?}");
    }
}

#[test]
fn weighted_dressing() {
    let d = HypertoricData::sqed(1).with_weights(vec![2]).unwrap();
    let x = x_generator(&[1], &d).unwrap();
    let reg = coulomb_registry(1);
    let want = parse_laurent("(1 - y_1)*(1 - y_1*q^-1)", &reg, &CycRing::rationals()).unwrap();
    assert_eq!(x.terms()[&vec![1]], want);
    assert!(HypertoricData::sqed(2).with_weights(vec![1]).is_err());
}
