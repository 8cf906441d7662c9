use qadams::cyclotomic::CycRing;
use qadams::quasimap::{
    kvir_weight, obstruction_weights, ohat_weight, residue_multiplicity, strata, virtual_tangent, Engine, TargetSpec,
};
use qadams::symbolic::LaurentPoly;

/// `(n, k, d)` with `n(d+1) <= 10`.
fn audit_cases() -> Vec<(usize, u32, u32)> {
    let mut out = Vec::new();
    for n in 2..=10usize {
        for d in 1..=(10 / n - 1) as u32 {
            for k in 2..=6 {
                out.push((n, k, d));
            }
        }
    }
    out
}

#[test]
fn strata_dimensions_audit() {
    let cases = audit_cases();
    assert!(cases.len() > 20);
    for (n, k, d) in cases {
        let spec = TargetSpec::new(n, k).unwrap();
        let st = strata(&spec, d).unwrap();
        assert_eq!(st.len(), k as usize);
        // Brute force: the fixed points a_i q^{-j} with j = l mod k span the l-th stratum.
        for s in &st {
            let count = (0..=d).filter(|j| j % k == s.ell).count() as u32;
            assert_eq!(s.multiplicity, count, "n={n} k={k} d={d} l={}", s.ell);
            assert_eq!(s.dimension, n as i64 * count as i64 - 1);
        }
        let total: i64 = st.iter().map(|s| s.dimension + 1).sum();
        assert_eq!(total - 1, spec.qm_dimension(d));
    }
}

#[test]
fn strata_example_dimensions() {
    let spec = TargetSpec::new(2, 3).unwrap();
    let dims: Vec<i64> = strata(&spec, 4).unwrap().iter().map(|s| s.dimension).collect();
    assert_eq!(dims, vec![3, 3, 1]);
    assert_eq!(residue_multiplicity(3, 4, 2), 1);
    assert_eq!(residue_multiplicity(3, 1, 2), 0);
    let spec = TargetSpec::new(2, 5).unwrap();
    let st = strata(&spec, 2).unwrap();
    assert_eq!(st.iter().filter(|s| s.dimension < 0).count(), 2, "residues 3 and 4 are empty");
    assert!(strata(&spec, 0).is_err());
}

#[test]
fn target_spec_rejects_small_parameters() {
    assert!(TargetSpec::new(1, 2).is_err());
    assert!(TargetSpec::new(2, 1).is_err());
    assert!(TargetSpec::new(2, 2).is_ok());
}

#[test]
fn virtual_tangent_has_rank_of_the_target() {
    for n in 2..=4 {
        for d in 0..=4 {
            let spec = TargetSpec::new(n, 2).unwrap();
            let rank: i32 = virtual_tangent(&spec, d).iter().map(|(_, m)| m).sum();
            assert_eq!(rank, 2 * (n as i32 - 1), "n={n} d={d}");
        }
    }
}

#[test]
fn virtual_canonical_class_closed_form() {
    for n in 2..=4usize {
        for d in 1..=3u32 {
            let spec = TargetSpec::new(n, 3).unwrap();
            let k = kvir_weight(&spec, d);
            let (nn, dd) = (n as i64, d as i64);
            assert_eq!(k.l as i64, -2 * nn * dd);
            assert!(k.a.iter().all(|&e| e as i64 == 2 * dd));
            assert_eq!(k.q, -nn * dd * dd);
            // hbar = h^2.
            assert_eq!(k.h as i64, -2 * (1 + nn * (dd - 1)));
            let o = ohat_weight(&spec, d).unwrap();
            assert_eq!(o.pow(2).h, k.h);
            assert_eq!(obstruction_weights(&spec, d).len(), 1 + n * (d as usize - 1));
        }
    }
}

#[test]
fn fixed_point_weights_are_distinct() {
    let e = Engine::full(TargetSpec::new(3, 4).unwrap());
    for d in 1..=3 {
        let w = e.fixed_point_weights(d);
        assert_eq!(w.len(), 3 * (d as usize + 1));
        for i in 0..w.len() {
            for j in 0..i {
                assert_ne!(w[i], w[j]);
            }
        }
    }
}

#[test]
fn strata_localization_reproduces_global_pushforward() {
    for (n, k, d) in [(2, 2, 1), (2, 2, 3), (2, 3, 2), (2, 3, 4), (3, 2, 2), (3, 3, 1)] {
        let e = Engine::full(TargetSpec::new(n, k).unwrap());
        let reg = e.registry().clone();
        let ring = e.ring().clone();
        let l = |p: i32| LaurentPoly::var_idx(&reg, &ring, e.l_index(), p);
        for class in [e.one(), l(1), l(-1).add(&l(2)), e.one().sub(&l(k as i32))] {
            let rep = e.strata_localization(d, &class).unwrap();
            assert!(rep.consistent(), "n={n} k={k} d={d} class={class}: {} vs {}", rep.total, rep.global);
            assert_eq!(rep.strata.len(), (k as usize).min(d as usize + 1), "empty strata are skipped");
        }
    }
}

#[test]
fn scalar_normal_factor_misses_the_global_pushforward() {
    // The scalar normal factor ignores the L' dependence; it fails as soon as a stratum is positive-dimensional
    // and the class is not constant.
    let e = Engine::full(TargetSpec::new(2, 2).unwrap());
    let l = LaurentPoly::var_idx(e.registry(), e.ring(), e.l_index(), 1);
    let rep = e.strata_localization(2, &l).unwrap();
    assert!(rep.consistent());
    assert!(!rep.scalar_factor_consistent());
}

#[test]
fn engine_ring_must_match_spec() {
    let spec = TargetSpec::new(2, 3).unwrap();
    assert!(Engine::new(spec, CycRing::full(4)).is_err());
    assert!(Engine::new(spec, CycRing::component(3, 3).unwrap()).is_ok());
}
