mod common;

use common::{binom, h_brute, seed};
use qadams::cyclotomic::CycRing;
use qadams::symbolic::{
    chi_oracle_refined, chi_projective, complete_homogeneous, parse_laurent, parse_ratfunc, FactoredRatFunc, LaurentPoly,
    Mat, SeriesOperator, VarRegistry,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::sync::Arc;

fn weights_registry(count: usize) -> Arc<VarRegistry> {
    let mut names: Vec<String> = (1..=count).map(|i| format!("t_{i}")).collect();
    names.push("L".into());
    VarRegistry::new(&names)
}

#[test]
fn complete_homogeneous_matches_multisets() {
    let ring = CycRing::rationals();
    for count in 1..=6 {
        let reg = weights_registry(count);
        let w: Vec<LaurentPoly> = (0..count).map(|i| LaurentPoly::var_idx(&reg, &ring, i, 1)).collect();
        for m in 0..=6 {
            assert_eq!(complete_homogeneous(m, &w), h_brute(m, &w), "count={count} m={m}");
        }
    }
}

#[test]
fn complete_homogeneous_with_repeated_and_shifted_weights() {
    let full = CycRing::full(3);
    let reg = weights_registry(2);
    let t = |i: usize, j: i64| LaurentPoly::term(&reg, full.q_pow(j), {
        let mut m = vec![0; 3];
        m[i] = 1;
        m
    });
    let w = vec![t(0, 0), t(0, -1), t(1, 0), t(1, -2), t(0, 0)];
    for m in 0..=5 {
        assert_eq!(complete_homogeneous(m, &w), h_brute(m, &w));
    }
}

/// Weights `t_i q^{-j}` like the fixed points of a quasimap space, plus random classes in `L`.
fn random_case(rng: &mut StdRng) -> (Vec<LaurentPoly>, LaurentPoly, usize) {
    let k = rng.gen_range(2..=4u32);
    let ring = CycRing::full(k);
    let groups = rng.gen_range(1..=3usize);
    let reg = weights_registry(groups);
    let per = rng.gen_range(1..=(8 / groups).min(4));
    let mut weights = Vec::new();
    for i in 0..groups {
        for j in 0..per.min(k as usize) {
            let mut m = vec![0; groups + 1];
            m[i] = 1;
            weights.push(LaurentPoly::term(&reg, ring.q_pow(-(j as i64)), m));
        }
    }
    let l = groups;
    let mut class = LaurentPoly::zero(&reg, &ring);
    for _ in 0..rng.gen_range(1..=4) {
        let mut m = vec![0; groups + 1];
        m[l] = rng.gen_range(-4..=6);
        m[rng.gen_range(0..groups)] += rng.gen_range(-1..=1);
        let c = ring.from_int(rng.gen_range(-3..=3)).mul(&ring.q_pow(rng.gen_range(0..k as i64)));
        class = class.add(&LaurentPoly::term(&reg, c, m));
    }
    (weights, class, l)
}

#[test]
fn chi_matches_refined_oracle_on_random_classes() {
    let mut rng = StdRng::seed_from_u64(seed());
    for case in 0..200 {
        let (w, class, l) = random_case(&mut rng);
        let fast = chi_projective(&w, &class, l).unwrap();
        let slow = chi_oracle_refined(&w, &class, l).unwrap();
        assert!(fast.equals(&slow), "case {case}: class {class}, {fast} vs {slow}");
    }
}

#[test]
fn chi_with_eight_distinct_weights() {
    let ring = CycRing::rationals();
    let reg = weights_registry(8);
    let w: Vec<LaurentPoly> = (0..8).map(|i| LaurentPoly::var_idx(&reg, &ring, i, 1)).collect();
    for m in [-10, -8, -7, -1, 0, 1, 3] {
        let class = LaurentPoly::var_idx(&reg, &ring, 8, m);
        let fast = chi_projective(&w, &class, 8).unwrap();
        let slow = chi_oracle_refined(&w, &class, 8).unwrap();
        assert!(fast.equals(&slow), "m={m}");
    }
}

#[test]
fn nonequivariant_chi_is_binomial() {
    let ring = CycRing::rationals();
    let reg = weights_registry(1);
    let one = LaurentPoly::one(&reg, &ring);
    for n in 0..=6i64 {
        let w = vec![one.clone(); n as usize + 1];
        for m in -8..=6i64 {
            let class = LaurentPoly::var_idx(&reg, &ring, 1, m as i32);
            let chi = chi_projective(&w, &class, 1).unwrap();
            let want = if m >= 0 {
                binom(n + m, n)
            } else if m < -n {
                (if n % 2 == 0 { 1 } else { -1 }) * binom(-m - 1, n)
            } else {
                0
            };
            let want = FactoredRatFunc::from_poly(LaurentPoly::int(&reg, &ring, want));
            assert!(chi.equals(&want), "P^{n}, O({m}): {chi}");
        }
    }
}

#[test]
fn laurent_parse_display_round_trip() {
    let reg = VarRegistry::quasimap(3);
    let ring = CycRing::full(4);
    for s in ["1 - x", "(1 - a_1*h^2*L^-1)*(q^3 - 2*a_2)", "a_3^-2*q + h^-1 - 7", "0", "-(x - q*a_1)^3"] {
        let p = parse_laurent(s, &reg, &ring).unwrap();
        assert_eq!(parse_laurent(&p.to_string(), &reg, &ring).unwrap(), p, "{s}");
    }
}

#[test]
fn ratfunc_parse_display_round_trip() {
    let reg = VarRegistry::quasimap(2);
    let ring = CycRing::component(3, 3).unwrap();
    for s in ["(1 - a_1)/(1 - a_2*h^2)", "x/((1 - q*a_1/a_2)^2*(1 - h^2))", "a_1^-1"] {
        let f = parse_ratfunc(s, &reg, &ring).unwrap();
        assert!(parse_ratfunc(&f.to_string(), &reg, &ring).unwrap().equals(&f), "{s}");
    }
}

#[test]
fn parse_rejects_malformed_input() {
    let reg = VarRegistry::quasimap(2);
    let ring = CycRing::full(2);
    for s in ["", "1 -", "x^", "a_7", "(x", "x/(1 + x + x^2)", "x ** 2"] {
        assert!(parse_ratfunc(s, &reg, &ring).is_err(), "{s:?} should not parse");
    }
}

#[test]
fn series_inverse_and_shift() {
    let reg = VarRegistry::quasimap(2);
    let ring = CycRing::full(2);
    let f = |s: &str| parse_ratfunc(s, &reg, &ring).unwrap();
    let m0 = Mat::from_rows(vec![vec![f("1"), f("a_1")], vec![f("0"), f("1")]]);
    let m1 = Mat::from_rows(vec![vec![f("h"), f("0")], vec![f("1/(1 - a_2)"), f("q")]]);
    let s = SeriesOperator::new(vec![m0, m1.clone(), m1]);
    let inv = s.inverse().unwrap();
    let id = SeriesOperator::identity(2, 2, &reg, &ring);
    assert!(s.mul(&inv).cancel().first_difference(&id).is_none());
    assert!(inv.mul(&s).cancel().first_difference(&id).is_none());
    // zshift(j) multiplies the z^d coefficient by q^{jd}, and shifts compose.
    let a = s.zshift(1).zshift(1);
    assert!(a.first_difference(&s.zshift(2)).is_none());
    assert!(s.zshift(2).first_difference(&s).is_none(), "q^2 = 1 in the full ring of order 2");
}
