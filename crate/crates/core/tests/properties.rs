mod common;

use balans::balancing::{
    balancer_of, cobalancing_orbit, defining_identity, find_all, pell, square_balancer_of,
    square_solutions, CoeffPair, Variant,
};
use balans::exactnum::{
    int, isqrt, nearest_rat, perfect_square, poly_eval_interval, rat, real_root_enclosure, Int,
    Rat, RatInterval,
};
use balans::recdetect::{detect_fixed, detect_minimal};
use balans::recipsum::{
    certified_sum, check_theorem_14, inverse_answer, tribonacci_partial_sum, Mode, Outcome,
};
use balans::sequences::{cobalancing_rec, pell as pell_seq, GenericRecurrence};
use common::*;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn big(limbs: Vec<u32>) -> Int {
    Int::from(BigUint::from_slice(&limbs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn isqrt_brackets_512_bit_values(limbs in prop::collection::vec(any::<u32>(), 1..=16)) {
        let x = big(limbs);
        let s = isqrt(&x).unwrap();
        prop_assert!(&s * &s <= x);
        let s1 = &s + 1;
        prop_assert!(x < &s1 * &s1);
    }

    #[test]
    fn perfect_square_recognises_squares(limbs in prop::collection::vec(any::<u32>(), 1..=8)) {
        let v = big(limbs);
        prop_assert_eq!(perfect_square(&(&v * &v)), Some(v.clone()));
        if v >= Int::one() {
            prop_assert_eq!(perfect_square(&(&v * &v + 1)), None);
        }
    }

    #[test]
    fn rational_sums_are_reduced(p in -10_000i64..10_000, q in 1i64..10_000, u in -10_000i64..10_000, w in 1i64..10_000) {
        let s = rat(p, q) + rat(u, w);
        prop_assert!(s.numer().gcd(s.denom()).is_one());
        prop_assert!(s.denom().is_positive());
    }

    #[test]
    fn root_enclosure_straddles_zero(num in -200i64..200, den in 1i64..20, c in 1i64..50, bits in 4usize..80) {
        // (x - num/den)(x^2 + c) has exactly one real root
        let r0 = rat(num, den);
        let coeffs = vec![rat(1, 1), -r0.clone(), rat(c, 1), -r0.clone() * rat(c, 1)];
        let width = Rat::new(Int::one(), num_traits::pow(Int::from(2), bits));
        let e = real_root_enclosure(&coeffs, &RatInterval::from_ints(-201, 201), &width).unwrap();
        prop_assert!(poly_eval_interval(&coeffs, &e).contains_zero());
        prop_assert!(e.contains(&r0));
        prop_assert!(e.width() <= width);
    }

    #[test]
    fn nearest_minimises_distance(p in -100_000i64..100_000, q in 1i64..1000) {
        let x = rat(p, q);
        if let Ok(k) = nearest_rat(&x) {
            let d = |m: &Int| (&x - Rat::from_integer(m.clone())).abs();
            prop_assert!(d(&k) <= d(&(&k - 1)));
            prop_assert!(d(&k) <= d(&(&k + 1)));
            prop_assert!(d(&k) < rat(1, 2));
        }
    }

    #[test]
    fn terms_satisfy_their_recurrence(
        coeffs in prop::collection::vec(-5i64..6, 1..5),
        constant in -5i64..6,
        init in prop::collection::vec(-20i64..20, 4),
        start in -6i64..3,
    ) {
        let d = coeffs.len();
        let mut coeffs: Vec<Rat> = coeffs.into_iter().map(r).collect();
        if coeffs[d - 1].is_zero() {
            coeffs[d - 1] = r(1);
        }
        let rec = GenericRecurrence::new(coeffs, r(constant), init[..d].iter().map(|&v| r(v)).collect(), 0, "t").unwrap();
        let w = rec.window(start, 25).unwrap();
        for i in d..w.terms.len() {
            prop_assert_eq!(rec.step(&w.terms[i - d..i]), w.terms[i].clone());
        }
    }

    #[test]
    fn backward_then_forward_round_trip(
        coeffs in prop::collection::vec(-4i64..5, 1..5),
        init in prop::collection::vec(-20i64..20, 4),
        k in 1i64..15,
    ) {
        let d = coeffs.len();
        let mut coeffs: Vec<Rat> = coeffs.into_iter().map(r).collect();
        if coeffs[d - 1].is_zero() {
            coeffs[d - 1] = r(-1);
        }
        let initial: Vec<Rat> = init[..d].iter().map(|&v| r(v)).collect();
        let rec = GenericRecurrence::new(coeffs, r(2), initial.clone(), 0, "t").unwrap();
        let back = rec.window(-k, d).unwrap().terms;
        let moved = rec.with_initial(back, -k).unwrap();
        prop_assert_eq!(moved.window(0, d).unwrap().terms, initial);
    }

    #[test]
    fn squared_term_identity_with_constant(q in 2i64..30, s in 1i64..20) {
        let c = constant_shape(q, s).window(0, 30).unwrap().terms;
        for n in 1..29 {
            prop_assert_eq!(&c[n] * &c[n], &c[n + 1] * &c[n - 1] + r(s) * &c[n]);
        }
    }

    #[test]
    fn squared_term_identity_homogeneous(q in -10i64..10, rr in -10i64..10, t in -5i64..6) {
        prop_assume!(rr != 0);
        let c = homogeneous_shape(q, rr, t).window(0, 25).unwrap().terms;
        for n in 1..24usize {
            let tail = r(t * t) * num_traits::pow(r(-rr), n - 1);
            prop_assert_eq!(&c[n] * &c[n], &c[n + 1] * &c[n - 1] + tail);
        }
    }

    #[test]
    fn differences_grow_linearly(q in 3i64..30, rr in -1i64..10, t in 1i64..6) {
        prop_assume!(rr != 0);
        let c = homogeneous_shape(q, rr, t).window(0, 30).unwrap().terms;
        for n in 1..30usize {
            prop_assert!(&c[n] - &c[n - 1] >= r(n as i64 * t));
        }
    }
}

#[test]
fn pell_breaks_the_linear_growth_bound() {
    let p = pell_seq().window(0, 3).unwrap().terms;
    assert!(&p[2] - &p[1] < r(2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn detection_round_trip(rec in theorem_family(), offset in 0i64..6) {
        let d = rec.depth();
        let with_constant = !rec.constant.is_zero();
        let len = 2 * (d + 1) + 2;
        let terms = rec.window(offset, len).unwrap().terms;
        let fixed = detect_fixed(&terms, d, with_constant).unwrap().expect("full-rank window");
        prop_assert_eq!(&fixed.recurrence.coeffs, &rec.coeffs);
        prop_assert_eq!(&fixed.recurrence.constant, &rec.constant);
        let minimal = detect_minimal(&terms, 5).expect("some depth fits");
        prop_assert_eq!(&minimal.recurrence.coeffs, &rec.coeffs);
        prop_assert_eq!(&minimal.recurrence.constant, &rec.constant);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enclosures_nest_and_contain_longer_sums(spec in sum_family(), p in 2usize..24) {
        prop_assert!(nests(&spec, p), "{:?} at {}", spec, p);
    }

    #[test]
    fn verdicts_agree_with_longer_direct_sums(spec in sum_family(), nearest in any::<bool>()) {
        let mode = if nearest { Mode::Nearest } else { Mode::Floor };
        if let Ok(v) = inverse_answer(&spec, mode, 256) {
            prop_assert!(oracle_agrees(&spec, &v.sum));
            let inv = oracle_interval(&spec, &v.sum).recip().unwrap();
            let again = match mode {
                Mode::Floor => inv.common_floor(),
                Mode::Nearest => inv.common_nearest(),
            };
            prop_assert_eq!(again, Some(v.answer));
        }
    }

    #[test]
    fn solutions_pass_the_defining_identity(a in 1u64..40, b in 1u64..40, balancing in any::<bool>()) {
        prop_assume!(a.gcd(&b) == 1);
        let c = CoeffPair::from_u64(a, b).unwrap();
        let v = if balancing { Variant::Balancing } else { Variant::Cobalancing };
        let plain = find_all(&c, v, 3000);
        for s in &plain {
            prop_assert!(defining_identity(s, &c));
        }
        let mut ns: Vec<&Int> = plain.iter().map(|s| &s.n).collect();
        ns.dedup();
        prop_assert_eq!(ns.len(), plain.len());
        for s in pell::enumerate(&c, v, &Int::from(3000u64), 64) {
            prop_assert!(plain.contains(&s));
        }
        let squares = square_solutions(&c, v, 300);
        for s in &squares {
            prop_assert!(defining_identity(s, &c));
            prop_assert_eq!(square_balancer_of(&s.n, &c, v), Some(s.r.clone()));
        }
    }
}

#[test]
fn three_methods_agree_on_cobalancing_numbers() {
    let limit = Int::from(10u64.pow(12));
    for (a, b) in [(1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (2, 1), (2, 3), (2, 5)] {
        let c = CoeffPair::from_u64(a, b).unwrap();
        let orbit = cobalancing_orbit(&c, &limit).unwrap();
        let rec = cobalancing_rec(&int(a as i64), &int(b as i64)).unwrap();
        let window: Vec<Int> = rec
            .window(1, orbit.len())
            .unwrap()
            .terms
            .iter()
            .map(|t| t.to_integer())
            .collect();
        assert_eq!(orbit, window, "({a},{b})");
        let scanned: Vec<Int> = find_all(&c, Variant::Cobalancing, 200_000).into_iter().map(|s| s.n).collect();
        assert_eq!(scanned, orbit[..scanned.len()].to_vec(), "({a},{b})");
        assert!(orbit.len() > scanned.len() || scanned.len() == orbit.len());
        for n in &scanned {
            assert!(balancer_of(n, &c, Variant::Cobalancing).is_some());
        }
    }
}

#[test]
fn hypothesis_failure_is_vacuous_not_failure() {
    // q = 2, s = 5: c_n = 5n(n+1)/2, the side condition fails for every n and the
    // inverse sum is exactly 5n/2 (an integer for even n, so its floor never settles)
    let rec = constant_shape(2, 5);
    for n in [1, 3, 5] {
        let rep = check_theorem_14(&rec, n).unwrap();
        assert_eq!(rep.hypothesis, Some(false));
        assert_eq!(rep.outcome, Outcome::Vacuous);
        assert_eq!(rep.computed, Some(int(5 * n / 2)));
        assert_eq!(rep.matched, Some(false));
    }
}

#[test]
fn partial_sum_closed_form_to_200() {
    for k in 0..=200 {
        let (closed, direct) = tribonacci_partial_sum(k).unwrap();
        assert_eq!(closed, direct, "k = {k}");
    }
}

#[test]
fn linear_growth_shape_uses_quadratic_certificate() {
    let spec = balans::recipsum::SumSpec::plain(constant_shape(2, 1), 1, 1);
    // linear-growth shape: no ratio certificate, quadratic growth instead
    let enc = certified_sum(&spec, 64).unwrap();
    assert!(matches!(
        enc.certificate,
        balans::recipsum::TailCertificate::QuadraticGrowth { .. }
    ));
    assert!(enc.interval.contains(&direct_partial_sum(&spec, 640)));
}
