use num_rational::BigRational;
use proptest::prelude::*;

use super::log::{honda_log, log_depth, reduce_series};
use super::*;
use crate::check::all_ok;
use crate::coeffring::{Fq, Rationals, Ring, ZERO};
use crate::gseries::{Series, SeriesRing, VarSpec, VarTable};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `exp(p log X)` over the rationals, inverting the log with series reversion.
fn p_series_from_log(params: &[VarSpec], log: &[(u32, Series<BigRational>)], fq: &Fq, trunc: u32) -> Series<u32> {
    let mut vars = params.to_vec();
    vars.push(VarSpec::even("X", 0, None));
    let r = SeriesRing::new(Rationals, VarTable::new(vars).with_cap(trunc));
    let pr = SeriesRing::new(Rationals, VarTable::new(params.to_vec()));
    let slots: Vec<usize> = (0..params.len()).collect();
    let np = params.len();
    let l = r.sum_all(log.iter().map(|(d, c)| r.mul(&pr.embed(c, &r, &slots), &r.var_pow(np, *d as i32))));
    let e = r.reverse_var(&l, np).unwrap();
    let pl = r.scale(&l, &BigRational::from_integer((fq.p() as i64).into()));
    let s = r.compose_var(&e, np, &pl).unwrap();
    reduce_series(&s, fq).unwrap()
}

#[test]
fn hazewinkel_first_coefficients() {
    let hz = PTypicalLog::new(3, 3);
    assert!(hz.check_recursion());
    let r = &hz.ring;
    assert_eq!(hz.coeffs[1], r.scale(&r.var(0), &q(1, 3)));
    let m2 = r.add(&r.scale(&r.var(1), &q(1, 3)), &r.scale(&r.var_pow(0, 4), &q(1, 9)));
    assert_eq!(hz.coeffs[2], m2);
}

#[test]
fn log_depth_counts_powers_below_truncation() {
    assert_eq!(log_depth(3, 12), 2);
    assert_eq!(log_depth(3, 9), 1);
    assert_eq!(log_depth(3, 10), 2);
}

#[test]
fn honda_height_one_p_series() {
    let fq = Fq::prime(3).unwrap();
    let h = honda_fgl(1, &fq, 28).unwrap();
    let r1 = h.ring1();
    let ps = h.p_series().unwrap();
    assert_eq!(ps, r1.var_pow(0, 3));
    let oracle = p_series_from_log(&[], &honda_log(3, 1, 28), &fq, 28);
    assert_eq!(ps, oracle);
    assert_eq!(h.apply(h.ring2(), &h.ring2().var(0), &h.ring2().zero()).unwrap(), h.ring2().var(0));
}

#[test]
fn honda_height_two_at_three() {
    let fq = Fq::new(3, 2).unwrap();
    let h = honda_fgl(2, &fq, 27).unwrap();
    assert!(h.check_strict_height(2).ok);
    assert_eq!(h.p_series().unwrap(), h.ring1().var_pow(0, 9));
    assert_eq!(h.height().unwrap(), Some(2));
}

#[test]
fn honda_needs_the_right_field() {
    let fq = Fq::new(3, 3).unwrap();
    assert!(matches!(honda_fgl(2, &fq, 12), Err(crate::Error::InvalidField(_))));
}

#[test]
fn k_specialization_is_honda() {
    for (p, n) in [(3u64, 1u32), (3, 2), (5, 1)] {
        let fq = Fq::new(p, n).unwrap();
        let trunc = p.pow(2 * n) as u32 + 1;
        let k = specialize_hazewinkel(&Specialization::k_law(p, n), &fq, trunc).unwrap();
        let h = honda_fgl(n, &fq, trunc).unwrap();
        assert_eq!(k.law(), h.law(), "p={p} n={n}");
    }
}

#[test]
fn zero_specialization_is_additive() {
    let fq = Fq::prime(5).unwrap();
    let f = specialize_hazewinkel(&Specialization::zero(), &fq, 30).unwrap();
    assert_eq!(f.law(), Fgl::additive(fq.clone(), 5, 30).law());
    assert!(f.p_series().unwrap().is_empty());
    assert_eq!(f.height().unwrap(), None);
}

#[test]
fn e_law_p_series_at_three() {
    let fq = Fq::prime(3).unwrap();
    let n = 12;
    let e = specialize_hazewinkel(&Specialization::e_law(3, 1), &fq, n).unwrap();
    let r1 = e.ring1();
    let ps = e.p_series().unwrap();
    // Lowest term u1 X^3, and X^9 with unit coefficient at u1 = 0.
    let low = r1.sorted_terms(&ps)[0];
    assert_eq!(low.0, &vec![1, 3]);
    assert!(r1.base().is_one(low.1));
    assert!(!r1.base().is_zero(&r1.coeff(&ps, &[0, 9])));
    assert!(ps.terms.keys().all(|e| e[1] >= 3 && e[1] % 3 == 0));
    assert_eq!(e.height().unwrap(), Some(2));

    // Independent route: exp(3 log X) with the log specialized by hand.
    // v1 -> u1, v2 -> 1: m1 = u1/3, m2 = 1/3 + u1^4/9.
    let pr = SeriesRing::new(Rationals, VarTable::new(vec![VarSpec::param("u1", 0)]));
    let log = vec![
        (1, pr.one()),
        (3, pr.scale(&pr.var(0), &q(1, 3))),
        (9, pr.add(&pr.constant(q(1, 3)), &pr.scale(&pr.var_pow(0, 4), &q(1, 9)))),
    ];
    assert_eq!(ps, p_series_from_log(&[VarSpec::param("u1", 0)], &log, &fq, n));
}

#[test]
fn grading_is_checked() {
    let fq = Fq::prime(3).unwrap();
    let mut spec = Specialization::e_law(3, 1);
    let r = spec.ring.clone();
    spec.assignments[0].1 = r.monomial(vec![1, -1], r.base().one());
    assert!(matches!(specialize_hazewinkel(&spec, &fq, 12), Err(crate::Error::GradingMismatch(_))));
}

#[test]
fn axiom_suite_small_cases() {
    for (p, n) in [(3u64, 1u32), (5, 1)] {
        let fq = Fq::for_heights(p, n).unwrap();
        let trunc = default_trunc(p, n);
        let laws = [
            honda_fgl(n, &fq, trunc).unwrap(),
            specialize_hazewinkel(&Specialization::e_law(p, n), &fq, trunc).unwrap(),
        ];
        for f in &laws {
            let checks = f.check_axioms().unwrap();
            assert!(all_ok(&checks), "{checks:?}");
            assert!(f.check_strict_height(n).ok);
        }
    }
}

#[test]
fn multiplicative_and_additive_p_series() {
    let fq = Fq::prime(3).unwrap();
    let m = Fgl::multiplicative(fq.clone(), 3, 20);
    assert_eq!(m.p_series().unwrap(), m.ring1().var_pow(0, 3));
    assert!(all_ok(&m.check_axioms().unwrap()));
    let a = Fgl::additive(fq.clone(), 3, 20);
    assert!(a.p_series().unwrap().is_empty());
}

#[test]
fn formal_inverse_cancels() {
    let fq = Fq::new(3, 2).unwrap();
    let h = honda_fgl(2, &fq, 30).unwrap();
    let inv = h.formal_inverse().unwrap();
    let r1 = h.ring1();
    assert!(h.apply(&r1, &r1.var(0), &inv).unwrap().is_empty());
}

#[test]
fn formal_sum_edge_cases() {
    let fq = Fq::prime(3).unwrap();
    let h = honda_fgl(1, &fq, 12).unwrap();
    let r1 = h.ring1();
    let s = r1.add(&r1.var(0), &r1.var_pow(0, 2));
    assert_eq!(h.formal_sum(&r1, std::slice::from_ref(&s)).unwrap(), s);
    assert!(h.formal_sum(&r1, &[]).unwrap().is_empty());
    let bad = r1.add(&s, &r1.one());
    assert_eq!(h.formal_sum(&r1, &[s, bad]), Err(crate::Error::NonzeroConstantTerm));
    let a = Fgl::additive(fq.clone(), 3, 12);
    let ra = a.ring1();
    let terms: Vec<_> = (0..3).map(|i| ra.var_pow(0, 3i32.pow(i))).collect();
    assert_eq!(a.formal_sum(&ra, &terms).unwrap(), ra.sum_all(terms.clone()));
}

#[test]
fn formal_sum_linearizes_below_p_to_the_n() {
    // Strict height >= n: sum^F a_i X^(p^i) = sum a_i X^(p^i) mod X^(p^n).
    let fq = Fq::new(3, 2).unwrap();
    let f = specialize_hazewinkel(&Specialization::e_law(3, 2), &fq, 30).unwrap();
    let r1 = f.ring1();
    let a0 = fq.root();
    let a1 = fq.from_int(2);
    let terms = vec![r1.scale(&r1.var(1), &a0), r1.scale(&r1.var_pow(1, 3), &a1)];
    let s = f.formal_sum(&r1, &terms).unwrap();
    let low = r1.truncate_weight(&s, 9);
    assert_eq!(low, r1.sum_all(terms));
}

#[test]
fn honda_endo_examples() {
    let fq = Fq::prime(3).unwrap();
    let h = honda_fgl(1, &fq, 28).unwrap();
    let r1 = h.ring1();
    let id = h.honda_endo(&[fq.one()]).unwrap();
    assert_eq!(id.series, r1.var(0));
    assert!(id.is_automorphism());
    let frob = h.honda_endo(&[ZERO, fq.one()]).unwrap();
    assert_eq!(frob.series, r1.var_pow(0, 3));
    // At height 1 the Frobenius endomorphism is [p], so its square is [p] o [p].
    let ps = h.p_series().unwrap();
    assert_eq!(frob.series, ps);
    let ff = h.endo_compose(&frob, &frob).unwrap();
    assert_eq!(ff.series, r1.compose(&ps, &ps).unwrap());
    assert_eq!(ff.coeffs, vec![ZERO, ZERO, fq.one()]);
}

#[test]
fn honda_endo_rejects_large_coefficients() {
    let fq = Fq::new(3, 2).unwrap();
    let h = honda_fgl(1, &fq, 12).unwrap();
    assert!(matches!(h.honda_endo(&[fq.root()]), Err(crate::Error::CoefficientNotInFpn(_))));
}

#[test]
fn endo_recognition_round_trip() {
    let fq = Fq::new(3, 2).unwrap();
    let h = honda_fgl(2, &fq, 30).unwrap();
    let t = h.honda_endo(&[fq.root(), fq.from_int(2), fq.from_index(5)]).unwrap();
    assert_eq!(h.recognize_endo(&t.series).unwrap(), Some(t.coeffs.clone()));
    let r1 = h.ring1();
    let not_endo = r1.add(&r1.var(0), &r1.var_pow(0, 2));
    assert_eq!(h.recognize_endo(&not_endo).unwrap(), None);
}

#[test]
fn base_extension_commutes_with_constructions() {
    let small = Fq::new(3, 2).unwrap();
    let big = Fq::new(3, 4).unwrap();
    let emb = small.embedding_into(&big).unwrap();
    let trunc = default_trunc(3, 1);
    let e_small = specialize_hazewinkel(&Specialization::e_law(3, 1), &small, trunc).unwrap();
    let e_big = specialize_hazewinkel(&Specialization::e_law(3, 1), &big, trunc).unwrap();
    assert_eq!(e_small.map_base(big.clone(), |c| emb.apply(*c)).law(), e_big.law());
    let h_small = honda_fgl(2, &small, 30).unwrap();
    let h_big = honda_fgl(2, &big, 30).unwrap();
    assert_eq!(h_small.map_base(big.clone(), |c| emb.apply(*c)).law(), h_big.law());
    let coeffs = [small.root(), small.from_int(2)];
    let t_small = h_small.honda_endo(&coeffs).unwrap();
    let big_coeffs: Vec<u32> = coeffs.iter().map(|c| emb.apply(*c)).collect();
    let t_big = h_big.honda_endo(&big_coeffs).unwrap();
    let r1 = h_small.ring1();
    let moved = r1.change_base(&t_small.series, &h_big.ring1(), |c| Ok(emb.apply(*c))).unwrap();
    assert_eq!(moved, t_big.series);
}

fn f9_elem() -> impl Strategy<Value = u32> {
    (0u64..9).prop_map(|k| Fq::new(3, 2).unwrap().from_index(k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn formal_sum_ignores_bracketing(a in f9_elem(), b in f9_elem(), c in f9_elem()) {
        let fq = Fq::new(3, 2).unwrap();
        let h = honda_fgl(2, &fq, 30).unwrap();
        let r1 = h.ring1();
        let s: Vec<_> = [(a, 1), (b, 3), (c, 2)]
            .iter()
            .map(|(k, d)| r1.scale(&r1.var_pow(0, *d), k))
            .collect();
        let left = h.formal_sum(&r1, &s).unwrap();
        let inner = h.apply(&r1, &s[1], &s[2]).unwrap();
        let right = h.apply(&r1, &s[0], &inner).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn endos_close_under_composition_and_sum(
        a0 in f9_elem(), a1 in f9_elem(), b0 in f9_elem(), b1 in f9_elem()
    ) {
        let fq = Fq::new(3, 2).unwrap();
        let h = honda_fgl(2, &fq, 30).unwrap();
        let a = h.honda_endo(&[a0, a1]).unwrap();
        let b = h.honda_endo(&[b0, b1]).unwrap();
        let ab = h.endo_compose(&a, &b).unwrap();
        prop_assert!(h.check_endomorphism(&ab.series).unwrap().ok);
        let s = h.endo_add(&a, &b).unwrap();
        prop_assert!(h.check_endomorphism(&s.series).unwrap().ok);
        // Composition distributes over the formal sum on the left.
        let c = h.honda_endo(&[a1, b0]).unwrap();
        let r1 = h.ring1();
        let lhs = r1.compose(&c.series, &s.series).unwrap();
        let ca = r1.compose(&c.series, &a.series).unwrap();
        let cb = r1.compose(&c.series, &b.series).unwrap();
        prop_assert_eq!(lhs, h.apply(&r1, &ca, &cb).unwrap());
        prop_assert_eq!(ab.is_automorphism(), a.is_automorphism() && b.is_automorphism());
    }
}
