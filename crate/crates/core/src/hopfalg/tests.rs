use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::check::all_ok;
use crate::coeffring::{Fq, Ring};
use crate::fgl::{honda_fgl, specialize_hazewinkel, Fgl, Specialization};
use crate::gseries::{Series, SeriesRing, VarSpec, VarTable};

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(7)
}

fn assert_green(checks: &[crate::check::Check]) {
    assert!(all_ok(checks), "{checks:#?}");
}

#[test]
fn exterior_axioms() {
    let f9 = Fq::new(3, 2).unwrap();
    for n in 1..=3 {
        let h = SeriesHopf::exterior(f9.clone(), n);
        assert_green(&check_axioms_sampled(&h, &mut rng(), 12));
        for i in 0..n as usize {
            let b = h.gamma().var(i);
            assert_eq!(h.psi(&b), h.pair().add(&h.left(&b), &h.right(&b)));
            assert!(h.base().is_zero(&h.eps(&b)));
        }
    }
}

#[test]
fn function_hopf_instances() {
    let inst = FunctionHopf::standard_instances().unwrap();
    assert_eq!(inst.len(), 6);
    for h in &inst {
        let checks = check_axioms_sampled(h, &mut rng(), 10);
        assert!(all_ok(&checks), "{}: {checks:#?}", h.name());
        let m = h.check_m_iso(&mut rng(), 10);
        assert!(all_ok(&m), "{}: {m:#?}", h.name());
    }
}

#[test]
fn function_hopf_formulas() {
    let h = &FunctionHopf::standard_instances().unwrap()[0];
    let r = h.ring().clone();
    let s = r.var(0);
    let tot = h.total();
    let alpha = vec![r.one(), s.clone()];
    assert_eq!(h.chi(&alpha)[1], r.neg(&s));
    assert_eq!(h.chi(&alpha)[0], r.one());
    let c = tot.constant(s.clone());
    assert_eq!(h.chi(&c), vec![s.clone(), r.neg(&s)]);
    assert_eq!(h.eps(&c), s);
    // g^2 = e in Z/2.
    assert_eq!(h.psi_at(&alpha, 1, 1), alpha[0]);
    assert_eq!(h.psi_at(&alpha, 1, 0), alpha[1]);
    let beta = vec![s.clone(), r.from_int(2)];
    let m = h.m_map(&alpha, &beta);
    // m(α, β)(g, g) = α(g)^g β(g) = (-s) * 2
    assert_eq!(m[3], r.scale_int(&s, -2));
}

#[test]
fn s3_multiplication_is_composition() {
    let g = FiniteGroup::symmetric3();
    for a in 0..6 {
        for b in 0..6 {
            let (pa, pb, pab) = (FiniteGroup::s3_perm(a), FiniteGroup::s3_perm(b), FiniteGroup::s3_perm(g.mul(a, b)));
            for i in 0..3 {
                assert_eq!(pab[i], pb[pa[i]]);
            }
            assert_eq!(FiniteGroup::s3_sign(g.mul(a, b)), FiniteGroup::s3_sign(a) * FiniteGroup::s3_sign(b));
        }
    }
}

#[test]
fn bad_action_is_rejected() {
    let f3 = Fq::prime(3).unwrap();
    let r = SeriesRing::new(f3, VarTable::new(vec![VarSpec::even("s", 0, Some(2))]));
    // s -> s + 1 does not respect s^2 = 0.
    let img = r.add(&r.var(0), &r.one());
    let act = RingAction::new(r.clone(), vec![0, 0], vec![vec![r.var(0)], vec![img]]);
    assert!(FunctionHopf::new("bad", FiniteGroup::cyclic(2), act).is_err());
}

fn composite(n: u32) -> CompositeHopf<Fq> {
    CompositeHopf::with_default_bound(Fq::new(3, 2).unwrap(), 3, n).unwrap()
}

#[test]
fn composite_axioms_and_extension() {
    for n in 1..=3 {
        let h = composite(n);
        assert_green(&check_axioms_sampled(h.hopf(), &mut rng(), 10));
        assert_green(&check_axioms_sampled(h.c_part(), &mut rng(), 6));
        assert_green(&h.check_extension());
    }
}

#[test]
fn composite_psi_b_values() {
    let h = composite(2);
    let pair = h.hopf().pair();
    let g = h.hopf().ngens();
    let b = |side: usize, i: u32| pair.var(side * g + h.b_index(i));
    let t1_right = pair.var(g);
    let psi0 = h.composite_psi_b(0).unwrap();
    assert_eq!(psi0, pair.add(&b(1, 0), &b(0, 0)));
    let psi1 = h.composite_psi_b(1).unwrap();
    let want = pair.sum_all([b(1, 1), pair.mul(&b(0, 0), &t1_right), b(0, 1)]);
    assert_eq!(psi1, want);
    let gamma = h.gamma();
    let collapsed = h.hopf().eps_left(&psi1);
    assert!(h.hopf().base().is_zero(&h.hopf().eps(&collapsed)));
    assert_eq!(collapsed, gamma.var(h.b_index(1)));
    assert!(matches!(h.composite_psi_b(2), Err(crate::Error::IndexOutOfRange { index: 2, bound: 2 })));
}

#[test]
fn corrupted_psi_fails_coassociativity_at_b1() {
    let h = composite(2);
    let bad = h.corrupted(1).unwrap();
    let checks = check_axioms(&bad, &bad.generators());
    let co = checks.iter().find(|c| c.name == "coassociativity").unwrap();
    assert!(!co.ok);
    assert!(co.witness.as_ref().unwrap().starts_with("at b1:"), "{co:?}");
}

#[test]
fn two_route_psi_honda() {
    for n in 1..=3u32 {
        let fq = Fq::new(3, n).unwrap();
        let h = CompositeHopf::with_default_bound(fq.clone(), 3, n).unwrap();
        let law = honda_fgl(n, &fq, 3u32.pow(n) + 1).unwrap();
        let derived = derive_psi_from_coaction(&h, &law).unwrap();
        for i in 0..n {
            assert_eq!(derived[i as usize], h.composite_psi_b(i).unwrap(), "n={n} i={i}");
        }
    }
}

#[test]
fn two_route_psi_deformation_law() {
    let fq = Fq::new(3, 2).unwrap();
    let h = CompositeHopf::with_default_bound(fq.clone(), 3, 2).unwrap();
    let law = specialize_hazewinkel(&Specialization::e_law(3, 2), &fq, 10).unwrap();
    let derived = derive_psi_from_coaction(&h, &law).unwrap();
    for i in 0..2 {
        assert_eq!(derived[i as usize], h.composite_psi_b(i).unwrap());
    }
}

#[test]
fn two_route_psi_additive_law() {
    let fq = Fq::prime(5).unwrap();
    let h = CompositeHopf::with_default_bound(fq.clone(), 5, 1).unwrap();
    let law = Fgl::additive(fq, 5, 6);
    let derived = derive_psi_from_coaction(&h, &law).unwrap();
    assert_eq!(derived[0], h.composite_psi_b(0).unwrap());
}

#[test]
fn derive_rejects_low_height_and_short_laws() {
    let fq = Fq::prime(3).unwrap();
    let h = CompositeHopf::with_default_bound(fq.clone(), 3, 2).unwrap();
    let mult = Fgl::multiplicative(fq.clone(), 3, 12);
    assert!(matches!(derive_psi_from_coaction(&h, &mult), Err(crate::Error::HeightTooLow(2))));
    let short = Fgl::additive(fq, 3, 5);
    assert!(matches!(derive_psi_from_coaction(&h, &short), Err(crate::Error::PrecisionExhausted(_))));
}

#[test]
fn lambda_c_coaction_three_ways() {
    for n in 1..=3 {
        let h = composite(n);
        let lc = h.lambda_c_ring();
        let nb = n as usize;
        let via_psi = h.lambda_c_coaction();
        let via_series = h.lambda_c_coaction_from_series();
        assert_eq!(via_psi, via_series);
        for i in 0..n {
            let want = lc.sum_all((0..=i).map(|j| {
                let t = if i == j { lc.one() } else { lc.var(nb + (i - j) as usize - 1) };
                lc.mul(&lc.var(j as usize), &lc.pow(&t, 3u64.pow(j)))
            }));
            assert_eq!(via_psi[i as usize], want);
        }
    }
}

/// Coefficients of `t^{-1}` via generic series reversion.
fn reversion_inverse(fq: &Fq, a: &[u32], n: u32) -> Vec<u32> {
    let cap = 3u32.pow(n);
    let r = SeriesRing::new(fq.clone(), VarTable::new(vec![VarSpec::even("X", 0, None)]).with_cap(cap));
    let t = r.sum_all(a.iter().enumerate().map(|(k, c)| r.monomial(vec![3i32.pow(k as u32)], *c)));
    let inv = r.reverse(&t).unwrap();
    (0..n).map(|k| r.coeff(&inv, &[3i32.pow(k)])).collect()
}

#[test]
fn group_action_on_lambda() {
    let h = composite(2);
    let fq = h.gamma().base().clone();
    let id = h.act_on_lambda(&[fq.one()]).unwrap();
    assert_eq!(id, vec![vec![fq.one(), fq.zero()], vec![fq.zero(), fq.one()]]);
    let (a0, a1) = (fq.from_index(5), fq.from_index(2));
    let m = h.act_on_lambda(&[a0, a1]).unwrap();
    let c = reversion_inverse(&fq, &[a0, a1], 2);
    assert_eq!(m[0], vec![c[0], fq.zero()]);
    assert_eq!(m[1], vec![c[1], fq.pow(&c[0], 3)]);
    assert!(matches!(h.act_on_lambda_via_chi(&[a0, a1]), Err(crate::Error::InvalidWitness(_))));
    let strict = [fq.one(), a1];
    assert_eq!(h.act_on_lambda(&strict).unwrap(), h.act_on_lambda_via_chi(&strict).unwrap());
    assert!(matches!(h.act_on_lambda(&[fq.zero(), a1]), Err(crate::Error::InvalidWitness(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn action_routes_agree(a0 in 1u64..27, a1 in 0u64..27, a2 in 0u64..27) {
        let fq = Fq::new(3, 3).unwrap();
        let h = CompositeHopf::with_default_bound(fq.clone(), 3, 3).unwrap();
        let strict = [fq.one(), fq.from_index(a1), fq.from_index(a2)];
        prop_assert_eq!(h.act_on_lambda(&strict).unwrap(), h.act_on_lambda_via_chi(&strict).unwrap());
        let a = [fq.from_index(a0), fq.from_index(a1), fq.from_index(a2)];
        let m = h.act_on_lambda(&a).unwrap();
        let c = reversion_inverse(&fq, &a, 3);
        for i in 0..3 {
            prop_assert_eq!(m[i][0], c[i]);
        }
    }

    #[test]
    fn function_algebroid_antipode_on_random_elements(seed in 0u64..1000, which in 0usize..6) {
        let inst = FunctionHopf::standard_instances().unwrap();
        let h = &inst[which];
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let x = h.random_elem(&mut r);
        let samples = vec![("x".to_string(), x)];
        prop_assert!(all_ok(&check_axioms(h, &samples)));
    }
}

#[test]
fn series_sample_names_are_products() {
    let h = composite(1);
    let s = sample_set(h.hopf(), &mut rng(), 3);
    assert_eq!(s.len(), h.hopf().ngens() + 3);
    assert!(s[h.hopf().ngens()].0.contains('*'));
    let _: &Series<u32> = &s[0].1;
}
