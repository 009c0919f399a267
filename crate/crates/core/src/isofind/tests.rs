use super::solve::binom_mod_p;
use super::*;
use crate::check::all_ok;
use crate::coeffring::{Fq, Ring, ZERO};
use crate::fgl::{honda_fgl, specialize_hazewinkel, Specialization};
use crate::gseries::VarSpec;

fn e_law_iso(trunc: u32) -> FglIso {
    let fq = Fq::for_heights(3, 1).unwrap();
    let f = specialize_hazewinkel(&Specialization::e_law(3, 1), &fq, 28).unwrap();
    let h = honda_fgl(1, &fq, 28).unwrap();
    solve_phi(&f, &h, trunc, 6).unwrap()
}

#[test]
fn lucas_binomials() {
    for k in 0..30u64 {
        for j in 0..=k {
            let mut c = 1u128;
            for i in 0..j {
                c = c * (k - i) as u128 / (i + 1) as u128;
            }
            assert_eq!(binom_mod_p(k, j, 3), (c % 3) as u64, "C({k},{j})");
        }
    }
}

#[test]
fn honda_to_itself_is_identity() {
    let fq = Fq::new(3, 2).unwrap();
    let h = honda_fgl(1, &fq, 28).unwrap();
    let iso = solve_phi(&h, &h, 12, 4).unwrap();
    assert_eq!(iso.phi, iso.ring1.var(0));
    assert!(iso.tower.generators().is_empty());
    assert_eq!(iso.tower.ramification(), 1);
}

#[test]
fn e_law_solution_at_three() {
    let iso = e_law_iso(11);
    assert_eq!(iso.tower.ramification(), 2);
    assert!(iso.tower.check_rules());
    assert!(iso.check_leading_relation().ok);
    let checks = verify_iso(&iso).unwrap();
    assert!(all_ok(&checks), "{checks:?}");
    assert!(iso.steps.iter().all(|s| matches!(s, SolverStep::Kummer { .. } | SolverStep::Additive { .. } | SolverStep::Linear { .. })));
}

#[test]
fn e_law_solution_by_brute_expansion() {
    // Independent check: expand sum c_k F^k and H(phi X, phi Y) with plain powers.
    let iso = e_law_iso(11);
    let r2 = iso.source.ring2().clone();
    let t = &iso.tower;
    let (x, y) = (r2.var(0), r2.var(1));
    let eval = |s: &crate::gseries::Series<_>| {
        let mut acc = r2.zero();
        for (e, c) in &iso.phi.terms {
            acc = r2.add(&acc, &r2.scale(&r2.pow(s, e[0] as u64), c));
        }
        acc
    };
    let mut lhs_arg = r2.zero();
    for (e, c) in &iso.source.law().terms {
        let m = r2.mul(&r2.pow(&x, e[0] as u64), &r2.pow(&y, e[1] as u64));
        lhs_arg = r2.add(&lhs_arg, &r2.scale(&m, c));
    }
    let lhs = eval(&lhs_arg);
    let (px, py) = (eval(&x), eval(&y));
    let mut rhs = r2.zero();
    for (e, c) in &iso.target.law().terms {
        let m = r2.mul(&r2.pow(&px, e[0] as u64), &r2.pow(&py, e[1] as u64));
        rhs = r2.add(&rhs, &r2.scale(&m, c));
    }
    assert_eq!(lhs, rhs);
    let _ = t;
}

#[test]
fn corruption_is_located() {
    let iso = e_law_iso(11);
    let r1 = &iso.ring1;
    let bad = r1.add(&iso.phi, &r1.monomial(vec![4], iso.tower.one()));
    let bad_iso = iso.with_phi(bad).unwrap();
    let checks = verify_iso(&bad_iso).unwrap();
    assert!(!checks[0].ok);
    // (X + Y)^4 - X^4 - Y^4 first differs at X^3*Y.
    assert!(checks[0].witness.as_deref().unwrap().starts_with("X^3*Y:"), "{:?}", checks[0]);
}

#[test]
fn post_composition_with_automorphisms() {
    let fq = Fq::for_heights(3, 1).unwrap();
    let h = honda_fgl(1, &fq, 11).unwrap();
    let iso = e_law_iso(11);
    let two = fq.from_int(2);
    let endo = h.honda_endo(&[two, fq.one()]).unwrap();
    let src = h.ring1();
    let t = super::solve::series_into_tower(&src, &endo.series, 0, &iso.tower, &iso.ring1).unwrap();
    let other = iso.with_phi(iso.ring1.compose(&t, &iso.phi).unwrap()).unwrap();
    assert!(all_ok(&verify_iso(&other).unwrap()));
}

#[test]
fn stabilizer_equivariance() {
    let fq = Fq::for_heights(3, 1).unwrap();
    let h = honda_fgl(1, &fq, 11).unwrap();
    let iso = e_law_iso(11);
    for coeffs in [vec![fq.one()], vec![fq.from_int(2)], vec![fq.from_int(2), fq.one()], vec![fq.one(), ZERO, fq.from_int(2)]] {
        let endo = h.honda_endo(&coeffs).unwrap();
        let w = stabilizer_witness(&iso, &endo).unwrap();
        let c = check_equivariance(&iso, &w).unwrap();
        assert!(c.ok, "{coeffs:?}: {c:?}");
    }
}

#[test]
fn deformation_equivariance_for_scalars() {
    let fq = Fq::for_heights(3, 1).unwrap();
    let iso = e_law_iso(11);
    for c in fq.elements().filter(|&c| c != ZERO) {
        let w = scalar_deformation_witness(&iso, c).unwrap();
        let chk = check_equivariance(&iso, &w).unwrap();
        assert!(chk.ok, "{}: {chk:?}", fq.render(&c));
    }
}

#[test]
fn corrupted_witness_is_rejected() {
    let fq = Fq::for_heights(3, 1).unwrap();
    let h = honda_fgl(1, &fq, 11).unwrap();
    let iso = e_law_iso(11);
    let endo = h.honda_endo(&[fq.from_int(2), fq.one()]).unwrap();
    let w = stabilizer_witness(&iso, &endo).unwrap();
    let ActionWitness::Stabilizer { endo, mut sigma } = w else { unreachable!() };
    sigma.images[0] = iso.tower.add(&sigma.images[0], &iso.tower.t_pow(1));
    let bad = ActionWitness::Stabilizer { endo, sigma };
    assert!(matches!(check_equivariance(&iso, &bad), Err(crate::Error::InvalidWitness(_))));
    let r1 = &iso.ring1;
    let w = scalar_deformation_witness(&iso, fq.from_int(2)).unwrap();
    let ActionWitness::Deformation { sigma, .. } = w else { unreachable!() };
    let t = r1.add(&r1.var(0), &r1.var_pow(0, 2));
    let bad = ActionWitness::Deformation { iso: t, sigma };
    assert!(matches!(check_equivariance(&iso, &bad), Err(crate::Error::InvalidWitness(_))));
}

#[test]
fn conjugated_law_round_trip() {
    let fq = Fq::for_heights(3, 1).unwrap();
    let h = honda_fgl(1, &fq, 28).unwrap();
    let params = vec![VarSpec::param("u1", 0)];
    let r1 = crate::fgl::ring_with(&fq, &params, &["X"], 28);
    // c(X) = 2X + u1 X^2 + X^4
    let c = r1.add(
        &r1.add(&r1.scale(&r1.var(1), &fq.from_int(2)), &r1.mul(&r1.var(0), &r1.var_pow(1, 2))),
        &r1.var_pow(1, 4),
    );
    let f = conjugate_law(&h, params, &c).unwrap();
    assert!(all_ok(&f.check_axioms().unwrap()));
    let iso = solve_phi(&f, &h, 11, 6).unwrap();
    assert!(all_ok(&verify_iso(&iso).unwrap()));
    let h11 = h.truncated(11);
    let r1_11 = crate::fgl::ring_with(&fq, &[VarSpec::param("u1", 0)], &["X"], 11);
    // F = c(H(c^-1 X, c^-1 Y)) makes c^-1 an isomorphism F -> H, so phi o c is an automorphism of H.
    let c11 = r1_11.truncate_weight(&c, 11);
    let aut = compose_to_fq(&iso, 1, &c11, &r1_11).unwrap().expect("constant coefficients");
    assert!(h11.check_endomorphism(&aut).unwrap().ok);
    assert!(h11.recognize_endo(&aut).unwrap().is_some());
}

#[test]
fn too_short_law_is_reported() {
    let fq = Fq::for_heights(3, 1).unwrap();
    let f = specialize_hazewinkel(&Specialization::e_law(3, 1), &fq, 12).unwrap();
    let h = honda_fgl(1, &fq, 12).unwrap();
    assert!(matches!(solve_phi(&f, &h, 11, 6), Err(crate::Error::PrecisionExhausted(_))));
}

#[test]
fn height_two_lens_window() {
    let fq = Fq::for_heights(3, 2).unwrap();
    let f = specialize_hazewinkel(&Specialization::e_law(3, 2), &fq, 28).unwrap();
    let h = honda_fgl(2, &fq, 28).unwrap();
    let iso = solve_phi(&f, &h, 9, 4).unwrap();
    assert_eq!(iso.tower.ramification(), 8);
    assert!(all_ok(&verify_iso(&iso).unwrap()));
}
