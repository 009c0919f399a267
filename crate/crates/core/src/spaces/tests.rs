use super::*;
use crate::check::{all_ok, Check};
use crate::coeffring::{Fq, Ring};
use crate::comod::{assemble, compatibility_check};
use crate::fgl::{honda_fgl, specialize_hazewinkel, Fgl, Specialization};
use crate::hopfalg::CompositeHopf;
use crate::isofind::{scalar_deformation_witness, solve_phi, stabilizer_witness, ActionWitness};
use crate::Error;

fn failing(checks: &[Check]) -> Vec<String> {
    checks.iter().filter(|c| !c.ok).map(|c| format!("{}: {:?}", c.name, c.witness)).collect()
}

fn chern(n: u32) -> (ChernData, Fgl<Fq>) {
    let fq = Fq::for_heights(3, n).unwrap();
    let f = specialize_hazewinkel(&Specialization::e_law(3, n), &fq, 28).unwrap();
    let h = honda_fgl(n, &fq, 28).unwrap();
    let (trunc, uprec) = if n == 1 { (11, 6) } else { (9, 4) };
    let iso = solve_phi(&f, &h, trunc, uprec).unwrap();
    (ChernData::new(iso, &f).unwrap(), h)
}

#[test]
fn lens_basis_layout() {
    let fq = Fq::new(3, 1).unwrap();
    let m = LensModel::new(fq, 3, 2, Flavor::K, vec![]);
    let names = m.basis_names();
    assert_eq!(names.len(), 18);
    assert_eq!(names[m.index(0, 1)], "x");
    assert_eq!(names[m.index(1, 0)], "y");
    assert_eq!(names[m.index(1, 4)], "y*x^4");
    assert_eq!(m.basis_parity().iter().filter(|&&b| b).count(), 9);
}

#[test]
fn lens_comodules_satisfy_axioms() {
    for n in 1..=2 {
        let fq = Fq::new(3, 1).unwrap();
        let h = CompositeHopf::with_default_bound(fq.clone(), 3, n).unwrap();
        let m = LensModel::new(fq, 3, n, Flavor::K, vec![]);
        let c = m.c_comodule(&h).unwrap();
        assert!(all_ok(&c.check(h.c_part())), "n = {n}: {:?}", failing(&c.check(h.c_part())));
        let l = m.lambda_comodule(&h).unwrap();
        assert!(all_ok(&l.check(h.lambda())), "n = {n}: {:?}", failing(&l.check(h.lambda())));
        let direct = m.composite_comodule(&h).unwrap();
        assert!(all_ok(&direct.check(h.hopf())), "n = {n}: {:?}", failing(&direct.check(h.hopf())));
        let cl = m.clambda(&h).unwrap();
        assert!(compatibility_check(&h, &cl).ok);
        assert_eq!(assemble(&h, &cl).unwrap().coaction, direct.coaction);
    }
}

#[test]
fn law_coaction_matches_additive_form_on_lens() {
    // A height-n law is additive below degree p^n, so the formal sum agrees
    // with the plain one on the lens.
    let fq = Fq::for_heights(3, 2).unwrap();
    let h = CompositeHopf::with_default_bound(fq.clone(), 3, 2).unwrap();
    let law = honda_fgl(2, &fq, 28).unwrap();
    let m = LensModel::new(fq, 3, 2, Flavor::K, vec![]);
    let rx = m.coaction_x(&h, &law).unwrap();
    let c = m.c_comodule(&h).unwrap();
    let r = crate::gseries::SeriesRing::new(
        law.base().clone(),
        h.c_part().gamma().vars().concat(m.ring().vars()),
    );
    let nt = h.c_part().gamma().nvars();
    let mut want = r.zero();
    for (k, coef) in c.coaction[m.index(0, 1)].iter().enumerate() {
        let mut e = vec![0; nt + 2];
        e[nt + 1] = m.basis_exps()[k][1];
        let slot = h.c_part().gamma().embed(coef, &r, &(0..nt).collect::<Vec<_>>());
        want = r.add(&want, &r.mul(&slot, &r.monomial(e, law.base().one())));
    }
    assert_eq!(rx, want);
}

#[test]
fn proj_comodule_is_coassociative_for_honda_law() {
    let fq = Fq::for_heights(3, 1).unwrap();
    let h = CompositeHopf::with_default_bound(fq.clone(), 3, 1).unwrap();
    let law = honda_fgl(1, &fq, 28).unwrap();
    let m = ProjModel::with_default_trunc(fq, 3, 1, Flavor::K, vec![]);
    assert_eq!(m.trunc(), 9);
    let c = m.c_comodule(&h, &law).unwrap();
    let checks = c.check(h.c_part());
    assert!(all_ok(&checks), "{:?}", failing(&checks));
}

#[test]
fn coaction_needs_enough_law() {
    let fq = Fq::for_heights(3, 1).unwrap();
    let h = CompositeHopf::with_default_bound(fq.clone(), 3, 1).unwrap();
    let law = honda_fgl(1, &fq, 6).unwrap();
    let m = ProjModel::with_default_trunc(fq, 3, 1, Flavor::K, vec![]);
    assert!(matches!(m.coaction_x(&h, &law), Err(Error::PrecisionExhausted(_))));
}

#[test]
fn group_action_matches_twist_of_x() {
    let fq = Fq::new(3, 2).unwrap();
    let m = LensModel::new(fq.clone(), 3, 2, Flavor::K, vec![]);
    let a = vec![fq.from_index(3), fq.from_index(5)];
    let g = m.group_action(&a).unwrap();
    // (x)g = a0 x + a1 x^3, (y)g = y
    let row = &g[m.index(0, 1)];
    for (k, v) in row.iter().enumerate() {
        let want = if k == m.index(0, 1) {
            a[0]
        } else if k == m.index(0, 3) {
            a[1]
        } else {
            fq.zero()
        };
        assert_eq!(*v, want, "column {k}");
    }
    assert!(matches!(m.group_action(&[fq.zero()]), Err(Error::InvalidWitness(_))));
}

#[test]
fn chern_comparison_height_one() {
    let (data, _) = chern(1);
    let checks = data.checks().unwrap();
    assert!(all_ok(&checks), "{:?}", failing(&checks));
    let b = data.bhat_matrix().unwrap();
    assert_eq!(b.len(), 1);
    assert_eq!(b[0][0], data.w());
}

#[test]
fn chern_comparison_height_two() {
    let (data, _) = chern(2);
    let checks = data.checks().unwrap();
    assert!(all_ok(&checks), "{:?}", failing(&checks));
    let b = data.bhat_matrix().unwrap();
    let t = &data.iso().tower;
    assert!(t.is_zero(&b[0][1]));
    assert_eq!(b[1][1], t.pow(&data.w(), 3));
}

#[test]
fn corrupted_isomorphism_breaks_the_relation() {
    let (data, f) = chern(1);
    let iso = data.iso();
    let r1 = &iso.ring1;
    let bent = r1.add(&iso.phi, &r1.var_pow(0, 2));
    let bad = ChernData::new(iso.with_phi(bent).unwrap(), &f).unwrap();
    assert!(matches!(bad.checks(), Err(Error::RelationNotPreserved(_))));
}

#[test]
fn bhat_is_invariant_under_witnesses() {
    let (data, h) = chern(1);
    let fq = data.iso().tower.fq().clone();
    let mut ws: Vec<ActionWitness> = Vec::new();
    for c in [1u64, 2, 5] {
        ws.push(scalar_deformation_witness(data.iso(), fq.from_index(c)).unwrap());
    }
    let endo = h.honda_endo(&[fq.from_index(2)]).unwrap();
    ws.push(stabilizer_witness(data.iso(), &endo).unwrap());
    let checks = bhat_invariance_check(&data, &ws).unwrap();
    assert_eq!(checks.len(), 4);
    assert!(all_ok(&checks), "{:?}", failing(&checks));
}

#[test]
fn bad_witness_is_rejected() {
    let (data, _) = chern(1);
    let iso = data.iso();
    let r1 = &iso.ring1;
    let good = scalar_deformation_witness(iso, iso.tower.fq().from_index(1)).unwrap();
    let ActionWitness::Deformation { sigma, .. } = good else { unreachable!() };
    let bent = r1.add(&r1.var(0), &r1.var_pow(0, 2));
    let w = ActionWitness::Deformation { iso: bent, sigma };
    assert!(matches!(bhat_invariance_check(&data, &[w]), Err(Error::InvalidWitness(_))));
}
