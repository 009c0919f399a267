use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::matrix::{self, Mat};
use super::*;
use crate::check::{all_ok, Check};
use crate::coeffring::{Fq, Ring};
use crate::gseries::Series;
use crate::hopfalg::{CompositeHopf, FunctionHopf, HopfAlgebroid};
use crate::spaces::{Flavor, LensModel};
use crate::Error;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn failing(checks: &[Check]) -> Vec<String> {
    checks.iter().filter(|c| !c.ok).map(|c| format!("{}: {:?}", c.name, c.witness)).collect()
}

fn setup(q: u32, n: u32) -> (Fq, CompositeHopf<Fq>, LensModel<Fq>) {
    let fq = Fq::new(3, q).unwrap();
    let h = CompositeHopf::with_default_bound(fq.clone(), 3, n).unwrap();
    let lens = LensModel::new(fq.clone(), 3, n, Flavor::K, vec![]);
    (fq, h, lens)
}

fn pool(h: &CompositeHopf<Fq>, lens: &LensModel<Fq>) -> Vec<CLambdaComodule<Series<u32>>> {
    vec![
        CLambdaComodule::trivial(h, "e", false),
        CLambdaComodule::trivial(h, "o", true),
        CLambdaComodule::exterior(h),
        lens.clambda(h).unwrap(),
    ]
}

// Twisted modules over the function algebroids.

#[test]
fn sign_character_acts_by_minus_one() {
    let inst = FunctionHopf::standard_instances().unwrap();
    let h = &inst[0];
    let r = h.ring();
    let gamma = vec![r.one(), r.from_int(-1)];
    let m = Comodule::new(vec!["m".into()], vec![false], vec![vec![gamma]]).unwrap();
    assert!(all_ok(&m.check(h)));
    let t = comod_to_twisted(h, &m);
    assert_eq!(t.act(h, 1, &[r.one()]), vec![r.from_int(-1)]);
    let s = r.var(0);
    // (s m)g = s^g (m)g = (-s)(-m) = s m
    assert_eq!(t.act(h, 1, std::slice::from_ref(&s)), vec![s]);
    assert!(all_ok(&t.check(h, &mut rng(1), 10)));
}

#[test]
fn rank_two_sign_on_s3() {
    let inst = FunctionHopf::standard_instances().unwrap();
    let h = &inst[5];
    let n = h.group().order();
    // The sign character on the first basis vector, trivial on the second.
    let rep: Vec<Vec<Vec<i64>>> = (0..n).map(|g| vec![vec![crate::hopfalg::FiniteGroup::s3_sign(g), 0], vec![0, 1]]).collect();
    let t = TwistedModule::from_integer_rep(h, vec!["a".into(), "b".into()], &rep);
    assert!(all_ok(&t.check(h, &mut rng(2), 10)));
    let c = twisted_to_comod(h, &t);
    assert!(all_ok(&c.check(h)), "{:?}", failing(&c.check(h)));
    assert_eq!(comod_to_twisted(h, &c), t);
}

#[test]
fn random_twisted_round_trips_and_monoidality() {
    let inst = FunctionHopf::standard_instances().unwrap();
    let mut r = rng(3);
    for k in 0..50 {
        let h = &inst[k % inst.len()];
        let t = TwistedModule::random(h, &mut r);
        assert!(all_ok(&t.check(h, &mut r, 5)), "instance {k}: {:?}", failing(&t.check(h, &mut r, 5)));
        let c = twisted_to_comod(h, &t);
        assert!(all_ok(&c.check(h)), "instance {k}: {:?}", failing(&c.check(h)));
        assert_eq!(comod_to_twisted(h, &c), t);
        if k % 5 == 0 {
            let u = TwistedModule::random(h, &mut r);
            let lhs = twisted_to_comod(h, &t.tensor(&u, h));
            let rhs = c.tensor(&twisted_to_comod(h, &u), h);
            assert_eq!(lhs.coaction, rhs.coaction, "instance {k}");
        }
    }
}

#[test]
fn perturbed_twisted_module_fails_both_sides() {
    let inst = FunctionHopf::standard_instances().unwrap();
    let h = &inst[2];
    let r = h.ring();
    let mut t = TwistedModule::random(h, &mut rng(4));
    t.mats[1][0][0] = r.add(&t.mats[1][0][0], &r.one());
    assert!(!all_ok(&t.check(h, &mut rng(5), 5)));
    assert!(!all_ok(&twisted_to_comod(h, &t).check(h)));
}

#[test]
fn comodule_shape_is_validated() {
    let r: Mat<u32> = vec![vec![0, 0]];
    assert!(matches!(Comodule::new(vec!["a".into()], vec![false], r), Err(Error::Config(_))));
}

// Milnor operations.

#[test]
fn lens_milnor_operations_on_y() {
    let (_, h, lens) = setup(1, 2);
    let m = lens.lambda_comodule(&h).unwrap();
    let q = extract_milnor(h.lambda(), &m);
    let fq = h.gamma().base();
    let y = lens.index(1, 0);
    for i in 0..2 {
        let row = &q.ops[i][y];
        for (k, c) in row.iter().enumerate() {
            let want = if k == lens.index(0, 3i32.pow(i as u32)) { fq.one() } else { fq.zero() };
            assert_eq!(*c, want, "Q{i}(y), column {k}");
        }
        // Q_i kills x and 1
        assert!(q.ops[i][lens.index(0, 1)].iter().all(|c| fq.is_zero(c)));
        assert!(q.ops[i][0].iter().all(|c| fq.is_zero(c)));
    }
    assert!(q.anticommutation_check(fq).ok);
}

#[test]
fn derivation_on_tensor_products() {
    let (_, h, lens) = setup(1, 1);
    let m = lens.lambda_comodule(&h).unwrap();
    assert!(milnor_derivation_check(h.lambda(), &m, &m).ok);
    let (_, h2, lens2) = setup(1, 2);
    let ext = exterior_regular(h2.lambda());
    let m2 = lens2.lambda_comodule(&h2).unwrap();
    assert!(milnor_derivation_check(h2.lambda(), &ext, &m2).ok);
    assert!(milnor_derivation_check(h2.lambda(), &m2, &ext).ok);
}

#[test]
fn anticommutation_on_random_comodules() {
    let (fq, h, lens) = setup(2, 2);
    let p = pool(&h, &lens);
    let mut r = rng(6);
    for k in 0..100 {
        let m = random_clambda(&h, &p, 24, &mut r);
        let q = extract_milnor(h.lambda(), &m.lambda);
        assert!(q.anticommutation_check(&fq).ok, "sample {k}");
    }
}

#[test]
fn twist_law_height_one() {
    let (fq, h, lens) = setup(2, 1);
    let m = lens.composite_comodule(&h).unwrap();
    for k in 1..9 {
        let a = vec![fq.from_index(k)];
        let g = lens.group_action(&a).unwrap();
        let checks = milnor_twist_check(&h, &m, &g, &a).unwrap();
        assert!(all_ok(&checks), "a0 = {}: {:?}", fq.render(&a[0]), failing(&checks));
    }
}

#[test]
fn twist_law_height_two() {
    let (fq, h, lens) = setup(2, 2);
    let m = lens.composite_comodule(&h).unwrap();
    let a = vec![fq.from_index(2), fq.from_index(7)];
    let g = lens.group_action(&a).unwrap();
    let checks = milnor_twist_check(&h, &m, &g, &a).unwrap();
    assert!(all_ok(&checks), "{:?}", failing(&checks));
    // (Q_0)^g = a0 Q_0 + a1 Q_1
    let q = extract_milnor(h.lambda(), &project_lambda(&h, &m));
    let want = q.combination(&fq, &a);
    assert_eq!(q.twisted(&fq, 3, &a, 0), want);
    // a wrong action matrix is caught
    let other = lens.group_action(&[fq.from_index(2), fq.from_index(3)]).unwrap();
    assert!(!milnor_twist_check(&h, &m, &other, &a).unwrap()[0].ok);
    assert!(matches!(milnor_twist_check(&h, &m, &g, &[fq.zero()]), Err(Error::InvalidWitness(_))));
}

#[test]
fn action_from_coaction_matches_lens_action() {
    let (fq, h, lens) = setup(2, 2);
    let m = lens.composite_comodule(&h).unwrap();
    for k in 0..9 {
        let a = vec![fq.one(), fq.from_index(k)];
        assert_eq!(action_from_coaction(&h, &m, &a).unwrap(), lens.group_action(&a).unwrap());
    }
    let a = vec![fq.from_index(2), fq.one()];
    assert!(matches!(action_from_coaction(&h, &m, &a), Err(Error::InvalidWitness(_))));
}

#[test]
fn recognizer_finds_planted_combination() {
    let (fq, h, _) = setup(2, 3);
    let ext = exterior_regular(h.lambda());
    let q = extract_milnor(h.lambda(), &ext);
    let planted = vec![fq.from_index(1), fq.from_index(4), fq.from_index(6)];
    let op = q.combination(&fq, &planted);
    // The top monomial sees every Q_i.
    let top = op.len() - 1;
    assert_eq!(recognize_milnor(&q, &fq, &op, top).unwrap(), planted);
    assert!(matches!(recognize_milnor(&q, &fq, &op, 99), Err(Error::IndexOutOfRange { .. })));
    let mut bad = op.clone();
    bad[1][0] = fq.add(&bad[1][0], &fq.one());
    assert!(matches!(recognize_milnor(&q, &fq, &bad, top), Err(Error::CompatibilityFailure(_))));
    let id = matrix::identity(&fq, op.len());
    assert!(matches!(recognize_milnor(&q, &fq, &id, top), Err(Error::CompatibilityFailure(_))));
}

#[test]
fn generators_act_on_their_duals() {
    // (b_j)Q_i = δ_ij on the regular comodule, including the top generator.
    let (fq, h, _) = setup(1, 3);
    let ext = exterior_regular(h.lambda());
    let q = extract_milnor(h.lambda(), &ext);
    for i in 0..3 {
        for j in 0..3 {
            let row = &q.ops[i][1 << j];
            let want = if i == j { fq.one() } else { fq.zero() };
            assert_eq!(row[0], want, "Q{i}(b{j})");
        }
    }
}

// C–Λ comodules.

#[test]
fn coaction_identification_and_colinearity() {
    for n in 1..=3 {
        let (_, h, _) = setup(1, n);
        assert!(coaction_identification(&h).ok, "n = {n}");
        let checks = psi_lambda_colinearity(&h);
        assert!(all_ok(&checks), "n = {n}: {:?}", failing(&checks));
    }
}

#[test]
fn nine_diagram_on_small_comodules() {
    let (_, h, lens) = setup(1, 2);
    for m in [CLambdaComodule::trivial(&h, "e", false), CLambdaComodule::exterior(&h), lens.clambda(&h).unwrap()] {
        let checks = nine_diagram_check(&h, &m);
        assert_eq!(checks.len(), 4);
        assert!(all_ok(&checks), "{:?}: {:?}", m.names(), failing(&checks));
    }
}

#[test]
fn lens_assembles_to_direct_coaction() {
    let (_, h, lens) = setup(1, 2);
    let cl = lens.clambda(&h).unwrap();
    let assembled = assemble(&h, &cl).unwrap();
    assert!(all_ok(&assembled.check(h.hopf())));
    assert_eq!(assembled.coaction, lens.composite_comodule(&h).unwrap().coaction);
    assert_eq!(split(&h, &assembled), cl);
}

#[test]
fn random_assemble_split_round_trips() {
    let (_, h, lens) = setup(2, 2);
    let p = pool(&h, &lens);
    let mut r = rng(7);
    for k in 0..50 {
        let m = random_clambda(&h, &p, 24, &mut r);
        assert!(compatibility_check(&h, &m).ok, "sample {k}");
        let a = assemble(&h, &m).unwrap();
        if k % 10 == 0 {
            assert!(all_ok(&a.check(h.hopf())), "sample {k}: {:?}", failing(&a.check(h.hopf())));
        }
        assert_eq!(split(&h, &a), m, "sample {k}");
    }
}

#[test]
fn perturbed_lens_is_incompatible() {
    let (fq, h, lens) = setup(1, 2);
    let mut cl = lens.clambda(&h).unwrap();
    let lr = h.lambda().gamma();
    let y = lens.index(1, 0);
    let x3 = lens.index(0, 3);
    // ρ_Λ(y) gets 2 b_1 ⊗ x^3 in place of b_1 ⊗ x^3.
    cl.lambda.coaction[y][x3] = lr.scale(&cl.lambda.coaction[y][x3], &fq.from_int(2));
    assert!(!compatibility_check(&h, &cl).ok);
    assert!(matches!(assemble(&h, &cl), Err(Error::CompatibilityFailure(_))));
}

#[test]
fn composite_coaction_projects_to_parts() {
    let (_, h, lens) = setup(1, 2);
    let m = lens.composite_comodule(&h).unwrap();
    assert_eq!(project_lambda(&h, &m).coaction, lens.lambda_comodule(&h).unwrap().coaction);
    assert_eq!(project_c(&h, &m).coaction, lens.c_comodule(&h).unwrap().coaction);
    let _ = h.hopf().base_samples();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn twisted_round_trip_property(seed in 0u64..10_000, which in 0usize..6) {
        let inst = FunctionHopf::standard_instances().unwrap();
        let h = &inst[which];
        let mut r = rng(seed);
        let t = TwistedModule::random(h, &mut r);
        let c = twisted_to_comod(h, &t);
        prop_assert!(all_ok(&c.check(h)));
        prop_assert_eq!(comod_to_twisted(h, &c), t);
    }

    #[test]
    fn random_clambda_splits_back(seed in 0u64..10_000) {
        let (fq, h, lens) = setup(1, 1);
        let p = pool(&h, &lens);
        let m = random_clambda(&h, &p, 12, &mut rng(seed));
        let a = assemble(&h, &m).unwrap();
        prop_assert_eq!(split(&h, &a), m.clone());
        prop_assert!(extract_milnor(h.lambda(), &m.lambda).anticommutation_check(&fq).ok);
    }
}
