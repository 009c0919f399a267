use proptest::prelude::*;

use super::*;
use crate::coeffring::{Fq, Ring};

fn f3() -> Fq {
    Fq::prime(3).unwrap()
}

fn uni(trunc: u32) -> SeriesRing<Fq> {
    univariate(f3(), "X", trunc)
}

fn poly(r: &SeriesRing<Fq>, coeffs: &[i64]) -> Series<u32> {
    let mut s = r.zero();
    for (k, c) in coeffs.iter().enumerate() {
        s = r.add(&s, &r.scale(&r.var_pow(0, k as i32), &r.base().from_int(*c)));
    }
    s
}

fn exterior() -> SeriesRing<Fq> {
    SeriesRing::new(
        f3(),
        VarTable::new(vec![VarSpec::odd("a0", 1), VarSpec::odd("a1", 5), VarSpec::even("x", 2, Some(4))]),
    )
}

#[test]
fn one_plus_x_times_one_minus_x() {
    let r = uni(3);
    let f = poly(&r, &[1, 1]);
    let g = poly(&r, &[1, -1]);
    assert_eq!(r.mul(&f, &g), poly(&r, &[1, 0, 2]));
}

#[test]
fn odd_variables_anticommute_and_square_to_zero() {
    let r = exterior();
    let a0 = r.named("a0");
    let a1 = r.named("a1");
    assert!(r.mul(&a0, &a0).terms.is_empty());
    assert_eq!(r.mul(&a0, &a1), r.neg(&r.mul(&a1, &a0)));
    assert!(r.mul(&r.mul(&a0, &a1), &a0).terms.is_empty());
}

#[test]
fn compose_square_with_x_plus_x2() {
    let r = uni(4);
    let f = poly(&r, &[0, 0, 1]);
    let g = poly(&r, &[0, 1, 1]);
    assert_eq!(r.compose(&f, &g).unwrap(), poly(&r, &[0, 0, 1, 2]));
    assert_eq!(r.compose(&poly(&r, &[0, 1]), &g).unwrap(), g);
    assert!(r.compose(&f, &poly(&r, &[1, 1])).is_err());
}

#[test]
fn reverse_matches_lagrange_inversion() {
    let r = uni(4);
    let f = poly(&r, &[0, 1, 1]);
    let g = r.reverse(&f).unwrap();
    // Lagrange: [X^n] g = (1/n) [X^(n-1)] (1+X)^(-n): 1, -1, 2.
    assert_eq!(g, poly(&r, &[0, 1, -1, 2]));
    assert_eq!(r.compose(&f, &g).unwrap(), poly(&r, &[0, 1]));
    let c = r.scale(&poly(&r, &[0, 1]), &r.base().from_int(2));
    assert_eq!(r.reverse(&c).unwrap(), c);
}

#[test]
fn tensor_cross_terms_cancel() {
    let b = SeriesRing::new(f3(), VarTable::new(vec![VarSpec::odd("b0", -1)]));
    let y = SeriesRing::new(f3(), VarTable::new(vec![VarSpec::odd("y", 1)]));
    let t = tensor_of(&b, &y);
    let one_y = ts_tensor(&b, &b.one(), &y, &y.named("y"), &t).unwrap();
    let b_one = ts_tensor(&b, &b.named("b0"), &y, &y.one(), &t).unwrap();
    let s = t.add(&one_y, &b_one);
    assert!(t.mul(&s, &s).terms.is_empty());
}

#[test]
fn tensor_of_x_with_x() {
    let a = uni(5);
    let b = a.with_vars(a.vars().renamed("'"));
    let t = tensor_of(&a, &b);
    let x1 = ts_tensor(&a, &a.var(0), &b, &b.one(), &t).unwrap();
    let x2 = ts_tensor(&a, &a.one(), &b, &b.var(0), &t).unwrap();
    let xx = ts_tensor(&a, &a.var(0), &b, &b.var(0), &t).unwrap();
    assert_eq!(t.mul(&x1, &x2), xx);
}

#[test]
fn text_and_json_round_trip() {
    let r = exterior();
    let f = r.add(&r.mul(&r.named("a1"), &r.named("x")), &r.scale(&r.named("a0"), &2));
    let s = r.render(&f);
    assert_eq!(r.parse(&s).unwrap(), f);
    assert_eq!(r.from_json(&r.to_json(&f)).unwrap(), f);
    let ff = Fq::new(3, 2).unwrap();
    let r9 = univariate(ff.clone(), "X", 6);
    let g = r9.scale(&r9.var_pow(0, 2), &ff.add(&ff.root(), &ff.one()));
    assert_eq!(r9.parse(&r9.render(&g)).unwrap(), g);
}

fn arb_series(nvars: usize, trunc: i32) -> impl Strategy<Value = Vec<(Vec<i32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..trunc, nvars), 1i64..3), 0..8)
}

fn build(r: &SeriesRing<Fq>, spec: &[(Vec<i32>, i64)]) -> Series<u32> {
    let mut s = r.zero();
    for (e, c) in spec {
        s = r.add(&s, &r.monomial(e.clone(), r.base().from_int(*c)));
    }
    s
}

fn mixed() -> SeriesRing<Fq> {
    SeriesRing::new(
        f3(),
        VarTable::new(vec![
            VarSpec::even("x", 2, Some(5)),
            VarSpec::odd("y", 1),
            VarSpec::odd("b", -1),
            VarSpec::even("w", 0, Some(4)),
        ]),
    )
}

proptest! {
    #[test]
    fn ring_axioms_mod_truncation(a in arb_series(4, 3), b in arb_series(4, 3), c in arb_series(4, 3)) {
        let r = mixed();
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        prop_assert_eq!(r.add(&a, &b), r.add(&b, &a));
    }

    #[test]
    fn graded_commutativity(a in arb_series(4, 3), b in arb_series(4, 3)) {
        let r = mixed();
        // Split into homogeneous parts and compare each pair.
        let (a, b) = (build(&r, &a), build(&r, &b));
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let ma = r.monomial(ea.clone(), *ca);
                let mb = r.monomial(eb.clone(), *cb);
                let sign = r.vars().degree(ea) * r.vars().degree(eb);
                let ba = r.mul(&mb, &ma);
                let expect = if sign % 2 != 0 { r.neg(&ba) } else { ba };
                prop_assert_eq!(r.mul(&ma, &mb), expect);
            }
        }
    }

    #[test]
    fn reverse_is_two_sided(coeffs in prop::collection::vec(0i64..3, 5)) {
        let r = uni(7);
        let mut c = vec![0i64, 1];
        c.extend(coeffs);
        let f = poly(&r, &c);
        let g = r.reverse(&f).unwrap();
        let x = r.var(0);
        prop_assert_eq!(r.compose(&f, &g).unwrap(), x.clone());
        prop_assert_eq!(r.compose(&g, &f).unwrap(), x);
    }

    #[test]
    fn compose_is_associative(f in prop::collection::vec(0i64..3, 6), g in prop::collection::vec(0i64..3, 5), h in prop::collection::vec(0i64..3, 5)) {
        let r = uni(7);
        let f = poly(&r, &f);
        let mut gc = vec![0i64]; gc.extend(g);
        let mut hc = vec![0i64]; hc.extend(h);
        let (g, h) = (poly(&r, &gc), poly(&r, &hc));
        let lhs = r.compose(&r.compose(&f, &g).unwrap(), &h).unwrap();
        let rhs = r.compose(&f, &r.compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn swap_is_an_involution(a in arb_series(4, 3)) {
        let r = mixed();
        let a = build(&r, &a);
        let left = SeriesRing::new(f3(), VarTable::new(r.vars().vars[..2].to_vec()));
        let right = SeriesRing::new(f3(), VarTable::new(r.vars().vars[2..].to_vec()));
        let swapped = tensor_of(&right, &left);
        let once = ts_swap(&r, 2, &a, &swapped).unwrap();
        let twice = ts_swap(&swapped, 2, &once, &r).unwrap();
        prop_assert_eq!(twice, a);
    }

    #[test]
    fn products_of_homogeneous_are_homogeneous(a in arb_series(4, 3), b in arb_series(4, 3)) {
        let r = mixed();
        let (a, b) = (build(&r, &a), build(&r, &b));
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let p = r.mul(&r.monomial(ea.clone(), *ca), &r.monomial(eb.clone(), *cb));
                if let Some(d) = r.homogeneous_degree(&p) {
                    prop_assert_eq!(d, r.vars().degree(ea) + r.vars().degree(eb));
                }
            }
        }
    }
}
