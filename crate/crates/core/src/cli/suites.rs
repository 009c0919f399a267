//! The verification suites behind the command-line verbs.

use super::{ComodSuite, HopfInstance, RunConfig};
use crate::check::Check;
use crate::coeffring::{Fq, Ring};
use crate::comod::{self, CLambdaComodule, RandomElem, TwistedModule};
use crate::error::{Error, Result};
use crate::fgl::{default_trunc, first_diff, honda_fgl, ring_with, specialize_hazewinkel, Fgl, Specialization};
use crate::gseries::{Series, VarSpec};
use crate::hopfalg::{check_axioms_sampled, derive_psi_from_coaction, CompositeHopf, FunctionHopf, SeriesHopf};
use crate::isofind::{
    check_equivariance, compose_to_fq, conjugate_law, scalar_deformation_witness, solve_phi, stabilizer_witness, verify_iso,
    ActionWitness, FglIso,
};
use crate::report::Recorder;
use crate::spaces::{bhat_invariance_check, ChernData, Flavor, LensModel, ProjModel};

/// Random samples for sampled properties.
const RANDOM_INSTANCES: usize = 50;
const LINEARIZATION_TUPLES: usize = 100;
const ANTICOMMUTATION_SAMPLES: usize = 100;

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Law truncation long enough for the solver at `xdeg`: the p-series
/// comparison reaches `X^(p^k q)` with `p^k` the largest power below `xdeg + 1`.
fn law_trunc(cfg: &RunConfig) -> u32 {
    let t = u64::from(cfg.xdeg + 1);
    let mut kmax = 1u64;
    while kmax * cfg.p < t {
        kmax *= cfg.p;
    }
    (kmax * cfg.p.pow(cfg.n) + 1).max(t + 1) as u32
}

// Formal group laws.

pub fn fgl(rec: &mut Recorder, cfg: &RunConfig) {
    let (p, n) = (cfg.p, cfg.n);
    let trunc = default_trunc(p, n);
    let Some(fq) = rec.guard("field", "fgl.axioms", cfg.field(n)) else { return };
    let honda = rec.guard("honda", "fgl.axioms", honda_fgl(n, &fq, trunc));
    let e = rec.guard("e_law", "fgl.axioms", specialize_hazewinkel(&Specialization::e_law(p, n), &fq, trunc));
    let k = rec.guard("k_law", "fgl.axioms", specialize_hazewinkel(&Specialization::k_law(p, n), &fq, trunc));
    for (name, law) in [("honda", &honda), ("e_law", &e), ("k_law", &k)] {
        if let Some(law) = law {
            rec.run(&format!("{name}.axioms"), "fgl.axioms", |_| law.check_axioms());
            rec.check(&format!("{name}.strict_height"), "fgl.strict_height", law.check_strict_height(n));
        }
    }
    if let (Some(h), Some(k)) = (&honda, &k) {
        rec.check("k_law.is_honda", "fgl.honda_specialization", first_diff("k_law.is_honda", h.ring2(), k.law(), h.law()));
    }
    if let Some(h) = &honda {
        rec.run("honda.p_series", "fgl.p_series", |_| {
            let r1 = h.ring1();
            let want = r1.var_pow(0, p.pow(n) as i32);
            Ok(vec![first_diff("x_to_the_q", &r1, &h.p_series()?, &want)])
        });
    }
    if let Some(e) = &e {
        rec.run("e_law.p_series", "fgl.p_series", |_| e_law_p_series(e, p, n));
    }
    rec.run("linearization", "fgl.linearization", |r| linearization(r, p, n));
    if let Some(h) = &honda {
        rec.run("honda_endo", "fgl.honda_endo", |r| honda_endo_round_trip(r, h, &fq, n));
    }
}

/// Lowest term `u_n (unit) X^(p^n)`, and height `n + 1` at `u_n = 0`.
fn e_law_p_series(e: &Fgl<Fq>, p: u64, n: u32) -> Result<Vec<Check>> {
    let ps = e.p_series()?;
    let np = e.nparams();
    let q = p.pow(n) as i32;
    let below = ps.terms.keys().find(|k| k[np] < q);
    let low = Check::from_bool("nothing_below_x_to_the_q", below.is_none(), || format!("term {below:?}"));
    let lead_u = ps.terms.keys().filter(|k| k[np] == q).map(|k| k[..np].iter().sum::<i32>()).min();
    let lead = Check::from_bool("leading_coefficient_u_times_unit", lead_u == Some(1), || {
        format!("lowest parameter degree at X^{q} is {lead_u:?}")
    });
    let height = e.height()?;
    let h = Check::from_bool("height_at_u_zero", height == Some(n + 1), || format!("height {height:?}"));
    Ok(vec![low, lead, h])
}

/// `Σ^F a_i X^(p^i) = Σ a_i X^(p^i)` mod `X^(p^n)` for random tuples over
/// `F_(p^2)`, for the deformation law and for the Honda law.
fn linearization(rec: &Recorder, p: u64, n: u32) -> Result<Vec<Check>> {
    let f2 = Fq::new(p, 2)?;
    let trunc = default_trunc(p, n);
    let e = specialize_hazewinkel(&Specialization::e_law(p, n), &f2, trunc)?;
    let hf = Fq::new(p, 2 * n / gcd(2, n))?;
    let h = honda_fgl(n, &hf, trunc)?;
    let mut rng = rec.rng("fgl.linearization");
    let mut out = Vec::new();
    for (name, law) in [("e_law", &e), ("honda", &h)] {
        let r1 = law.ring1();
        let np = law.nparams();
        let q = p.pow(n) as i32;
        let mut c = Check::pass(name);
        for k in 0..LINEARIZATION_TUPLES {
            let terms: Vec<Series<u32>> = (0..=n)
                .map(|i| {
                    let a = law.base().random_elem(&mut rng);
                    r1.scale(&r1.var_pow(np, p.pow(i) as i32), &a)
                })
                .collect();
            let fsum = r1.truncate_var(&law.formal_sum(&r1, &terms)?, np, q);
            let plain = r1.truncate_var(&r1.sum_all(terms), np, q);
            if fsum != plain {
                c = Check::fail(name, format!("tuple {k}: {} vs {}", r1.render(&fsum), r1.render(&plain)));
                break;
            }
        }
        out.push(c);
    }
    Ok(out)
}

/// A random automorphism is an endomorphism and is recognized back from its series.
fn honda_endo_round_trip(rec: &Recorder, h: &Fgl<Fq>, fq: &Fq, n: u32) -> Result<Vec<Check>> {
    let mut rng = rec.rng("fgl.honda_endo");
    let g = fq.subfield_generator(n).ok_or_else(|| Error::InvalidField("no F_(p^n) inside the field".into()))?;
    let sub_size = fq.p().pow(n) - 1;
    let mut coeffs: Vec<u32> = (0..n).map(|_| fq.pow(&g, rand::Rng::gen_range(&mut rng, 0..sub_size))).collect();
    if rand::Rng::gen_bool(&mut rng, 0.5) && n > 1 {
        coeffs[n as usize - 1] = fq.zero();
    }
    let endo = h.honda_endo(&coeffs)?;
    let endo_check = h.check_endomorphism(&endo.series)?;
    let back = h.recognize_endo(&endo.series)?;
    let rec_check = Check::from_bool("recognized", back.as_deref() == Some(&endo.coeffs[..]), || {
        format!("{back:?} vs {:?}", endo.coeffs)
    });
    Ok(vec![endo_check, rec_check])
}

// Isomorphisms.

pub struct Solved {
    pub law: Fgl<Fq>,
    pub honda: Fgl<Fq>,
    pub iso: FglIso,
}

pub fn solve(cfg: &RunConfig) -> Result<Solved> {
    let fq = Fq::for_heights(cfg.p, cfg.n)?;
    let t = law_trunc(cfg);
    let law = specialize_hazewinkel(&Specialization::e_law(cfg.p, cfg.n), &fq, t)?;
    let honda = honda_fgl(cfg.n, &fq, t)?;
    let iso = solve_phi(&law, &honda, cfg.xdeg + 1, cfg.uprec)?;
    Ok(Solved { law, honda, iso })
}

/// Witnesses from a few scalars of `F_(p^(n+1))` and a Honda automorphism.
fn witnesses(s: &Solved, n: u32) -> Result<Vec<(String, ActionWitness)>> {
    let fq = s.iso.tower.fq().clone();
    let mut out = Vec::new();
    let g = fq.subfield_generator(n + 1).ok_or_else(|| Error::InvalidField("no F_(p^(n+1)) inside the field".into()))?;
    for k in 1..=2u64 {
        let c = fq.pow(&g, k);
        out.push((format!("deformation_scalar_g{k}"), scalar_deformation_witness(&s.iso, c)?));
    }
    let a0 = fq.subfield_generator(n).ok_or_else(|| Error::InvalidField("no F_(p^n) inside the field".into()))?;
    let endo = s.honda.honda_endo(&[a0])?;
    out.push(("stabilizer_generator".into(), stabilizer_witness(&s.iso, &endo)?));
    Ok(out)
}

pub fn iso(rec: &mut Recorder, cfg: &RunConfig) {
    let Some(s) = rec.guard("solve", "isofind.solver", solve(cfg)) else { return };
    rec.check("solve.leading_relation", "isofind.solver", s.iso.check_leading_relation());
    let generators = s.iso.tower.generators().len();
    rec.check(
        "solve.adjunctions",
        "isofind.solver",
        Check::from_bool("adjunctions", s.iso.steps.len() as u32 == cfg.xdeg, || {
            format!("{} steps for degree {}", s.iso.steps.len(), cfg.xdeg)
        }),
    );
    rec.table(
        "solver",
        vec![
            ("tower".into(), s.iso.tower.descriptor()),
            ("adjoined generators".into(), generators.to_string()),
            ("ramification".into(), s.iso.tower.ramification().to_string()),
        ],
    );
    rec.run("verify", "isofind.verify", |_| verify_iso(&s.iso));
    rec.run("conjugation", "isofind.conjugation", |_| conjugation_round_trip(cfg, &s.honda));
    rec.run("equivariance", "isofind.equivariance", |_| {
        witnesses(&s, cfg.n)?
            .into_iter()
            .map(|(name, w)| check_equivariance(&s.iso, &w).map(|c| Check { name, ..c }))
            .collect()
    });
}

/// Plants `c(X) = 2X + u X^2 + X^(p+1)`, solves for the conjugated law and
/// checks that `phi o c` is an automorphism of the Honda law.
fn conjugation_round_trip(cfg: &RunConfig, honda: &Fgl<Fq>) -> Result<Vec<Check>> {
    let fq = honda.base();
    let t = honda.trunc();
    let params = vec![VarSpec::param(&format!("u{}", cfg.n), 0)];
    let r1 = ring_with(fq, &params, &["X"], t);
    let c = r1.sum_all([
        r1.scale(&r1.var(1), &fq.from_int(2)),
        r1.mul(&r1.var(0), &r1.var_pow(1, 2)),
        r1.var_pow(1, cfg.p as i32 + 1),
    ]);
    let f = conjugate_law(honda, params.clone(), &c)?;
    let mut out = f.truncated(default_trunc(cfg.p, cfg.n).min(t)).check_axioms()?;
    let iso = solve_phi(&f, honda, cfg.xdeg + 1, cfg.uprec)?;
    out.extend(verify_iso(&iso)?);
    let tt = cfg.xdeg + 1;
    let rt = ring_with(fq, &params, &["X"], tt);
    let ct = rt.truncate_weight(&c, tt as i64);
    let ht = honda.truncated(tt);
    match compose_to_fq(&iso, 1, &ct, &rt)? {
        None => out.push(Check::fail("phi_c_over_fq", "phi o c has coefficients outside F_q")),
        Some(aut) => {
            out.push(Check { name: "phi_c_endomorphism".into(), ..ht.check_endomorphism(&aut)? });
            let found = ht.recognize_endo(&aut)?;
            out.push(Check::from_bool("phi_c_recognized", found.is_some(), || "not of Honda form".into()));
        }
    }
    Ok(out)
}

// Hopf algebroids.

pub fn hopf(rec: &mut Recorder, cfg: &RunConfig, instance: Option<HopfInstance>) {
    let (p, n) = (cfg.p, cfg.n);
    let want = |i: HopfInstance| instance.is_none() || instance == Some(i);
    if want(HopfInstance::Lambda) {
        rec.run("lambda", "hopf.axioms", |r| {
            let h = SeriesHopf::exterior(Fq::new(p, n)?, n);
            Ok(check_axioms_sampled(&h, &mut r.rng("hopf.lambda"), 4))
        });
    }
    if want(HopfInstance::Cgr) {
        match FunctionHopf::standard_instances() {
            Err(e) => rec.error("cgr", "hopf.axioms", &e),
            Ok(inst) => {
                for (k, h) in inst.iter().enumerate() {
                    let id = format!("cgr{k}");
                    let mut rng = rec.rng(&format!("hopf.{id}"));
                    rec.checks(&id, "hopf.axioms", check_axioms_sampled(h, &mut rng, 4));
                    rec.checks(&id, "hopf.function_algebroid", h.check_m_iso(&mut rng, 4));
                }
            }
        }
    }
    if want(HopfInstance::Composite) {
        let Some(fq) = rec.guard("composite", "hopf.axioms", Fq::new(p, n)) else { return };
        let Some(h) = rec.guard("composite", "hopf.axioms", CompositeHopf::with_default_bound(fq.clone(), p, n)) else { return };
        rec.run("composite", "hopf.axioms", |r| Ok(check_axioms_sampled(h.hopf(), &mut r.rng("hopf.composite"), 3)));
        rec.checks("composite", "hopf.composite_extension", h.check_extension());
        rec.run("composite.two_route_psi", "hopf.two_route_psi", |_| {
            let law = honda_fgl(n, &fq, p.pow(n) as u32 + 1)?;
            let derived = derive_psi_from_coaction(&h, &law)?;
            (0..n)
                .map(|i| {
                    let direct = h.composite_psi_b(i)?;
                    Ok(first_diff(&format!("b{i}"), h.hopf().gamma(), &derived[i as usize], &direct).and(Check::from_bool(
                        format!("b{i}"),
                        derived[i as usize] == direct,
                        || "representations differ".into(),
                    )))
                })
                .collect()
        });
        rec.run("composite.conjugation_action", "hopf.conjugation_action", |r| {
            let mut rng = r.rng("hopf.conjugation_action");
            let mut out = Vec::new();
            for k in 0..4 {
                let mut a = vec![fq.one()];
                a.extend((1..n).map(|_| fq.random_elem(&mut rng)));
                let direct = h.act_on_lambda(&a)?;
                let via_chi = h.act_on_lambda_via_chi(&a)?;
                out.push(Check::from_bool(format!("sample{k}"), direct == via_chi, || format!("witness {a:?}")));
            }
            Ok(out)
        });
    }
}

// Comodules.

pub fn comod(rec: &mut Recorder, cfg: &RunConfig, suite: Option<ComodSuite>) {
    let want = |s: ComodSuite| suite.is_none() || suite == Some(s);
    if want(ComodSuite::Equivalence) {
        rec.run("equivalence", "comod.twisted_equivalence", equivalence);
    }
    let setup = || -> Result<(Fq, CompositeHopf<Fq>, LensModel<Fq>)> {
        let fq = Fq::new(cfg.p, cfg.n)?;
        let h = CompositeHopf::with_default_bound(fq.clone(), cfg.p, cfg.n)?;
        let lens = LensModel::new(fq.clone(), cfg.p, cfg.n, Flavor::K, vec![]);
        Ok((fq, h, lens))
    };
    if want(ComodSuite::Milnor) {
        if let Some(s) = rec.guard("milnor", "comod.milnor_anticommute", setup()) {
            milnor(rec, cfg, &s.0, &s.1, &s.2);
        }
    }
    if want(ComodSuite::Assembly) {
        if let Some(s) = rec.guard("assembly", "comod.assembly_round_trip", setup()) {
            assembly(rec, &s.1, &s.2);
        }
    }
}

fn equivalence(rec: &mut Recorder) -> Result<Vec<Check>> {
    let inst = FunctionHopf::standard_instances()?;
    let mut rng = rec.rng("comod.equivalence");
    let mut twisted = Check::pass("twisted_axioms");
    let mut comodule = Check::pass("comodule_axioms");
    let mut there_back = Check::pass("twisted_round_trip");
    let mut back_there = Check::pass("comodule_round_trip");
    let mut monoidal = Check::pass("monoidal");
    let mut perturbed = Check::pass("perturbation_detected");
    for k in 0..RANDOM_INSTANCES {
        let h = &inst[k % inst.len()];
        let t = TwistedModule::random(h, &mut rng);
        let ok = |cs: &[Check]| cs.iter().find(|c| !c.ok).map(|c| format!("instance {k} ({}): {} {:?}", h.group().name(), c.name, c.witness));
        if let Some(w) = ok(&t.check(h, &mut rng, 3)) {
            twisted = twisted.and(Check::fail("twisted_axioms", w));
        }
        let c = comod::twisted_to_comod(h, &t);
        if let Some(w) = ok(&c.check(h)) {
            comodule = comodule.and(Check::fail("comodule_axioms", w));
        }
        if comod::comod_to_twisted(h, &c) != t {
            there_back = there_back.and(Check::fail("twisted_round_trip", format!("instance {k}")));
        }
        if comod::twisted_to_comod(h, &comod::comod_to_twisted(h, &c)) != c {
            back_there = back_there.and(Check::fail("comodule_round_trip", format!("instance {k}")));
        }
        let u = TwistedModule::random(h, &mut rng);
        let lhs = comod::twisted_to_comod(h, &t.tensor(&u, h));
        let rhs = c.tensor(&comod::twisted_to_comod(h, &u), h);
        if lhs.coaction != rhs.coaction {
            monoidal = monoidal.and(Check::fail("monoidal", format!("instance {k}")));
        }
        if k < inst.len() {
            let r = h.ring();
            let mut bad = t.clone();
            let g = h.group().order() - 1;
            bad.mats[g][0][0] = r.add(&bad.mats[g][0][0], &r.one());
            let caught = !crate::check::all_ok(&bad.check(h, &mut rng, 3)) && !crate::check::all_ok(&comod::twisted_to_comod(h, &bad).check(h));
            if !caught {
                perturbed = perturbed.and(Check::fail("perturbation_detected", format!("instance {k}")));
            }
        }
    }
    Ok(vec![twisted, comodule, there_back, back_there, monoidal, perturbed])
}

fn pool(h: &CompositeHopf<Fq>, lens: &LensModel<Fq>) -> Result<Vec<CLambdaComodule<Series<u32>>>> {
    Ok(vec![
        CLambdaComodule::trivial(h, "e", false),
        CLambdaComodule::trivial(h, "o", true),
        CLambdaComodule::exterior(h),
        lens.clambda(h)?,
    ])
}

fn pool_rank(lens: &LensModel<Fq>) -> usize {
    lens.basis_names().len() + 6
}

fn milnor(rec: &mut Recorder, cfg: &RunConfig, fq: &Fq, h: &CompositeHopf<Fq>, lens: &LensModel<Fq>) {
    let n = cfg.n as usize;
    rec.run("anticommute", "comod.milnor_anticommute", |r| {
        let ext = comod::exterior_regular(h.lambda());
        let lam = lens.lambda_comodule(h)?;
        let mut out = vec![
            Check { name: "exterior".into(), ..comod::extract_milnor(h.lambda(), &ext).anticommutation_check(fq) },
            Check { name: "lens".into(), ..comod::extract_milnor(h.lambda(), &lam).anticommutation_check(fq) },
        ];
        let p = pool(h, lens)?;
        let mut rng = r.rng("comod.anticommute.random");
        let mut random = Check::pass("random");
        for k in 0..ANTICOMMUTATION_SAMPLES {
            let m = comod::random_clambda(h, &p, pool_rank(lens), &mut rng);
            let c = comod::extract_milnor(h.lambda(), &m.lambda).anticommutation_check(fq);
            if !c.ok {
                random = random.and(Check::fail("random", format!("sample {k}: {}", c.witness.unwrap_or_default())));
            }
        }
        out.push(random);
        Ok(out)
    });
    rec.run("derivation", "comod.milnor_derivation", |_| {
        let ext = comod::exterior_regular(h.lambda());
        let lam = lens.lambda_comodule(h)?;
        let mut out = vec![
            Check { name: "exterior_lens".into(), ..comod::milnor_derivation_check(h.lambda(), &ext, &lam) },
            Check { name: "lens_exterior".into(), ..comod::milnor_derivation_check(h.lambda(), &lam, &ext) },
        ];
        if cfg.n == 1 {
            out.push(Check { name: "lens_lens".into(), ..comod::milnor_derivation_check(h.lambda(), &lam, &lam) });
        }
        Ok(out)
    });
    rec.run("twist", "comod.milnor_twist", |r| {
        let honda = honda_fgl(cfg.n, fq, default_trunc(cfg.p, cfg.n))?;
        let m = lens.composite_comodule(h)?;
        let g = fq.subfield_generator(cfg.n).ok_or_else(|| Error::InvalidField("no F_(p^n)".into()))?;
        let sub = cfg.p.pow(cfg.n) - 1;
        let mut rng = r.rng("comod.twist");
        let mut out = Vec::new();
        for k in 0..3 {
            let coeffs: Vec<u32> = (0..n).map(|_| fq.pow(&g, rand::Rng::gen_range(&mut rng, 0..sub))).collect();
            let endo = honda.honda_endo(&coeffs)?;
            let mut a = endo.coeffs.clone();
            a.resize(n, fq.zero());
            let action = lens.group_action(&a)?;
            for c in comod::milnor_twist_check(h, &m, &action, &a)? {
                out.push(Check { name: format!("honda_automorphism{k}.{}", c.name), ..c });
            }
            let mut strict = a.clone();
            strict[0] = fq.one();
            let from_coaction = comod::action_from_coaction(h, &m, &strict)?;
            out.push(Check::from_bool(format!("strict{k}.evaluated_coaction"), from_coaction == lens.group_action(&strict)?, || {
                format!("witness {strict:?}")
            }));
        }
        Ok(out)
    });
    rec.run("lens", "comod.milnor_lens", |_| {
        let lam = lens.lambda_comodule(h)?;
        let q = comod::extract_milnor(h.lambda(), &lam);
        let y = lens.index(1, 0);
        Ok((0..n)
            .map(|i| {
                let target = lens.index(0, cfg.p.pow(i as u32) as i32);
                let ok = q.ops[i][y].iter().enumerate().all(|(k, c)| if k == target { fq.is_one(c) } else { fq.is_zero(c) });
                Check::from_bool(format!("y_Q{i}"), ok, || format!("row {:?}", q.ops[i][y]))
            })
            .collect())
    });
    rec.run("recognition", "comod.milnor_recognition", |r| {
        let ext = comod::exterior_regular(h.lambda());
        let q = comod::extract_milnor(h.lambda(), &ext);
        let mut rng = r.rng("comod.recognition");
        let top = ext.rank() - 1;
        let mut out = Vec::new();
        for k in 0..3 {
            let planted: Vec<u32> = (0..n).map(|_| fq.random_elem(&mut rng)).collect();
            let op = q.combination(fq, &planted);
            let found = comod::recognize_milnor(&q, fq, &op, top)?;
            out.push(Check::from_bool(format!("planted{k}"), found == planted, || format!("{found:?} vs {planted:?}")));
        }
        let id = comod::matrix::identity(fq, ext.rank());
        out.push(Check::from_bool(
            "rejects_identity",
            matches!(comod::recognize_milnor(&q, fq, &id, top), Err(Error::CompatibilityFailure(_))),
            || "identity accepted as a combination".into(),
        ));
        Ok(out)
    });
}

fn assembly(rec: &mut Recorder, h: &CompositeHopf<Fq>, lens: &LensModel<Fq>) {
    rec.checks("generator_identity", "comod.generator_identity", comod::psi_lambda_colinearity(h));
    rec.check("assembled_coaction", "comod.assembled_coaction", comod::coaction_identification(h));
    rec.run("nine_diagram", "comod.nine_diagram", |_| {
        let mut out = Vec::new();
        for (name, m) in [
            ("trivial", CLambdaComodule::trivial(h, "e", false)),
            ("exterior", CLambdaComodule::exterior(h)),
            ("lens", lens.clambda(h)?),
        ] {
            for c in comod::nine_diagram_check(h, &m) {
                out.push(Check { name: format!("{name}.{}", c.name), ..c });
            }
        }
        Ok(out)
    });
    rec.run("round_trip", "comod.assembly_round_trip", |r| {
        let cl = lens.clambda(h)?;
        let direct = lens.composite_comodule(h)?;
        let assembled = comod::assemble(h, &cl)?;
        let mut out = vec![
            Check::from_bool("lens.assembled_is_direct", assembled.coaction == direct.coaction, || "coactions differ".into()),
            Check::from_bool("lens.split_assemble", comod::split(h, &assembled) == cl, || "split differs".into()),
            Check::from_bool("lens.assemble_split", comod::assemble(h, &comod::split(h, &direct))?.coaction == direct.coaction, || {
                "assembled split differs".into()
            }),
        ];
        let p = pool(h, lens)?;
        let mut rng = r.rng("comod.assembly.random");
        let mut random = Check::pass("random");
        for k in 0..RANDOM_INSTANCES {
            let m = comod::random_clambda(h, &p, pool_rank(lens), &mut rng);
            let compat = comod::compatibility_check(h, &m);
            if !compat.ok {
                random = random.and(Check::fail("random", format!("sample {k}: {}", compat.witness.unwrap_or_default())));
                continue;
            }
            let a = comod::assemble(h, &m)?;
            if comod::split(h, &a) != m || comod::assemble(h, &comod::split(h, &a))?.coaction != a.coaction {
                random = random.and(Check::fail("random", format!("sample {k}: round trip differs")));
            }
        }
        out.push(random);
        Ok(out)
    });
}

// Spaces.

pub fn chern(rec: &mut Recorder, cfg: &RunConfig) {
    let Some(s) = rec.guard("solve", "isofind.solver", solve(cfg)) else { return };
    rec.run("verify", "isofind.verify", |_| verify_iso(&s.iso));
    let Some(data) = rec.guard("chern", "spaces.chern_ring_map", ChernData::new(s.iso.clone(), &s.law)) else { return };
    match data.checks() {
        Err(e) => rec.error("chern", "spaces.chern_ring_map", &e),
        Ok(cs) => {
            for c in cs {
                let anchor = match c.name.as_str() {
                    "theta_x" | "theta_y" | "theta_unit_triangular" => "spaces.chern_generators",
                    "bhat_expansion" | "inverse_additive" => "spaces.bhat_basis",
                    "coaction_transport" | "bhat_milnor_on_y" => "spaces.coaction_transport",
                    "homomorphy" | "left inverse" | "right inverse" => "isofind.verify",
                    _ => "spaces.chern_ring_map",
                };
                let id = format!("chern.{}", c.name.replace(' ', "_"));
                rec.check(&id, anchor, c);
            }
        }
    }
    rec.run("bhat", "spaces.bhat_basis", |_| {
        let b = data.bhat_matrix()?;
        let t = &data.iso().tower;
        let upper_zero = b.iter().enumerate().all(|(i, row)| row.iter().skip(i + 1).all(|x| t.is_zero(x)));
        let diag_units = b.iter().enumerate().all(|(i, row)| t.inv(&row[i]).is_some());
        let first = t.eq_elem(&b[0][0], &data.w());
        Ok(vec![
            Check::from_bool("lower_triangular", upper_zero, || "nonzero entry above the diagonal".into()),
            Check::from_bool("unit_diagonal", diag_units, || "diagonal entry is not a unit".into()),
            Check::from_bool("leading_entry_is_w", first, || t.render(&b[0][0])),
        ])
    });
    rec.run("bhat_invariance", "spaces.bhat_invariance", |_| {
        let ws = witnesses(&s, cfg.n)?;
        let names: Vec<String> = ws.iter().map(|(n, _)| n.clone()).collect();
        let ws: Vec<ActionWitness> = ws.into_iter().map(|(_, w)| w).collect();
        Ok(bhat_invariance_check(&data, &ws)?
            .into_iter()
            .zip(names)
            .map(|(c, name)| Check { name, ..c })
            .collect())
    });
}

/// Coaction tables of the lens model with comodule checks, and the
/// projective model's coaction through the Honda law.
pub fn coaction(rec: &mut Recorder, cfg: &RunConfig) {
    let (p, n) = (cfg.p, cfg.n);
    let Some(fq) = rec.guard("field", "spaces.lens_coaction", Fq::new(p, n)) else { return };
    let Some(h) = rec.guard("hopf", "spaces.lens_coaction", CompositeHopf::with_default_bound(fq.clone(), p, n)) else { return };
    let lens = LensModel::new(fq.clone(), p, n, Flavor::K, vec![]);
    rec.run("lens", "spaces.lens_coaction", |r| {
        let c = lens.c_comodule(&h)?;
        let l = lens.lambda_comodule(&h)?;
        let d = lens.composite_comodule(&h)?;
        let rows = |m: &comod::Comodule<Series<u32>>, ring: &crate::gseries::SeriesRing<Fq>| -> Vec<(String, String)> {
            [lens.index(0, 1), lens.index(1, 0)]
                .iter()
                .map(|&j| {
                    let parts: Vec<String> = m.coaction[j]
                        .iter()
                        .enumerate()
                        .filter(|(_, g)| !g.is_empty())
                        .map(|(k, g)| format!("({}) ⊗ {}", ring.render(g), m.names[k]))
                        .collect();
                    (format!("ρ({})", m.names[j]), parts.join(" + "))
                })
                .collect()
        };
        r.table("lens C-coaction", rows(&c, h.c_part().gamma()));
        r.table("lens Λ-coaction", rows(&l, h.lambda().gamma()));
        r.table("lens composite coaction", rows(&d, h.gamma()));
        let mut out = Vec::new();
        for (name, cs) in [("c", c.check(h.c_part())), ("lambda", l.check(h.lambda())), ("composite", d.check(h.hopf()))] {
            out.extend(cs.into_iter().map(|x| Check { name: format!("{name}.{}", x.name), ..x }));
        }
        out.push(Check::from_bool("assembled_is_direct", comod::assemble(&h, &lens.clambda(&h)?)?.coaction == d.coaction, || {
            "coactions differ".into()
        }));
        Ok(out)
    });
    rec.run("proj", "spaces.proj_coaction", |_| {
        let law = honda_fgl(n, &fq, default_trunc(p, n))?;
        let m = ProjModel::with_default_trunc(fq.clone(), p, n, Flavor::K, vec![]);
        let c = m.c_comodule(&h, &law)?;
        Ok(c.check(h.c_part()))
    });
}
