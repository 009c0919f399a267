use num_rational::BigRational;
use serde::Serialize;

use super::log::{dehomogenize, honda_log, law_from_log, log_depth, PTypicalLog};
use crate::check::Check;
use crate::coeffring::{Fq, Rationals, Ring};
use crate::error::{Error, Result};
use crate::gseries::{Series, SeriesRing, VarSpec, VarTable};

/// Where a law came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// Assignments `v_i -> a_i`, rendered.
    HazewinkelSpecialized(Vec<(u32, String)>),
    Honda(u32),
    User,
}

/// A formal group law `F(X, Y)` truncated at total degree `trunc` in `X, Y`.
///
/// Coefficients live in `base[params]`, where the parameters carry weight 0
/// and are not truncated.
#[derive(Clone, Debug)]
pub struct Fgl<B: Ring> {
    p: u64,
    trunc: u32,
    params: Vec<VarSpec>,
    ring2: SeriesRing<B>,
    law: Series<B::Elem>,
    provenance: Provenance,
}

impl<B: Ring> Fgl<B> {
    /// Wraps a series in `params ++ [X, Y]`; no axiom is checked here.
    pub fn from_series(
        base: B,
        p: u64,
        params: Vec<VarSpec>,
        trunc: u32,
        law: Series<B::Elem>,
        provenance: Provenance,
    ) -> Self {
        let ring2 = ring_with(&base, &params, &["X", "Y"], trunc);
        let law = ring2.truncate_weight(&law, trunc as i64);
        Fgl { p, trunc, params, ring2, law, provenance }
    }

    /// The additive law `X + Y`.
    pub fn additive(base: B, p: u64, trunc: u32) -> Self {
        let ring2 = ring_with(&base, &[], &["X", "Y"], trunc);
        let law = ring2.add(&ring2.var(0), &ring2.var(1));
        Self::from_series(base, p, vec![], trunc, law, Provenance::User)
    }

    /// The multiplicative law `X + Y + XY`.
    pub fn multiplicative(base: B, p: u64, trunc: u32) -> Self {
        let ring2 = ring_with(&base, &[], &["X", "Y"], trunc);
        let (x, y) = (ring2.var(0), ring2.var(1));
        let law = ring2.add(&ring2.add(&x, &y), &ring2.mul(&x, &y));
        Self::from_series(base, p, vec![], trunc, law, Provenance::User)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn trunc(&self) -> u32 {
        self.trunc
    }
    pub fn base(&self) -> &B {
        self.ring2.base()
    }
    pub fn params(&self) -> &[VarSpec] {
        &self.params
    }
    pub fn nparams(&self) -> usize {
        self.params.len()
    }
    pub fn law(&self) -> &Series<B::Elem> {
        &self.law
    }
    pub fn ring2(&self) -> &SeriesRing<B> {
        &self.ring2
    }
    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `base[params][[names]]` truncated at total degree `trunc`.
    pub fn ring(&self, names: &[&str]) -> SeriesRing<B> {
        ring_with(self.base(), &self.params, names, self.trunc)
    }

    /// Univariate ring `params ++ [X]`.
    pub fn ring1(&self) -> SeriesRing<B> {
        self.ring(&["X"])
    }

    /// `F(a, b)` in `target`, whose first variables must be the parameters.
    pub fn apply(&self, target: &SeriesRing<B>, a: &Series<B::Elem>, b: &Series<B::Elem>) -> Result<Series<B::Elem>> {
        let np = self.params.len();
        if target.nvars() < np || target.vars().vars[..np] != self.params[..] {
            return Err(Error::VarMismatch);
        }
        let mut images: Vec<Series<B::Elem>> = (0..np).map(|i| target.var(i)).collect();
        images.push(a.clone());
        images.push(b.clone());
        self.ring2.substitute(&self.law, target, &images, |c| c.clone())
    }

    /// Left fold of `F` over `summands`.
    pub fn formal_sum(&self, target: &SeriesRing<B>, summands: &[Series<B::Elem>]) -> Result<Series<B::Elem>> {
        let z = target.zero_exp();
        if summands.iter().any(|s| s.terms.contains_key(&z)) {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut it = summands.iter();
        let mut acc = match it.next() {
            None => return Ok(target.zero()),
            Some(s) => s.clone(),
        };
        for s in it {
            acc = self.apply(target, &acc, s)?;
        }
        Ok(acc)
    }

    /// `[p](X)` in `params ++ [X]`.
    pub fn p_series(&self) -> Result<Series<B::Elem>> {
        self.n_series(self.p as i64)
    }

    /// `[k](X)` for `k >= 0`, by repeated addition.
    pub fn n_series(&self, k: i64) -> Result<Series<B::Elem>> {
        let r1 = self.ring1();
        let x = r1.var(self.nparams());
        let mut acc = r1.zero();
        for _ in 0..k {
            acc = self.apply(&r1, &acc, &x)?;
        }
        Ok(acc)
    }

    /// The formal inverse `i(X)` with `F(X, i(X)) = 0`.
    pub fn formal_inverse(&self) -> Result<Series<B::Elem>> {
        let r1 = self.ring1();
        let x = r1.var(self.nparams());
        let mut inv = r1.neg(&x);
        for _ in 0..=self.trunc {
            let r = self.apply(&r1, &x, &inv)?;
            if r.is_empty() {
                return Ok(inv);
            }
            inv = r1.sub(&inv, &r);
        }
        Err(Error::CompatibilityFailure("formal inverse did not converge".into()))
    }

    /// Height of the law with every parameter set to 0: `h` with `[p](X)` starting at
    /// `X^(p^h)`, or `None` when the p-series vanishes mod truncation.
    pub fn height(&self) -> Result<Option<u32>> {
        let ps = self.p_series()?;
        let np = self.nparams();
        let low = ps
            .terms
            .iter()
            .filter(|(e, _)| e[..np].iter().all(|&k| k == 0))
            .map(|(e, _)| e[np])
            .min();
        Ok(low.and_then(|d| {
            let mut h = 0;
            let mut q = 1i64;
            while q < d as i64 {
                q *= self.p as i64;
                h += 1;
            }
            (q == d as i64).then_some(h)
        }))
    }

    /// Unit, commutativity and associativity, each mod truncation.
    pub fn check_axioms(&self) -> Result<Vec<Check>> {
        let r2 = &self.ring2;
        let np = self.nparams();
        let (x, y) = (r2.var(np), r2.var(np + 1));
        let mut out = Vec::new();
        let fx0 = self.apply(r2, &x, &r2.zero())?;
        let f0y = self.apply(r2, &r2.zero(), &y)?;
        out.push(first_diff("unit", r2, &fx0, &x).and(first_diff("unit", r2, &f0y, &y)));
        let fyx = self.apply(r2, &y, &x)?;
        out.push(first_diff("commutativity", r2, &self.law, &fyx));
        let r3 = self.ring(&["X", "Y", "Z"]);
        let (x3, y3, z3) = (r3.var(np), r3.var(np + 1), r3.var(np + 2));
        let fxy = self.apply(&r3, &x3, &y3)?;
        let fyz = self.apply(&r3, &y3, &z3)?;
        let lhs = self.apply(&r3, &fxy, &z3)?;
        let rhs = self.apply(&r3, &x3, &fyz)?;
        out.push(first_diff("associativity", &r3, &lhs, &rhs));
        Ok(out)
    }

    /// `F(X, Y) = X + Y` modulo total degree `p^n`.
    pub fn check_strict_height(&self, n: u32) -> Check {
        let r2 = &self.ring2;
        let np = self.nparams();
        let low = r2.truncate_weight(&self.law, self.p.pow(n) as i64);
        let sum = r2.add(&r2.var(np), &r2.var(np + 1));
        first_diff(&format!("strict height >= {n}"), r2, &low, &sum)
    }

    /// Moves the law to another base along a ring map.
    pub fn map_base<C: Ring>(&self, base: C, f: impl Fn(&B::Elem) -> C::Elem) -> Fgl<C> {
        let target = ring_with(&base, &self.params, &["X", "Y"], self.trunc);
        let law = self.ring2.change_base(&self.law, &target, |c| Ok(f(c))).unwrap();
        Fgl {
            p: self.p,
            trunc: self.trunc,
            params: self.params.clone(),
            ring2: target,
            law,
            provenance: self.provenance.clone(),
        }
    }

    /// Same law at a smaller truncation.
    pub fn truncated(&self, trunc: u32) -> Self {
        let trunc = trunc.min(self.trunc);
        Self::from_series(
            self.base().clone(),
            self.p,
            self.params.clone(),
            trunc,
            self.law.clone(),
            self.provenance.clone(),
        )
    }
}

pub(crate) fn ring_with<B: Ring>(base: &B, params: &[VarSpec], names: &[&str], trunc: u32) -> SeriesRing<B> {
    let mut vars = params.to_vec();
    vars.extend(names.iter().map(|n| VarSpec::even(n, 0, None)));
    SeriesRing::new(base.clone(), VarTable::new(vars).with_cap(trunc))
}

/// Passes when `a == b`, otherwise names the lowest monomial where they differ.
pub fn first_diff<B: Ring>(name: &str, ring: &SeriesRing<B>, a: &Series<B::Elem>, b: &Series<B::Elem>) -> Check {
    let d = ring.sub(a, b);
    match ring.sorted_terms(&d).first() {
        None => Check::pass(name),
        Some((e, _)) => {
            let m = ring.render_exp(e);
            let m = if m.is_empty() { "1".to_string() } else { m };
            Check::fail(
                name,
                format!(
                    "{m}: {} vs {}",
                    ring.base().render(&ring.coeff(a, e)),
                    ring.base().render(&ring.coeff(b, e))
                ),
            )
        }
    }
}

/// Default truncation `p^(n+1) + p`.
pub fn default_trunc(p: u64, n: u32) -> u32 {
    (p.pow(n + 1) + p) as u32
}

/// The Honda law of height `n` over `fq`, truncated at total degree `trunc`.
pub fn honda_fgl(n: u32, fq: &Fq, trunc: u32) -> Result<Fgl<Fq>> {
    if n == 0 {
        return Err(Error::Config("height must be positive".into()));
    }
    if !fq.degree().is_multiple_of(n) {
        return Err(Error::InvalidField(format!(
            "F_{}^{} does not contain F_{}^{n}",
            fq.p(),
            fq.degree(),
            fq.p()
        )));
    }
    let log = honda_log(fq.p(), n, trunc);
    let law = law_from_log(&[], &log, fq, trunc)?;
    Ok(Fgl::from_series(fq.clone(), fq.p(), vec![], trunc, law, Provenance::Honda(n)))
}

/// Parameters and assignments for a specialization of the universal p-typical law.
#[derive(Clone, Debug)]
pub struct Specialization {
    /// `Q[params]`; parameters of nonzero degree must be units.
    pub ring: SeriesRing<Rationals>,
    pub assignments: Vec<(u32, Series<BigRational>)>,
}

impl Specialization {
    /// `v_n -> u_n u^-(p^n - 1)`, `v_(n+1) -> u^-(p^(n+1) - 1)`, others 0.
    pub fn e_law(p: u64, n: u32) -> Self {
        let ring = SeriesRing::new(
            Rationals,
            VarTable::new(vec![VarSpec::param(&format!("u{n}"), 0), VarSpec::unit("u", -2)]),
        );
        let a = |un: i32, uexp: i32| ring.monomial(vec![un, uexp], ring.base().one());
        let assignments = vec![
            (n, a(1, -(p.pow(n) as i32 - 1))),
            (n + 1, a(0, -(p.pow(n + 1) as i32 - 1))),
        ];
        Specialization { ring, assignments }
    }

    /// `v_n -> w^-(p^n - 1)`, others 0.
    pub fn k_law(p: u64, n: u32) -> Self {
        let ring = SeriesRing::new(Rationals, VarTable::new(vec![VarSpec::unit("w", -2)]));
        let a = ring.monomial(vec![-(p.pow(n) as i32 - 1)], ring.base().one());
        Specialization { ring, assignments: vec![(n, a)] }
    }

    /// All `v_i -> 0`.
    pub fn zero() -> Self {
        Specialization { ring: SeriesRing::new(Rationals, VarTable::new(vec![])), assignments: vec![] }
    }
}

/// Specializes the universal p-typical law along `spec` and reduces into `fq`.
///
/// Parameters of nonzero degree are set to 1 after the grading check, so the
/// result is the degree-0 law over the degree-0 parameters.
pub fn specialize_hazewinkel(spec: &Specialization, fq: &Fq, trunc: u32) -> Result<Fgl<Fq>> {
    let p = fq.p();
    let depth = log_depth(p, trunc);
    let pring = &spec.ring;
    let params0: Vec<VarSpec> = pring.vars().vars.iter().filter(|v| v.degree == 0).cloned().collect();
    let p0ring = SeriesRing::new(Rationals, VarTable::new(params0.clone()));
    let mut images = vec![p0ring.zero(); depth as usize];
    for (i, a) in &spec.assignments {
        let d = dehomogenize(pring, p, *i, a)?;
        if *i <= depth {
            images[*i as usize - 1] = d;
        }
    }
    let hz = PTypicalLog::new(p, depth);
    let mut log = Vec::new();
    for (k, m) in hz.coeffs.iter().enumerate() {
        let c = hz.ring.substitute(m, &p0ring, &images, |c| c.clone())?;
        if !c.is_empty() {
            log.push((p.pow(k as u32) as u32, c));
        }
    }
    let law = law_from_log(&params0, &log, fq, trunc)?;
    let rendered = spec.assignments.iter().map(|(i, a)| (*i, pring.render(a))).collect();
    Ok(Fgl::from_series(fq.clone(), p, params0, trunc, law, Provenance::HazewinkelSpecialized(rendered)))
}

/// `phi(F(X, Y)) = G(phi(X), phi(Y))` mod truncation, for `phi` in `params ++ [X]`.
pub fn check_homomorphism<B: Ring>(
    name: &str,
    source: &Fgl<B>,
    target: &Fgl<B>,
    phi: &Series<B::Elem>,
) -> Result<Check> {
    if source.params != target.params {
        return Err(Error::VarMismatch);
    }
    let trunc = source.trunc.min(target.trunc);
    let r1 = ring_with(source.base(), &source.params, &["X"], trunc);
    let r2 = ring_with(source.base(), &source.params, &["X", "Y"], trunc);
    let np = source.nparams();
    let keep: Vec<Series<B::Elem>> = (0..np).map(|i| r2.var(i)).collect();
    let at = |arg: Series<B::Elem>| {
        let mut images = keep.clone();
        images.push(arg);
        r1.substitute(phi, &r2, &images, |c| c.clone())
    };
    let f = source.apply(&r2, &r2.var(np), &r2.var(np + 1))?;
    let lhs = at(f)?;
    let px = at(r2.var(np))?;
    let py = at(r2.var(np + 1))?;
    let rhs = target.apply(&r2, &px, &py)?;
    Ok(first_diff(name, &r2, &lhs, &rhs))
}
