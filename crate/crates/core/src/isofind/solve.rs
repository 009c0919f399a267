use serde::Serialize;

use crate::check::Check;
use crate::coeffring::{Fq, Ring, Tower, TowerElem};
use crate::error::{Error, Result};
use crate::fgl::{check_homomorphism, first_diff, ring_with, Fgl};
use crate::gseries::{Series, SeriesRing};

/// One step of the coefficient recursion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolverStep {
    /// Leading coefficient from `c^exponent = gamma`.
    Kummer { degree: u32, exponent: u32, ramification: u32, generator: Option<String> },
    /// `c = lambda z` with `z^(p^n) = z + const`.
    Additive { degree: u32, generator: Option<String> },
    /// Solved from the `X^pivot Y^(degree - pivot)` coefficient of the homomorphy defect.
    Linear { degree: u32, pivot: u32 },
}

/// Data of an additive step, kept to rebuild Galois actions.
#[derive(Clone, Debug)]
pub(crate) struct AdditiveData {
    pub degree: usize,
    /// `c_degree = lambda * z`.
    pub lambda: TowerElem,
    /// Index of the adjoined generator, if any.
    pub generator: Option<usize>,
}

/// An isomorphism `phi` from `source` to `target` over a tower.
#[derive(Clone, Debug)]
pub struct FglIso {
    pub tower: Tower,
    pub height: u32,
    pub trunc: u32,
    pub source: Fgl<Tower>,
    pub target: Fgl<Tower>,
    /// `tower[[X]]` truncated at `trunc`.
    pub ring1: SeriesRing<Tower>,
    pub phi: Series<TowerElem>,
    pub inverse: Series<TowerElem>,
    pub steps: Vec<SolverStep>,
    /// `gamma` with `phi_1^(p^n - 1) = gamma`.
    pub leading_relation: TowerElem,
    pub(crate) additive: Vec<AdditiveData>,
}

impl FglIso {
    pub fn coeff(&self, k: usize) -> TowerElem {
        self.ring1.coeff(&self.phi, &[k as i32])
    }

    pub fn leading(&self) -> TowerElem {
        self.coeff(1)
    }

    /// `phi_1^(p^n - 1) = gamma`, checked exactly.
    pub fn check_leading_relation(&self) -> Check {
        let q = self.tower.p().pow(self.height);
        let lhs = self.tower.pow(&self.leading(), q - 1);
        Check::from_bool("leading Kummer relation", lhs == self.leading_relation, || {
            format!("{} vs {}", self.tower.render(&lhs), self.tower.render(&self.leading_relation))
        })
    }

    /// Same isomorphism with `phi` replaced (for post-composition or corruption tests).
    pub fn with_phi(&self, phi: Series<TowerElem>) -> Result<FglIso> {
        let inverse = self.ring1.reverse(&phi)?;
        Ok(FglIso { phi, inverse, ..self.clone() })
    }
}

/// Sends a series over `fq[params]` into `tower`, mapping the parameter (at
/// most one) to `u`.
pub(crate) fn series_into_tower(
    src: &SeriesRing<Fq>,
    f: &Series<u32>,
    nparams: usize,
    tower: &Tower,
    target: &SeriesRing<Tower>,
) -> Result<Series<TowerElem>> {
    if nparams > 1 {
        return Err(Error::Config("at most one deformation parameter is supported".into()));
    }
    let images: Vec<Series<TowerElem>> = (0..src.nvars())
        .map(|i| if i < nparams { target.constant(tower.u_pow(1)) } else { target.var(i - nparams) })
        .collect();
    src.substitute(f, target, &images, |c| tower.from_fq(*c))
}

/// A law over `fq[u]` moved into `tower`.
pub fn law_into_tower(f: &Fgl<Fq>, tower: &Tower, trunc: u32) -> Result<Fgl<Tower>> {
    let target = ring_with(tower, &[], &["X", "Y"], trunc);
    let law = series_into_tower(f.ring2(), f.law(), f.nparams(), tower, &target)?;
    Ok(Fgl::from_series(tower.clone(), f.p(), vec![], trunc, law, f.provenance().clone()))
}

fn is_p_power(k: u64, p: u64) -> bool {
    let mut k = k;
    while k.is_multiple_of(p) {
        k /= p;
    }
    k == 1
}

/// `C(k, j) mod p` by Lucas' theorem.
pub(crate) fn binom_mod_p(mut k: u64, mut j: u64, p: u64) -> u64 {
    let mut out = 1;
    while k > 0 || j > 0 {
        let (a, b) = (k % p, j % p);
        if b > a {
            return 0;
        }
        let mut c = 1u64;
        for i in 0..b {
            c = c * (a - i) / (i + 1);
        }
        c %= p;
        out = out * c % p;
        k /= p;
        j /= p;
    }
    out
}

struct State {
    tower: Tower,
    coeffs: Vec<TowerElem>,
    additive: Vec<AdditiveData>,
}

impl State {
    fn extend_to(&mut self, next: Tower) {
        if next == self.tower {
            return;
        }
        for c in &mut self.coeffs {
            *c = next.embed_from(&self.tower, c);
        }
        for a in &mut self.additive {
            a.lambda = next.embed_from(&self.tower, &a.lambda);
        }
        self.tower = next;
    }

    fn phi(&self, ring1: &SeriesRing<Tower>) -> Series<TowerElem> {
        let mut s = Series::default();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !self.tower.is_zero(c) && ring1.vars().admits(&[k as i32]) {
                s.terms.insert(vec![k as i32], c.clone());
            }
        }
        s
    }
}

/// Weight-`k` part of `phi(F(X, Y)) - H(phi(X), phi(Y))`.
fn defect(
    tower: &Tower,
    source: &Fgl<Fq>,
    target: &Fgl<Fq>,
    phi: &Series<TowerElem>,
    k: u32,
) -> Result<(SeriesRing<Tower>, Series<TowerElem>)> {
    let f = law_into_tower(&source.truncated(k + 1), tower, k + 1)?;
    let h = law_into_tower(&target.truncated(k + 1), tower, k + 1)?;
    let r1 = ring_with(tower, &[], &["X"], k + 1);
    let r2 = ring_with(tower, &[], &["X", "Y"], k + 1);
    let (x, y) = (r2.var(0), r2.var(1));
    let fxy = f.apply(&r2, &x, &y)?;
    let at = |a: &Series<TowerElem>| r1.substitute(phi, &r2, std::slice::from_ref(a), |c| c.clone());
    let lhs = at(&fxy)?;
    let rhs = h.apply(&r2, &at(&x)?, &at(&y)?)?;
    let d = r2.sub(&lhs, &rhs);
    let top = Series { terms: d.terms.into_iter().filter(|(e, _)| (e[0] + e[1]) as u32 == k).collect() };
    Ok((r2, top))
}

/// Builds `phi` with `phi(F(X, Y)) = H(phi(X), phi(Y))` mod total degree `trunc`.
///
/// The leading coefficient solves `c^(p^n - 1) = gamma` with `gamma` the
/// `X^(p^n)` coefficient of `[p]_F`. At a degree `k = p^i > 1` the coefficient
/// is `c_1^k z` where `z^(p^n) = z + const` comes from comparing `X^(k p^n)` in
/// `phi([p]_F(X)) = phi(X)^(p^n)`. Every other coefficient enters the degree-`k`
/// defect through `(X + Y)^k - X^k - Y^k` and is solved linearly.
pub fn solve_phi(source: &Fgl<Fq>, honda: &Fgl<Fq>, trunc: u32, uprec: u32) -> Result<FglIso> {
    let n = honda.honda_height()?;
    let fq = source.base().clone();
    if *honda.base() != fq {
        return Err(Error::BaseMismatch);
    }
    if source.nparams() > 1 {
        return Err(Error::Config("at most one deformation parameter is supported".into()));
    }
    let p = fq.p();
    let q = p.pow(n);
    if trunc < 2 || trunc > honda.trunc() || trunc > source.trunc() {
        return Err(Error::PrecisionExhausted(format!(
            "X-truncation {trunc} exceeds a law truncation"
        )));
    }
    let mut kmax = 1u64;
    while kmax * p < trunc as u64 {
        kmax *= p;
    }
    let need = (kmax * q + 1) as u32;
    if source.trunc() < need {
        return Err(Error::PrecisionExhausted(format!(
            "the p-series comparison needs the source law to total degree {need}"
        )));
    }
    let pseries = source.truncated(need).p_series()?;
    let src1 = source.truncated(need).ring1();
    let np = source.nparams();
    if pseries.terms.keys().any(|e| (e[np] as u64) < q) {
        return Err(Error::HeightTooLow(n));
    }

    let mut st = State {
        tower: Tower::new(fq.clone(), uprec),
        coeffs: vec![TowerElem::default(); trunc as usize],
        additive: Vec::new(),
    };
    let mut steps = Vec::new();
    let mut gamma = TowerElem::default();
    for k in 1..trunc {
        let tower = st.tower.clone();
        let ngens = tower.generators().len();
        if k == 1 {
            let bigr = ring_with(&tower, &[], &["X"], need);
            let g = series_into_tower(&src1, &pseries, np, &tower, &bigr)?;
            gamma = bigr.coeff(&g, &[q as i32]);
            if tower.is_zero(&gamma) {
                return Err(Error::UnsupportedExtension(format!("[p](X) has no X^{q} term")));
            }
            let (next, c1) = tower.adjoin_kummer((q - 1) as u32, &gamma)?;
            gamma = next.embed_from(&tower, &gamma);
            st.extend_to(next);
            st.coeffs[1] = c1;
            steps.push(SolverStep::Kummer {
                degree: 1,
                exponent: (q - 1) as u32,
                ramification: st.tower.ramification(),
                generator: new_generator(&st.tower, ngens),
            });
            continue;
        }
        let r1k = ring_with(&tower, &[], &["X"], k + 1);
        let phi = st.phi(&r1k);
        let (r2, d) = defect(&tower, source, honda, &phi, k)?;
        if is_p_power(k as u64, p) {
            if !d.is_empty() {
                return Err(Error::UnsupportedExtension(format!(
                    "nonzero homomorphy defect at degree {k} = p-power"
                )));
            }
            let deg = k as u64 * q;
            let bigr = ring_with(&tower, &[], &["X"], deg as u32 + 1);
            let g = series_into_tower(&src1, &pseries, np, &tower, &bigr)?;
            let lhs = r1k.substitute(&phi, &bigr, &[g], |c| c.clone())?;
            let known = bigr.coeff(&lhs, &[deg as i32]);
            let lambda = tower.pow(&st.coeffs[1], k as u64);
            let lq = tower.pow(&lambda, q);
            let lqi = tower.inv(&lq).ok_or_else(|| {
                Error::UnsupportedExtension(format!("cannot invert the scale at degree {k}"))
            })?;
            let c = tower.mul(&known, &lqi);
            let (next, z) = tower.adjoin_additive(q as u32, &c)?;
            let generator = (next.generators().len() > ngens).then_some(ngens);
            st.extend_to(next);
            let lambda = st.tower.embed_from(&tower, &lambda);
            st.coeffs[k as usize] = st.tower.mul(&lambda, &z);
            st.additive.push(AdditiveData { degree: k as usize, lambda, generator });
            steps.push(SolverStep::Additive { degree: k, generator: new_generator(&st.tower, ngens) });
        } else {
            let pivot = (1..k).find(|&j| binom_mod_p(k as u64, j as u64, p) != 0).unwrap();
            let b = binom_mod_p(k as u64, pivot as u64, p);
            let dj = r2.coeff(&d, &[pivot as i32, (k - pivot) as i32]);
            let binv = tower.inv(&tower.from_int(b as i64)).unwrap();
            let ck = tower.neg(&tower.mul(&dj, &binv));
            // The whole defect must be a multiple of (X + Y)^k - X^k - Y^k.
            let x = r2.var(0);
            let y = r2.var(1);
            let shape = r2.sub(&r2.sub(&r2.pow(&r2.add(&x, &y), k as u64), &r2.pow(&x, k as u64)), &r2.pow(&y, k as u64));
            let rest = r2.add(&d, &r2.scale(&shape, &ck));
            if !rest.is_empty() {
                return Err(Error::UnsupportedExtension(format!(
                    "defect at degree {k} is not linear in the new coefficient"
                )));
            }
            st.coeffs[k as usize] = ck;
            steps.push(SolverStep::Linear { degree: k, pivot });
        }
    }

    let tower = st.tower.clone();
    let ring1 = ring_with(&tower, &[], &["X"], trunc);
    let phi = st.phi(&ring1);
    let inverse = ring1.reverse(&phi)?;
    Ok(FglIso {
        source: law_into_tower(&source.truncated(trunc), &tower, trunc)?,
        target: law_into_tower(&honda.truncated(trunc), &tower, trunc)?,
        tower,
        height: n,
        trunc,
        ring1,
        phi,
        inverse,
        steps,
        leading_relation: gamma,
        additive: st.additive,
    })
}

fn new_generator(tower: &Tower, before: usize) -> Option<String> {
    tower.generators().get(before).map(|g| g.name.clone())
}

/// Homomorphy and two-sided inverse, each mod truncation.
pub fn verify_iso(iso: &FglIso) -> Result<Vec<Check>> {
    let r1 = &iso.ring1;
    let x = r1.var(0);
    Ok(vec![
        check_homomorphism("homomorphy", &iso.source, &iso.target, &iso.phi)?,
        first_diff("left inverse", r1, &r1.compose(&iso.inverse, &iso.phi)?, &x),
        first_diff("right inverse", r1, &r1.compose(&iso.phi, &iso.inverse)?, &x),
    ])
}
