use super::solve::{series_into_tower, FglIso};
use crate::check::Check;
use crate::coeffring::{Fq, Ring, Tower, TowerAutomorphism, TowerElem, ZERO};
use crate::error::{Error, Result};
use crate::fgl::{check_homomorphism, first_diff, ring_with, Fgl, HondaEndo, Provenance};
use crate::gseries::{Series, SeriesRing, VarSpec};

/// Data describing a group element acting on the isomorphism.
#[derive(Clone, Debug)]
pub enum ActionWitness {
    /// An automorphism `t(h)` of the Honda law with its action `sigma` on the tower.
    Stabilizer { endo: HondaEndo, sigma: TowerAutomorphism },
    /// An isomorphism `t(g)` from the source law to its `sigma`-twist.
    Deformation { iso: Series<TowerElem>, sigma: TowerAutomorphism },
}

fn twist(law: &Fgl<Tower>, sigma: &TowerAutomorphism) -> Fgl<Tower> {
    let tower = law.base().clone();
    law.map_base(tower.clone(), |c| sigma.apply(&tower, c))
}

fn twist_series(iso: &FglIso, sigma: &TowerAutomorphism, f: &Series<TowerElem>) -> Series<TowerElem> {
    iso.ring1.map_coeffs(f, |c| sigma.apply(&iso.tower, c))
}

pub(crate) fn endo_into_tower(iso: &FglIso, endo: &HondaEndo) -> Result<Series<TowerElem>> {
    let src = ring_with(iso.tower.fq(), &[], &["X"], iso.trunc);
    series_into_tower(&src, &endo.series, 0, &iso.tower, &iso.ring1)
}

/// Checks that the witness satisfies its own homomorphy conditions.
pub fn validate_witness(iso: &FglIso, w: &ActionWitness) -> Result<()> {
    let bad = |c: Check| Error::InvalidWitness(format!("{}: {}", c.name, c.witness.unwrap_or_default()));
    match w {
        ActionWitness::Stabilizer { endo, sigma } => {
            sigma.validate(&iso.tower)?;
            if !endo.is_automorphism() {
                return Err(Error::InvalidWitness("t(h) is not invertible".into()));
            }
            let t = endo_into_tower(iso, endo)?;
            let c = check_homomorphism("t(h) is an endomorphism", &iso.target, &iso.target, &t)?;
            if !c.ok {
                return Err(bad(c));
            }
            for (name, law) in [("source", &iso.source), ("target", &iso.target)] {
                let tw = twist(law, sigma);
                let c = first_diff(&format!("sigma fixes the {name} law"), law.ring2(), tw.law(), law.law());
                if !c.ok {
                    return Err(bad(c));
                }
            }
        }
        ActionWitness::Deformation { iso: t, sigma } => {
            sigma.validate(&iso.tower)?;
            let lin = iso.ring1.coeff(t, &[1]);
            if iso.tower.inv(&lin).is_none() || !iso.tower.is_zero(&iso.ring1.constant_term(t)) {
                return Err(Error::InvalidWitness("t(g) is not invertible".into()));
            }
            let twisted = twist(&iso.source, sigma);
            let c = check_homomorphism("t(g) is a homomorphism to the twisted law", &iso.source, &twisted, t)?;
            if !c.ok {
                return Err(bad(c));
            }
        }
    }
    Ok(())
}

/// For a stabilizer witness, `t(h) o phi = phi^h`; for a deformation
/// witness, `phi^g o t(g) = phi`. Both mod truncation.
pub fn check_equivariance(iso: &FglIso, w: &ActionWitness) -> Result<Check> {
    validate_witness(iso, w)?;
    let r1 = &iso.ring1;
    match w {
        ActionWitness::Stabilizer { endo, sigma } => {
            let t = endo_into_tower(iso, endo)?;
            let lhs = r1.compose(&t, &iso.phi)?;
            let rhs = twist_series(iso, sigma, &iso.phi);
            Ok(first_diff("t(h) o phi = phi^h", r1, &lhs, &rhs))
        }
        ActionWitness::Deformation { iso: t, sigma } => {
            let phig = twist_series(iso, sigma, &iso.phi);
            let lhs = r1.compose(&phig, t)?;
            Ok(first_diff("phi^g o t(g) = phi", r1, &lhs, &iso.phi))
        }
    }
}

/// Builds the tower automorphism fixing `F_q`, sending `t` to `zeta t` and
/// taking `phi_k` to `targets[k]` at the additive steps. The scalar `zeta`
/// is read off the leading coefficient, which must be a monomial in `t`.
fn derive_sigma(iso: &FglIso, targets: &Series<TowerElem>) -> Result<TowerAutomorphism> {
    let tower = &iso.tower;
    let fq = tower.fq();
    let c1 = iso.leading();
    let want = iso.ring1.coeff(targets, &[1]);
    let (lc, wc) = match (c1.as_base(), want.as_base()) {
        (Some(a), Some(b)) if a.is_monomial() && b.is_monomial() => (a.clone(), b.clone()),
        _ => {
            return Err(Error::UnsupportedExtension(
                "leading coefficient is not a monomial in t".into(),
            ))
        }
    };
    let m = lc.valuation().unwrap();
    if wc.valuation() != Some(m) {
        return Err(Error::InvalidWitness("leading coefficients have different valuations".into()));
    }
    // zeta^m = wc / lc
    let ratio = fq.mul(&wc.coeff(m), &fq.inv(&lc.coeff(m)).unwrap());
    let zeta = if m == 0 {
        if !fq.is_one(&ratio) {
            return Err(Error::InvalidWitness("leading coefficient is F_q-rational but moved".into()));
        }
        0
    } else {
        let rs = fq.roots(&ratio, m.unsigned_abs());
        *rs.first().ok_or_else(|| Error::InvalidWitness("no scalar on t matches".into()))?
    };
    let zeta = if m < 0 { fq.inv(&zeta).unwrap() } else { zeta };
    let mut sigma = TowerAutomorphism { t_scale: zeta, ..TowerAutomorphism::identity(tower) };
    for a in &iso.additive {
        if let Some(j) = a.generator {
            let sl = sigma.apply(tower, &a.lambda);
            let inv = tower.inv(&sl).ok_or_else(|| Error::UnsupportedExtension("scale not invertible".into()))?;
            sigma.images[j] = tower.mul(&iso.ring1.coeff(targets, &[a.degree as i32]), &inv);
        }
    }
    Ok(sigma)
}

/// The Galois action matching a Honda automorphism, read off from `t(h) o phi`.
pub fn stabilizer_witness(iso: &FglIso, endo: &HondaEndo) -> Result<ActionWitness> {
    let t = endo_into_tower(iso, endo)?;
    let targets = iso.ring1.compose(&t, &iso.phi)?;
    let sigma = derive_sigma(iso, &targets)?;
    Ok(ActionWitness::Stabilizer { endo: endo.clone(), sigma })
}

/// The deformation witness of a scalar `c` in `F_(p^(n+1))^x`: `t(g)(X) = c^-1 X`
/// with `sigma` determined by `phi^g = phi o t(g)^-1`.
pub fn scalar_deformation_witness(iso: &FglIso, c: u32) -> Result<ActionWitness> {
    let fq = iso.tower.fq();
    if c == ZERO {
        return Err(Error::InvalidWitness("scalar must be nonzero".into()));
    }
    let r1 = &iso.ring1;
    let cinv = fq.inv(&c).unwrap();
    let t = r1.scale(&r1.var(0), &iso.tower.from_fq(cinv));
    let back = r1.scale(&r1.var(0), &iso.tower.from_fq(c));
    let targets = r1.compose(&iso.phi, &back)?;
    let sigma = derive_sigma(iso, &targets)?;
    Ok(ActionWitness::Deformation { iso: t, sigma })
}

/// `F(X, Y) = c(H(c^-1 X, c^-1 Y))` for `c` in `fq[params][[X]]` with unit
/// constant linear coefficient.
pub fn conjugate_law(honda: &Fgl<Fq>, params: Vec<VarSpec>, c: &Series<u32>) -> Result<Fgl<Fq>> {
    let np = params.len();
    let r1 = ring_with(honda.base(), &params, &["X"], honda.trunc());
    let r2 = ring_with(honda.base(), &params, &["X", "Y"], honda.trunc());
    let cinv = r1.reverse_var(c, np)?;
    let keep: Vec<Series<u32>> = (0..np).map(|i| r2.var(i)).collect();
    let at = |f: &Series<u32>, arg: Series<u32>| {
        let mut images = keep.clone();
        images.push(arg);
        r1.substitute(f, &r2, &images, |x| *x)
    };
    let a = at(&cinv, r2.var(np))?;
    let b = at(&cinv, r2.var(np + 1))?;
    let hab = honda.ring2().substitute(honda.law(), &r2, &[a, b], |x| *x)?;
    let law = at(c, hab)?;
    Ok(Fgl::from_series(honda.base().clone(), honda.p(), params, honda.trunc(), law, Provenance::User))
}

/// `phi o c` moved back to `F_q` coefficients, when all of them are constants.
pub fn compose_to_fq(iso: &FglIso, params: usize, c: &Series<u32>, src: &SeriesRing<Fq>) -> Result<Option<Series<u32>>> {
    let cc = series_into_tower(src, c, params, &iso.tower, &iso.ring1)?;
    let s = iso.ring1.compose(&iso.phi, &cc)?;
    let mut res = Series::default();
    for (e, v) in &s.terms {
        match v.as_base().and_then(|l| l.as_constant()) {
            Some(k) => {
                res.terms.insert(e.clone(), k);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(res))
}
