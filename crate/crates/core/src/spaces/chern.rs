use super::models::{Flavor, LensModel};
use crate::check::Check;
use crate::coeffring::{Fq, Ring, Tower, TowerElem};
use crate::error::{Error, Result};
use crate::fgl::{first_diff, Fgl};
use crate::gseries::{Series, SeriesRing, VarTable};
use crate::hopfalg::CompositeHopf;
use crate::isofind::{endo_into_tower, validate_witness, verify_iso, ActionWitness, FglIso};

/// Comparison of lens-space Chern classes along an isomorphism from the
/// deformation law to the Honda law.
#[derive(Clone, Debug)]
pub struct ChernData {
    iso: FglIso,
    p: u64,
    n: u32,
    e_lens: LensModel<Fq>,
    l_lens: LensModel<Tower>,
}

impl ChernData {
    /// `law` is the source of `iso` before it was moved into the tower; its
    /// parameters become those of the source-side lens model.
    pub fn new(iso: FglIso, law: &Fgl<Fq>) -> Result<Self> {
        if law.nparams() > 1 {
            return Err(Error::Config("at most one deformation parameter is supported".into()));
        }
        let p = iso.tower.p();
        let n = iso.height;
        if (iso.trunc as u64) < p.pow(n) {
            return Err(Error::PrecisionExhausted(format!(
                "the isomorphism is known mod X^{} but the lens relation is x^{}",
                iso.trunc,
                p.pow(n)
            )));
        }
        let e_lens = LensModel::new(law.base().clone(), p, n, Flavor::E, law.params().to_vec());
        let l_lens = LensModel::new(iso.tower.clone(), p, n, Flavor::L, vec![]);
        Ok(ChernData { iso, p, n, e_lens, l_lens })
    }

    pub fn iso(&self) -> &FglIso {
        &self.iso
    }
    pub fn e_lens(&self) -> &LensModel<Fq> {
        &self.e_lens
    }
    pub fn l_lens(&self) -> &LensModel<Tower> {
        &self.l_lens
    }
    fn tower(&self) -> &Tower {
        &self.iso.tower
    }

    /// Linear coefficient of the isomorphism.
    pub fn phi0(&self) -> TowerElem {
        self.iso.leading()
    }

    /// Linear coefficient of the inverse, the unit with `Θ(x_E) = w x_K + ...`.
    pub fn w(&self) -> TowerElem {
        self.iso.ring1.coeff(&self.iso.inverse, &[1])
    }

    /// `c_k`, the coefficient of `X^(p^k)` in the inverse, for `k < n`.
    pub fn inverse_coefficients(&self) -> Result<Vec<TowerElem>> {
        if (self.iso.trunc as u64) <= self.p.pow(self.n - 1) {
            return Err(Error::PrecisionExhausted(format!(
                "X^{} is needed but the isomorphism is known mod X^{}",
                self.p.pow(self.n - 1),
                self.iso.trunc
            )));
        }
        Ok((0..self.n).map(|k| self.iso.ring1.coeff(&self.iso.inverse, &[self.p.pow(k) as i32])).collect())
    }

    /// `B[i][j] = c_(i-j)^(p^j)` for `j <= i`, zero above the diagonal, with
    /// `b̂_(i) = Σ_j B[i][j] b_(j)`.
    pub fn bhat_matrix(&self) -> Result<Vec<Vec<TowerElem>>> {
        let c = self.inverse_coefficients()?;
        let t = self.tower();
        let n = self.n as usize;
        Ok((0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if j <= i { t.pow(&c[i - j], self.p.pow(j as u32)) } else { t.zero() })
                    .collect()
            })
            .collect())
    }

    /// Inverse of a lower triangular matrix with unit diagonal entries.
    fn lower_inverse(&self, b: &[Vec<TowerElem>]) -> Result<Vec<Vec<TowerElem>>> {
        let t = self.tower();
        let n = b.len();
        let mut inv = vec![vec![t.zero(); n]; n];
        for i in 0..n {
            let d = t.inv(&b[i][i]).ok_or(Error::DivisionByZero)?;
            inv[i][i] = d.clone();
            for j in (0..i).rev() {
                let mut acc = t.zero();
                for k in j..i {
                    acc = t.add(&acc, &t.mul(&b[i][k], &inv[k][j]));
                }
                inv[i][j] = t.neg(&t.mul(&d, &acc));
            }
        }
        Ok(inv)
    }

    /// `Θ(x_E) = Φ^-1(x_K)` in the target lens ring.
    pub fn theta_x(&self) -> Series<TowerElem> {
        self.iso.ring1.embed(&self.iso.inverse, self.l_lens.ring(), &[1])
    }

    /// Images of the source lens variables under `Θ`, in `left ++ target lens`.
    fn theta_images(&self, target: &SeriesRing<Tower>, left: usize) -> Vec<Series<TowerElem>> {
        let mut images: Vec<Series<TowerElem>> =
            (0..self.e_lens.nparams()).map(|_| target.constant(self.tower().u_pow(1))).collect();
        images.push(target.var(left));
        images.push(self.iso.ring1.embed(&self.iso.inverse, target, &[left + 1]));
        images
    }

    /// `Θ` on the source lens ring.
    pub fn theta(&self, f: &Series<u32>) -> Result<Series<TowerElem>> {
        let tower = self.tower().clone();
        self.e_lens.ring().substitute(f, self.l_lens.ring(), &self.theta_images(self.l_lens.ring(), 0), |c| {
            tower.from_fq(*c)
        })
    }

    /// `[p]_E(Θ(x_E)) = Θ([p]_H(x_K))` in the untruncated target, and both
    /// lie in `(x^(p^n))`, so `Θ` respects the lens relations.
    pub fn relation_check(&self) -> Result<Check> {
        let r1 = &self.iso.ring1;
        let lhs = r1.compose(&self.iso.source.p_series()?, &self.iso.inverse)?;
        let rhs = r1.compose(&self.iso.inverse, &self.iso.target.p_series()?)?;
        let c = first_diff("theta_relation", r1, &lhs, &rhs);
        if !c.ok {
            return Err(Error::RelationNotPreserved(format!("[p](Θ(x)) vs Θ([p](x)): {}", c.witness.unwrap_or_default())));
        }
        let q = self.p.pow(self.n) as i32;
        match lhs.terms.keys().find(|e| e[0] < q) {
            None => Ok(c),
            Some(e) => Err(Error::RelationNotPreserved(format!(
                "[p](Θ(x)) has the term {} below x^{q}",
                r1.render_exp(e)
            ))),
        }
    }

    /// Checks `Θ` is a well-defined ring map carrying Chern classes as
    /// expected, and that the `Λ`-coaction on `y` transports through `b̂`.
    pub fn checks(&self) -> Result<Vec<Check>> {
        let t = self.tower();
        let lr = self.l_lens.ring();
        let er = self.e_lens.ring();
        let mut out = verify_iso(&self.iso)?;
        out.push(self.relation_check()?);

        let np = self.e_lens.nparams();
        let basis_e: Vec<Series<u32>> = self
            .e_lens
            .basis_exps()
            .iter()
            .map(|b| {
                let mut e = vec![0; np];
                e.extend(b);
                er.monomial(e, er.base().one())
            })
            .collect();
        let images: Vec<Series<TowerElem>> = basis_e.iter().map(|f| self.theta(f)).collect::<Result<_>>()?;
        let mut mult = Check::pass("theta_multiplicative");
        'outer: for (i, a) in basis_e.iter().enumerate() {
            for (j, b) in basis_e.iter().enumerate() {
                let lhs = self.theta(&er.mul(a, b))?;
                let rhs = lr.mul(&images[i], &images[j]);
                let c = first_diff("theta_multiplicative", lr, &lhs, &rhs);
                if !c.ok {
                    mult = Check::fail(
                        "theta_multiplicative",
                        format!("{} * {}: {}", self.e_lens.basis_names()[i], self.e_lens.basis_names()[j], c.witness.unwrap_or_default()),
                    );
                    break 'outer;
                }
            }
        }
        out.push(mult);
        out.push(first_diff("theta_unit", lr, &self.theta(&er.one())?, &lr.one()));
        out.push(first_diff("theta_y", lr, &self.theta(&self.e_lens.y())?, &self.l_lens.y()));

        // Φ(Θ(x_E)) = x_K
        let tx = self.theta(&self.e_lens.x())?;
        let phi_tx = self.iso.ring1.substitute(&self.iso.phi, lr, std::slice::from_ref(&tx), |c| c.clone())?;
        out.push(first_diff("theta_x", lr, &phi_tx, &self.l_lens.x()));

        let w = lr.coeff(&tx, &[0, 1]);
        out.push(Check::from_bool("theta_unit_triangular", t.inv(&w).is_some() && lr.constant_term(&tx) == t.zero(), || {
            format!("linear coefficient {}", t.render(&w))
        }));

        let q = self.p.pow(self.n) as i32;
        let stray = self.iso.inverse.terms.keys().find(|e| e[0] < q && !is_p_power(self.p, e[0] as u64));
        out.push(match stray {
            None => Check::pass("inverse_additive"),
            Some(e) => Check::fail("inverse_additive", format!("term X^{} below X^{q}", e[0])),
        });

        out.extend(self.transport_checks()?);
        Ok(out)
    }

    /// Pushes `ρ_E(y)` through `Θ`, rewrites in terms of `b̂` and compares
    /// with the target coaction.
    pub fn transport_checks(&self) -> Result<Vec<Check>> {
        let t = self.tower();
        let he = CompositeHopf::with_default_bound(self.e_lens.ring().base().clone(), self.p, self.n)?;
        let hl = CompositeHopf::with_default_bound(t.clone(), self.p, self.n)?;
        let nb = self.n as usize;
        let rho_e = self.e_lens.coaction_y(&he);
        let src = SeriesRing::new(
            self.e_lens.ring().base().clone(),
            he.lambda().gamma().vars().concat(self.e_lens.ring().vars()),
        );
        let target = SeriesRing::new(t.clone(), hl.lambda().gamma().vars().concat(self.l_lens.ring().vars()));
        let mut images: Vec<Series<TowerElem>> = (0..nb).map(|i| target.var(i)).collect();
        images.extend(self.theta_images(&target, nb));
        let pushed = src.substitute(&rho_e, &target, &images, |c| t.from_fq(*c))?;

        let bmat = self.bhat_matrix()?;
        let x = target.var(nb + 1);
        let expected_hat = target.sum_all(std::iter::once(target.var(nb)).chain((0..nb).map(|k| {
            let bhat = target.sum_all((0..nb).map(|i| target.scale(&target.var(i), &bmat[k][i])));
            target.mul(&bhat, &target.pow(&x, self.p.pow(k as u32)))
        })));
        let mut out = vec![first_diff("bhat_expansion", &target, &pushed, &expected_hat)];

        let binv = self.lower_inverse(&bmat)?;
        let mut sub: Vec<Series<TowerElem>> = (0..nb)
            .map(|i| target.sum_all((0..nb).map(|j| target.scale(&target.var(j), &binv[i][j]))))
            .collect();
        sub.extend((nb..target.nvars()).map(|k| target.var(k)));
        let transported = target.substitute(&pushed, &target, &sub, |c| c.clone())?;
        out.push(first_diff("coaction_transport", &target, &transported, &self.l_lens.coaction_y(&hl)));

        // (y)Q̂_i is the b̂_i coefficient, with sign +1 on the odd class y.
        let mut q = Check::pass("bhat_milnor_on_y");
        for i in 0..nb {
            let coef = target.coeff_of_var(&transported, i, 1);
            let mut e = vec![0; target.nvars()];
            e[nb + 1] = self.p.pow(i as u32) as i32;
            let want = target.monomial(e, t.one());
            let c = first_diff("bhat_milnor_on_y", &target, &coef, &want);
            if !c.ok {
                q = Check::fail("bhat_milnor_on_y", format!("i = {i}: {}", c.witness.unwrap_or_default()));
                break;
            }
        }
        out.push(q);
        Ok(out)
    }
}

fn is_p_power(p: u64, mut k: u64) -> bool {
    if k == 0 {
        return false;
    }
    while k.is_multiple_of(p) {
        k /= p;
    }
    k == 1
}

/// For each witness, checks that its group element fixes `b̂`: the twisted
/// inverse, corrected by `t`, agrees with the inverse on `p^j`-th powers mod
/// `X^(p^n)`.
pub fn bhat_invariance_check(data: &ChernData, witnesses: &[ActionWitness]) -> Result<Vec<Check>> {
    let iso = &data.iso;
    let r1 = &iso.ring1;
    let tower = &iso.tower;
    let q = data.p.pow(data.n) as i32;
    let vars = VarTable::new(r1.vars().vars.clone()).with_cap(q as u32);
    let low = r1.with_vars(vars);
    let mut out = Vec::new();
    for (k, w) in witnesses.iter().enumerate() {
        validate_witness(iso, w)?;
        let (lhs, rhs) = match w {
            ActionWitness::Deformation { iso: tg, sigma } => {
                let tinv = r1.reverse(tg)?;
                let twisted = r1.map_coeffs(&iso.inverse, |c| sigma.apply(tower, c));
                (r1.compose(&tinv, &twisted)?, iso.inverse.clone())
            }
            ActionWitness::Stabilizer { endo, sigma } => {
                let th = endo_into_tower(iso, endo)?;
                let twisted = r1.map_coeffs(&iso.inverse, |c| sigma.apply(tower, c));
                (twisted, r1.compose(&iso.inverse, &r1.reverse(&th)?)?)
            }
        };
        let name = format!("bhat_invariance[{k}]");
        let mut check = Check::pass(&name);
        for j in 0..data.n {
            let a = low.pow(&r1.embed(&lhs, &low, &[0]), data.p.pow(j));
            let b = low.pow(&r1.embed(&rhs, &low, &[0]), data.p.pow(j));
            let c = first_diff(&name, &low, &a, &b);
            if !c.ok {
                check = Check::fail(&name, format!("p^{j}-th power: {}", c.witness.unwrap_or_default()));
                break;
            }
        }
        out.push(check);
    }
    Ok(out)
}
