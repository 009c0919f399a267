use crate::comod::matrix::Mat;
use crate::comod::{CLambdaComodule, Comodule};
use crate::coeffring::Ring;
use crate::error::{Error, Result};
use crate::fgl::Fgl;
use crate::gseries::{Series, SeriesRing, VarSpec, VarTable};
use crate::hopfalg::CompositeHopf;

/// Which theory a model computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// The height-`n + 1` deformation theory reduced mod `I_n`.
    E,
    /// The height-`n` Honda theory.
    K,
    /// `K` with coefficients extended to the tower field.
    L,
}

impl Flavor {
    pub fn label(&self) -> &'static str {
        match self {
            Flavor::E => "E",
            Flavor::K => "K",
            Flavor::L => "L",
        }
    }
}

/// Splits a series over `[left vars, model vars]` along the model basis.
fn split_model<B: Ring>(
    left: &SeriesRing<B>,
    f: &Series<B::Elem>,
    basis: &[Vec<i32>],
    skip: usize,
) -> Result<Vec<Series<B::Elem>>> {
    let nl = left.nvars();
    let mut out = vec![Series::default(); basis.len()];
    for (e, c) in &f.terms {
        let (l, r) = e.split_at(nl);
        if r[..skip].iter().any(|&k| k != 0) {
            return Err(Error::GradingMismatch("coefficient parameters appear in a coaction".into()));
        }
        let k = basis
            .iter()
            .position(|b| b[..] == r[skip..])
            .ok_or_else(|| Error::GradingMismatch(format!("monomial {:?} is outside the model basis", &r[skip..])))?;
        out[k] = left.add(&out[k], &left.monomial(l.to_vec(), c.clone()));
    }
    Ok(out)
}

/// `[params..., y, x]` with `y` odd of degree 1, `x` of degree 2 and `x^(p^n) = 0`.
#[derive(Clone, Debug)]
pub struct LensModel<B: Ring> {
    p: u64,
    n: u32,
    flavor: Flavor,
    params: Vec<VarSpec>,
    ring: SeriesRing<B>,
}

impl<B: Ring> LensModel<B> {
    pub fn new(base: B, p: u64, n: u32, flavor: Flavor, params: Vec<VarSpec>) -> Self {
        let mut vars = params.clone();
        vars.push(VarSpec::odd("y", 1));
        vars.push(VarSpec::even("x", 2, Some(p.pow(n) as u32)));
        LensModel { p, n, flavor, params, ring: SeriesRing::new(base, VarTable::new(vars)) }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn flavor(&self) -> Flavor {
        self.flavor
    }
    pub fn ring(&self) -> &SeriesRing<B> {
        &self.ring
    }
    pub fn nparams(&self) -> usize {
        self.params.len()
    }
    fn q(&self) -> i32 {
        self.p.pow(self.n) as i32
    }
    pub fn y(&self) -> Series<B::Elem> {
        self.ring.var(self.nparams())
    }
    pub fn x(&self) -> Series<B::Elem> {
        self.ring.var(self.nparams() + 1)
    }

    /// Exponents `(e, a)` of `y^e x^a`, index `e * p^n + a`.
    pub fn basis_exps(&self) -> Vec<Vec<i32>> {
        (0..2).flat_map(|e| (0..self.q()).map(move |a| vec![e, a])).collect()
    }

    pub fn basis_names(&self) -> Vec<String> {
        self.basis_exps()
            .iter()
            .map(|b| match (b[0], b[1]) {
                (0, 0) => "1".to_string(),
                (0, 1) => "x".to_string(),
                (0, a) => format!("x^{a}"),
                (_, 0) => "y".to_string(),
                (_, 1) => "y*x".to_string(),
                (_, a) => format!("y*x^{a}"),
            })
            .collect()
    }

    pub fn basis_parity(&self) -> Vec<bool> {
        self.basis_exps().iter().map(|b| b[0] == 1).collect()
    }

    /// Index of `y^e x^a`.
    pub fn index(&self, e: i32, a: i32) -> usize {
        (e * self.q() + a) as usize
    }

    /// A basis element as a series (parameters at exponent zero).
    pub fn basis_elem(&self, k: usize) -> Series<B::Elem> {
        let b = &self.basis_exps()[k];
        let mut e = vec![0; self.nparams()];
        e.extend(b);
        self.ring.monomial(e, self.ring.base().one())
    }

    /// `left ⊗ model` ring.
    fn coaction_ring(&self, left: &SeriesRing<B>) -> SeriesRing<B> {
        SeriesRing::new(self.ring.base().clone(), left.vars().concat(self.ring.vars()))
    }

    fn require_param_free(&self) -> Result<()> {
        if self.nparams() > 0 {
            return Err(Error::Config("comodule structures are built over the parameter-free model".into()));
        }
        Ok(())
    }

    /// `ρ(x) = Σ^F_i t_i x^(p^i)` with `t_0 = 1`, over `params ++ C ++ [y, x]`.
    /// The model's parameters must be the law's.
    pub fn coaction_x(&self, h: &CompositeHopf<B>, law: &Fgl<B>) -> Result<Series<B::Elem>> {
        coaction_x_in(h, law, &self.params, self.ring.vars(), self.q() as u32, self.nparams() + 1, self.p, self.n)
    }

    /// `ρ(y) = 1 ⊗ y + Σ_i b_(i) ⊗ x^(p^i)` over `Λ ⊗ model`.
    pub fn coaction_y(&self, h: &CompositeHopf<B>) -> Series<B::Elem> {
        let ring = self.coaction_ring(h.lambda().gamma());
        let nb = h.n() as usize;
        let np = self.nparams();
        let xi = nb + np + 1;
        ring.sum_all(
            std::iter::once(ring.var(nb + np))
                .chain((0..nb).map(|i| ring.mul(&ring.var(i), &ring.var_pow(xi, self.p.pow(i as u32) as i32)))),
        )
    }

    fn matrix_from_images(
        &self,
        left: &SeriesRing<B>,
        img_y: &Series<B::Elem>,
        img_x: &Series<B::Elem>,
    ) -> Result<Mat<Series<B::Elem>>> {
        let ring = self.coaction_ring(left);
        let nl = left.nvars();
        let mut images: Vec<Series<B::Elem>> = (0..self.nparams()).map(|i| ring.var(nl + i)).collect();
        images.push(img_y.clone());
        images.push(img_x.clone());
        self.basis_exps()
            .iter()
            .enumerate()
            .map(|(k, _)| {
                let v = self.ring.substitute(&self.basis_elem(k), &ring, &images, |c| c.clone())?;
                split_model(left, &v, &self.basis_exps(), self.nparams())
            })
            .collect()
    }

    /// The model as a comodule over `C`: `ρ(x) = Σ_i t_i x^(p^i)`, `ρ(y) = 1 ⊗ y`.
    pub fn c_comodule(&self, h: &CompositeHopf<B>) -> Result<Comodule<Series<B::Elem>>> {
        self.require_param_free()?;
        let left = h.c_part().gamma();
        let ring = self.coaction_ring(left);
        let nt = left.nvars();
        let x = ring.var(nt + 1);
        let img_x = ring.sum_all((0..self.n).map(|i| {
            let t = if i == 0 { ring.one() } else { ring.var(i as usize - 1) };
            ring.mul(&t, &ring.pow(&x, self.p.pow(i)))
        }));
        let coaction = self.matrix_from_images(left, &ring.var(nt), &img_x)?;
        Comodule::new(self.basis_names(), self.basis_parity(), coaction)
    }

    /// The model as a comodule over `Λ`: `ρ(x) = 1 ⊗ x`, `ρ(y)` as in `coaction_y`.
    pub fn lambda_comodule(&self, h: &CompositeHopf<B>) -> Result<Comodule<Series<B::Elem>>> {
        self.require_param_free()?;
        let left = h.lambda().gamma();
        let ring = self.coaction_ring(left);
        let nb = left.nvars();
        let coaction = self.matrix_from_images(left, &self.coaction_y(h), &ring.var(nb + 1))?;
        Comodule::new(self.basis_names(), self.basis_parity(), coaction)
    }

    pub fn clambda(&self, h: &CompositeHopf<B>) -> Result<CLambdaComodule<Series<B::Elem>>> {
        CLambdaComodule::new(self.c_comodule(h)?, self.lambda_comodule(h)?)
    }

    /// The model as a comodule over the composite directly:
    /// `ρ(x) = Σ_i t_i x^(p^i)` and `ρ(y) = 1 ⊗ y + Σ_i b_(i) ⊗ x^(p^i)`.
    pub fn composite_comodule(&self, h: &CompositeHopf<B>) -> Result<Comodule<Series<B::Elem>>> {
        self.require_param_free()?;
        let left = h.gamma();
        let ring = self.coaction_ring(left);
        let g = left.nvars();
        let x = ring.var(g + 1);
        let img_x = ring.sum_all((0..self.n).map(|i| {
            let t = if i == 0 { ring.one() } else { ring.var(i as usize - 1) };
            ring.mul(&t, &ring.pow(&x, self.p.pow(i)))
        }));
        let img_y = ring.sum_all(
            std::iter::once(ring.var(g))
                .chain((0..self.n).map(|i| ring.mul(&ring.var(h.b_index(i)), &ring.pow(&x, self.p.pow(i))))),
        );
        let coaction = self.matrix_from_images(left, &img_y, &img_x)?;
        Comodule::new(self.basis_names(), self.basis_parity(), coaction)
    }

    /// The matrix of `g` with `(x)g = Σ_k a_k x^(p^k)` and `(y)g = y`.
    pub fn group_action(&self, a: &[B::Elem]) -> Result<Mat<B::Elem>> {
        self.require_param_free()?;
        let base = self.ring.base();
        if a.is_empty() || base.inv(&a[0]).is_none() {
            return Err(Error::InvalidWitness("t(g) must have a unit leading coefficient".into()));
        }
        let empty = SeriesRing::new(base.clone(), VarTable::new(vec![]));
        let x = self.x();
        let img_x = self.ring.sum_all(a.iter().enumerate().map(|(k, c)| self.ring.scale(&self.ring.pow(&x, self.p.pow(k as u32)), c)));
        let m = self.matrix_from_images(&empty, &self.y(), &img_x)?;
        Ok(m.iter().map(|row| row.iter().map(|s| empty.constant_term(s)).collect()).collect())
    }
}

/// `Σ^F_i t_i x^(p^i)` for `p^i < cap` in `params ++ C ++ model vars`, where
/// `x` is model variable `xi`.
#[allow(clippy::too_many_arguments)]
fn coaction_x_in<B: Ring>(
    h: &CompositeHopf<B>,
    law: &Fgl<B>,
    params: &[VarSpec],
    model: &VarTable,
    cap: u32,
    xi: usize,
    p: u64,
    n: u32,
) -> Result<Series<B::Elem>> {
    if law.params() != params {
        return Err(Error::VarMismatch);
    }
    if law.p() != p || h.p() != p || h.n() != n {
        return Err(Error::Config("prime and height of the law, the model and the Hopf algebra must agree".into()));
    }
    if law.trunc() < cap {
        return Err(Error::PrecisionExhausted(format!("law truncation {} is below the model truncation {cap}", law.trunc())));
    }
    let np = params.len();
    let ct = h.c_part().gamma().vars().clone();
    let tail = VarTable::new(model.vars[np..].to_vec());
    let vars = VarTable::new(params.to_vec()).concat(&ct).concat(&tail);
    let ring = SeriesRing::new(h.gamma().base().clone(), vars);
    let nt = ct.len();
    let x = np + nt + xi - np;
    let mut summands = Vec::new();
    let mut i = 0u32;
    while p.pow(i) < cap as u64 {
        let t = if i == 0 {
            ring.one()
        } else if (i as usize) <= nt {
            ring.var(np + i as usize - 1)
        } else {
            return Err(Error::PrecisionExhausted(format!("t_{i} is needed below x^{cap} but the bound is t_{nt}")));
        };
        summands.push(ring.mul(&t, &ring.var_pow(x, p.pow(i) as i32)));
        i += 1;
    }
    law.formal_sum(&ring, &summands)
}

/// `[params..., x]` with `x^N = 0`.
#[derive(Clone, Debug)]
pub struct ProjModel<B: Ring> {
    p: u64,
    n: u32,
    flavor: Flavor,
    params: Vec<VarSpec>,
    ring: SeriesRing<B>,
}

impl<B: Ring> ProjModel<B> {
    pub fn new(base: B, p: u64, n: u32, flavor: Flavor, params: Vec<VarSpec>, trunc: u32) -> Self {
        let mut vars = params.clone();
        vars.push(VarSpec::even("x", 2, Some(trunc)));
        ProjModel { p, n, flavor, params, ring: SeriesRing::new(base, VarTable::new(vars)) }
    }

    /// Default truncation `x^(p^(n+1))`.
    pub fn with_default_trunc(base: B, p: u64, n: u32, flavor: Flavor, params: Vec<VarSpec>) -> Self {
        Self::new(base, p, n, flavor, params, p.pow(n + 1) as u32)
    }

    pub fn ring(&self) -> &SeriesRing<B> {
        &self.ring
    }
    pub fn flavor(&self) -> Flavor {
        self.flavor
    }
    pub fn trunc(&self) -> u32 {
        self.ring.vars().vars.last().and_then(|v| v.trunc).expect("x is truncated")
    }

    /// `ρ(x) = Σ^F_i t_i x^(p^i)` over `params ++ C ++ [x]`.
    pub fn coaction_x(&self, h: &CompositeHopf<B>, law: &Fgl<B>) -> Result<Series<B::Elem>> {
        coaction_x_in(h, law, &self.params, self.ring.vars(), self.trunc(), self.params.len(), self.p, self.n)
    }

    /// The `C`-comodule on `1, x, .., x^(N-1)` with `ρ(x^a) = ρ(x)^a`, for a
    /// parameter-free law.
    pub fn c_comodule(&self, h: &CompositeHopf<B>, law: &Fgl<B>) -> Result<Comodule<Series<B::Elem>>> {
        if !self.params.is_empty() {
            return Err(Error::Config("comodule structures are built over the parameter-free model".into()));
        }
        let rx = self.coaction_x(h, law)?;
        let left = h.c_part().gamma();
        let ring = SeriesRing::new(self.ring.base().clone(), left.vars().concat(self.ring.vars()));
        let n = self.trunc() as usize;
        let basis: Vec<Vec<i32>> = (0..n as i32).map(|a| vec![a]).collect();
        let coaction = (0..n)
            .map(|a| split_model(left, &ring.pow(&rx, a as u64), &basis, 0))
            .collect::<Result<Vec<_>>>()?;
        let names = (0..n).map(|a| if a == 0 { "1".into() } else { format!("x^{a}") }).collect();
        Comodule::new(names, vec![false; n], coaction)
    }
}
