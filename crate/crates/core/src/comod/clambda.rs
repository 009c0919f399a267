use super::comodule::{random_invertible, Comodule};
use super::milnor::exterior_regular;
use crate::check::Check;
use crate::coeffring::Ring;
use crate::error::{Error, Result};
use crate::gseries::{Series, SeriesRing, VarTable};
use crate::hopfalg::{CompositeHopf, HopfAlgebroid};

type S<B> = Series<<B as Ring>::Elem>;

/// A tensor factor: the formal part `C` or the exterior part `Λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    C,
    L,
}

use Factor::{C, L};

/// Tensor words such as `C ⊗ Λ ⊗ C ⊗ Λ` over a composite algebra, realized as
/// series rings whose variables are the factors' generators in order.
///
/// `[C, L]` has the variable layout of the composite total ring and
/// `[C, L, C, L]` that of its pair ring.
pub struct Words<'a, B: Ring> {
    h: &'a CompositeHopf<B>,
}

impl<'a, B: Ring> Words<'a, B> {
    pub fn new(h: &'a CompositeHopf<B>) -> Self {
        Words { h }
    }

    fn factor(&self, f: Factor) -> &SeriesRing<B> {
        match f {
            C => self.h.c_part().gamma(),
            L => self.h.lambda().gamma(),
        }
    }

    pub fn ring(&self, w: &[Factor]) -> SeriesRing<B> {
        let mut t = VarTable::new(Vec::new());
        for (k, f) in w.iter().enumerate() {
            t = t.concat(&self.factor(*f).vars().renamed(&format!("_{k}")));
        }
        SeriesRing::new(self.h.gamma().base().clone(), t)
    }

    fn offset(&self, w: &[Factor], slot: usize) -> usize {
        w[..slot].iter().map(|f| self.factor(*f).nvars()).sum()
    }

    fn slots(&self, w: &[Factor], slot: usize) -> Vec<usize> {
        let o = self.offset(w, slot);
        (o..o + self.factor(w[slot]).nvars()).collect()
    }

    /// A factor element placed in `slot` of `w`.
    pub fn embed(&self, w: &[Factor], slot: usize, f: &S<B>) -> S<B> {
        self.factor(w[slot]).embed(f, &self.ring(w), &self.slots(w, slot))
    }

    fn var(&self, w: &[Factor], slot: usize, i: usize) -> S<B> {
        self.ring(w).var(self.offset(w, slot) + i)
    }

    /// `t_k` in `slot` with `t_0 = 1`.
    fn t(&self, w: &[Factor], slot: usize, k: u32) -> S<B> {
        if k == 0 {
            self.ring(w).one()
        } else {
            self.var(w, slot, k as usize - 1)
        }
    }

    /// Generators of `slot` mapped to themselves in `dst_slot` of `dst`.
    fn identity(&self, w: &[Factor], slot: usize, dst: &[Factor], dst_slot: usize) -> Vec<S<B>> {
        (0..self.factor(w[slot]).nvars()).map(|i| self.var(dst, dst_slot, i)).collect()
    }

    /// `ρ_{C,Λ}(b_(i)) = Σ_j χ(t_{i-j})^(p^j) ⊗ b_(j)` with `C` in `c` and `Λ` in `l`.
    pub fn rho_c_lambda(&self, dst: &[Factor], c: usize, l: usize) -> Vec<S<B>> {
        let ring = self.ring(dst);
        let cp = self.h.c_part();
        let p = self.h.p();
        (0..self.h.n())
            .map(|i| {
                ring.sum_all((0..=i).map(|j| {
                    let chi = if i == j { ring.one() } else { self.embed(dst, c, &cp.chi_gens()[(i - j) as usize - 1]) };
                    ring.mul(&ring.pow(&chi, p.pow(j)), &self.var(dst, l, j as usize))
                }))
            })
            .collect()
    }

    /// `ψ_Λ(b_(i)) = b_(i) ⊗ 1 + 1 ⊗ b_(i)`.
    pub fn psi_lambda(&self, dst: &[Factor], l1: usize, l2: usize) -> Vec<S<B>> {
        let ring = self.ring(dst);
        (0..self.h.n() as usize).map(|i| ring.add(&self.var(dst, l1, i), &self.var(dst, l2, i))).collect()
    }

    /// `ψ_C(t_m) = Σ_l t_l ⊗ t_{m-l}^(p^l)`.
    pub fn psi_c(&self, dst: &[Factor], c1: usize, c2: usize) -> Vec<S<B>> {
        let ring = self.ring(dst);
        let p = self.h.p();
        (1..=self.h.tbound())
            .map(|m| ring.sum_all((0..=m).map(|l| ring.mul(&self.t(dst, c1, l), &ring.pow(&self.t(dst, c2, m - l), p.pow(l))))))
            .collect()
    }

    /// `ρ_{Λ,C⊗Λ} = (π_Λ ⊗ 1 ⊗ 1) ∘ ψ` on the generators of `C ⊗ Λ`, landing in
    /// `Λ` at `l0`, `C` at `c1`, `Λ` at `l2`.
    pub fn rho_lambda_cl(&self, dst: &[Factor], l0: usize, c1: usize, l2: usize) -> Vec<S<B>> {
        let ring = self.ring(dst);
        let hopf = self.h.hopf();
        let nt = self.h.tbound() as usize;
        let mut images: Vec<S<B>> = vec![ring.zero(); nt];
        images.extend(self.identity(&[L], 0, dst, l0));
        images.extend(self.identity(&[C], 0, dst, c1));
        images.extend(self.identity(&[L], 0, dst, l2));
        hopf.psi_gens()
            .iter()
            .map(|g| hopf.pair().substitute(g, &ring, &images, |c| c.clone()).expect("arity"))
            .collect()
    }

    /// Applies the algebra map `src → dst` given by generator images, factor by factor.
    pub fn map(&self, src: &[Factor], dst: &[Factor], images: &[Vec<S<B>>], f: &S<B>) -> S<B> {
        let all: Vec<S<B>> = images.iter().flatten().cloned().collect();
        self.ring(src).substitute(f, &self.ring(dst), &all, |c| c.clone()).expect("arity")
    }

    /// Images of the tensor `C`-coaction on the factors of `x`, which sit at
    /// `dst` slots `shift..`, with the new `C` at slot `c`.
    fn c_coaction_images(&self, x: &[Factor], dst: &[Factor], c: usize, shift: usize) -> Vec<Vec<S<B>>> {
        x.iter()
            .enumerate()
            .map(|(k, f)| match f {
                L => self.rho_c_lambda(dst, c, shift + k),
                C => self.psi_c(dst, c, shift + k),
            })
            .collect()
    }
}

/// A module with compatible coactions of `C` and of `Λ`, both free on the
/// same basis: the data that assembles into a comodule over the composite.
#[derive(Clone, Debug, PartialEq)]
pub struct CLambdaComodule<E> {
    pub c: Comodule<E>,
    pub lambda: Comodule<E>,
}

impl<E: Clone + PartialEq> CLambdaComodule<E> {
    pub fn new(c: Comodule<E>, lambda: Comodule<E>) -> Result<Self> {
        if c.names.len() != lambda.names.len() || c.parity != lambda.parity {
            return Err(Error::Config("the C and Λ coactions must use the same basis".into()));
        }
        Ok(CLambdaComodule { c, lambda })
    }

    pub fn rank(&self) -> usize {
        self.c.rank()
    }
    pub fn names(&self) -> &[String] {
        &self.c.names
    }
}

impl<X: Clone + PartialEq + std::fmt::Debug> CLambdaComodule<Series<X>> {
    pub fn tensor<B: Ring<Elem = X>>(&self, other: &Self, h: &CompositeHopf<B>) -> Self {
        CLambdaComodule { c: self.c.tensor(&other.c, h.c_part()), lambda: self.lambda.tensor(&other.lambda, h.lambda()) }
    }

    pub fn change_basis<B: Ring<Elem = X>>(&self, h: &CompositeHopf<B>, p: &[Vec<X>], p_inv: &[Vec<X>]) -> Self {
        CLambdaComodule {
            c: self.c.change_basis(h.c_part(), &p.to_vec(), &p_inv.to_vec()),
            lambda: self.lambda.change_basis(h.lambda(), &p.to_vec(), &p_inv.to_vec()),
        }
    }

    /// Rank-one comodule with trivial coactions.
    pub fn trivial<B: Ring<Elem = X>>(h: &CompositeHopf<B>, name: &str, odd: bool) -> Self {
        CLambdaComodule {
            c: Comodule::trivial(h.c_part(), vec![name.into()], vec![odd]),
            lambda: Comodule::trivial(h.lambda(), vec![name.into()], vec![odd]),
        }
    }

    /// `Λ` itself, with `ψ_Λ` and the coaction `ρ_{C,Λ}` extended multiplicatively.
    pub fn exterior<B: Ring<Elem = X>>(h: &CompositeHopf<B>) -> Self {
        let lambda = exterior_regular(h.lambda());
        let words = Words::new(h);
        let lr = h.lambda().gamma();
        let n = h.n() as usize;
        let basis: Vec<Vec<i32>> = (0..1u32 << n).map(|s| (0..n).map(|i| ((s >> i) & 1) as i32).collect()).collect();
        let images = words.rho_c_lambda(&[C, L], 0, 1);
        let cg = h.c_part().gamma();
        let nt = h.tbound() as usize;
        let coaction = basis
            .iter()
            .map(|e| {
                let img = words.map(&[L], &[C, L], std::slice::from_ref(&images), &lr.monomial(e.clone(), lr.base().one()));
                super::milnor::split_pair(cg, nt, &img, &basis)
            })
            .collect();
        let c = Comodule { names: lambda.names.clone(), parity: lambda.parity.clone(), coaction };
        CLambdaComodule { c, lambda }
    }
}

/// Module-level maps of the compatibility diagrams. An element of `W ⊗ M` is
/// its vector of coefficients in the word ring of `W`, one per basis element.
struct ModuleMaps<'a, B: Ring> {
    words: Words<'a, B>,
    m: &'a CLambdaComodule<S<B>>,
}

impl<'a, B: Ring> ModuleMaps<'a, B> {
    /// `1_P ⊗ ρ_{Λ,M} : P ⊗ M → P ⊗ Λ ⊗ M`.
    fn lambda_coact(&self, prefix: &[Factor], e: &[S<B>]) -> Vec<S<B>> {
        let mut dst = prefix.to_vec();
        dst.push(L);
        let ring = self.words.ring(&dst);
        let ps = self.words.ring(prefix);
        let pslots: Vec<usize> = (0..ps.nvars()).collect();
        let n = self.m.rank();
        (0..n)
            .map(|l| {
                ring.sum_all((0..n).filter(|&k| !ps.is_zero(&e[k])).map(|k| {
                    let a = ps.embed(&e[k], &ring, &pslots);
                    ring.mul(&a, &self.words.embed(&dst, prefix.len(), &self.m.lambda.coaction[k][l]))
                }))
            })
            .collect()
    }

    /// `1_P ⊗ ρ_{C,X⊗M} : P ⊗ X ⊗ M → P ⊗ C ⊗ X ⊗ M` with the tensor coaction on `X ⊗ M`.
    fn c_coact(&self, prefix: &[Factor], x: &[Factor], e: &[S<B>]) -> Vec<S<B>> {
        let mut src = prefix.to_vec();
        src.extend_from_slice(x);
        let mut dst = prefix.to_vec();
        dst.push(C);
        dst.extend_from_slice(x);
        let ring = self.words.ring(&dst);
        let c = prefix.len();
        let mut images: Vec<Vec<S<B>>> = (0..prefix.len()).map(|k| self.words.identity(&src, k, &dst, k)).collect();
        images.extend(self.words.c_coaction_images(x, &dst, c, c + 1));
        let mapped: Vec<S<B>> = e.iter().map(|f| self.words.map(&src, &dst, &images, f)).collect();
        let n = self.m.rank();
        (0..n)
            .map(|l| {
                ring.sum_all((0..n).filter(|&k| !ring.is_zero(&mapped[k])).map(|k| {
                    ring.mul(&mapped[k], &self.words.embed(&dst, c, &self.m.c.coaction[k][l]))
                }))
            })
            .collect()
    }

    fn word_map(&self, src: &[Factor], dst: &[Factor], images: &[Vec<S<B>>], e: &[S<B>]) -> Vec<S<B>> {
        e.iter().map(|f| self.words.map(src, dst, images, f)).collect()
    }

    /// Basis element `b_S ⊗ ... ⊗ m_j` of `Λ^{⊗k} ⊗ M`.
    fn basis(&self, k: usize) -> Vec<(String, Vec<S<B>>)> {
        let n = self.words.h.n() as usize;
        let w = vec![L; k];
        let ring = self.words.ring(&w);
        let mut out = Vec::new();
        let mons = 1u32 << (n * k);
        for s in 0..mons {
            let e: Vec<i32> = (0..n * k).map(|i| ((s >> i) & 1) as i32).collect();
            let mono = ring.monomial(e.clone(), ring.base().one());
            let label = ring.render_exp(&e);
            for j in 0..self.m.rank() {
                let mut v = vec![ring.zero(); self.m.rank()];
                v[j] = mono.clone();
                let name = if label.is_empty() { self.m.names()[j].clone() } else { format!("{label}⊗{}", self.m.names()[j]) };
                out.push((name, v));
            }
        }
        out
    }
}

fn unit_vector<B: Ring>(ring: &SeriesRing<B>, n: usize, j: usize) -> Vec<S<B>> {
    let mut v = vec![ring.zero(); n];
    v[j] = ring.one();
    v
}

fn compare_vectors<B: Ring>(ring: &SeriesRing<B>, name: &str, at: &str, a: &[S<B>], b: &[S<B>], names: &[String]) -> Check {
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        if !ring.eq_elem(x, y) {
            return Check::fail(name, format!("at {at}, coefficient of {}: {} vs {}", names[k], ring.render(x), ring.render(y)));
        }
    }
    Check::pass(name)
}

/// `ρ_{C,Λ⊗M} ∘ ρ_{Λ,M} = (1_C ⊗ ρ_{Λ,M}) ∘ ρ_{C,M}` on the basis: `ρ_{Λ,M}`
/// is a map of `C`-comodules.
pub fn compatibility_check<B: Ring>(h: &CompositeHopf<B>, m: &CLambdaComodule<S<B>>) -> Check {
    let mm = ModuleMaps { words: Words::new(h), m };
    let ring = mm.words.ring(&[C, L]);
    let empty = SeriesRing::new(h.gamma().base().clone(), VarTable::new(vec![]));
    let n = m.rank();
    for j in 0..n {
        let lhs = mm.c_coact(&[], &[L], &mm.lambda_coact(&[], &unit_vector(&empty, n, j)));
        let rhs = mm.lambda_coact(&[C], &m.c.coaction[j]);
        let c = compare_vectors(&ring, "c_lambda_compatibility", &m.names()[j], &lhs, &rhs, m.names());
        if !c.ok {
            return c;
        }
    }
    Check::pass("c_lambda_compatibility")
}

/// `ρ_M = ρ_{C,Λ⊗M} ∘ ρ_{Λ,M}`, a comodule over the composite algebra.
/// Fails with `CompatibilityFailure` when the two coactions are not compatible.
pub fn assemble<B: Ring>(h: &CompositeHopf<B>, m: &CLambdaComodule<S<B>>) -> Result<Comodule<S<B>>> {
    let check = compatibility_check(h, m);
    if !check.ok {
        return Err(Error::CompatibilityFailure(check.witness.unwrap_or_default()));
    }
    let mm = ModuleMaps { words: Words::new(h), m };
    let empty = SeriesRing::new(h.gamma().base().clone(), VarTable::new(vec![]));
    let n = m.rank();
    let coaction = (0..n).map(|j| mm.c_coact(&[], &[L], &mm.lambda_coact(&[], &unit_vector(&empty, n, j)))).collect();
    Ok(Comodule { names: m.names().to_vec(), parity: m.c.parity.clone(), coaction })
}

/// `(π_C ⊗ 1) ∘ ρ` and `(π_Λ ⊗ 1) ∘ ρ`.
pub fn split<B: Ring>(h: &CompositeHopf<B>, m: &Comodule<S<B>>) -> CLambdaComodule<S<B>> {
    CLambdaComodule { c: super::milnor::project_c(h, m), lambda: super::milnor::project_lambda(h, m) }
}

/// `(1_Λ ⊗ ρ_{C,Λ}) ∘ ψ_Λ = ρ_{Λ,C⊗Λ} ∘ ρ_{C,Λ}` on each `b_(i)`, plus the
/// closed form `b_(i) ⊗ 1 ⊗ 1 + Σ_j 1 ⊗ χ(t_{i-j})^(p^j) ⊗ b_(j)`.
pub fn psi_lambda_colinearity<B: Ring>(h: &CompositeHopf<B>) -> Vec<Check> {
    let w = Words::new(h);
    let lcl = [L, C, L];
    let ring = w.ring(&lcl);
    let psi = w.psi_lambda(&[L, L], 0, 1);
    let rho_into_cl = w.rho_c_lambda(&lcl, 1, 2);
    let rho_cl = w.rho_c_lambda(&[C, L], 0, 1);
    let rho_l_cl = w.rho_lambda_cl(&lcl, 0, 1, 2);
    let mut routes = Check::pass("psi_lambda_c_colinear");
    let mut closed = Check::pass("psi_lambda_c_colinear_closed_form");
    for i in 0..h.n() as usize {
        let f = w.map(&[L, L], &lcl, &[w.identity(&[L, L], 0, &lcl, 0), rho_into_cl.clone()], &psi[i]);
        let g = w.map(&[C, L], &lcl, &[rho_l_cl[..h.tbound() as usize].to_vec(), rho_l_cl[h.tbound() as usize..].to_vec()], &rho_cl[i]);
        routes = routes.and(Check::from_bool("psi_lambda_c_colinear", ring.eq_elem(&f, &g), || {
            format!("at b{i}: {} vs {}", ring.render(&f), ring.render(&g))
        }));
        let want = ring.add(&w.var(&lcl, 0, i), &rho_into_cl[i]);
        closed = closed.and(Check::from_bool("psi_lambda_c_colinear_closed_form", ring.eq_elem(&f, &want), || {
            format!("at b{i}: {} vs {}", ring.render(&f), ring.render(&want))
        }));
    }
    vec![routes, closed]
}

/// `(ρ_{C,Λ⊗C} ⊗ 1_Λ) ∘ ρ_{Λ,C⊗Λ} = ψ` on every generator of the composite.
pub fn coaction_identification<B: Ring>(h: &CompositeHopf<B>) -> Check {
    let w = Words::new(h);
    let clcl = [C, L, C, L];
    let lcl = [L, C, L];
    let ring = w.ring(&clcl);
    let rho_l_cl = w.rho_lambda_cl(&lcl, 0, 1, 2);
    let mut images = w.c_coaction_images(&[L, C], &clcl, 0, 1);
    images.push(w.identity(&lcl, 2, &clcl, 3));
    let hopf = h.hopf();
    for (k, (name, x)) in hopf.generators().into_iter().enumerate() {
        let step = rho_l_cl[k].clone();
        let got = w.map(&lcl, &clcl, &images, &step);
        let want = hopf.psi(&x);
        if !ring.eq_elem(&got, &want) {
            return Check::fail("coaction_identification", format!("at {name}: {} vs {}", ring.render(&got), ring.render(&want)));
        }
    }
    Check::pass("coaction_identification")
}

/// The four squares of the three-by-three diagram whose rows and columns are
/// `ρ_{Λ,-}` followed by `ρ_{C,-}`, evaluated on basis elements.
pub fn nine_diagram_check<B: Ring>(h: &CompositeHopf<B>, m: &CLambdaComodule<S<B>>) -> Vec<Check> {
    let mm = ModuleMaps { words: Words::new(h), m };
    let w = &mm.words;
    let empty = SeriesRing::new(h.gamma().base().clone(), VarTable::new(vec![]));
    let n = m.rank();
    let mut out = Vec::new();

    // M → Λ ⊗ Λ ⊗ M
    let ll = [L, L];
    let ring = w.ring(&ll);
    let psi = w.psi_lambda(&ll, 0, 1);
    let mut sq = Check::pass("square_lambda_lambda");
    for j in 0..n {
        let first = mm.lambda_coact(&[], &unit_vector(&empty, n, j));
        let a = mm.word_map(&[L], &ll, std::slice::from_ref(&psi), &first);
        let b = mm.lambda_coact(&[L], &first);
        sq = sq.and(compare_vectors(&ring, "square_lambda_lambda", &m.names()[j], &a, &b, m.names()));
    }
    out.push(sq);

    // Λ ⊗ M → C ⊗ Λ ⊗ Λ ⊗ M
    let basis1 = mm.basis(1);
    let cll = [C, L, L];
    let ring = w.ring(&cll);
    let mut sq = Check::pass("square_lambda_c");
    for (name, e) in &basis1 {
        let a = mm.c_coact(&[], &ll, &mm.lambda_coact(&[L], e));
        let b = mm.lambda_coact(&[C, L], &mm.c_coact(&[], &[L], e));
        sq = sq.and(compare_vectors(&ring, "square_lambda_c", name, &a, &b, m.names()));
    }
    out.push(sq);

    // Λ ⊗ M → Λ ⊗ C ⊗ Λ ⊗ M
    let lcl = [L, C, L];
    let ring = w.ring(&lcl);
    let rho_l_cl = w.rho_lambda_cl(&lcl, 0, 1, 2);
    let nt = h.tbound() as usize;
    let split_images = [rho_l_cl[..nt].to_vec(), rho_l_cl[nt..].to_vec()];
    let mut sq = Check::pass("square_c_lambda");
    for (name, e) in &basis1 {
        let a = mm.word_map(&[C, L], &lcl, &split_images, &mm.c_coact(&[], &[L], e));
        let b = mm.c_coact(&[L], &[L], &mm.word_map(&[L], &ll, std::slice::from_ref(&psi), e));
        sq = sq.and(compare_vectors(&ring, "square_c_lambda", name, &a, &b, m.names()));
    }
    out.push(sq);

    // Λ ⊗ Λ ⊗ M → C ⊗ Λ ⊗ C ⊗ Λ ⊗ M
    let clcl = [C, L, C, L];
    let ring = w.ring(&clcl);
    let mut images = w.c_coaction_images(&[L, C], &clcl, 0, 1);
    images.push(w.identity(&lcl, 2, &clcl, 3));
    let mut sq = Check::pass("square_c_c");
    for (name, e) in &mm.basis(2) {
        let a = mm.word_map(&lcl, &clcl, &images, &mm.c_coact(&[L], &[L], e));
        let b = mm.c_coact(&[C, L], &[L], &mm.c_coact(&[], &ll, e));
        sq = sq.and(compare_vectors(&ring, "square_c_c", name, &a, &b, m.names()));
    }
    out.push(sq);
    out
}

/// A random `C`–`Λ` comodule: a tensor product of one or two pieces from
/// `pool` (total rank at most `max_rank`) in a random basis over the field.
pub fn random_clambda<B>(h: &CompositeHopf<B>, pool: &[CLambdaComodule<S<B>>], max_rank: usize, rng: &mut impl rand::Rng) -> CLambdaComodule<S<B>>
where
    B: super::comodule::RandomElem,
{
    let a = &pool[rng.gen_range(0..pool.len())];
    let mut m = a.clone();
    let partners: Vec<_> = pool.iter().filter(|b| b.rank() * a.rank() <= max_rank).collect();
    if !partners.is_empty() && rng.gen_bool(0.6) {
        m = m.tensor(partners[rng.gen_range(0..partners.len())], h);
    }
    // Base change inside each parity class keeps the basis homogeneous.
    let base = h.gamma().base();
    let n = m.rank();
    let mut p = super::matrix::zeros(base, n, n);
    let mut q = super::matrix::zeros(base, n, n);
    for parity in [false, true] {
        let idx: Vec<usize> = (0..n).filter(|&j| m.c.parity[j] == parity).collect();
        if idx.is_empty() {
            continue;
        }
        let (bp, bq) = random_invertible(base, idx.len(), rng);
        for (x, &i) in idx.iter().enumerate() {
            for (y, &j) in idx.iter().enumerate() {
                p[i][j] = bp[x][y].clone();
                q[i][j] = bq[x][y].clone();
            }
        }
    }
    m.change_basis(h, &p, &q)
}
