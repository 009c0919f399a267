use super::matrix::{self, Mat};
use crate::check::Check;
use crate::coeffring::{Fq, Ring};
use crate::error::{Error, Result};
use crate::gseries::{Series, SeriesRing};
use crate::hopfalg::{FiniteGroup, FunctionHopf, HopfAlgebroid};

/// A comodule that is free on a finite homogeneous basis `m_j`, stored as
/// the coaction matrix: `ρ(m_j) = Σ_k coaction[j][k] ⊗ m_k`.
///
/// Only the parity of each basis element matters for signs.
#[derive(Clone, Debug, PartialEq)]
pub struct Comodule<E> {
    pub names: Vec<String>,
    pub parity: Vec<bool>,
    pub coaction: Mat<E>,
}

impl<E: Clone> Comodule<E> {
    pub fn new(names: Vec<String>, parity: Vec<bool>, coaction: Mat<E>) -> Result<Self> {
        let n = names.len();
        if parity.len() != n || coaction.len() != n || coaction.iter().any(|r| r.len() != n) {
            return Err(Error::Config(format!("comodule of rank {n} needs an {n} x {n} coaction and {n} parities")));
        }
        Ok(Comodule { names, parity, coaction })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    /// The rank-`names.len()` comodule with `ρ(m) = 1 ⊗ m`.
    pub fn trivial<H>(h: &H, names: Vec<String>, parity: Vec<bool>) -> Self
    where
        H: HopfAlgebroid,
        H::Total: Ring<Elem = E>,
    {
        let coaction = matrix::identity(h.total(), names.len());
        Comodule { names, parity, coaction }
    }

    /// Counit and coassociativity on every basis element.
    pub fn check<H>(&self, h: &H) -> Vec<Check>
    where
        H: HopfAlgebroid,
        H::Total: Ring<Elem = E>,
    {
        let base = h.base();
        let pair = h.pair();
        let n = self.rank();
        let mut counit = Check::pass("comodule_counit");
        let mut coassoc = Check::pass("comodule_coassociativity");
        for j in 0..n {
            for k in 0..n {
                let e = h.eps(&self.coaction[j][k]);
                let ok = if j == k { base.is_one(&e) } else { base.is_zero(&e) };
                if !ok {
                    counit = counit.and(Check::fail(
                        "comodule_counit",
                        format!("eps of the {} coefficient in rho({}) is {}", self.names[k], self.names[j], base.render(&e)),
                    ));
                }
            }
            if !coassoc.ok {
                continue;
            }
            for l in 0..n {
                let lhs = h.psi(&self.coaction[j][l]);
                let rhs = (0..n).fold(pair.zero(), |acc, k| {
                    pair.add(&acc, &pair.mul(&h.left(&self.coaction[j][k]), &h.right(&self.coaction[k][l])))
                });
                if !pair.eq_elem(&lhs, &rhs) {
                    coassoc = Check::fail(
                        "comodule_coassociativity",
                        format!("at {} -> {}: {} vs {}", self.names[j], self.names[l], pair.render(&lhs), pair.render(&rhs)),
                    );
                    break;
                }
            }
        }
        vec![counit, coassoc]
    }

    /// Graded tensor product with basis `m_j ⊗ n_a` at index `j * rank(N) + a`.
    pub fn tensor<H>(&self, other: &Self, h: &H) -> Self
    where
        H: HopfAlgebroid,
        H::Total: Ring<Elem = E>,
    {
        let tot = h.total();
        let (nm, nn) = (self.rank(), other.rank());
        let mut names = Vec::with_capacity(nm * nn);
        let mut parity = Vec::with_capacity(nm * nn);
        for j in 0..nm {
            for a in 0..nn {
                names.push(format!("{}⊗{}", self.names[j], other.names[a]));
                parity.push(self.parity[j] ^ other.parity[a]);
            }
        }
        let mut coaction = matrix::zeros(tot, nm * nn, nm * nn);
        for j in 0..nm {
            for k in 0..nm {
                if tot.is_zero(&self.coaction[j][k]) {
                    continue;
                }
                for a in 0..nn {
                    for b in 0..nn {
                        let mut v = tot.mul(&self.coaction[j][k], &other.coaction[a][b]);
                        // Moving the coefficient of n past m_k.
                        if self.parity[k] && (other.parity[a] ^ other.parity[b]) {
                            v = tot.neg(&v);
                        }
                        coaction[j * nn + a][k * nn + b] = v;
                    }
                }
            }
        }
        Comodule { names, parity, coaction }
    }

    /// The same comodule in the basis `m'_j = Σ_k p[j][k] m_k`, where `p`
    /// has entries in the base ring and `p_inv` is its inverse.
    pub fn change_basis<H>(&self, h: &H, p: &Mat<<H::Base as Ring>::Elem>, p_inv: &Mat<<H::Base as Ring>::Elem>) -> Self
    where
        H: HopfAlgebroid,
        H::Total: Ring<Elem = E>,
    {
        let tot = h.total();
        let lift = |m: &Mat<<H::Base as Ring>::Elem>| -> Mat<E> {
            m.iter().map(|row| row.iter().map(|a| h.eta_l(a)).collect()).collect()
        };
        let coaction = matrix::mul(tot, &matrix::mul(tot, &lift(p), &self.coaction), &lift(p_inv));
        let names = (0..self.rank()).map(|j| format!("{}'", self.names[j])).collect();
        Comodule { names, parity: self.parity.clone(), coaction }
    }

    /// Direct sum, basis of `self` first.
    pub fn direct_sum<H>(&self, other: &Self, h: &H) -> Self
    where
        H: HopfAlgebroid,
        H::Total: Ring<Elem = E>,
    {
        let tot = h.total();
        let (nm, nn) = (self.rank(), other.rank());
        let mut coaction = matrix::zeros(tot, nm + nn, nm + nn);
        for j in 0..nm {
            for k in 0..nm {
                coaction[j][k] = self.coaction[j][k].clone();
            }
        }
        for a in 0..nn {
            for b in 0..nn {
                coaction[nm + a][nm + b] = other.coaction[a][b].clone();
            }
        }
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        let mut parity = self.parity.clone();
        parity.extend(other.parity.iter().cloned());
        Comodule { names, parity, coaction }
    }
}

/// A free `R`-module with a semilinear right action of `G`:
/// `(m_j)g = Σ_k mats[g][j][k] m_k` and `(r m)g = r^g (m)g`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedModule {
    pub names: Vec<String>,
    pub mats: Vec<Mat<Series<u32>>>,
}

impl TwistedModule {
    pub fn rank(&self) -> usize {
        self.names.len()
    }

    /// `(Σ_j r_j m_j)g`.
    pub fn act(&self, h: &FunctionHopf, g: usize, m: &[Series<u32>]) -> Vec<Series<u32>> {
        let r = h.ring();
        let moved: Vec<_> = m.iter().map(|x| h.action().apply(g, x)).collect();
        matrix::apply_row(r, &moved, &self.mats[g])
    }

    /// `r^g` applied to every entry.
    fn twist(h: &FunctionHopf, g: usize, a: &Mat<Series<u32>>) -> Mat<Series<u32>> {
        a.iter().map(|row| row.iter().map(|x| h.action().apply(g, x)).collect()).collect()
    }

    /// The identity acts trivially, `mats[gh] = mats[g]^h · mats[h]`, and
    /// `(r m)g = r^g (m)g` on random `r`, `m`.
    pub fn check(&self, h: &FunctionHopf, rng: &mut impl rand::Rng, samples: usize) -> Vec<Check> {
        let r = h.ring();
        let grp = h.group();
        let n = grp.order();
        let unit = Check::from_bool("twisted_identity", matrix::first_difference(r, &self.mats[0], &matrix::identity(r, self.rank())).is_none(), || {
            "the identity acts nontrivially".into()
        });
        let mut law = Check::pass("twisted_action_law");
        'outer: for g in 0..n {
            for k in 0..n {
                let lhs = &self.mats[grp.mul(g, k)];
                let rhs = matrix::mul(r, &Self::twist(h, k, &self.mats[g]), &self.mats[k]);
                if let Some((i, j)) = matrix::first_difference(r, lhs, &rhs) {
                    law = Check::fail(
                        "twisted_action_law",
                        format!("((m)g)h differs from (m)(gh) at g={}, h={}, entry {} -> {}", grp.label(g), grp.label(k), self.names[i], self.names[j]),
                    );
                    break 'outer;
                }
            }
        }
        let mut semi = Check::pass("twisted_semilinear");
        for _ in 0..samples {
            let g = rng.gen_range(0..n);
            let a = random_scalar(r, rng);
            let m: Vec<_> = (0..self.rank()).map(|_| random_scalar(r, rng)).collect();
            let am: Vec<_> = m.iter().map(|x| r.mul(&a, x)).collect();
            let lhs = self.act(h, g, &am);
            let ag = h.action().apply(g, &a);
            let rhs: Vec<_> = self.act(h, g, &m).iter().map(|x| r.mul(&ag, x)).collect();
            if lhs != rhs {
                semi = semi.and(Check::fail("twisted_semilinear", format!("(a m)g != a^g (m)g at g={}", grp.label(g))));
            }
        }
        vec![unit, law, semi]
    }

    /// `(m ⊗ n)g = (m)g ⊗ (n)g`.
    pub fn tensor(&self, other: &Self, h: &FunctionHopf) -> Self {
        let r = h.ring();
        let mut names = Vec::new();
        for a in &self.names {
            for b in &other.names {
                names.push(format!("{a}⊗{b}"));
            }
        }
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| matrix::kron(r, a, b)).collect();
        TwistedModule { names, mats }
    }

    /// `R ⊗ V` for a linear representation `V` over the prime field, given by
    /// one integer matrix per group element.
    pub fn from_integer_rep(h: &FunctionHopf, names: Vec<String>, rep: &[Vec<Vec<i64>>]) -> Self {
        let r = h.ring();
        let mats = rep.iter().map(|m| m.iter().map(|row| row.iter().map(|&c| r.from_int(c)).collect()).collect()).collect();
        TwistedModule { names, mats }
    }

    /// The same module in the basis `m'_j = Σ_k p[j][k] m_k`:
    /// `mats'[g] = p^g · mats[g] · p^{-1}`.
    pub fn change_basis(&self, h: &FunctionHopf, p: &Mat<Series<u32>>, p_inv: &Mat<Series<u32>>) -> Self {
        let r = h.ring();
        let mats = (0..self.mats.len())
            .map(|g| matrix::mul(r, &matrix::mul(r, &Self::twist(h, g, p), &self.mats[g]), p_inv))
            .collect();
        let names = self.names.iter().map(|s| format!("{s}'")).collect();
        TwistedModule { names, mats }
    }

    /// A random module: a direct sum of trivial, regular and sign pieces in a
    /// random basis over `R`.
    pub fn random(h: &FunctionHopf, rng: &mut impl rand::Rng) -> Self {
        let grp = h.group();
        let n = grp.order();
        let mut blocks: Vec<(Vec<String>, Vec<Vec<Vec<i64>>>)> = Vec::new();
        let pieces = rng.gen_range(1..=2);
        for _ in 0..pieces {
            blocks.push(match rng.gen_range(0..3) {
                0 => (vec!["e".into()], vec![vec![vec![1]]; n]),
                1 => regular_rep(grp),
                _ => (vec!["s".into()], (0..n).map(|g| vec![vec![sign_char(grp, g)]]).collect()),
            });
        }
        let mut names = Vec::new();
        let mut rep: Vec<Vec<Vec<i64>>> = vec![Vec::new(); n];
        for (bn, brep) in blocks {
            let off = names.len();
            let k = bn.len();
            names.extend(bn);
            for g in 0..n {
                for row in rep[g].iter_mut() {
                    row.extend(std::iter::repeat_n(0, k));
                }
                for row in &brep[g] {
                    let mut full = vec![0; off];
                    full.extend(row);
                    rep[g].push(full);
                }
            }
        }
        let base = Self::from_integer_rep(h, names, &rep);
        let (p, p_inv) = random_invertible(h.ring(), base.rank(), rng);
        base.change_basis(h, &p, &p_inv)
    }
}

/// `(e_x)g = e_{xg}`.
fn regular_rep(grp: &FiniteGroup) -> (Vec<String>, Vec<Vec<Vec<i64>>>) {
    let n = grp.order();
    let names = (0..n).map(|x| format!("e_{}", grp.label(x))).collect();
    let rep = (0..n)
        .map(|g| (0..n).map(|x| (0..n).map(|y| i64::from(grp.mul(x, g) == y)).collect()).collect())
        .collect();
    (names, rep)
}

/// A sign character where one is visible from the table: parity of the
/// permutation for `S3`, `g -> (-1)^g` for `Z/2`, trivial otherwise.
fn sign_char(grp: &FiniteGroup, g: usize) -> i64 {
    match grp.order() {
        6 => FiniteGroup::s3_sign(g),
        2 => 1 - 2 * g as i64,
        _ => 1,
    }
}

/// A random element of `R`: a field element plus small multiples of products of variables.
pub fn random_scalar(r: &SeriesRing<Fq>, rng: &mut impl rand::Rng) -> Series<u32> {
    let fq = r.base();
    let mut acc = r.constant(fq.from_index(rng.gen_range(0..fq.size())));
    for _ in 0..2 {
        if r.nvars() == 0 {
            break;
        }
        let i = rng.gen_range(0..r.nvars());
        let c = fq.from_index(rng.gen_range(0..fq.size()));
        acc = r.add(&acc, &r.scale(&r.var(i), &c));
    }
    acc
}

/// A random invertible matrix and its inverse, as a product of elementary
/// row operations and unit scalings.
pub fn random_invertible<R: Ring>(r: &R, n: usize, rng: &mut impl rand::Rng) -> (Mat<R::Elem>, Mat<R::Elem>)
where
    R: RandomElem,
{
    let mut p = matrix::identity(r, n);
    let mut q = matrix::identity(r, n);
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            let u = r.random_unit(rng);
            let ui = r.inv(&u).expect("unit");
            p[i] = p[i].iter().map(|x| r.mul(&u, x)).collect();
            for row in q.iter_mut() {
                row[i] = r.mul(&row[i], &ui);
            }
        } else {
            let c = r.random_elem(rng);
            let src = p[j].clone();
            for (x, y) in p[i].iter_mut().zip(&src) {
                *x = r.add(x, &r.mul(&c, y));
            }
            for row in q.iter_mut() {
                row[j] = r.sub(&row[j], &r.mul(&c, &row[i]));
            }
        }
    }
    (p, q)
}

/// Rings that can produce random elements and random units.
pub trait RandomElem: Ring {
    fn random_elem(&self, rng: &mut impl rand::Rng) -> Self::Elem;
    fn random_unit(&self, rng: &mut impl rand::Rng) -> Self::Elem;
}

impl RandomElem for Fq {
    fn random_elem(&self, rng: &mut impl rand::Rng) -> u32 {
        self.from_index(rng.gen_range(0..self.size()))
    }
    fn random_unit(&self, rng: &mut impl rand::Rng) -> u32 {
        self.from_index(rng.gen_range(1..self.size()))
    }
}

impl RandomElem for SeriesRing<Fq> {
    fn random_elem(&self, rng: &mut impl rand::Rng) -> Series<u32> {
        random_scalar(self, rng)
    }
    fn random_unit(&self, rng: &mut impl rand::Rng) -> Series<u32> {
        self.constant(self.base().random_unit(rng))
    }
}

/// Reads a comodule over `C(G, R)` as a twisted module: `mats[g][j][k] = γ_jk(g)`.
pub fn comod_to_twisted(h: &FunctionHopf, m: &Comodule<Vec<Series<u32>>>) -> TwistedModule {
    let n = h.group().order();
    let mats = (0..n)
        .map(|g| m.coaction.iter().map(|row| row.iter().map(|f| f[g].clone()).collect()).collect())
        .collect();
    TwistedModule { names: m.names.clone(), mats }
}

/// The inverse of `comod_to_twisted`: `γ_jk(g) = mats[g][j][k]`.
pub fn twisted_to_comod(h: &FunctionHopf, t: &TwistedModule) -> Comodule<Vec<Series<u32>>> {
    let n = h.group().order();
    let k = t.rank();
    let coaction = (0..k).map(|j| (0..k).map(|l| (0..n).map(|g| t.mats[g][j][l].clone()).collect()).collect()).collect();
    Comodule { names: t.names.clone(), parity: vec![false; k], coaction }
}
