use super::HopfAlgebroid;
use crate::check::Check;
use crate::coeffring::{Fq, Ring};
use crate::error::{Error, Result};
use crate::gseries::{Series, SeriesRing, VarSpec, VarTable};

/// A finite group by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(name: &str, labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if labels.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Config(format!("{name}: malformed multiplication table")));
        }
        if (0..n).any(|g| table[0][g] != g || table[g][0] != g) {
            return Err(Error::Config(format!("{name}: element 0 is not the identity")));
        }
        let mut inverse = Vec::with_capacity(n);
        for (g, row) in table.iter().enumerate() {
            match row.iter().position(|&x| x == 0) {
                Some(h) if table[h][g] == 0 => inverse.push(h),
                _ => return Err(Error::Config(format!("{name}: {} has no inverse", labels[g]))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Config(format!("{name}: multiplication is not associative")));
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.into(), labels, table, inverse })
    }

    /// `Z/k` with generator `g`.
    pub fn cyclic(k: usize) -> Self {
        let labels = (0..k).map(|i| if i == 0 { "e".to_string() } else { format!("g^{i}") }).collect();
        let table = (0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect();
        Self::from_table(&format!("Z/{k}"), labels, table).expect("cyclic table")
    }

    /// `S_3` as permutations of `{0,1,2}`, with `gh` meaning `g` first, then `h`.
    pub fn symmetric3() -> Self {
        let perms = Self::s3_perms();
        let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|g| perms.iter().map(|h| idx([h[g[0]], h[g[1]], h[g[2]]])).collect())
            .collect();
        let labels = perms.iter().map(|p| format!("[{}{}{}]", p[0], p[1], p[2])).collect();
        Self::from_table("S3", labels, table).expect("S3 table")
    }

    fn s3_perms() -> [[usize; 3]; 6] {
        [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]]
    }

    /// The permutation of `{0,1,2}` for an element of `symmetric3()`.
    pub fn s3_perm(g: usize) -> [usize; 3] {
        Self::s3_perms()[g]
    }

    /// Sign of an element of `symmetric3()`.
    pub fn s3_sign(g: usize) -> i64 {
        if g == 0 || g >= 4 {
            1
        } else {
            -1
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn order(&self) -> usize {
        self.table.len()
    }
    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
}

/// A right action of a finite group on `R = F_q[vars]/(truncations)` by ring
/// automorphisms: `g` raises coefficients to `p^frob[g]` and sends variable `i`
/// to `images[g][i]`.
#[derive(Clone, Debug)]
pub struct RingAction {
    ring: SeriesRing<Fq>,
    frob: Vec<u32>,
    images: Vec<Vec<Series<u32>>>,
}

impl RingAction {
    pub fn new(ring: SeriesRing<Fq>, frob: Vec<u32>, images: Vec<Vec<Series<u32>>>) -> Self {
        RingAction { ring, frob, images }
    }

    pub fn ring(&self) -> &SeriesRing<Fq> {
        &self.ring
    }

    /// `r^g`.
    pub fn apply(&self, g: usize, r: &Series<u32>) -> Series<u32> {
        let fq = self.ring.base().clone();
        let k = self.frob[g];
        self.ring.substitute(r, &self.ring, &self.images[g], |c| fq.frobenius_pow(c, k)).expect("arity")
    }

    /// Generators of `R` over `F_p`: the variables and a field generator.
    pub fn ring_generators(&self) -> Vec<Series<u32>> {
        let mut out: Vec<_> = (0..self.ring.nvars()).map(|i| self.ring.var(i)).collect();
        out.push(self.ring.constant(self.ring.base().root()));
        out
    }

    /// Identity acts trivially, `(r^g)^h = r^(gh)` on generators, and each
    /// image respects the truncation relations.
    pub fn validate(&self, group: &FiniteGroup) -> Check {
        let n = group.order();
        if self.frob.len() != n || self.images.len() != n {
            return Check::fail("right_action", format!("action lists {} elements, group has {n}", self.frob.len()));
        }
        let gens = self.ring_generators();
        for r in &gens {
            if !self.ring.eq_elem(&self.apply(0, r), r) {
                return Check::fail("right_action", format!("identity moves {}", self.ring.render(r)));
            }
            for g in 0..n {
                for h in 0..n {
                    let lhs = self.apply(h, &self.apply(g, r));
                    let rhs = self.apply(group.mul(g, h), r);
                    if !self.ring.eq_elem(&lhs, &rhs) {
                        return Check::fail(
                            "right_action",
                            format!("({})^({})^({}) differs from ^({})", self.ring.render(r), group.label(g), group.label(h), group.label(group.mul(g, h))),
                        );
                    }
                }
            }
        }
        for g in 0..n {
            for (i, v) in self.ring.vars().vars.iter().enumerate() {
                if let Some(t) = v.trunc {
                    let img = &self.images[g][i];
                    if !self.ring.is_zero(&self.ring.pow(img, t as u64)) {
                        return Check::fail("right_action", format!("{}^{t} != 0 under {}", v.name, group.label(g)));
                    }
                }
            }
        }
        Check::pass("right_action")
    }
}

/// Functions from a finite set of size `size` to a ring, with pointwise operations.
#[derive(Clone, Debug)]
pub struct FunctionRing<R: Ring> {
    ring: R,
    size: usize,
}

impl<R: Ring> FunctionRing<R> {
    pub fn new(ring: R, size: usize) -> Self {
        FunctionRing { ring, size }
    }
    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn size(&self) -> usize {
        self.size
    }
    pub fn constant(&self, r: R::Elem) -> Vec<R::Elem> {
        vec![r; self.size]
    }
    pub fn indicator(&self, k: usize) -> Vec<R::Elem> {
        (0..self.size).map(|i| if i == k { self.ring.one() } else { self.ring.zero() }).collect()
    }
}

impl<R: Ring> Ring for FunctionRing<R> {
    type Elem = Vec<R::Elem>;

    fn zero(&self) -> Self::Elem {
        self.constant(self.ring.zero())
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.ring.one())
    }
    fn from_int(&self, n: i64) -> Self::Elem {
        self.constant(self.ring.from_int(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.ring.add(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.ring.neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.ring.mul(x, y)).collect()
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.ring.is_zero(x))
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        a.iter().map(|x| self.ring.inv(x)).collect()
    }
    fn render(&self, a: &Self::Elem) -> String {
        let parts: Vec<String> = a.iter().map(|x| self.ring.render(x)).collect();
        format!("[{}]", parts.join(", "))
    }
}

/// The function Hopf algebroid `C(G, R)` of a finite group acting on `R`.
///
/// `Γ ⊗_R Γ` and `Γ ⊗_R Γ ⊗_R Γ` are represented as functions on `G × G` and
/// `G × G × G` through `m(α, β)(g1, g2) = α(g1)^g2 β(g2)`.
#[derive(Clone, Debug)]
pub struct FunctionHopf {
    name: String,
    group: FiniteGroup,
    action: RingAction,
    total: FunctionRing<SeriesRing<Fq>>,
    pair: FunctionRing<SeriesRing<Fq>>,
    triple: FunctionRing<SeriesRing<Fq>>,
}

impl FunctionHopf {
    pub fn new(name: &str, group: FiniteGroup, action: RingAction) -> Result<Self> {
        let check = action.validate(&group);
        if !check.ok {
            return Err(Error::Config(format!("{name}: {}", check.witness.unwrap_or_default())));
        }
        let r = action.ring().clone();
        let n = group.order();
        Ok(FunctionHopf {
            name: name.into(),
            total: FunctionRing::new(r.clone(), n),
            pair: FunctionRing::new(r.clone(), n * n),
            triple: FunctionRing::new(r, n * n * n),
            group,
            action,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }
    pub fn action(&self) -> &RingAction {
        &self.action
    }
    pub fn ring(&self) -> &SeriesRing<Fq> {
        self.action.ring()
    }

    fn n(&self) -> usize {
        self.group.order()
    }
    fn at2(&self, a: usize, b: usize) -> usize {
        a * self.n() + b
    }
    fn at3(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.n() + b) * self.n() + c
    }

    /// `m(α, β)(g1, g2) = α(g1)^g2 β(g2)`.
    pub fn m_map(&self, a: &[Series<u32>], b: &[Series<u32>]) -> Vec<Series<u32>> {
        let r = self.ring();
        let n = self.n();
        let mut out = Vec::with_capacity(n * n);
        for g1 in 0..n {
            for g2 in 0..n {
                out.push(r.mul(&self.action.apply(g2, &a[g1]), &b[g2]));
            }
        }
        out
    }

    /// `ψ(α)` evaluated at `(g1, g2)`.
    pub fn psi_at(&self, a: &[Series<u32>], g1: usize, g2: usize) -> Series<u32> {
        self.psi(&a.to_vec())[self.at2(g1, g2)].clone()
    }

    /// `m` sends the basis `δ_a ⊗ δ_b` to the point indicators of `G × G`
    /// (so it is onto and injective by counting), is multiplicative and is
    /// balanced over `R`.
    pub fn check_m_iso(&self, rng: &mut impl rand::Rng, samples: usize) -> Vec<Check> {
        let n = self.n();
        let mut images = Vec::new();
        let mut basis = Check::pass("m_basis");
        for a in 0..n {
            for b in 0..n {
                let img = self.m_map(&self.total.indicator(a), &self.total.indicator(b));
                let want = self.pair.indicator(self.at2(a, b));
                if !self.pair.eq_elem(&img, &want) {
                    basis = basis.and(Check::fail(
                        "m_basis",
                        format!("delta_{} (x) delta_{} maps to {}", self.group.label(a), self.group.label(b), self.pair.render(&img)),
                    ));
                }
                images.push(img);
            }
        }
        let mut distinct = images.clone();
        distinct.sort_by(|x, y| format!("{x:?}").cmp(&format!("{y:?}")));
        distinct.dedup();
        let count = Check::from_bool("m_count", distinct.len() == n * n && images.len() == self.pair.size(), || {
            format!("{} distinct images for {} points", distinct.len(), self.pair.size())
        });
        let mut mult = Check::pass("m_multiplicative");
        let mut balanced = Check::pass("m_balanced");
        let rgens = self.action.ring_generators();
        for _ in 0..samples {
            let a: Vec<_> = (0..4).map(|_| self.random_elem(rng)).collect();
            let lhs = self.m_map(&self.total.mul(&a[0], &a[1]), &self.total.mul(&a[2], &a[3]));
            let rhs = self.pair.mul(&self.m_map(&a[0], &a[2]), &self.m_map(&a[1], &a[3]));
            if !self.pair.eq_elem(&lhs, &rhs) {
                mult = mult.and(Check::fail("m_multiplicative", self.pair.render(&self.pair.sub(&lhs, &rhs))));
            }
            let r = &rgens[rng.gen_range(0..rgens.len())];
            let lhs = self.m_map(&self.total.mul(&a[0], &self.eta_r(r)), &a[1]);
            let rhs = self.m_map(&a[0], &self.total.mul(&self.eta_l(r), &a[1]));
            if !self.pair.eq_elem(&lhs, &rhs) {
                balanced = balanced.and(Check::fail("m_balanced", self.pair.render(&self.pair.sub(&lhs, &rhs))));
            }
        }
        vec![basis, count, mult, balanced]
    }

    /// A random function `G → R` with small random coefficients.
    pub fn random_elem(&self, rng: &mut impl rand::Rng) -> Vec<Series<u32>> {
        let gens = self.action.ring_generators();
        let r = self.ring();
        (0..self.n())
            .map(|_| {
                let mut acc = r.from_int(rng.gen_range(0..3));
                for _ in 0..2 {
                    let g = &gens[rng.gen_range(0..gens.len())];
                    let h = &gens[rng.gen_range(0..gens.len())];
                    acc = r.add(&acc, &r.scale_int(&r.mul(g, h), rng.gen_range(-1..=1)));
                }
                acc
            })
            .collect()
    }

    /// Six shipped instances: each of `Z/2`, `Z/3`, `S3` acting on two rings.
    pub fn standard_instances() -> Result<Vec<FunctionHopf>> {
        let f3 = Fq::prime(3)?;
        let sign_ring = SeriesRing::new(f3.clone(), VarTable::new(vec![VarSpec::even("s", 0, Some(2))]));
        let s = sign_ring.var(0);
        let mut out = Vec::new();

        let z2 = FiniteGroup::cyclic(2);
        let act = RingAction::new(sign_ring.clone(), vec![0, 0], vec![vec![s.clone()], vec![sign_ring.neg(&s)]]);
        out.push(FunctionHopf::new("C(Z/2, F3[s]/s^2; s -> -s)", z2.clone(), act)?);
        let f9 = Fq::new(3, 2)?;
        let r9 = SeriesRing::new(f9, VarTable::new(vec![]));
        let act = RingAction::new(r9, vec![0, 1], vec![vec![], vec![]]);
        out.push(FunctionHopf::new("C(Z/2, F9; Frobenius)", z2, act)?);

        let z3 = FiniteGroup::cyclic(3);
        let perm_ring = Self::square_zero_ring(&f3, 3);
        let images = (0..3).map(|g| (0..3).map(|i| perm_ring.var((i + g) % 3)).collect()).collect();
        let act = RingAction::new(perm_ring.clone(), vec![0, 0, 0], images);
        out.push(FunctionHopf::new("C(Z/3, F3[x0,x1,x2]/(x_i^2); cyclic shift)", z3.clone(), act)?);
        let f27 = Fq::new(3, 3)?;
        let r27 = SeriesRing::new(f27, VarTable::new(vec![]));
        let act = RingAction::new(r27, vec![0, 1, 2], vec![vec![], vec![], vec![]]);
        out.push(FunctionHopf::new("C(Z/3, F27; Frobenius)", z3, act)?);

        let s3 = FiniteGroup::symmetric3();
        let images = (0..6)
            .map(|g| {
                let perm = FiniteGroup::s3_perm(g);
                (0..3).map(|i| perm_ring.var(perm[i])).collect()
            })
            .collect();
        let act = RingAction::new(perm_ring, vec![0; 6], images);
        out.push(FunctionHopf::new("C(S3, F3[x0,x1,x2]/(x_i^2); permutation)", s3.clone(), act)?);
        let images = (0..6).map(|g| vec![sign_ring.scale_int(&s, FiniteGroup::s3_sign(g))]).collect();
        let act = RingAction::new(sign_ring, vec![0; 6], images);
        out.push(FunctionHopf::new("C(S3, F3[s]/s^2; sign)", s3, act)?);
        Ok(out)
    }

    /// `F[x_0..x_(k-1)]/(x_i^2)`.
    pub fn square_zero_ring(fq: &Fq, k: usize) -> SeriesRing<Fq> {
        SeriesRing::new(fq.clone(), VarTable::new((0..k).map(|i| VarSpec::even(&format!("x{i}"), 0, Some(2))).collect()))
    }
}

impl HopfAlgebroid for FunctionHopf {
    type Base = SeriesRing<Fq>;
    type Total = FunctionRing<SeriesRing<Fq>>;
    type Pair = FunctionRing<SeriesRing<Fq>>;
    type Triple = FunctionRing<SeriesRing<Fq>>;

    fn name(&self) -> String {
        self.name.clone()
    }
    fn base(&self) -> &SeriesRing<Fq> {
        self.action.ring()
    }
    fn total(&self) -> &Self::Total {
        &self.total
    }
    fn pair(&self) -> &Self::Pair {
        &self.pair
    }
    fn triple(&self) -> &Self::Triple {
        &self.triple
    }
    fn eta_l(&self, a: &Series<u32>) -> Vec<Series<u32>> {
        (0..self.n()).map(|g| self.action.apply(g, a)).collect()
    }
    fn eta_r(&self, a: &Series<u32>) -> Vec<Series<u32>> {
        self.total.constant(a.clone())
    }
    fn psi(&self, x: &Vec<Series<u32>>) -> Vec<Series<u32>> {
        let n = self.n();
        (0..n * n).map(|k| x[self.group.mul(k / n, k % n)].clone()).collect()
    }
    fn chi(&self, x: &Vec<Series<u32>>) -> Vec<Series<u32>> {
        (0..self.n()).map(|g| self.action.apply(g, &x[self.group.inv(g)])).collect()
    }
    fn eps(&self, x: &Vec<Series<u32>>) -> Series<u32> {
        x[0].clone()
    }
    fn left(&self, x: &Vec<Series<u32>>) -> Vec<Series<u32>> {
        let n = self.n();
        (0..n * n).map(|k| self.action.apply(k % n, &x[k / n])).collect()
    }
    fn right(&self, x: &Vec<Series<u32>>) -> Vec<Series<u32>> {
        let n = self.n();
        (0..n * n).map(|k| x[k % n].clone()).collect()
    }
    fn psi_left(&self, y: &Vec<Series<u32>>) -> Vec<Series<u32>> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    debug_assert_eq!(out.len(), self.at3(a, b, c));
                    out.push(y[self.at2(self.group.mul(a, b), c)].clone());
                }
            }
        }
        out
    }
    fn psi_right(&self, y: &Vec<Series<u32>>) -> Vec<Series<u32>> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    out.push(y[self.at2(a, self.group.mul(b, c))].clone());
                }
            }
        }
        out
    }
    fn eps_left(&self, y: &Vec<Series<u32>>) -> Vec<Series<u32>> {
        (0..self.n()).map(|g| y[self.at2(0, g)].clone()).collect()
    }
    fn eps_right(&self, y: &Vec<Series<u32>>) -> Vec<Series<u32>> {
        (0..self.n()).map(|g| y[self.at2(g, 0)].clone()).collect()
    }
    fn mul_chi_left(&self, y: &Vec<Series<u32>>) -> Vec<Series<u32>> {
        (0..self.n()).map(|g| y[self.at2(self.group.inv(g), g)].clone()).collect()
    }
    fn mul_chi_right(&self, y: &Vec<Series<u32>>) -> Vec<Series<u32>> {
        (0..self.n()).map(|g| self.action.apply(g, &y[self.at2(g, self.group.inv(g))])).collect()
    }
    fn base_samples(&self) -> Vec<Series<u32>> {
        self.action.ring_generators()
    }
    fn generators(&self) -> Vec<(String, Vec<Series<u32>>)> {
        let r = self.ring();
        let mut out: Vec<_> = (1..self.n())
            .map(|g| (format!("delta_{}", self.group.label(g)), self.total.indicator(g)))
            .collect();
        for x in self.action.ring_generators() {
            out.push((format!("etaL({})", r.render(&x)), self.eta_l(&x)));
        }
        out
    }
}
