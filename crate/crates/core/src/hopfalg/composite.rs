use super::{HopfAlgebroid, SeriesHopf};
use crate::check::Check;
use crate::coeffring::Ring;
use crate::error::{Error, Result};
use crate::fgl::{first_diff, Fgl};
use crate::gseries::{Series, SeriesRing, VarSpec, VarTable};

/// The composite Hopf algebra on formal generators `t_1..t_K` (with `t_0 = 1`)
/// and odd `b_(0)..b_(n-1)`, in degree-0 form.
///
/// `ψ(t_m) = Σ_l t_l ⊗ t_{m-l}^{p^l}` and
/// `ψ(b_(i)) = 1 ⊗ b_(i) + Σ_{j ≤ i} b_(j) ⊗ t_{i-j}^{p^j}`; `χ` is the
/// explicit solution of the left antipode condition.
#[derive(Clone, Debug)]
pub struct CompositeHopf<B: Ring> {
    p: u64,
    n: u32,
    tbound: u32,
    hopf: SeriesHopf<B>,
    c_part: SeriesHopf<B>,
    lambda: SeriesHopf<B>,
}

fn t_vars(k: u32) -> Vec<VarSpec> {
    (1..=k).map(|i| VarSpec::param(&format!("t{i}"), 0)).collect()
}

impl<B: Ring> CompositeHopf<B> {
    /// Generators `t_1..t_tbound` and `b_(0)..b_(n-1)`.
    pub fn new(base: B, p: u64, n: u32, tbound: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if tbound + 1 < n {
            return Err(Error::Config(format!("t bound {tbound} is below n - 1 = {}", n - 1)));
        }
        let mut vars = t_vars(tbound);
        vars.extend((0..n).map(|i| VarSpec::odd(&format!("b{i}"), -1)));
        let hopf = SeriesHopf::new(&format!("composite(p={p},n={n})"), base.clone(), vars);
        let c_part = SeriesHopf::new(&format!("formal_c(p={p},k={tbound})"), base.clone(), t_vars(tbound));
        let lambda = SeriesHopf::exterior(base, n);
        let mut h = CompositeHopf { p, n, tbound, hopf, c_part, lambda };
        h.install_structure();
        Ok(h)
    }

    /// Default bound `t_1..t_(n+1)`.
    pub fn with_default_bound(base: B, p: u64, n: u32) -> Result<Self> {
        Self::new(base, p, n, n + 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn tbound(&self) -> u32 {
        self.tbound
    }
    pub fn hopf(&self) -> &SeriesHopf<B> {
        &self.hopf
    }
    pub fn hopf_mut(&mut self) -> &mut SeriesHopf<B> {
        &mut self.hopf
    }
    pub fn c_part(&self) -> &SeriesHopf<B> {
        &self.c_part
    }
    pub fn lambda(&self) -> &SeriesHopf<B> {
        &self.lambda
    }
    pub fn gamma(&self) -> &SeriesRing<B> {
        self.hopf.gamma()
    }

    /// Variable index of `b_(i)` in the total ring.
    pub fn b_index(&self, i: u32) -> usize {
        self.tbound as usize + i as usize
    }

    /// `t_i` in a ring whose variables start with `t_1..t_K` at `offset`; `t_0 = 1`.
    fn t_in(&self, ring: &SeriesRing<B>, offset: usize, i: u32) -> Series<B::Elem> {
        if i == 0 {
            ring.one()
        } else {
            ring.var(offset + i as usize - 1)
        }
    }

    fn frob(&self, ring: &SeriesRing<B>, x: &Series<B::Elem>, j: u32) -> Series<B::Elem> {
        ring.pow(x, self.p.pow(j))
    }

    fn install_structure(&mut self) {
        let k = self.tbound;
        let nt = k as usize;
        let g = self.hopf.ngens();
        let pair = self.hopf.pair().clone();
        let gamma = self.hopf.gamma().clone();
        for m in 1..=k {
            let psi_t = pair.sum_all((0..=m).map(|l| {
                let a = self.t_in(&pair, 0, l);
                let b = self.t_in(&pair, g, m - l);
                pair.mul(&a, &self.frob(&pair, &b, l))
            }));
            self.hopf.set_psi(m as usize - 1, psi_t);
        }
        for i in 0..self.n {
            let v = self.psi_b_formula(i);
            self.hopf.set_psi(self.b_index(i), v);
        }
        // χ(t_m) = -Σ_{l ≥ 1} t_l χ(t_{m-l})^{p^l}
        let mut chi_t: Vec<Series<B::Elem>> = vec![gamma.one()];
        for m in 1..=k {
            let s = gamma.sum_all((1..=m).map(|l| {
                gamma.mul(&self.t_in(&gamma, 0, l), &self.frob(&gamma, &chi_t[(m - l) as usize], l))
            }));
            chi_t.push(gamma.neg(&s));
        }
        // χ(b_(i)) = -b_(i) - Σ_{j < i} χ(b_(j)) t_{i-j}^{p^j}
        let mut chi_b: Vec<Series<B::Elem>> = Vec::new();
        for i in 0..self.n {
            let mut acc = gamma.neg(&gamma.var(self.b_index(i)));
            for j in 0..i {
                let t = self.frob(&gamma, &self.t_in(&gamma, 0, i - j), j);
                acc = gamma.sub(&acc, &gamma.mul(&chi_b[j as usize], &t));
            }
            chi_b.push(acc);
        }
        for m in 1..=k {
            self.hopf.set_chi(m as usize - 1, chi_t[m as usize].clone());
        }
        for i in 0..self.n {
            self.hopf.set_chi(self.b_index(i), chi_b[i as usize].clone());
        }
        let slots: Vec<usize> = (0..nt).collect();
        let c_gamma = self.c_part.gamma().clone();
        let c_pair = self.c_part.pair().clone();
        for m in 0..nt {
            let pp: Vec<usize> = (0..nt).chain(g..g + nt).collect();
            let psi = self.restrict(&self.hopf.psi_gens()[m], &c_pair, &pp);
            self.c_part.set_psi(m, psi);
            let chi = self.restrict(&self.hopf.chi_gens()[m], &c_gamma, &slots);
            self.c_part.set_chi(m, chi);
        }
    }

    /// Re-expresses `f` (which only involves variables at `slots`) in `target`.
    fn restrict(&self, f: &Series<B::Elem>, target: &SeriesRing<B>, slots: &[usize]) -> Series<B::Elem> {
        let mut out = Series::default();
        for (e, c) in &f.terms {
            let e2: Vec<i32> = slots.iter().map(|&s| e[s]).collect();
            debug_assert_eq!(e.iter().sum::<i32>(), e2.iter().sum::<i32>());
            debug_assert!(target.vars().admits(&e2));
            out.terms.insert(e2, c.clone());
        }
        out
    }

    fn psi_b_formula(&self, i: u32) -> Series<B::Elem> {
        let pair = self.hopf.pair();
        let g = self.hopf.ngens();
        let mut acc = pair.var(g + self.b_index(i));
        for j in 0..=i {
            let b = pair.var(self.b_index(j));
            let t = self.frob(pair, &self.t_in(pair, g, i - j), j);
            acc = pair.add(&acc, &pair.mul(&b, &t));
        }
        acc
    }

    /// `ψ(b_(i)) = 1 ⊗ b_(i) + Σ_{j ≤ i} b_(j) ⊗ t_{i-j}^{p^j}` in `Γ ⊗ Γ`.
    pub fn composite_psi_b(&self, i: u32) -> Result<Series<B::Elem>> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i as usize, bound: self.n as usize });
        }
        Ok(self.psi_b_formula(i))
    }

    /// The same structure with the `j = i` term dropped from `ψ(b_(i))`.
    pub fn corrupted(&self, i: u32) -> Result<SeriesHopf<B>> {
        let full = self.composite_psi_b(i)?;
        let pair = self.hopf.pair();
        let drop = pair.var(self.b_index(i));
        let mut h = self.hopf.clone();
        h.set_psi(self.b_index(i), pair.sub(&full, &drop));
        Ok(h)
    }

    /// `i_Λ : Λ → Γ`.
    pub fn i_lambda(&self, x: &Series<B::Elem>) -> Series<B::Elem> {
        let slots: Vec<usize> = (0..self.n).map(|i| self.b_index(i)).collect();
        self.lambda.gamma().embed(x, self.gamma(), &slots)
    }

    /// `i_C : C → Γ`.
    pub fn i_c(&self, x: &Series<B::Elem>) -> Series<B::Elem> {
        let slots: Vec<usize> = (0..self.tbound as usize).collect();
        self.c_part.gamma().embed(x, self.gamma(), &slots)
    }

    /// `π_Λ = ε_C ⊗ 1`.
    pub fn pi_lambda(&self, x: &Series<B::Elem>) -> Series<B::Elem> {
        let lg = self.lambda.gamma();
        let mut images = vec![lg.zero(); self.tbound as usize];
        images.extend((0..self.n as usize).map(|i| lg.var(i)));
        self.gamma().substitute(x, lg, &images, |c| c.clone()).expect("arity")
    }

    /// `π_C = 1 ⊗ ε_Λ`.
    pub fn pi_c(&self, x: &Series<B::Elem>) -> Series<B::Elem> {
        let cg = self.c_part.gamma();
        let mut images: Vec<_> = (0..self.tbound as usize).map(|i| cg.var(i)).collect();
        images.extend((0..self.n).map(|_| cg.zero()));
        self.gamma().substitute(x, cg, &images, |c| c.clone()).expect("arity")
    }

    /// The ring `Λ ⊗ C` (exterior variables first).
    pub fn lambda_c_ring(&self) -> SeriesRing<B> {
        let mut vars: Vec<VarSpec> = self.lambda.gamma().vars().vars.clone();
        vars.extend(t_vars(self.tbound));
        SeriesRing::new(self.gamma().base().clone(), VarTable::new(vars))
    }

    /// The right coaction `ρ^op = (π_Λ ⊗ π_C) ∘ ψ ∘ i_Λ` on each `b_(i)`, in `Λ ⊗ C`.
    pub fn lambda_c_coaction(&self) -> Vec<Series<B::Elem>> {
        let target = self.lambda_c_ring();
        let nt = self.tbound as usize;
        let nb = self.n as usize;
        let mut images = Vec::new();
        images.extend((0..nt).map(|_| target.zero()));
        images.extend((0..nb).map(|i| target.var(i)));
        images.extend((0..nt).map(|i| target.var(nb + i)));
        images.extend((0..nb).map(|_| target.zero()));
        (0..self.n)
            .map(|i| {
                let psi = self.hopf.psi(&self.gamma().var(self.b_index(i)));
                self.hopf.pair().substitute(&psi, &target, &images, |c| c.clone()).expect("arity")
            })
            .collect()
    }

    /// The same coaction read off from `b(t(X)) mod X^(p^n)` with the linear
    /// series `t(X) = Σ_i t_i X^(p^i)`.
    pub fn lambda_c_coaction_from_series(&self) -> Vec<Series<B::Elem>> {
        let lc = self.lambda_c_ring();
        let nvar = lc.nvars();
        let cap = self.p.pow(self.n) as u32;
        let mut vars = lc.vars().vars.clone();
        vars.push(VarSpec::even("X", 0, None));
        let ring = SeriesRing::new(lc.base().clone(), VarTable::new(vars).with_cap(cap));
        let nb = self.n as usize;
        let x = ring.var(nvar);
        let tx = ring.sum_all((0..self.n).map(|i| {
            let t = self.t_in(&ring, nb, i);
            ring.mul(&t, &ring.pow(&x, self.p.pow(i)))
        }));
        let bt = ring.sum_all((0..self.n).map(|j| ring.mul(&ring.var(j as usize), &self.frob(&ring, &tx, j))));
        (0..self.n).map(|i| self.strip_x(&ring, &bt, nvar, self.p.pow(i) as i32, &lc)).collect()
    }

    fn strip_x(&self, ring: &SeriesRing<B>, f: &Series<B::Elem>, xi: usize, k: i32, target: &SeriesRing<B>) -> Series<B::Elem> {
        let c = ring.coeff_of_var(f, xi, k);
        let slots: Vec<usize> = (0..target.nvars()).collect();
        self.restrict(&c, target, &slots)
    }

    /// Matrix `M` with `b_(i)^g = Σ_j M[i][j] b_(j)`, computed as `b(t(g)^{-1}(X))`
    /// where `t(g)(X) ≡ Σ_k a_k X^(p^k) mod X^(p^n)`.
    pub fn act_on_lambda(&self, tg: &[B::Elem]) -> Result<Vec<Vec<B::Elem>>> {
        let base = self.gamma().base().clone();
        let inv = self.invert_witness(tg)?;
        let n = self.n as usize;
        let mut m = vec![vec![base.zero(); n]; n];
        for i in 0..n {
            for j in 0..=i {
                m[i][j] = base.pow(&inv[i - j], self.p.pow(j as u32));
            }
        }
        Ok(m)
    }

    /// The same matrix through `ev(g) ∘ χ` applied to the coaction. The formal
    /// generators have `t_0 = 1`, so only strict witnesses (`a_0 = 1`) are points.
    pub fn act_on_lambda_via_chi(&self, tg: &[B::Elem]) -> Result<Vec<Vec<B::Elem>>> {
        let base = self.gamma().base().clone();
        let a = self.witness_coeffs(tg)?;
        if !base.is_one(&a[0]) {
            return Err(Error::InvalidWitness("the formal coaction needs a strict witness with a_0 = 1".into()));
        }
        let cg = self.c_part.gamma();
        let ev = |s: &Series<B::Elem>| -> B::Elem {
            let images: Vec<_> = (0..self.tbound as usize)
                .map(|k| cg.constant(a.get(k + 1).cloned().unwrap_or_else(|| base.zero())))
                .collect();
            cg.constant_term(&cg.substitute(s, cg, &images, |c| c.clone()).expect("arity"))
        };
        let coaction = self.lambda_c_coaction();
        let lc = self.lambda_c_ring();
        let n = self.n as usize;
        let mut m = vec![vec![base.zero(); n]; n];
        let c_slots: Vec<usize> = (n..lc.nvars()).collect();
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let mut e = vec![0i32; n];
                e[j] = 1;
                // Coefficient of b_(j) as an element of C.
                let mut part = Series::default();
                for (exp, c) in &coaction[i].terms {
                    if exp[..n] == e[..] {
                        part.terms.insert(c_slots.iter().map(|&s| exp[s]).collect::<Vec<i32>>(), c.clone());
                    }
                }
                *entry = ev(&self.c_part.chi(&part));
            }
        }
        Ok(m)
    }

    /// `a_0..a_(n-1)` padded with zeros; `a_0` must be a unit.
    fn witness_coeffs(&self, tg: &[B::Elem]) -> Result<Vec<B::Elem>> {
        let base = self.gamma().base();
        if tg.is_empty() || base.inv(&tg[0]).is_none() {
            return Err(Error::InvalidWitness("t(g) must have a unit leading coefficient".into()));
        }
        if tg.len() > self.n as usize {
            return Err(Error::InvalidWitness(format!("t(g) has {} coefficients, at most {} allowed", tg.len(), self.n)));
        }
        let mut a = tg.to_vec();
        a.resize(self.n as usize, base.zero());
        Ok(a)
    }

    /// Coefficients of the compositional inverse of `Σ a_k X^(p^k)` mod `X^(p^n)`.
    pub fn invert_witness(&self, tg: &[B::Elem]) -> Result<Vec<B::Elem>> {
        let base = self.gamma().base();
        let a = self.witness_coeffs(tg)?;
        let a0i = base.inv(&a[0]).expect("checked unit");
        // Σ_l a_l c_{m-l}^{p^l} = δ_{m0}; solve for c_m from the l = 0 term.
        let mut c: Vec<B::Elem> = vec![a0i.clone()];
        for m in 1..self.n as usize {
            let mut s = base.zero();
            for l in 1..=m {
                s = base.add(&s, &base.mul(&a[l], &base.pow(&c[m - l], self.p.pow(l as u32))));
            }
            c.push(base.neg(&base.mul(&a0i, &s)));
        }
        Ok(c)
    }

    /// `π_Λ ∘ i_Λ = id`, `π_C ∘ i_C = id`, and both projections and `i_C`
    /// commute with the comultiplications on generators.
    pub fn check_extension(&self) -> Vec<Check> {
        let lg = self.lambda.gamma();
        let cg = self.c_part.gamma();
        let mut out = Vec::new();
        let mut c = Check::pass("pi_lambda_i_lambda");
        for i in 0..self.n as usize {
            let b = lg.var(i);
            c = c.and(first_diff("pi_lambda_i_lambda", lg, &self.pi_lambda(&self.i_lambda(&b)), &b));
        }
        out.push(c);
        let mut c = Check::pass("pi_c_i_c");
        for i in 0..self.tbound as usize {
            let t = cg.var(i);
            c = c.and(first_diff("pi_c_i_c", cg, &self.pi_c(&self.i_c(&t)), &t));
        }
        out.push(c);
        let g = self.hopf.ngens();
        let (nt, nb) = (self.tbound as usize, self.n as usize);
        let pair = self.hopf.pair();
        // π ⊗ π on Γ ⊗ Γ.
        let proj = |keep_t: bool, target: &SeriesRing<B>| -> Vec<Series<B::Elem>> {
            let width = if keep_t { nt } else { nb };
            let mut images = Vec::new();
            for side in 0..2 {
                for i in 0..g {
                    let is_t = i < nt;
                    images.push(if is_t == keep_t {
                        let k = if is_t { i } else { i - nt };
                        target.var(side * width + k)
                    } else {
                        target.zero()
                    });
                }
            }
            images
        };
        let mut c_l = Check::pass("pi_lambda_coalgebra");
        let lpair = self.lambda.pair();
        let limg = proj(false, lpair);
        let mut c_c = Check::pass("pi_c_coalgebra");
        let cpair = self.c_part.pair();
        let cimg = proj(true, cpair);
        let mut c_i = Check::pass("i_c_coalgebra");
        for v in 0..g {
            let x = self.gamma().var(v);
            let px = self.hopf.psi(&x);
            let lhs = pair.substitute(&px, lpair, &limg, |c| c.clone()).expect("arity");
            let rhs = self.lambda.psi(&self.pi_lambda(&x));
            c_l = c_l.and(first_diff("pi_lambda_coalgebra", lpair, &lhs, &rhs));
            let lhs = pair.substitute(&px, cpair, &cimg, |c| c.clone()).expect("arity");
            let rhs = self.c_part.psi(&self.pi_c(&x));
            c_c = c_c.and(first_diff("pi_c_coalgebra", cpair, &lhs, &rhs));
            if v < nt {
                let t = cg.var(v);
                let lhs = self.hopf.psi(&self.i_c(&t));
                let psi_c = self.c_part.psi(&t);
                let mut slots: Vec<usize> = (0..nt).collect();
                slots.extend(g..g + nt);
                let rhs = cpair.embed(&psi_c, pair, &slots);
                c_i = c_i.and(first_diff("i_c_coalgebra", pair, &lhs, &rhs));
            }
        }
        out.push(c_l);
        out.push(c_c);
        out.push(c_i);
        out
    }
}

/// Expands `ψ(b(X)) ≡ i_r(b)(X) + i_l(b)(i_r(t)(X)) mod X^(p^n)` with
/// `t(X) = Σ^F t_i X^(p^i)` and reads off `ψ(b_(i))` as the coefficient of `X^(p^i)`.
pub fn derive_psi_from_coaction<B: Ring + PartialEq>(h: &CompositeHopf<B>, law: &Fgl<B>) -> Result<Vec<Series<B::Elem>>> {
    let p = h.p();
    let n = h.n();
    let cap = p.pow(n) as u32;
    if law.base() != h.gamma().base() {
        return Err(Error::BaseMismatch);
    }
    if law.p() != p {
        return Err(Error::Config(format!("law is {}-typical, algebra is over p = {p}", law.p())));
    }
    if law.trunc() < cap {
        return Err(Error::PrecisionExhausted(format!(
            "law truncated at degree {} but the congruence needs degree {cap}",
            law.trunc()
        )));
    }
    let r2 = law.ring2();
    let np = law.nparams();
    let low = r2.truncate_weight(law.law(), cap as i64);
    if !r2.eq_elem(&low, &r2.add(&r2.var(np), &r2.var(np + 1))) {
        return Err(Error::HeightTooLow(n));
    }
    let pair = h.hopf().pair();
    let g = h.hopf().ngens();
    let mut vars = law.params().to_vec();
    vars.extend(pair.vars().vars.iter().cloned());
    vars.push(VarSpec::even("X", 0, None));
    let ring = SeriesRing::new(pair.base().clone(), VarTable::new(vars).with_cap(cap));
    let xi = np + 2 * g;
    let x = ring.var(xi);
    let right_t = |i: u32| if i == 0 { ring.one() } else { ring.var(np + g + i as usize - 1) };
    let summands: Vec<_> = (0..n).map(|i| ring.mul(&right_t(i), &ring.pow(&x, p.pow(i)))).collect();
    let t_of_x = law.formal_sum(&ring, &summands)?;
    let mut total = ring.zero();
    for i in 0..n {
        let rb = ring.var(np + g + h.b_index(i));
        total = ring.add(&total, &ring.mul(&rb, &ring.pow(&x, p.pow(i))));
        let lb = ring.var(np + h.b_index(i));
        total = ring.add(&total, &ring.mul(&lb, &ring.pow(&t_of_x, p.pow(i))));
    }
    let mut images: Vec<_> = (0..np).map(|_| pair.zero()).collect();
    images.extend((0..2 * g).map(|i| pair.var(i)));
    images.push(pair.zero());
    (0..n)
        .map(|i| {
            let c = ring.coeff_of_var(&total, xi, p.pow(i) as i32);
            ring.substitute(&c, pair, &images, |c| c.clone())
        })
        .collect()
}
