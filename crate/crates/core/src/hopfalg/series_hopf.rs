use super::HopfAlgebroid;
use crate::coeffring::Ring;
use crate::gseries::{Series, SeriesRing, VarSpec, VarTable};

/// A Hopf algebra over a coefficient ring `B` whose total ring is a graded
/// polynomial/exterior ring, with `ψ`, `χ` and `ε` given on generators.
///
/// Both units are the inclusion of constants, so `Γ ⊗_A Γ` is the plain
/// tensor ring with variables suffixed `_1`, `_2` (and `_3` for the triple).
#[derive(Clone, Debug)]
pub struct SeriesHopf<B: Ring> {
    name: String,
    gamma: SeriesRing<B>,
    pair: SeriesRing<B>,
    triple: SeriesRing<B>,
    psi_gens: Vec<Series<B::Elem>>,
    chi_gens: Vec<Series<B::Elem>>,
    eps_gens: Vec<B::Elem>,
    base_samples: Vec<B::Elem>,
}

impl<B: Ring> SeriesHopf<B> {
    /// Builds the ring data for generators `vars`; structure maps start as the
    /// primitive ones and are replaced through the setters.
    pub fn new(name: &str, base: B, vars: Vec<VarSpec>) -> Self {
        let table = VarTable::new(vars);
        let gamma = SeriesRing::new(base.clone(), table.clone());
        let pair = SeriesRing::new(base.clone(), table.renamed("_1").concat(&table.renamed("_2")));
        let triple = SeriesRing::new(
            base.clone(),
            table.renamed("_1").concat(&table.renamed("_2")).concat(&table.renamed("_3")),
        );
        let g = table.len();
        let psi_gens = (0..g).map(|i| pair.add(&pair.var(i), &pair.var(g + i))).collect();
        let chi_gens = (0..g).map(|i| gamma.neg(&gamma.var(i))).collect();
        let eps_gens = vec![base.zero(); g];
        let base_samples = vec![base.one(), base.from_int(2)];
        SeriesHopf { name: name.into(), gamma, pair, triple, psi_gens, chi_gens, eps_gens, base_samples }
    }

    /// The exterior Hopf algebra on primitive odd generators `b_(0..n)` of degree -1.
    pub fn exterior(base: B, n: u32) -> Self {
        let vars = (0..n).map(|i| VarSpec::odd(&format!("b{i}"), -1)).collect();
        Self::new(&format!("exterior(n={n})"), base, vars)
    }

    pub fn gamma(&self) -> &SeriesRing<B> {
        &self.gamma
    }
    pub fn ngens(&self) -> usize {
        self.gamma.nvars()
    }
    pub fn psi_gens(&self) -> &[Series<B::Elem>] {
        &self.psi_gens
    }
    pub fn chi_gens(&self) -> &[Series<B::Elem>] {
        &self.chi_gens
    }
    pub fn eps_gens(&self) -> &[B::Elem] {
        &self.eps_gens
    }

    pub fn set_psi(&mut self, i: usize, v: Series<B::Elem>) {
        self.psi_gens[i] = v;
    }
    pub fn set_chi(&mut self, i: usize, v: Series<B::Elem>) {
        self.chi_gens[i] = v;
    }
    pub fn set_eps(&mut self, i: usize, v: B::Elem) {
        self.eps_gens[i] = v;
    }
    pub fn set_base_samples(&mut self, v: Vec<B::Elem>) {
        self.base_samples = v;
    }

    /// Slots `[offset, offset + g)` of a tensor power.
    fn slots(&self, offset: usize) -> Vec<usize> {
        (offset..offset + self.ngens()).collect()
    }

    fn subst(
        &self,
        src: &SeriesRing<B>,
        f: &Series<B::Elem>,
        target: &SeriesRing<B>,
        images: impl IntoIterator<Item = Series<B::Elem>>,
    ) -> Series<B::Elem> {
        let images: Vec<_> = images.into_iter().collect();
        src.substitute(f, target, &images, |c| c.clone()).expect("images match the variable count")
    }

    /// Generator images embedded in `target` at `offset`.
    fn embedded(&self, gens: &[Series<B::Elem>], from: &SeriesRing<B>, target: &SeriesRing<B>, offset: usize) -> Vec<Series<B::Elem>> {
        let slots: Vec<usize> = (offset..offset + from.nvars()).collect();
        gens.iter().map(|s| from.embed(s, target, &slots)).collect()
    }

    fn vars_of(&self, target: &SeriesRing<B>, offset: usize) -> Vec<Series<B::Elem>> {
        (offset..offset + self.ngens()).map(|i| target.var(i)).collect()
    }
}

impl<B: Ring> HopfAlgebroid for SeriesHopf<B> {
    type Base = B;
    type Total = SeriesRing<B>;
    type Pair = SeriesRing<B>;
    type Triple = SeriesRing<B>;

    fn name(&self) -> String {
        self.name.clone()
    }
    fn base(&self) -> &B {
        self.gamma.base()
    }
    fn total(&self) -> &SeriesRing<B> {
        &self.gamma
    }
    fn pair(&self) -> &SeriesRing<B> {
        &self.pair
    }
    fn triple(&self) -> &SeriesRing<B> {
        &self.triple
    }
    fn eta_l(&self, a: &B::Elem) -> Series<B::Elem> {
        self.gamma.constant(a.clone())
    }
    fn eta_r(&self, a: &B::Elem) -> Series<B::Elem> {
        self.gamma.constant(a.clone())
    }
    fn psi(&self, x: &Series<B::Elem>) -> Series<B::Elem> {
        self.subst(&self.gamma, x, &self.pair, self.psi_gens.iter().cloned())
    }
    fn chi(&self, x: &Series<B::Elem>) -> Series<B::Elem> {
        self.subst(&self.gamma, x, &self.gamma, self.chi_gens.iter().cloned())
    }
    fn eps(&self, x: &Series<B::Elem>) -> B::Elem {
        let images: Vec<_> = self.eps_gens.iter().map(|c| self.gamma.constant(c.clone())).collect();
        let v = self.subst(&self.gamma, x, &self.gamma, images);
        self.gamma.constant_term(&v)
    }
    fn left(&self, x: &Series<B::Elem>) -> Series<B::Elem> {
        self.gamma.embed(x, &self.pair, &self.slots(0))
    }
    fn right(&self, x: &Series<B::Elem>) -> Series<B::Elem> {
        self.gamma.embed(x, &self.pair, &self.slots(self.ngens()))
    }
    fn psi_left(&self, y: &Series<B::Elem>) -> Series<B::Elem> {
        let g = self.ngens();
        let mut images = self.embedded(&self.psi_gens, &self.pair, &self.triple, 0);
        images.extend(self.vars_of(&self.triple, 2 * g));
        self.subst(&self.pair, y, &self.triple, images)
    }
    fn psi_right(&self, y: &Series<B::Elem>) -> Series<B::Elem> {
        let g = self.ngens();
        let mut images = self.vars_of(&self.triple, 0);
        images.extend(self.embedded(&self.psi_gens, &self.pair, &self.triple, g));
        self.subst(&self.pair, y, &self.triple, images)
    }
    fn eps_left(&self, y: &Series<B::Elem>) -> Series<B::Elem> {
        let mut images: Vec<_> = self.eps_gens.iter().map(|c| self.gamma.constant(c.clone())).collect();
        images.extend(self.vars_of(&self.gamma, 0));
        self.subst(&self.pair, y, &self.gamma, images)
    }
    fn eps_right(&self, y: &Series<B::Elem>) -> Series<B::Elem> {
        let mut images = self.vars_of(&self.gamma, 0);
        images.extend(self.eps_gens.iter().map(|c| self.gamma.constant(c.clone())));
        self.subst(&self.pair, y, &self.gamma, images)
    }
    fn mul_chi_left(&self, y: &Series<B::Elem>) -> Series<B::Elem> {
        let mut images = self.chi_gens.clone();
        images.extend(self.vars_of(&self.gamma, 0));
        self.subst(&self.pair, y, &self.gamma, images)
    }
    fn mul_chi_right(&self, y: &Series<B::Elem>) -> Series<B::Elem> {
        let mut images = self.vars_of(&self.gamma, 0);
        images.extend(self.chi_gens.iter().cloned());
        self.subst(&self.pair, y, &self.gamma, images)
    }
    fn base_samples(&self) -> Vec<B::Elem> {
        self.base_samples.clone()
    }
    fn generators(&self) -> Vec<(String, Series<B::Elem>)> {
        self.gamma.vars().vars.iter().enumerate().map(|(i, v)| (v.name.clone(), self.gamma.var(i))).collect()
    }
}
