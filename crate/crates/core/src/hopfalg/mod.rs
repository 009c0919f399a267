//! Graded Hopf algebroids given by their structure maps, with an axiom
//! checker, and three families of instances: exterior Hopf algebras, the
//! function algebroid of a finite group acting on a ring, and the composite
//! of a formal `t`-algebra with an exterior part.

mod composite;
mod function;
mod series_hopf;
#[cfg(test)]
mod tests;

pub use composite::{derive_psi_from_coaction, CompositeHopf};
pub use function::{FiniteGroup, FunctionHopf, FunctionRing, RingAction};
pub use series_hopf::SeriesHopf;

use crate::check::Check;
use crate::coeffring::Ring;

/// A Hopf algebroid `(A, Γ)` presented through its structure maps.
///
/// `Pair` and `Triple` model `Γ ⊗_A Γ` and `Γ ⊗_A Γ ⊗_A Γ`; the plumbing maps
/// (`left`, `psi_left`, `mul_chi_left`, ...) are what the axioms need from them.
pub trait HopfAlgebroid {
    type Base: Ring;
    type Total: Ring;
    type Pair: Ring;
    type Triple: Ring;

    fn name(&self) -> String;
    fn base(&self) -> &Self::Base;
    fn total(&self) -> &Self::Total;
    fn pair(&self) -> &Self::Pair;
    fn triple(&self) -> &Self::Triple;

    fn eta_l(&self, a: &<Self::Base as Ring>::Elem) -> <Self::Total as Ring>::Elem;
    fn eta_r(&self, a: &<Self::Base as Ring>::Elem) -> <Self::Total as Ring>::Elem;
    fn psi(&self, x: &<Self::Total as Ring>::Elem) -> <Self::Pair as Ring>::Elem;
    fn chi(&self, x: &<Self::Total as Ring>::Elem) -> <Self::Total as Ring>::Elem;
    fn eps(&self, x: &<Self::Total as Ring>::Elem) -> <Self::Base as Ring>::Elem;

    /// `x ⊗ 1`.
    fn left(&self, x: &<Self::Total as Ring>::Elem) -> <Self::Pair as Ring>::Elem;
    /// `1 ⊗ x`.
    fn right(&self, x: &<Self::Total as Ring>::Elem) -> <Self::Pair as Ring>::Elem;
    /// `ψ ⊗ 1`.
    fn psi_left(&self, y: &<Self::Pair as Ring>::Elem) -> <Self::Triple as Ring>::Elem;
    /// `1 ⊗ ψ`.
    fn psi_right(&self, y: &<Self::Pair as Ring>::Elem) -> <Self::Triple as Ring>::Elem;
    /// `ε ⊗ 1` followed by `A ⊗_A Γ = Γ`.
    fn eps_left(&self, y: &<Self::Pair as Ring>::Elem) -> <Self::Total as Ring>::Elem;
    /// `1 ⊗ ε` followed by `Γ ⊗_A A = Γ`.
    fn eps_right(&self, y: &<Self::Pair as Ring>::Elem) -> <Self::Total as Ring>::Elem;
    /// Multiplication after `χ ⊗ 1`.
    fn mul_chi_left(&self, y: &<Self::Pair as Ring>::Elem) -> <Self::Total as Ring>::Elem;
    /// Multiplication after `1 ⊗ χ`.
    fn mul_chi_right(&self, y: &<Self::Pair as Ring>::Elem) -> <Self::Total as Ring>::Elem;

    /// Sample elements of `A`.
    fn base_samples(&self) -> Vec<<Self::Base as Ring>::Elem>;
    /// Named algebra generators of `Γ`.
    fn generators(&self) -> Vec<(String, <Self::Total as Ring>::Elem)>;
}

type TotalElem<H> = <<H as HopfAlgebroid>::Total as Ring>::Elem;

/// The generators plus `extra` random products of two or three of them.
pub fn sample_set<H: HopfAlgebroid>(h: &H, rng: &mut impl rand::Rng, extra: usize) -> Vec<(String, TotalElem<H>)> {
    let gens = h.generators();
    let mut out = gens.clone();
    if gens.is_empty() {
        return out;
    }
    let tot = h.total();
    for _ in 0..extra {
        let k = rng.gen_range(2..=3);
        let mut name = Vec::new();
        let mut acc = tot.one();
        for _ in 0..k {
            let (n, g) = &gens[rng.gen_range(0..gens.len())];
            name.push(n.clone());
            acc = tot.mul(&acc, g);
        }
        out.push((name.join("*"), acc));
    }
    out
}

fn compare<R: Ring>(ring: &R, name: &str, at: &str, a: &R::Elem, b: &R::Elem) -> Check {
    Check::from_bool(name, ring.eq_elem(a, b), || {
        format!("at {at}: {} vs {}", ring.render(a), ring.render(b))
    })
}

fn fold(name: &str, checks: impl IntoIterator<Item = Check>) -> Check {
    checks.into_iter().fold(Check::pass(name), Check::and)
}

/// Checks the Hopf algebroid axioms on `samples`, one entry per axiom.
///
/// Covers both counit laws, coassociativity, multiplicativity of `ψ` and `ε`
/// on consecutive sample pairs, the unit compatibilities of `ψ`, `ε` and `χ`
/// with `η_L` and `η_R`, `χ² = id` and both antipode conditions.
pub fn check_axioms<H: HopfAlgebroid>(h: &H, samples: &[(String, TotalElem<H>)]) -> Vec<Check> {
    let tot = h.total();
    let pair = h.pair();
    let base = h.base();
    let mut out = Vec::new();

    let psis: Vec<_> = samples.iter().map(|(_, x)| h.psi(x)).collect();
    out.push(fold(
        "counit_left",
        samples.iter().zip(&psis).map(|((n, x), px)| compare(tot, "counit_left", n, &h.eps_left(px), x)),
    ));
    out.push(fold(
        "counit_right",
        samples.iter().zip(&psis).map(|((n, x), px)| compare(tot, "counit_right", n, &h.eps_right(px), x)),
    ));
    out.push(fold(
        "coassociativity",
        samples.iter().zip(&psis).map(|((n, _), px)| {
            compare(h.triple(), "coassociativity", n, &h.psi_left(px), &h.psi_right(px))
        }),
    ));
    out.push(fold(
        "psi_multiplicative",
        samples.windows(2).zip(psis.windows(2)).map(|(s, p)| {
            let xy = tot.mul(&s[0].1, &s[1].1);
            let at = format!("{}*{}", s[0].0, s[1].0);
            compare(pair, "psi_multiplicative", &at, &h.psi(&xy), &pair.mul(&p[0], &p[1]))
        }),
    ));
    out.push(fold(
        "eps_multiplicative",
        samples.windows(2).map(|s| {
            let xy = tot.mul(&s[0].1, &s[1].1);
            let at = format!("{}*{}", s[0].0, s[1].0);
            compare(base, "eps_multiplicative", &at, &h.eps(&xy), &base.mul(&h.eps(&s[0].1), &h.eps(&s[1].1)))
        }),
    ));
    let bs = h.base_samples();
    let units = |name: &str, f: &dyn Fn(&<H::Base as Ring>::Elem) -> Check| {
        fold(name, bs.iter().map(f))
    };
    out.push(units("eps_eta", &|a| {
        let at = base.render(a);
        compare(base, "eps_eta", &at, &h.eps(&h.eta_l(a)), a)
            .and(compare(base, "eps_eta", &at, &h.eps(&h.eta_r(a)), a))
    }));
    out.push(units("psi_eta", &|a| {
        let at = base.render(a);
        compare(pair, "psi_eta", &at, &h.psi(&h.eta_l(a)), &h.left(&h.eta_l(a)))
            .and(compare(pair, "psi_eta", &at, &h.psi(&h.eta_r(a)), &h.right(&h.eta_r(a))))
    }));
    out.push(units("chi_eta", &|a| {
        let at = base.render(a);
        compare(tot, "chi_eta", &at, &h.chi(&h.eta_l(a)), &h.eta_r(a))
            .and(compare(tot, "chi_eta", &at, &h.chi(&h.eta_r(a)), &h.eta_l(a)))
    }));
    out.push(fold(
        "chi_involution",
        samples.iter().map(|(n, x)| compare(tot, "chi_involution", n, &h.chi(&h.chi(x)), x)),
    ));
    out.push(fold(
        "antipode_left",
        samples.iter().zip(&psis).map(|((n, x), px)| {
            compare(tot, "antipode_left", n, &h.mul_chi_left(px), &h.eta_r(&h.eps(x)))
        }),
    ));
    out.push(fold(
        "antipode_right",
        samples.iter().zip(&psis).map(|((n, x), px)| {
            compare(tot, "antipode_right", n, &h.mul_chi_right(px), &h.eta_l(&h.eps(x)))
        }),
    ));
    out
}

/// `check_axioms` on the generators plus `extra` random products drawn from `rng`.
pub fn check_axioms_sampled<H: HopfAlgebroid>(h: &H, rng: &mut impl rand::Rng, extra: usize) -> Vec<Check> {
    let samples = sample_set(h, rng, extra);
    check_axioms(h, &samples)
}
