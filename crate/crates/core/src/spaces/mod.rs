//! Lens-space and projective-space models, their comodule structures, and
//! the comparison of Chern classes along an isomorphism of formal group laws.

mod chern;
mod models;
#[cfg(test)]
mod tests;

pub use chern::{bhat_invariance_check, ChernData};
pub use models::{Flavor, LensModel, ProjModel};
