//! Order-by-order construction of an isomorphism from a deformation law to a
//! Honda law over a tower of Kummer and additive extensions, plus checks of
//! its compatibility with group actions.

mod solve;
mod witness;
#[cfg(test)]
mod tests;

pub use solve::{law_into_tower, solve_phi, verify_iso, FglIso, SolverStep};
pub(crate) use witness::endo_into_tower;
pub use witness::{
    check_equivariance, compose_to_fq, conjugate_law, scalar_deformation_witness, stabilizer_witness,
    validate_witness, ActionWitness,
};
