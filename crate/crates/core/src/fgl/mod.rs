//! p-typical formal group laws: the Hazewinkel universal logarithm and its
//! specializations, Honda laws, formal sums, p-series and Honda endomorphisms.

mod endo;
mod law;
mod log;
#[cfg(test)]
mod tests;

pub use endo::HondaEndo;
pub use law::{
    check_homomorphism, default_trunc, first_diff, honda_fgl, specialize_hazewinkel, Fgl, Provenance,
    Specialization,
};
pub(crate) use law::ring_with;
pub use log::PTypicalLog;
