//! Coefficient rings: finite fields, rationals, Laurent series and root towers.

mod fq;
mod laurent;
mod rational;
mod ring;
mod tower;

pub use fq::{default_modulus, is_irreducible, is_prime, Fq, FqEmbedding, PrimeField, ZERO};
pub use laurent::{Laurent, LaurentRing};
pub use rational::{p_valuation, reduce_mod_p, PLocalRational, Rationals};
pub(crate) use ring::split_top;
pub use ring::{ParseElem, Ring};
pub use tower::{Generator, Rule, Tower, TowerAutomorphism, TowerElem};
