//! Comodules over the Hopf algebroids of `hopfalg`: a generic checker and
//! tensor product, the dictionary between comodules over a function
//! algebroid and twisted modules, Milnor operations, and the assembly of
//! compatible `C`- and `Λ`-coactions into a comodule over the composite.

mod clambda;
mod comodule;
pub mod matrix;
mod milnor;
#[cfg(test)]
mod tests;

pub use clambda::{
    assemble, coaction_identification, compatibility_check, nine_diagram_check, psi_lambda_colinearity, random_clambda, split,
    CLambdaComodule, Factor, Words,
};
pub use comodule::{comod_to_twisted, random_invertible, random_scalar, twisted_to_comod, Comodule, RandomElem, TwistedModule};
pub use milnor::{
    action_from_coaction, exterior_regular, extract_milnor, milnor_derivation_check, milnor_twist_check, project_c, project_lambda,
    recognize_milnor, MilnorAction,
};
