pub mod coeffring;
pub mod check;
pub mod comod;
pub mod error;
pub mod fgl;
pub mod gseries;
pub mod hopfalg;
pub mod isofind;
pub mod report;
pub mod spaces;
pub mod cli;

pub use error::{Error, Result};
