//! Weighted, graded, truncated multivariate series with Koszul signs.

mod io;
mod series;
mod tensor;
mod vars;

pub use series::{tensor_ring, univariate, Series, SeriesRing};
pub use tensor::{tensor_of, ts_swap, ts_tensor};
pub use vars::{VarSpec, VarTable};

#[cfg(test)]
mod tests;
