use super::series::{tensor_ring, Series, SeriesRing};
use crate::coeffring::Ring;
use crate::error::{Error, Result};

/// `f (x) g` in the ring whose variables are those of `a` then those of `b`.
pub fn ts_tensor<R: Ring + PartialEq>(
    a: &SeriesRing<R>,
    f: &Series<R::Elem>,
    b: &SeriesRing<R>,
    g: &Series<R::Elem>,
    target: &SeriesRing<R>,
) -> Result<Series<R::Elem>> {
    if a.base() != b.base() || a.base() != target.base() {
        return Err(Error::BaseMismatch);
    }
    if target.nvars() != a.nvars() + b.nvars() {
        return Err(Error::VarMismatch);
    }
    let left: Vec<usize> = (0..a.nvars()).collect();
    let right: Vec<usize> = (a.nvars()..a.nvars() + b.nvars()).collect();
    let fl = a.embed(f, target, &left);
    let gr = b.embed(g, target, &right);
    Ok(target.mul(&fl, &gr))
}

/// The tensor ring of `a` and `b`.
pub fn tensor_of<R: Ring>(a: &SeriesRing<R>, b: &SeriesRing<R>) -> SeriesRing<R> {
    tensor_ring(a, b)
}

/// Symmetry `x (x) y -> (-1)^(|x||y|) y (x) x` from `A (x) B` to `B (x) A`,
/// where the first `split` variables of `source` come from `A`.
pub fn ts_swap<R: Ring>(
    source: &SeriesRing<R>,
    split: usize,
    f: &Series<R::Elem>,
    target: &SeriesRing<R>,
) -> Result<Series<R::Elem>> {
    let n = source.nvars();
    if target.nvars() != n {
        return Err(Error::VarMismatch);
    }
    let nb = n - split;
    let images: Vec<Series<R::Elem>> = (0..n)
        .map(|i| if i < split { target.var(nb + i) } else { target.var(i - split) })
        .collect();
    source.substitute(f, target, &images, |c| c.clone())
}
