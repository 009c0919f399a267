//! Dense matrices over a `Ring`, acting on row vectors from the right.

use crate::coeffring::Ring;
use crate::error::{Error, Result};

pub type Mat<E> = Vec<Vec<E>>;

pub fn identity<R: Ring>(r: &R, n: usize) -> Mat<R::Elem> {
    (0..n).map(|i| (0..n).map(|j| if i == j { r.one() } else { r.zero() }).collect()).collect()
}

pub fn zeros<R: Ring>(r: &R, rows: usize, cols: usize) -> Mat<R::Elem> {
    vec![vec![r.zero(); cols]; rows]
}

pub fn mul<R: Ring>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    let cols = b.first().map_or(0, |row| row.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = r.zero();
                    for (k, x) in row.iter().enumerate() {
                        if !r.is_zero(x) && !r.is_zero(&b[k][j]) {
                            acc = r.add(&acc, &r.mul(x, &b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn add<R: Ring>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| r.add(u, v)).collect()).collect()
}

pub fn scale<R: Ring>(r: &R, a: &Mat<R::Elem>, c: &R::Elem) -> Mat<R::Elem> {
    a.iter().map(|row| row.iter().map(|x| r.mul(c, x)).collect()).collect()
}

pub fn map<R: Ring>(a: &Mat<R::Elem>, f: impl Fn(&R::Elem) -> R::Elem) -> Mat<R::Elem> {
    a.iter().map(|row| row.iter().map(&f).collect()).collect()
}

/// First position where the matrices differ.
pub fn first_difference<R: Ring>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Option<(usize, usize)> {
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        for (j, (u, v)) in x.iter().zip(y).enumerate() {
            if !r.eq_elem(u, v) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Row vector times matrix.
pub fn apply_row<R: Ring>(r: &R, v: &[R::Elem], a: &Mat<R::Elem>) -> Vec<R::Elem> {
    let cols = a.first().map_or(0, |row| row.len());
    let mut out = vec![r.zero(); cols];
    for (k, x) in v.iter().enumerate() {
        if r.is_zero(x) {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            if !r.is_zero(&a[k][j]) {
                *o = r.add(o, &r.mul(x, &a[k][j]));
            }
        }
    }
    out
}

/// Kronecker product, rows and columns indexed by `i * rows(b) + j`.
pub fn kron<R: Ring>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    let (na, nb) = (a.len(), b.len());
    let mut out = zeros(r, na * nb, na * nb);
    for i in 0..na {
        for k in 0..na {
            if r.is_zero(&a[i][k]) {
                continue;
            }
            for j in 0..nb {
                for l in 0..nb {
                    out[i * nb + j][k * nb + l] = r.mul(&a[i][k], &b[j][l]);
                }
            }
        }
    }
    out
}

/// Solves `Σ_i x_i rows[i] = target` over a field; `None` if inconsistent.
pub fn solve_combination<R: Ring>(r: &R, rows: &[Vec<R::Elem>], target: &[R::Elem]) -> Result<Option<Vec<R::Elem>>> {
    let unknowns = rows.len();
    let eqs = target.len();
    // Augmented system, one equation per coordinate.
    let mut sys: Vec<Vec<R::Elem>> = (0..eqs)
        .map(|k| {
            let mut e: Vec<R::Elem> = rows.iter().map(|row| row[k].clone()).collect();
            e.push(target[k].clone());
            e
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        let Some(pr) = (row..eqs).find(|&i| !r.is_zero(&sys[i][col])) else { continue };
        sys.swap(row, pr);
        let inv = r.inv(&sys[row][col]).ok_or(Error::DivisionByZero)?;
        sys[row] = sys[row].iter().map(|x| r.mul(&inv, x)).collect();
        for i in 0..eqs {
            if i != row && !r.is_zero(&sys[i][col]) {
                let f = sys[i][col].clone();
                let pivot_row = sys[row].clone();
                for (x, p) in sys[i].iter_mut().zip(&pivot_row) {
                    *x = r.sub(x, &r.mul(&f, p));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if sys[row..].iter().any(|e| !r.is_zero(&e[unknowns])) {
        return Ok(None);
    }
    let mut x = vec![r.zero(); unknowns];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = sys[i][unknowns].clone();
    }
    Ok(Some(x))
}
