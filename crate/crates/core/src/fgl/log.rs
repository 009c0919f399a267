//! Logarithms over the rationals and the exponentiation that turns them into laws.

use num_rational::BigRational;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::coeffring::{reduce_mod_p, Fq, Rationals, Ring};
use crate::error::{Error, Result};
use crate::gseries::{Series, SeriesRing, VarSpec, VarTable};

/// Hazewinkel logarithm coefficients `m_0, ..., m_depth` as polynomials in `v_1, ..., v_depth`.
#[derive(Clone, Debug)]
pub struct PTypicalLog {
    pub p: u64,
    pub depth: u32,
    /// `Q[v_1, ..., v_depth]`, with `|v_i| = 2(p^i - 1)`.
    pub ring: SeriesRing<Rationals>,
    pub coeffs: Vec<Series<BigRational>>,
}

impl PTypicalLog {
    /// Runs the recursion `p m_k = sum_{i<k} m_i v_(k-i)^(p^i)` from `m_0 = 1`.
    pub fn new(p: u64, depth: u32) -> Self {
        let vars = (1..=depth)
            .map(|i| VarSpec::param(&format!("v{i}"), 2 * (p.pow(i) as i32 - 1)))
            .collect();
        let ring = SeriesRing::new(Rationals, VarTable::new(vars));
        let inv_p = BigRational::new(1.into(), (p as i64).into());
        let mut coeffs = vec![ring.one()];
        for k in 1..=depth as usize {
            let mut acc = ring.zero();
            for (i, mi) in coeffs.iter().enumerate() {
                let v = ring.var_pow(k - i - 1, p.pow(i as u32) as i32);
                acc = ring.add(&acc, &ring.mul(mi, &v));
            }
            coeffs.push(ring.scale(&acc, &inv_p));
        }
        PTypicalLog { p, depth, ring, coeffs }
    }

    /// Re-checks the defining recursion exactly.
    pub fn check_recursion(&self) -> bool {
        let r = &self.ring;
        let pq = BigRational::from_integer((self.p as i64).into());
        (1..self.coeffs.len()).all(|k| {
            let lhs = r.scale(&self.coeffs[k], &pq);
            let rhs = r.sum_all((0..k).map(|i| {
                r.mul(&self.coeffs[i], &r.var_pow(k - i - 1, self.p.pow(i as u32) as i32))
            }));
            lhs == rhs
        })
    }
}

/// Largest `k` with `p^k < n`.
pub(crate) fn log_depth(p: u64, n: u32) -> u32 {
    let mut k = 0;
    while p.pow(k + 1) < n as u64 {
        k += 1;
    }
    k
}

/// Compositional inverse of `sum_k c_k X^(d_k)` (with `d_0 = 1`, `c_0 = 1`) by the
/// fixed point `E = X - sum_{k>0} c_k E^(d_k)`.
pub(crate) fn exp_from_log<R: Ring>(
    ring1: &SeriesRing<R>,
    xi: usize,
    terms: &[(u32, Series<R::Elem>)],
) -> Series<R::Elem> {
    let x = ring1.var(xi);
    let mut e = x.clone();
    loop {
        let mut next = x.clone();
        for (d, c) in terms.iter().filter(|(d, _)| *d > 1) {
            let pw = ring1.pow(&e, *d as u64);
            if pw.is_empty() {
                continue;
            }
            next = ring1.sub(&next, &ring1.mul(c, &pw));
        }
        if next == e {
            return e;
        }
        e = next;
    }
}

/// Builds `exp(log X + log Y)` over the rationals in `params ++ [X, Y]` (cap `n`)
/// and reduces it into `fq`.
pub(crate) fn law_from_log(
    params: &[VarSpec],
    log: &[(u32, Series<BigRational>)],
    fq: &Fq,
    n: u32,
) -> Result<Series<u32>> {
    let np = params.len();
    let mut v1 = params.to_vec();
    v1.push(VarSpec::even("X", 0, None));
    let ring1 = SeriesRing::new(Rationals, VarTable::new(v1).with_cap(n));
    let mut v2 = params.to_vec();
    v2.push(VarSpec::even("X", 0, None));
    v2.push(VarSpec::even("Y", 0, None));
    let ring2 = SeriesRing::new(Rationals, VarTable::new(v2).with_cap(n));
    let pslots: Vec<usize> = (0..np).collect();
    let pring = SeriesRing::new(Rationals, VarTable::new(params.to_vec()));

    // Coefficients embedded as constants in ring1.
    let terms1: Vec<(u32, Series<BigRational>)> =
        log.iter().map(|(d, c)| (*d, pring.embed(c, &ring1, &pslots))).collect();
    let exp = exp_from_log(&ring1, np, &terms1);

    let lx = log_series(&pring, log, &ring2, np);
    let ly = log_series(&pring, log, &ring2, np + 1);
    let s = ring2.add(&lx, &ly);
    let mut images: Vec<Series<BigRational>> = (0..np).map(|i| ring2.var(i)).collect();
    images.push(s);
    let law_q = ring1.substitute(&exp, &ring2, &images, |c| c.clone())?;
    reduce_series(&law_q, fq)
}

fn log_series(
    pring: &SeriesRing<Rationals>,
    log: &[(u32, Series<BigRational>)],
    target: &SeriesRing<Rationals>,
    var: usize,
) -> Series<BigRational> {
    let slots: Vec<usize> = (0..pring.nvars()).collect();
    target.sum_all(log.iter().map(|(d, c)| {
        let c2 = pring.embed(c, target, &slots);
        target.mul(&c2, &target.var_pow(var, *d as i32))
    }))
}

/// Coefficientwise reduction mod `p` into `fq`.
pub(crate) fn reduce_series(f: &Series<BigRational>, fq: &Fq) -> Result<Series<u32>> {
    let mut out = Series::default();
    for (e, c) in &f.terms {
        let r = reduce_mod_p(c, fq.p())?;
        if r != 0 {
            out.terms.insert(e.clone(), fq.from_int(r as i64));
        }
    }
    Ok(out)
}

/// The Honda logarithm `sum_i X^(p^(n i)) / p^i` below degree `n_trunc`.
pub(crate) fn honda_log(p: u64, height: u32, n_trunc: u32) -> Vec<(u32, Series<BigRational>)> {
    let pring = SeriesRing::new(Rationals, VarTable::new(vec![]));
    let mut out = Vec::new();
    let mut i = 0u32;
    loop {
        let d = p.pow(height * i);
        if d >= n_trunc as u64 {
            break;
        }
        let c = BigRational::new(BigInt::one(), BigInt::from(p).pow(i));
        out.push((d as u32, pring.constant(c)));
        i += 1;
    }
    out
}

/// Homogeneity and unit checks on an assignment `v_i -> a`, then `a` with unit
/// parameters set to 1, as a polynomial in the degree-0 parameters only.
pub(crate) fn dehomogenize(
    pring: &SeriesRing<Rationals>,
    p: u64,
    i: u32,
    a: &Series<BigRational>,
) -> Result<Series<BigRational>> {
    if i == 0 {
        return Err(Error::GradingMismatch("v_0 is not a generator".into()));
    }
    let want = 2 * (p.pow(i) as i64 - 1);
    if !a.is_empty() {
        match pring.homogeneous_degree(a) {
            Some(d) if d == want => {}
            got => {
                return Err(Error::GradingMismatch(format!(
                    "v{i} has degree {want}, assignment has {got:?}"
                )))
            }
        }
    }
    let mut out = Series::default();
    for (e, c) in &a.terms {
        let mut e2 = Vec::new();
        for (k, v) in pring.vars().vars.iter().enumerate() {
            if v.degree == 0 {
                e2.push(e[k]);
            } else if !v.unit && e[k] != 0 {
                return Err(Error::GradingMismatch(format!(
                    "{} has nonzero degree but is not a unit",
                    v.name
                )));
            }
        }
        let entry = out.terms.entry(e2).or_insert_with(BigRational::zero);
        *entry += c;
    }
    out.terms.retain(|_, c| !c.is_zero());
    Ok(out)
}
