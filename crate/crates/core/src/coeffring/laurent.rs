//! Laurent series in a uniformizer `t` over a finite field.
//!
//! Elements are exact Laurent polynomials unless they carry a precision
//! `O(t^prec)`. Inexact values only arise from non-terminating expansions
//! (roots of non-monomial units, inverses of non-monomials).

use super::fq::{Fq, ZERO};
use super::ring::{split_top, ParseElem, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Laurent {
    /// Exponent of `coeffs[0]`.
    pub val: i64,
    /// Coefficients in log form; first and last are nonzero when present.
    pub coeffs: Vec<u32>,
    /// Terms from `t^prec` on are unknown. `None` means exact.
    pub prec: Option<i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { val: 0, coeffs: Vec::new(), prec: None }
    }

    pub fn constant(c: u32) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: u32, k: i64) -> Self {
        if c == ZERO {
            Self::zero()
        } else {
            Laurent { val: k, coeffs: vec![c], prec: None }
        }
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Valuation of the known part; `None` when no term is known.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Highest exponent carrying a nonzero coefficient.
    pub fn top_degree(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeff(&self, k: i64) -> u32 {
        if k < self.val || k >= self.val + self.coeffs.len() as i64 {
            ZERO
        } else {
            self.coeffs[(k - self.val) as usize]
        }
    }

    /// The constant coefficient when the element is an exact constant.
    pub fn as_constant(&self) -> Option<u32> {
        if !self.is_exact() {
            return None;
        }
        if self.coeffs.is_empty() {
            return Some(ZERO);
        }
        if self.val == 0 && self.coeffs.len() == 1 {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    fn normalize(mut self) -> Self {
        if let Some(p) = self.prec {
            let keep = (p - self.val).max(0) as usize;
            if self.coeffs.len() > keep {
                self.coeffs.truncate(keep);
            }
        }
        let lead = self.coeffs.iter().position(|c| *c != ZERO);
        match lead {
            None => {
                self.coeffs.clear();
                self.val = self.prec.unwrap_or(0);
            }
            Some(i) => {
                if i > 0 {
                    self.coeffs.drain(..i);
                    self.val += i as i64;
                }
                while self.coeffs.last() == Some(&ZERO) {
                    self.coeffs.pop();
                }
            }
        }
        self
    }

    /// Substitutes `t -> t^f`.
    pub fn ramify(&self, f: u32) -> Self {
        if f == 1 || self.coeffs.is_empty() {
            let mut out = self.clone();
            if let Some(p) = out.prec {
                out.prec = Some(p * f as i64);
            }
            if out.coeffs.is_empty() {
                out.val *= f as i64;
            }
            return out;
        }
        let f = f as usize;
        let mut coeffs = vec![ZERO; (self.coeffs.len() - 1) * f + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * f] = *c;
        }
        Laurent {
            val: self.val * f as i64,
            coeffs,
            prec: self.prec.map(|p| p * f as i64),
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.val += k;
        out.prec = out.prec.map(|p| p + k);
        out
    }

    /// Drops all terms of exponent `>= k` and records the precision.
    pub fn truncate(&self, k: i64) -> Self {
        let prec = Some(self.prec.map_or(k, |p| p.min(k)));
        Laurent { val: self.val, coeffs: self.coeffs.clone(), prec }.normalize()
    }
}

/// Arithmetic context for [`Laurent`] values.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentRing {
    pub fq: Fq,
    /// Relative precision, in powers of `t`, of non-terminating expansions.
    pub relprec: i64,
}

impl LaurentRing {
    pub fn new(fq: Fq, relprec: i64) -> Self {
        LaurentRing { fq, relprec }
    }

    pub fn monomial(&self, c: u32, k: i64) -> Laurent {
        Laurent::monomial(c, k)
    }

    pub fn t_pow(&self, k: i64) -> Laurent {
        Laurent::monomial(0, k)
    }

    pub fn scale(&self, a: &Laurent, c: u32) -> Laurent {
        if c == ZERO {
            return Laurent { val: 0, coeffs: vec![], prec: a.prec }.normalize();
        }
        Laurent {
            val: a.val,
            coeffs: a.coeffs.iter().map(|x| self.fq.mul(x, &c)).collect(),
            prec: a.prec,
        }
    }

    /// Applies `c -> c^(p^k)` to every coefficient.
    pub fn frobenius_pow(&self, a: &Laurent, k: u32) -> Laurent {
        Laurent {
            val: a.val,
            coeffs: a.coeffs.iter().map(|x| self.fq.frobenius_pow(x, k)).collect(),
            prec: a.prec,
        }
    }

    /// Substitutes `t -> zeta * t`.
    pub fn scale_t(&self, a: &Laurent, zeta: u32) -> Laurent {
        Laurent {
            val: a.val,
            coeffs: a
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    let k = a.val + i as i64;
                    let z = if k >= 0 {
                        self.fq.pow(&zeta, k as u64)
                    } else {
                        self.fq.pow(&self.fq.inv(&zeta).unwrap(), (-k) as u64)
                    };
                    self.fq.mul(x, &z)
                })
                .collect(),
            prec: a.prec,
        }
    }

    fn mul_prec(&self, a: &Laurent, b: &Laurent) -> Option<i64> {
        let va = a.valuation().unwrap_or(a.val);
        let vb = b.valuation().unwrap_or(b.val);
        match (a.prec, b.prec) {
            (None, None) => None,
            (Some(pa), None) => Some(pa + vb),
            (None, Some(pb)) => Some(pb + va),
            (Some(pa), Some(pb)) => Some((pa + vb).min(pb + va)),
        }
    }

    /// Power series inverse of a unit `1 + m` with `v(m) > 0`, to `prec` terms.
    fn inv_one_plus(&self, a: &Laurent, prec: i64) -> Laurent {
        // Newton iteration x <- x (2 - a x).
        let mut x = Laurent::constant(0);
        let mut have = 1i64;
        let two = self.fq.from_int(2);
        while have < prec {
            have = (have * 2).min(prec);
            let at = a.truncate(have);
            let ax = self.mul(&at, &x).truncate(have);
            let corr = self.sub(&Laurent::constant(two), &ax);
            x = self.mul(&x, &corr).truncate(have);
            x.prec = None;
        }
        Laurent { prec: Some(prec), ..x }.normalize()
    }

    /// A `k`-th root of `1 + m` (`v(m) > 0`, `k` prime to p) with constant term 1.
    pub fn root_one_plus(&self, a: &Laurent, k: u64, prec: i64) -> Laurent {
        let kinv = self.fq.inv(&self.fq.from_int(k as i64)).expect("k prime to p");
        let mut y = Laurent::constant(0);
        for i in 1..prec {
            let r = self.sub(a, &self.pow(&y, k));
            let ri = r.coeff(i);
            if ri != ZERO {
                y = self.add(&y, &Laurent::monomial(self.fq.mul(&ri, &kinv), i));
            }
        }
        if a.is_exact() && self.pow(&y, k) == *a {
            return y;
        }
        y.truncate(prec)
    }

    pub fn render_fq(&self, c: u32) -> String {
        self.fq.render(&c)
    }
}

impl Ring for LaurentRing {
    type Elem = Laurent;
    fn zero(&self) -> Laurent {
        Laurent::zero()
    }
    fn one(&self) -> Laurent {
        Laurent::constant(0)
    }
    fn from_int(&self, n: i64) -> Laurent {
        Laurent::constant(self.fq.from_int(n))
    }
    fn add(&self, a: &Laurent, b: &Laurent) -> Laurent {
        if a.coeffs.is_empty() && a.prec.is_none() {
            return b.clone();
        }
        if b.coeffs.is_empty() && b.prec.is_none() {
            return a.clone();
        }
        let prec = match (a.prec, b.prec) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => Some(x.min(y)),
        };
        let lo = a.val.min(b.val);
        let hi = (a.val + a.coeffs.len() as i64).max(b.val + b.coeffs.len() as i64);
        let mut coeffs = vec![ZERO; (hi - lo).max(0) as usize];
        for (i, c) in a.coeffs.iter().enumerate() {
            coeffs[(a.val - lo) as usize + i] = *c;
        }
        for (i, c) in b.coeffs.iter().enumerate() {
            let k = (b.val - lo) as usize + i;
            coeffs[k] = self.fq.add(&coeffs[k], c);
        }
        Laurent { val: lo, coeffs, prec }.normalize()
    }
    fn neg(&self, a: &Laurent) -> Laurent {
        Laurent {
            val: a.val,
            coeffs: a.coeffs.iter().map(|c| self.fq.neg(c)).collect(),
            prec: a.prec,
        }
    }
    fn mul(&self, a: &Laurent, b: &Laurent) -> Laurent {
        let prec = self.mul_prec(a, b);
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return Laurent { val: 0, coeffs: vec![], prec }.normalize();
        }
        let mut coeffs = vec![ZERO; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if *x == ZERO {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if *y == ZERO {
                    continue;
                }
                let k = i + j;
                coeffs[k] = self.fq.add(&coeffs[k], &self.fq.mul(x, y));
            }
        }
        Laurent { val: a.val + b.val, coeffs, prec }.normalize()
    }
    fn is_zero(&self, a: &Laurent) -> bool {
        a.coeffs.is_empty()
    }
    fn inv(&self, a: &Laurent) -> Option<Laurent> {
        let v = a.valuation()?;
        let lead_inv = self.fq.inv(&a.coeffs[0])?;
        if a.is_monomial() {
            let prec = a.prec.map(|p| p - 2 * v);
            return Some(Laurent { val: -v, coeffs: vec![lead_inv], prec }.normalize());
        }
        let unit = self.scale(&a.shift(-v), lead_inv);
        let rel = match unit.prec {
            Some(p) => p.min(self.relprec),
            None => self.relprec,
        };
        let inv = self.inv_one_plus(&unit, rel);
        Some(self.scale(&inv, lead_inv).shift(-v))
    }
    fn render(&self, a: &Laurent) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in a.coeffs.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            let k = a.val + i as i64;
            let cs = self.fq.render(c);
            parts.push(if k == 0 { format!("[{cs}]") } else { format!("[{cs}]*t^{k}") });
        }
        if let Some(p) = a.prec {
            parts.push(format!("O(t^{p})"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl ParseElem for LaurentRing {
    fn parse(&self, s: &str) -> Result<Laurent> {
        let s = s.trim();
        let mut acc = Laurent::zero();
        if s == "0" {
            return Ok(acc);
        }
        for term in split_top(s, " + ") {
            let term = term.trim();
            if let Some(rest) = term.strip_prefix("O(t^") {
                let p: i64 = rest
                    .trim_end_matches(')')
                    .parse()
                    .map_err(|_| Error::Parse(term.into()))?;
                acc = acc.truncate(p);
                continue;
            }
            let body = term
                .strip_prefix('[')
                .ok_or_else(|| Error::Parse(format!("bad Laurent term {term}")))?;
            let close = body.find(']').ok_or_else(|| Error::Parse(term.into()))?;
            let c = self.fq.parse(&body[..close])?;
            let rest = &body[close + 1..];
            let k: i64 = if rest.is_empty() {
                0
            } else {
                rest.strip_prefix("*t^")
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| Error::Parse(term.into()))?
            };
            acc = self.add(&acc, &Laurent::monomial(c, k));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> LaurentRing {
        LaurentRing::new(Fq::new(3, 2).unwrap(), 8)
    }

    #[test]
    fn exact_inverse_of_monomial() {
        let r = ring();
        let a = r.monomial(r.fq.root(), -3);
        let b = r.inv(&a).unwrap();
        assert_eq!(r.mul(&a, &b), r.one());
        assert!(b.is_exact());
    }

    #[test]
    fn inverse_of_one_minus_t() {
        let r = ring();
        let a = r.sub(&r.one(), &r.t_pow(1));
        let b = r.inv(&a).unwrap();
        assert_eq!(b.prec, Some(8));
        for k in 0..8 {
            assert_eq!(b.coeff(k), 0);
        }
        let prod = r.mul(&a, &b);
        assert_eq!(prod, r.one().truncate(8));
    }

    #[test]
    fn square_root_of_one_plus_t() {
        let r = ring();
        let a = r.add(&r.one(), &r.t_pow(1));
        let y = r.root_one_plus(&a, 2, 8);
        assert_eq!(r.mul(&y, &y), a.truncate(8));
    }

    #[test]
    fn text_round_trip() {
        let r = ring();
        let a = r.add(&r.monomial(r.fq.root(), -2), &r.from_int(2)).truncate(5);
        let s = r.render(&a);
        assert_eq!(r.parse(&s).unwrap(), a);
        assert_eq!(r.parse(&r.render(&r.zero())).unwrap(), r.zero());
    }
}
