use serde::Serialize;

use super::law::{check_homomorphism, Fgl, Provenance};
use crate::check::Check;
use crate::coeffring::{Fq, Ring};
use crate::error::{Error, Result};
use crate::gseries::Series;

/// An endomorphism `t(X) = sum^H a_i X^(p^i)` of a Honda law.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HondaEndo {
    pub height: u32,
    /// Coefficients `a_i` as field logs.
    pub coeffs: Vec<u32>,
    #[serde(skip)]
    pub series: Series<u32>,
}

impl HondaEndo {
    pub fn is_automorphism(&self) -> bool {
        self.coeffs.first().is_some_and(|&a| a != crate::coeffring::ZERO)
    }
}

impl Fgl<Fq> {
    /// The height `n` of a Honda law.
    pub fn honda_height(&self) -> Result<u32> {
        match self.provenance() {
            Provenance::Honda(n) => Ok(*n),
            _ => Err(Error::Config("not a Honda law".into())),
        }
    }

    /// `sum^H a_i X^(p^i)`, checked to be an endomorphism.
    pub fn honda_endo(&self, coeffs: &[u32]) -> Result<HondaEndo> {
        let n = self.honda_height()?;
        let fq = self.base();
        for a in coeffs {
            if !fq.in_subfield(a, n) {
                return Err(Error::CoefficientNotInFpn(fq.render(a)));
            }
        }
        let r1 = self.ring1();
        let summands: Vec<Series<u32>> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !fq.is_zero(a))
            .map(|(i, a)| r1.scale(&r1.var_pow(0, self.p().pow(i as u32) as i32), a))
            .collect();
        let series = self.formal_sum(&r1, &summands)?;
        let chk = self.check_endomorphism(&series)?;
        if !chk.ok {
            return Err(Error::CompatibilityFailure(chk.witness.unwrap_or_default()));
        }
        let mut coeffs = coeffs.to_vec();
        while coeffs.last().is_some_and(|a| fq.is_zero(a)) {
            coeffs.pop();
        }
        Ok(HondaEndo { height: n, coeffs, series })
    }

    pub fn check_endomorphism(&self, t: &Series<u32>) -> Result<Check> {
        check_homomorphism("endomorphism", self, self, t)
    }

    /// `a o b`.
    pub fn endo_compose(&self, a: &HondaEndo, b: &HondaEndo) -> Result<HondaEndo> {
        let s = self.ring1().compose(&a.series, &b.series)?;
        self.endo_from_series(s)
    }

    /// `a +_H b`.
    pub fn endo_add(&self, a: &HondaEndo, b: &HondaEndo) -> Result<HondaEndo> {
        let r1 = self.ring1();
        let s = self.apply(&r1, &a.series, &b.series)?;
        self.endo_from_series(s)
    }

    fn endo_from_series(&self, s: Series<u32>) -> Result<HondaEndo> {
        let n = self.honda_height()?;
        let coeffs = self
            .recognize_endo(&s)?
            .ok_or_else(|| Error::CompatibilityFailure("series is not a Honda endomorphism".into()))?;
        Ok(HondaEndo { height: n, coeffs, series: s })
    }

    /// Recovers `a_0, a_1, ...` with `s = sum^H a_i X^(p^i)` by peeling off
    /// the lowest term; `None` if `s` has no such form mod truncation.
    pub fn recognize_endo(&self, s: &Series<u32>) -> Result<Option<Vec<u32>>> {
        let n = self.honda_height()?;
        let fq = self.base();
        let r1 = self.ring1();
        let inv = self.formal_inverse()?;
        let mut rest = s.clone();
        let mut coeffs = Vec::new();
        let mut k = 0u32;
        while !rest.is_empty() {
            let d = self.p().pow(k);
            if d >= self.trunc() as u64 {
                return Ok(None);
            }
            let low = rest.terms.keys().map(|e| e[0]).min().unwrap();
            if (low as u64) < d {
                return Ok(None);
            }
            let a = r1.coeff(&rest, &[d as i32]);
            if !fq.in_subfield(&a, n) {
                return Ok(None);
            }
            coeffs.push(a);
            if !fq.is_zero(&a) {
                let mono = r1.scale(&r1.var_pow(0, d as i32), &a);
                let neg = r1.compose(&inv, &mono)?;
                rest = self.apply(&r1, &rest, &neg)?;
            }
            k += 1;
        }
        while coeffs.last().is_some_and(|a| fq.is_zero(a)) {
            coeffs.pop();
        }
        Ok(Some(coeffs))
    }
}
