//! Exact rationals, used for logarithms before reduction mod p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ring::{ParseElem, Ring};
use crate::error::{Error, Result};

pub type PLocalRational = BigRational;

/// The field of rational numbers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn render(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

impl ParseElem for Rationals {
    fn parse(&self, s: &str) -> Result<BigRational> {
        s.trim()
            .parse::<BigRational>()
            .map_err(|e| Error::Parse(format!("{s}: {e}")))
    }
}

/// Image of `q` in `F_p`, failing when `p` divides the reduced denominator.
pub fn reduce_mod_p(q: &BigRational, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    let den = q.denom();
    if den.is_multiple_of(&pb) {
        return Err(Error::NotPIntegral(format!("{q} at p={p}")));
    }
    let num = q.numer().mod_floor(&pb).to_u64().unwrap();
    let den = den.mod_floor(&pb).to_u64().unwrap();
    let mut inv = 1u64;
    let mut base = den;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            inv = inv * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    Ok(num * inv % p)
}

/// The p-adic valuation of a nonzero rational.
pub fn p_valuation(q: &BigRational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let count = |mut x: BigInt| {
        let mut v = 0i64;
        x = x.abs();
        while x.is_multiple_of(&pb) {
            x /= &pb;
            v += 1;
        }
        v
    };
    Some(count(q.numer().clone()) - count(q.denom().clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduce_mod_p(&q(4, 5), 3).unwrap(), 2);
        assert!(matches!(reduce_mod_p(&q(1, 3), 3), Err(Error::NotPIntegral(_))));
        assert_eq!(reduce_mod_p(&q(6, 1), 3).unwrap(), 0);
        assert_eq!(reduce_mod_p(&q(-1, 2), 5).unwrap(), 2);
    }

    #[test]
    fn reduction_matches_brute_force_inverse() {
        for n in -20i64..20 {
            for d in 1i64..20 {
                if d % 7 == 0 {
                    continue;
                }
                let r = reduce_mod_p(&q(n, d), 7).unwrap();
                assert_eq!((r as i64 * d - n).rem_euclid(7), 0);
            }
        }
    }

    #[test]
    fn valuation() {
        assert_eq!(p_valuation(&q(9, 2), 3), Some(2));
        assert_eq!(p_valuation(&q(2, 27), 3), Some(-3));
    }
}
