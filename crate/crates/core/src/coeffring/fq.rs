//! Prime fields and finite fields `F_(p^m)` with log/Zech tables.

use std::fmt;
use std::sync::Arc;

use super::ring::{ParseElem, Ring};
use crate::error::{Error, Result};

/// Marker for the zero element in log representation.
pub const ZERO: u32 = u32::MAX;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The prime field `F_p` with elements stored as residues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not an odd prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn frobenius(&self, a: &u64) -> u64 {
        *a
    }
}

impl Ring for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
}

// Polynomials over F_p as coefficient vectors, low degree first.

fn trim(v: &mut Vec<u64>) {
    if v.is_empty() {
        v.push(0);
    }
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let df = f.len() - 1;
    let lead_inv = PrimeField { p }.inv(&f[df]).unwrap();
    while r.len() > df && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        if c != 0 {
            for (i, fi) in f.iter().enumerate() {
                let k = dr - df + i;
                r[k] = (r[k] + p * p - c * fi % p) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    poly_rem(&poly_mul(a, b, p), f, p)
}

fn poly_powmod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut base = poly_rem(a, f, p);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, f, p);
        }
        e >>= 1;
        if e > 0 {
            base = poly_mulmod(&base, &base, f, p);
        }
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Irreducibility over `F_p` by the distinct-degree criterion.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m == 0 || f[m] == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut h = x.clone();
    for _ in 1..=m / 2 {
        h = poly_powmod(&h, p, f, p);
        let mut d = h.clone();
        d.resize(d.len().max(2), 0);
        d[1] = (d[1] + p - 1) % p;
        let g = poly_gcd(f, &d, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// The lexicographically first monic irreducible polynomial of degree `m`,
/// enumerating lower coefficients as base-`p` digits of 0, 1, 2, ...
pub fn default_modulus(p: u64, m: u32) -> Vec<u64> {
    let count = p.pow(m);
    for k in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut r = k;
        for _ in 0..m {
            f.push(r % p);
            r /= p;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// A ring map between finite fields, tabulated on logarithms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqEmbedding {
    table: Vec<u32>,
}

impl FqEmbedding {
    pub fn apply(&self, a: u32) -> u32 {
        if a == ZERO {
            ZERO
        } else {
            self.table[a as usize]
        }
    }
}

struct FqData {
    p: u64,
    m: u32,
    q: u64,
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

/// The finite field `F_p[r]/(modulus)`.
///
/// Nonzero elements are stored as discrete logarithms to a fixed generator,
/// so multiplication is an addition of exponents and addition goes through
/// a Zech table.
#[derive(Clone)]
pub struct Fq(Arc<FqData>);

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq({},{},{:?})", self.0.p, self.0.m, self.0.modulus)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.modulus == other.0.modulus
    }
}

impl Fq {
    /// Field with the default modulus.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        PrimeField::new(p)?;
        if m == 0 || (p as f64).powi(m as i32) > 2.0e6 {
            return Err(Error::InvalidField(format!("degree {m} unsupported for p={p}")));
        }
        Self::with_modulus(p, default_modulus(p, m))
    }

    /// The prime field `F_p` in log representation.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    /// Smallest field containing `F_(p^n)` and `F_(p^(n+1))`.
    pub fn for_heights(p: u64, n: u32) -> Result<Self> {
        Self::new(p, n * (n + 1))
    }

    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        PrimeField::new(p)?;
        let m = modulus.len().saturating_sub(1) as u32;
        if m == 0 || modulus[m as usize] != 1 {
            return Err(Error::InvalidField("modulus must be monic of positive degree".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficients must be reduced".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidField(format!("{modulus:?} is reducible over F_{p}")));
        }
        let q = p.pow(m);
        let to_vec = |mut k: u64| {
            let mut v = Vec::with_capacity(m as usize);
            for _ in 0..m {
                v.push(k % p);
                k /= p;
            }
            v
        };
        let to_idx = |v: &[u64]| v.iter().rev().fold(0u64, |acc, &c| acc * p + c);
        let order = q - 1;
        let factors = prime_factors(order);
        let mut gen = None;
        for cand in 1..q {
            let v = to_vec(cand);
            if order == 1 || factors.iter().all(|r| {
                let w = poly_powmod(&v, order / r, &modulus, p);
                !(w.len() == 1 && w[0] == 1)
            }) {
                gen = Some(v);
                break;
            }
        }
        let gen = gen.expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![ZERO; q as usize];
        let mut cur = vec![1u64];
        for i in 0..order {
            let mut c = cur.clone();
            c.resize(m as usize, 0);
            let idx = to_idx(&c);
            exp.push(idx as u32);
            log[idx as usize] = i as u32;
            cur = poly_mulmod(&cur, &gen, &modulus, p);
        }
        let mut zech = vec![ZERO; order as usize];
        for i in 0..order as usize {
            let mut v = to_vec(exp[i] as u64);
            v[0] = (v[0] + 1) % p;
            zech[i] = log[to_idx(&v) as usize];
        }
        Ok(Fq(Arc::new(FqData { p, m, q, modulus, exp, log, zech })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn degree(&self) -> u32 {
        self.0.m
    }
    pub fn size(&self) -> u64 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// Coefficient vector (low degree first) of an element.
    pub fn to_vec(&self, a: u32) -> Vec<u64> {
        let mut k = if a == ZERO { 0 } else { self.0.exp[a as usize] as u64 };
        let mut v = Vec::with_capacity(self.0.m as usize);
        for _ in 0..self.0.m {
            v.push(k % self.0.p);
            k /= self.0.p;
        }
        v
    }

    pub fn from_vec(&self, v: &[u64]) -> u32 {
        let mut w: Vec<u64> = v.iter().map(|c| c % self.0.p).collect();
        if w.len() > self.0.m as usize {
            w = poly_rem(&w, &self.0.modulus, self.0.p);
        }
        let idx = w.iter().rev().fold(0u64, |acc, &c| acc * self.0.p + c);
        self.0.log[idx as usize]
    }

    /// Element with vector index `k` (base-`p` digits are the coefficients).
    pub fn from_index(&self, k: u64) -> u32 {
        self.0.log[(k % self.0.q) as usize]
    }

    pub fn index(&self, a: u32) -> u64 {
        if a == ZERO {
            0
        } else {
            self.0.exp[a as usize] as u64
        }
    }

    /// The class of the polynomial variable `r`.
    pub fn root(&self) -> u32 {
        self.from_vec(&[0, 1])
    }

    pub fn frobenius(&self, a: &u32) -> u32 {
        self.frobenius_pow(a, 1)
    }

    /// `a^(p^k)`.
    pub fn frobenius_pow(&self, a: &u32, k: u32) -> u32 {
        if *a == ZERO {
            return ZERO;
        }
        let ord = self.0.q - 1;
        let mut e = *a as u64;
        for _ in 0..k {
            e = e * self.0.p % ord;
        }
        e as u32
    }

    /// Whether `a` lies in the subfield `F_(p^k)`.
    pub fn in_subfield(&self, a: &u32, k: u32) -> bool {
        self.frobenius_pow(a, k) == *a
    }

    /// Whether `F_(p^k)` is a subfield.
    pub fn contains_subfield(&self, k: u32) -> bool {
        k > 0 && self.0.m.is_multiple_of(k)
    }

    /// A generator of the multiplicative group of `F_(p^k)`.
    pub fn subfield_generator(&self, k: u32) -> Option<u32> {
        if !self.contains_subfield(k) {
            return None;
        }
        let sub = self.0.p.pow(k) - 1;
        Some(((self.0.q - 1) / sub) as u32)
    }

    /// All `k`-th roots of `a`, in increasing log order.
    pub fn roots(&self, a: &u32, k: u64) -> Vec<u32> {
        if *a == ZERO {
            return vec![ZERO];
        }
        let ord = self.0.q - 1;
        let mut out: Vec<u32> = (0..ord)
            .filter(|x| x * k % ord == *a as u64)
            .map(|x| x as u32)
            .collect();
        out.sort_by_key(|x| self.index(*x));
        out
    }

    /// All elements in vector-index order.
    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.0.q).map(move |k| self.from_index(k))
    }

    /// A field embedding of `self` into `big`, sending `r` to the first root
    /// (in vector-index order) of this field's modulus.
    pub fn embedding_into(&self, big: &Fq) -> Result<FqEmbedding> {
        if big.p() != self.p() || !big.degree().is_multiple_of(self.degree()) {
            return Err(Error::InvalidField(format!("{self:?} does not embed in {big:?}")));
        }
        let root = big
            .elements()
            .find(|x| {
                let mut acc = big.zero();
                for c in self.0.modulus.iter().rev() {
                    acc = big.add(&big.mul(&acc, x), &big.from_int(*c as i64));
                }
                big.is_zero(&acc)
            })
            .ok_or_else(|| Error::InvalidField("modulus has no root in target".into()))?;
        let table = (0..self.0.q - 1)
            .map(|a| {
                let v = self.to_vec(a as u32);
                let mut acc = big.zero();
                for c in v.iter().rev() {
                    acc = big.add(&big.mul(&acc, &root), &big.from_int(*c as i64));
                }
                acc
            })
            .collect();
        Ok(FqEmbedding { table })
    }

    pub fn descriptor(&self) -> String {
        let m: Vec<String> = self.0.modulus.iter().map(|c| c.to_string()).collect();
        format!("Fq({},{},[{}])", self.0.p, self.0.m, m.join(","))
    }

    pub fn parse_descriptor(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s
            .strip_prefix("Fq(")
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad field descriptor {s}")))?;
        let (head, rest) = body
            .split_once(",[")
            .ok_or_else(|| Error::Parse(format!("bad field descriptor {s}")))?;
        let mut hp = head.split(',');
        let p: u64 = hp.next().and_then(|x| x.trim().parse().ok()).ok_or_else(|| Error::Parse(s.into()))?;
        let m: u32 = hp.next().and_then(|x| x.trim().parse().ok()).ok_or_else(|| Error::Parse(s.into()))?;
        let coeffs: std::result::Result<Vec<u64>, _> =
            rest.trim_end_matches(']').split(',').map(|x| x.trim().parse::<u64>()).collect();
        let coeffs = coeffs.map_err(|e| Error::Parse(e.to_string()))?;
        if coeffs.len() != m as usize + 1 {
            return Err(Error::Parse("modulus length does not match degree".into()));
        }
        Self::with_modulus(p, coeffs)
    }
}

impl Ring for Fq {
    type Elem = u32;
    fn zero(&self) -> u32 {
        ZERO
    }
    fn one(&self) -> u32 {
        0
    }
    fn from_int(&self, n: i64) -> u32 {
        let r = n.rem_euclid(self.0.p as i64) as u64;
        self.0.log[r as usize]
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        if *a == ZERO {
            return *b;
        }
        if *b == ZERO {
            return *a;
        }
        let ord = (self.0.q - 1) as u32;
        let d = if b >= a { b - a } else { b + ord - a };
        let z = self.0.zech[d as usize];
        if z == ZERO {
            ZERO
        } else {
            ((*a as u64 + z as u64) % ord as u64) as u32
        }
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == ZERO {
            return ZERO;
        }
        let ord = self.0.q - 1;
        ((*a as u64 + ord / 2) % ord) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == ZERO || *b == ZERO {
            return ZERO;
        }
        ((*a as u64 + *b as u64) % (self.0.q - 1)) as u32
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == ZERO
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == ZERO {
            None
        } else {
            let ord = self.0.q - 1;
            Some(((ord - *a as u64) % ord) as u32)
        }
    }
    fn pow(&self, a: &u32, e: u64) -> u32 {
        if e == 0 {
            return 0;
        }
        if *a == ZERO {
            return ZERO;
        }
        let ord = (self.0.q - 1) as u128;
        ((*a as u128 * e as u128) % ord) as u32
    }
    fn render(&self, a: &u32) -> String {
        let v = self.to_vec(*a);
        if self.0.m == 1 {
            return v[0].to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in v.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            parts.push(match (i, *c) {
                (0, c) => c.to_string(),
                (1, 1) => "r".to_string(),
                (1, c) => format!("{c}r"),
                (i, 1) => format!("r^{i}"),
                (i, c) => format!("{c}r^{i}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

impl ParseElem for Fq {
    fn parse(&self, s: &str) -> Result<u32> {
        let s = s.trim();
        let mut v = vec![0u64; self.0.m as usize];
        if s == "0" {
            return Ok(ZERO);
        }
        for term in s.split('+') {
            let term = term.trim();
            let (coef, pow) = if let Some(pos) = term.find('r') {
                let c = &term[..pos];
                let c: u64 = if c.is_empty() { 1 } else { c.parse().map_err(|_| Error::Parse(term.into()))? };
                let rest = &term[pos + 1..];
                let e: usize = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .and_then(|x| x.parse().ok())
                        .ok_or_else(|| Error::Parse(term.into()))?
                };
                (c, e)
            } else {
                (term.parse::<i64>().map_err(|_| Error::Parse(term.into()))?.rem_euclid(self.0.p as i64) as u64, 0)
            };
            if pow >= v.len() {
                return Err(Error::Parse(format!("power {pow} too large in {s}")));
            }
            v[pow] = (v[pow] + coef) % self.0.p;
        }
        Ok(self.from_vec(&v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_default_modulus_is_i_squared_plus_one() {
        let f = Fq::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let i = f.root();
        assert_eq!(f.frobenius(&i), f.neg(&i));
    }

    #[test]
    fn prime_field_inverse_and_fermat() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(f.inv(&2), Some(2));
        assert_eq!(f.pow(&2, 2), 1);
        assert!(PrimeField::new(4).is_err());
    }

    #[test]
    fn log_tables_agree_with_vector_arithmetic() {
        let f = Fq::new(5, 2).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                let va = f.to_vec(a);
                let vb = f.to_vec(b);
                let sum: Vec<u64> = va.iter().zip(&vb).map(|(x, y)| (x + y) % 5).collect();
                assert_eq!(f.add(&a, &b), f.from_vec(&sum));
                let prod = poly_rem(&poly_mul(&va, &vb, 5), f.modulus(), 5);
                assert_eq!(f.mul(&a, &b), f.from_vec(&prod));
            }
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let f = Fq::new(3, 6).unwrap();
        let g = Fq::parse_descriptor(&f.descriptor()).unwrap();
        assert_eq!(f, g);
        for a in f.elements().take(200) {
            assert_eq!(f.parse(&f.render(&a)).unwrap(), a);
        }
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = Fq::new(3, 2).unwrap();
        let big = Fq::new(3, 4).unwrap();
        let e = small.embedding_into(&big).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(e.apply(small.add(&a, &b)), big.add(&e.apply(a), &e.apply(b)));
                assert_eq!(e.apply(small.mul(&a, &b)), big.mul(&e.apply(a), &e.apply(b)));
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(Fq::with_modulus(3, vec![2, 0, 1]).is_err());
    }
}
