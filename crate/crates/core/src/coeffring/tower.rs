//! Towers `F_q((t))[z_1, ..., z_r]` built by Kummer and additive root adjunctions.
//!
//! The base is `F_q((t))` with `u = t^e`. Each generator `z_j` satisfies either
//! `z^k = c` with `p` prime to `k`, or `z^P = z + c` with `P` a power of `p`,
//! where `c` lies in the tower below it. Elements are stored as coefficient
//! vectors over the base in mixed radix, with the last generator most
//! significant, so an element of a lower tower is a prefix of its image.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use super::fq::{Fq, ZERO};
use super::laurent::{Laurent, LaurentRing};
use super::ring::{split_top, ParseElem, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Rule {
    /// `z^k = c`.
    Kummer { k: u32, c: TowerElem },
    /// `z^degree = z + c`.
    Additive { degree: u32, c: TowerElem },
}

impl Rule {
    pub fn degree(&self) -> u32 {
        match self {
            Rule::Kummer { k, .. } => *k,
            Rule::Additive { degree, .. } => *degree,
        }
    }
    pub fn constant(&self) -> &TowerElem {
        match self {
            Rule::Kummer { c, .. } | Rule::Additive { c, .. } => c,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub name: String,
    pub rule: Rule,
}

#[derive(Debug)]
struct TowerData {
    base: LaurentRing,
    e: u32,
    uprec: u32,
    gens: Vec<Generator>,
    /// `strides[j]` is the product of the degrees of generators below `j`.
    strides: Vec<usize>,
}

/// Element of a tower: base coefficients indexed by generator exponents.
#[derive(Clone, Debug, Default)]
pub struct TowerElem {
    pub comps: Vec<Laurent>,
}

impl PartialEq for TowerElem {
    fn eq(&self, other: &Self) -> bool {
        let n = self.comps.len().max(other.comps.len());
        (0..n).all(|i| {
            let a = self.comps.get(i).filter(|x| !x.is_zero() || !x.is_exact());
            let b = other.comps.get(i).filter(|x| !x.is_zero() || !x.is_exact());
            a == b
        })
    }
}

impl TowerElem {
    pub fn base(l: Laurent) -> Self {
        TowerElem { comps: vec![l] }
    }

    /// The base coefficient when no generator appears.
    pub fn as_base(&self) -> Option<&Laurent> {
        if self.comps.iter().skip(1).all(|c| c.is_zero() && c.is_exact()) {
            self.comps.first().or(Some(&ZERO_LAURENT))
        } else {
            None
        }
    }

    pub fn is_exact(&self) -> bool {
        self.comps.iter().all(|c| c.is_exact())
    }

    /// Smallest known `t`-exponent among components.
    pub fn valuation(&self) -> Option<i64> {
        self.comps.iter().filter_map(|c| c.valuation()).min()
    }
}

static ZERO_LAURENT: Laurent = Laurent { val: 0, coeffs: Vec::new(), prec: None };

/// A tower of root adjunctions over `F_q((t))`.
#[derive(Clone)]
pub struct Tower(Arc<TowerData>);

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tower({})", self.descriptor())
    }
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.descriptor() == other.descriptor()
    }
}

impl Tower {
    /// `F_q((u))` with `u = t`.
    pub fn new(fq: Fq, uprec: u32) -> Self {
        Self::build(fq, 1, uprec, Vec::new())
    }

    fn build(fq: Fq, e: u32, uprec: u32, gens: Vec<Generator>) -> Self {
        let mut strides = vec![1usize];
        for g in &gens {
            let s = *strides.last().unwrap() * g.rule.degree() as usize;
            strides.push(s);
        }
        let relprec = uprec as i64 * e as i64;
        Tower(Arc::new(TowerData { base: LaurentRing::new(fq, relprec), e, uprec, gens, strides }))
    }

    pub fn fq(&self) -> &Fq {
        &self.0.base.fq
    }
    pub fn laurent(&self) -> &LaurentRing {
        &self.0.base
    }
    pub fn ramification(&self) -> u32 {
        self.0.e
    }
    pub fn uprec(&self) -> u32 {
        self.0.uprec
    }
    pub fn generators(&self) -> &[Generator] {
        &self.0.gens
    }
    /// Dimension over `F_q((t))`.
    pub fn rank(&self) -> usize {
        *self.0.strides.last().unwrap()
    }
    pub fn p(&self) -> u64 {
        self.fq().p()
    }

    pub fn from_laurent(&self, l: Laurent) -> TowerElem {
        TowerElem::base(l)
    }

    pub fn from_fq(&self, c: u32) -> TowerElem {
        TowerElem::base(Laurent::constant(c))
    }

    /// `t^k`.
    pub fn t_pow(&self, k: i64) -> TowerElem {
        TowerElem::base(Laurent::monomial(0, k))
    }

    /// `u^k = t^(e k)`.
    pub fn u_pow(&self, k: i64) -> TowerElem {
        self.t_pow(k * self.0.e as i64)
    }

    /// The generator `z_j`.
    pub fn gen(&self, j: usize) -> TowerElem {
        let mut comps = vec![Laurent::zero(); self.0.strides[j] + 1];
        comps[self.0.strides[j]] = Laurent::constant(0);
        TowerElem { comps }
    }

    fn padded(&self, a: &TowerElem, len: usize) -> Vec<Laurent> {
        let mut v = a.comps.clone();
        v.resize(len, Laurent::zero());
        v
    }

    fn add_vec(&self, a: &mut [Laurent], b: &[Laurent]) {
        let r = &self.0.base;
        for (x, y) in a.iter_mut().zip(b) {
            if !y.is_zero() || !y.is_exact() {
                *x = r.add(x, y);
            }
        }
    }

    fn is_zero_slice(a: &[Laurent]) -> bool {
        a.iter().all(|c| c.is_zero() && c.is_exact())
    }

    fn mul_level(&self, a: &[Laurent], b: &[Laurent], level: usize) -> Vec<Laurent> {
        if level == 0 {
            return vec![self.0.base.mul(&a[0], &b[0])];
        }
        let s = self.0.strides[level - 1];
        let gen = &self.0.gens[level - 1];
        let d = gen.rule.degree() as usize;
        let mut prod: Vec<Vec<Laurent>> = vec![vec![Laurent::zero(); s]; 2 * d - 1];
        let blocks_a: Vec<&[Laurent]> = a.chunks(s).collect();
        let blocks_b: Vec<&[Laurent]> = b.chunks(s).collect();
        for (i, ba) in blocks_a.iter().enumerate() {
            if Self::is_zero_slice(ba) {
                continue;
            }
            for (j, bb) in blocks_b.iter().enumerate() {
                if Self::is_zero_slice(bb) {
                    continue;
                }
                let m = self.mul_level(ba, bb, level - 1);
                self.add_vec(&mut prod[i + j], &m);
            }
        }
        let c = self.padded(gen.rule.constant(), s);
        for k in (d..2 * d - 1).rev() {
            if Self::is_zero_slice(&prod[k]) {
                continue;
            }
            let top = std::mem::replace(&mut prod[k], vec![Laurent::zero(); s]);
            match &gen.rule {
                Rule::Kummer { .. } => {
                    let m = self.mul_level(&top, &c, level - 1);
                    self.add_vec(&mut prod[k - d], &m);
                }
                Rule::Additive { .. } => {
                    self.add_vec(&mut prod[k - d + 1], &top);
                    let m = self.mul_level(&top, &c, level - 1);
                    self.add_vec(&mut prod[k - d], &m);
                }
            }
        }
        prod.truncate(d);
        prod.into_iter().flatten().collect()
    }

    /// Substitutes `t -> t^f` in every base coefficient.
    fn ramify_elem(a: &TowerElem, f: u32) -> TowerElem {
        TowerElem { comps: a.comps.iter().map(|c| c.ramify(f)).collect() }
    }

    /// Image of an element of `lower` in `self`, where `self` was obtained
    /// from `lower` by adjunctions and re-ramification.
    pub fn embed_from(&self, lower: &Tower, a: &TowerElem) -> TowerElem {
        let f = self.0.e / lower.0.e;
        Self::ramify_elem(a, f)
    }

    fn ramified(&self, f: u32) -> Tower {
        let gens = self
            .0
            .gens
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                rule: match &g.rule {
                    Rule::Kummer { k, c } => Rule::Kummer { k: *k, c: Self::ramify_elem(c, f) },
                    Rule::Additive { degree, c } => {
                        Rule::Additive { degree: *degree, c: Self::ramify_elem(c, f) }
                    }
                },
            })
            .collect();
        Self::build(self.fq().clone(), self.0.e * f, self.0.uprec, gens)
    }

    fn with_generator(&self, rule: Rule) -> Tower {
        let mut gens = self.0.gens.clone();
        let name = format!("z{}", gens.len() + 1);
        gens.push(Generator { name, rule });
        Self::build(self.fq().clone(), self.0.e, self.0.uprec, gens)
    }

    /// Adjoins a root of `z^k = c`.
    ///
    /// Returns the extended tower and the root. Monomial parts of `c` are
    /// handled by re-ramifying `t`, constants by a root in `F_q` when one
    /// exists, and a remaining unit `1 + m` by its binomial expansion.
    /// When `c` involves earlier generators the root is adjoined symbolically.
    pub fn adjoin_kummer(&self, k: u32, c: &TowerElem) -> Result<(Tower, TowerElem)> {
        let p = self.p();
        if k == 0 || (k as u64).is_multiple_of(p) {
            return Err(Error::UnsupportedExtension(format!(
                "Kummer degree {k} is divisible by p={p}"
            )));
        }
        if k == 1 {
            return Ok((self.clone(), c.clone()));
        }
        let base = match c.as_base() {
            Some(b) => b.clone(),
            None => {
                let t = self.with_generator(Rule::Kummer { k, c: c.clone() });
                let z = t.gen(t.0.gens.len() - 1);
                return Ok((t, z));
            }
        };
        let v = base
            .valuation()
            .ok_or_else(|| Error::UnsupportedExtension("Kummer constant must be a unit".into()))?;
        let f = (k as i64 / (k as i64).gcd(&v)) as u32;
        let tower = if f > 1 { self.ramified(f) } else { self.clone() };
        let base = base.ramify(f);
        let v = v * f as i64;
        let lr = tower.laurent();
        let fq = tower.fq().clone();
        let gamma = base.coeffs[0];
        let unit = lr.scale(&base.shift(-v), fq.inv(&gamma).unwrap());
        let unit_root = if unit == lr.one() {
            lr.one()
        } else {
            let rel = tower.0.uprec as i64 * tower.0.e as i64;
            lr.root_one_plus(&unit, k as u64, rel)
        };
        let monomial = Laurent::monomial(0, v / k as i64);
        let partial = lr.mul(&monomial, &unit_root);
        match fq.roots(&gamma, k as u64).first() {
            Some(r) => {
                let root = lr.scale(&partial, *r);
                Ok((tower, TowerElem::base(root)))
            }
            None => {
                let ext = tower.with_generator(Rule::Kummer { k, c: tower.from_fq(gamma) });
                let z = ext.gen(ext.0.gens.len() - 1);
                let root = ext.mul(&z, &TowerElem::base(partial));
                Ok((ext, root))
            }
        }
    }

    /// Adjoins a root of `z^degree = z + c`, `degree` a power of `p`.
    ///
    /// Terms of a base constant `c` that are `w^P - w` for a Laurent
    /// polynomial `w` are absorbed into the root, a remaining constant in
    /// `F_q` is solved in place when possible, and anything left gets a new
    /// generator.
    pub fn adjoin_additive(&self, degree: u32, c: &TowerElem) -> Result<(Tower, TowerElem)> {
        let p = self.p() as u32;
        let mut d = degree;
        while d > 1 && d.is_multiple_of(p) {
            d /= p;
        }
        if d != 1 || degree == 1 {
            return Err(Error::UnsupportedExtension(format!(
                "additive degree {degree} is not a power of p={p}"
            )));
        }
        if !c.is_exact() && c.comps.iter().all(|x| x.is_zero()) {
            return Err(Error::PrecisionExhausted(
                "additive constant has no known terms".into(),
            ));
        }
        if self.is_zero(c) && c.is_exact() {
            return Ok((self.clone(), self.zero()));
        }
        let (partial, c) = match c.as_base() {
            Some(b) if b.is_exact() => {
                let (z, rest) = self.reduce_additive(degree, b);
                (TowerElem::base(z), TowerElem::base(rest))
            }
            _ => (self.zero(), c.clone()),
        };
        if self.is_zero(&c) {
            return Ok((self.clone(), partial));
        }
        if let Some(Some(g)) = c.as_base().map(|b| b.as_constant()) {
            let fq = self.fq();
            for x in fq.elements() {
                if fq.sub(&fq.pow(&x, degree as u64), &x) == g {
                    return Ok((self.clone(), self.add(&partial, &self.from_fq(x))));
                }
            }
        }
        let ext = self.with_generator(Rule::Additive { degree, c });
        let z = ext.gen(ext.0.gens.len() - 1);
        Ok((ext.clone(), ext.add(&partial, &z)))
    }

    /// Splits off a Laurent polynomial `w` with `w^P - w` matching the terms of
    /// `c` whose exponents are nonzero multiples of `P`, working inward from the
    /// highest and the lowest exponent. Returns `w` and the remaining constant.
    fn reduce_additive(&self, degree: u32, c: &Laurent) -> (Laurent, Laurent) {
        let lr = &self.0.base;
        let fq = lr.fq.clone();
        let d = degree as i64;
        let mut n = 0u32;
        while self.p().pow(n) < degree as u64 {
            n += 1;
        }
        let root_k = (fq.degree() - n % fq.degree()) % fq.degree();
        let mut w = Laurent::zero();
        let mut rest = c.clone();
        loop {
            let pick = match (rest.top_degree(), rest.valuation()) {
                (Some(top), _) if top > 0 && top % d == 0 => top,
                (_, Some(low)) if low < 0 && low % d == 0 => low,
                _ => break,
            };
            let b = fq.frobenius_pow(&rest.coeff(pick), root_k);
            let mono = Laurent::monomial(b, pick / d);
            w = lr.add(&w, &mono);
            let correction = lr.sub(&lr.pow(&mono, degree as u64), &mono);
            rest = lr.sub(&rest, &correction);
        }
        (w, rest)
    }

    /// Checks the defining relation of every generator by normal-form reduction.
    pub fn check_rules(&self) -> bool {
        self.0.gens.iter().enumerate().all(|(j, g)| {
            let z = self.gen(j);
            match &g.rule {
                Rule::Kummer { k, c } => self.pow(&z, *k as u64) == *c,
                Rule::Additive { degree, c } => {
                    self.pow(&z, *degree as u64) == self.add(&z, c)
                }
            }
        })
    }

    /// Applies `f` to every base coefficient.
    pub fn map_base(&self, a: &TowerElem, f: impl Fn(&Laurent) -> Laurent) -> TowerElem {
        TowerElem { comps: a.comps.iter().map(f).collect() }
    }

    /// Canonical text descriptor.
    pub fn descriptor(&self) -> String {
        let mut s = format!("{}[t;{};{}]", self.fq().descriptor(), self.0.e, self.0.uprec);
        for g in &self.0.gens {
            let (lhs, rhs) = match &g.rule {
                Rule::Kummer { k, c } => (format!("{}^{}", g.name, k), format!("({})", self.render(c))),
                Rule::Additive { degree, c } => (
                    format!("{}^{}", g.name, degree),
                    format!("{}+({})", g.name, self.render(c)),
                ),
            };
            s.push_str(&format!("[{}:{}={}]", g.name, lhs, rhs));
        }
        s
    }

    pub fn parse_descriptor(s: &str) -> Result<Tower> {
        let s = s.trim();
        let groups = top_groups(s)?;
        let (head, rest) = groups.split_first().ok_or_else(|| Error::Parse(s.into()))?;
        let fq = Fq::parse_descriptor(head)?;
        let (tgroup, gens) = rest.split_first().ok_or_else(|| Error::Parse(s.into()))?;
        let tparts: Vec<&str> = tgroup.trim_start_matches('[').trim_end_matches(']').split(';').collect();
        if tparts.len() != 3 || tparts[0] != "t" {
            return Err(Error::Parse(format!("bad uniformizer group {tgroup}")));
        }
        let e: u32 = tparts[1].parse().map_err(|_| Error::Parse(tgroup.clone()))?;
        let uprec: u32 = tparts[2].parse().map_err(|_| Error::Parse(tgroup.clone()))?;
        let mut tower = Self::build(fq, e, uprec, Vec::new());
        for g in gens {
            let body = &g[1..g.len() - 1];
            let (name, eqn) = body.split_once(':').ok_or_else(|| Error::Parse(g.clone()))?;
            let (lhs, rhs) = eqn.split_once('=').ok_or_else(|| Error::Parse(g.clone()))?;
            let degree: u32 = lhs
                .strip_prefix(name)
                .and_then(|x| x.strip_prefix('^'))
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| Error::Parse(g.clone()))?;
            let rule = if let Some(c) = rhs.strip_prefix(&format!("{name}+(")) {
                let c = tower.parse(c.strip_suffix(')').ok_or_else(|| Error::Parse(g.clone()))?)?;
                Rule::Additive { degree, c }
            } else if let Some(c) = rhs.strip_prefix('(') {
                let c = tower.parse(c.strip_suffix(')').ok_or_else(|| Error::Parse(g.clone()))?)?;
                Rule::Kummer { k: degree, c }
            } else {
                return Err(Error::UnsupportedExtension(format!("rule shape {rhs}")));
            };
            let mut gens = tower.0.gens.clone();
            gens.push(Generator { name: name.to_string(), rule });
            tower = Self::build(tower.fq().clone(), e, uprec, gens);
        }
        Ok(tower)
    }

    /// Exponent vector of component index `idx`.
    pub fn exponents(&self, mut idx: usize) -> Vec<u32> {
        self.0
            .gens
            .iter()
            .map(|g| {
                let d = g.rule.degree() as usize;
                let a = idx % d;
                idx /= d;
                a as u32
            })
            .collect()
    }

    /// Truncates every component at `t^k`.
    pub fn truncate(&self, a: &TowerElem, k: i64) -> TowerElem {
        self.map_base(a, |c| c.truncate(k))
    }
}

fn top_groups(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' | '{' => {
                if depth == 0 && ch == '[' && i > start {
                    out.push(s[start..i].to_string());
                    start = i;
                }
                depth += 1;
            }
            ')' | ']' | '}' => {
                depth -= 1;
                if depth == 0 && ch == ']' {
                    out.push(s[start..=i].to_string());
                    start = i + 1;
                }
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in {s}")));
    }
    if start < s.len() {
        out.push(s[start..].to_string());
    }
    Ok(out)
}

impl Ring for Tower {
    type Elem = TowerElem;
    fn zero(&self) -> TowerElem {
        TowerElem::default()
    }
    fn one(&self) -> TowerElem {
        TowerElem::base(Laurent::constant(0))
    }
    fn from_int(&self, n: i64) -> TowerElem {
        TowerElem::base(self.0.base.from_int(n))
    }
    fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        let (long, short) = if a.comps.len() >= b.comps.len() { (a, b) } else { (b, a) };
        let mut comps = long.comps.clone();
        self.add_vec(&mut comps, &short.comps);
        TowerElem { comps }
    }
    fn neg(&self, a: &TowerElem) -> TowerElem {
        self.map_base(a, |c| self.0.base.neg(c))
    }
    fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        if let (Some(x), Some(y)) = (a.as_base(), b.as_base()) {
            return TowerElem::base(self.0.base.mul(x, y));
        }
        if let Some(x) = a.as_base() {
            return self.map_base(b, |c| self.0.base.mul(x, c));
        }
        if let Some(y) = b.as_base() {
            return self.map_base(a, |c| self.0.base.mul(c, y));
        }
        let n = self.rank();
        let level = self.0.gens.len();
        let comps = self.mul_level(&self.padded(a, n), &self.padded(b, n), level);
        TowerElem { comps }
    }
    fn is_zero(&self, a: &TowerElem) -> bool {
        a.comps.iter().all(|c| c.is_zero())
    }
    /// Inverts base elements and monomials `a z^m` whose generators are
    /// Kummer with invertible constants; `None` otherwise.
    fn inv(&self, a: &TowerElem) -> Option<TowerElem> {
        if let Some(b) = a.as_base() {
            return self.0.base.inv(b).map(TowerElem::base);
        }
        let mut nz = a.comps.iter().enumerate().filter(|(_, c)| !c.is_zero() || !c.is_exact());
        let (idx, coef) = nz.next()?;
        if nz.next().is_some() {
            return None;
        }
        let mut acc = TowerElem::base(self.0.base.inv(coef)?);
        for (j, m) in self.exponents(idx).into_iter().enumerate() {
            if m == 0 {
                continue;
            }
            match &self.0.gens[j].rule {
                Rule::Kummer { k, c } => {
                    // z^-m = z^(k-m) / c
                    let ci = self.inv(c)?;
                    acc = self.mul(&acc, &self.mul(&self.pow(&self.gen(j), (k - m) as u64), &ci));
                }
                Rule::Additive { .. } => return None,
            }
        }
        Some(acc)
    }
    fn render(&self, a: &TowerElem) -> String {
        let mut parts = Vec::new();
        for (idx, c) in a.comps.iter().enumerate() {
            if c.is_zero() && c.is_exact() {
                continue;
            }
            let mut term = format!("{{{}}}", self.0.base.render(c));
            for (j, e) in self.exponents(idx).iter().enumerate() {
                match e {
                    0 => {}
                    1 => term.push_str(&format!("*{}", self.0.gens[j].name)),
                    e => term.push_str(&format!("*{}^{}", self.0.gens[j].name, e)),
                }
            }
            parts.push(term);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl ParseElem for Tower {
    fn parse(&self, s: &str) -> Result<TowerElem> {
        let s = s.trim();
        let mut acc = self.zero();
        if s == "0" {
            return Ok(acc);
        }
        for term in split_top(s, " + ") {
            let term = term.trim();
            let close = term.rfind('}').ok_or_else(|| Error::Parse(format!("bad tower term {term}")))?;
            if !term.starts_with('{') {
                return Err(Error::Parse(format!("bad tower term {term}")));
            }
            let coeff = self.0.base.parse(&term[1..close])?;
            let mut idx = 0usize;
            for factor in term[close + 1..].split('*').filter(|x| !x.is_empty()) {
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<usize>().map_err(|_| Error::Parse(factor.into()))?),
                    None => (factor, 1),
                };
                let j = self
                    .0
                    .gens
                    .iter()
                    .position(|g| g.name == name)
                    .ok_or_else(|| Error::Parse(format!("unknown generator {name}")))?;
                if e >= self.0.gens[j].rule.degree() as usize {
                    return Err(Error::Parse(format!("exponent of {name} not reduced")));
                }
                idx += e * self.0.strides[j];
            }
            let mut comps = vec![Laurent::zero(); idx + 1];
            comps[idx] = coeff;
            acc = self.add(&acc, &TowerElem { comps });
        }
        Ok(acc)
    }
}

/// A field automorphism of a tower: `c -> c^(p^frob)` on `F_q`,
/// `t -> t_scale * t`, and prescribed images of the generators.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerAutomorphism {
    pub frob: u32,
    pub t_scale: u32,
    pub images: Vec<TowerElem>,
}

impl TowerAutomorphism {
    pub fn identity(tower: &Tower) -> Self {
        TowerAutomorphism {
            frob: 0,
            t_scale: 0,
            images: (0..tower.generators().len()).map(|j| tower.gen(j)).collect(),
        }
    }

    fn apply_base(&self, tower: &Tower, c: &Laurent) -> Laurent {
        let lr = tower.laurent();
        let c = lr.frobenius_pow(c, self.frob);
        if self.t_scale == 0 {
            c
        } else {
            lr.scale_t(&c, self.t_scale)
        }
    }

    fn apply_level(&self, tower: &Tower, a: &[Laurent], level: usize) -> TowerElem {
        if level == 0 {
            return TowerElem::base(self.apply_base(tower, &a[0]));
        }
        let s = tower.0.strides[level - 1];
        let z = &self.images[level - 1];
        let blocks: Vec<&[Laurent]> = a.chunks(s).collect();
        let mut acc = tower.zero();
        for b in blocks.iter().rev() {
            acc = tower.mul(&acc, z);
            if !Tower::is_zero_slice(b) {
                acc = tower.add(&acc, &self.apply_level(tower, b, level - 1));
            }
        }
        acc
    }

    pub fn apply(&self, tower: &Tower, a: &TowerElem) -> TowerElem {
        let n = tower.rank();
        let level = tower.generators().len();
        self.apply_level(tower, &tower.padded(a, n), level)
    }

    /// Checks that the images satisfy the transformed defining relations.
    pub fn validate(&self, tower: &Tower) -> Result<()> {
        let gens = tower.generators();
        if self.images.len() != gens.len() {
            return Err(Error::InvalidWitness("wrong number of generator images".into()));
        }
        let fq = tower.fq();
        if self.t_scale == ZERO {
            return Err(Error::InvalidWitness("t must map to a unit multiple of t".into()));
        }
        let _ = fq;
        for (j, g) in gens.iter().enumerate() {
            let z = &self.images[j];
            let c = self.apply(tower, g.rule.constant());
            let ok = match &g.rule {
                Rule::Kummer { k, .. } => tower.pow(z, *k as u64) == c,
                Rule::Additive { degree, .. } => tower.pow(z, *degree as u64) == tower.add(z, &c),
            };
            if !ok {
                return Err(Error::InvalidWitness(format!(
                    "image of {} violates its defining relation",
                    g.name
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9_tower() -> Tower {
        Tower::new(Fq::new(3, 2).unwrap(), 8)
    }

    #[test]
    fn square_root_of_u_ramifies() {
        let k = f9_tower();
        let (l, z) = k.adjoin_kummer(2, &k.u_pow(1)).unwrap();
        assert_eq!(l.ramification(), 2);
        assert_eq!(z, l.t_pow(1));
        assert_eq!(l.pow(&z, 2), l.u_pow(1));
        assert_eq!(l.rank(), 1);
    }

    #[test]
    fn additive_root_satisfies_rule() {
        let k = f9_tower();
        let (l, z) = k.adjoin_additive(3, &k.u_pow(1)).unwrap();
        assert_eq!(l.rank(), 3);
        let lhs = l.pow(&z, 3);
        let rhs = l.add(&z, &l.u_pow(1));
        assert_eq!(lhs, rhs);
        assert!(l.check_rules());
    }

    #[test]
    fn inseparable_kummer_rejected() {
        let k = f9_tower();
        assert!(matches!(
            k.adjoin_kummer(3, &k.u_pow(1)),
            Err(Error::UnsupportedExtension(_))
        ));
    }

    #[test]
    fn descriptor_round_trip() {
        let k = f9_tower();
        let (l, _) = k.adjoin_kummer(2, &k.u_pow(1)).unwrap();
        let c = l.add(&l.t_pow(-3), &l.from_fq(l.fq().root()));
        let (l, z) = l.adjoin_additive(3, &c).unwrap();
        let c2 = l.mul(&z, &l.t_pow(-1));
        let (l, _) = l.adjoin_additive(3, &c2).unwrap();
        let d = l.descriptor();
        let back = Tower::parse_descriptor(&d).unwrap();
        assert_eq!(back.descriptor(), d);
        assert!(back.check_rules());
        let x = l.add(&l.mul(&l.gen(0), &l.gen(1)), &l.t_pow(2));
        assert_eq!(l.parse(&l.render(&x)).unwrap(), x);
    }

    #[test]
    fn nonresidue_constant_gets_symbolic_root() {
        let k = f9_tower();
        let fq = k.fq().clone();
        let g = fq.subfield_generator(2).unwrap();
        let (l, z) = k.adjoin_kummer(2, &k.from_fq(g)).unwrap();
        assert_eq!(l.rank(), 2);
        assert_eq!(l.pow(&z, 2), l.from_fq(g));
        let x = l.mul(&z, &l.t_pow(3));
        let xi = l.inv(&x).unwrap();
        assert_eq!(l.mul(&x, &xi), l.one());
    }
}
