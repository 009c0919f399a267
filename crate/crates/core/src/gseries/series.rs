use std::collections::BTreeMap;
use std::sync::Arc;

use super::vars::{VarSpec, VarTable};
use crate::coeffring::Ring;
use crate::error::{Error, Result};

/// Sparse series: exponent vectors to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series<E> {
    pub terms: BTreeMap<Vec<i32>, E>,
}

impl<E> Default for Series<E> {
    fn default() -> Self {
        Series { terms: BTreeMap::new() }
    }
}

impl<E> Series<E> {
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Truncated graded series over a coefficient ring.
#[derive(Clone, Debug)]
pub struct SeriesRing<R: Ring> {
    base: R,
    vars: Arc<VarTable>,
}

impl<R: Ring + PartialEq> PartialEq for SeriesRing<R> {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.vars == other.vars
    }
}

impl<R: Ring> SeriesRing<R> {
    pub fn new(base: R, vars: VarTable) -> Self {
        SeriesRing { base, vars: Arc::new(vars) }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn same_vars(&self, other: &SeriesRing<R>) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }

    /// Same variables over a different coefficient ring.
    pub fn with_base<S: Ring>(&self, base: S) -> SeriesRing<S> {
        SeriesRing { base, vars: self.vars.clone() }
    }

    /// Same coefficients with a different variable table.
    pub fn with_vars(&self, vars: VarTable) -> SeriesRing<R> {
        SeriesRing { base: self.base.clone(), vars: Arc::new(vars) }
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.vars.index(name).ok_or_else(|| Error::Config(format!("unknown variable {name}")))
    }

    pub fn zero_exp(&self) -> Vec<i32> {
        vec![0; self.vars.len()]
    }

    pub fn constant(&self, c: R::Elem) -> Series<R::Elem> {
        self.monomial(self.zero_exp(), c)
    }

    /// `c * x^exp`, or zero if the monomial is truncated away.
    pub fn monomial(&self, exp: Vec<i32>, c: R::Elem) -> Series<R::Elem> {
        let mut terms = BTreeMap::new();
        if !self.base.is_zero(&c) && self.vars.admits(&exp) {
            terms.insert(exp, c);
        }
        Series { terms }
    }

    pub fn var(&self, i: usize) -> Series<R::Elem> {
        self.var_pow(i, 1)
    }

    pub fn var_pow(&self, i: usize, k: i32) -> Series<R::Elem> {
        let mut e = self.zero_exp();
        e[i] = k;
        self.monomial(e, self.base.one())
    }

    pub fn named(&self, name: &str) -> Series<R::Elem> {
        self.var(self.vars.index(name).unwrap_or_else(|| panic!("no variable {name}")))
    }

    pub fn coeff(&self, f: &Series<R::Elem>, exp: &[i32]) -> R::Elem {
        f.terms.get(exp).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn constant_term(&self, f: &Series<R::Elem>) -> R::Elem {
        self.coeff(f, &self.zero_exp())
    }

    pub fn scale(&self, f: &Series<R::Elem>, c: &R::Elem) -> Series<R::Elem> {
        let mut out = Series::default();
        for (e, v) in &f.terms {
            let w = self.base.mul(v, c);
            if !self.base.is_zero(&w) {
                out.terms.insert(e.clone(), w);
            }
        }
        out
    }

    pub fn map_coeffs(&self, f: &Series<R::Elem>, g: impl Fn(&R::Elem) -> R::Elem) -> Series<R::Elem> {
        let mut out = Series::default();
        for (e, v) in &f.terms {
            let w = g(v);
            if !self.base.is_zero(&w) {
                out.terms.insert(e.clone(), w);
            }
        }
        out
    }

    /// Moves `f` into `target` (same variable layout) through a coefficient map.
    pub fn change_base<S: Ring>(
        &self,
        f: &Series<R::Elem>,
        target: &SeriesRing<S>,
        g: impl Fn(&R::Elem) -> Result<S::Elem>,
    ) -> Result<Series<S::Elem>> {
        let mut out = Series::default();
        for (e, v) in &f.terms {
            let w = g(v)?;
            if !target.base.is_zero(&w) && target.vars.admits(e) {
                out.terms.insert(e.clone(), w);
            }
        }
        Ok(out)
    }

    pub fn mul_checked(&self, f: &Series<R::Elem>, g: &Series<R::Elem>) -> Result<Series<R::Elem>> {
        Ok(self.mul(f, g))
    }

    fn add_term(&self, out: &mut BTreeMap<Vec<i32>, R::Elem>, e: Vec<i32>, c: R::Elem) {
        use std::collections::btree_map::Entry;
        match out.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = self.base.add(o.get(), &c);
                if self.base.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Whether `f` has no monomial involving an odd variable.
    fn all_even(&self, f: &Series<R::Elem>) -> bool {
        let odd: Vec<usize> = (0..self.vars.len()).filter(|&i| self.vars.vars[i].odd).collect();
        odd.is_empty() || f.terms.keys().all(|e| odd.iter().all(|&i| e[i] == 0))
    }

    /// Homogeneous degree, if every monomial has the same degree.
    pub fn homogeneous_degree(&self, f: &Series<R::Elem>) -> Option<i64> {
        let mut it = f.terms.keys().map(|e| self.vars.degree(e));
        let d = it.next()?;
        if it.all(|x| x == d) {
            Some(d)
        } else {
            None
        }
    }

    /// Terms whose exponent of variable `i` is below `k`.
    pub fn truncate_var(&self, f: &Series<R::Elem>, i: usize, k: i32) -> Series<R::Elem> {
        Series { terms: f.terms.iter().filter(|(e, _)| e[i] < k).map(|(e, c)| (e.clone(), c.clone())).collect() }
    }

    /// Terms whose total weighted degree is below `k`.
    pub fn truncate_weight(&self, f: &Series<R::Elem>, k: i64) -> Series<R::Elem> {
        Series {
            terms: f
                .terms
                .iter()
                .filter(|(e, _)| self.vars.weighted(e) < k)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient of `x_i^k` as a series in the remaining variables.
    pub fn coeff_of_var(&self, f: &Series<R::Elem>, i: usize, k: i32) -> Series<R::Elem> {
        let mut out = Series::default();
        for (e, c) in &f.terms {
            if e[i] == k {
                let mut e2 = e.clone();
                e2[i] = 0;
                out.terms.insert(e2, c.clone());
            }
        }
        out
    }

    /// Lowest total weighted degree carrying a term.
    pub fn order(&self, f: &Series<R::Elem>) -> Option<i64> {
        f.terms.keys().map(|e| self.vars.weighted(e)).min()
    }

    /// Applies the algebra map sending variable `i` to `images[i]` and
    /// coefficients through `coeff`.
    ///
    /// Monomials are evaluated as ordered products, so images of odd
    /// variables must be odd for the result to respect signs. Negative
    /// exponents require the image to be a monomial with unit coefficient.
    pub fn substitute<S: Ring>(
        &self,
        f: &Series<R::Elem>,
        target: &SeriesRing<S>,
        images: &[Series<S::Elem>],
        coeff: impl Fn(&R::Elem) -> S::Elem,
    ) -> Result<Series<S::Elem>> {
        if images.len() != self.vars.len() {
            return Err(Error::VarMismatch);
        }
        let n = self.vars.len();
        let mut pos_cache: Vec<Vec<Series<S::Elem>>> = vec![Vec::new(); n];
        let mut neg_cache: Vec<Vec<Series<S::Elem>>> = vec![Vec::new(); n];
        let mut out: BTreeMap<Vec<i32>, S::Elem> = BTreeMap::new();
        // Group by the exponent prefix to share partial products.
        let mut prefix_val: Vec<Option<(Vec<i32>, Series<S::Elem>)>> = vec![None; n + 1];
        for (e, c) in &f.terms {
            let mut start = 0;
            while start < n {
                match &prefix_val[start + 1] {
                    Some((pe, _)) if pe[..] == e[..=start] => start += 1,
                    _ => break,
                }
            }
            let mut acc = if start == 0 {
                target.one()
            } else {
                prefix_val[start].as_ref().unwrap().1.clone()
            };
            for i in start..n {
                let k = e[i];
                if k != 0 {
                    let p = Self::power(target, &images[i], k, &mut pos_cache[i], &mut neg_cache[i])?;
                    acc = target.mul(&acc, &p);
                }
                prefix_val[i + 1] = Some((e[..=i].to_vec(), acc.clone()));
                if acc.terms.is_empty() {
                    for slot in prefix_val.iter_mut().skip(i + 2) {
                        *slot = None;
                    }
                    break;
                }
            }
            if acc.terms.is_empty() {
                continue;
            }
            let cc = coeff(c);
            if target.base.is_zero(&cc) {
                continue;
            }
            for (te, tc) in acc.terms {
                let v = target.base.mul(&cc, &tc);
                if !target.base.is_zero(&v) {
                    target.add_term(&mut out, te, v);
                }
            }
        }
        Ok(Series { terms: out })
    }

    fn power<S: Ring>(
        target: &SeriesRing<S>,
        img: &Series<S::Elem>,
        k: i32,
        pos: &mut Vec<Series<S::Elem>>,
        neg: &mut Vec<Series<S::Elem>>,
    ) -> Result<Series<S::Elem>> {
        if k > 0 {
            while pos.len() < k as usize {
                let next = match pos.last() {
                    None => img.clone(),
                    Some(prev) => target.mul(prev, img),
                };
                pos.push(next);
            }
            Ok(pos[k as usize - 1].clone())
        } else {
            if neg.is_empty() {
                if img.terms.len() != 1 {
                    return Err(Error::NonUnitLeadingCoefficient);
                }
                let (e, c) = img.terms.iter().next().unwrap();
                let ci = target.base.inv(c).ok_or(Error::NonUnitLeadingCoefficient)?;
                let ei: Vec<i32> = e.iter().map(|x| -x).collect();
                neg.push(target.monomial(ei, ci));
            }
            while neg.len() < (-k) as usize {
                let next = target.mul(neg.last().unwrap(), &neg[0]);
                neg.push(next);
            }
            Ok(neg[(-k) as usize - 1].clone())
        }
    }

    /// Substitutes `g` for variable `i`, fixing the other variables.
    pub fn compose_var(&self, f: &Series<R::Elem>, i: usize, g: &Series<R::Elem>) -> Result<Series<R::Elem>> {
        if !self.base.is_zero(&self.constant_term(g)) {
            return Err(Error::NonzeroConstantTerm);
        }
        let images: Vec<Series<R::Elem>> =
            (0..self.vars.len()).map(|j| if j == i { g.clone() } else { self.var(j) }).collect();
        self.substitute(f, self, &images, |c| c.clone())
    }

    /// `f(g)` for `f` a series in the first variable.
    pub fn compose(&self, f: &Series<R::Elem>, g: &Series<R::Elem>) -> Result<Series<R::Elem>> {
        self.compose_var(f, 0, g)
    }

    /// Compositional inverse of `f` in variable `i`; other variables are
    /// treated as coefficients.
    pub fn reverse_var(&self, f: &Series<R::Elem>, i: usize) -> Result<Series<R::Elem>> {
        if !self.base.is_zero(&self.constant_term(f)) {
            return Err(Error::NonzeroConstantTerm);
        }
        let lin = self.coeff_of_var(f, i, 1);
        if lin.terms.len() != 1 || !lin.terms.contains_key(&self.zero_exp()) {
            return Err(Error::NonUnitLeadingCoefficient);
        }
        let a1 = lin.terms.values().next().unwrap();
        let a1inv = self.base.inv(a1).ok_or(Error::NonUnitLeadingCoefficient)?;
        if f.terms.keys().any(|e| e[i] == 0) {
            return Err(Error::NonzeroConstantTerm);
        }
        let x = self.var(i);
        let mut g = self.scale(&x, &a1inv);
        let bound = self.vars.vars[i].trunc.or(self.vars.total_cap).ok_or_else(|| {
            Error::Config("reversion needs a truncated variable".into())
        })? as i32;
        for k in 2..bound {
            let fg = self.compose_var(f, i, &g)?;
            let err = self.coeff_of_var(&fg, i, k);
            if err.terms.is_empty() {
                continue;
            }
            let mut corr = self.scale(&err, &a1inv);
            corr = self.mul(&corr, &self.var_pow(i, k));
            g = self.sub(&g, &corr);
        }
        Ok(g)
    }

    pub fn reverse(&self, f: &Series<R::Elem>) -> Result<Series<R::Elem>> {
        self.reverse_var(f, 0)
    }

    /// Total degree in the variables of weight > 0.
    pub fn max_weight(&self, f: &Series<R::Elem>) -> Option<i64> {
        f.terms.keys().map(|e| self.vars.weighted(e)).max()
    }

    /// Sum of a family of series.
    pub fn sum_all(&self, items: impl IntoIterator<Item = Series<R::Elem>>) -> Series<R::Elem> {
        let mut out = BTreeMap::new();
        for s in items {
            for (e, c) in s.terms {
                self.add_term(&mut out, e, c);
            }
        }
        Series { terms: out }
    }

    /// Embeds `f` in a ring whose variables extend these at positions `slots`.
    pub fn embed(&self, f: &Series<R::Elem>, target: &SeriesRing<R>, slots: &[usize]) -> Series<R::Elem> {
        let mut out = Series::default();
        for (e, c) in &f.terms {
            let mut e2 = target.zero_exp();
            for (k, &s) in slots.iter().enumerate() {
                e2[s] = e[k];
            }
            if target.vars.admits(&e2) {
                out.terms.insert(e2, c.clone());
            }
        }
        out
    }

    pub fn render_exp(&self, e: &[i32]) -> String {
        let mut parts = Vec::new();
        for (v, &k) in self.vars.vars.iter().zip(e) {
            match k {
                0 => {}
                1 => parts.push(v.name.clone()),
                k => parts.push(format!("{}^{}", v.name, k)),
            }
        }
        parts.join("*")
    }

    /// Monomials in canonical (graded, then lexicographic) order.
    pub fn sorted_terms<'a>(&self, f: &'a Series<R::Elem>) -> Vec<(&'a Vec<i32>, &'a R::Elem)> {
        let mut v: Vec<_> = f.terms.iter().collect();
        v.sort_by(|a, b| {
            let da: i64 = a.0.iter().map(|x| x.unsigned_abs() as i64).sum();
            let db: i64 = b.0.iter().map(|x| x.unsigned_abs() as i64).sum();
            da.cmp(&db).then_with(|| b.0.cmp(a.0))
        });
        v
    }
}

impl<R: Ring> Ring for SeriesRing<R> {
    type Elem = Series<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Series::default()
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }
    fn from_int(&self, n: i64) -> Self::Elem {
        self.constant(self.base.from_int(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let (big, small) = if a.terms.len() >= b.terms.len() { (a, b) } else { (b, a) };
        let mut out = big.terms.clone();
        for (e, c) in &small.terms {
            self.add_term(&mut out, e.clone(), c.clone());
        }
        Series { terms: out }
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Series { terms: a.terms.iter().map(|(e, c)| (e.clone(), self.base.neg(c))).collect() }
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.terms.is_empty() || b.terms.is_empty() {
            return Series::default();
        }
        let signs = !(self.all_even(a) || self.all_even(b));
        let n = self.vars.len();
        let mut out = BTreeMap::new();
        let mut e = vec![0i32; n];
        // Sorting the right factor by weight lets each row stop at the cap.
        let mut bs: Vec<(i64, &Vec<i32>, &R::Elem)> =
            b.terms.iter().map(|(e, c)| (self.vars.weighted(e), e, c)).collect();
        bs.sort_by_key(|x| x.0);
        let cap = self.vars.total_cap.map(|c| c as i64);
        for (ea, ca) in &a.terms {
            let wa = self.vars.weighted(ea);
            for &(wb, eb, cb) in &bs {
                if let Some(c) = cap {
                    if wa + wb >= c {
                        break;
                    }
                }
                for k in 0..n {
                    e[k] = ea[k] + eb[k];
                }
                if !self.vars.admits(&e) {
                    continue;
                }
                let mut c = self.base.mul(ca, cb);
                if signs {
                    match self.vars.koszul(ea, eb) {
                        None => continue,
                        Some(true) => c = self.base.neg(&c),
                        Some(false) => {}
                    }
                }
                if self.base.is_zero(&c) {
                    continue;
                }
                self.add_term(&mut out, e.clone(), c);
            }
        }
        Series { terms: out }
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.terms.values().all(|c| self.base.is_zero(c))
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        // Units of the form c * (monomial in unit variables) * (1 + nilpotent)
        // are inverted when every other variable is truncated.
        let c0 = self.constant_term(a);
        if a.terms.len() == 1 {
            let (e, c) = a.terms.iter().next().unwrap();
            let ok = self.vars.vars.iter().zip(e).all(|(v, &k)| k == 0 || v.unit);
            if !ok {
                return None;
            }
            let ci = self.base.inv(c)?;
            return Some(self.monomial(e.iter().map(|x| -x).collect(), ci));
        }
        let c0i = self.base.inv(&c0)?;
        let bounded = self.vars.total_cap.is_some()
            || self.vars.vars.iter().all(|v| v.trunc.is_some() || v.weight == 0 && v.odd);
        if !bounded {
            return None;
        }
        if a.terms.keys().any(|e| e.iter().any(|&k| k < 0)) {
            return None;
        }
        // 1/(c0 (1 - m)) = c0^{-1} sum m^k with m nilpotent.
        let m = self.neg(&self.scale(&self.sub(a, &self.constant(c0.clone())), &c0i));
        let mut acc = self.one();
        let mut pw = self.one();
        for _ in 0..10_000 {
            pw = self.mul(&pw, &m);
            if pw.terms.is_empty() {
                return Some(self.scale(&acc, &c0i));
            }
            acc = self.add(&acc, &pw);
        }
        None
    }
    fn render(&self, a: &Self::Elem) -> String {
        if a.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .sorted_terms(a)
            .into_iter()
            .map(|(e, c)| {
                let cs = self.base.render(c);
                let cs = if cs.chars().any(|ch| " +*[{/".contains(ch)) || cs.starts_with('-') {
                    format!("({cs})")
                } else {
                    cs
                };
                let m = self.render_exp(e);
                if m.is_empty() {
                    cs
                } else {
                    format!("{cs}*{m}")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// Builds the ring with the variables of `a` followed by those of `b`.
pub fn tensor_ring<R: Ring>(a: &SeriesRing<R>, b: &SeriesRing<R>) -> SeriesRing<R> {
    SeriesRing::new(a.base.clone(), a.vars.concat(&b.vars))
}

/// Convenience constructor for a univariate ring `R[[name]]/(name^trunc)`.
pub fn univariate<R: Ring>(base: R, name: &str, trunc: u32) -> SeriesRing<R> {
    SeriesRing::new(base, VarTable::new(vec![VarSpec::even(name, 0, Some(trunc))]))
}
