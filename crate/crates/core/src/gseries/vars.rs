use serde::{Deserialize, Serialize};

/// One generator of a graded series ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarSpec {
    pub name: String,
    /// Homological degree (e.g. 2 for `x`, 1 for `y`, -1 for `b_(i)`).
    pub degree: i32,
    /// Odd variables square to zero and anticommute.
    pub odd: bool,
    /// Powers `>= trunc` vanish.
    pub trunc: Option<u32>,
    /// Weight used by the total-degree cap.
    pub weight: u32,
    /// Unit variables may carry negative exponents.
    pub unit: bool,
}

impl VarSpec {
    /// Even variable with no truncation and weight 0 (a coefficient parameter).
    pub fn param(name: &str, degree: i32) -> Self {
        VarSpec { name: name.into(), degree, odd: false, trunc: None, weight: 0, unit: false }
    }

    /// Even variable with weight 1, truncated at `trunc` when given.
    pub fn even(name: &str, degree: i32, trunc: Option<u32>) -> Self {
        VarSpec { name: name.into(), degree, odd: false, trunc, weight: 1, unit: false }
    }

    /// Odd (exterior) variable.
    pub fn odd(name: &str, degree: i32) -> Self {
        VarSpec { name: name.into(), degree, odd: true, trunc: Some(2), weight: 0, unit: false }
    }

    /// Invertible even variable.
    pub fn unit(name: &str, degree: i32) -> Self {
        VarSpec { name: name.into(), degree, odd: false, trunc: None, weight: 0, unit: true }
    }

    pub fn with_weight(mut self, w: u32) -> Self {
        self.weight = w;
        self
    }
}

/// Ordered generators plus an optional cap on total weighted degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarTable {
    pub vars: Vec<VarSpec>,
    /// Monomials with total weighted degree `>= cap` vanish.
    pub total_cap: Option<u32>,
}

impl VarTable {
    pub fn new(vars: Vec<VarSpec>) -> Self {
        VarTable { vars, total_cap: None }
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.total_cap = Some(cap);
        self
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Whether a monomial survives truncation.
    pub fn admits(&self, exp: &[i32]) -> bool {
        let mut total: i64 = 0;
        for (v, &e) in self.vars.iter().zip(exp) {
            if e < 0 && !v.unit {
                return false;
            }
            if v.odd && e > 1 {
                return false;
            }
            if let Some(t) = v.trunc {
                if e >= t as i32 {
                    return false;
                }
            }
            total += v.weight as i64 * e as i64;
        }
        match self.total_cap {
            Some(c) => total < c as i64,
            None => true,
        }
    }

    pub fn degree(&self, exp: &[i32]) -> i64 {
        self.vars.iter().zip(exp).map(|(v, &e)| v.degree as i64 * e as i64).sum()
    }

    pub fn weighted(&self, exp: &[i32]) -> i64 {
        self.vars.iter().zip(exp).map(|(v, &e)| v.weight as i64 * e as i64).sum()
    }

    /// Parity of a monomial.
    pub fn parity(&self, exp: &[i32]) -> bool {
        self.degree(exp).rem_euclid(2) == 1
    }

    /// Sign of multiplying monomials `a * b` into normal order, or `None` if
    /// an odd variable repeats.
    pub fn koszul(&self, a: &[i32], b: &[i32]) -> Option<bool> {
        let mut neg = false;
        let mut odd_a_after = 0u32;
        // Walk variables from the last; count odd factors of `a` lying after
        // each odd factor of `b`.
        for i in (0..self.vars.len()).rev() {
            if !self.vars[i].odd {
                continue;
            }
            if a[i] > 0 && b[i] > 0 {
                return None;
            }
            if b[i] > 0 && odd_a_after % 2 == 1 {
                neg = !neg;
            }
            if a[i] > 0 {
                odd_a_after += 1;
            }
        }
        Some(neg)
    }

    /// Concatenation of two tables; the cap is dropped unless both agree.
    pub fn concat(&self, other: &VarTable) -> VarTable {
        let mut vars = self.vars.clone();
        vars.extend(other.vars.iter().cloned());
        let total_cap = if self.total_cap == other.total_cap { self.total_cap } else { None };
        VarTable { vars, total_cap }
    }

    /// Copy with every name suffixed.
    pub fn renamed(&self, suffix: &str) -> VarTable {
        let mut t = self.clone();
        for v in &mut t.vars {
            v.name = format!("{}{}", v.name, suffix);
        }
        t
    }
}
