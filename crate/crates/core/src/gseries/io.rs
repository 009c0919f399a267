use serde_json::{json, Value};

use super::series::{Series, SeriesRing};
use super::vars::VarTable;
use crate::coeffring::{split_top, ParseElem};
use crate::error::{Error, Result};

impl<R: ParseElem> SeriesRing<R> {
    /// Parses the canonical text form produced by `render`.
    pub fn parse(&self, s: &str) -> Result<Series<R::Elem>> {
        let s = s.trim();
        let mut out = Series::default();
        if s == "0" {
            return Ok(out);
        }
        for term in split_top(s, " + ") {
            let factors = split_top(term.trim(), "*");
            let mut exp = self.zero_exp();
            let mut coeff = None;
            for (k, f) in factors.iter().enumerate() {
                let f = f.trim();
                if k == 0 {
                    let inner = f.strip_prefix('(').and_then(|x| x.strip_suffix(')'));
                    let is_var = self.vars().index(f.split('^').next().unwrap()).is_some();
                    if let Some(inner) = inner {
                        coeff = Some(self.base().parse(inner)?);
                        continue;
                    }
                    if !is_var {
                        coeff = Some(self.base().parse(f)?);
                        continue;
                    }
                }
                let (name, e) = match f.split_once('^') {
                    Some((n, e)) => (n, e.parse::<i32>().map_err(|_| Error::Parse(f.into()))?),
                    None => (f, 1),
                };
                let i = self.vars().index(name).ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
                exp[i] += e;
            }
            let c = coeff.unwrap_or_else(|| self.base().one());
            let m = self.monomial(exp, c);
            out = crate::coeffring::Ring::add(self, &out, &m);
        }
        Ok(out)
    }

    /// JSON form `{vars, total_cap, terms: [{exp, coeff}]}`.
    pub fn to_json(&self, f: &Series<R::Elem>) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms(f)
            .into_iter()
            .map(|(e, c)| json!({"exp": e, "coeff": self.base().render(c)}))
            .collect();
        json!({
            "vars": serde_json::to_value(&self.vars().vars).unwrap(),
            "total_cap": self.vars().total_cap,
            "terms": terms,
        })
    }

    pub fn from_json(&self, v: &Value) -> Result<Series<R::Elem>> {
        let vars: VarTable = VarTable {
            vars: serde_json::from_value(v["vars"].clone()).map_err(|e| Error::Parse(e.to_string()))?,
            total_cap: serde_json::from_value(v["total_cap"].clone()).map_err(|e| Error::Parse(e.to_string()))?,
        };
        if &vars != self.vars() {
            return Err(Error::VarMismatch);
        }
        let mut out = Series::default();
        let terms = v["terms"].as_array().ok_or_else(|| Error::Parse("terms must be an array".into()))?;
        for t in terms {
            let exp: Vec<i32> = serde_json::from_value(t["exp"].clone()).map_err(|e| Error::Parse(e.to_string()))?;
            if exp.len() != self.nvars() {
                return Err(Error::VarMismatch);
            }
            let cs = t["coeff"].as_str().ok_or_else(|| Error::Parse("coeff must be a string".into()))?;
            let c = self.base().parse(cs)?;
            let m = self.monomial(exp, c);
            out = crate::coeffring::Ring::add(self, &out, &m);
        }
        Ok(out)
    }
}
