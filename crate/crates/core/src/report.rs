//! Structured reports of verification runs.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::check::Check;
use crate::error::Error;

pub const SCHEMA: &str = "chromalg.report/1";

/// Every anchor a report may carry.
pub const ANCHORS: &[&str] = &[
    "fgl.axioms",
    "fgl.strict_height",
    "fgl.p_series",
    "fgl.honda_specialization",
    "fgl.linearization",
    "fgl.honda_endo",
    "isofind.solver",
    "isofind.verify",
    "isofind.conjugation",
    "isofind.equivariance",
    "hopf.axioms",
    "hopf.function_algebroid",
    "hopf.composite_extension",
    "hopf.two_route_psi",
    "hopf.conjugation_action",
    "comod.twisted_equivalence",
    "comod.milnor_anticommute",
    "comod.milnor_derivation",
    "comod.milnor_twist",
    "comod.milnor_lens",
    "comod.milnor_recognition",
    "comod.generator_identity",
    "comod.assembled_coaction",
    "comod.nine_diagram",
    "comod.assembly_round_trip",
    "spaces.lens_coaction",
    "spaces.proj_coaction",
    "spaces.chern_ring_map",
    "spaces.chern_generators",
    "spaces.bhat_basis",
    "spaces.coaction_transport",
    "spaces.bhat_invariance",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

/// A named table of rendered values, such as a coaction matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub name: String,
    pub rows: Vec<(String, String)>,
}

/// Parameters echoed into every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub p: u64,
    pub n: u32,
    pub xdeg: u32,
    pub uprec: u32,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub suite: String,
    pub config: ConfigEcho,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<Table>,
    pub passed: usize,
    pub failed: usize,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let _ = writeln!(s, "# {} suite={} p={} n={} xdeg={} uprec={} seed={}", self.schema, self.suite, c.p, c.n, c.xdeg, c.uprec, c.seed);
        if let Some(f) = &c.field {
            let _ = writeln!(s, "# field {f}");
        }
        for t in &self.tables {
            let _ = writeln!(s, "[{}]", t.name);
            for (k, v) in &t.rows {
                let _ = writeln!(s, "  {k} -> {v}");
            }
        }
        for r in &self.checks {
            let status = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            let _ = write!(s, "{status} {} [{}]", r.id, r.anchor);
            if let Some(ms) = r.elapsed_ms {
                let _ = write!(s, " {ms}ms");
            }
            if let Some(w) = &r.witness {
                let _ = write!(s, " :: {w}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "# {} passed, {} failed", self.passed, self.failed);
        s
    }
}

/// 64-bit FNV-1a.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// A generator keyed by the run seed and a check id, so each check draws the
/// same values however the suites are ordered.
pub fn check_rng(seed: u64, id: &str) -> ChaCha8Rng {
    let mut key = seed.to_le_bytes().to_vec();
    key.extend_from_slice(id.as_bytes());
    ChaCha8Rng::seed_from_u64(fnv1a(&key))
}

/// Accumulates check records for one suite.
#[derive(Debug)]
pub struct Recorder {
    suite: String,
    seed: u64,
    timings: bool,
    records: Vec<CheckRecord>,
    tables: Vec<Table>,
}

impl Recorder {
    pub fn new(suite: &str, seed: u64, timings: bool) -> Self {
        Recorder { suite: suite.into(), seed, timings, records: Vec::new(), tables: Vec::new() }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rng(&self, id: &str) -> ChaCha8Rng {
        check_rng(self.seed, id)
    }

    fn push(&mut self, id: String, anchor: &str, ok: bool, witness: Option<String>, elapsed_ms: Option<u128>) {
        debug_assert!(ANCHORS.contains(&anchor), "unknown anchor {anchor}");
        self.records.push(CheckRecord {
            id,
            anchor: anchor.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            witness,
            elapsed_ms,
        });
    }

    pub fn check(&mut self, id: &str, anchor: &str, c: Check) {
        self.push(id.into(), anchor, c.ok, c.witness, None);
    }

    /// One record per check, named `prefix.check_name`.
    pub fn checks(&mut self, prefix: &str, anchor: &str, cs: Vec<Check>) {
        for c in cs {
            let id = format!("{prefix}.{}", c.name.replace(' ', "_"));
            self.push(id, anchor, c.ok, c.witness, None);
        }
    }

    /// A failed record carrying the error.
    pub fn error(&mut self, id: &str, anchor: &str, e: &Error) {
        self.push(id.into(), anchor, false, Some(format!("error: {e}")), None);
    }

    /// Unwraps `r`, recording a failure on error.
    pub fn guard<T>(&mut self, id: &str, anchor: &str, r: crate::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.error(id, anchor, &e);
                None
            }
        }
    }

    /// Runs `f` and records its checks under `prefix`; errors become a
    /// failed record. Timings are attached only on request.
    pub fn run(&mut self, prefix: &str, anchor: &str, f: impl FnOnce(&mut Self) -> crate::Result<Vec<Check>>) {
        let start = std::time::Instant::now();
        let before = self.records.len();
        match f(self) {
            Ok(cs) => self.checks(prefix, anchor, cs),
            Err(e) => self.error(prefix, anchor, &e),
        }
        if self.timings {
            let ms = start.elapsed().as_millis();
            for r in &mut self.records[before..] {
                r.elapsed_ms = Some(ms);
            }
        }
    }

    pub fn table(&mut self, name: &str, rows: Vec<(String, String)>) {
        self.tables.push(Table { name: name.into(), rows });
    }

    /// Appends another recorder's records, prefixing their ids.
    pub fn absorb(&mut self, other: Recorder) {
        for mut r in other.records {
            r.id = format!("{}.{}", other.suite, r.id);
            self.records.push(r);
        }
        self.tables.extend(other.tables);
    }

    pub fn finish(self, config: ConfigEcho) -> Report {
        let failed = self.records.iter().filter(|r| r.status == Status::Fail).count();
        Report {
            schema: SCHEMA,
            suite: self.suite,
            config,
            passed: self.records.len() - failed,
            failed,
            checks: self.records,
            tables: self.tables,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a(b"a"), 0xaf63_dc4c_8601_ec8c);
    }

    #[test]
    fn rng_depends_on_seed_and_id() {
        let a: u64 = check_rng(1, "x").gen();
        assert_eq!(a, check_rng(1, "x").gen::<u64>());
        assert_ne!(a, check_rng(2, "x").gen::<u64>());
        assert_ne!(a, check_rng(1, "y").gen::<u64>());
    }

    #[test]
    fn recorder_counts_and_prefixes() {
        let mut r = Recorder::new("inner", 0, false);
        r.check("a", "fgl.axioms", Check::pass("a"));
        r.error("b", "fgl.axioms", &Error::DivisionByZero);
        let mut outer = Recorder::new("all", 0, false);
        outer.absorb(r);
        let rep = outer.finish(ConfigEcho { p: 3, n: 1, xdeg: 10, uprec: 6, seed: 0, field: None });
        assert_eq!((rep.passed, rep.failed), (1, 1));
        assert_eq!(rep.checks[1].id, "inner.b");
        assert!(rep.to_text().contains("FAIL inner.b [fgl.axioms] :: error:"));
        assert!(rep.to_json().contains("\"schema\": \"chromalg.report/1\""));
    }
}
