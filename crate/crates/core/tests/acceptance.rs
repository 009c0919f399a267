//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::process::Command as Proc;
use std::time::{Duration, Instant};

use chromalg::cli::{report, ComodAction, ComodSuite, Command, FglAction, HopfAction, IsoAction, RunConfig, SpacesAction};
use chromalg::report::{Report, Status};

/// Wall-clock limits.
const HOPF_LIMIT: Duration = Duration::from_secs(60);
const CHERN_LIMIT: Duration = Duration::from_secs(180);

struct Outcome {
    ok: bool,
    detail: String,
}

fn run(p: u64, n: u32, command: Command) -> Report {
    let cfg = RunConfig::new(p, n);
    report(&cfg, &command).expect("valid configuration").expect("a checking verb")
}

/// All records whose anchor is in `anchors` pass, and there is at least one.
fn select(reports: &[(String, Report)], anchors: &[&str]) -> Outcome {
    let mut count = 0;
    let mut failures = Vec::new();
    for (label, rep) in reports {
        for r in rep.checks.iter().filter(|r| anchors.contains(&r.anchor.as_str())) {
            count += 1;
            if r.status == Status::Fail {
                failures.push(format!("{label}: {} {}", r.id, r.witness.clone().unwrap_or_default()));
            }
        }
    }
    if count == 0 {
        return Outcome { ok: false, detail: "no matching checks".into() };
    }
    if failures.is_empty() {
        Outcome { ok: true, detail: format!("{count} checks") }
    } else {
        Outcome { ok: false, detail: failures.join("; ") }
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let o = f();
    let took = start.elapsed();
    if took > limit {
        Outcome { ok: false, detail: format!("{} in {took:?}, limit {limit:?}", o.detail) }
    } else {
        Outcome { ok: o.ok, detail: format!("{} in {:.1}s", o.detail, took.as_secs_f64()) }
    }
}

fn fgl_reports() -> Vec<(String, Report)> {
    [(3, 1), (3, 2), (5, 1)]
        .into_iter()
        .map(|(p, n)| (format!("({p},{n})"), run(p, n, Command::Fgl { action: FglAction::Check })))
        .collect()
}

fn hopf_reports() -> Vec<(String, Report)> {
    (1..=3)
        .map(|n| (format!("n={n}"), run(3, n, Command::Hopf { action: HopfAction::Check { instance: None } })))
        .collect()
}

fn comod_reports(suite: ComodSuite, heights: &[u32]) -> Vec<(String, Report)> {
    heights
        .iter()
        .map(|&n| (format!("n={n}"), run(3, n, Command::Comod { action: ComodAction::Check { suite: Some(suite) } })))
        .collect()
}

fn binary_all() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_chromalg");
    let once = || Proc::new(bin).args(["all", "--format", "json"]).env_remove("CHROMALG_SEED").output().expect("binary runs");
    let a = once();
    let b = once();
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    Outcome {
        ok: same && a.status.success() && b.status.success(),
        detail: format!("{} bytes, identical: {same}, exit {:?}", a.stdout.len(), a.status.code()),
    }
}

struct Tally(Vec<&'static str>, usize);

impl Tally {
    fn line(&mut self, name: &'static str, o: Outcome) {
        self.1 += 1;
        println!("{} {:>2} {name}: {}", if o.ok { "PASS" } else { "FAIL" }, self.1, o.detail);
        if !o.ok {
            self.0.push(name);
        }
    }
}

fn main() {
    let mut t = Tally(Vec::new(), 0);
    let fgl = fgl_reports();
    t.line("fgl_axioms", select(&fgl, &["fgl.axioms", "fgl.strict_height"]));
    t.line("p_series", select(&fgl, &["fgl.p_series"]));
    t.line("linearization", select(&fgl[..1], &["fgl.linearization"]));

    let mut hopf = Vec::new();
    t.line(
        "hopf_axioms",
        timed(HOPF_LIMIT, || {
            hopf = hopf_reports();
            select(&hopf, &["hopf.axioms", "hopf.function_algebroid", "hopf.composite_extension"])
        }),
    );
    t.line("two_route_psi", select(&hopf, &["hopf.two_route_psi"]));

    t.line(
        "identity_suite",
        select(
            &comod_reports(ComodSuite::Assembly, &[1, 2]),
            &["comod.generator_identity", "comod.assembled_coaction", "comod.nine_diagram", "comod.assembly_round_trip"],
        ),
    );
    t.line("twisted_equivalence", select(&comod_reports(ComodSuite::Equivalence, &[1]), &["comod.twisted_equivalence"]));
    t.line(
        "milnor_suite",
        select(
            &comod_reports(ComodSuite::Milnor, &[1, 2]),
            &["comod.milnor_anticommute", "comod.milnor_derivation", "comod.milnor_twist", "comod.milnor_lens", "comod.milnor_recognition"],
        ),
    );

    let iso = run(3, 1, Command::Iso { action: IsoAction::Check });
    t.line("solver", select(&[("(3,1)".into(), iso)], &["isofind.solver", "isofind.verify", "isofind.conjugation"]));

    t.line(
        "chern_comparison",
        timed(CHERN_LIMIT, || {
            let reps: Vec<_> = (1..=2).map(|n| (format!("(3,{n})"), run(3, n, Command::Spaces { action: SpacesAction::Chern }))).collect();
            select(
                &reps,
                &["spaces.chern_ring_map", "spaces.chern_generators", "spaces.bhat_basis", "spaces.coaction_transport", "spaces.bhat_invariance"],
            )
        }),
    );
    t.line("deterministic_report", binary_all());

    assert_eq!(t.1, 11);
    if !t.0.is_empty() {
        eprintln!("failed criteria: {:?}", t.0);
        std::process::exit(1);
    }
}
