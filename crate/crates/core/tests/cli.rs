use std::process::Command;

fn chromalg(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_chromalg")).args(args).env_remove("CHROMALG_SEED").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn non_prime_is_a_configuration_error() {
    let (code, out, err) = chromalg(&["hopf", "check", "--p", "4"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("configuration error"), "{err}");
}

#[test]
fn field_of_wrong_characteristic_is_rejected() {
    let (code, _, err) = chromalg(&["fgl", "honda", "--field", "Fq(5,1,[3,1])"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn hopf_lambda_passes() {
    let (code, out, _) = chromalg(&["hopf", "check", "--instance", "lambda", "--p", "3", "--n", "2"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("PASS lambda.coassociativity [hopf.axioms]")), "{out}");
}

#[test]
fn json_report_has_schema_and_counts() {
    let (code, out, _) = chromalg(&["spaces", "chern", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "chromalg.report/1");
    assert_eq!(v["failed"], 0);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c.get("elapsed_ms").is_none()));
}

#[test]
fn seed_flag_overrides_environment() {
    let bin = env!("CARGO_BIN_EXE_chromalg");
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(bin);
        c.args(["comod", "check", "--suite", "equivalence"]);
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        match env {
            Some(s) => c.env("CHROMALG_SEED", s),
            None => c.env_remove("CHROMALG_SEED"),
        };
        String::from_utf8(c.output().unwrap().stdout).unwrap()
    };
    assert!(run(Some("7"), None).contains("seed=7"));
    assert!(run(Some("7"), Some("9")).contains("seed=9"));
    assert!(run(None, None).contains("seed=0"));
}

#[test]
fn dump_verbs_print_series() {
    let (code, out, _) = chromalg(&["fgl", "pseries", "--p", "3", "--n", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("X^3"), "{out}");
    let (code, out, _) = chromalg(&["fgl", "endo", "--coeffs", "1", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["kind"], "honda_endo");
    let (code, out, _) = chromalg(&["iso", "solve", "--xdeg", "4"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("tower "), "{out}");
}
