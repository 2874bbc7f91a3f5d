use std::fs;
use std::process::{Command, Output};

fn wptree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wptree"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn verify_single_identity() {
    let o = wptree(&["verify", "eq4.1", "--range", "N=0..12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("13 instances"));
}

#[test]
fn verify_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = wptree(&[
        "verify",
        "eq5.1",
        "eq5.2",
        "eq5.3",
        "--range",
        "N=0..6,M=0..6",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 3);
    for e in entries {
        assert_eq!(e["instances"], 49);
        assert_eq!(e["failures"].as_array().unwrap().len(), 0);
        assert_eq!(e["ranges"]["M"], serde_json::json!([0, 6]));
        for key in ["id", "label", "elapsed_ms"] {
            assert!(e.get(key).is_some(), "{}", key);
        }
    }
}

#[test]
fn unknown_identity_is_a_config_error() {
    let o = wptree(&["verify", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown identity"));
}

#[test]
fn bad_overrides_are_config_errors() {
    for args in [
        &["verify", "eq4.1", "--range", "M=0..2"][..],
        &["verify", "eq4.1", "--range", "N=0-2"],
        &["verify", "eq4.1", "--trunc", "20"],
        &["verify", "eq2.5", "--bind", "zz=q"],
        &["verify", "eq2.5", "--bind", "a=q^(1/2)"],
    ] {
        let o = wptree(args);
        assert_eq!(o.status.code(), Some(2), "{:?}: {}", args, stderr(&o));
    }
}

#[test]
fn failing_instances_exit_one_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.wpt");
    fs::write(
        &file,
        "identity \"bad\" {\n  int N range 0..3\n  lhs sum(i, 0, N, qpow(i^3)*qbin(N, i))\n  rhs bsum(j, -N - 1, N + 1, sign(j)*qpow(j*(5*j + 1)/2)*qbin(2*N, N + 2*j))\n}\n",
    )
    .unwrap();
    let json = dir.path().join("bad.json");
    let o = wptree(&[
        "verify",
        "bad",
        "--file",
        file.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let f = &v[0]["failures"][0];
    assert_eq!(f["bindings"]["N"], "2");
    assert!(f["lhs"]["terms"].is_array());
    assert_ne!(f["lhs"]["text"], f["rhs"]["text"]);
}

#[test]
fn pole_bindings_fail_instances() {
    let o = wptree(&["verify", "eq2.5", "--bind", "r1=a*q", "--range", "n=1..2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("pole"));
}

#[test]
fn json_is_deterministic_and_job_invariant() {
    let run = |jobs: &str| {
        let o = wptree(&[
            "verify",
            "eq5.8",
            "eq2.9",
            "--format",
            "json",
            "--no-timing",
            "--jobs",
            jobs,
        ]);
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    let serial = run("1");
    assert_eq!(serial, run("1"));
    assert_eq!(serial, run("4"));
}

#[test]
fn csv_lists_instances() {
    let o = wptree(&["verify", "eq7.20", "--range", "N=0..2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "id,instance,pass\neq7.20,N=0,true\neq7.20,N=1,true\neq7.20,N=2,true\n"
    );
}

#[test]
fn truncation_override() {
    let o = wptree(&["verify", "eq5.11", "--trunc", "20", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("truncated 20"));
}

#[test]
fn list_shows_catalog() {
    let o = wptree(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().count() >= 40);
    assert!(out.contains("eq7.24"));
}

#[test]
fn pair_check_unit() {
    let o = wptree(&[
        "pair",
        "check",
        "unit",
        "--bind",
        "a=q,k=q^3",
        "--nmax",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n=8 ok"));
}

#[test]
fn pair_check_needs_known_seed() {
    let o = wptree(&["pair", "check", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn derive_singh_from_unit() {
    let o = wptree(&[
        "pair",
        "derive",
        "unit",
        "--word",
        "a",
        "--rho1",
        "q",
        "--rho2",
        "q^2",
        "--check",
        "--compare",
        "singh",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("termwise equal to singh"));
    assert!(out.contains("relation holds for unit.a"));
}

#[test]
fn construct_b_twice() {
    let o = wptree(&[
        "pair",
        "derive",
        "singh",
        "--word",
        "bb",
        "--compare",
        "singh",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("singh.b.b"));
}

#[test]
fn derived_pair_differs_from_wrong_seed() {
    let o = wptree(&[
        "pair",
        "derive",
        "singh",
        "--word",
        "b",
        "--compare",
        "singh",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("differs from singh"));
}

#[test]
fn burge_word_reproduces_identity() {
    let o = wptree(&[
        "burge",
        "derive",
        "B2",
        "--word",
        "74",
        "--check",
        "--identity",
        "eq7.15",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("relation is eq7.15"));
}

#[test]
fn burge_transform_81_twice() {
    let o = wptree(&[
        "burge",
        "derive",
        "B3",
        "--word",
        "81.81",
        "--check",
        "--compare",
        "B3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("B values equal those of B3"));
}

#[test]
fn burge_offset_violation_names_step() {
    let o = wptree(&["burge", "derive", "B1", "--word", "82.73"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("step 2"), "{}", stderr(&o));
}

#[test]
fn classify_inline_specs() {
    let o = wptree(&[
        "classify",
        "W(a, [b, c], q, z)",
        "--bind",
        "a=q^2,b=3*q,c=5*q^3,z=q",
    ]);
    assert_eq!(stdout(&o).trim(), "very_well_poised");
    let o = wptree(&[
        "classify",
        "phi([a, b, c], [a*q/b, a*q/c], q, q)",
        "--bind",
        "a=4*q^2,b=3*q,c=5*q^3",
    ]);
    assert_eq!(stdout(&o).trim(), "well_poised");
    let o = wptree(&[
        "classify",
        "phi([a, b], [c, d], q, q)",
        "--bind",
        "a=q,b=q,c=q,d=q",
    ]);
    assert_eq!(o.status.code(), Some(2));
}
