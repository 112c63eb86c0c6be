use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(p: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(p)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ksemijoin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn monoid_check_exit_codes() {
    let n2 = run(&["monoid", "check", &fixture("monoids/n2.json")]);
    assert_eq!(n2.status.code(), Some(0));
    let out = stdout(&n2);
    assert!(out.contains("semijoin-existence: holds"));
    assert!(out.contains("icp: fails"));

    let k35 = run(&["monoid", "check", &fixture("monoids/k35.json")]);
    assert_eq!(k35.status.code(), Some(1));
    assert!(stdout(&k35).contains("semijoin-existence: fails"));

    let bag = run(&["monoid", "check", &fixture("monoids/bag.json")]);
    assert_eq!(bag.status.code(), Some(0));
    assert!(stdout(&bag).lines().skip(1).all(|l| l.contains(": holds (known-result)")));

    let bad = run(&["monoid", "check", &fixture("monoids/z2.json")]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("positivity"));
    assert_eq!(run(&["monoid", "check", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn monoid_check_json() {
    let o = run(&["--format", "json", "monoid", "check", &fixture("monoids/p3.json")]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 6);
    assert_eq!(reports[2]["property"], "production-n2");
    assert_eq!(reports[2]["verdict"], "fails");
    assert_eq!(reports[2]["counterexample"][0]["value"], "{1,2}");
}

#[test]
fn schema_check() {
    let t = run(&["schema", "check", &fixture("schemas/triangle.json")]);
    assert_eq!(t.status.code(), Some(1));
    assert!(stdout(&t).starts_with("cyclic"));

    let f = run(&["schema", "check", &fixture("schemas/four_edge.json")]);
    assert_eq!(f.status.code(), Some(0));
    assert!(stdout(&f).contains("ordering: Y1=R1 Y2=R4(j=1) Y3=R2(j=2) Y4=R3(j=2)"));

    let p5 = run(&["--format", "json", "schema", "check", &fixture("schemas/p5.json")]);
    assert_eq!(p5.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&p5.stdout).unwrap();
    assert_eq!(v["program"].as_array().unwrap().len(), 8);
}

fn reduce_into(schema: &str, monoid: &str, rels: &[&str]) -> (Output, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec![
        "reduce".to_string(),
        "--schema".into(),
        fixture(schema),
        "--monoid".into(),
        fixture(monoid),
        "--out".into(),
        dir.path().to_string_lossy().into_owned(),
    ];
    args.extend(rels.iter().map(|r| fixture(r)));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    (run(&refs), dir)
}

#[test]
fn reduce_p3_bag_golden() {
    let rels = ["relations/p3_bag/R1.csv", "relations/p3_bag/R2.csv", "relations/p3_bag/R3.csv"];
    let (o, dir) = reduce_into("schemas/p3.json", "monoids/bag.json", &rels);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["R1", "R2", "R3"] {
        let got = std::fs::read_to_string(dir.path().join(format!("{name}.csv"))).unwrap();
        let want = std::fs::read_to_string(fixture(&format!("relations/p3_bag_golden/{name}.csv"))).unwrap();
        assert_eq!(got, want, "{name}");
    }
    let trace: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("trace.json")).unwrap()).unwrap();
    assert_eq!(trace["steps"].as_array().unwrap().len(), 4);
}

#[test]
fn reduce_consistent_inputs_unchanged() {
    let rels = ["relations/p3_boolean/R1.csv", "relations/p3_boolean/R2.csv", "relations/p3_boolean/R3.csv"];
    let (o, dir) = reduce_into("schemas/p3.json", "monoids/boolean.json", &rels);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for (i, name) in ["R1", "R2", "R3"].iter().enumerate() {
        let got = std::fs::read(dir.path().join(format!("{name}.csv"))).unwrap();
        assert_eq!(got, std::fs::read(fixture(rels[i])).unwrap(), "{name}");
    }

    let rels = ["relations/example1/R.csv", "relations/example1/T.csv"];
    let (o, dir) = reduce_into("schemas/example1.json", "monoids/bag.json", &rels);
    assert_eq!(o.status.code(), Some(0));
    for (i, name) in ["R", "T"].iter().enumerate() {
        let got = std::fs::read(dir.path().join(format!("{name}.csv"))).unwrap();
        assert_eq!(got, std::fs::read(fixture(rels[i])).unwrap(), "{name}");
    }
}

#[test]
fn reduce_errors() {
    let rels = ["relations/p3_bag/R1.csv", "relations/p3_bag/R2.csv", "relations/p3_bag/R3.csv"];
    let (o, _d) = reduce_into("schemas/triangle.json", "monoids/boolean.json", &rels);
    assert_eq!(o.status.code(), Some(1));
    let rels = ["relations/example1/R.csv", "relations/example1/T.csv"];
    let (o, _d) = reduce_into("schemas/example1.json", "monoids/k35.json", &rels);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reduce_with_program_file() {
    let dir = tempfile::tempdir().unwrap();
    let prog = dir.path().join("prog.txt");
    std::fs::write(&prog, "R1 := R1 <| R2\n").unwrap();
    let o = run(&[
        "reduce",
        "--schema",
        &fixture("schemas/p3.json"),
        "--monoid",
        &fixture("monoids/bag.json"),
        "--program",
        prog.to_str().unwrap(),
        &fixture("relations/p3_bag/R1.csv"),
        &fixture("relations/p3_bag/R2.csv"),
        &fixture("relations/p3_bag/R3.csv"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    // R1 = {(0,0):3} against R2[A2] = {0:4}: 4 is not below 3, so R1 empties.
    assert!(stdout(&o).starts_with("# R1\nA1,A2,#annotation\n# R2\n"));
}

#[test]
fn verify_exit_codes() {
    let p3 = fixture("schemas/p3.json");
    let ok = run(&["verify", "--schema", &p3, "--monoid", &fixture("monoids/bag.json"), "--trials", "100"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("100 trials: 100 passed"));
    let ok = run(&["verify", "--schema", &p3, "--monoid", &fixture("monoids/fuzzy-max.json"), "--trials", "100"]);
    assert_eq!(ok.status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("bundle.json");
    let bad = run(&[
        "verify",
        "--schema",
        &fixture("schemas/p3.json"),
        "--monoid",
        &fixture("monoids/n2.json"),
        "--trials",
        "300",
        "--bundle",
        bundle.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&bundle).unwrap()).unwrap();
    assert!(v["failed"].as_u64().unwrap() > 0);

    let unsupported = run(&["verify", "--schema", &p3, "--monoid", &fixture("monoids/k35.json")]);
    assert_eq!(unsupported.status.code(), Some(2));
}

#[test]
fn verify_reports_are_reproducible() {
    let args = [
        "--format",
        "json",
        "--seed",
        "42",
        "verify",
        "--schema",
        &fixture("schemas/p3.json"),
        "--monoid",
        &fixture("monoids/n2.json"),
        "--trials",
        "50",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn relation_commands() {
    let bag = fixture("monoids/bag.json");
    let m = run(&["relation", "marginal", "--monoid", &bag, "--attrs", "B", &fixture("relations/example1/R.csv")]);
    assert_eq!(m.status.code(), Some(0));
    assert_eq!(stdout(&m), "B,#annotation\n2,2\n");

    let c = run(&[
        "relation",
        "consistent",
        "--monoid",
        &bag,
        "--schema",
        &fixture("schemas/example1.json"),
        &fixture("relations/example1/R.csv"),
        &fixture("relations/example1/T.csv"),
    ]);
    assert_eq!(c.status.code(), Some(0));
    assert!(stdout(&c).starts_with("consistent"));

    let c = run(&[
        "relation",
        "consistent",
        "--monoid",
        &bag,
        &fixture("relations/p3_bag/R1.csv"),
        &fixture("relations/p3_bag/R2.csv"),
    ]);
    assert_eq!(c.status.code(), Some(1));
}

#[test]
fn bad_arguments() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
