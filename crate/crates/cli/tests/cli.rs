use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_voa-modular")).args(args).env_remove("VOA_MODULAR_JOBS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn qv_prints_e_monomial() {
    let o = run(&["qv", "--partition", "1^3 2^2 5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("-90·E2·E4·E6"));
    let same = run(&["qv", "--partition", "1,1,1,2,2,5"]);
    assert_eq!(stdout(&same), stdout(&o));
}

#[test]
fn kacdet_is_factored() {
    let o = run(&["kacdet", "--n", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1/2·c^2·(5c+22)");
}

#[test]
fn griess_table_ends_at_forty() {
    let o = run(&["mlde", "--table", "k2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 9);
    assert!(rows[8].ends_with("40 | 20619"), "{}", rows[8]);
}

#[test]
fn json_round_trips() {
    let o = run(&["eisenstein", "4", "--order", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let q = voa_modular::quasimodular::from_terms(&serde_json::from_value::<Vec<_>>(v["form"].clone()).unwrap());
    assert_eq!(q, voa_modular::quasimodular::eisenstein(4).unwrap());
    let s: voa_modular::QSeries = serde_json::from_value(v["qseries"].clone()).unwrap();
    assert_eq!(s.coeffs()[1].to_string(), "1/3");

    let o = run(&["genus2", "-N", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let terms: Vec<voa_modular::genus2::EpsTerm> = serde_json::from_value(v["series"].clone()).unwrap();
    let z = voa_modular::genus2::z2_heisenberg(1, 8, 4).unwrap().series;
    assert_eq!(voa_modular::EpsSeries::from_json_terms(&terms), z);
}

#[test]
fn csv_output() {
    let o = run(&["genus2", "-N", "2", "--what", "det", "--format", "csv"]);
    assert_eq!(stdout(&o), "eps^n,term,coeff\n0,1,1\n2,E2(t1)·E2(t2),-1\n");
}

#[test]
fn theta_from_gram_file() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("a2.json");
    std::fs::write(&path, "[[2,-1],[-1,2]]").unwrap();
    let o = run(&["theta", "--gram", path.to_str().unwrap(), "-N", "4", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["counts"], serde_json::json!([1, 6, 0, 6, 6]));
    std::fs::write(&path, "[[2,3],[3,2]]").unwrap();
    assert_eq!(run(&["theta", "--gram", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["mlde"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["qv", "--partition", "a"]).status.code(), Some(2));
    assert_eq!(run(&["mlde", "--c", "1/0"]).status.code(), Some(2));
    assert_eq!(run(&["mlde", "--c", "10"]).status.code(), Some(1));
    assert_eq!(run(&["genus2", "--rank", "0"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_passes_with_env_jobs() {
    let o = Command::new(env!("CARGO_BIN_EXE_voa-modular"))
        .args(["verify"])
        .env("VOA_MODULAR_JOBS", "2")
        .output()
        .unwrap();
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert_eq!(text.lines().filter(|l| l.contains(" PASS ")).count(), 15);
    assert!(!text.contains("FAIL"));
}

#[test]
fn mlde_deligne_and_single_charge() {
    let o = run(&["mlde", "--deligne", "--format", "csv"]);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "E8,8,248,248,4124,34752"), "{text}");
    let o = run(&["mlde", "--c", "8", "-N", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mu"], "-1/3");
    assert_eq!(v["coeffs"]["coeffs"], serde_json::json!(["1", "248", "4124"]));
}
