use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_tensoreig"));
    c.env_remove("TENSOREIG_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&o.stdout),
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn assert_schema(command: &str, v: &Value) {
    let path = schema_dir().join(format!("{command}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator
        .iter_errors(v)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    assert!(
        errors.is_empty(),
        "{command} report violates schema: {errors:?}"
    );
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const CUBIC: &str = r#"{"degrees":[3],"dims":[1],"terms":[
  {"exponents":[[3,0]],"coeff":"1"},{"exponents":[[1,2]],"coeff":"-2"},{"exponents":[[0,3]],"coeff":"1/2"}]}"#;

const QUARTIC: &str = r#"{"degrees":[4],"dims":[2],"terms":[
  {"exponents":[[4,0,0]],"coeff":"1"},{"exponents":[[2,2,0]],"coeff":"3"},{"exponents":[[0,1,3]],"coeff":"-1"}]}"#;

const DENSE_QUARTIC: &str = r#"{"degrees":[4],"dims":[2],"terms":[
  {"exponents":[[4,0,0]],"coeff":"1"},{"exponents":[[2,2,0]],"coeff":"3"},{"exponents":[[0,1,3]],"coeff":"-1"},
  {"exponents":[[0,4,0]],"coeff":"2/3"},{"exponents":[[0,0,4]],"coeff":"-5/2"},{"exponents":[[1,1,2]],"coeff":"7"},
  {"exponents":[[3,0,1]],"coeff":"-2"},{"exponents":[[1,3,0]],"coeff":"1/4"}]}"#;

const SEGRE: &str = r#"{"degrees":[1,1,1],"dims":[1,1,1],"terms":[
  {"exponents":[[1,0],[1,0],[1,0]],"coeff":[0.3,-1.1]},{"exponents":[[0,1],[1,0],[0,1]],"coeff":[1.7,0.2]},
  {"exponents":[[1,0],[0,1],[0,1]],"coeff":[-0.4,0.9]},{"exponents":[[0,1],[0,1],[1,0]],"coeff":[0.8,0.5]},
  {"exponents":[[0,1],[0,1],[0,1]],"coeff":[-1.2,0.0]}]}"#;

#[test]
fn ed_degree_of_the_binary_segre_cube() {
    let o = run(&["ed-degree", "--degrees", "1,1,1", "--dims", "1,1,1"]);
    assert_eq!(code(&o), 0);
    let v = report(&o);
    assert_eq!(v["ed_degree"], "6");
    assert_eq!(v["manifest"]["command"], "ed-degree");
    assert_eq!(v["manifest"]["version"], env!("CARGO_PKG_VERSION"));
    assert_schema("ed-degree", &v);
}

#[test]
fn matrix_format_is_excluded() {
    let o = run(&["validate-format", "--degrees", "1,1", "--dims", "2,2"]);
    assert_eq!(code(&o), 0);
    let v = report(&o);
    assert_eq!(v["theorem_applicable"], false);
    assert_schema("validate-format", &v);
}

#[test]
fn missing_tensor_file_exits_2() {
    let o = run(&["harmonic", "--tensor", "definitely-missing.json"]);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("definitely-missing.json"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["no-such-command"])), 2);
    assert_eq!(code(&run(&["ed-degree", "--degrees", "1,1"])), 2);
    assert_eq!(
        code(&run(&["ed-degree", "--degrees", "1,1", "--dims", "1"])),
        2
    );
    assert_eq!(
        code(&run(&["ed-degree", "--degrees", "0", "--dims", "1"])),
        2
    );
    // seeds are mandatory for stochastic commands
    assert_eq!(code(&run(&["solve", "--tensor", "x.json"])), 2);
    assert_eq!(code(&run(&["reproduce-paper"])), 2);
    assert_eq!(
        code(&run(&["bott", "--family", "omega", "--m", "2", "--t", "1"])),
        2
    );
    assert_eq!(
        code(&run(&[
            "bott", "--family", "wedgeqq", "--m", "2", "--r", "3", "--t", "1"
        ])),
        2
    );
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn malformed_tensor_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        r#"{"degrees":[3],"dims":[1],"terms":[{"exponents":[[2,0]],"coeff":"1"}]}"#,
    );
    assert_eq!(code(&run(&["solve", "--tensor", &bad, "--seed", "1"])), 2);
    let junk = write(&dir, "junk.json", "not json");
    assert_eq!(code(&run(&["harmonic", "--tensor", &junk])), 2);
}

#[test]
fn bott_reports_support() {
    let o = run(&[
        "bott", "--family", "wedgeqq", "--m", "3", "--r", "2", "--t", "-2",
    ]);
    assert_eq!(code(&o), 0);
    let v = report(&o);
    assert_schema("bott", &v);
    // Serre duality anchor: H^m(O(-m-1)) is the only nonzero group
    let o = run(&["bott", "--family", "line", "--m", "4", "--t", "-5"]);
    let v = report(&o);
    assert_eq!(v["support"], serde_json::json!([4]));
    assert_schema("bott", &v);
}

#[test]
fn solve_then_fiber_check_from_tuples() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(&dir, "cubic.json", CUBIC);
    let o = run(&["solve", "--tensor", &t, "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let v = report(&o);
    assert_schema("solve", &v);
    assert_eq!(v["complete"], true);
    assert_eq!(v["tuples"].as_array().unwrap().len(), 3);

    let tuples = write(&dir, "tuples.json", &String::from_utf8(o.stdout).unwrap());
    let o = run(&["fiber-check", "--tensor", &t, "--tuples", &tuples]);
    assert_eq!(code(&o), 0);
    let v = report(&o);
    assert_schema("fiber-check", &v);
    assert_eq!(v["kernel_dimension"], 1);
    assert_eq!(v["solver"], Value::Null);
    assert!(v["input_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn fiber_check_even_degree_has_two_dimensional_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(&dir, "quartic.json", DENSE_QUARTIC);
    let o = run(&["fiber-check", "--tensor", &t, "--seed", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = report(&o);
    assert_schema("fiber-check", &v);
    assert_eq!(v["solver"]["complete"], true);
    assert_eq!(v["kernel_dimension"], 2);
    assert_eq!(v["q_membership"]["claimed"], true);
}

#[test]
fn incomplete_solve_is_not_a_violation() {
    // special quartic: only 12 of the 13 generic eigenvectors are isolated
    let dir = tempfile::tempdir().unwrap();
    let t = write(&dir, "quartic.json", QUARTIC);
    let o = run(&["fiber-check", "--tensor", &t, "--seed", "3"]);
    assert_eq!(code(&o), 0);
    let v = report(&o);
    assert_eq!(v["solver"]["complete"], false);
    assert_eq!(v["contract_violation"], false);
}

#[test]
fn fiber_check_flags_a_wrong_tuple_set() {
    // two of the three eigenvectors of a binary cubic leave a larger fiber
    let dir = tempfile::tempdir().unwrap();
    let t = write(&dir, "cubic.json", CUBIC);
    let o = run(&["solve", "--tensor", &t, "--seed", "7"]);
    let mut v = report(&o);
    v["tuples"].as_array_mut().unwrap().pop();
    let tuples = write(&dir, "partial.json", &v["tuples"].to_string());
    let o = run(&["fiber-check", "--tensor", &t, "--tuples", &tuples]);
    assert_eq!(code(&o), 3);
    let v = report(&o);
    assert_eq!(v["contract_violation"], true);
    assert_schema("fiber-check", &v);
}

#[test]
fn fiber_check_needs_seed_or_tuples() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(&dir, "cubic.json", CUBIC);
    assert_eq!(code(&run(&["fiber-check", "--tensor", &t])), 2);
}

#[test]
fn harmonic_components_and_kernel_constant() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(&dir, "quartic.json", QUARTIC);
    let o = run(&["harmonic", "--tensor", &t]);
    assert_eq!(code(&o), 0);
    let v = report(&o);
    assert_schema("harmonic", &v);
    let js: Vec<u64> = v["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["j"].as_u64().unwrap())
        .collect();
    assert_eq!(js, vec![0, 1, 2]);
    assert_eq!(v["kernel_component"], "2/5");

    let complex = write(&dir, "segre.json", SEGRE);
    assert_eq!(code(&run(&["harmonic", "--tensor", &complex])), 2);
}

#[test]
fn vanishing_scan_reports_witnesses_off_the_theorem() {
    let o = run(&["vanishing-scan", "--degrees", "1,1,1", "--dims", "1,1,3"]);
    assert_eq!(code(&o), 0);
    let v = report(&o);
    assert_schema("vanishing-scan", &v);
    assert_eq!(v["theorem_applicable"], false);
    assert_eq!(v["all_clear"], false);
    assert!(!v["witnesses"].as_array().unwrap().is_empty());

    let o = run(&["vanishing-scan", "--degrees", "2,2,2", "--dims", "2,2,2"]);
    assert_eq!(code(&o), 0);
    let v = report(&o);
    assert_eq!(v["all_clear"], true);
    assert_schema("vanishing-scan", &v);
}

#[test]
fn battery_report_matches_schema() {
    let o = run(&["reproduce-paper", "--seed", "5"]);
    let v = report(&o);
    assert_schema("reproduce-paper", &v);
    let all = v["all_passed"].as_bool().unwrap();
    assert_eq!(code(&o), if all { 0 } else { 3 });
    assert_eq!(
        String::from_utf8_lossy(&o.stderr)
            .lines()
            .filter(|l| l.starts_with("criterion "))
            .count(),
        8
    );
}

fn without_duration(mut v: Value) -> Value {
    v["manifest"]
        .as_object_mut()
        .unwrap()
        .remove("duration_seconds");
    v
}

#[test]
fn identical_runs_agree_except_for_timing() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(&dir, "segre.json", SEGRE);
    let cases: Vec<Vec<&str>> = vec![
        vec!["solve", "--tensor", &t, "--seed", "11"],
        vec!["fiber-check", "--tensor", &t, "--seed", "11"],
        vec!["reproduce-paper", "--seed", "2"],
        vec!["vanishing-scan", "--degrees", "2,3", "--dims", "2,2"],
    ];
    for args in cases {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(code(&a), code(&b));
        let (a, b) = (report(&a), report(&b));
        assert_eq!(
            a["manifest"]["checksum"], b["manifest"]["checksum"],
            "{args:?}"
        );
        assert_eq!(without_duration(a), without_duration(b), "{args:?}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(&dir, "segre.json", SEGRE);
    let one = bin()
        .args(["--threads", "1", "solve", "--tensor", &t, "--seed", "4"])
        .output()
        .unwrap();
    let many = bin()
        .env("TENSOREIG_THREADS", "4")
        .args(["solve", "--tensor", &t, "--seed", "4"])
        .output()
        .unwrap();
    let (a, b) = (report(&one), report(&many));
    assert_eq!(a["complete"], true);
    assert_eq!(a["tuples"].as_array().unwrap().len(), 6);
    assert_eq!(a["manifest"]["checksum"], b["manifest"]["checksum"]);
}

#[test]
fn pretty_prints_a_table() {
    let o = run(&["--pretty", "ed-degree", "--degrees", "2", "--dims", "2"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let line = text.lines().find(|l| l.starts_with("ed_degree")).unwrap();
    assert!(line.ends_with(" 3"), "{line}");
    assert!(text.contains("manifest.checksum"));
}

#[test]
fn checksum_changes_with_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(&dir, "segre.json", SEGRE);
    let a = report(&run(&[
        "solve",
        "--tensor",
        &t,
        "--seed",
        "1",
        "--max-restarts",
        "2",
    ]));
    let b = report(&run(&[
        "solve",
        "--tensor",
        &t,
        "--seed",
        "2",
        "--max-restarts",
        "2",
    ]));
    assert_ne!(a["manifest"]["checksum"], b["manifest"]["checksum"]);
    assert_eq!(a["manifest"]["seed"], 1);
}
