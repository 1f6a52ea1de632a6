use jsonschema::JSONSchema;
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn staircase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_staircase"))
        .args(args)
        .env_remove("STAIRCASE_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = staircase(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    serde_json::from_str(&stdout_of(args)).unwrap()
}

fn check_schema(name: &str, value: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let compiled = JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(value) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{name}: {msgs:?}\n{value:#}");
}

fn as_f64(v: &Value) -> f64 {
    v.as_str().map_or_else(|| v.as_f64().unwrap(), |s| s.parse().unwrap())
}

#[test]
fn golden_value_at_one_half() {
    let v = json_of(&["delta", "eval", "--alpha", "1/2"]);
    check_schema("delta", &v);
    assert_eq!(v["expansion"], "11");
    let (lo, hi) = (as_f64(&v["beta"]["lo"]), as_f64(&v["beta"]["hi"]));
    assert!(lo <= 1.618_033_988_75 && 1.618_033_988_74 <= hi);
    assert!(v["beta"]["lo"].as_str().unwrap().starts_with("1.6180339887"));
}

#[test]
fn christoffel_two_fifths() {
    let v = json_of(&["word", "christoffel", "2", "5"]);
    check_schema("word", &v);
    assert_eq!(v["word"], "00101");
    let upper = json_of(&["word", "christoffel", "2", "5", "--upper"]);
    assert_eq!(upper["word"], "10100");
}

#[test]
fn targeted_theta_headline() {
    let v = json_of(&["measure", "theta", "--preset", "targeted:2", "-N", "6"]);
    check_schema("measure", &v);
    let h = &v["headline"];
    assert!((h["lo"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-3);
    assert!((h["hi"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-3);
}

#[test]
fn every_json_output_matches_its_schema() {
    let cases: &[(&str, &[&str])] = &[
        ("word", &["word", "central", "3", "8"]),
        ("word", &["word", "bzb", "2", "2", "5"]),
        ("word", &["word", "mechanical", "--cf", "0,fib", "-n", "30", "--upper"]),
        ("word", &["word", "admissible", "1(10)^w"]),
        ("delta", &["delta", "eval", "--alpha", "1/2", "--right-limit"]),
        ("delta", &["delta", "eval", "--alpha", "0"]),
        ("delta", &["delta", "eval", "--preset", "sqrt2"]),
        ("plot", &["delta", "plot", "--max-den", "5", "--format", "json"]),
        ("cf-expand", &["cf", "expand", "--value", "355/113"]),
        ("cf-expand", &["cf", "expand", "--lo", "1.41421356", "--hi", "1.41421357"]),
        ("convergents", &["cf", "convergents", "--cf", "2,e-pattern", "-N", "8"]),
        ("convergents", &["cf", "convergents", "--preset", "alpha6", "-N", "5"]),
        ("measure", &["measure", "mu", "--preset", "golden", "-N", "30"]),
        ("measure", &["measure", "theta", "--preset", "alpha4:2", "-N", "4"]),
        ("classify", &["classify", "--preset", "alpha5:2", "-N", "6"]),
        ("classify", &["classify", "--cf", "0,1,2,3,4,5"]),
        ("trace", &["probe", "left", "--alpha", "1/2", "--format", "json"]),
        ("trace", &["probe", "right", "--alpha", "1", "-K", "4", "--format", "json"]),
        ("trace", &["probe", "zero", "-K", "6", "--format", "json"]),
        ("trace", &["probe", "irrational", "--preset", "golden", "-K", "5", "--format", "json"]),
        ("lowerbound", &["probe", "lowerbound", "--alpha", "1/2", "--alpha-n", "7/15"]),
        ("lowerbound", &["probe", "lowerbound", "--random", "4", "--seed", "3"]),
        ("presets", &["presets"]),
    ];
    for (schema, args) in cases {
        check_schema(schema, &json_of(args));
    }
}

#[test]
fn csv_outputs_have_headers() {
    let cases: &[(&[&str], &str)] = &[
        (&["delta", "plot", "--max-den", "4"], "slope_num,slope_den,delta_lo,delta_hi,right_lo,right_hi,jump_lo"),
        (&["probe", "left", "--alpha", "2/5", "-K", "4"], "k,alpha_k_num,alpha_k_den,quotient_lo,quotient_hi"),
        (&["delta", "eval", "--alpha", "2/5", "--format", "csv"], "slope,side,beta_lo,beta_hi,expansion,nature"),
        (&["cf", "convergents", "--preset", "golden", "--format", "csv"], "index,a,p,q,ln_q_lo,ln_q_hi"),
        (&["measure", "mu", "--preset", "e", "--format", "csv"], "n,value_lo,value_hi"),
        (&["word", "central", "2", "5", "--format", "csv"], "kind,word,admissible"),
    ];
    for (args, header) in cases {
        let text = stdout_of(args);
        assert_eq!(text.lines().next(), Some(*header), "{args:?}");
        let width = header.split(',').count();
        for line in text.lines().skip(1).filter(|l| !l.starts_with('#')) {
            assert_eq!(line.split(',').count(), width, "{args:?}: {line}");
        }
    }
}

#[test]
fn probe_trace_ends_with_verdict() {
    let text = stdout_of(&["probe", "left", "--alpha", "2/5", "-K", "5"]);
    assert_eq!(text.lines().last(), Some("# verdict: toward_zero"));
    let text = stdout_of(&["probe", "zero", "-K", "8"]);
    assert_eq!(text.lines().last(), Some("# verdict: toward_infinity"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let cases: &[&[&str]] = &[
        &["delta", "plot", "--max-den", "12"],
        &["delta", "eval", "--cf", "0,2,fib"],
        &["probe", "lowerbound", "--random", "5", "--seed", "11", "--format", "csv"],
        &["classify", "--preset", "alpha1"],
        &["probe", "irrational", "--preset", "sqrt2", "-K", "4"],
    ];
    for args in cases {
        let a = staircase(args);
        let b = staircase(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn seeds_change_random_pairs() {
    let a = stdout_of(&["probe", "lowerbound", "--random", "3", "--seed", "1", "--format", "csv"]);
    let b = stdout_of(&["probe", "lowerbound", "--random", "3", "--seed", "2", "--format", "csv"]);
    assert_ne!(a, b);
    for line in a.lines().skip(1) {
        assert!(line.ends_with(",true"), "{line}");
    }
}

#[test]
fn plot_writes_to_a_file() {
    let path = std::env::temp_dir().join(format!("staircase-plot-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let out = staircase(&["delta", "plot", "--max-den", "6", "--out", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(written, stdout_of(&["delta", "plot", "--max-den", "6"]));
}

#[test]
fn precision_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_staircase"))
        .args(["delta", "eval", "--alpha", "1/2"])
        .env("STAIRCASE_PRECISION", "6")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["beta"]["lo"], "1.61803");
    assert_eq!(v["beta"]["hi"], "1.61804");
}

fn assert_failure(args: &[&str], code: i32, prefix: &str) {
    let out = staircase(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    if !prefix.is_empty() {
        assert_eq!(err.lines().count(), 1, "{err}");
        assert!(err.starts_with(prefix), "{err}");
    }
}

#[test]
fn exit_codes() {
    assert_failure(&["delta", "eval", "--bogus"], 1, "");
    assert_failure(&["frobnicate"], 1, "");
    assert_failure(&["delta", "eval", "--alpha", "1/2", "--cf", "0,fib"], 1, "");
    assert_failure(&["delta", "eval", "--alpha", "-1/2"], 2, "error: precondition:");
    assert_failure(&["delta", "eval", "--alpha", "one half"], 2, "error: precondition:");
    assert_failure(&["word", "christoffel", "2", "4"], 2, "error: precondition:");
    assert_failure(&["measure", "mu", "--preset", "nope"], 2, "error: precondition:");
    assert_failure(&["delta", "eval", "--cf", "0,1,0,2"], 2, "error: precondition:");
    assert_failure(&["cf", "expand", "--lo", "0.9", "--hi", "1.1"], 3, "error: certification:");
    assert_failure(&["probe", "irrational", "--preset", "alpha3", "-K", "3"], 3, "error: unrepresentable:");
}

#[test]
fn help_exits_cleanly() {
    let out = staircase(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("delta"));
}
