use std::process::{Command, Output};

fn torical(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torical")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = torical(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn repeated_runs_are_identical() {
    let cases: &[&[&str]] = &[
        &["width", "--class", "overtorical", "--n", "5", "--sigma", "20"],
        &["--format", "json", "riccati", "--n", "3", "--sigma", "6", "--table", "11"],
        &["band", "--n", "3", "--sigma", "6", "--m-minus", "-1", "--m-plus", "-1"],
        &["torus", "--table", "32"],
        &["--format", "json", "gauss", "--n", "3"],
        &["round", "--m", "3", "--rho", "1", "--eps", "0.01"],
        &["decay", "--alpha", "0.25,0.5,0.75", "--radius", "10,100"],
    ];
    for args in cases {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}

#[test]
fn width_value() {
    let csv = stdout(&["width", "--class", "overtorical", "--n", "5", "--sigma", "20"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("class,n,sigma,k,bound"));
    let bound: f64 = lines.next().unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!((bound - 2.0 * std::f64::consts::PI / 5.0).abs() < 1e-10);
}

#[test]
fn exit_codes() {
    assert_eq!(torical(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(torical(&["width", "--class", "overtorical", "--n", "0", "--sigma", "20"]).status.code(), Some(2));
    assert_eq!(torical(&["width", "--class", "nonsense", "--n", "3", "--sigma", "1"]).status.code(), Some(2));
    assert_eq!(torical(&["gauss", "--n", "4", "--curvatures", "1,2"]).status.code(), Some(2));
    let bad = torical(&["round", "--m", "3", "--rho", "1", "--eps", "0.9"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
    assert!(!bad.stderr.is_empty());
}

#[test]
fn json_key_order() {
    let json = stdout(&["--format", "json", "width", "--class", "overtorical", "--n", "5", "--sigma", "20"]);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    let row = value["rows"][0].as_object().unwrap();
    let keys: Vec<&str> = row.keys().map(String::as_str).collect();
    assert_eq!(&keys[..5], &["class", "n", "sigma", "k", "bound"]);
}

#[test]
fn out_file_is_written_whole() {
    let dir = std::env::temp_dir().join(format!("torical-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    std::fs::write(&path, "stale").unwrap();
    let out = torical(&["--out", path.to_str().unwrap(), "torus", "--table", "16"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&["torus", "--table", "16"]));
    let leftovers: Vec<_> = std::fs::read_dir(&dir).unwrap().filter_map(|e| e.ok()).filter(|e| e.path() != path).collect();
    assert!(leftovers.is_empty());
    std::fs::remove_dir_all(&dir).unwrap();
}
