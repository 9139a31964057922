use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn orbsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbsurf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn temp_file(name: &str, body: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("orbsurf-{}-{name}", std::process::id()));
    std::fs::File::create(&path)
        .unwrap()
        .write_all(body.as_bytes())
        .unwrap();
    path
}

#[test]
fn double_plane_cover() {
    let out = orbsurf(&["cover", "--surface", "p2", "--L", "1", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["subcommand"], "cover");
    assert_eq!(v["outputs"]["c1_sq"], 8);
    assert_eq!(v["outputs"]["c2"], 4);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["assumptions"]
        .as_array()
        .unwrap()
        .contains(&Value::from("cover-canonical-formula")));
}

#[test]
fn cover_csv_and_surface_file() {
    let surface =
        r#"{"basis":["f1","f2"],"gram":[[0,1],[1,0]],"canonical":[-2,-2],"c1_sq":8,"c2":4}"#;
    let path = temp_file("quadric.json", surface);
    let out = orbsurf(&[
        "cover",
        "--surface-file",
        path.to_str().unwrap(),
        "--L",
        "2,1",
        "--m",
        "2",
        "--csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    // Double cover of P1xP1 branched in (4, 2): c1² = 2(8 + 2·(-6) + 4) = 0, c2 = 2(4 - 6 + 8) = 12.
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "m,c1_sq,c2,diff,chi_o\n2,0,12,-12,1\n"
    );
}

#[test]
fn bt_search_finds_first_positive_config() {
    let out = orbsurf(&[
        "bt-search",
        "--k",
        "3..3",
        "--a",
        "1..40",
        "--b",
        "1..1",
        "--m",
        "32..32",
        "--mode",
        "pencil-class",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let configs = v["outputs"]["configs"].as_array().unwrap();
    assert_eq!(configs[0]["a"], 36);
    assert_eq!(configs[0]["alpha"], "3/4");
    assert!(configs
        .iter()
        .all(|c| !c["assumptions"].as_array().unwrap().is_empty()));
    assert_eq!(v["outputs"]["cells_evaluated"], 40);
}

#[test]
fn bt_search_without_certificate_exits_2() {
    let out = orbsurf(&[
        "bt-search",
        "--k",
        "3",
        "--a",
        "1..5",
        "--b",
        "1",
        "--m",
        "32",
        "--mode",
        "pencil-class",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["outputs"]["configs"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn malformed_range_names_token() {
    let out = orbsurf(&[
        "bt-search",
        "--k",
        "3..q",
        "--a",
        "1",
        "--b",
        "1",
        "--m",
        "2",
        "--mode",
        "pencil-class",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("`q`"), "{err}");
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(orbsurf(&["bt-search", "--k", "3"]).status.code(), Some(1));
    assert_eq!(orbsurf(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(
        orbsurf(&["cover", "--surface", "p2", "--L", "1,2", "--m", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(orbsurf(&["--help"]).status.code(), Some(0));
}

#[test]
fn bound_csv_and_certificate() {
    let out = orbsurf(&[
        "bound", "--k", "3", "--a", "36", "--b", "1", "--m", "32", "--q-max", "80", "--csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,chi,quotient_exact,twist_penalty,LB"));
    assert_eq!(lines.count(), 80);

    let v = json(&orbsurf(&[
        "bound", "--k", "3", "--a", "36", "--b", "1", "--m", "32", "--q-max", "80",
    ]));
    let cert = &v["outputs"]["certificate"];
    assert_eq!(cert["alpha"], "3/4");
    assert_eq!(cert["leading_coeff"], "4096");
    assert_eq!(cert["threshold"], 70);
    assert!(!cert["assumptions"].as_array().unwrap().is_empty());
}

#[test]
fn bound_without_threshold_exits_2() {
    let out = orbsurf(&[
        "bound", "--k", "3", "--a", "1", "--b", "1", "--m", "32", "--q-max", "50",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["outputs"]["certificate"]["threshold"].is_null());
}

#[test]
fn twisted_bound_records_extra_assumptions() {
    let v = json(&orbsurf(&[
        "bound", "--k", "3", "--a", "36", "--b", "1", "--m", "32", "--q-max", "150", "--twist", "K",
    ]));
    let a = v["assumptions"].as_array().unwrap();
    assert!(a.contains(&Value::from("twisted-h2-bound")));
    assert_eq!(v["outputs"]["certificate"]["threshold"], 97);
}

#[test]
fn tangency_inline_and_file() {
    let germ = r#"{"x":[0,1],"y":[0,0,1,0,0,1],"T":16}"#;
    let out = orbsurf(&[
        "tangency",
        "--germ",
        germ,
        "--divisor",
        r#"{"0,1":1,"2,0":-1}"#,
        "--m",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["outputs"]["contact"]["order"], 5);
    assert_eq!(v["outputs"]["contact"]["m_tangent"], true);

    let path = temp_file("germ.json", germ);
    let out = orbsurf(&[
        "tangency",
        "--germ",
        path.to_str().unwrap(),
        "--divisor",
        r#"{"0,1":"1/2","2,0":"-1/2"}"#,
        "--m",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["outputs"]["contact"]["classical_m_tangent"], false);
    assert_eq!(v["outputs"]["contact"]["nonclassical_m_tangent"], true);
}

#[test]
fn tangency_beyond_truncation_is_indeterminate() {
    let out = orbsurf(&[
        "tangency",
        "--germ",
        r#"{"x":[0,1],"y":[0,0,1],"T":8}"#,
        "--divisor",
        r#"{"0,1":1,"2,0":-1}"#,
        "--m",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["outputs"]["contact"]["order"], ">=8");
    assert_eq!(v["outputs"]["contact"]["m_tangent"], "indeterminate");
}

#[test]
fn config_file_mirrors_flags_and_flags_win() {
    let path = temp_file(
        "search.toml",
        "k = \"3..3\"\na = \"1..40\"\nb = \"1\"\nm = \"32\"\nmode = \"pencil-class\"\n",
    );
    let cfg = path.to_str().unwrap();
    let v = json(&orbsurf(&["--config", cfg, "bt-search"]));
    assert_eq!(v["outputs"]["configs"].as_array().unwrap().len(), 5);
    let v = json(&orbsurf(&["bt-search", "--config", cfg, "--a", "38..38"]));
    let configs = v["outputs"]["configs"].as_array().unwrap();
    assert_eq!(configs.len(), 1);
    assert_eq!(configs[0]["a"], 38);

    let bad = temp_file("bad.toml", "q-max = 3\n");
    assert_eq!(
        orbsurf(&["--config", bad.to_str().unwrap(), "bt-search"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn thread_count_does_not_change_output() {
    let args = [
        "bt-search",
        "--k",
        "3..5",
        "--a",
        "34..38",
        "--b",
        "1..2",
        "--m",
        "20..32",
        "--mode",
        "pencil-class-over-m",
    ];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_orbsurf"))
            .args(args)
            .env("ORBSURF_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert_eq!(one.stdout, run("3").stdout);
    assert_eq!(run("0").status.code(), Some(1));
}

#[test]
fn verify_reports_check_count() {
    let out = orbsurf(&["verify", "--samples", "100", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["outputs"]["checks"].as_u64().unwrap() > 1000);
    assert!(v["outputs"]["failures"].as_array().unwrap().is_empty());
}
