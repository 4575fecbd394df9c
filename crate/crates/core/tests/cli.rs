use std::path::Path;
use std::process::Command;

fn torloc(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_torloc")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

#[test]
fn fixtures_pass_with_exit_zero() {
    for (cmd, file, degree) in [
        ("les", "circle.json", None),
        ("lifts", "circle.json", Some("1")),
        ("abbv", "p1_unit.json", None),
        ("abbv", "p1_euler.json", None),
        ("abbv", "p1_o1.json", None),
        ("abbv", "p2_line_point.json", None),
        ("ktheory", "p2_ktheory_d3.json", None),
    ] {
        let path = fixture(file);
        let mut args = vec![cmd, "--input", &path];
        if let Some(d) = degree {
            args.extend(["--degree", d]);
        }
        let out = torloc(&args);
        assert_eq!(out.status.code(), Some(0), "{cmd} {file}: {}", String::from_utf8_lossy(&out.stdout));
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json output");
        assert_eq!(v["all_passed"], true);
    }
}

#[test]
fn text_format_has_summary() {
    let path = fixture("p2_ktheory_d3.json");
    let out = torloc(&["ktheory", "--input", &path, "--format", "text"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("summary:"), "{s}");
}

#[test]
fn missing_and_malformed_input_exit_two() {
    let out = torloc(&["les", "--input", "/nonexistent/x.json"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("torloc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ \"vertices\": 3, ").unwrap();
    let out = torloc(&["les", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    let out = torloc(&["les"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_check_exits_one() {
    let dir = std::env::temp_dir().join(format!("torloc-cli-fail-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("wrong.json");
    // a correction term with a unit component is not nilpotent
    let src = std::fs::read_to_string(fixture("p2_line_point.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&src).unwrap();
    v["components"][0]["corrections"] = serde_json::json!([["1", "1"]]);
    std::fs::write(&p, v.to_string()).unwrap();
    let out = torloc(&["abbv", "--input", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn verify_is_deterministic_and_passes() {
    let a = torloc(&["verify", "--seed", "7"]);
    let b = torloc(&["verify", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
