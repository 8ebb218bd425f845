use std::path::PathBuf;
use std::process::{Command, Output};

fn quasilr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasilr")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("quasilr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn generate_fibonacci() {
    let out = quasilr(&["generate", "--scheme", "preset:fibonacci", "--shape", "rect 0 4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[0].starts_with("n1,m1,w1"));
    assert!(lines[2].starts_with("1,1,0.88196"), "{}", lines[2]);
}

#[test]
fn partition_histogram() {
    let out = quasilr(&["partition", "--scheme", "preset:fibonacci", "--shape", "rect 0 3", "--radius", "50"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let arcs = text.lines().filter(|l| l.starts_with("1,0.")).count();
    assert_eq!(arcs, 4, "{text}");
    assert!(text.contains("\"components\""));
}

#[test]
fn scheme_file_round_trip() {
    let path = scratch("scheme.toml");
    std::fs::write(&path, "k = 3\nd = 2\nforms = [[\"sqrt(2)\", \"sqrt(3)\"]]\n").unwrap();
    let out = quasilr(&["test-lromega", "--scheme", path.to_str().unwrap(), "--shape", "rect 0,0 1,1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["mode"], "LR_Omega");
    assert!(report["records"][0]["C_star"].is_number());
    assert_eq!(report["spec_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn config_file_supplies_options() {
    let path = scratch("scan.toml");
    std::fs::write(&path, "alphas = \"phi\"\nn-max = 1000\n").unwrap();
    let out = quasilr(&["scan-littlewood", "--config", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("n,value"));
    assert!(text.lines().nth(1).unwrap().starts_with("1,3.81966"));
}

#[test]
fn exit_codes() {
    let rational = scratch("rational.toml");
    std::fs::write(&rational, "k = 2\nd = 1\nforms = [[\"1/3\"]]\n").unwrap();
    let cases: [(Vec<&str>, i32); 4] = [
        (vec!["generate", "--scheme", rational.to_str().unwrap(), "--shape", "rect 0 3"], 2),
        (vec!["compare-windows", "--scheme", "preset:witness-phi-sqrt2", "--radius", "3"], 3),
        (vec!["partition", "--scheme", "preset:fibonacci", "--shape", "scale 1/3 rect 1 2"], 4),
        (vec!["generate", "--scheme", "preset:nonexistent", "--shape", "rect 0 1"], 1),
    ];
    for (args, code) in cases {
        let out = quasilr(&args);
        assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn compare_windows_consistent() {
    let out = quasilr(&["compare-windows", "--scheme", "preset:witness-reduced", "--radius", "10"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["consistent"], true);
}
