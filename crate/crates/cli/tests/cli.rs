use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsfh")).args(args).current_dir(root()).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{:?} failed: {}", args, String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn bsd_of_m1_prints_the_differential() {
    let s = stdout(&["invariant", "bsd", "fixtures/M1.hd"]);
    assert!(s.lines().any(|l| l == "d (y) = r''2 (x)"), "{}", s);
}

#[test]
fn check_accepts_fixtures() {
    for f in ["fixtures/W4.arc", "fixtures/M1.hd", "fixtures/M2.bsd.ops"] {
        stdout(&["check", f]);
    }
}

#[test]
fn missing_file_is_an_error() {
    let out = run(&["check", "fixtures/missing.hd"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.hd"));
}

#[test]
fn verify_suite_passes() {
    let s = stdout(&["verify", "paper-examples"]);
    assert!(!s.lines().any(|l| l.starts_with("FAIL")), "{}", s);
    assert!(s.trim_end().ends_with("0 failures"), "{}", s);
}

#[test]
fn tensor_then_reduce() {
    let s = stdout(&["tensor", "bsda:fixtures/M3.hd@2", "bsd:fixtures/M1.hd"]);
    assert!(s.contains("d (fgd*y) = I13 (fch*x) + s''1 (fge*y)"), "{}", s);
    let r = stdout(&["reduce", "fixtures/M3.s2.box.M1.ops"]);
    assert_eq!(r.lines().filter(|l| l.starts_with("d ")).count(), 1, "{}", r);
}

#[test]
fn output_is_deterministic() {
    for args in [&["invariant", "bsda", "fixtures/M3.hd", "--spinc", "2"][..], &["grading", "bsda", "fixtures/M3.hd", "--spinc", "2"], &["verify", "paper-examples", "--jobs", "3"]] {
        assert_eq!(stdout(args), stdout(args), "{:?}", args);
    }
}

#[test]
fn export_round_trips_through_check() {
    let path = std::env::temp_dir().join(format!("bsfh-cli-{}.ops", std::process::id()));
    let p = path.to_str().unwrap();
    stdout(&["invariant", "bsa", "fixtures/M1.hd", "--export", p]);
    let checked = stdout(&["check", p]);
    assert!(checked.contains("generators 2"), "{}", checked);
    let reference = std::fs::read_to_string(root().join("fixtures/M1.bsa.ops")).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), reference);
    std::fs::remove_file(&path).unwrap();
}
