use std::path::PathBuf;
use std::process::{Command, Output};

fn wn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wn")).args(args).output().unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run_file(name: &str, text: &str) -> Output {
    let path = scratch(name, text);
    wn(&["run", path.to_str().unwrap()])
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn empty_session_succeeds() {
    assert_eq!(run_file("empty.wn", "# nothing\n").status.code(), Some(0));
}

#[test]
fn parse_errors_exit_with_two() {
    let o = run_file("broken.wn", "ring A = ZZ[x;\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn unknown_names_exit_with_two() {
    assert_eq!(run_file("dangling.wn", "ideal I in B = (x);\n").status.code(), Some(2));
}

#[test]
fn failed_expectation_exits_with_one() {
    let o = run_file("failed.wn", "ring A = ZZ[x];\nideal I in A = (2, x);\nmember(I, 1) expect true;\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAILED]"), "{}", stdout(&o));
}

#[test]
fn runtime_errors_exit_with_one() {
    let o = run_file("error.wn", "ring A = ZZ[x];\nideal I in A = (x);\nsatpow(I, 2, x);\n");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn satisfied_expectations_exit_with_zero() {
    let o = run_file("ok.wn", "ring A = ZZ[x];\nideal I in A = (2, x);\nmember(I, x^2 + 2) expect true;\ngb(I) expect \"(2, x)\";\n");
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn json_report_has_the_schema_fields() {
    let path = scratch("report.wn", "ring A = ZZ[x];\nideal I in A = (2, x);\nmember(I, x) expect true;\n");
    let json = path.with_extension("json");
    let o = wn(&["run", path.to_str().unwrap(), "--json", json.to_str().unwrap(), "--no-timing"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&json).unwrap();
    for key in ["\"schema\": 1", "\"tool\": \"wn\"", "\"input_sha256\"", "\"entries\"", "\"status\": \"ok\"", "\"verdict\": \"true\""] {
        assert!(text.contains(key), "{key} missing from {text}");
    }
    assert!(!text.contains("timing_ms"));
}

#[test]
fn one_shot_member() {
    let o = wn(&["member", "--ring", "ZZ[X,Y]", "--ideal", "2, Y^2-4*X", "--elem", "Y"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("=> false"), "{}", stdout(&o));
}

#[test]
fn one_shot_yanagihara() {
    let o = wn(&["yanagihara", "--ring", "ZZ[X,Y]/(Y^2-4*X)", "--p", "2", "--b", "X", "--c", "Y", "--d", "2", "--e", "Y"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("YanagiharaViolation"));
}

#[test]
fn one_shot_manaresi() {
    let o = wn(&[
        "manaresi",
        "--source",
        "ZZ[X,Y]/(Y^2-4*X)",
        "--target",
        "ZZ[T]",
        "--images",
        "T^2, 2*T",
        "--elem",
        "T",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("ManaresiWitness"));
}

#[test]
fn bundled_sessions_meet_their_expectations() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("sessions");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let o = wn(&["run", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", path.display(), stdout(&o));
    }
}
