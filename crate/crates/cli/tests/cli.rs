use std::fs;
use std::process::{Command, Output};

fn lensbook(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lensbook")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn smoke_prints_json() {
    let o = lensbook(&["--n", "2", "--p", "4", "--word", "a(1,2)"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout(&o);
    assert!(v.starts_with(r#"{"page":{"genus":0,"#));
    assert!(v.contains(r#""manifold":{"p":4}"#));
}

#[test]
fn small_p_exits_two() {
    let o = lensbook(&["--n", "2", "--p", "2", "--word", "a(1,2)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("p > 2n-2"));
    assert!(o.stdout.is_empty());
}

#[test]
fn bad_word_exits_one() {
    let o = lensbook(&["--n", "1", "--p", "3", "--word", "a(1,5)"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn emits_files_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    fs::write(&input, "n=3 p=0\na(1,4) a(2,5)^-2\n").unwrap();
    let mut outputs = Vec::new();
    for k in 0..2 {
        let json = dir.path().join(format!("b{k}.json"));
        let svg = dir.path().join(format!("b{k}.svg"));
        let trace = dir.path().join(format!("t{k}.txt"));
        let o = lensbook(&[
            "--input",
            input.to_str().unwrap(),
            "--emit-json",
            json.to_str().unwrap(),
            "--emit-svg",
            svg.to_str().unwrap(),
            "--emit-trace",
            trace.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(fs::read_to_string(&json).unwrap(), stdout(&o));
        outputs.push((stdout(&o), fs::read(&svg).unwrap(), fs::read(&trace).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(String::from_utf8_lossy(&outputs[0].1).starts_with("<svg"));
}

#[test]
fn verify_only_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    let trace = dir.path().join("t.txt");
    let json = dir.path().join("b.json");
    fs::write(&input, "n=2 p=5 a(1,3) a(2,4)^-1").unwrap();
    let o = lensbook(&[
        "--input",
        input.to_str().unwrap(),
        "--emit-trace",
        trace.to_str().unwrap(),
        "--emit-json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));

    let args = |t: &str| {
        vec!["--verify-only".to_string(), "--input".into(), input.display().to_string(), "--trace".into(), t.to_string()]
    };
    let mut good = args(trace.to_str().unwrap());
    good.extend(["--json".to_string(), json.display().to_string()]);
    let o = Command::new(env!("CARGO_BIN_EXE_lensbook")).args(&good).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    // flip the sign of the first blow-up
    let text = fs::read_to_string(&trace).unwrap().replacen("e=+1", "e=-1", 1);
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, text).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_lensbook")).args(args(bad.to_str().unwrap())).output().unwrap();
    assert_eq!(o.status.code(), Some(1));

    // JSON that does not match the trace
    let other = dir.path().join("other.json");
    fs::write(&other, fs::read_to_string(&json).unwrap().replace(r#""p":5"#, r#""p":6"#)).unwrap();
    let mut mismatched = args(trace.to_str().unwrap());
    mismatched.extend(["--json".to_string(), other.display().to_string()]);
    let o = Command::new(env!("CARGO_BIN_EXE_lensbook")).args(&mismatched).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fuzz_self_test() {
    let o = lensbook(&["--fuzz", "50", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "50 inputs, seed 7, 0 failures");
}
