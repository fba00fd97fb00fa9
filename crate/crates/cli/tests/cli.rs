use std::process::{Command, Output};

fn werner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_werner"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = werner(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&all)).unwrap()
}

#[test]
fn dims() {
    let v = json(&["dims", "2,1"]);
    assert_eq!(
        (v["dim_sym"].as_u64(), v["dim_unitary"].as_u64()),
        (Some(2), Some(2))
    );
    assert_eq!(v["trace"], "4");
    let v = json(&["dims", "3"]);
    assert_eq!(
        (v["dim_sym"].as_u64(), v["dim_unitary"].as_u64()),
        (Some(1), Some(4))
    );
    let out = werner(&["dims", "2,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rows"));
}

#[test]
fn parse_errors_carry_a_position() {
    let out = werner(&["dims", "2,x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 2"));
}

#[test]
fn lr() {
    assert_eq!(json(&["lr", "2", "1", "1"])["coefficient"], 1);
    let v = json(&["lr", "2,2", "2", "1,1"]);
    assert_eq!(v["coefficient"], 0);
    assert_eq!(v["agree"], true);
    let v = json(&["lr", "3,1", "2", "1,1", "--witness"]);
    assert_eq!(v["coefficient"], 1);
    assert_eq!(v["tableaux"].as_array().unwrap().len(), 1);
    let v = json(&["lr", "3", "1", "1"]);
    assert_eq!(
        (v["coefficient"].as_u64(), v["size_mismatch"].as_bool()),
        (Some(0), Some(true))
    );
}

#[test]
fn char_and_horn() {
    assert_eq!(stdout(&["char", "2,1", "3"]).trim(), "-1");
    assert_eq!(stdout(&["char", "3,1", "1,1,1,1"]).trim(), "3");
    let v = json(&["horn", "2,2", "2", "1,1"]);
    assert_eq!(
        (v["basic_horn"].as_bool(), v["feasible"].as_bool()),
        (Some(false), Some(false))
    );
    let v = json(&["horn", "2,0", "1", "1", "--feasible"]);
    assert!(v["basic_horn"].is_null());
    assert_eq!(v["feasible"], true);
}

#[test]
fn spectrum_tables() {
    let csv = stdout(&["spectrum", "4,0", "--q", "0", "--format", "csv"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines,
        [
            "frame,weight_numerator,weight_denominator,weight_float",
            "\"4,0\",1,1,1"
        ]
    );

    let csv = stdout(&["spectrum", "4,0", "--k", "1", "--format", "csv"]);
    let frames: Vec<&str> = csv.lines().skip(1).map(|l| &l[..5]).collect();
    assert_eq!(frames, ["\"4,0\"", "\"3,1\""]);

    let v = json(&["spectrum", "6", "--q", "0.3", "--include-zeros"]);
    assert_eq!(v["total"], "1/1");
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    let raw = json(&["spectrum", "4", "--k", "1", "--raw"]);
    assert_eq!(raw["total"], "5/1");
}

#[test]
fn spectrum_respects_caps() {
    let out = werner(&["spectrum", "9", "--q", "1/2", "--cap-n", "8"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--cap-n"));
    assert_eq!(
        werner(&["spectrum", "4", "--q", "3/2"]).status.code(),
        Some(2)
    );
}

#[test]
fn sweep_columns() {
    let csv = stdout(&[
        "sweep", "4", "--q-grid", "0,1", "--format", "csv", "--exact",
    ]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "frame,q=0,q=1");
    assert_eq!(lines[1], "\"4,0\",1/1,5/16");
    assert_eq!(lines[2], "\"3,1\",0/1,9/16");
    assert_eq!(lines[3], "\"2,2\",0/1,1/8");
    assert_eq!(
        werner(&["sweep", "4", "--q-grid", ""]).status.code(),
        Some(2)
    );
}

#[test]
fn xy() {
    let v = json(&["xy", "4,0", "3,1", "--k", "2"]);
    assert_eq!(v["x"], "1");
    assert_eq!(v["lemma"]["holds"], true);
    let v = json(&["xy", "4,0", "2,2", "--k", "1"]);
    assert_eq!(v["x"], "0");
    assert!(v["argmax"].is_null());
}

#[test]
fn verify_exit_codes_and_determinism() {
    let dir = std::env::temp_dir().join(format!("werner-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for path in [&a, &b] {
        let out = werner(&[
            "verify",
            "thm1",
            "--cap-n",
            "5",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (ra, rb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ra, rb);
    let report: serde_json::Value = serde_json::from_slice(&ra).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["config"]["d2_max_n"], 5);
    std::fs::remove_dir_all(&dir).unwrap();

    assert_eq!(werner(&["verify", "thm7"]).status.code(), Some(2));
    assert_eq!(
        werner(&["verify", "oracle", "--cap-n", "11"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_text_summary() {
    let text = stdout(&["verify", "lemma", "--cap-n", "6"]);
    assert!(text.contains("PASS lemma.entropy_bound"));
    assert!(text.trim_end().ends_with("passed true"));
}
