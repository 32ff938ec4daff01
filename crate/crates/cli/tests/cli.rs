use std::process::{Command, Output};

use bsmonoid::{BoundVerdict, ScanReport};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsmonoid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn mul_examples() {
    let o = run(&["mul", "b^1*a^2", "b^2*a^5", "-n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "b^3*a^23");
    assert_eq!(
        stdout(&run(&["mul", "a^1", "b^1*a^0", "-n", "3"])).trim(),
        "b^1*a^3"
    );
    assert_eq!(
        stdout(&run(&["mul", "a^1", "b^1*a^0", "-n", "2"])).trim(),
        "b^1*a^2"
    );
}

#[test]
fn dilate_sum_example() {
    let o = run(&["dilate-sum", "1", "{0,1,3}", "3", "{0,1,3}"]);
    assert_eq!(stdout(&o).trim(), "{0,1,3,4,6,9,10,12} |.|=8");
    let o = run(&["dilate-sum", "-1", "{0,1}", "2", "{0,1}"]);
    assert_eq!(stdout(&o).trim(), "{-1,0,1,2} |.|=4");
}

#[test]
fn analyze_example() {
    let o = run(&["analyze", "{0,3,9}", "--mod", "3"]);
    assert!(
        stdout(&o).starts_with("ℓ=9 d=3 h=7 A*={0,1,3} c3=1"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn classify_and_square() {
    assert!(stdout(&run(&["classify", "{0,2,3}"])).starts_with("Type013"));
    assert!(stdout(&run(&["classify", "{0,1,2}"])).starts_with("None"));
    let o = run(&["square", "{a^0, a^1, b^1*a^0}"]);
    assert!(stdout(&o).trim().ends_with("|.|=7"), "{}", stdout(&o));
}

#[test]
fn verify_prints_a_verdict_and_round_trips() {
    let o = run(&[
        "verify",
        "--theorem",
        "thm3-direct",
        "--set",
        "{a^0,a^1,b^1*a^0}",
        "-n",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("bound 9/2"), "{text}");
    assert!(text.contains("holds"));

    let o = run(&[
        "verify",
        "--theorem",
        "thm3-direct",
        "--set",
        "{a^0,a^1,b^1*a^0}",
        "--output",
        "json",
    ]);
    let v: BoundVerdict = serde_json::from_str(&stdout(&o)).unwrap();
    let p = bsmonoid::GroupParams::new(3).unwrap();
    let s = bsmonoid::MonoidSet::parse("{a^0,a^1,b^1*a^0}", p).unwrap();
    assert_eq!(v, bsmonoid::theorems::verify_thm3_direct(&s));
}

#[test]
fn verify_set_theorems() {
    let o = run(&[
        "verify",
        "--theorem",
        "cor1.6",
        "--set",
        "{0,1,3}",
        "--r",
        "3",
    ]);
    assert!(stdout(&o).contains("holds boundary"), "{}", stdout(&o));
    let o = run(&["verify", "--theorem", "thm1.5", "--set", "{0,1,3,4}"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["verify", "--theorem", "bs12-direct", "--set", "{0,1,2}"]);
    assert!(stdout(&o).contains("lhs 7 bound 7"), "{}", stdout(&o));
    let o = run(&[
        "verify",
        "--theorem",
        "lemma2.3",
        "--set",
        "{a^1, b^1*a^0, b^2*a^0}",
    ]);
    assert!(
        stdout(&o).contains("lhs 8 bound 8 holds boundary"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn violation_exits_one() {
    let o = run(&[
        "verify",
        "--theorem",
        "lss",
        "--set",
        "{0,3}",
        "--set",
        "{0,1,3,4}",
        "--output",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let vs: Vec<BoundVerdict> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(vs.len(), 2);
    assert!(vs[1].is_violation());
    let o = run(&["verify", "--theorem", "thm1.3", "--set", "{0,1,4}"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    for args in [
        vec!["mul", "b^1*a^0", "q"],
        vec!["verify", "--theorem", "thm9", "--set", "{0}"],
        vec![
            "verify",
            "--theorem",
            "thm3-inverse",
            "--set",
            "{a^0,b^1*a^0}",
        ],
        vec!["scan", "--theorem", "cor1.6", "--k", "5..2"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let o = run(&["mul", "b^1*a^0", "a^2 x"]);
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error: parse: byte 4:"), "{err}");
}

#[test]
fn capacity_errors_exit_three() {
    let o = run(&["scan", "--theorem", "thm1.5", "--window", "80", "--k", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error: capacity:"));
    let o = run(&["mul", "b^3*a^0", "b^2*a^0", "--max-b", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scan_prints_a_report() {
    let o = run(&[
        "scan",
        "--theorem",
        "thm1.5",
        "--window",
        "12",
        "--k",
        "3..5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("scan Thm1_5:"), "{}", stdout(&o));

    let o = run(&[
        "scan",
        "--theorem",
        "thm1.5",
        "--window",
        "12",
        "--k",
        "3..4",
        "--require-zero",
        "--require-d1",
        "--dedup",
        "--equality",
        "--output",
        "json",
    ]);
    let r: ScanReport = serde_json::from_str(&stdout(&o)).unwrap();
    let got: Vec<String> = r.equality_cases.iter().map(|i| i.to_string()).collect();
    assert_eq!(got, ["A={0,1,3}", "A={0,1,3,4}", "A={0,1,4}"]);

    let o = run(&[
        "scan",
        "--theorem",
        "lss2",
        "--window",
        "6",
        "--k",
        "1..4",
        "--require-zero",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_and_csv() {
    let dir = std::env::temp_dir().join(format!("bsmonoid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.toml");
    std::fs::write(
        &path,
        "window = 4\nk_range = [3, 5]\nmax_b_exponent = 2\n[constraints]\nrequire_nonabelian = true\n",
    )
    .unwrap();
    let o = run(&[
        "scan",
        "--theorem",
        "thm3-direct",
        "--config",
        path.to_str().unwrap(),
        "--output",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..5], ["scan", "Thm3_Direct", "4805", "4773", "0"]);

    std::fs::write(dir.join("bad.toml"), "windw = 3\n").unwrap();
    let o = run(&[
        "scan",
        "--theorem",
        "thm3-direct",
        "--config",
        dir.join("bad.toml").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: config:"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn hunt_is_reproducible_from_the_command_line() {
    let args = [
        "hunt",
        "--theorem",
        "thm3-direct",
        "--window",
        "500",
        "--value-min",
        "-500",
        "--k",
        "3..7",
        "--max-b",
        "4",
        "--budget",
        "3000",
        "--seed",
        "11",
        "--output",
        "json",
    ];
    let a: ScanReport = serde_json::from_str(&stdout(&run(&args))).unwrap();
    let b: ScanReport = serde_json::from_str(&stdout(&run(&args))).unwrap();
    assert!(a.same_outcome(&b));
    assert_eq!(a.violation_count, 0);
}
