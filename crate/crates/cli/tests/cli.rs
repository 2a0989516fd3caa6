use std::process::{Command, Output};

fn colorfact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_colorfact"))
        .args(args)
        .env_remove("COLORFACT_GUARD")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn parse_bfile(text: &str) -> Vec<(u64, String)> {
    text.lines()
        .map(|line| {
            let (n, v) = line.split_once(' ').expect("two fields");
            assert!(!v.contains(' '), "single space separator");
            (n.parse().unwrap(), v.to_string())
        })
        .collect()
}

#[test]
fn compute_worked_example() {
    let out = colorfact(&["compute", "--family", "A", "--l", "2", "--n", "12"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "16\n");
    let out = colorfact(&["compute", "--family", "Bt", "--l", "2", "--n", "12"]);
    assert_eq!(stdout(&out), "30\n");
}

#[test]
fn compute_methods_agree() {
    for method in ["dirichlet", "recursion"] {
        let out = colorfact(&[
            "compute", "--family", "b", "--l", "2", "--n", "12", "--method", method,
        ]);
        assert_eq!(stdout(&out), "6\n", "{method}");
    }
    let out = colorfact(&[
        "compute", "--family", "fkl", "--l", "2", "--k", "2", "--n", "12", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], "8");
    assert_eq!(v["family"]["kind"], "PartsA");
}

#[test]
fn prime_power_bfile() {
    let out = colorfact(&[
        "table",
        "--family",
        "A",
        "--l",
        "2",
        "--slice",
        "prime-powers",
        "--max",
        "6",
        "--format",
        "bfile",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1 2\n2 5\n3 10\n4 20\n5 36\n6 65\n");
}

#[test]
fn bfile_round_trips() {
    let out = colorfact(&[
        "table", "--family", "At", "--l", "2", "--max", "200", "--format", "bfile",
    ]);
    let rows = parse_bfile(&stdout(&out));
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().zip(1..).all(|((n, _), i)| *n == i));
    assert_eq!(rows[11].1, "42");
    let json = colorfact(&[
        "table", "--family", "At", "--l", "2", "--max", "200", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let from_json: Vec<(u64, String)> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["index"].as_u64().unwrap(),
                r["value"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    assert_eq!(rows, from_json);
}

#[test]
fn csv_and_primorials() {
    let out = colorfact(&[
        "table",
        "--family",
        "Bt",
        "--l",
        "1",
        "--slice",
        "primorials",
        "--max",
        "4",
        "--format",
        "csv",
    ]);
    assert_eq!(stdout(&out), "m,value\n1,1\n2,3\n3,13\n4,75\n");
}

#[test]
fn enumerate_lists() {
    let out = colorfact(&[
        "enumerate",
        "--n",
        "12",
        "--l",
        "2",
        "--distinct",
        "--exact",
    ]);
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(
        lines,
        [
            "6.2*2.1",
            "6.1*2.2",
            "4.2*3.1",
            "4.1*3.2",
            "3.2*2.2*2.1",
            "3.1*2.2*2.1"
        ]
    );
    let out = colorfact(&[
        "enumerate",
        "--n",
        "12",
        "--l",
        "2",
        "--ordered",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["count"], 42);
}

#[test]
fn verify_passes() {
    let out = colorfact(&["verify", "--max", "200", "--lmax", "3"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 14);
}

#[test]
fn asymptotic_report() {
    let out = colorfact(&[
        "asymptotic",
        "--l",
        "1",
        "--x",
        "100000",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["beta"].as_f64().unwrap() - 1.728_647_24).abs() < 1e-8);
    let ratio = v["ratio"].as_f64().unwrap();
    assert!((0.9..=1.1).contains(&ratio));
}

#[test]
fn exit_codes() {
    assert_eq!(
        colorfact(&["compute", "--family", "A", "--l", "2", "--n", "12", "--frob"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        colorfact(&["compute", "--family", "Z", "--l", "2", "--n", "12"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        colorfact(&["compute", "--family", "A", "--l", "0", "--n", "12"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        colorfact(&["compute", "--family", "A", "--n", "12"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        colorfact(&["asymptotic", "--l", "1", "--x", "100000000"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        colorfact(&["verify", "--max", "20000", "--lmax", "1"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn guard_env_var() {
    let run = |guard: &str, args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_colorfact"))
            .args(args)
            .env("COLORFACT_GUARD", guard)
            .output()
            .unwrap()
    };
    let enumerate = ["enumerate", "--n", "12", "--l", "2"];
    assert_eq!(run("5", &enumerate).status.code(), Some(3));
    assert!(run("16", &enumerate).status.success());
    let compute = ["compute", "--family", "A", "--l", "2", "--n", "1024"];
    assert_eq!(run("10", &compute).status.code(), Some(3));
    assert!(run("1000", &compute).status.success());
    assert_eq!(run("lots", &compute).status.code(), Some(2));
}
