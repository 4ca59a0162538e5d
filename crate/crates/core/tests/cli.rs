use std::process::{Command, Output};

fn hexovoid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hexovoid"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn permanent_prints_the_count() {
    let o = hexovoid(&["permanent", "--q", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "18534400");
}

#[test]
fn nonexistence_q2_is_established() {
    let o = hexovoid(&["--format", "json", "nonexistence", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "no_distance2_ovoid");
}

#[test]
fn budget_limited_extension_is_inconclusive() {
    let o = hexovoid(&["extend", "--q", "4", "--budget-nodes", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("inconclusive"));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(hexovoid(&["permanent"]).status.code(), Some(1));
    assert_eq!(hexovoid(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        hexovoid(&["--format", "xml", "permanent", "--q", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(hexovoid(&["--help"]).status.code(), Some(0));
    let o = hexovoid(&["bound", "--q", "2", "--b", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("counting bound"));
    assert_eq!(
        hexovoid(&["classify", "--q", "4", "--out", "/nonexistent/x.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(hexovoid(&["permanent", "--q", "6"]).status.code(), Some(1));
}

#[test]
fn build_validate_and_ovoid_check() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.json");
    let h = h.to_str().unwrap();
    assert_eq!(
        hexovoid(&[
            "build",
            "--q",
            "2",
            "--which",
            "dualsplitcayley",
            "--out",
            h
        ])
        .status
        .code(),
        Some(0)
    );
    let o = hexovoid(&["validate", "--in", h, "--n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("order (2,2)"));
    assert_eq!(
        hexovoid(&["validate", "--in", h, "--n", "4"]).status.code(),
        Some(1)
    );
    let o = hexovoid(&["ovoid-check", "--geometry", h, "--j", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no distance-2 ovoid"));
    assert_eq!(
        hexovoid(&[
            "ovoid-check",
            "--geometry",
            h,
            "--j",
            "2",
            "--budget-nodes",
            "3"
        ])
        .status
        .code(),
        Some(2)
    );

    let pg = dir.path().join("pg.json");
    let pg = pg.to_str().unwrap();
    hexovoid(&["build", "--q", "3", "--which", "flaghex", "--out", pg]);
    let forced = dir.path().join("f.json");
    std::fs::write(&forced, "[0]").unwrap();
    let o = hexovoid(&[
        "--format",
        "json",
        "ovoid-check",
        "--geometry",
        pg,
        "--j",
        "2",
        "--forced",
        forced.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "solution_found");
    assert_eq!(v["witness"].as_array().unwrap().len(), 13);
}

#[test]
fn classify_table_export_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let classes = dir.path().join("c2.json");
    let classes = classes.to_str().unwrap();
    assert_eq!(
        hexovoid(&["classify", "--q", "2", "--out", classes])
            .status
            .code(),
        Some(0)
    );
    let o = hexovoid(&["table", "--q", "2", "--classes", classes, "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("7^3"));
    let lp = dir.path().join("lp");
    let o = hexovoid(&[
        "export-lp",
        "--q",
        "2",
        "--classes",
        classes,
        "--mode",
        "exact",
        "--out",
        lp.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(lp.join("class_000.lp")).unwrap();
    assert!(text.contains("Subject To") && text.ends_with("End\n"));
    let o = hexovoid(&["extend", "--q", "2", "--classes", classes]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1 infeasible"));
}

#[test]
fn bound_q2_writes_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let o = hexovoid(&[
        "--seed",
        "7",
        "bound",
        "--q",
        "2",
        "--b",
        "19",
        "--witness-out",
        w.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let pts: Vec<u32> = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(pts.len(), 19);
}

#[test]
fn jobs_flag_is_accepted() {
    let o = hexovoid(&["--jobs", "1", "subhex", "--q", "2", "--enumerate"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("enumerated 36"));
}
