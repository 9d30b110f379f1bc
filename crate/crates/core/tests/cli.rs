use std::process::{Command, Output};

fn ilgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ilgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_prints_exact_and_decimal_enclosures() {
    let o = ilgraph(&["eval", "0", "--depth", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("u(t) in [0, 0]"));

    let o = ilgraph(&["eval", "4/9"]);
    assert!(stdout(&o).contains("u(t) in [2/3, 2/3]"));

    let o = ilgraph(&["eval", "3/2", "--depth", "20"]);
    let text = stdout(&o);
    assert!(text.contains("reduced to 1/2"), "{text}");
    assert!(text.contains("0.49999"), "{text}");

    let o = ilgraph(&["eval", "-0.5", "--depth", "20"]);
    assert!(stdout(&o).contains("reduced to 1/2"));
}

#[test]
fn bad_input_exits_with_2() {
    assert_eq!(ilgraph(&["eval", "x/y"]).status.code(), Some(2));
    assert_eq!(ilgraph(&["eval", "1/0"]).status.code(), Some(2));
    assert_eq!(
        ilgraph(&["verify", "holder", "--level", "99"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(ilgraph(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(
        ilgraph(&["plot-iterates", "--levels", "40", "--out", "x.svg"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ilgraph(&[
            "verify",
            "blowup-divergence",
            "--target1",
            "1",
            "--target2",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn unwritable_path_exits_with_3() {
    let bad = "/nonexistent-dir/out.svg";
    assert_eq!(
        ilgraph(&["plot-ifs", "--depth", "1", "--out", bad])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        ilgraph(&["plot-iterates", "--out", bad]).status.code(),
        Some(3)
    );
    assert_eq!(
        ilgraph(&["verify", "holder", "--level", "2", "--out", bad])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn csv_iterates_have_exact_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.csv");
    let o = ilgraph(&[
        "plot-iterates",
        "--levels",
        "0,2",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(out).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "level,index,t,u");
    assert_eq!(rows.len(), 1 + 2 + 10);
    assert!(rows.contains(&"2,1,16/81,4/9"), "{rows:?}");
    assert_eq!(rows.last(), Some(&"2,9,1,1"));
}

#[test]
fn ifs_depth_zero_is_the_unit_square() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ifs.svg");
    assert!(
        ilgraph(&["plot-ifs", "--depth", "0", "--out", out.to_str().unwrap()])
            .status
            .success()
    );
    let svg = std::fs::read_to_string(out).unwrap();
    let rects: Vec<&str> = svg.lines().filter(|l| l.starts_with("<rect")).collect();
    assert_eq!(rects.len(), 1);
    assert!(rects[0].contains("width=\"1.000000\" height=\"1.000000\""));
    assert_eq!(svg.matches("<circle").count(), 2);
}

#[test]
fn reports_are_byte_identical_and_exit_0() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = ilgraph(&[
            "verify",
            "claim3",
            "--samples",
            "40",
            "--seed",
            "9",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        std::fs::read(out).unwrap()
    };
    let (a, b) = (run("a.json"), run("b.json"));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    for key in [
        "campaign",
        "parameters",
        "checked",
        "failures",
        "certified",
        "wall_time_s",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["certified"], true);
    assert_eq!(v["checked"], 40);
}

#[test]
fn every_campaign_runs_small() {
    for args in [
        &["verify", "holder", "--level", "4", "--refine", "1"][..],
        &["verify", "claim2", "--grid", "11"],
        &["verify", "cone", "--samples", "50"],
        &["verify", "oscillation", "--t-hat", "-3/7", "--levels", "3"],
        &["verify", "blowup-divergence", "--levels", "2"],
    ] {
        let o = ilgraph(args);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["certified"], true);
    }
}
