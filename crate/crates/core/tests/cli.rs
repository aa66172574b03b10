use std::process::{Command, Output};

fn altbell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_altbell"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_0_on_success() {
    let o = altbell(&[
        "basis",
        "validate",
        "--builtin",
        "Rotation",
        "--theta",
        "0.3",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("result: pass"));
}

#[test]
fn exit_1_on_usage_and_io_errors() {
    assert_eq!(code(&altbell(&["teleport"])), 1);
    assert_eq!(code(&altbell(&["basis", "show", "--builtin", "nope"])), 1);
    assert_eq!(code(&altbell(&["basis", "show", "--builtin", "phase"])), 1);
    assert_eq!(
        code(&altbell(&[
            "basis",
            "validate",
            "--file",
            "/nonexistent/basis.json"
        ])),
        1
    );
    assert_eq!(code(&altbell(&["circuit", "show", "--id", "fig9"])), 1);
    let o = altbell(&["entanglement", "--state", "1,0,0"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn exit_2_on_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("repeated.json");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let m = format!("[[[{h},0],[0,0]],[[0,0],[{h},0]]]");
    std::fs::write(
        &path,
        format!("{{\"name\":\"repeated\",\"params\":{{}},\"matrices\":[{m},{m},{m},{m}]}}"),
    )
    .unwrap();
    let o = altbell(&["basis", "validate", "--file", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("FAIL"));

    assert_eq!(
        code(&altbell(&[
            "teleport",
            "--builtin",
            "bell",
            "--state",
            "2,0,0,0"
        ])),
        2
    );
    assert_eq!(
        code(&altbell(&[
            "basis",
            "validate",
            "--builtin",
            "hyperbolic",
            "--theta",
            "30"
        ])),
        2
    );
}

#[test]
fn exit_3_on_circuit_mismatch() {
    let o = altbell(&["circuit", "verify", "--all"]);
    assert_eq!(code(&o), 3);
    let text = stdout(&o);
    assert!(text.contains("fig4"));
    assert!(text.contains("phase_equivalent (-1)"));
    assert_eq!(code(&altbell(&["circuit", "verify", "--id", "fig2"])), 0);
}

#[test]
fn json_round_trips_byte_identically() {
    for args in [
        &[
            "--format",
            "json",
            "teleport",
            "--builtin",
            "hyperbolic",
            "--theta",
            "1",
            "--state",
            "0.6,0,0,0.8",
            "--mode",
            "unitary",
        ][..],
        &["--format", "json", "circuit", "verify", "--all"][..],
        &[
            "--format",
            "json",
            "basis",
            "show",
            "--builtin",
            "scale",
            "--lambda",
            "2",
        ][..],
        &[
            "--format",
            "json",
            "entanglement",
            "--state",
            "1,0,0,0,0,0,1,0",
        ][..],
    ] {
        let text = stdout(&altbell(args));
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&value).unwrap() + "\n";
        assert_eq!(text, again, "{args:?}");
    }
}

#[test]
fn teleport_json_parses_into_the_library_type() {
    let text = stdout(&altbell(&[
        "--format",
        "json",
        "teleport",
        "--builtin",
        "phase",
        "--theta",
        "0.5",
        "--index",
        "2",
        "--state",
        "0,1,0,0",
        "--shots",
        "300",
        "--seed",
        "11",
    ]));
    let run: altbell::teleport::TeleportRun = serde_json::from_str(&text).unwrap();
    assert_eq!(run.sender_index, 2);
    assert_eq!(run.counts.iter().sum::<u64>(), 300);
    assert_eq!(serde_json::to_string_pretty(&run).unwrap() + "\n", text);
}

#[test]
fn identical_arguments_give_identical_bytes() {
    let args = [
        "--format",
        "json",
        "teleport",
        "--builtin",
        "scale",
        "--lambda",
        "2",
        "--state",
        "0.6,0.0,0.0,-0.8",
        "--shots",
        "5000",
        "--seed",
        "42",
    ];
    let a = altbell(&args);
    let b = altbell(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let other_seed = altbell(&[&args[..args.len() - 1], &["43"]].concat());
    assert_ne!(a.stdout, other_seed.stdout);
}

#[test]
fn circuit_run_reads_text_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.txt");
    std::fs::write(&path, "# Bell pair\nH 0\nCX 0 1\n").unwrap();
    let o = altbell(&["circuit", "run", "--file", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(
        text.contains("|00⟩  0.7071067811865475") || text.contains("|00⟩  0.7071067811865476"),
        "{text}"
    );

    std::fs::write(&path, "H 0\nFROB 1\n").unwrap();
    let o = altbell(&["circuit", "run", "--file", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn shown_catalog_circuits_parse_back() {
    let o = altbell(&["circuit", "list"]);
    assert_eq!(code(&o), 0);
    let ids: Vec<String> = stdout(&o)
        .lines()
        .map(|l| l.split_whitespace().next().unwrap().to_string())
        .collect();
    assert_eq!(ids.len(), 15);
    for id in &ids {
        let text = stdout(&altbell(&["circuit", "show", "--id", id]));
        altbell::circuit::parse_circuit(&text).unwrap_or_else(|e| panic!("{id}: {e}"));
    }
}

#[test]
fn reference_tables_report_only_known_errata() {
    let o = altbell(&[
        "basis",
        "reference",
        "--builtin",
        "hyperbolic",
        "--theta",
        "0.7",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).matches("known erratum").count(), 2);
    let o = altbell(&["basis", "reference", "--builtin", "phase", "--theta", "0.7"]);
    assert!(stdout(&o).contains("0 discrepancies"));
}
