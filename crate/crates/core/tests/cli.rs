use std::fs;
use std::process::{Command, Output};

fn qnoise(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnoise"))
        .args(args)
        .env_remove("QNOISE_OUTPUT_DIR")
        .output()
        .expect("spawn qnoise")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn help_exits_zero() {
    let o = qnoise(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("preset"));
}

#[test]
fn run_prints_csv() {
    let o = qnoise(&["run", "--channel-a", "dephasing", "--channel-b", "trit-flip", "--qa", "0:2:5", "--t", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("# sweep_mode: rate_time"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 6);
}

#[test]
fn run_json_round_trips() {
    let o = qnoise(&["run", "--channel-a", "depolarizing", "--channel-b", "depolarizing", "--t", "0:1:4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let ds = qnoise::output::from_json(&stdout(&o)).unwrap();
    assert_eq!(ds.len(), 4);
    assert!((ds.columns.negativity[0] - 1.0).abs() < 1e-12);
}

#[test]
fn bad_input_exits_2() {
    for args in [
        &["run", "--channel-a", "amplitude-damping", "--channel-b", "dephasing"][..],
        &["run", "--channel-a", "dephasing", "--channel-b", "dephasing", "--qa", "-1"],
        &["preset", "--name", "fig0"],
        &["nonsense"],
    ] {
        let o = qnoise(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn collision_exits_3_and_force_overwrites() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    fs::write(&out, "existing").unwrap();
    let p = out.to_str().unwrap();
    let args = ["run", "--channel-a", "dephasing", "--channel-b", "dephasing", "--t", "1", "--output", p];
    assert_eq!(qnoise(&args).status.code(), Some(3));
    assert_eq!(fs::read_to_string(&out).unwrap(), "existing");
    let mut forced = args.to_vec();
    forced.push("--force");
    assert_eq!(qnoise(&forced).status.code(), Some(0));
    assert!(fs::read_to_string(&out).unwrap().starts_with("# qnoise sweep dataset"));
}

#[test]
fn preset_writes_panels_and_report_to_output_dir_env() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qnoise"))
        .args(["preset", "--name", "fig5"])
        .env("QNOISE_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut names: Vec<String> =
        fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    assert_eq!(names, ["fig5_q1_time.csv", "fig5_q2_time.csv", "fig5_rate_grid.csv", "fig5_robustness.json"]);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fig5_robustness.json")).unwrap()).unwrap();
    assert_eq!(report["family_a"], "dephasing");
    assert_eq!(report["family_b"], "trit-flip");
}

#[test]
fn preset_stdout_is_deterministic() {
    let a = qnoise(&["preset", "--name", "fig4"]);
    let b = qnoise(&["preset", "--name", "fig4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("# robustness.verdict:"));
}

#[test]
fn validate_passes_and_erratum_fails() {
    let ok = qnoise(&["validate", "--oracle-states", "2", "--restarts", "4"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let bad = qnoise(&["validate", "--trit-flip-erratum", "--oracle-states", "1", "--restarts", "2"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn oracle_subcommand_reports_both_values() {
    let o = qnoise(&["oracle", "--channel-a", "depolarizing", "--channel-b", "depolarizing", "--restarts", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("gd_lower (raw)") && text.contains("gd_exact (raw)"));
}
