use std::path::PathBuf;
use std::process::Command as Process;

use valg_cli::commands::grid_indices;
use valg_cli::{execute, run, CliError, Command, Format, JobReport, JobSpec, Status};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn build_reports_partition_counts() {
    let r = run(&JobSpec::new(Command::Build, fixture("heisenberg_t1.json"), 5));
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.dimensions["V_B"], vec![1, 1, 2, 3, 5, 7]);
    let r = run(&JobSpec::new(Command::Build, fixture("rank3.json"), 3));
    assert_eq!(r.dimensions["V_B"], vec![1, 3, 9, 22]);
    let r = run(&JobSpec::new(Command::Build, fixture("nilpotent_t1.json"), 2));
    assert_eq!(r.dimensions["V_B"], vec![2, 0, 0]);
}

#[test]
fn twist_reports_module_dimensions() {
    let r = run(&JobSpec::new(Command::Twist, fixture("heisenberg.json"), 5));
    assert_eq!(r.status, Status::Pass, "{}", r.render_text());
    assert_eq!(r.dimensions["M_B(U)"], vec![1, 1, 1, 2, 2, 3]);
    assert_eq!(r.dimensions["J(U)"], vec![0; 6]);
    let r = run(&JobSpec::new(Command::Twist, fixture("nilpotent.json"), 2));
    assert_eq!(r.dimensions["M_B(U)"], vec![1, 0, 0]);
}

#[test]
fn untwisted_twist_matches_build() {
    for name in ["heisenberg_t1.json", "nilpotent_t1.json", "rank3.json"] {
        let b = run(&JobSpec::new(Command::Build, fixture(name), 3));
        let t = run(&JobSpec::new(Command::Twist, fixture(name), 3));
        if name.starts_with("nilpotent") {
            // the trivial fiber is a quotient of A, not A itself
            assert_eq!(t.dimensions["M_B(U)"], vec![1, 0, 0, 0]);
        } else {
            assert_eq!(b.dimensions["V_B"], t.dimensions["M_B(U)"], "{name}");
        }
    }
}

#[test]
fn json_reports_round_trip_and_are_deterministic() {
    let mut job = JobSpec::new(Command::Verify, fixture("heisenberg.json"), 2);
    job.grid = 1;
    job.format = Format::Json;
    let (a, code) = execute(&job);
    let (b, _) = execute(&job);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    let parsed = JobReport::from_json(&a).unwrap();
    assert_eq!(parsed.to_json(), a);
    assert_eq!(parsed, run(&job));
}

#[test]
fn broken_pairing_names_the_condition() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("heisenberg_t1.json"))
        .unwrap()
        .replace(r#""basis": ["β"]"#, r#""basis": ["β", "γ"]"#)
        .replace(r#"[["e", "β", "β", "1"]]"#, r#"[["e", "β", "β", "1"], ["e", "γ", "γ", "1"]]"#)
        .replace(r#"[["β", "β", "e", "1"]]"#, r#"[["β", "β", "e", "1"], ["β", "γ", "e", "1"]]"#);
    let path = write_temp(&dir, "broken.json", &text);
    let r = run(&JobSpec::new(Command::Check, path, 2));
    assert_eq!(r.exit_code, 1);
    let v = r.check("vertex algebroid").unwrap();
    assert!(v.has_failure("symmetric pairing"));
    assert_eq!(v.violations[0].witness.len(), 2);
}

#[test]
fn input_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(&dir, "bad.json", r#"{"A": {"basis": ["e"], "unit": "e", "product": [["e","e","e","1/0"]]}}"#);
    let r = run(&JobSpec::new(Command::Check, &bad, 2));
    assert_eq!(r.exit_code, 2);
    assert!(r.error.unwrap().contains("A.product[0]"));
    let r = run(&JobSpec::new(Command::Check, dir.path().join("missing.json"), 2));
    assert_eq!(r.status, Status::InputError);
    let mut job = JobSpec::new(Command::Twist, fixture("heisenberg.json"), 2);
    job.fiber = 3;
    assert_eq!(run(&job).exit_code, 2);
}

#[test]
fn empty_grid_is_flagged_vacuous() {
    let mut job = JobSpec::new(Command::Verify, fixture("heisenberg.json"), 2);
    job.grid = -1;
    let r = run(&job);
    assert_eq!(r.status, Status::Pass);
    let jac = r.checks.iter().find(|c| c.report.name.starts_with("twisted Jacobi")).unwrap();
    assert!(jac.vacuous);
    assert!(r.render_text().contains("[vacuous] twisted Jacobi"));
}

#[test]
fn sampled_grids_depend_only_on_the_seed() {
    let (a, note) = grid_indices(4, 50, 7);
    let (b, _) = grid_indices(4, 50, 7);
    let (c, _) = grid_indices(4, 50, 8);
    assert_eq!(a.len(), 50);
    assert!(note.is_some());
    assert_eq!(a, b);
    assert_ne!(a, c);
    let (full, none) = grid_indices(1, 50, 7);
    assert_eq!(full.len(), 27);
    assert!(none.is_none());
}

#[test]
fn error_classes_map_to_exit_codes() {
    for (err, code) in [
        (CliError::Input("x".into()), 2),
        (CliError::Window("x".into()), 3),
        (CliError::Internal("x".into()), 4),
    ] {
        let mut r = JobReport::new("check", "f", 0);
        r.finish(Err(err));
        assert_eq!(r.exit_code, code);
    }
}

#[test]
fn binary_prints_report_and_sets_exit_status() {
    let out = Process::new(env!("CARGO_BIN_EXE_valg"))
        .args(["build", "--input"])
        .arg(fixture("heisenberg_t1.json"))
        .args(["--max-degree", "4", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let r = JobReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(r.dimensions["V_B"], vec![1, 1, 2, 3, 5]);

    let out = Process::new(env!("CARGO_BIN_EXE_valg"))
        .args(["check", "--input", "/nonexistent/file.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn basis_dump_lists_monomials() {
    let mut job = JobSpec::new(Command::Build, fixture("heisenberg_t1.json"), 2);
    job.dump_basis = true;
    let r = run(&job);
    assert_eq!(r.bases["V_B"][2].len(), 2);
    assert!(r.render_text().contains("basis V_B[2]"));
}
