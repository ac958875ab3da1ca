use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lindqbit::scenario::{read_csv, TrajectoryRecord};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lindqbit"));
    cmd.env_remove("LINDQBIT_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn lindqbit")
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn records(o: &Output) -> Vec<TrajectoryRecord> {
    assert!(o.status.success(), "exit {:?}: {}", o.status.code(), stderr(o));
    read_csv(&stdout(o)).unwrap()
}

fn assert_physical(rs: &[TrajectoryRecord]) {
    for r in rs {
        assert!(r.trace_error <= 1e-10, "trace error {} at t = {}", r.trace_error, r.t);
        assert!(r.min_eigenvalue >= -1e-9, "min eigenvalue {} at t = {}", r.min_eigenvalue, r.t);
        assert!((0.0..=1.0 + 1e-9).contains(&r.concurrence));
    }
}

#[test]
fn figure1_matches_closed_form() {
    let rs = records(&run(&["figure1"]));
    assert_eq!(rs.len(), 400);
    assert_eq!(rs.last().unwrap().t, PI);
    let worst = rs.iter().map(|r| (r.concurrence - (2.0 * r.t).sin().abs()).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-9, "{worst}");
    assert_physical(&rs);
}

#[test]
fn figure1_peak_scales_with_coupling() {
    let rs = records(&run(&["figure1", "--y", "2", "--t-max", &(PI / 8.0).to_string(), "--points", "2"]));
    assert!((rs[1].concurrence - 1.0).abs() <= 1e-9);
    let rs = records(&run(&["figure1", "--y", "-1", "--t-max", &(PI / 2.0).to_string(), "--points", "2"]));
    assert!(rs[1].concurrence <= 1e-9);
}

#[test]
fn figure1_random_energies_follow_seed() {
    let a = run(&["figure1", "--random-energies", "--seed", "11", "--points", "50"]);
    let b = bin().args(["figure1", "--random-energies", "--points", "50"]).env("LINDQBIT_SEED", "11").output().unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stderr(&a), stderr(&b));
    let c = run(&["figure1", "--random-energies", "--seed", "12", "--points", "50"]);
    assert_ne!(stderr(&a), stderr(&c));
    for r in read_csv(&stdout(&a)).unwrap() {
        assert!((r.concurrence - (2.0 * r.t).sin().abs()).abs() <= 1e-9);
    }
}

#[test]
fn figure1_zero_coupling_is_config_error() {
    let o = run(&["figure1", "--y", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("y"));
}

#[test]
fn figure2_matches_exponential_decay() {
    let rs = records(&run(&["figure2"]));
    assert_eq!(rs.len(), 400);
    assert_eq!(rs[0].concurrence, 1.0);
    let worst = rs.iter().map(|r| (r.concurrence - (-r.t).exp()).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-8, "{worst}");
    assert_physical(&rs);

    let rs = records(&run(&["figure2", "--gamma14", "0"]));
    assert!(rs.iter().all(|r| (r.concurrence - 1.0).abs() <= 1e-9));
}

#[test]
fn figure2_warns_on_constraint_violation() {
    let o = run(&["figure2", "--gamma14", "1", "--other-gamma", "0.1", "--points", "20"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning"));
    for r in read_csv(&stdout(&o)).unwrap() {
        assert!((r.concurrence - (-r.t).exp()).abs() <= 1e-8);
    }
    assert!(!stderr(&run(&["figure2", "--points", "20"])).contains("warning"));
    assert_eq!(run(&["figure2", "--gamma14", "-1"]).status.code(), Some(2));
}

#[test]
fn writes_csv_and_svg_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("f1.csv");
    let svg = dir.path().join("f1.svg");
    let o = run(&["figure1", "--points", "64", "--out", csv.to_str().unwrap(), "--plot", svg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("t,concurrence,eof,purity,trace_error,min_eigenvalue\n"));
    assert_eq!(read_csv(&text).unwrap().len(), 64);
    let svg = fs::read_to_string(&svg).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
}

#[test]
fn csv_values_have_seventeen_significant_digits() {
    let o = run(&["figure2", "--points", "3"]);
    let text = stdout(&o);
    for field in text.lines().skip(1).flat_map(|l| l.split(',')) {
        let mantissa = field.trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17, "{field}");
    }
}

#[test]
fn simulate_is_deterministic() {
    let path = config("bell_dephasing.json");
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = run(&["simulate", path.to_str().unwrap(), "--out", out.to_str().unwrap(), "--seed", "5"]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn simulate_free_hamiltonian_does_not_change_dephasing_decay() {
    let path = config("bell_dephasing.json");
    let dir = tempfile::tempdir().unwrap();
    let with_h = dir.path().join("h.csv");
    let o = run(&["simulate", path.to_str().unwrap(), "--out", with_h.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));

    let text = fs::read_to_string(&path).unwrap().replace(r#""x1": 0.3, "x2": -1.2, "x3": 0.8"#, r#""x1": 0, "x2": 0, "x3": 0"#);
    let bare = dir.path().join("bare.json");
    fs::write(&bare, text).unwrap();
    let without = dir.path().join("bare.csv");
    let o = run(&["simulate", bare.to_str().unwrap(), "--out", without.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));

    let a = read_csv(&fs::read_to_string(&with_h).unwrap()).unwrap();
    let b = read_csv(&fs::read_to_string(&without).unwrap()).unwrap();
    assert_eq!(a.len(), 200);
    for (x, y) in a.iter().zip(&b) {
        assert!((x.concurrence - y.concurrence).abs() <= 1e-9);
        // Γ14 = ½(1 + 0.25)
        assert!((x.concurrence - (-0.625 * x.t).exp()).abs() <= 1e-8);
    }
    assert_physical(&a);
}

#[test]
fn simulate_uses_config_output_paths() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::copy(config("bell_dephasing.json"), &cfg).unwrap();
    let o = run(&["simulate", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("bell_dephasing.csv").exists());
    assert!(dir.path().join("bell_dephasing.svg").exists());
}

#[test]
fn simulate_without_dissipation_keeps_local_concurrence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("local.json");
    fs::write(
        &cfg,
        r#"{"hamiltonian": {"x1": 0.7, "x2": 0.2, "x3": 1.2, "y": 0},
            "dissipation": "none",
            "initial_state": {"bell": "psi_plus"},
            "time_grid": {"t_max": 6, "points": 25}}"#,
    )
    .unwrap();
    let rs = records(&run(&["simulate", cfg.to_str().unwrap()]));
    assert!(rs.iter().all(|r| (r.concurrence - 1.0).abs() <= 1e-9));
    assert_physical(&rs);
}

#[test]
fn simulate_control_pulse_and_relaxation() {
    let rs = records(&run(&["simulate", config("control_pulse.json").to_str().unwrap()]));
    for r in &rs {
        assert!((r.concurrence - (2.0 * r.t).sin().abs()).abs() <= 1e-9);
    }
    let rs = records(&run(&["simulate", config("relaxation.json").to_str().unwrap()]));
    assert_eq!(rs.len(), 101);
    assert_physical(&rs);
}

#[test]
fn simulate_non_positive_rates_exit_unphysical() {
    let o = run(&["simulate", config("single_pair_dephasing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("unphysical"));
    // rows before the failure are still written
    let rs = read_csv(&stdout(&o)).unwrap();
    assert!(!rs.is_empty());
    assert_eq!(rs[0].t, 0.0);
}

#[test]
fn simulate_config_errors_exit_2_with_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"hamiltonian": {"x1":0,"x2":0,"x3":0,"y":1}, "initial_state": {"bell":"phi_plus"}, "time_grid": {"t_max": 1, "points": 1}}"#, "time_grid.points"),
        (r#"{"hamiltonian": {"x1":0,"x2":0,"x3":0,"y":1}, "initial_state": {"bell":"phi_plus"}, "time_grid": {"t_max": "long", "points": 3}}"#, "time_grid.t_max"),
        (r#"{"hamiltonian": {"x1":0,"x2":0,"x3":0,"y":1}, "initial_state": {"amplitudes": [[1,0],[1,0],[0,0],[0,0]]}, "time_grid": {"t_max": 1, "points": 3}}"#, "initial_state.amplitudes"),
        (r#"{"hamiltonian": {"x1":0,"x2":0,"x3":0,"y":1}, "initial_state": {"bell":"phi_plus"}}"#, "time_grid"),
        ("not json", ""),
    ];
    for (k, (text, path)) in cases.iter().enumerate() {
        let cfg = dir.path().join(format!("bad{k}.json"));
        fs::write(&cfg, text).unwrap();
        let o = run(&["simulate", cfg.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{text}: {}", stderr(&o));
        assert!(stderr(&o).contains(path), "{path}: {}", stderr(&o));
    }
    let o = run(&["simulate", "/nonexistent/config.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_rates_reports() {
    let o = run(&["check-rates", config("bell_dephasing.json").to_str().unwrap()]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("constraints: pass") && s.contains("lindblad-realizable: yes"), "{s}");

    let o = run(&["check-rates", config("single_pair_dephasing.json").to_str().unwrap()]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("G12+G34-G14-G23 = 5.000000e0"), "{s}");
    assert!(s.contains("G14+G23-G13-G24 = 0.000000e0"), "{s}");
    assert!(s.contains("constraints: FAIL") && s.contains("lindblad-realizable: no"), "{s}");

    assert_eq!(run(&["check-rates", config("control_pulse.json").to_str().unwrap()]).status.code(), Some(2));
}

fn report_value(s: &str, key: &str) -> f64 {
    let line = s.lines().find(|l| l.starts_with(key)).unwrap_or_else(|| panic!("{key} missing in {s}"));
    line[key.len() + 1..].trim().parse().unwrap()
}

#[test]
fn concurrence_subcommand() {
    let o = run(&["concurrence", "[1,3,2,6]", "--normalize"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(report_value(&s, "concurrence:").abs() <= 1e-12);
    assert!(s.contains("verdict: separable"));

    let o = run(&["concurrence", "--bell", "phi_plus"]);
    let s = stdout(&o);
    assert!((report_value(&s, "concurrence:") - 1.0).abs() <= 1e-12);
    assert!((report_value(&s, "entanglement_of_formation:") - 1.0).abs() <= 1e-12);
    assert!(s.contains("verdict: entangled"));

    let o = run(&["concurrence", "--bell", "phi_plus", "--mixed"]);
    assert!(stdout(&o).contains("lambdas:"));

    let mixed = "[[[0.25,0],[0,0],[0,0],[0,0]],[[0,0],[0.25,0],[0,0],[0,0]],[[0,0],[0,0],[0.25,0],[0,0]],[[0,0],[0,0],[0,0],[0.25,0]]]";
    let o = run(&["concurrence", mixed]);
    assert!(o.status.success());
    assert_eq!(report_value(&stdout(&o), "concurrence:"), 0.0);
}

#[test]
fn concurrence_rejects_invalid_states() {
    let o = run(&["concurrence", "[1,3,2,6]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("normalized"));

    let trace_two = "[[[1,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]";
    let o = run(&["concurrence", trace_two]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("trace"), "{}", stderr(&o));

    assert_eq!(run(&["concurrence", "[1,2,3]"]).status.code(), Some(2));
    assert_eq!(run(&["--tol", "-1", "concurrence", "--bell", "phi_plus"]).status.code(), Some(2));
}
