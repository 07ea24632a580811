//! Binary-level tests: spawn the real executable and check outputs, files
//! and exit codes, including that the CLI reproduces library results
//! exactly through the 17-significant-digit serialization.

use std::process::{Command, Output};

use pppps::{direct_kinematics, inverse_kinematics, Pose, SolverOptions, UnitQuaternion};

fn pppps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pppps"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn ik_home_emits_schema_and_zero_joints() {
    let out = pppps(&["ik", "--pose", "0.57735026918962573,0,0,1,0,0,0"]);
    let v = stdout_json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "ik");
    for key in ["rho1y", "rho1z", "rho2y", "rho2z", "rho3y", "rho3z"] {
        assert_eq!(v["joints"]["actuated"][key].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn dk_output_matches_library_exactly() {
    let n = (0.81f64 + 0.04 + 0.09 + 0.01).sqrt();
    let q = UnitQuaternion::new(0.9 / n, 0.2 / n, -0.3 / n, 0.1 / n).unwrap();
    let pose = Pose::new(0.4, -0.2, 0.3, q).unwrap();
    let joints = inverse_kinematics(&pose).actuated;
    let expected = direct_kinematics(&joints, &SolverOptions::default()).unwrap();

    let arg = joints
        .as_array()
        .iter()
        .map(|v| format!("{v:.17e}"))
        .collect::<Vec<_>>()
        .join(",");
    let v = stdout_json(&pppps(&["dk", "--joints", &arg]));

    assert_eq!(v["outcome"]["kind"], "FiniteSolutions");
    let solutions = v["outcome"]["solutions"].as_array().unwrap();
    assert_eq!(solutions.len(), expected.solutions.len());
    for (got, want) in solutions.iter().zip(&expected.solutions) {
        assert_eq!(got["x"].as_f64().unwrap(), want.x);
        assert_eq!(got["y"].as_f64().unwrap(), want.y);
        assert_eq!(got["z"].as_f64().unwrap(), want.z);
        let [q1, q2, q3, q4] = want.orientation.components();
        assert_eq!(got["orientation"]["q1"].as_f64().unwrap(), q1);
        assert_eq!(got["orientation"]["q2"].as_f64().unwrap(), q2);
        assert_eq!(got["orientation"]["q3"].as_f64().unwrap(), q3);
        assert_eq!(got["orientation"]["q4"].as_f64().unwrap(), q4);
    }
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["dk", "--joints", "0.15,-0.05,0.02,0.1,-0.08,0.03"];
    let a = pppps(&args);
    let b = pppps(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn domain_error_exits_one() {
    let out = pppps(&["planar-dk", "--joints", "0,0,0,0,0,0"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("degenerate"), "stderr: {stderr}");
}

#[test]
fn usage_error_exits_two() {
    assert_eq!(pppps(&["ik"]).status.code(), Some(2));
    assert_eq!(pppps(&["ik", "--pose", "1,2,3"]).status.code(), Some(2));
    assert_eq!(pppps(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn selfmotion_trace_writes_csv_file() {
    let out_path = std::env::temp_dir().join("pppps_cli_trace.csv");
    let out = pppps(&[
        "selfmotion-trace",
        "--joints",
        "0,0,0,0,0,0",
        "--samples",
        "12",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "theta,x,y,z,q1,q2,q3,q4,max_residual");
    assert_eq!(lines.len(), 13);
    for row in &lines[1..] {
        let fields: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 9);
        assert!(fields[8] <= 1e-10, "family residual {}", fields[8]);
    }
    std::fs::remove_file(&out_path).ok();
}

#[test]
fn velocity_check_reports_small_residual() {
    let v = stdout_json(&pppps(&[
        "velocity-check",
        "--pose",
        "0.3,-0.1,0.2,1,0,0,0",
        "--samples",
        "10",
    ]));
    assert!(v["report"]["max_residual"].as_f64().unwrap() <= 1e-6);
    assert_eq!(v["report"]["det_b"].as_f64().unwrap(), 4.0);
}

#[test]
fn singularity_flags_q1_equals_q4() {
    let v = stdout_json(&pppps(&[
        "singularity",
        "--pose",
        "0,0,0,0.70710678118654752,0,0,0.70710678118654752",
    ]));
    assert_eq!(v["report"]["is_singular"], true);
}

#[test]
fn config_file_defaults_apply_at_binary_level() {
    let dir = std::env::temp_dir().join("pppps_cli_bin_config");
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("config.toml");
    std::fs::write(&config, "samples = 5\n").unwrap();

    let out = pppps(&[
        "selfmotion-trace",
        "--joints",
        "0,0,0,0,0,0",
        "--config",
        config.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 6); // header + 5 samples
    std::fs::remove_dir_all(&dir).ok();
}
