use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gibbs_core::kinematics::KinematicsReport;
use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_str()
        .expect("utf-8 path")
        .to_string()
}

fn gibbs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gibbs"))
        .args(args)
        .output()
        .expect("run gibbs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gibbs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn eval_rotation_postfactor() {
    let rot = fixture("rot.json");
    let o = gibbs(&["eval", "--field", &rot, "--point", "1", "0", "0", "--bind", "dr=0,1,0", "dr · (∇⊗v)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "(-1, 0, 0)\n");

    let ascii = gibbs(&["eval", "--field", &rot, "--point", "1", "0", "0", "--bind", "dr=0,1,0", "dr . (grad (x) v)"]);
    assert_eq!(stdout(&ascii), stdout(&o));
}

#[test]
fn eval_json_and_audit() {
    let shear = fixture("shear.json");
    let o = gibbs(&["eval", "--field", &shear, "--point", "0", "0", "0", "--output", "json", "(∇⊗v)†"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["kind"], "tensor");
    assert_eq!(v["result"]["value"], serde_json::json!([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]));
    assert_eq!(v["audit"]["verdict"], "alternative");

    let o = gibbs(&["eval", "--field", &shear, "--point", "0", "0", "0", "∇⊗v"]);
    assert!(stdout(&o).ends_with("convention: gibbs\n"), "{}", stdout(&o));
}

#[test]
fn shear_kinematics_text() {
    let o = gibbs(&["kinematics", "--field", &fixture("shear.json"), "--point", "0", "0", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("[   0  0.5    0 ]"), "{text}");
    assert!(text.contains("[    0  -0.5     0 ]"), "{text}");
    assert!(text.contains("vorticity: (0, 0, -1)"), "{text}");
}

#[test]
fn kinematics_json_matches_library_schema() {
    let o = gibbs(&["kinematics", "--field", &fixture("shear.json"), "--point", "0", "0", "0", "--output", "json"]);
    let r: KinematicsReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.d.get(0, 1), 0.5);
    assert_eq!(r.omega.get(0, 1), -0.5);
}

#[test]
fn negative_point_coordinates() {
    let o = gibbs(&["kinematics", "--field", &fixture("dilation.json"), "--point", "-1", "-2.5", "3", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: KinematicsReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.point.to_array(), [-1.0, -2.5, 3.0]);
    assert_eq!(r.divergence, 3.0);
}

#[test]
fn conventions_shows_rotation_pair() {
    let o = gibbs(&["conventions", "--field", &fixture("rot.json"), "--point", "1", "0", "0", "--bind", "dr=0,1,0", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rotation"]["postfactor"], serde_json::json!([-1.0, 0.0, 0.0]));
    assert_eq!(v["rotation"]["prefactor"], serde_json::json!([-1.0, 0.0, 0.0]));
    assert_eq!(v["rotation"]["transposed_postfactor"], serde_json::json!([1.0, 0.0, 0.0]));
    assert_eq!(v["difference"], serde_json::json!([[0.0, 2.0, 0.0], [-2.0, 0.0, 0.0], [0.0, 0.0, 0.0]]));

    let sym = gibbs(&["conventions", "--field", &fixture("dilation.json"), "--point", "1", "1", "1"]);
    assert!(stdout(&sym).contains("both conventions coincide"));
}

#[test]
fn fd_step_switches_to_finite_differences() {
    let rot = fixture("rot.json");
    let o = gibbs(&["kinematics", "--field", &rot, "--point", "1", "0", "0", "--fd-step", "1e-3", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: KinematicsReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!((r.vorticity.z - 2.0).abs() < 1e-9);
}

#[test]
fn field_spec_errors_exit_two_with_pointer() {
    let bad = temp_file(
        "bad.json",
        r#"{"type": "polynomial", "components": [[], [{"coeff": 1, "powers": [1, -1, 0]}], []]}"#,
    );
    let o = gibbs(&["kinematics", "--field", bad.to_str().unwrap(), "--point", "0", "0", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("\"/components/1/0/powers/1\""), "{}", stderr(&o));

    let extra = temp_file("extra.json", r#"{"type": "polynomial", "components": [[], [], []], "scale": 2}"#);
    let o = gibbs(&["kinematics", "--field", extra.to_str().unwrap(), "--point", "0", "0", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("\"/scale\""), "{}", stderr(&o));
}

#[test]
fn expression_errors_exit_three_with_position() {
    let rot = fixture("rot.json");
    let o = gibbs(&["eval", "--field", &rot, "--point", "1", "0", "0", "--bind", "dr=0,1,0", "dr · ∇⊗v"]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("position 6"), "{err}");
    assert!(err.contains("\n        ^"), "{err}");

    let o = gibbs(&["eval", "--field", &rot, "--point", "1", "0", "0", "v + (q · v)"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("unbound name \"q\" at position 5"), "{}", stderr(&o));

    let o = gibbs(&["eval", "--field", &rot, "--point", "1", "0", "0", "v†"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("position 1"), "{}", stderr(&o));
}

#[test]
fn config_errors_exit_one() {
    let rot = fixture("rot.json");
    assert_eq!(gibbs(&["eval", "--field", &rot, "v"]).status.code(), Some(1));
    assert_eq!(gibbs(&["kinematics", "--point", "0", "0", "0"]).status.code(), Some(1));
    assert_eq!(gibbs(&["kinematics", "--field", "/nonexistent.json", "--point", "0", "0", "0"]).status.code(), Some(1));
    assert_eq!(gibbs(&["eval", "--field", &rot, "--point", "0", "0", "0", "--bind", "v=1,0,0", "v"]).status.code(), Some(1));
    assert_eq!(gibbs(&["kinematics", "--field", &rot, "--point", "0", "0", "0", "--fd-step", "0"]).status.code(), Some(1));
    assert_eq!(gibbs(&["check", "--output", "yaml"]).status.code(), Some(1));
    assert_eq!(gibbs(&[]).status.code(), Some(1));
}

#[test]
fn script_files_evaluate_each_line() {
    let script = temp_file("exprs.txt", "# rotation checks\ndr · (∇⊗v)\n\n(∇⊗v)† · dr\n∇ · v\n");
    let arg = format!("@{}", script.display());
    let rot = fixture("rot.json");
    let o = gibbs(&["eval", "--field", &rot, "--point", "1", "0", "0", "--bind", "dr=0,1,0", &arg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "dr · (∇⊗v)\n(-1, 0, 0)\n(∇⊗v)† · dr\n(-1, 0, 0)\n∇ · v\n0\n");

    let bad = temp_file("bad.txt", "v\nv ·\n");
    let o = gibbs(&["eval", "--field", &rot, "--point", "1", "0", "0", &format!("@{}", bad.display())]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("bad.txt:2:"), "{}", stderr(&o));
}

#[test]
fn check_json_summary() {
    let o = gibbs(&["check", "--seed", "3", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 3);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], v["checks"].as_array().unwrap().len());
}
