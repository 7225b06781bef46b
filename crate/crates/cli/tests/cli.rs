//! End-to-end tests of the binary: subcommands, exit codes, diagnostics,
//! and report round-trips.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stromcheck"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn tmp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("stromcheck-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn catalog_list_names_every_entry() {
    let out = run(&["catalog", "list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in ["torus6", "iwasawa", "sl2c", "hopf4", "standard_embedding"] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn catalog_run_iwasawa_reports_balanced_non_kahler() {
    let out = run(&["catalog", "run", "iwasawa", "--report", "machine"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let json = stdout(&out);
    assert!(json.contains("\"balanced\":true"));
    assert!(json.contains("\"kahler\":false"));
    assert!(json.contains("\"costar_omega_residual\":0.0000000000000000e0"));
}

#[test]
fn catalog_run_sl2c_passes_with_fitted_alpha_one() {
    let out = run(&["catalog", "run", "sl2c", "--report", "machine"]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout(&out);
    assert!(json.contains("\"alpha_used\":1.0000000000000000e0"));
    assert!(json.contains("\"alpha_status\":\"fitted\""));
    assert!(json.contains("\"all_pass\":true"));
    assert!(json.contains("\"pass\":true"));
}

#[test]
fn catalog_run_torus6_is_kahler_and_passes() {
    let out = run(&["catalog", "run", "torus6", "--report", "machine"]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout(&out);
    assert!(json.contains("\"kahler\":true"));
    assert!(json.contains("\"all_pass\":true"));
}

#[test]
fn dimension_two_models_are_supported() {
    let src = r#"
name = "torus2"
dimension = 2

[omega_form]
kind = "coframe_volume"

[connections.nabla]
kind = "levi_civita"

[connections.a]
kind = "flat"
rank = 1

[strominger]
nabla = "nabla"
a = "a"
alpha = 1.0
"#;
    let path = tmp_file("torus2.toml", src);
    let out = run(&["check", path.to_str().unwrap(), "--report", "machine"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("\"kahler\":true"));
}

#[test]
fn catalog_run_hopf4_is_gauduchon_not_balanced() {
    let out = run(&["catalog", "run", "hopf4", "--report", "machine"]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout(&out);
    assert!(json.contains("\"balanced\":false"));
    assert!(json.contains("\"gauduchon\":true"));
}

#[test]
fn catalog_run_standard_embedding_fails_the_bianchi_flag() {
    let out = run(&["catalog", "run", "standard_embedding", "--report", "machine"]);
    assert_eq!(out.status.code(), Some(1), "residual failure exit code");
    let json = stdout(&out);
    assert!(json.contains("\"hym_a\":true"));
    assert!(json.contains("\"conf_balanced\":true"));
    assert!(json.contains("\"bianchi\":false"));
}

#[test]
fn unknown_catalog_entry_is_an_input_error() {
    let out = run(&["catalog", "run", "nonexistent"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown catalog entry"));
}

#[test]
fn export_then_check_equals_catalog_run() {
    for name in ["torus6", "iwasawa", "sl2c", "hopf4", "standard_embedding"] {
        let exported = run(&["catalog", "export", name]);
        assert!(exported.status.success());
        let path = tmp_file(&format!("exported_{name}.toml"), &stdout(&exported));
        let via_check = run(&["check", path.to_str().unwrap(), "--report", "machine"]);
        let via_run = run(&["catalog", "run", name, "--report", "machine"]);
        assert_eq!(
            stdout(&via_check),
            stdout(&via_run),
            "byte-identical reports for {name}"
        );
        assert_eq!(via_check.status.code(), via_run.status.code());
    }
}

#[test]
fn malformed_toml_is_an_input_error_with_location() {
    let path = tmp_file("broken.toml", "name = \"x\"\ndimension = [not toml");
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("parse error"), "got: {err}");
    assert!(err.contains("line"), "location in: {err}");
}

#[test]
fn non_jacobi_constants_name_the_violated_gate() {
    // Iwasawa constants with an extra incompatible bracket component
    let src = r#"
name = "perturbed"
dimension = 6
structure_constants = [
  [1, 5, 3, -1.0],
  [2, 6, 3, 1.0],
  [1, 6, 4, -1.0],
  [2, 5, 4, -1.0],
  [1, 3, 4, 0.1],
]
"#;
    let path = tmp_file("perturbed.toml", src);
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("check_jacobi"), "got: {}", stderr(&out));
}

#[test]
fn strict_hym_nabla_switch_changes_the_verdict() {
    // Levi-Civita on sl2c is not HYM, so strict mode fails while the lax
    // mode lets the remaining equations decide (they pass at alpha = 1)
    let src = r#"
name = "sl2c-lc"
dimension = 6

[[coframe_differentials]]
target = 1
terms = [{ i = 2, j = 3, coeff = [0.5, 0.0] }]

[[coframe_differentials]]
target = 2
terms = [{ i = 1, j = 3, coeff = [-0.5, 0.0] }]

[[coframe_differentials]]
target = 3
terms = [{ i = 1, j = 2, coeff = [0.5, 0.0] }]

[omega_form]
kind = "coframe_volume"

[connections.nabla]
kind = "bismut"

[connections.lc]
kind = "levi_civita"

[strominger]
nabla = "lc"
a = "nabla"
alpha = "solve"
"#;
    let path = tmp_file("sl2c_lc.toml", src);
    let strict = run(&["check", path.to_str().unwrap(), "--report", "machine"]);
    let lax = run(&[
        "check",
        path.to_str().unwrap(),
        "--report",
        "machine",
        "--strict-hym-nabla",
        "false",
    ]);
    let strict_json = stdout(&strict);
    assert!(strict_json.contains("\"hym_nabla\":false"));
    assert_eq!(strict.status.code(), Some(1));
    let lax_json = stdout(&lax);
    assert!(lax_json.contains("\"hym_nabla\":false"));
    assert!(lax_json.contains("\"strict_hym_nabla\":false"));
}

#[test]
fn tol_flag_overrides_the_pass_threshold() {
    // with an absurdly large tolerance even the obstructed entry "passes"
    let out = run(&[
        "catalog",
        "run",
        "standard_embedding",
        "--tol",
        "100.0",
        "--report",
        "machine",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"bianchi\":true"));
}

#[test]
fn hesolve_cosine_source() {
    let spec = r#"
n = 64

[[modes]]
kx = 1
ky = 0
amplitude = 1.0
"#;
    let path = tmp_file("cosine.toml", spec);
    let out = run(&["hesolve", path.to_str().unwrap(), "--report", "machine"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let json = stdout(&out);
    assert!(json.contains("\"n\":64"));
    // max |f| = 2/(4π²) ≈ 0.0506605918
    assert!(json.contains("\"max_abs\":5.0660591821168888e-2"));
}

#[test]
fn hesolve_rejects_nonzero_mean_sources() {
    let spec = "n = 64\nconstant = 0.3\n";
    let path = tmp_file("obstructed.toml", spec);
    let out = run(&["hesolve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("obstruction"));
}

#[test]
fn custom_model_with_explicit_matrices() {
    // declare a connection by raw matrices: flat rank-1 with a constant
    // coefficient, which keeps every flag of the flat model passing
    let src = r#"
name = "torus-custom"
dimension = 4

[metric]
kind = "scaled"
scale = 2.0

[omega_form]
kind = "coframe_volume"

[connections.nabla]
kind = "levi_civita"

[connections.a]
kind = "matrices"
matrices = [
  [[[0.0, 0.5]]],
  [[[0.0, 0.0]]],
  [[[0.0, 0.0]]],
  [[[0.0, 0.0]]],
]

[strominger]
nabla = "nabla"
a = "a"
alpha = 1.0
fiber_scale = 3.0
"#;
    let path = tmp_file("custom.toml", src);
    let out = run(&["check", path.to_str().unwrap(), "--report", "machine"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let json = stdout(&out);
    assert!(json.contains("\"all_pass\":true"));
}
