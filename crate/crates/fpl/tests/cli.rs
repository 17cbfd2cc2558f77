//! Black-box tests of the `fpl` binary: exit codes, validation, artifact
//! manifests and byte-level reproducibility.

use std::fs;
use std::path::Path;
use std::process::Command;

fn fpl() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fpl"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).expect("write config");
    path
}

fn small_custom_config() -> String {
    serde_json::json!({
        "version": 1,
        "seed": 7,
        "scenario": "custom",
        "params": {
            "target": "two_tone",
            "n": 8,
            "domain": [-3.14, 3.14],
            "a": 0.5,
            "b": 1.0,
            "xi_max": 10.0,
            "delta_xi": 0.2,
            "t_end": 5.0,
            "checkpoints": 5,
            "eval_points": 41
        }
    })
    .to_string()
}

#[test]
fn init_validate_roundtrip() {
    let tmp = tempfile::tempdir().unwrap();
    for scenario in ["fig1_two_tone", "fig3_splines", "fig4_xor", "parity", "scaling_law", "custom"]
    {
        let out = fpl().args(["init", scenario]).output().expect("spawn");
        assert!(out.status.success(), "init {scenario} failed");
        let path = write_config(
            tmp.path(),
            &format!("{scenario}.json"),
            &String::from_utf8(out.stdout).unwrap(),
        );
        let out = fpl().args(["validate"]).arg(&path).output().expect("spawn");
        assert!(out.status.success(), "validate {scenario} failed");
    }
}

#[test]
fn config_errors_use_exit_code_2() {
    let tmp = tempfile::tempdir().unwrap();

    // malformed JSON
    let path = write_config(tmp.path(), "broken.json", "{ not json");
    let out = fpl().args(["validate"]).arg(&path).output().expect("spawn");
    assert_eq!(out.status.code(), Some(2));

    // unknown key is rejected by the schema
    let mut cfg: serde_json::Value = serde_json::from_str(&small_custom_config()).unwrap();
    cfg["params"]["typo_knob"] = serde_json::json!(1);
    let path = write_config(tmp.path(), "typo.json", &cfg.to_string());
    let out = fpl().args(["validate"]).arg(&path).output().expect("spawn");
    assert_eq!(out.status.code(), Some(2));

    // missing file
    let out = fpl().args(["validate", "/nonexistent/nope.json"]).output().expect("spawn");
    assert_eq!(out.status.code(), Some(2));

    // domain error caught by validation: empty lattice
    let mut cfg: serde_json::Value = serde_json::from_str(&small_custom_config()).unwrap();
    cfg["params"]["xi_max"] = serde_json::json!(-1.0);
    let path = write_config(tmp.path(), "badlattice.json", &cfg.to_string());
    let out = fpl().args(["validate"]).arg(&path).output().expect("spawn");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_emits_manifest_covering_every_artifact() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "custom.json", &small_custom_config());
    let out_dir = tmp.path().join("runs");
    let out = fpl().args(["run"]).arg(&cfg).arg("--out").arg(&out_dir).output().expect("spawn");
    assert!(out.status.success(), "run failed: {}", String::from_utf8_lossy(&out.stderr));

    let run_dir = out_dir.join("custom-7");
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(run_dir.join("manifest.json")).unwrap())
            .unwrap();
    let listed: Vec<String> = manifest["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["path"].as_str().unwrap().to_string())
        .collect();
    for entry in fs::read_dir(&run_dir).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        if name == "manifest.json" {
            continue;
        }
        assert!(listed.contains(&name), "artifact {name} missing from manifest");
    }
    assert!(!listed.is_empty());
}

#[test]
fn identical_seeds_reproduce_identical_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "custom.json", &small_custom_config());
    let mut digests = Vec::new();
    for round in 0..2 {
        let out_dir = tmp.path().join(format!("runs{round}"));
        let out =
            fpl().args(["run"]).arg(&cfg).arg("--out").arg(&out_dir).output().expect("spawn");
        assert!(out.status.success());
        let manifest: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(out_dir.join("custom-7/manifest.json")).unwrap(),
        )
        .unwrap();
        let mut files: Vec<(String, String)> = manifest["files"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| {
                (e["path"].as_str().unwrap().to_string(), e["sha256"].as_str().unwrap().to_string())
            })
            .collect();
        files.sort();
        digests.push(files);
    }
    assert_eq!(digests[0], digests[1], "artifacts differ across identical runs");
}

#[test]
fn seed_flag_overrides_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "custom.json", &small_custom_config());
    let out_dir = tmp.path().join("runs");
    let out = fpl()
        .args(["run"])
        .arg(&cfg)
        .args(["--seed", "99", "--out"])
        .arg(&out_dir)
        .output()
        .expect("spawn");
    assert!(out.status.success());
    assert!(out_dir.join("custom-99").is_dir());
}
