//! End-to-end runs of the binary in scratch directories.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dunkl_spectral_cli::config::{Builtin, RunConfig};
use dunkl_spectral_cli::manifest::sha256_hex;
use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dunkl-spectral"))
        .args(args)
        .current_dir(dir)
        .env_remove("DUNKL_SPECTRAL_THREADS")
        .output()
        .unwrap()
}

fn json(path: impl AsRef<Path>) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn write_config(dir: &Path, text: &str) {
    fs::write(dir.join("c.toml"), text).unwrap();
}

#[test]
fn config_round_trip_is_a_fixed_point() {
    let text = RunConfig::default().to_toml();
    let back = RunConfig::parse(&text).unwrap();
    assert_eq!(back, RunConfig::default());
    assert_eq!(back.to_toml(), text);

    let partial =
        RunConfig::parse("seed = 9\n[wave]\nprofile = { kind = \"bump\", radius = 1.5 }\n")
            .unwrap();
    assert_eq!(partial.seed, 9);
    assert_eq!(partial.wave.profile, Builtin::Bump { radius: 1.5 });
    assert_eq!(partial.kernel, RunConfig::default().kernel);
    assert_eq!(RunConfig::parse(&partial.to_toml()).unwrap(), partial);
}

#[test]
fn gaussian_fixed_point_and_manifest_hashes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["transform", "--out", "g"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let dir = tmp.path().join("g");
    let report = json(dir.join("transform.json"));
    assert!(report["rel_sup_diff_to_input"].as_f64().unwrap() < 1e-10);

    let m = json(dir.join("manifest.json"));
    assert_eq!(m["command"], "transform");
    let mut entries = m["files"].as_array().unwrap().clone();
    entries.push(m["config"].clone());
    assert_eq!(entries.len(), 5);
    for e in &entries {
        let data = fs::read(dir.join(e["path"].as_str().unwrap())).unwrap();
        assert_eq!(e["bytes"].as_u64().unwrap(), data.len() as u64);
        assert_eq!(e["sha256"].as_str().unwrap(), sha256_hex(&data));
    }
}

#[test]
fn rerun_from_recorded_config_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "[params]\ngamma_k = 1.0\nn = 3\n[maximal]\ntimes = { lo = 0.5, hi = 2.0, count = 5 }\ncampaign = 50\n",
    );
    let first = run(
        tmp.path(),
        &[
            "maximal", "--config", "c.toml", "--out", "a", "--seed", "11",
        ],
    );
    assert!(
        first.status.success(),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let dir = tmp.path().join("a");
    let m1 = json(dir.join("manifest.json"));
    let before: Vec<(String, Vec<u8>)> = m1["files"]
        .as_array()
        .unwrap()
        .iter()
        .chain([&m1["config"]])
        .map(|e| {
            let p = e["path"].as_str().unwrap().to_string();
            let data = fs::read(dir.join(&p)).unwrap();
            (p, data)
        })
        .collect();

    let second = run(tmp.path(), &["maximal", "--config", "a/config.toml"]);
    assert!(second.status.success());
    for (p, data) in &before {
        assert_eq!(&fs::read(dir.join(p)).unwrap(), data, "{p} changed");
    }
    let m2 = json(dir.join("manifest.json"));
    assert_eq!(m1["files"], m2["files"]);
    assert_eq!(m2["source_config"], "a/config.toml");
}

#[test]
fn kernel_blowup_exponent_in_the_classical_case() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "[params]\ngamma_k = 0.0\nn = 1\n[kernel]\nalpha = 0.6\nx = { lo = 0.5, hi = 1.5, count = 4 }\n",
    );
    let out = run(tmp.path(), &["kernel", "--config", "c.toml"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let fit = json(tmp.path().join("out/kernel_fit.json"));
    assert!((fit["predicted_exponent"].as_f64().unwrap() + 0.4).abs() < 1e-12);
    let e = fit["exponent"].as_f64().unwrap();
    assert!((e + 0.4).abs() < 0.05, "exponent {e}");
}

#[test]
fn degenerate_probe() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "[params]\ngamma_k = 0.0\nn = 1\n[probe]\ninv_p = [0.0, 0.5, 1.0]\nalpha = [0.5]\nnu_lo = 0\nnu_hi = 7\n",
    );
    let out = run(tmp.path(), &["probe", "--config", "c.toml"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(tmp.path().join("out/probe.json"));
    assert!(r["lines"]["critical_p"].is_null());
    let points = r["points"].as_array().unwrap();
    assert_eq!(points.len(), 3);
    for q in points {
        assert_eq!(q["line"].as_f64(), Some(0.0));
        assert_eq!(q["verdict"], "consistent");
    }
    let csv = fs::read_to_string(tmp.path().join("out/probe.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn invalid_configs_exit_with_field_diagnostics() {
    let tmp = tempfile::tempdir().unwrap();
    for (text, field) in [
        ("[params]\ngamma_k = -1.0\n", "params.gamma_k"),
        ("[grid]\nr_max = 64.0\nbogus = 1\n", "line 3"),
        (
            "[kernel]\nx = { lo = 0.0, hi = 2.0, count = 3 }\n",
            "kernel.x",
        ),
    ] {
        write_config(tmp.path(), text);
        let out = run(tmp.path(), &["kernel", "--config", "c.toml"]);
        assert_eq!(out.status.code(), Some(2), "{text}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(field), "{text}: {err}");
    }
    let out = run(tmp.path(), &["transform", "--config", "missing.toml"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn guard_flags_need_allow_flagged() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "[wave]\nprofile = { kind = \"bump\", radius = 2.0 }\ntimes = [1.0]\nenergy_times = { lo = 0.0, hi = 1.0, count = 2 }\n",
    );
    let out = run(tmp.path(), &["wave", "--config", "c.toml"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("flagged"));
    let m = json(tmp.path().join("out/manifest.json"));
    assert!(!m["flags"].as_array().unwrap().is_empty());

    let out = run(
        tmp.path(),
        &["wave", "--config", "c.toml", "--allow-flagged"],
    );
    assert!(out.status.success());
    assert_eq!(
        json(tmp.path().join("out/manifest.json"))["allow_flagged"],
        true
    );
}

#[test]
fn threads_fall_back_to_the_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dunkl-spectral"))
        .args(["transform"])
        .current_dir(tmp.path())
        .env("DUNKL_SPECTRAL_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(json(tmp.path().join("out/manifest.json"))["threads"], 1);
    let out = run(tmp.path(), &["transform", "--threads", "0"]);
    assert_eq!(out.status.code(), Some(2));
}
