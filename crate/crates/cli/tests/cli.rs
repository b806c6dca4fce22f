//! End-to-end checks of the binary: verbs, emitted files, exit codes.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_resfluor"))
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("resfluor-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const REDUCED_CONFIG: &str = r#"
name = "reduced"
omega0 = 200.0
hf_indices = [0]
window = "195,205"

[[drives]]
omega = 200.0
rabi = 10.0
"#;

#[test]
fn preset_fig1_emits_series_and_peaks() {
    let dir = tmpdir("fig1");
    let out = dir.join("fig1.csv");
    let status = bin()
        .args(["preset", "fig1", "--window", "4995,5005", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# scenario: fig1"));
    assert!(text.contains("omega,s"));
    let peaks = std::fs::read_to_string(dir.join("fig1.peaks.txt")).unwrap();
    assert!(peaks.contains("position height fwhm"));
}

#[test]
fn run_verb_reads_toml_config() {
    let dir = tmpdir("run");
    let cfg = dir.join("reduced.toml");
    std::fs::write(&cfg, REDUCED_CONFIG).unwrap();
    let out = dir.join("reduced.csv");
    let status = bin().arg("run").arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert!(status.success());
    assert!(out.exists());
}

#[test]
fn oracle_verb_runs_reduced_scale() {
    let dir = tmpdir("oracle");
    let cfg = dir.join("reduced.toml");
    std::fs::write(&cfg, REDUCED_CONFIG).unwrap();
    let out = dir.join("oracle.csv");
    let status = bin()
        .arg("oracle")
        .arg(&cfg)
        .args(["--grid-step", "0.5"])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("(oracle)"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tmpdir("badcfg");
    let cfg = dir.join("bad.toml");
    std::fs::write(&cfg, "omega0 = -5.0\n[[drives]]\nomega = 1.0\nrabi = 1.0\n").unwrap();
    let status = bin().arg("run").arg(&cfg).status().unwrap();
    assert_eq!(status.code(), Some(2));

    // unknown preset is a config error too
    let status = bin().args(["preset", "fig99"]).status().unwrap();
    assert_eq!(status.code(), Some(2));

    // missing file
    let status = bin().args(["run", "/nonexistent/x.toml"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn incommensurable_frequencies_exit_2() {
    let dir = tmpdir("incomm");
    let cfg = dir.join("pi.toml");
    std::fs::write(
        &cfg,
        "omega0 = 5000.0\n[[drives]]\nomega = 5000.0\nrabi = 1.0\n[[drives]]\nomega = 3.14159265358979\nrabi = 1.0\n",
    )
    .unwrap();
    let status = bin().arg("run").arg(&cfg).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn sweep_verb_emits_long_format() {
    let dir = tmpdir("sweep");
    let cfg = dir.join("sw.toml");
    std::fs::write(
        &cfg,
        format!(
            "{REDUCED_CONFIG}\n[sweep]\npath = \"drives.0.rabi\"\nstart = 9.0\nstep = 1.0\nstop = 10.0\n"
        ),
    )
    .unwrap();
    let out = dir.join("sw.csv");
    let status = bin()
        .arg("sweep")
        .arg(&cfg)
        .args(["--grid-step", "0.5"])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("sweep_value,omega,s"));
    let first = text
        .lines()
        .find(|l| l.starts_with('9'))
        .expect("rows for sweep value 9");
    assert_eq!(first.split(',').count(), 3);
}
