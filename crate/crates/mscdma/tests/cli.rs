//! CLI-level behavior: config-driven runs, engine comparison output,
//! validation diagnostics, and the binary's exit codes.

use mscdma::cli::{cmd_moments, cmd_montecarlo, cmd_sinr_sweep, Engine, ExperimentConfig};
use std::collections::HashMap;
use std::process::Command;

const BASE: &str = r#"
[pulse]
kind = "sinc"
gamma = 1.5
oversampling = 2

[ensemble]
load = 0.5
snr_db = 10.0

[moments]
depth = 6
"#;

#[test]
fn engines_side_by_side_agree() {
    let cfg = ExperimentConfig::from_str(BASE).unwrap();
    // a single engine outside its regime is an error...
    let err = cmd_moments(&cfg, Some(&[Engine::SmallBandwidth])).unwrap_err();
    assert!(err.to_string().contains("bandwidth"));
    // ...but "all" emits every applicable engine side by side
    let engines = Engine::parse_list("all").unwrap();
    let csv = cmd_moments(&cfg, Some(&engines)).unwrap();
    let mut groups: HashMap<(String, String), Vec<f64>> = HashMap::new();
    for row in &csv.rows {
        let key = (row[1].clone(), row[2].clone()); // (ell, class)
        groups.entry(key).or_default().push(row[5].parse().unwrap());
    }
    for ((ell, class), values) in groups {
        assert_eq!(values.len(), 3);
        let base = values[0];
        for v in &values {
            assert!(
                ((v - base) / base).abs() < 1e-8,
                "ell {ell} class {class}: spread too large"
            );
        }
    }
}

#[test]
fn sweep_over_snr_axis() {
    let text = format!(
        "{BASE}
[detector]
ranks = [1, 4]

[sweep]
axis = \"snr\"
grid = [0.0, 10.0, 20.0]
scenarios = [\"sync\", \"async-a-sinc\"]
"
    );
    let cfg = ExperimentConfig::from_str(&text).unwrap();
    let csv = cmd_sinr_sweep(&cfg).unwrap();
    assert_eq!(csv.rows.len(), 3 * 2 * 2);
    // SINR grows with SNR for every (scenario, rank) curve
    let mut curves: HashMap<(String, String), Vec<(f64, f64)>> = HashMap::new();
    for row in &csv.rows {
        let axis: f64 = row[0].parse().unwrap();
        let sinr: f64 = row[4].parse().unwrap();
        curves
            .entry((row[1].clone(), row[2].clone()))
            .or_default()
            .push((axis, sinr));
    }
    for ((scenario, rank), mut pts) in curves {
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for pair in pts.windows(2) {
            assert!(
                pair[1].1 > pair[0].1,
                "{scenario} L={rank}: SINR not increasing in SNR"
            );
        }
    }
}

#[test]
fn montecarlo_requires_block_and_validates_quantity() {
    let cfg = ExperimentConfig::from_str(BASE).unwrap();
    let err = cmd_montecarlo(&cfg, None).unwrap_err();
    assert!(err.to_string().contains("montecarlo"));

    let bad = format!(
        "{BASE}
[montecarlo]
spreading_factor = 64
users = 32
quantity = \"nonsense\"
"
    );
    let err = ExperimentConfig::from_str(&bad).unwrap_err();
    assert!(err.to_string().contains("quantity"));
}

#[test]
fn gate_override_tightens_exit_condition() {
    let text = format!(
        "{BASE}
[montecarlo]
spreading_factor = 64
users = 32
seeds = 2
probe_users = 4
max_ell = 2
"
    );
    let cfg = ExperimentConfig::from_str(&text).unwrap();
    let loose = cmd_montecarlo(&cfg, Some(50.0)).unwrap();
    assert!(loose.gate_ok);
    let tight = cmd_montecarlo(&cfg, Some(1e-9)).unwrap();
    assert!(!tight.gate_ok);
}

fn config_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

#[test]
fn binary_moments_roundtrip() {
    let out = tempdir_file("moments.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_mscdma"))
        .args([
            "moments",
            "--config",
            config_path("mp_moments.toml").to_str().unwrap(),
            "--engines",
            "uniform-delay,polynomial",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("engine,ell,class,power,delay,r_value,eig_moment"));
    assert_eq!(text.lines().count(), 1 + 2 * 6);
}

#[test]
fn binary_montecarlo_gate_sets_exit_code() {
    let cfg_text = format!(
        "{BASE}
[montecarlo]
spreading_factor = 64
users = 32
seeds = 2
probe_users = 4
max_ell = 2
"
    );
    let cfg_file = tempdir_file("gate.toml");
    std::fs::write(&cfg_file, cfg_text).unwrap();
    let out = tempdir_file("gate.csv");
    let run = |gate: &str| {
        Command::new(env!("CARGO_BIN_EXE_mscdma"))
            .args([
                "montecarlo",
                "--config",
                cfg_file.to_str().unwrap(),
                "--gate",
                gate,
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap()
    };
    assert!(run("50").success());
    let failing = run("0.0000001");
    assert_eq!(failing.code(), Some(1));
}

fn tempdir_file(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("mscdma-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn montecarlo_handles_power_classes() {
    let text = r#"
        [pulse]
        kind = "sinc"
        gamma = 1.5
        oversampling = 2

        [ensemble]
        load = 0.5
        snr_db = 10.0
        power_atoms = [[0.5, 0.5], [1.5, 0.5]]

        [montecarlo]
        spreading_factor = 128
        users = 64
        seeds = 6
        probe_users = 16
        max_ell = 2
        gate_pct = 10.0
    "#;
    let cfg = ExperimentConfig::from_str(text).unwrap();
    let outcome = cmd_montecarlo(&cfg, None).unwrap();
    assert!(
        outcome.gate_ok,
        "two-class job exceeded the gate: {:.2}%",
        outcome.worst_rel_error_pct
    );
    // both classes appear in the aggregate rows with distinct references
    let mut asym = std::collections::BTreeMap::new();
    for row in &outcome.csv.rows {
        if row[0] == "all" {
            asym.insert(row[1].clone(), row[3].parse::<f64>().unwrap());
        }
    }
    assert_eq!(asym.len(), 4); // two classes × two orders
    let r1_low = asym["R1[class0]"];
    let r1_high = asym["R1[class1]"];
    assert!((r1_high / r1_low - 3.0).abs() < 1e-9); // R_1 scales with power

    // an empty class is rejected up front
    let starved = text.replace("users = 64", "users = 64").replace(
        "power_atoms = [[0.5, 0.5], [1.5, 0.5]]",
        "power_atoms = [[0.5, 0.004], [1.5, 0.996]]",
    );
    let cfg = ExperimentConfig::from_str(&starved).unwrap();
    let err = cmd_montecarlo(&cfg, None).unwrap_err();
    assert!(err.to_string().contains("receives no users"));
}
