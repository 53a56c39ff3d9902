//! End-to-end tests of the experiment runner and its binary.

use std::path::Path;
use std::process::{Command, Output};

use secure_qos::experiment::{cmd_energy, reproduce, Figure, Overrides, Scenario, Table};
use secure_qos::Error;

const BIN: &str = env!("CARGO_BIN_EXE_secure-qos");

const SWEEP: &str = r#"
seed = 4
notes = ["test sweep"]

[[sources]]
kind = "discrete_markov"
s = 0.2

[[sources]]
kind = "discrete_markov"
s = 0.8

[channel]
gamma = [1.0]
rho = [0.0]

[qos]
theta = [1.0]
messages = [1]

[grid]
snr_db = { from = -10.0, to = 10.0, points = 5 }
"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("scenario.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(csv.as_bytes());
    reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect()
}

fn column(table: &Table, name: &str) -> Vec<f64> {
    table.numeric_column(name).unwrap_or_else(|| panic!("column {name}"))
}

#[test]
fn analyze_writes_versioned_csv_and_reruns_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SWEEP);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = run(&["analyze", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let first = std::fs::read_to_string(a.join("analyze.csv")).unwrap();
    let second = std::fs::read_to_string(b.join("analyze.csv")).unwrap();
    assert_eq!(first, second);
    assert!(first.starts_with("# schema: secure-qos-table v1\n# command: analyze\n# seed: 4\n"));
    assert!(first.contains("snr[linear]") && first.contains("r_avg[bit/block]"));
    assert_eq!(data_rows(&first).len(), 10);
    assert!(a.join("analyze.svg").exists());
}

#[test]
fn seed_flag_is_recorded_in_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SWEEP);
    let out = dir.path().join("o");
    let o = run(&["energy", "--config", &cfg, "--seed", "99", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(out.join("energy.csv")).unwrap();
    assert!(text.contains("# seed: 99\n"));
    assert!(text.contains("# note: test sweep\n"));
}

#[test]
fn empty_grid_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &SWEEP.replace("snr_db = { from = -10.0, to = 10.0, points = 5 }", "snr = []"));
    let o = run(&["analyze", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("grid"));
}

#[test]
fn short_horizon_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{SWEEP}\n[simulation]\nservice = \"perfect_csi\"\nsnr = 1.0\nhorizon = 1000\n");
    let cfg = write_config(dir.path(), &text);
    let o = run(&["simulate", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("simulation.horizon"));
}

#[test]
fn nonpositive_fixed_rate_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{SWEEP}\n[nocsi]\nlambda = -0.5\n");
    let cfg = write_config(dir.path(), &text);
    let o = run(&["nocsi", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nocsi.policy[0]"));
}

#[test]
fn quadrature_with_correlated_fading_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &SWEEP.replace("rho = [0.0]", "rho = [0.3]"));
    let o = run(&["analyze", "--config", &cfg, "--method", "quad", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_fields_and_figures_are_rejected() {
    let err = Scenario::from_toml_str(&SWEEP.replace("gamma = [1.0]", "gama = [1.0]")).unwrap_err();
    assert!(matches!(err, Error::Config(_)));
    assert!(err.to_string().contains("gama"));
    assert_eq!(run(&["reproduce", "fig13"]).status.code(), Some(2));
    assert_eq!(run(&["analyze"]).status.code(), Some(2));
}

#[test]
fn invalid_parameters_carry_their_field_path() {
    let err = Scenario::from_toml_str(&SWEEP.replace("rho = [0.0]", "rho = [0.0, 1.5]")).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("channel.rho[1]"), "{err}");
    let err = Scenario::from_toml_str(&SWEEP.replace("s = 0.8", "s = 0.8\np11 = 0.1")).unwrap_err();
    assert!(err.to_string().contains("sources[1]"), "{err}");
}

#[test]
fn numerical_failures_map_to_exit_code_three() {
    assert_eq!(Error::Fit("x".into()).exit_code(), 3);
    assert_eq!(Error::Solver("x".into()).exit_code(), 3);
    assert_eq!(Error::Domain("x".into()).exit_code(), 3);
}

#[test]
fn single_point_grid_gives_one_row() {
    let text = SWEEP.replace("snr_db = { from = -10.0, to = 10.0, points = 5 }", "snr = [0.5]");
    let mut scenario = Scenario::from_toml_str(&text).unwrap();
    scenario.sources.truncate(1);
    let out = cmd_energy(&scenario).unwrap();
    assert_eq!(out.artifacts[0].table.rows().len(), 1);
}

#[test]
fn reproduce_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["reproduce", "fig12", "--out", dir.path().to_str().unwrap(), "--threads", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("fig12_nocsi.csv").exists());
    let svg = std::fs::read_to_string(dir.path().join("fig12_nocsi.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
}

#[test]
fn throughput_is_ordered_by_on_probability() {
    let out = reproduce(Figure::Fig2, &Overrides::default()).unwrap();
    let t = &out.artifacts[0].table;
    let (rho, snr, s_rows, r) = (column(t, "rho"), column(t, "snr"), t.column("source").unwrap(), column(t, "r_avg"));
    // rows come grouped by (rho, source) in file order: s = 0.2, 0.5, 0.8
    let n_snr = 31;
    assert_eq!(r.len(), 2 * 3 * n_snr);
    for block in 0..2 {
        for k in 0..n_snr {
            let at = |src: usize| block * 3 * n_snr + src * n_snr + k;
            assert_eq!(snr[at(0)], snr[at(2)]);
            assert_eq!(rho[at(0)], rho[at(2)]);
            assert!(r[at(0)] < r[at(1)] && r[at(1)] < r[at(2)], "snr {} rho {}", snr[at(0)], rho[at(0)]);
        }
    }
    assert!(t.rows()[0][s_rows].contains("p22=0.2"));
}

#[test]
fn minimum_energy_is_shared_across_burstiness_without_correlation() {
    let mut scenario = Figure::Fig5.scenario().unwrap();
    scenario.channel.rho = vec![0.0];
    scenario.channel.gamma = vec![1.0];
    let out = cmd_energy(&scenario).unwrap();
    let e = column(&out.artifacts[0].table, "ebn0_min_db");
    assert!(e.iter().all(|v| (v - e[0]).abs() < 1e-12));
    assert!((e[0] - 10.0 * std::f64::consts::LN_2.log10()).abs() < 1e-9);
}

#[test]
fn correlation_helps_the_common_message() {
    let mut scenario = Figure::Fig8.scenario().unwrap();
    scenario.qos.messages = vec![0];
    scenario.sources.truncate(1);
    let out = cmd_energy(&scenario).unwrap();
    let t = &out.artifacts[0].table;
    let (rho, e) = (column(t, "rho"), column(t, "ebn0_min_db"));
    let mut by_rho: Vec<(f64, f64)> = rho.into_iter().zip(e).collect();
    by_rho.dedup();
    assert_eq!(by_rho.len(), 3);
    assert!(by_rho.windows(2).all(|w| w[1].1 < w[0].1), "{by_rho:?}");
}

#[test]
fn coefficient_one_minimizes_fixed_rate_energy() {
    let out = reproduce(Figure::Fig12, &Overrides::default()).unwrap();
    let t = &out.artifacts[0].table;
    let (a, e) = (column(t, "a"), column(t, "ebn0_min_db"));
    let best = a
        .iter()
        .zip(&e)
        .min_by(|x, y| x.1.total_cmp(y.1))
        .map(|(a, _)| *a)
        .unwrap();
    assert_eq!(best, 1.0);
    assert!(e.iter().all(|v| *v >= 5.76 - 0.005));
}
