use std::fs;
use std::path::Path;
use std::process::Command;

use squeeze_cli::config::OutputKind;
use squeeze_cli::scenario::PointSummary;
use squeeze_cli::{run, sweep, Baseline, ScenarioConfig, SweepAxis, SweepOptions};

fn data_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(2)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn column(path: &Path, index: usize) -> Vec<f64> {
    data_rows(path)
        .iter()
        .map(|r| r[index].parse().unwrap())
        .collect()
}

fn short(preset: &str, periods: f64) -> ScenarioConfig {
    let mut config = ScenarioConfig::preset(preset).unwrap();
    config.t_end = periods * std::f64::consts::TAU;
    config
}

#[test]
fn fig2_ohmic_starts_from_the_squeezed_state() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run(&ScenarioConfig::preset("fig2-ohmic").unwrap(), dir.path()).unwrap();
    let first = &data_rows(&dir.path().join("variances.csv"))[0];
    assert_eq!(first[0].parse::<f64>().unwrap(), 0.0);
    assert_eq!(first[1].parse::<f64>().unwrap(), 0.05);
    assert_eq!(first[2].parse::<f64>().unwrap(), 5.0);
    assert_eq!(first[4], "1");
    assert!(summary.files.contains(&"summary.json".to_string()));
    assert!(dir.path().join("summary.json").exists());
}

#[test]
fn every_csv_carries_a_version_and_units_line() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = short("fig2-ohmic", 2.0);
    config.outputs = [
        OutputKind::Coefficients,
        OutputKind::Variances,
        OutputKind::Spectrum,
        OutputKind::Wigner,
        OutputKind::Summary,
    ]
    .into();
    config.spectrum_exponents = vec![1.0];
    config.wigner_points = 11;
    let summary = run(&config, dir.path()).unwrap();
    let csvs: Vec<_> = summary
        .files
        .iter()
        .filter(|f| f.ends_with(".csv"))
        .collect();
    assert!(csvs.len() >= 6, "{csvs:?}");
    for name in csvs {
        let text = fs::read_to_string(dir.path().join(name)).unwrap();
        let header = text.lines().next().unwrap();
        assert!(header.starts_with("# squeeze "), "{name}: {header}");
        assert!(header.contains("columns:"), "{name}: {header}");
    }
}

#[test]
fn fig1_writes_three_spectra() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run(&ScenarioConfig::preset("fig1").unwrap(), dir.path()).unwrap();
    for name in ["spectrum_s0.5.csv", "spectrum_s1.csv", "spectrum_s3.csv"] {
        assert!(summary.files.contains(&name.to_string()));
        let omega = column(&dir.path().join(name), 0);
        let value = column(&dir.path().join(name), 1);
        assert_eq!(omega.len(), 500);
        assert!(value.iter().all(|&v| v > 0.0 && v.is_finite()));
    }
    assert!(summary.non_markovian.is_none() && summary.markovian.is_none());
}

#[test]
fn markovian_only_run_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = short("fig2-ohmic", 5.0);
    config.baseline = Baseline::Markovian;
    let summary = run(&config, dir.path()).unwrap();
    assert!(summary.non_markovian.is_none());
    let var_x = column(&dir.path().join("variances.csv"), 1);
    assert!(var_x.windows(2).all(|w| w[1] >= w[0]));
    assert!(!dir.path().join("variances_markovian.csv").exists());
}

#[test]
fn baseline_both_writes_suffixed_markovian_files() {
    let dir = tempfile::tempdir().unwrap();
    run(&short("fig2-ohmic", 1.0), dir.path()).unwrap();
    for name in [
        "variances.csv",
        "variances_markovian.csv",
        "coefficients_markovian.csv",
    ] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
}

fn options(workers: usize) -> SweepOptions {
    SweepOptions {
        workers,
        ..SweepOptions::default()
    }
}

#[test]
fn sweep_over_ohmicity_orders_first_loss() {
    let dir = tempfile::tempdir().unwrap();
    let axes = [SweepAxis::parse("s=0.5,1,3").unwrap()];
    let rows = sweep(&short("fig2-ohmic", 5.0), &axes, dir.path(), &options(3)).unwrap();
    assert_eq!(rows.len(), 3);
    let first: Vec<f64> = rows
        .iter()
        .map(|r| r.outcome.as_ref().unwrap().first_loss_time.unwrap())
        .collect();
    assert!(first[2] < first[0] && first[2] < first[1], "{first:?}");

    let table = data_rows(&dir.path().join("sweep_summary.csv"));
    assert_eq!(table.len(), 3);
    for (i, row) in rows.iter().enumerate() {
        assert!(dir
            .path()
            .join(&row.directory)
            .join("summary.json")
            .exists());
        assert_eq!(table[i][2], ["0.5", "1", "3"][i]);
        assert_eq!(table[i][3], "ok");
    }
    let leftovers = fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| {
            e.as_ref()
                .unwrap()
                .file_name()
                .to_string_lossy()
                .ends_with(".partial")
        })
        .count();
    assert_eq!(leftovers, 0);
}

#[test]
fn empty_sweep_is_a_single_run() {
    let config = short("fig2-ohmic", 3.0);
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let rows = sweep(&config, &[], a.path(), &options(1)).unwrap();
    assert_eq!(rows.len(), 1);
    let single = run(&config, b.path()).unwrap();
    assert_eq!(
        rows[0].outcome.as_ref().unwrap(),
        &PointSummary::from(&single)
    );
}

#[test]
fn sweep_row_matches_individual_run() {
    let base = short("fig2-ohmic", 3.0);
    let dir = tempfile::tempdir().unwrap();
    let axes = [SweepAxis::parse("g=0.05,0.2").unwrap()];
    let rows = sweep(&base, &axes, dir.path(), &options(2)).unwrap();
    let solo = tempfile::tempdir().unwrap();
    let config = base.with_field("g", "0.2").unwrap();
    let single = run(&config, solo.path()).unwrap();
    assert_eq!(
        rows[1].outcome.as_ref().unwrap(),
        &PointSummary::from(&single)
    );
}

#[test]
fn squeezing_axis_points_start_squeezed() {
    let dir = tempfile::tempdir().unwrap();
    let axes = [SweepAxis::parse("sigma2=0.1,0.3,0.6").unwrap()];
    let rows = sweep(&short("fig2-ohmic", 2.0), &axes, dir.path(), &options(3)).unwrap();
    assert!(rows
        .iter()
        .all(|r| r.outcome.as_ref().unwrap().initially_squeezed == Some(true)));
}

#[test]
fn sweep_cap_is_enforced_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let axes = [
        SweepAxis::parse("s=0.5,1,3").unwrap(),
        SweepAxis::parse("g=0.05,0.1").unwrap(),
    ];
    let opts = SweepOptions {
        workers: 1,
        max_points: 5,
    };
    let err = sweep(&short("fig2-ohmic", 1.0), &axes, dir.path(), &opts).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(!dir.path().join("sweep_summary.csv").exists());
}

#[test]
fn invalid_axis_value_is_rejected_up_front() {
    let dir = tempfile::tempdir().unwrap();
    let axes = [SweepAxis::parse("g=0.1,-1").unwrap()];
    let err = sweep(&short("fig2-ohmic", 1.0), &axes, dir.path(), &options(1)).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

fn squeeze(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_squeeze"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();

    let ok = squeeze(&[
        "run",
        "--preset",
        "fig2-subohmic",
        "--t-end",
        "6.3",
        "--out",
        out,
    ]);
    assert!(
        ok.status.success(),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
    let summary: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(summary["parameters"]["s"], 0.5);

    let bad = squeeze(&["run", "--g", "-0.1", "--out", out]);
    assert_eq!(bad.status.code(), Some(2));
    let unknown = squeeze(&["run", "--preset", "nope", "--out", out]);
    assert_eq!(unknown.status.code(), Some(2));

    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let io = squeeze(&[
        "run",
        "--t-end",
        "1",
        "--out",
        blocker.join("x").to_str().unwrap(),
    ]);
    assert_eq!(io.status.code(), Some(1));

    let presets = squeeze(&["presets"]);
    assert!(String::from_utf8_lossy(&presets.stdout).contains("fig2-superohmic"));
}

#[test]
fn config_file_is_merged_over_preset() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cfg.json");
    fs::write(&file, r#"{"sigma2": 0.4, "t_end": 3.0}"#).unwrap();
    let config = ScenarioConfig::preset("fig2-superohmic")
        .unwrap()
        .merged_with_file(&file)
        .unwrap();
    assert_eq!((config.s, config.sigma2, config.t_end), (3.0, 0.4, 3.0));
    fs::write(&file, r#"{"sigma": 0.4}"#).unwrap();
    assert!(ScenarioConfig::default().merged_with_file(&file).is_err());
}
