//! End-to-end scenario execution and parameter sweeps.

use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use squeeze_core::bath::scaled_spectrum_series;
use squeeze_core::coefficients::{
    coefficient_path, markovian_coefficients, markovian_path, CoefficientPath,
    MarkovianCoefficients,
};
use squeeze_core::dynamics::{
    squeezing_summary, variance_series, variances_at, wigner, SqueezingSummary, VarianceSeries,
};
use squeeze_core::numerics::{Direction, TimeGrid};

use crate::config::{OutputKind, ScenarioConfig};
use crate::error::{ConfigError, RunError};
use crate::output;

pub const DEFAULT_SWEEP_CAP: usize = 10_000;

pub struct Trajectory {
    pub path: CoefficientPath,
    pub variances: VarianceSeries,
    pub summary: SqueezingSummary,
}

impl Trajectory {
    fn new(path: CoefficientPath, config: &ScenarioConfig) -> Result<Self, RunError> {
        let state = config.squeezed_state()?;
        let variances = variance_series(&path, &state);
        let summary = squeezing_summary(&variances);
        Ok(Self {
            path,
            variances,
            summary,
        })
    }
}

pub struct ScenarioResult {
    pub config: ScenarioConfig,
    pub grid: TimeGrid,
    pub markovian: MarkovianCoefficients,
    pub non_markovian: Option<Trajectory>,
    pub markovian_baseline: Option<Trajectory>,
}

impl ScenarioResult {
    /// The non-Markovian trajectory when computed, otherwise the Markovian one.
    pub fn primary(&self) -> Option<&Trajectory> {
        self.non_markovian
            .as_ref()
            .or(self.markovian_baseline.as_ref())
    }
}

pub fn time_grid(config: &ScenarioConfig) -> Result<TimeGrid, ConfigError> {
    TimeGrid::new(config.t_end, TAU / config.steps_per_period as f64)
        .map_err(|e| ConfigError::field("t_end", e.to_string()))
}

/// Compute everything a configuration asks for, without touching the disk.
pub fn compute(config: &ScenarioConfig) -> Result<ScenarioResult, RunError> {
    config.validate()?;
    let sd = config.spectral_density()?;
    let ctx = config.bath_context()?;
    let grid = time_grid(config)?;
    let markovian =
        markovian_coefficients(&sd, &ctx).map_err(|e| RunError::numeric("coefficients", e))?;

    let needs_dynamics = [
        OutputKind::Coefficients,
        OutputKind::Variances,
        OutputKind::Wigner,
        OutputKind::Summary,
    ]
    .iter()
    .any(|&k| config.wants(k));

    let mut result = ScenarioResult {
        config: config.clone(),
        grid,
        markovian,
        non_markovian: None,
        markovian_baseline: None,
    };
    if !needs_dynamics {
        return Ok(result);
    }
    if config.baseline.non_markovian() {
        let path =
            coefficient_path(&sd, &ctx, &grid).map_err(|e| RunError::numeric("coefficients", e))?;
        result.non_markovian = Some(Trajectory::new(path, config)?);
    }
    if config.baseline.markovian() {
        let path = markovian_path(&markovian, &grid);
        result.markovian_baseline = Some(Trajectory::new(path, config)?);
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingRecord {
    pub time: f64,
    pub direction: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySummary {
    pub initially_squeezed: bool,
    pub first_loss_time: Option<f64>,
    pub final_loss_time: Option<f64>,
    pub oscillation_count: usize,
    pub num_squeezing_intervals: usize,
    pub min_delta: f64,
    pub min_uncertainty: f64,
    pub crossings: Vec<CrossingRecord>,
}

impl From<&Trajectory> for TrajectorySummary {
    fn from(t: &Trajectory) -> Self {
        Self {
            initially_squeezed: t.summary.initially_squeezed,
            first_loss_time: t.summary.first_loss_time,
            final_loss_time: t.summary.final_loss_time,
            oscillation_count: t.summary.oscillation_count,
            num_squeezing_intervals: t.summary.num_squeezing_intervals,
            min_delta: t.path.min_delta(),
            min_uncertainty: t.variances.min_uncertainty(),
            crossings: t
                .variances
                .crossings
                .iter()
                .map(|c| CrossingRecord {
                    time: c.time,
                    direction: match c.direction {
                        Direction::Rising => "rising".into(),
                        Direction::Falling => "falling".into(),
                    },
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovianRecord {
    pub delta_m: f64,
    pub gamma_m: f64,
    pub stationary_variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRecord {
    pub t_end: f64,
    pub step: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuntimeRecord {
    pub elapsed_seconds: f64,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub version: String,
    pub parameters: ScenarioConfig,
    pub grid: GridRecord,
    pub markovian_coefficients: MarkovianRecord,
    pub non_markovian: Option<TrajectorySummary>,
    pub markovian: Option<TrajectorySummary>,
    pub files: Vec<String>,
    pub runtime: RuntimeRecord,
}

impl RunSummary {
    pub fn primary(&self) -> Option<&TrajectorySummary> {
        self.non_markovian.as_ref().or(self.markovian.as_ref())
    }
}

/// Compute a scenario and write its artifacts into `out_dir`.
pub fn run(config: &ScenarioConfig, out_dir: &Path) -> Result<RunSummary, RunError> {
    let started = Instant::now();
    for warning in config.warnings() {
        log::warn!("{warning}");
    }
    let result = compute(config)?;
    fs::create_dir_all(out_dir).map_err(|e| RunError::io(out_dir, e))?;
    let mut files = Vec::new();

    let suffix_markovian = result.non_markovian.is_some();
    let trajectories = [
        (result.non_markovian.as_ref(), ""),
        (
            result.markovian_baseline.as_ref(),
            if suffix_markovian { "_markovian" } else { "" },
        ),
    ];
    for (trajectory, suffix) in trajectories {
        let Some(trajectory) = trajectory else {
            continue;
        };
        if config.wants(OutputKind::Coefficients) {
            let name = format!("coefficients{suffix}.csv");
            output::write_coefficients(&out_dir.join(&name), &trajectory.path)?;
            files.push(name);
        }
        if config.wants(OutputKind::Variances) {
            let name = format!("variances{suffix}.csv");
            output::write_variances(&out_dir.join(&name), &trajectory.variances)?;
            files.push(name);
        }
    }

    if config.wants(OutputKind::Spectrum) {
        files.extend(write_spectra(config, out_dir)?);
    }

    if config.wants(OutputKind::Wigner) {
        if let Some(trajectory) = result.primary() {
            for &requested in &config.wigner_times {
                let name = write_wigner_snapshot(config, &trajectory.path, requested, out_dir)?;
                files.push(name);
            }
        }
    }

    if config.wants(OutputKind::Summary) {
        files.push("summary.json".into());
    }
    let summary = RunSummary {
        version: output::VERSION.to_string(),
        parameters: config.clone(),
        grid: GridRecord {
            t_end: result.grid.t_end(),
            step: result.grid.step(),
            points: result.grid.points(),
        },
        markovian_coefficients: MarkovianRecord {
            delta_m: result.markovian.delta_m,
            gamma_m: result.markovian.gamma_m,
            stationary_variance: result.markovian.stationary_variance(),
        },
        non_markovian: result.non_markovian.as_ref().map(TrajectorySummary::from),
        markovian: result
            .markovian_baseline
            .as_ref()
            .map(TrajectorySummary::from),
        files,
        runtime: RuntimeRecord {
            elapsed_seconds: started.elapsed().as_secs_f64(),
            threads: rayon::current_num_threads(),
        },
    };
    if config.wants(OutputKind::Summary) {
        output::write_json(&out_dir.join("summary.json"), &summary)?;
    }
    log::info!(
        "wrote {} files to {} in {:.2} s",
        summary.files.len(),
        out_dir.display(),
        summary.runtime.elapsed_seconds
    );
    Ok(summary)
}

fn spectrum_grid(config: &ScenarioConfig) -> Vec<f64> {
    let n = config.spectrum_points;
    (1..=n)
        .map(|k| config.spectrum_omega_max * k as f64 / n as f64)
        .collect()
}

/// Write one scaled-spectrum CSV per requested exponent.
pub fn write_spectra(config: &ScenarioConfig, out_dir: &Path) -> Result<Vec<String>, RunError> {
    config.validate()?;
    fs::create_dir_all(out_dir).map_err(|e| RunError::io(out_dir, e))?;
    let ctx = config.bath_context()?;
    let exponents = if config.spectrum_exponents.is_empty() {
        vec![config.s]
    } else {
        config.spectrum_exponents.clone()
    };
    let omega_bar = spectrum_grid(config);
    let mut names = Vec::new();
    for s in exponents {
        let sd = config.spectral_density_with_exponent(s)?;
        let series = scaled_spectrum_series(&sd, &ctx, &omega_bar)
            .map_err(|e| RunError::numeric("bath", e))?;
        let name = output::spectrum_file_name(s);
        output::write_spectrum(&out_dir.join(&name), &series)?;
        names.push(name);
    }
    Ok(names)
}

fn write_wigner_snapshot(
    config: &ScenarioConfig,
    path: &CoefficientPath,
    requested: f64,
    out_dir: &Path,
) -> Result<String, RunError> {
    let state = config.squeezed_state()?;
    let index = ((requested / path.grid.step()).round() as usize).min(path.len() - 1);
    let t = path.grid.time(index);
    let (var_x, var_y) =
        variances_at(path, t, &state).map_err(|e| RunError::numeric("dynamics", e))?;
    let n = config.wigner_points;
    let axis = |var: f64| {
        let half = config.wigner_box_sigmas * var.sqrt();
        (0..n)
            .map(move |k| -half + 2.0 * half * k as f64 / (n - 1) as f64)
            .collect::<Vec<_>>()
    };
    let (xs, ys) = (axis(var_x), axis(var_y));
    let mut samples = Vec::with_capacity(n * n);
    for &x in &xs {
        for &y in &ys {
            let w = wigner(path, t, &state, Complex64::new(x, y))
                .map_err(|e| RunError::numeric("dynamics", e))?;
            samples.push((x, y, w));
        }
    }
    let name = output::wigner_file_name(t);
    output::write_wigner(&out_dir.join(&name), &samples)?;
    Ok(name)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub field: String,
    pub values: Vec<String>,
}

impl SweepAxis {
    /// Parse `field=v1,v2,...`.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let (field, values) = text.split_once('=').ok_or_else(|| {
            ConfigError::Parse(format!("axis `{text}` is not of the form field=v1,v2"))
        })?;
        let values: Vec<String> = values
            .split(',')
            .map(|v| v.trim().to_string())
            .filter(|v| !v.is_empty())
            .collect();
        if values.is_empty() {
            return Err(ConfigError::field(field.trim(), "axis has no values"));
        }
        Ok(Self {
            field: field.trim().to_string(),
            values,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub workers: usize,
    pub max_points: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            max_points: DEFAULT_SWEEP_CAP,
        }
    }
}

/// Aggregate quantities reported per sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSummary {
    pub initially_squeezed: Option<bool>,
    pub first_loss_time: Option<f64>,
    pub oscillation_count: Option<usize>,
    pub min_delta: Option<f64>,
    pub stationary_variance: f64,
}

impl From<&RunSummary> for PointSummary {
    fn from(summary: &RunSummary) -> Self {
        let primary = summary.primary();
        Self {
            initially_squeezed: primary.map(|p| p.initially_squeezed),
            first_loss_time: primary.and_then(|p| p.first_loss_time),
            oscillation_count: primary.map(|p| p.oscillation_count),
            min_delta: summary.non_markovian.as_ref().map(|p| p.min_delta),
            stationary_variance: summary.markovian_coefficients.stationary_variance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub index: usize,
    pub directory: String,
    pub assignments: Vec<(String, String)>,
    pub outcome: Result<PointSummary, String>,
}

fn cartesian(axes: &[SweepAxis]) -> Vec<Vec<(String, String)>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push((axis.field.clone(), v.clone()));
                    next
                })
            })
            .collect()
    })
}

/// Run every point of the Cartesian product of `axes` over `base`.
///
/// Each point writes into its own `point_NNNN` directory (built under a
/// temporary name and renamed when complete); the aggregate table goes to
/// `sweep_summary.csv`. A failing point is reported in its row and does not
/// stop the sweep.
pub fn sweep(
    base: &ScenarioConfig,
    axes: &[SweepAxis],
    out_dir: &Path,
    options: &SweepOptions,
) -> Result<Vec<SweepRow>, RunError> {
    let count = axes.iter().map(|a| a.values.len()).product::<usize>();
    if count > options.max_points {
        return Err(ConfigError::Parse(format!(
            "sweep has {count} points, cap is {}",
            options.max_points
        ))
        .into());
    }
    for axis in axes {
        for value in &axis.values {
            base.with_field(&axis.field, value)?.validate()?;
        }
    }
    fs::create_dir_all(out_dir).map_err(|e| RunError::io(out_dir, e))?;

    let points = cartesian(axes);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.max(1))
        .build()
        .map_err(|e| RunError::Config(ConfigError::field("workers", e.to_string())))?;

    let rows: Vec<SweepRow> = pool.install(|| {
        points
            .into_par_iter()
            .enumerate()
            .map(|(index, assignments)| {
                let directory = format!("point_{index:04}");
                let outcome = run_point(base, &assignments, out_dir, &directory)
                    .map(|s| PointSummary::from(&s))
                    .map_err(|e| e.to_string());
                match &outcome {
                    Ok(_) => log::info!("{directory}: ok"),
                    Err(e) => log::warn!("{directory}: {e}"),
                }
                SweepRow {
                    index,
                    directory,
                    assignments,
                    outcome,
                }
            })
            .collect()
    });

    write_sweep_table(&out_dir.join("sweep_summary.csv"), axes, &rows)?;
    Ok(rows)
}

fn run_point(
    base: &ScenarioConfig,
    assignments: &[(String, String)],
    out_dir: &Path,
    directory: &str,
) -> Result<RunSummary, RunError> {
    let config = assignments
        .iter()
        .try_fold(base.clone(), |c, (field, value)| c.with_field(field, value))?;
    let staging: PathBuf = out_dir.join(format!(".{directory}.partial"));
    let target = out_dir.join(directory);
    if staging.exists() {
        fs::remove_dir_all(&staging).map_err(|e| RunError::io(&staging, e))?;
    }
    let summary = run(&config, &staging)?;
    if target.exists() {
        fs::remove_dir_all(&target).map_err(|e| RunError::io(&target, e))?;
    }
    fs::rename(&staging, &target).map_err(|e| RunError::io(&target, e))?;
    Ok(summary)
}

fn write_sweep_table(path: &Path, axes: &[SweepAxis], rows: &[SweepRow]) -> Result<(), RunError> {
    let opt = |v: Option<f64>| v.map(output::fmt_float).unwrap_or_default();
    let mut text = format!(
        "# squeeze {}; columns: point, directory, <axis values>, status, initially_squeezed [0|1], \
         first_loss_time [1/omega0], oscillation_count, min_delta [omega0], \
         stationary_variance [1], message\n",
        output::VERSION
    );
    let mut header = vec!["point".to_string(), "directory".to_string()];
    header.extend(axes.iter().map(|a| a.field.clone()));
    header.extend(
        [
            "status",
            "initially_squeezed",
            "first_loss_time",
            "oscillation_count",
            "min_delta",
            "stationary_variance",
            "message",
        ]
        .map(String::from),
    );
    text.push_str(&header.join(","));
    text.push('\n');

    for row in rows {
        let mut cells = vec![row.index.to_string(), row.directory.clone()];
        cells.extend(row.assignments.iter().map(|(_, v)| v.clone()));
        match &row.outcome {
            Ok(p) => cells.extend([
                "ok".to_string(),
                p.initially_squeezed
                    .map(|b| u8::from(b).to_string())
                    .unwrap_or_default(),
                opt(p.first_loss_time),
                p.oscillation_count
                    .map(|c| c.to_string())
                    .unwrap_or_default(),
                opt(p.min_delta),
                output::fmt_float(p.stationary_variance),
                String::new(),
            ]),
            Err(message) => {
                cells.push("error".to_string());
                cells.extend(std::iter::repeat_n(String::new(), 5));
                cells.push(format!("\"{}\"", message.replace('"', "'")));
            }
        }
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| RunError::io(path, e))
}
