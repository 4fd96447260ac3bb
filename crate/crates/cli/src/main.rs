use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use squeeze_cli::config::{OutputKind, PRESETS};
use squeeze_cli::scenario::{write_spectra, SweepAxis, SweepOptions, DEFAULT_SWEEP_CAP};
use squeeze_cli::{run, sweep, ConfigError, RunError, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "squeeze",
    version,
    about = "Non-Markovian squeezing dynamics in structured reservoirs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its artifacts
    Run(RunArgs),
    /// Run the Cartesian product of parameter axes
    Sweep(SweepArgs),
    /// Write scaled spectral distributions only
    Spectrum(SpectrumArgs),
    /// List the built-in presets
    Presets,
}

#[derive(Args)]
struct ScenarioArgs {
    /// JSON configuration file (partial documents are fine)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Start from a named preset instead of the defaults
    #[arg(long)]
    preset: Option<String>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Ohmicity exponent
    #[arg(long)]
    s: Option<f64>,
    /// Coupling constant
    #[arg(long)]
    g: Option<f64>,
    /// Cutoff ratio omega_c/omega_0
    #[arg(long)]
    r: Option<f64>,
    /// Temperature k_B T/omega_0
    #[arg(long)]
    temp: Option<f64>,
    /// Initial squeezing sigma^2
    #[arg(long)]
    sigma2: Option<f64>,
    /// high_T or exact
    #[arg(long)]
    mode: Option<String>,
    /// non_markovian, markovian or both
    #[arg(long)]
    baseline: Option<String>,
    /// End time in units of 1/omega_0
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    steps_per_period: Option<usize>,
    /// Comma-separated subset of coefficients,variances,spectrum,wigner,summary
    #[arg(long, value_delimiter = ',')]
    outputs: Option<Vec<String>>,
}

impl ScenarioArgs {
    fn resolve(&self) -> Result<ScenarioConfig, ConfigError> {
        let mut config = match &self.preset {
            Some(name) => ScenarioConfig::preset(name)?,
            None => ScenarioConfig::default(),
        };
        if let Some(path) = &self.config {
            config = config.merged_with_file(path)?;
        }
        let overrides = [
            ("s", self.s.map(|v| v.to_string())),
            ("g", self.g.map(|v| v.to_string())),
            ("r", self.r.map(|v| v.to_string())),
            ("temperature", self.temp.map(|v| v.to_string())),
            ("sigma2", self.sigma2.map(|v| v.to_string())),
            ("mode", self.mode.clone()),
            ("baseline", self.baseline.clone()),
            ("t_end", self.t_end.map(|v| v.to_string())),
            (
                "steps_per_period",
                self.steps_per_period.map(|v| v.to_string()),
            ),
        ];
        for (field, value) in overrides {
            if let Some(value) = value {
                config = config.with_field(field, &value)?;
            }
        }
        if let Some(outputs) = &self.outputs {
            let doc = serde_json::json!({ "outputs": outputs });
            config = config
                .merged_with_json(&doc)
                .map_err(|e| ConfigError::field("outputs", e.to_string()))?;
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Axis as field=v1,v2,...; repeat for a Cartesian product
    #[arg(long = "axis")]
    axes: Vec<String>,
    /// Concurrent sweep points
    #[arg(long)]
    workers: Option<usize>,
    /// Refuse sweeps with more points than this
    #[arg(long, default_value_t = DEFAULT_SWEEP_CAP)]
    max_points: usize,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Exponents to tabulate
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,3")]
    exponents: Vec<f64>,
    /// Largest omega/omega_0 in the table
    #[arg(long)]
    omega_max: Option<f64>,
    /// Number of frequency samples
    #[arg(long)]
    points: Option<usize>,
}

fn execute(command: Command) -> Result<(), RunError> {
    match command {
        Command::Presets => {
            for preset in PRESETS {
                println!("{:<16} {}", preset.name, preset.description);
            }
        }
        Command::Run(args) => {
            let config = args.scenario.resolve()?;
            let summary = run(&config, &args.scenario.out)?;
            let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
            println!("{json}");
        }
        Command::Sweep(args) => {
            let config = args.scenario.resolve()?;
            let axes = args
                .axes
                .iter()
                .map(|a| SweepAxis::parse(a))
                .collect::<Result<Vec<_>, _>>()?;
            let mut options = SweepOptions {
                max_points: args.max_points,
                ..SweepOptions::default()
            };
            if let Some(workers) = args.workers {
                options.workers = workers;
            }
            let rows = sweep(&config, &axes, &args.scenario.out, &options)?;
            let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
            println!(
                "{} points, {} failed; table at {}",
                rows.len(),
                failed,
                args.scenario.out.join("sweep_summary.csv").display()
            );
        }
        Command::Spectrum(args) => {
            let mut config = args.scenario.resolve()?;
            config.spectrum_exponents = args.exponents;
            config.outputs = [OutputKind::Spectrum].into();
            if let Some(w) = args.omega_max {
                config.spectrum_omega_max = w;
            }
            if let Some(n) = args.points {
                config.spectrum_points = n;
            }
            for name in write_spectra(&config, &args.scenario.out)? {
                println!("{}", args.scenario.out.join(name).display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
