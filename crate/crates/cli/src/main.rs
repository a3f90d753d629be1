//! Command-line front end: witness runs, separability verdicts, threshold
//! sweeps, and sampled certification, with text/JSON reports and CSV
//! sweeps.
//!
//! Exit codes: 0 on success (whatever the physical verdict), 2 on invalid
//! input, 3 on internal solver failure.

mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use quasijoint::{
    run_sample, run_separability, run_witness, sweep_cell, sweep_parameters, CommandKind,
    Error as CoreError, GridSpec, OutputFormat, Report, RunConfig, StateSpec, SweepRow, SweepSpec,
};

#[derive(Parser)]
#[command(
    name = "quasijoint",
    version,
    about = "Joint-measurement nonclassicality: quasi-probability negativity and hidden-variable separability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Retrieve the quasi-joint distribution of a state and flag negativity.
    Witness(WitnessArgs),
    /// Decide whether the observed statistics admit a hidden-variable mixture.
    Separability(SeparabilityArgs),
    /// Sweep (|s|, eta) and emit min entry, flag, and LP verdict as CSV.
    Sweep(SweepArgs),
    /// Simulate finite shots and certify negativity at a sigma threshold.
    Sample(SampleArgs),
    /// Execute a run configuration from a TOML or JSON file.
    Run(RunArgs),
}

#[derive(Args)]
struct StateArgs {
    /// Bloch components x,y,z with |s| <= 1.
    #[arg(long, value_name = "X,Y,Z")]
    bloch: Option<String>,
    /// Row-major 2x2 density-matrix entries (complex, e.g. 0.5,0.25-0.25i,0.25+0.25i,0.5).
    #[arg(long, value_name = "E00,E01,E10,E11")]
    density: Option<String>,
    /// Pure-state amplitudes of dimension >= 2 (complex); normalized on input.
    #[arg(long, value_name = "A0,A1,...")]
    pure: Option<String>,
    /// Expected dimension of --pure, checked against the amplitude count.
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Args)]
struct CommonArgs {
    /// Measurement strength in (0, 1]; defaults to 0.9 min(1, sqrt(3)|s|).
    #[arg(long)]
    eta: Option<f64>,
    /// Report format.
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => OutputFormat::Text,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args)]
struct GridArgs {
    /// Hidden-variable grid: number of radial rings.
    #[arg(long, default_value_t = 24)]
    rings: usize,
    /// Hidden-variable grid: number of angles per ring.
    #[arg(long, default_value_t = 48)]
    angles: usize,
}

#[derive(Args)]
struct WitnessArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SeparabilityArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Steps of |s| over (0, 1].
    #[arg(long, default_value_t = 100)]
    s_steps: usize,
    /// Steps of eta over (0, 1].
    #[arg(long, default_value_t = 100)]
    eta_steps: usize,
    #[command(flatten)]
    grid: GridArgs,
    /// Write the CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<String>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    common: CommonArgs,
    /// Number of measurement shots.
    #[arg(long)]
    shots: u64,
    /// PRNG seed; runs are bit-reproducible given the seed.
    #[arg(long)]
    seed: u64,
    /// Certification threshold in standard errors.
    #[arg(long, default_value_t = 5.0)]
    threshold: f64,
}

#[derive(Args)]
struct RunArgs {
    /// RunConfig as TOML or JSON; a full report file also works (its
    /// embedded config is re-executed).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        let code = match err {
            CoreError::SolverFailure(_) => 3,
            _ => 2,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError {
            code: 2,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Witness(args) => {
            let mut config = RunConfig::new(CommandKind::Witness);
            config.state = Some(parse_state(&args.state)?);
            apply_common(&mut config, &args.common);
            execute(&config)
        }
        Command::Separability(args) => {
            let mut config = RunConfig::new(CommandKind::Separability);
            config.state = Some(parse_state(&args.state)?);
            apply_common(&mut config, &args.common);
            config.grid = GridSpec {
                rings: args.grid.rings,
                angles: args.grid.angles,
            };
            execute(&config)
        }
        Command::Sweep(args) => {
            let mut config = RunConfig::new(CommandKind::Sweep);
            config.sweep = Some(SweepSpec {
                s_steps: args.s_steps,
                eta_steps: args.eta_steps,
            });
            config.grid = GridSpec {
                rings: args.grid.rings,
                angles: args.grid.angles,
            };
            config.output = args.output;
            execute(&config)
        }
        Command::Sample(args) => {
            let mut config = RunConfig::new(CommandKind::Sample);
            config.state = Some(parse_state(&args.state)?);
            apply_common(&mut config, &args.common);
            config.shots = Some(args.shots);
            config.seed = Some(args.seed);
            config.sigma_threshold = args.threshold;
            execute(&config)
        }
        Command::Run(args) => {
            let config = load_config(&args.config)?;
            execute(&config)
        }
    }
}

fn apply_common(config: &mut RunConfig, common: &CommonArgs) {
    config.eta = common.eta;
    config.format = common.format.into();
    config.output = common.output.clone();
}

fn execute(config: &RunConfig) -> Result<(), CliError> {
    config.validate()?;
    match config.command {
        CommandKind::Witness => emit_report(config, run_witness(config)?),
        CommandKind::Separability => emit_report(config, run_separability(config)?),
        CommandKind::Sample => emit_report(config, run_sample(config)?),
        CommandKind::Sweep => {
            let spec = config.sweep.unwrap_or_default();
            let grid = config.grid.build()?;
            let rows: Result<Vec<SweepRow>, CoreError> = sweep_parameters(&spec)
                .par_iter()
                .map(|&(s, eta)| sweep_cell(s, eta, &grid))
                .collect();
            write_out(config.output.as_deref(), &output::render_csv(&rows?))
        }
    }
}

fn emit_report(config: &RunConfig, report: Report) -> Result<(), CliError> {
    let rendered = match config.format {
        OutputFormat::Text => output::render_text(&report),
        OutputFormat::Json => {
            let mut json = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::invalid(e.to_string()))?;
            json.push('\n');
            json
        }
    };
    write_out(config.output.as_deref(), &rendered)
}

fn write_out(path: Option<&str>, content: &str) -> Result<(), CliError> {
    match path {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn load_config(path: &PathBuf) -> Result<RunConfig, CliError> {
    let content = fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
    let trimmed = content.trim_start();
    if trimmed.starts_with('{') {
        if let Ok(report) = serde_json::from_str::<Report>(&content) {
            return Ok(report.config);
        }
        serde_json::from_str::<RunConfig>(&content)
            .map_err(|e| CliError::invalid(format!("invalid JSON config: {e}")))
    } else {
        toml::from_str::<RunConfig>(&content)
            .map_err(|e| CliError::invalid(format!("invalid TOML config: {e}")))
    }
}

fn parse_state(args: &StateArgs) -> Result<StateSpec, CliError> {
    let supplied = u32::from(args.bloch.is_some())
        + u32::from(args.density.is_some())
        + u32::from(args.pure.is_some());
    if supplied != 1 {
        return Err(CliError::invalid(
            "exactly one of --bloch, --density, --pure is required",
        ));
    }
    if let Some(spec) = &args.bloch {
        let parts = parse_reals(spec)?;
        if parts.len() != 3 {
            return Err(CliError::invalid(format!(
                "--bloch needs 3 components, got {}",
                parts.len()
            )));
        }
        return Ok(StateSpec::Bloch {
            components: [parts[0], parts[1], parts[2]],
        });
    }
    if let Some(spec) = &args.density {
        let entries = parse_complexes(spec)?;
        if entries.len() != 4 {
            return Err(CliError::invalid(format!(
                "--density needs 4 entries, got {}",
                entries.len()
            )));
        }
        return Ok(StateSpec::Density { entries });
    }
    let spec = args.pure.as_ref().expect("counted above");
    let amplitudes = parse_complexes(spec)?;
    if let Some(dim) = args.dim {
        if amplitudes.len() != dim {
            return Err(CliError::invalid(format!(
                "--dim {dim} does not match {} amplitudes",
                amplitudes.len()
            )));
        }
    }
    Ok(StateSpec::Pure { amplitudes })
}

fn parse_reals(spec: &str) -> Result<Vec<f64>, CliError> {
    spec.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::invalid(format!("invalid number '{p}'")))
        })
        .collect()
}

fn parse_complexes(spec: &str) -> Result<Vec<[f64; 2]>, CliError> {
    spec.split(',').map(|p| parse_complex(p.trim())).collect()
}

/// Parses "1.5", "-2e-3", "i", "-0.3i", "1+2i", "1.5e-3-0.25i".
fn parse_complex(token: &str) -> Result<[f64; 2], CliError> {
    let bad = || CliError::invalid(format!("invalid complex number '{token}'"));
    if token.is_empty() {
        return Err(bad());
    }
    // Split at the last '+'/'-' that is neither a leading sign nor an
    // exponent sign; the tail is the imaginary part.
    let bytes = token.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
            split = Some(i);
            break;
        }
    }
    let (real_part, imag_part) = match split {
        Some(i) if token.ends_with(['i', 'I']) => (&token[..i], &token[i..]),
        _ => {
            if token.ends_with(['i', 'I']) {
                ("", token)
            } else {
                (token, "")
            }
        }
    };
    let real = if real_part.is_empty() {
        0.0
    } else {
        real_part.parse::<f64>().map_err(|_| bad())?
    };
    let imag = if imag_part.is_empty() {
        0.0
    } else {
        let body = &imag_part[..imag_part.len() - 1];
        match body {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => body.parse::<f64>().map_err(|_| bad())?,
        }
    };
    Ok([real, imag])
}
