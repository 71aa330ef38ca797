//! Command-line front end: config resolution, subcommand dispatch and
//! deterministic output emission.
//!
//! Data goes to the output file or standard output; logging goes to standard
//! error. Exit codes: 0 success, 2 configuration error, 3 unstable dynamics,
//! 4 numeric failure.

mod emit;
mod manifest;
mod resolve;

use clap::{Args, Parser, Subcommand, ValueEnum};
use optograv_core::correlations::{CorrelationsError, CovarianceReport};
use optograv_core::dynamics::{build_dynamics, stability};
use optograv_core::gravity::{exact_coefficients, farfield_coefficients, steady_displacement};
use optograv_core::model::Scenario;
use optograv_core::spectra::{self, GridSpec, Spacing};
use std::process::ExitCode;
use std::time::Instant;

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_UNSTABLE: u8 = 3;
pub const EXIT_NUMERIC: u8 = 4;

#[derive(Parser)]
#[command(
    name = "optograv",
    version,
    about = "Displacement noise spectra and all-optical correlations of a \
             gravitationally coupled two-axis optomechanical probe"
)]
struct Cli {
    /// Suppress informational logging on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    /// Verbose logging on stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Shipped preset name (`fig3`, `fig4`) or a path to a TOML file.
    #[arg(long, default_value = "fig3")]
    preset: String,
    /// Override a resolved key, e.g. --set temperature_k=0.008 or
    /// --set mech_y.damping_hz=1 (repeatable, highest precedence).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScenarioArg {
    Quantum,
    Classical,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Alpha,
    Beta,
}

impl BranchArg {
    fn scenario(self) -> Scenario {
        match self {
            BranchArg::Alpha => Scenario::QuantumAlpha,
            BranchArg::Beta => Scenario::QuantumBeta,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a configuration against every model invariant.
    Validate {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Dump the force-expansion coefficients for all three scenarios.
    Coeffs {
        #[command(flatten)]
        config: ConfigArgs,
        /// Use the exact expressions instead of the far-field limit.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Emit drift/diffusion matrices and the drift spectrum.
    Dynamics {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum, default_value = "quantum")]
        scenario: ScenarioArg,
        #[arg(long, value_enum, default_value = "alpha")]
        branch: BranchArg,
        #[arg(long)]
        out: Option<String>,
    },
    /// Scan the displacement noise spectrum over a frequency grid.
    Dns {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum, default_value = "both")]
        scenario: ScenarioArg,
        #[arg(long, value_enum, default_value = "alpha")]
        branch: BranchArg,
        /// Grid as min_hz,max_hz,points,lin|log.
        #[arg(long, default_value = "8.5e3,1.1e4,10000,lin")]
        grid: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        out: Option<String>,
        /// Also write a gnuplot script next to the CSV.
        #[arg(long)]
        plotscript: bool,
    },
    /// Sweep the spring coefficient and record sigma_tot and discord.
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum, default_value = "quantum")]
        scenario: ScenarioArg,
        #[arg(long, value_enum, default_value = "alpha")]
        branch: BranchArg,
        /// Control range as lo,hi,points (C1_x in N/m).
        #[arg(long, default_value = "0,5e4,100")]
        control_range: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        out: Option<String>,
        /// Report discord in bits instead of nats.
        #[arg(long)]
        bits: bool,
    },
    /// Steady-state covariance report for one scenario.
    Covariance {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum, default_value = "quantum")]
        scenario: ScenarioArg,
        #[arg(long, value_enum, default_value = "alpha")]
        branch: BranchArg,
        #[arg(long)]
        out: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let started = Instant::now();
    let result = run(&cli);
    match result {
        Ok(subcommand) => {
            if !cli.quiet {
                eprintln!(
                    "optograv {subcommand}: done in {:.3} s",
                    started.elapsed().as_secs_f64()
                );
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("optograv: error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

/// Thread-pool size from OPTOGRAV_THREADS (default: rayon's choice).
fn init_threads() {
    if let Ok(v) = std::env::var("OPTOGRAV_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Unstable(String),
    Numeric(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration: {m}"),
            CliError::Unstable(m) => write!(f, "unstable dynamics: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::Io(m) => write!(f, "i/o: {m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Unstable(_) => EXIT_UNSTABLE,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Io(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<CorrelationsError> for CliError {
    fn from(e: CorrelationsError) -> Self {
        match &e {
            CorrelationsError::NoSteadyState(_) => CliError::Unstable(e.to_string()),
            CorrelationsError::Gravity(_) | CorrelationsError::BadSweep(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

fn scenarios_for(arg: ScenarioArg, branch: BranchArg) -> Vec<Scenario> {
    match arg {
        ScenarioArg::Quantum => vec![branch.scenario()],
        ScenarioArg::Classical => vec![Scenario::Classical],
        ScenarioArg::Both => vec![branch.scenario(), Scenario::Classical],
    }
}

fn run(cli: &Cli) -> Result<&'static str, CliError> {
    let log = |resolved: &resolve::ResolvedConfig| {
        if cli.verbose && !cli.quiet {
            eprintln!(
                "optograv: resolved `{}` with {} override(s), fingerprint {}",
                resolved.source,
                resolved.overrides.len(),
                resolved.params.fingerprint_hex()
            );
        }
    };
    match &cli.command {
        Command::Validate { config } => {
            let resolved = resolve::resolve_config(&config.preset, &config.sets)?;
            log(&resolved);
            let display = resolve::describe(&resolved);
            emit::write_text(None, &display)?;
            Ok("validate")
        }
        Command::Coeffs { config, exact, out } => {
            let resolved = resolve::resolve_config(&config.preset, &config.sets)?;
            log(&resolved);
            let p = &resolved.params;
            let pick = |s: Scenario| -> Result<_, CliError> {
                if *exact {
                    if s == Scenario::Classical {
                        let a = exact_coefficients(p, Scenario::QuantumAlpha)
                            .map_err(|e| CliError::Config(e.to_string()))?;
                        let b = exact_coefficients(p, Scenario::QuantumBeta)
                            .map_err(|e| CliError::Config(e.to_string()))?;
                        optograv_core::gravity::classical_average(&a, &b)
                            .map_err(|e| CliError::Config(e.to_string()))
                    } else {
                        exact_coefficients(p, s).map_err(|e| CliError::Config(e.to_string()))
                    }
                } else {
                    farfield_coefficients(p, s).map_err(|e| CliError::Config(e.to_string()))
                }
            };
            let alpha = pick(Scenario::QuantumAlpha)?;
            let beta = pick(Scenario::QuantumBeta)?;
            let classical = pick(Scenario::Classical)?;
            let displacements = [
                steady_displacement(p, Scenario::QuantumAlpha),
                steady_displacement(p, Scenario::QuantumBeta),
                steady_displacement(p, Scenario::Classical),
            ];
            let man = manifest::RunManifest::new("coeffs", &resolved);
            let doc = emit::coeffs_json(&man, *exact, &[alpha, beta, classical], &displacements);
            emit::write_text(out.as_deref(), &doc)?;
            Ok("coeffs")
        }
        Command::Dynamics {
            config,
            scenario,
            branch,
            out,
        } => {
            let resolved = resolve::resolve_config(&config.preset, &config.sets)?;
            log(&resolved);
            let scen = scenarios_for(*scenario, *branch)[0];
            let coeffs = farfield_coefficients(&resolved.params, scen)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let dyn_ = build_dynamics(&resolved.params, &coeffs)
                .map_err(|e| CliError::Numeric(e.to_string()))?;
            let report = stability(&dyn_).map_err(|e| CliError::Numeric(e.to_string()))?;
            let man = manifest::RunManifest::new("dynamics", &resolved);
            let doc = emit::dynamics_json(&man, scen, &dyn_, &report);
            emit::write_text(out.as_deref(), &doc)?;
            Ok("dynamics")
        }
        Command::Dns {
            config,
            scenario,
            branch,
            grid,
            format,
            out,
            plotscript,
        } => {
            let resolved = resolve::resolve_config(&config.preset, &config.sets)?;
            log(&resolved);
            let gridspec = parse_grid(grid)?;
            let scens = scenarios_for(*scenario, *branch);
            let mut spectra_out = Vec::new();
            for &s in &scens {
                spectra::require_stable(&resolved.params, s).map_err(|e| match e {
                    spectra::SpectraError::Dynamics(
                        optograv_core::dynamics::DynamicsError::Unstable(m),
                    ) => CliError::Unstable(format!("{s}: max Re eigenvalue {m:e}")),
                    other => CliError::Numeric(other.to_string()),
                })?;
                let spec = spectra::scan(&resolved.params, s, &gridspec)
                    .map_err(|e| CliError::Numeric(e.to_string()))?;
                spectra_out.push(spec);
            }
            let man = manifest::RunManifest::new("dns", &resolved);
            match format {
                FormatArg::Csv => {
                    let doc = emit::dns_csv(&man, &gridspec, &spectra_out);
                    emit::write_text(out.as_deref(), &doc)?;
                    if *plotscript {
                        let target = out.as_deref().ok_or_else(|| {
                            CliError::Config("--plotscript needs --out".to_string())
                        })?;
                        let script = emit::dns_plotscript(target, &spectra_out);
                        std::fs::write(format!("{target}.gp"), script)?;
                    }
                }
                FormatArg::Json => {
                    if *plotscript {
                        return Err(CliError::Config(
                            "--plotscript applies to csv output".to_string(),
                        ));
                    }
                    let doc = emit::dns_json(&man, &gridspec, &spectra_out);
                    emit::write_text(out.as_deref(), &doc)?;
                }
            }
            Ok("dns")
        }
        Command::Sweep {
            config,
            scenario,
            branch,
            control_range,
            format,
            out,
            bits,
        } => {
            let resolved = resolve::resolve_config(&config.preset, &config.sets)?;
            log(&resolved);
            let (lo, hi, n) = parse_range(control_range)?;
            let scen = scenarios_for(*scenario, *branch)[0];
            let sw = optograv_core::correlations::sweep_c1(&resolved.params, scen, (lo, hi), n)?;
            let man = manifest::RunManifest::new("sweep", &resolved);
            let doc = match format {
                FormatArg::Csv => emit::sweep_csv(&man, scen, &sw, *bits),
                FormatArg::Json => emit::sweep_json(&man, scen, &sw, *bits),
            };
            emit::write_text(out.as_deref(), &doc)?;
            Ok("sweep")
        }
        Command::Covariance {
            config,
            scenario,
            branch,
            out,
        } => {
            let resolved = resolve::resolve_config(&config.preset, &config.sets)?;
            log(&resolved);
            let scen = scenarios_for(*scenario, *branch)[0];
            let report = CovarianceReport::compute(&resolved.params, scen)?;
            if let Some(w) = &report.warning {
                eprintln!("optograv covariance: warning: {w}");
            }
            let man = manifest::RunManifest::new("covariance", &resolved);
            let doc = emit::covariance_json(&man, &report);
            emit::write_text(out.as_deref(), &doc)?;
            Ok("covariance")
        }
    }
}

fn parse_grid(text: &str) -> Result<GridSpec, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CliError::Config(format!(
            "grid must be min_hz,max_hz,points,lin|log, got `{text}`"
        )));
    }
    let min_hz: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Config(format!("bad grid min `{}`", parts[0])))?;
    let max_hz: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Config(format!("bad grid max `{}`", parts[1])))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Config(format!("bad grid count `{}`", parts[2])))?;
    let spacing = match parts[3] {
        "lin" | "linear" => Spacing::Linear,
        "log" => Spacing::Log,
        other => return Err(CliError::Config(format!("bad grid spacing `{other}`"))),
    };
    Ok(GridSpec {
        omega_min: std::f64::consts::TAU * min_hz,
        omega_max: std::f64::consts::TAU * max_hz,
        n_points: n,
        spacing,
    })
}

fn parse_range(text: &str) -> Result<(f64, f64, usize), CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "control range must be lo,hi,points, got `{text}`"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Config(format!("bad range lo `{}`", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Config(format!("bad range hi `{}`", parts[1])))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Config(format!("bad range count `{}`", parts[2])))?;
    Ok((lo, hi, n))
}
