use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use softqed::cli::{self, CliError, Overrides, Report};

#[derive(Parser)]
#[command(name = "softqed", about = "Infrared-finite soft-photon scattering amplitudes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    config: PathBuf,
    /// Override the infrared cutoff (replaces any sweep).
    #[arg(long)]
    lambda: Option<f64>,
    /// Override the ultraviolet cutoff.
    #[arg(long = "Lambda")]
    big_lambda: Option<f64>,
    /// Override the random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write output to this path instead of the configured one.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Vacuum amplitudes and exponent breakdown.
    Corrections(Common),
    /// Emission factors and total amplitude for a photon specification file.
    Emission {
        #[command(flatten)]
        common: Common,
        /// JSON photon specification.
        #[arg(long)]
        photons: PathBuf,
    },
    /// FGB versus Coulomb exponents along the lambda sweep.
    GaugeCheck(Common),
    /// Truncated Fock-space verification suite.
    FockVerify(Common),
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError { code: cli::ExitCode::ConfigError, message: format!("{}: {e}", path.display()) })
}

fn run(command: Command) -> Result<bool, CliError> {
    let (common, photons) = match &command {
        Command::Corrections(c) | Command::GaugeCheck(c) | Command::FockVerify(c) => (c, None),
        Command::Emission { common, photons } => (common, Some(photons)),
    };
    let ov = Overrides {
        lambda: common.lambda,
        big_lambda: common.big_lambda,
        seed: common.seed,
        out: common.out.as_ref().map(|p| p.display().to_string()),
    };
    let resolved = cli::parse_config(&read(&common.config)?, &ov)?;
    let report: Report = match &command {
        Command::Corrections(_) => cli::cmd_corrections(&resolved)?,
        Command::Emission { .. } => cli::cmd_emission(&resolved, &read(photons.expect("emission has photons"))?)?,
        Command::GaugeCheck(_) => cli::cmd_gauge_check(&resolved)?,
        Command::FockVerify(_) => cli::cmd_fock_verify(&resolved)?,
    };
    let text = report.render(resolved.format)?;
    match &resolved.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError { code: cli::ExitCode::ConfigError, message: format!("{path}: {e}") })?,
        None => print!("{text}"),
    }
    Ok(!report.failed)
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("softqed: verification failed");
            ExitCode::from(cli::ExitCode::VerificationFailure as u8)
        }
        Err(e) => {
            eprintln!("softqed: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
