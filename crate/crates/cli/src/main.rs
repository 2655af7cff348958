use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use berezin_cli::compute::{cmd_compute, Points, Target};
use berezin_cli::config::{Format, RunConfig};
use berezin_cli::error::{CliError, CliResult};
use berezin_cli::report::Table;
use berezin_cli::suite::Context;
use berezin_cli::{cmd_verify, threads_from_env, with_threads};
use berezin_core::fuchsian::FundamentalDomain;
use berezin_core::quantization::calibrate;

/// Γ-equivariant Berezin quantization at desk scale. The worker count is
/// read from BEREZIN_THREADS (default: all cores) and never changes output.
#[derive(Debug, Parser)]
#[command(name = "berezin", version)]
struct Cli {
    /// JSON run configuration; omitted fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format, overriding the configuration.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the acceptance checks; exit status 1 if any fails.
    Verify,
    /// Emit a table for one quantity.
    Compute {
        #[arg(value_enum)]
        what: Target,
        #[command(flatten)]
        points: Points,
    },
    /// Calibrated identity constants for the configured weight.
    Calibrate,
    /// Orbit and fundamental-domain summary of the configured group.
    GroupInfo,
}

fn load_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut config = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::from(e).context(p.display().to_string()))?;
            RunConfig::from_json(&text).map_err(|e| e.context(p.display().to_string()))?
        }
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        config.format = f;
    }
    Ok(config)
}

fn calibration_table(config: &RunConfig) -> CliResult<Table> {
    let c = calibrate(config.weight()?)?;
    let mut t = Table::new(
        config.hash(),
        &[
            "r",
            "kappa_star",
            "kappa_meanvalue",
            "kappa_kernel",
            "printed_meanvalue",
            "printed_meanvalue_residual",
        ],
    );
    t.push(vec![
        c.r,
        c.kappa_star,
        c.kappa_meanvalue,
        c.kappa_kernel,
        c.printed_meanvalue,
        c.printed_meanvalue_residual,
    ]);
    Ok(t)
}

fn group_info(ctx: &Context) -> CliResult<Table> {
    let group = ctx.config.load_group()?;
    let table = ctx.table()?;
    let mut t = Table::new(
        ctx.config.hash(),
        &[
            "generators",
            "depth",
            "orbit_size",
            "reliable_radius",
            "domain_sides",
            "covolume",
            "genus",
        ],
    );
    let (sides, covolume) = if group.is_trivial() {
        (0.0, f64::INFINITY)
    } else {
        let d: &FundamentalDomain = ctx.domain()?;
        (d.vertices().len() as f64, d.covolume())
    };
    let genus = ctx.config.genus()?.map_or(f64::NAN, f64::from);
    t.push(vec![
        group.generators().len() as f64,
        table.max_word_length() as f64,
        table.len() as f64,
        table.reliable_radius(),
        sides,
        covolume,
        genus,
    ]);
    Ok(t)
}

/// Rendered output and whether the run passed.
fn run(cli: &Cli) -> CliResult<(String, bool)> {
    let config = load_config(cli)?;
    let threads = threads_from_env()?;
    let format = config.format;
    match &cli.command {
        Command::Verify => {
            let report = cmd_verify(&config, threads)?;
            Ok((report.render(format)?, report.passed()))
        }
        Command::Compute { what, points } => {
            let ctx = Context::new(config)?;
            let t = with_threads(threads, || cmd_compute(&ctx, *what, points))??;
            Ok((t.render(format)?, true))
        }
        Command::Calibrate => Ok((calibration_table(&config)?.render(format)?, true)),
        Command::GroupInfo => {
            let ctx = Context::new(config)?;
            let t = with_threads(threads, || group_info(&ctx))??;
            Ok((t.render(format)?, true))
        }
    }
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::from(e).context(p.display().to_string()))
        }
        None => Ok(std::io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|(text, ok)| emit(&cli, &text).map(|_| ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
