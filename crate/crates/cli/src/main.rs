use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qoseval_core::{
    evaluate, load_config, load_measurements, render_report, render_weights, render_whatif,
    weights_overview, whatif, Directive, Error, Format,
};

/// Unified QoS evaluation of heterogeneous radio access networks.
#[derive(Parser)]
#[command(name = "qoseval", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a configuration file.
    Validate { config: PathBuf },
    /// Print each RAN's comparison matrix and application weights.
    Weights {
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Evaluate measurements against a configuration.
    Evaluate {
        config: PathBuf,
        measurements: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Compare the baseline with one pairwise importance judgment changed.
    Whatif {
        config: PathBuf,
        measurements: PathBuf,
        /// `<app> <scale> <app>`, e.g. `voice extreme vs` or `voice k9 vs`.
        #[arg(long, num_args = 3, value_names = ["APP", "SCALE", "OVER"], required = true)]
        set: Vec<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        }
    }
}

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Validate { config } => {
            let cfg = load_config(&config)?;
            let apps: usize = cfg.rans.iter().map(|r| r.applications.len()).sum();
            println!(
                "{}: network `{}` is valid ({} RANs, {} applications)",
                config.display(),
                cfg.network,
                cfg.rans.len(),
                apps
            );
        }
        Command::Weights { config, format } => {
            let overview = weights_overview(&load_config(config)?)?;
            for ran in &overview {
                for (id, w) in ran.weights.iter() {
                    if w == 0.0 {
                        eprintln!("warning: {}/{id}: application received weight 0", ran.ran);
                    }
                }
            }
            print!("{}", render_weights(&overview, format.into()));
        }
        Command::Evaluate {
            config,
            measurements,
            format,
        } => {
            let cfg = load_config(config)?;
            let m = load_measurements(measurements, &cfg)?;
            let report = evaluate(&cfg, &m)?;
            warn_all(&report.warnings);
            print!("{}", render_report(&report, format.into()));
        }
        Command::Whatif {
            config,
            measurements,
            set,
            format,
        } => {
            let cfg = load_config(config)?;
            let m = load_measurements(measurements, &cfg)?;
            let directive = Directive::new(&set[0], &set[1], &set[2])?;
            let report = whatif(&cfg, &m, &directive)?;
            warn_all(&report.modified.warnings);
            print!("{}", render_whatif(&report, format.into()));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 2 } else { 1 })
        }
    }
}
