//! Batch command-line frontend for the FIV running-in analysis pipeline.
//!
//! Exit codes: 0 success, 2 input error, 3 completed with
//! degenerate-analysis flags.

mod commands;
mod config;
mod fileio;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::ConfigArgs;

#[derive(Parser)]
#[command(
    name = "fivtrack",
    version,
    about = "Friction-induced vibration extraction and wear-stage analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Identify the FIV reference frequency from a directory of squeal
    /// records and report the matching HWPT band.
    Identify {
        /// Directory of squeal record CSV files.
        squeal_dir: PathBuf,
        /// JSON report path.
        #[arg(long, default_value = "identify_report.json")]
        out: PathBuf,
        /// Fixed provenance timestamp (for reproducible reports).
        #[arg(long)]
        timestamp: Option<String>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Run the full pipeline over a directory of running-in records.
    Analyze {
        /// Directory of lubricated running-in record CSV files.
        records_dir: PathBuf,
        /// Friction-coefficient CSV (`t_min,mu`); without it the wear
        /// stages come from the RMS trend alone (flagged).
        #[arg(long)]
        friction: Option<PathBuf>,
        /// Directory of squeal records for the reference frequency.
        #[arg(long)]
        squeal_dir: Option<PathBuf>,
        /// Use this reference frequency directly instead of squeal records.
        #[arg(long, value_name = "HZ", conflicts_with = "squeal_dir")]
        reference_hz: Option<f64>,
        /// Lubrication parameter file; embeds a lubrication report.
        #[arg(long)]
        lubrication_params: Option<PathBuf>,
        /// Override the computed minimum film thickness, nanometres.
        #[arg(long, value_name = "NM")]
        h_min_nm: Option<f64>,
        /// Output directory for report.json and rms_series.csv.
        #[arg(long, default_value = "analysis")]
        out: PathBuf,
        /// Fixed provenance timestamp (for reproducible reports).
        #[arg(long)]
        timestamp: Option<String>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Evaluate film thickness and lubrication regime from a parameter file.
    Lubrication {
        /// `key = value` parameter file (see README for the keys).
        params: PathBuf,
        /// Override the computed minimum film thickness, nanometres.
        #[arg(long, value_name = "NM")]
        h_min_nm: Option<f64>,
        /// JSON report path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fixed provenance timestamp (for reproducible reports).
        #[arg(long)]
        timestamp: Option<String>,
    },
    /// Generate a synthetic running-in dataset with ground truth.
    Synth {
        /// Output directory (records/, friction.csv, manifest.json).
        out_dir: PathBuf,
        /// Scenario TOML file; defaults to the reference scenario.
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Also generate squeal records at these comma-separated
        /// frequencies (Hz) under squeal/.
        #[arg(long, value_name = "HZ,HZ,...")]
        squeal_freqs: Option<String>,
        /// SNR of the generated squeal records, dB.
        #[arg(long, default_value_t = 40.0)]
        squeal_snr_db: f64,
    },
    /// Export the Welch power spectrum of one record as CSV.
    Spectrum {
        /// Record CSV file.
        record: PathBuf,
        /// Output CSV path.
        #[arg(long, default_value = "spectrum.csv")]
        out: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Print the effective pipeline configuration as TOML.
    Config {
        #[command(flatten)]
        config: ConfigArgs,
    },
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Identify {
            squeal_dir,
            out,
            timestamp,
            config,
        } => commands::cmd_identify(&squeal_dir, &out, config.resolve()?, timestamp.as_deref()),
        Command::Analyze {
            records_dir,
            friction,
            squeal_dir,
            reference_hz,
            lubrication_params,
            h_min_nm,
            out,
            timestamp,
            config,
        } => commands::cmd_analyze(commands::AnalyzeArgs {
            records_dir: &records_dir,
            friction: friction.as_deref(),
            squeal_dir: squeal_dir.as_deref(),
            reference_hz,
            lubrication_params: lubrication_params.as_deref(),
            h_min_override_m: h_min_nm.map(|nm| nm * 1e-9),
            out_dir: &out,
            config: config.resolve()?,
            timestamp: timestamp.as_deref(),
        }),
        Command::Lubrication {
            params,
            h_min_nm,
            out,
            timestamp,
        } => commands::cmd_lubrication(
            &params,
            h_min_nm.map(|nm| nm * 1e-9),
            out.as_deref(),
            timestamp.as_deref(),
        ),
        Command::Synth {
            out_dir,
            scenario,
            squeal_freqs,
            squeal_snr_db,
        } => commands::cmd_synth(
            scenario.as_deref(),
            squeal_freqs.as_deref(),
            squeal_snr_db,
            &out_dir,
        ),
        Command::Spectrum {
            record,
            out,
            config,
        } => commands::cmd_spectrum(&record, &out, config.resolve()?),
        Command::Config { config } => {
            print!("{}", config.resolve()?.to_toml());
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(3),
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}
