//! Pipeline configuration: defaults, file loading and flag overrides.

use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

/// Every tunable of the analysis pipeline. Serialises losslessly through a
/// TOML config file; command-line flags override individual fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// HWPT decomposition depth; 2^level bands.
    pub hwpt_level: u32,
    /// Squeal search range, Hz.
    pub squeal_search_low_hz: f64,
    pub squeal_search_high_hz: f64,
    /// RMS aggregation window, seconds.
    pub rms_window_s: f64,
    /// Stage-boundary slope threshold, per minute.
    pub slope_threshold_per_min: f64,
    /// Welch segment length, samples.
    pub psd_segment_length: usize,
    /// Welch overlap fraction in [0, 1).
    pub psd_overlap: f64,
    /// Column of multi-channel record files: an index or a channel label.
    pub channel: String,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            hwpt_level: 7,
            squeal_search_low_hz: 1000.0,
            squeal_search_high_hz: 5000.0,
            rms_window_s: 60.0,
            slope_threshold_per_min: 2.5e-4,
            psd_segment_length: 2048,
            psd_overlap: 0.5,
            channel: String::from("0"),
        }
    }
}

impl PipelineConfig {
    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serialises")
    }

    pub fn search_range(&self) -> anyhow::Result<fivtrack::FrequencyRange> {
        Ok(fivtrack::FrequencyRange::new(
            self.squeal_search_low_hz,
            self.squeal_search_high_hz,
        )?)
    }

    pub fn psd(&self) -> fivtrack::PsdConfig {
        fivtrack::PsdConfig {
            segment_length: self.psd_segment_length,
            overlap_fraction: self.psd_overlap,
        }
    }
}

/// Config-related command-line flags shared by the analysis subcommands.
#[derive(Debug, Clone, clap::Args)]
pub struct ConfigArgs {
    /// TOML config file; flags below override its fields.
    #[arg(long, value_name = "FILE")]
    pub config: Option<std::path::PathBuf>,

    /// HWPT decomposition level.
    #[arg(long, value_name = "L")]
    pub hwpt_level: Option<u32>,

    /// Lower edge of the squeal search range, Hz.
    #[arg(long, value_name = "HZ")]
    pub search_low_hz: Option<f64>,

    /// Upper edge of the squeal search range, Hz.
    #[arg(long, value_name = "HZ")]
    pub search_high_hz: Option<f64>,

    /// RMS aggregation window, seconds.
    #[arg(long, value_name = "S")]
    pub rms_window_s: Option<f64>,

    /// Stage-boundary slope threshold, per minute.
    #[arg(long, value_name = "RATE")]
    pub slope_threshold: Option<f64>,

    /// Welch segment length, samples.
    #[arg(long, value_name = "N")]
    pub psd_segment: Option<usize>,

    /// Welch overlap fraction, [0, 1).
    #[arg(long, value_name = "FRAC")]
    pub psd_overlap: Option<f64>,

    /// Channel of multi-channel record files (index or label).
    #[arg(long, value_name = "CH")]
    pub channel: Option<String>,
}

impl ConfigArgs {
    /// File config (or defaults) with flag overrides applied.
    pub fn resolve(&self) -> anyhow::Result<PipelineConfig> {
        let mut config = match &self.config {
            Some(path) => PipelineConfig::from_file(path)?,
            None => PipelineConfig::default(),
        };
        if let Some(v) = self.hwpt_level {
            config.hwpt_level = v;
        }
        if let Some(v) = self.search_low_hz {
            config.squeal_search_low_hz = v;
        }
        if let Some(v) = self.search_high_hz {
            config.squeal_search_high_hz = v;
        }
        if let Some(v) = self.rms_window_s {
            config.rms_window_s = v;
        }
        if let Some(v) = self.slope_threshold {
            config.slope_threshold_per_min = v;
        }
        if let Some(v) = self.psd_segment {
            config.psd_segment_length = v;
        }
        if let Some(v) = self.psd_overlap {
            config.psd_overlap = v;
        }
        if let Some(v) = &self.channel {
            config.channel = v.clone();
        }
        Ok(config)
    }
}
