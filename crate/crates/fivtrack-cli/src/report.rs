//! JSON report assembly and provenance.
//!
//! Reports are single JSON documents with the key order fixed by the struct
//! definitions, so identical inputs and configuration produce byte-identical
//! files (wall-clock timestamps are suppressed by `--timestamp`).

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::PipelineConfig;

/// Where the reference frequency came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceSource {
    SquealRecords,
    Flag,
    RunningRecords,
}

/// Selected HWPT band and its frequency extent.
#[derive(Debug, Clone, Serialize)]
pub struct BandInfo {
    pub index: usize,
    pub low_hz: f64,
    pub high_hz: f64,
    pub width_hz: f64,
}

/// Reproducibility trailer attached to every report.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    /// ISO-like timestamp, or the value of `--timestamp`.
    pub generated_at: String,
    /// Effective pipeline configuration, when one applies.
    pub config: Option<PipelineConfig>,
    /// Input files with their SHA-256 digests, sorted by name.
    pub inputs: Vec<InputDigest>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

impl Provenance {
    pub fn new(config: Option<PipelineConfig>, timestamp: Option<&str>) -> Self {
        let generated_at = timestamp.map(str::to_owned).unwrap_or_else(|| {
            let secs = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            format!("unix:{secs}")
        });
        Self {
            tool: "fivtrack",
            version: env!("CARGO_PKG_VERSION"),
            generated_at,
            config,
            inputs: Vec::new(),
        }
    }

    /// Digests `paths` and appends them, sorted by file name.
    pub fn digest_inputs(&mut self, paths: &[std::path::PathBuf]) -> anyhow::Result<()> {
        let mut digests = Vec::with_capacity(paths.len());
        for path in paths {
            digests.push(InputDigest {
                name: path
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string()),
                sha256: sha256_file(path)?,
            });
        }
        digests.sort_by(|a, b| a.name.cmp(&b.name));
        self.inputs.extend(digests);
        Ok(())
    }
}

pub fn sha256_file(path: &Path) -> anyhow::Result<String> {
    let bytes = std::fs::read(path)?;
    Ok(hex_digest(&bytes))
}

pub fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// `identify` output.
#[derive(Debug, Clone, Serialize)]
pub struct IdentifyReport {
    pub per_record: Vec<RecordFrequency>,
    pub mean_hz: f64,
    pub spread_hz: f64,
    pub skipped_files: Vec<String>,
    pub failed_files: Vec<FileFailure>,
    pub selected_band: BandInfo,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecordFrequency {
    pub file: String,
    pub dominant_hz: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FileFailure {
    pub file: String,
    pub error: String,
}

/// `analyze` output: the full pipeline result.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub reference: ReferenceBlock,
    pub selected_band: BandInfo,
    pub rms_series: RmsSeriesBlock,
    pub friction_fit: Option<fivtrack::TrendFit>,
    pub segmentation: SegmentationBlock,
    pub trends: fivtrack::RmsTrendReport,
    pub lubrication: Option<fivtrack::LubricationReport>,
    pub flags: Vec<String>,
    pub failed_files: Vec<FileFailure>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReferenceBlock {
    pub source: ReferenceSource,
    pub mean_hz: f64,
    pub spread_hz: f64,
    pub per_record_hz: Vec<f64>,
    pub skipped_records: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RmsSeriesBlock {
    pub window_seconds: f64,
    pub window_centers_s: Vec<f64>,
    pub rms_values: Vec<f64>,
    pub records_per_window: Vec<usize>,
}

impl From<&fivtrack::RmsSeries> for RmsSeriesBlock {
    fn from(series: &fivtrack::RmsSeries) -> Self {
        Self {
            window_seconds: series.window_seconds,
            window_centers_s: series.window_centers_s.clone(),
            rms_values: series.rms_values.clone(),
            records_per_window: series.records_per_window.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SegmentationBlock {
    pub boundary_minutes: f64,
    pub stages: Vec<fivtrack::Stage>,
    pub method_tag: String,
    pub flags: Vec<String>,
}

impl From<&fivtrack::StageSegmentation> for SegmentationBlock {
    fn from(seg: &fivtrack::StageSegmentation) -> Self {
        Self {
            boundary_minutes: seg.boundary_minutes,
            stages: seg.stages.clone(),
            method_tag: seg.method_tag.clone(),
            flags: seg.flags.clone(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Plot-ready CSV of an RMS series.
pub fn rms_series_csv(series: &fivtrack::RmsSeries) -> String {
    let mut out = String::from("window_center_s,rms,records\n");
    for ((&t, &rms), &n) in series
        .window_centers_s
        .iter()
        .zip(&series.rms_values)
        .zip(&series.records_per_window)
    {
        out.push_str(&format!("{t},{rms},{n}\n"));
    }
    out
}

/// Plot-ready CSV of a power spectrum.
pub fn spectrum_csv(spectrum: &fivtrack::PowerSpectrum) -> String {
    let mut out = format!(
        "# resolution_hz={}\n# estimator={}\nfrequency_hz,power\n",
        spectrum.resolution_hz(),
        spectrum.estimator_tag()
    );
    for (&f, &p) in spectrum.frequencies().iter().zip(spectrum.power()) {
        out.push_str(&format!("{f},{p}\n"));
    }
    out
}
