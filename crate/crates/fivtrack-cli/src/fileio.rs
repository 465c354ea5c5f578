//! File formats: record CSV, friction-trace CSV, lubrication parameter
//! files and directory ingestion.
//!
//! Record files carry `# key=value` header lines followed by one sample row
//! per line:
//!
//! ```text
//! # fs_hz=25641.03
//! # t_capture_s=12
//! # channel=z
//! # unit=m/s^2
//! 0.0125
//! -0.0103
//! ```
//!
//! Multi-channel files put comma-separated labels in the `channel` header
//! and one comma-separated row per sample; the channel selector picks a
//! column by index or label.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use fivtrack::{AccelUnit, FrictionTrace, TimeSeriesRecord};

/// Reads one record file, selecting `channel` (index or label) from
/// multi-channel data.
pub fn read_record(path: &Path, channel: &str) -> anyhow::Result<TimeSeriesRecord> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading record {}", path.display()))?;
    let mut fs_hz: Option<f64> = None;
    let mut t_capture: Option<f64> = None;
    let mut labels: Vec<String> = vec![];
    let mut unit = AccelUnit::default();
    let mut columns: Option<Vec<Vec<f64>>> = None;

    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            let (key, value) = header
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: malformed header `{raw}`", line_no + 1))?;
            match key.trim() {
                "fs_hz" => fs_hz = Some(parse_float(value, line_no)?),
                "t_capture_s" => t_capture = Some(parse_float(value, line_no)?),
                "channel" => {
                    labels = value.split(',').map(|s| s.trim().to_string()).collect();
                }
                "unit" => {
                    unit = value
                        .trim()
                        .parse()
                        .map_err(|e| anyhow!("line {}: {e}", line_no + 1))?;
                }
                _ => {} // ignore unknown headers
            }
            continue;
        }
        let values: Vec<f64> = line
            .split(',')
            .map(|field| parse_float(field, line_no))
            .collect::<anyhow::Result<_>>()?;
        let columns = columns.get_or_insert_with(|| vec![Vec::new(); values.len()]);
        if values.len() != columns.len() {
            bail!(
                "line {}: expected {} columns, found {}",
                line_no + 1,
                columns.len(),
                values.len()
            );
        }
        for (column, value) in columns.iter_mut().zip(values) {
            column.push(value);
        }
    }

    let fs_hz = fs_hz.ok_or_else(|| anyhow!("missing `# fs_hz=` header"))?;
    let columns = columns.ok_or_else(|| anyhow!("no sample rows"))?;
    let column_index = match channel.parse::<usize>() {
        Ok(index) => index,
        Err(_) => labels
            .iter()
            .position(|l| l == channel)
            .ok_or_else(|| anyhow!("channel `{channel}` not in {labels:?}"))?,
    };
    let samples = columns
        .into_iter()
        .nth(column_index)
        .ok_or_else(|| anyhow!("channel index {column_index} out of range"))?;
    let label = labels
        .get(column_index)
        .cloned()
        .unwrap_or_else(|| format!("ch{column_index}"));

    let mut record = TimeSeriesRecord::new(samples, fs_hz)?
        .with_channel_label(label)
        .with_unit(unit);
    if let Some(t) = t_capture {
        record = record.with_t_capture(t);
    }
    Ok(record)
}

/// Serialises a record in the format [`read_record`] expects.
pub fn record_to_csv(record: &TimeSeriesRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# fs_hz={}", record.sample_rate());
    if let Some(t) = record.t_capture() {
        let _ = writeln!(out, "# t_capture_s={t}");
    }
    let _ = writeln!(out, "# channel={}", record.channel_label());
    let _ = writeln!(out, "# unit={}", record.unit());
    for sample in record.samples() {
        let _ = writeln!(out, "{sample}");
    }
    out
}

pub fn write_record(path: &Path, record: &TimeSeriesRecord) -> anyhow::Result<()> {
    std::fs::write(path, record_to_csv(record))
        .with_context(|| format!("writing record {}", path.display()))
}

/// CSV paths of a directory, sorted by file name for deterministic intake.
pub fn list_record_files(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir)
        .with_context(|| format!("reading directory {}", dir.display()))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "csv"))
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no .csv record files in {}", dir.display());
    }
    Ok(files)
}

/// Outcome of ingesting a directory: parsed records plus per-file failures.
pub struct DirIngest {
    pub records: Vec<TimeSeriesRecord>,
    /// File names paired with their records, same order.
    pub names: Vec<String>,
    pub failures: Vec<(String, String)>,
}

/// Reads every record file of `dir`, collecting per-file failures instead of
/// aborting on the first.
pub fn read_record_dir(dir: &Path, channel: &str) -> anyhow::Result<DirIngest> {
    let files = list_record_files(dir)?;
    let mut ingest = DirIngest {
        records: Vec::new(),
        names: Vec::new(),
        failures: Vec::new(),
    };
    for path in files {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        match read_record(&path, channel) {
            Ok(record) => {
                ingest.records.push(record);
                ingest.names.push(name);
            }
            Err(error) => ingest.failures.push((name, format!("{error:#}"))),
        }
    }
    Ok(ingest)
}

/// Reads a `t_min,mu` friction-trace CSV (header row optional).
pub fn read_friction_csv(path: &Path) -> anyhow::Result<FrictionTrace> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading friction trace {}", path.display()))?;
    let mut times = Vec::new();
    let mut mu = Vec::new();
    let mut first_row = true;
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (a, b) = line
            .split_once(',')
            .ok_or_else(|| anyhow!("line {}: expected `t_min,mu`", line_no + 1))?;
        if first_row {
            first_row = false;
            if a.trim().parse::<f64>().is_err() {
                continue; // header row
            }
        }
        times.push(parse_float(a, line_no)?);
        mu.push(parse_float(b, line_no)?);
    }
    Ok(FrictionTrace::new(times, mu)?)
}

pub fn friction_to_csv(trace: &FrictionTrace) -> String {
    let mut out = String::from("t_min,mu\n");
    for (&t, &m) in trace.times_min().iter().zip(trace.mu_values()) {
        let _ = writeln!(out, "{t},{m}");
    }
    out
}

fn parse_float(field: &str, line_no: usize) -> anyhow::Result<f64> {
    let field = field.trim();
    match field {
        "inf" | "Inf" | "Infinite" | "infinite" => Ok(f64::INFINITY),
        _ => field
            .parse()
            .map_err(|_| anyhow!("line {}: `{field}` is not a number", line_no + 1)),
    }
}

/// Parses a `key = value` lubrication parameter file and reports every
/// missing key at once.
pub fn read_lubrication_params(
    path: &Path,
) -> anyhow::Result<(fivtrack::ContactSpec, fivtrack::SurfacePair)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading parameter file {}", path.display()))?;
    let mut values = std::collections::BTreeMap::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected `key = value`", line_no + 1))?;
        values.insert(key.trim().to_lowercase(), parse_float(value, line_no)?);
    }

    const KEYS: [&str; 12] = [
        "k", "eta_pa_s", "mu_m_s", "p_n", "ra_m", "rb_m", "nu_a", "nu_b", "ea_pa", "eb_pa",
        "sigma1_um", "sigma2_um",
    ];
    let missing: Vec<&str> = KEYS
        .iter()
        .copied()
        .filter(|k| !values.contains_key(*k))
        .collect();
    if !missing.is_empty() {
        bail!("missing parameter keys: {}", missing.join(", "));
    }

    let spec = fivtrack::ContactSpec {
        ball_radius_m: values["ra_m"],
        disk_radius_m: values["rb_m"],
        ball_modulus_pa: values["ea_pa"],
        disk_modulus_pa: values["eb_pa"],
        ball_poisson: values["nu_a"],
        disk_poisson: values["nu_b"],
        ellipticity: values["k"],
        viscosity_pa_s: values["eta_pa_s"],
        entrainment_velocity_m_s: values["mu_m_s"],
        load_n: values["p_n"],
    };
    let pair = fivtrack::SurfacePair {
        sigma1_um: values["sigma1_um"],
        sigma2_um: values["sigma2_um"],
    };
    Ok((spec, pair))
}
