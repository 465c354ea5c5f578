//! Reference-frequency identification and narrowband FIV extraction.
//!
//! Workflow: squeal records captured under dry sliding expose the
//! tribo-system natural frequency as their dominant spectral component; the
//! band of the harmonic wavelet packet decomposition containing that
//! frequency is then reconstructed from each lubricated running-in record,
//! and the per-record RMS of the reconstruction is aggregated into a time
//! series.

use crate::error::{Error, Result};
use crate::hwpt::{hwpt_decompose, HwptPlan};
use crate::record::{FrequencyRange, TimeSeriesRecord};
use crate::spectral::{compute_power_spectrum, dominant_frequency, PsdConfig};

/// Dominant frequency consensus across a set of squeal records.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ReferenceFrequency {
    /// Arithmetic mean of the per-record dominant frequencies.
    pub mean_hz: f64,
    /// Dominant frequency of each usable record, in input order.
    pub per_record_hz: Vec<f64>,
    /// `max - min` of the per-record frequencies.
    pub spread_hz: f64,
    /// Records dropped because no dominant component lay in the range.
    pub skipped_records: usize,
}

/// Windowed RMS history of the extracted FIV signal.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RmsSeries {
    /// Centre of each aggregation window, seconds since experiment start.
    pub window_centers_s: Vec<f64>,
    /// Mean of the member-record RMS values per window.
    pub rms_values: Vec<f64>,
    /// Aggregation window length in seconds.
    pub window_seconds: f64,
    /// Number of records contributing to each window.
    pub records_per_window: Vec<usize>,
}

impl RmsSeries {
    pub fn len(&self) -> usize {
        self.window_centers_s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window_centers_s.is_empty()
    }
}

/// Mean dominant frequency of `records` inside `search_range`.
///
/// Records whose in-range spectrum is all zero are skipped (counted in
/// [`ReferenceFrequency::skipped_records`]); it is an error if every record
/// is skipped. Any other per-record failure (too short for the PSD segment,
/// range outside the record's support) propagates.
pub fn identify_reference_frequency(
    records: &[TimeSeriesRecord],
    search_range: &FrequencyRange,
    psd: &PsdConfig,
) -> Result<ReferenceFrequency> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let mut per_record = Vec::with_capacity(records.len());
    let mut skipped = 0usize;
    for record in records {
        let spectrum = compute_power_spectrum(record, psd)?;
        match dominant_frequency(&spectrum, search_range) {
            Ok(f) => per_record.push(f),
            Err(Error::NoDominantComponent { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    if per_record.is_empty() {
        return Err(Error::AllRecordsSkipped {
            count: records.len(),
        });
    }
    let mean = per_record.iter().sum::<f64>() / per_record.len() as f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &f in &per_record {
        lo = lo.min(f);
        hi = hi.max(f);
    }
    Ok(ReferenceFrequency {
        mean_hz: mean,
        per_record_hz: per_record,
        spread_hz: hi - lo,
        skipped_records: skipped,
    })
}

/// Per-band counts of the dominant in-range frequency across `records`.
///
/// All records must share one sample rate; the result has `2^level`
/// entries.
pub fn band_occupancy_histogram(
    records: &[TimeSeriesRecord],
    level: u32,
    search_range: &FrequencyRange,
    psd: &PsdConfig,
) -> Result<Vec<usize>> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let fs = records[0].sample_rate();
    let mut counts = vec![0usize; 1 << level];
    let mut usable = 0usize;
    for record in records {
        if record.sample_rate() != fs {
            return Err(Error::MixedSampleRates {
                first: fs,
                other: record.sample_rate(),
            });
        }
        let plan = HwptPlan::new(level, record.len(), fs)?;
        let spectrum = compute_power_spectrum(record, psd)?;
        match dominant_frequency(&spectrum, search_range) {
            Ok(f) => {
                counts[plan.band_for_frequency(f)?] += 1;
                usable += 1;
            }
            Err(Error::NoDominantComponent { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    if usable == 0 {
        return Err(Error::AllRecordsSkipped {
            count: records.len(),
        });
    }
    Ok(counts)
}

/// Reconstructs the HWPT band `band_index` of `record` as the periodic FIV
/// signal, tagged with the band metadata in its channel label.
pub fn extract_fiv(
    record: &TimeSeriesRecord,
    level: u32,
    band_index: usize,
) -> Result<TimeSeriesRecord> {
    let decomposition = hwpt_decompose(record, level)?;
    let band = decomposition.reconstruct_band(band_index)?;
    let range = decomposition.plan().band_frequency_range(band_index)?;
    let label = format!(
        "{} [fiv band {} {:.1}-{:.1} Hz]",
        record.channel_label(),
        band_index,
        range.low_hz(),
        range.high_hz()
    );
    Ok(band.with_channel_label(label))
}

/// Windowed RMS history of the extracted FIV band across `records`.
///
/// Every record must carry a capture timestamp and share one sample rate.
/// Records are grouped into consecutive `window_seconds` windows by
/// timestamp; each window's value is the mean of its member-record RMS
/// values and empty windows are omitted.
pub fn rms_series(
    records: &[TimeSeriesRecord],
    level: u32,
    band_index: usize,
    window_seconds: f64,
) -> Result<RmsSeries> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    if !(window_seconds.is_finite() && window_seconds > 0.0) {
        return Err(Error::invalid(
            "window_seconds",
            format!("must be positive, got {window_seconds}"),
        ));
    }
    let fs = records[0].sample_rate();
    let mut windows: std::collections::BTreeMap<i64, (f64, usize)> =
        std::collections::BTreeMap::new();
    for (index, record) in records.iter().enumerate() {
        if record.sample_rate() != fs {
            return Err(Error::MixedSampleRates {
                first: fs,
                other: record.sample_rate(),
            });
        }
        let t = record
            .t_capture()
            .ok_or(Error::MissingTimestamp { index })?;
        let rms = extract_fiv(record, level, band_index)?.rms();
        let window = (t / window_seconds).floor() as i64;
        let entry = windows.entry(window).or_insert((0.0, 0));
        entry.0 += rms;
        entry.1 += 1;
    }

    let mut centers = Vec::with_capacity(windows.len());
    let mut values = Vec::with_capacity(windows.len());
    let mut counts = Vec::with_capacity(windows.len());
    for (window, (sum, count)) in windows {
        centers.push((window as f64 + 0.5) * window_seconds);
        values.push(sum / count as f64);
        counts.push(count);
    }
    Ok(RmsSeries {
        window_centers_s: centers,
        rms_values: values,
        window_seconds,
        records_per_window: counts,
    })
}
