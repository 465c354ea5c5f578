//! Power spectral density estimation and peak identification.
//!
//! The estimator is Welch's method: the record is split into overlapping
//! Hann-windowed segments, the periodograms are averaged, and the result is
//! scaled as a one-sided density so that `sum(power) * resolution_hz`
//! reproduces the mean square of the windowed signal. DC and Nyquist bins
//! carry no one-sided doubling.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::record::{FrequencyRange, TimeSeriesRecord};

/// Segmenting parameters for the Welch estimator.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PsdConfig {
    /// Samples per segment.
    pub segment_length: usize,
    /// Fraction of a segment shared with its successor, in `[0, 1)`.
    pub overlap_fraction: f64,
}

impl Default for PsdConfig {
    fn default() -> Self {
        Self {
            segment_length: 2048,
            overlap_fraction: 0.5,
        }
    }
}

/// One-sided power spectral density estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectrum {
    frequencies: Vec<f64>,
    power: Vec<f64>,
    resolution_hz: f64,
    estimator_tag: String,
}

impl PowerSpectrum {
    /// Frequency axis in Hz, ascending from 0.
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// Density values, one per frequency bin.
    pub fn power(&self) -> &[f64] {
        &self.power
    }

    /// Bin width in Hz.
    pub fn resolution_hz(&self) -> f64 {
        self.resolution_hz
    }

    pub fn estimator_tag(&self) -> &str {
        &self.estimator_tag
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// `sum(power) * resolution_hz`, the total mean-square estimate.
    pub fn integrated_power(&self) -> f64 {
        self.power.iter().sum::<f64>() * self.resolution_hz
    }

    /// Indices of the bins whose centre lies inside `range`.
    fn bin_range(&self, range: &FrequencyRange) -> Result<std::ops::Range<usize>> {
        let lo = self
            .frequencies
            .iter()
            .position(|&f| f >= range.low_hz())
            .ok_or(Error::EmptyFrequencyRange {
                low: range.low_hz(),
                high: range.high_hz(),
            })?;
        let hi = self.frequencies[lo..]
            .iter()
            .position(|&f| f >= range.high_hz())
            .map(|off| lo + off)
            .unwrap_or(self.frequencies.len());
        if lo >= hi {
            return Err(Error::EmptyFrequencyRange {
                low: range.low_hz(),
                high: range.high_hz(),
            });
        }
        Ok(lo..hi)
    }
}

/// A local maximum of the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SpectralPeak {
    /// Bin centre frequency in Hz.
    pub frequency_hz: f64,
    /// Density value at the peak.
    pub power: f64,
    /// Topographic prominence within the searched range.
    pub prominence: f64,
}

/// Welch-averaged one-sided PSD of `record`.
///
/// `segment_length` must not exceed the record length and
/// `overlap_fraction` must lie in `[0, 1)`.
pub fn compute_power_spectrum(
    record: &TimeSeriesRecord,
    config: &PsdConfig,
) -> Result<PowerSpectrum> {
    let nperseg = config.segment_length;
    let overlap = config.overlap_fraction;
    if nperseg < 2 {
        return Err(Error::invalid(
            "segment_length",
            format!("must be at least 2, got {nperseg}"),
        ));
    }
    if !(0.0..1.0).contains(&overlap) {
        return Err(Error::invalid(
            "overlap_fraction",
            format!("must lie in [0, 1), got {overlap}"),
        ));
    }
    let samples = record.samples();
    if samples.len() < nperseg {
        return Err(Error::InsufficientSamples {
            have: samples.len(),
            need: nperseg,
        });
    }

    let noverlap = (nperseg as f64 * overlap).floor() as usize;
    let step = (nperseg - noverlap).max(1);
    let n_segments = (samples.len() - nperseg) / step + 1;

    let window = hann_window(nperseg);
    let window_power: f64 = window.iter().map(|w| w * w).sum();

    let fs = record.sample_rate();
    let n_bins = nperseg / 2 + 1;
    let mut accum = vec![0.0_f64; n_bins];

    let forward = fft::forward(nperseg);
    let mut buf = vec![Complex64::new(0.0, 0.0); nperseg];

    for seg in 0..n_segments {
        let offset = seg * step;
        for (slot, (&s, &w)) in buf
            .iter_mut()
            .zip(samples[offset..offset + nperseg].iter().zip(window.iter()))
        {
            *slot = Complex64::new(s * w, 0.0);
        }
        forward.process(&mut buf);
        for (bin, acc) in accum.iter_mut().enumerate() {
            *acc += buf[bin].norm_sqr();
        }
    }

    // Density scaling: integrating the one-sided PSD over frequency yields
    // the mean square of the windowed signal.
    let scale = 1.0 / (fs * window_power * n_segments as f64);
    let nyquist_bin = if nperseg.is_multiple_of(2) {
        Some(n_bins - 1)
    } else {
        None
    };
    let power: Vec<f64> = accum
        .iter()
        .enumerate()
        .map(|(bin, &p)| {
            let one_sided = if bin == 0 || Some(bin) == nyquist_bin {
                1.0
            } else {
                2.0
            };
            p * scale * one_sided
        })
        .collect();

    let resolution_hz = fs / nperseg as f64;
    let frequencies: Vec<f64> = (0..n_bins).map(|k| k as f64 * resolution_hz).collect();

    Ok(PowerSpectrum {
        frequencies,
        power,
        resolution_hz,
        estimator_tag: format!("welch:hann:seg={nperseg}:overlap={overlap:.2}"),
    })
}

/// Frequency of the strongest bin inside `range`; ties resolve to the lower
/// frequency. Errors if every bin in range holds zero power.
pub fn dominant_frequency(spectrum: &PowerSpectrum, range: &FrequencyRange) -> Result<f64> {
    let bins = spectrum.bin_range(range)?;
    let power = spectrum.power();
    let mut best = bins.start;
    for bin in bins.clone() {
        if power[bin] > power[best] {
            best = bin;
        }
    }
    if power[best] <= 0.0 {
        return Err(Error::NoDominantComponent {
            low: range.low_hz(),
            high: range.high_hz(),
        });
    }
    Ok(spectrum.frequencies()[best])
}

/// Local maxima inside `range` whose prominence reaches
/// `min_prominence_ratio` times the strongest in-range power, sorted by
/// descending power.
pub fn detect_peaks(
    spectrum: &PowerSpectrum,
    min_prominence_ratio: f64,
    range: &FrequencyRange,
) -> Result<Vec<SpectralPeak>> {
    if !(min_prominence_ratio > 0.0 && min_prominence_ratio <= 1.0) {
        return Err(Error::invalid(
            "min_prominence_ratio",
            format!("must lie in (0, 1], got {min_prominence_ratio}"),
        ));
    }
    let bins = spectrum.bin_range(range)?;
    let power = &spectrum.power()[bins.clone()];
    let freqs = &spectrum.frequencies()[bins.clone()];

    let global_max = power.iter().cloned().fold(0.0_f64, f64::max);
    if global_max <= 0.0 {
        return Ok(Vec::new());
    }
    let threshold = min_prominence_ratio * global_max;

    let mut peaks = Vec::new();
    let n = power.len();
    let mut i = 1;
    while i + 1 < n {
        if power[i] <= power[i - 1] {
            i += 1;
            continue;
        }
        // Plateau: advance to its end; the first index represents the peak.
        let start = i;
        let mut end = i;
        while end + 1 < n && power[end + 1] == power[start] {
            end += 1;
        }
        if end + 1 < n && power[end + 1] < power[start] {
            let prominence = peak_prominence(power, start);
            if prominence >= threshold {
                peaks.push(SpectralPeak {
                    frequency_hz: freqs[start],
                    power: power[start],
                    prominence,
                });
            }
        }
        i = end + 1;
    }

    peaks.sort_by(|a, b| {
        b.power
            .partial_cmp(&a.power)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(
                a.frequency_hz
                    .partial_cmp(&b.frequency_hz)
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
    });
    Ok(peaks)
}

/// Topographic prominence of the peak at `index`, evaluated within the slice.
///
/// Walk outwards until a strictly higher value (or the slice edge); the base
/// on each side is the minimum along that walk; prominence is the peak height
/// above the higher of the two bases.
fn peak_prominence(power: &[f64], index: usize) -> f64 {
    let height = power[index];

    let mut left_base = height;
    for &p in power[..index].iter().rev() {
        if p > height {
            break;
        }
        left_base = left_base.min(p);
    }

    let mut right_base = height;
    for &p in power[index + 1..].iter() {
        if p > height {
            break;
        }
        right_base = right_base.min(p);
    }

    height - left_base.max(right_base)
}

/// Periodic Hann window of length `n`.
fn hann_window(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 * (1.0 - (2.0 * PI * i as f64 / n as f64).cos()))
        .collect()
}
