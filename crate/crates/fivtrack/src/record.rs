//! Time-series containers and frequency intervals.
//!
//! A [`TimeSeriesRecord`] is one uniformly sampled acceleration capture.
//! Records are validated on construction and immutable afterwards, so every
//! downstream operation can assume a positive sample rate and finite,
//! non-empty samples.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Unit of the acceleration samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum AccelUnit {
    /// Metres per second squared.
    #[default]
    #[serde(rename = "m/s^2")]
    MetersPerSecondSquared,
    /// Standard gravities.
    #[serde(rename = "g")]
    G,
}

impl fmt::Display for AccelUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AccelUnit::MetersPerSecondSquared => write!(f, "m/s^2"),
            AccelUnit::G => write!(f, "g"),
        }
    }
}

impl FromStr for AccelUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "m/s^2" | "m/s2" | "mps2" => Ok(AccelUnit::MetersPerSecondSquared),
            "g" | "G" => Ok(AccelUnit::G),
            other => Err(Error::invalid("unit", format!("unknown unit `{other}`"))),
        }
    }
}

/// One uniformly sampled acceleration record.
///
/// Invariants enforced at construction: non-empty samples, all finite, and a
/// positive finite sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesRecord {
    samples: Vec<f64>,
    sample_rate: f64,
    t_capture: Option<f64>,
    channel_label: String,
    unit: AccelUnit,
}

impl TimeSeriesRecord {
    /// Validates and wraps a sample buffer.
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::InvalidSampleRate(sample_rate));
        }
        if samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        if let Some(index) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(Self {
            samples,
            sample_rate,
            t_capture: None,
            channel_label: String::from("ch0"),
            unit: AccelUnit::default(),
        })
    }

    /// Sets the capture time in seconds since the start of the experiment.
    pub fn with_t_capture(mut self, t_capture_s: f64) -> Self {
        self.t_capture = Some(t_capture_s);
        self
    }

    pub fn with_channel_label(mut self, label: impl Into<String>) -> Self {
        self.channel_label = label.into();
        self
    }

    pub fn with_unit(mut self, unit: AccelUnit) -> Self {
        self.unit = unit;
        self
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false: empty records cannot be constructed.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    /// Nyquist frequency, `sample_rate / 2`.
    pub fn nyquist(&self) -> f64 {
        self.sample_rate / 2.0
    }

    /// Capture time in seconds since experiment start, if stamped.
    pub fn t_capture(&self) -> Option<f64> {
        self.t_capture
    }

    pub fn channel_label(&self) -> &str {
        &self.channel_label
    }

    pub fn unit(&self) -> AccelUnit {
        self.unit
    }

    /// Record duration in seconds.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    /// Root mean square of the samples: `sqrt(mean(x^2))`.
    ///
    /// Infallible because records are non-empty by construction.
    pub fn rms(&self) -> f64 {
        mean_square(&self.samples).sqrt()
    }
}

/// Mean of squared values. Returns 0.0 for an empty slice.
pub(crate) fn mean_square(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().map(|s| s * s).sum::<f64>() / samples.len() as f64
}

/// Half-open frequency interval `[low, high)` in Hz.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FrequencyRange {
    low_hz: f64,
    high_hz: f64,
}

impl FrequencyRange {
    pub fn new(low_hz: f64, high_hz: f64) -> Result<Self> {
        if !(low_hz.is_finite() && high_hz.is_finite()) || low_hz < 0.0 || high_hz <= low_hz {
            return Err(Error::EmptyFrequencyRange {
                low: low_hz,
                high: high_hz,
            });
        }
        Ok(Self { low_hz, high_hz })
    }

    pub fn low_hz(&self) -> f64 {
        self.low_hz
    }

    pub fn high_hz(&self) -> f64 {
        self.high_hz
    }

    pub fn width_hz(&self) -> f64 {
        self.high_hz - self.low_hz
    }

    /// Membership test on the half-open interval.
    pub fn contains(&self, frequency_hz: f64) -> bool {
        frequency_hz >= self.low_hz && frequency_hz < self.high_hz
    }
}

impl fmt::Display for FrequencyRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.4}, {:.4}) Hz", self.low_hz, self.high_hz)
    }
}
