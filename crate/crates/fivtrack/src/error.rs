//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by signal validation, spectral estimation, band
/// decomposition and the tribology calculators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("sample rate must be a positive finite value, got {0}")]
    InvalidSampleRate(f64),

    #[error("signal contains no samples")]
    EmptySignal,

    #[error("non-finite sample at index {index}")]
    NonFiniteSample { index: usize },

    #[error("insufficient samples: have {have}, need at least {need}")]
    InsufficientSamples { have: usize, need: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("frequency range [{low} Hz, {high} Hz) is empty or outside the spectrum support")]
    EmptyFrequencyRange { low: f64, high: f64 },

    #[error("no dominant component in [{low} Hz, {high} Hz)")]
    NoDominantComponent { low: f64, high: f64 },

    #[error("band index {index} out of range for {bands} bands")]
    BandIndexOutOfRange { index: usize, bands: usize },

    #[error("target frequency {target_hz} Hz is at or above the Nyquist frequency {nyquist_hz} Hz")]
    FrequencyAboveNyquist { target_hz: f64, nyquist_hz: f64 },

    #[error("level {level} too large for {n_samples} samples: band would be narrower than one bin")]
    BandNarrowerThanBin { level: u32, n_samples: usize },

    #[error("records have mixed sample rates ({first} Hz vs {other} Hz)")]
    MixedSampleRates { first: f64, other: f64 },

    #[error("no records provided")]
    NoRecords,

    #[error("record {index} has no capture timestamp")]
    MissingTimestamp { index: usize },

    #[error("all {count} records were skipped: no dominant component in the search range")]
    AllRecordsSkipped { count: usize },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
