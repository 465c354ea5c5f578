//! Narrowband friction-induced vibration (FIV) monitoring for running-in
//! experiments.
//!
//! A sliding contact rings its tribo-system at a nearly fixed natural
//! frequency. Under lubrication that component is buried in broadband
//! noise, but it can be recovered: squeal captures from a dry run pin down
//! the frequency, a harmonic wavelet packet transform isolates the matching
//! frequency band of each lubricated capture, and the RMS history of the
//! reconstructed band tracks the wear stage of the pair. A companion
//! calculator covers the contact mechanics side: composite roughness,
//! Hamrock-Dowson film thickness and the lubrication regime.
//!
//! The pipeline in five steps:
//!
//! 1. [`identify_reference_frequency`] — dominant spectral peak of squeal
//!    records.
//! 2. [`HwptPlan::band_for_frequency`] — the band containing it.
//! 3. [`extract_fiv`] — per-record band reconstruction.
//! 4. [`rms_series`] — windowed RMS aggregation.
//! 5. [`segment_stages`] + [`classify_rms_trend`] — wear stages and their
//!    RMS trend labels.
//!
//! ```
//! use fivtrack::{
//!     generate_squeal_records, identify_reference_frequency, FrequencyRange, HwptPlan,
//!     PsdConfig,
//! };
//!
//! // Five squeal captures clustered around the natural frequency.
//! let records = generate_squeal_records(
//!     &[2325.0, 2412.0, 2381.0, 2384.0, 2425.0],
//!     25641.03,
//!     10240,
//!     f64::INFINITY,
//!     1,
//! )?;
//! let range = FrequencyRange::new(1000.0, 5000.0)?;
//! let reference = identify_reference_frequency(&records, &range, &PsdConfig::default())?;
//! assert!((reference.mean_hz - 2385.4).abs() < 13.0);
//!
//! // A 7-level decomposition puts that frequency in band 23.
//! let plan = HwptPlan::new(7, 10240, 25641.03)?;
//! assert_eq!(plan.band_for_frequency(reference.mean_hz)?, 23);
//! # Ok::<(), fivtrack::Error>(())
//! ```

mod fft;

pub mod error;
pub mod fiv;
pub mod hwpt;
pub mod lubrication;
pub mod record;
pub mod spectral;
pub mod synth;
pub mod wear;

pub use error::{Error, Result};
pub use fiv::{
    band_occupancy_histogram, extract_fiv, identify_reference_frequency, rms_series,
    ReferenceFrequency, RmsSeries,
};
pub use hwpt::{hwpt_decompose, BandDecomposition, HwptPlan};
pub use lubrication::{
    classify_regime, composite_modulus, composite_radius, composite_roughness,
    film_thickness_ratio, hamrock_dowson_hmin, hertz_max_pressure, lubrication_report,
    reciprocating_velocities, ContactSpec, HertzContact, LubricationReport,
    ReciprocatingVelocities, Regime, SurfacePair,
};
pub use record::{AccelUnit, FrequencyRange, TimeSeriesRecord};
pub use spectral::{
    compute_power_spectrum, detect_peaks, dominant_frequency, PowerSpectrum, PsdConfig,
    SpectralPeak,
};
pub use synth::{
    generate_friction_trace, generate_runin_records, generate_squeal_records, EnvelopeParams,
    EnvelopePoint, GeneratedRunin, MuTrendParams, RuninScenario,
};
pub use wear::{
    classify_rms_trend, fit_friction_trend, segment_stages, FrictionTrace, RmsTrendReport, Stage,
    StageLabel, StageSegmentation, StageTrend, TrendFit, TrendLabel, DEFAULT_SLOPE_THRESHOLD,
    DEFAULT_TREND_Z,
};
