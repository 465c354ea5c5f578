//! Deterministic synthetic data for end-to-end pipeline verification.
//!
//! No laboratory data ships with this crate, so the generators reproduce the
//! structure of a reciprocating running-in experiment: background machine
//! tones, one narrowband FIV component whose amplitude rises and then
//! saturates, white measurement noise, squeal captures clustered around the
//! tribo-system natural frequency, and a decaying friction-coefficient
//! trace. Every generated quantity carries its ground truth so the analysis
//! chain can be validated round-trip.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::record::TimeSeriesRecord;
use crate::wear::FrictionTrace;

/// Saturating amplitude envelope `A(t) = a_inf * (1 - exp(-t/tau))`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EnvelopeParams {
    /// Plateau amplitude.
    pub a_inf: f64,
    /// Rise time constant in minutes.
    pub tau_minutes: f64,
}

impl EnvelopeParams {
    /// Envelope amplitude at `t_s` seconds.
    pub fn amplitude_at(&self, t_s: f64) -> f64 {
        self.a_inf * (1.0 - (-(t_s / 60.0) / self.tau_minutes).exp())
    }
}

/// Exponential friction-coefficient model parameters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MuTrendParams {
    /// Value at t = 0.
    pub mu0: f64,
    /// Asymptote.
    pub mu_inf: f64,
    /// Decay time constant in minutes.
    pub tau_minutes: f64,
}

impl MuTrendParams {
    pub fn mu_at(&self, t_min: f64) -> f64 {
        self.mu_inf + (self.mu0 - self.mu_inf) * (-t_min / self.tau_minutes).exp()
    }
}

/// Full description of one synthetic running-in experiment.
///
/// Deserialisation fills omitted fields from [`RuninScenario::default`], so
/// scenario files only need the fields they change.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct RuninScenario {
    pub duration_minutes: f64,
    /// Seconds between successive captures.
    pub record_interval_s: f64,
    /// Samples per capture.
    pub record_samples: usize,
    /// Capture sample rate, Hz.
    pub sample_rate: f64,
    /// Background periodic components as (frequency Hz, amplitude) pairs.
    pub machine_tones: Vec<(f64, f64)>,
    /// Centre frequency of the FIV component, Hz.
    pub fiv_hz: f64,
    pub fiv_envelope: EnvelopeParams,
    /// RMS of the additive white Gaussian noise.
    pub noise_rms: f64,
    pub mu_trace: MuTrendParams,
    /// Standard deviation of the noise on the friction trace.
    pub mu_noise_sd: f64,
    /// Friction-trace cadence in minutes.
    pub mu_cadence_minutes: f64,
    pub rng_seed: u64,
}

impl Default for RuninScenario {
    /// The reference experiment: 60 minutes of 10240-sample captures every
    /// 6 s at 25641.03 Hz, machine tones at 319 and 853 Hz, FIV at 2385 Hz
    /// saturating within the running-in stage, friction coefficient falling
    /// from 0.129 to 0.103.
    fn default() -> Self {
        Self {
            duration_minutes: 60.0,
            record_interval_s: 6.0,
            record_samples: 10240,
            sample_rate: 25641.03,
            machine_tones: vec![(319.0, 0.8), (853.0, 0.6)],
            fiv_hz: 2385.0,
            fiv_envelope: EnvelopeParams {
                a_inf: 1.0,
                tau_minutes: 5.0,
            },
            noise_rms: 1.0,
            mu_trace: MuTrendParams {
                mu0: 0.129,
                mu_inf: 0.103,
                tau_minutes: 40.0,
            },
            mu_noise_sd: 3e-4,
            mu_cadence_minutes: 0.1,
            rng_seed: 7,
        }
    }
}

impl RuninScenario {
    fn validate(&self) -> Result<()> {
        if !(self.duration_minutes.is_finite() && self.duration_minutes > 0.0) {
            return Err(Error::invalid("duration_minutes", "must be positive"));
        }
        if !(self.record_interval_s.is_finite() && self.record_interval_s > 0.0) {
            return Err(Error::invalid("record_interval_s", "must be positive"));
        }
        if self.record_samples == 0 {
            return Err(Error::invalid("record_samples", "must be non-zero"));
        }
        if !(self.sample_rate.is_finite() && self.sample_rate > 0.0) {
            return Err(Error::InvalidSampleRate(self.sample_rate));
        }
        let nyquist = self.sample_rate / 2.0;
        if !(self.fiv_hz > 0.0 && self.fiv_hz < nyquist) {
            return Err(Error::FrequencyAboveNyquist {
                target_hz: self.fiv_hz,
                nyquist_hz: nyquist,
            });
        }
        for &(f, a) in &self.machine_tones {
            if !(f > 0.0 && f < nyquist) {
                return Err(Error::FrequencyAboveNyquist {
                    target_hz: f,
                    nyquist_hz: nyquist,
                });
            }
            if !(a.is_finite() && a >= 0.0) {
                return Err(Error::invalid("machine_tones", "amplitudes must be >= 0"));
            }
        }
        if !(self.fiv_envelope.a_inf >= 0.0 && self.fiv_envelope.tau_minutes > 0.0) {
            return Err(Error::invalid(
                "fiv_envelope",
                "needs a_inf >= 0 and tau > 0",
            ));
        }
        if !(self.noise_rms.is_finite() && self.noise_rms >= 0.0) {
            return Err(Error::invalid("noise_rms", "must be >= 0"));
        }
        if !(self.mu_trace.mu0 > 0.0
            && self.mu_trace.mu0 < 2.0
            && self.mu_trace.mu_inf > 0.0
            && self.mu_trace.mu_inf < 2.0
            && self.mu_trace.tau_minutes > 0.0)
        {
            return Err(Error::invalid("mu_trace", "coefficients must lie in (0, 2)"));
        }
        if !(self.mu_noise_sd.is_finite() && self.mu_noise_sd >= 0.0) {
            return Err(Error::invalid("mu_noise_sd", "must be >= 0"));
        }
        if !(self.mu_cadence_minutes.is_finite() && self.mu_cadence_minutes > 0.0) {
            return Err(Error::invalid("mu_cadence_minutes", "must be positive"));
        }
        Ok(())
    }

    /// Number of captures the scenario produces.
    pub fn record_count(&self) -> usize {
        (self.duration_minutes * 60.0 / self.record_interval_s).floor() as usize
    }
}

/// Ground-truth FIV amplitude at one capture time.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EnvelopePoint {
    pub t_s: f64,
    pub amplitude: f64,
}

/// Generated records together with their ground truth.
#[derive(Debug, Clone)]
pub struct GeneratedRunin {
    pub records: Vec<TimeSeriesRecord>,
    /// FIV envelope amplitude at each capture, in record order.
    pub envelope: Vec<EnvelopePoint>,
}

/// Splitmix-style hash for deriving independent per-record streams.
fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Synthesises the lubricated running-in captures of `scenario`.
///
/// Each record is the sum of the machine tones, the FIV tone at the
/// envelope amplitude of its capture time, and white Gaussian noise. Tone
/// phases and noise derive from a per-record stream of the scenario seed,
/// so records are reproducible independently of generation order.
pub fn generate_runin_records(scenario: &RuninScenario) -> Result<GeneratedRunin> {
    scenario.validate()?;
    let count = scenario.record_count();
    if count == 0 {
        return Err(Error::invalid(
            "duration_minutes",
            "too short for a single record",
        ));
    }
    let mut records = Vec::with_capacity(count);
    let mut envelope = Vec::with_capacity(count);
    for index in 0..count {
        let t_capture = index as f64 * scenario.record_interval_s;
        let amplitude = scenario.fiv_envelope.amplitude_at(t_capture);
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(scenario.rng_seed, index as u64));

        let mut tones: Vec<(f64, f64, f64)> = scenario
            .machine_tones
            .iter()
            .map(|&(f, a)| (f, a, rng.random_range(0.0..std::f64::consts::TAU)))
            .collect();
        tones.push((
            scenario.fiv_hz,
            amplitude,
            rng.random_range(0.0..std::f64::consts::TAU),
        ));

        let noise = Normal::new(0.0, scenario.noise_rms)
            .map_err(|e| Error::invalid("noise_rms", e.to_string()))?;
        let samples: Vec<f64> = (0..scenario.record_samples)
            .map(|i| {
                let t = i as f64 / scenario.sample_rate;
                let deterministic: f64 = tones
                    .iter()
                    .map(|&(f, a, phase)| a * (std::f64::consts::TAU * f * t + phase).sin())
                    .sum();
                let noise_sample = if scenario.noise_rms > 0.0 {
                    noise.sample(&mut rng)
                } else {
                    0.0
                };
                deterministic + noise_sample
            })
            .collect();

        records.push(
            TimeSeriesRecord::new(samples, scenario.sample_rate)?
                .with_t_capture(t_capture)
                .with_channel_label("z"),
        );
        envelope.push(EnvelopePoint {
            t_s: t_capture,
            amplitude,
        });
    }
    Ok(GeneratedRunin { records, envelope })
}

/// One tone-dominated squeal record per entry of `freqs_hz`.
///
/// Tone amplitude is 1; `snr_db` sets the white-noise power relative to the
/// tone power (`f64::INFINITY` for noise-free records).
pub fn generate_squeal_records(
    freqs_hz: &[f64],
    sample_rate: f64,
    record_samples: usize,
    snr_db: f64,
    seed: u64,
) -> Result<Vec<TimeSeriesRecord>> {
    if freqs_hz.is_empty() {
        return Err(Error::NoRecords);
    }
    if !(sample_rate.is_finite() && sample_rate > 0.0) {
        return Err(Error::InvalidSampleRate(sample_rate));
    }
    if record_samples == 0 {
        return Err(Error::invalid("record_samples", "must be non-zero"));
    }
    let nyquist = sample_rate / 2.0;
    for &f in freqs_hz {
        if !(f > 0.0 && f < nyquist) {
            return Err(Error::FrequencyAboveNyquist {
                target_hz: f,
                nyquist_hz: nyquist,
            });
        }
    }
    let noise_rms = if snr_db.is_finite() {
        (0.5_f64).sqrt() * 10f64.powf(-snr_db / 20.0)
    } else {
        0.0
    };

    freqs_hz
        .iter()
        .enumerate()
        .map(|(index, &f)| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, index as u64));
            let phase = rng.random_range(0.0..std::f64::consts::TAU);
            let noise = Normal::new(0.0, noise_rms)
                .map_err(|e| Error::invalid("snr_db", e.to_string()))?;
            let samples: Vec<f64> = (0..record_samples)
                .map(|i| {
                    let t = i as f64 / sample_rate;
                    let tone = (std::f64::consts::TAU * f * t + phase).sin();
                    if noise_rms > 0.0 {
                        tone + noise.sample(&mut rng)
                    } else {
                        tone
                    }
                })
                .collect();
            Ok(TimeSeriesRecord::new(samples, sample_rate)?.with_channel_label("squeal"))
        })
        .collect()
}

/// Sampled exponential friction-coefficient trace with Gaussian noise.
pub fn generate_friction_trace(
    params: &MuTrendParams,
    duration_minutes: f64,
    cadence_minutes: f64,
    noise_sd: f64,
    seed: u64,
) -> Result<FrictionTrace> {
    if !(duration_minutes.is_finite() && duration_minutes > 0.0) {
        return Err(Error::invalid("duration_minutes", "must be positive"));
    }
    if !(cadence_minutes.is_finite() && cadence_minutes > 0.0) {
        return Err(Error::invalid("cadence_minutes", "must be positive"));
    }
    if !(noise_sd.is_finite() && noise_sd >= 0.0) {
        return Err(Error::invalid("noise_sd", "must be >= 0"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise =
        Normal::new(0.0, noise_sd).map_err(|e| Error::invalid("noise_sd", e.to_string()))?;
    let n = (duration_minutes / cadence_minutes).floor() as usize + 1;
    let times: Vec<f64> = (0..n).map(|i| i as f64 * cadence_minutes).collect();
    let mu: Vec<f64> = times
        .iter()
        .map(|&t| {
            let clean = params.mu_at(t);
            if noise_sd > 0.0 {
                clean + noise.sample(&mut rng)
            } else {
                clean
            }
        })
        .collect();
    FrictionTrace::new(times, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiv;
    use crate::record::FrequencyRange;
    use crate::spectral::PsdConfig;
    use crate::wear;

    #[test]
    fn default_scenario_produces_paper_cadence() {
        let scenario = RuninScenario::default();
        assert_eq!(scenario.record_count(), 600);
        let generated = generate_runin_records(&scenario).unwrap();
        assert_eq!(generated.records.len(), 600);
        assert_eq!(generated.records[0].t_capture(), Some(0.0));
        assert_eq!(generated.records[599].t_capture(), Some(3594.0));
        assert_eq!(generated.envelope.len(), 600);
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let scenario = RuninScenario {
            duration_minutes: 1.0,
            ..RuninScenario::default()
        };
        let a = generate_runin_records(&scenario).unwrap();
        let b = generate_runin_records(&scenario).unwrap();
        for (ra, rb) in a.records.iter().zip(&b.records) {
            assert_eq!(ra.samples(), rb.samples());
        }

        let different_seed = RuninScenario {
            rng_seed: 8,
            ..scenario
        };
        let c = generate_runin_records(&different_seed).unwrap();
        assert_ne!(a.records[0].samples(), c.records[0].samples());
    }

    #[test]
    fn clean_constant_envelope_gives_tone_rms() {
        // No machine tones, no noise, a tiny envelope tau so every capture
        // after t = 0 sits on the plateau, and an exact-bin tone frequency
        // so each record holds an integer number of periods.
        let scenario = RuninScenario {
            duration_minutes: 2.0,
            machine_tones: vec![],
            noise_rms: 0.0,
            fiv_hz: 952.0 * 25641.03 / 10240.0,
            fiv_envelope: EnvelopeParams {
                a_inf: 2.0,
                tau_minutes: 1e-6,
            },
            ..RuninScenario::default()
        };
        let generated = generate_runin_records(&scenario).unwrap();
        // The t = 0 capture predates the envelope rise; every later one sits
        // on the plateau.
        for record in generated.records.iter().skip(1) {
            let expected = 2.0 / 2.0_f64.sqrt();
            assert!(
                (record.rms() - expected).abs() / expected < 1e-6,
                "rms {}",
                record.rms()
            );
        }
    }

    #[test]
    fn invalid_scenarios_are_rejected() {
        let base = RuninScenario::default();
        assert!(generate_runin_records(&RuninScenario {
            duration_minutes: 0.0,
            ..base.clone()
        })
        .is_err());
        assert!(generate_runin_records(&RuninScenario {
            fiv_hz: 20000.0,
            ..base.clone()
        })
        .is_err());
        assert!(generate_runin_records(&RuninScenario {
            machine_tones: vec![(319.0, -1.0)],
            ..base.clone()
        })
        .is_err());
        assert!(generate_runin_records(&RuninScenario {
            noise_rms: -0.1,
            ..base
        })
        .is_err());
    }

    #[test]
    fn extracted_band_tracks_envelope_ground_truth() {
        // Noise-free scenario: the band-23 RMS series must match the
        // per-window mean envelope over sqrt(2) within 3%.
        let scenario = RuninScenario {
            noise_rms: 0.0,
            ..RuninScenario::default()
        };
        let generated = generate_runin_records(&scenario).unwrap();
        let series = fiv::rms_series(&generated.records, 7, 23, 60.0).unwrap();
        assert_eq!(series.len(), 60);
        assert_eq!(series.records_per_window, vec![10; 60]);

        // Ground-truth per-window mean amplitude.
        let mut window_truth = vec![(0.0, 0usize); 60];
        for point in &generated.envelope {
            let w = (point.t_s / 60.0).floor() as usize;
            window_truth[w].0 += point.amplitude;
            window_truth[w].1 += 1;
        }
        let scale = 1.0 / 2.0_f64.sqrt();
        for (i, ((sum, n), &rms)) in window_truth.iter().zip(&series.rms_values).enumerate() {
            let expected = sum / *n as f64 * scale;
            if expected > 0.05 * scenario.fiv_envelope.a_inf * scale {
                let rel = (rms - expected).abs() / expected;
                assert!(rel < 0.03, "window {i}: rms {rms} vs envelope {expected}");
            }
        }
    }

    #[test]
    fn squeal_records_recover_reference_frequency() {
        let freqs = [2325.0, 2412.0, 2381.0, 2384.0, 2425.0];
        let records = generate_squeal_records(&freqs, 25641.03, 10240, 40.0, 1).unwrap();
        assert_eq!(records.len(), 5);
        let range = FrequencyRange::new(1000.0, 5000.0).unwrap();
        let reference =
            fiv::identify_reference_frequency(&records, &range, &PsdConfig::default()).unwrap();
        let bin = 25641.03 / 2048.0;
        assert!(
            (reference.mean_hz - 2385.4).abs() <= bin,
            "mean {}",
            reference.mean_hz
        );
    }

    #[test]
    fn single_noise_free_squeal_is_exact() {
        let records = generate_squeal_records(&[2385.0], 25641.03, 10240, f64::INFINITY, 1).unwrap();
        let range = FrequencyRange::new(1000.0, 5000.0).unwrap();
        let reference =
            fiv::identify_reference_frequency(&records, &range, &PsdConfig::default()).unwrap();
        assert!((reference.mean_hz - 2385.0).abs() <= 25641.03 / 2048.0);
        assert_eq!(reference.spread_hz, 0.0);
    }

    #[test]
    fn noisy_squeal_dominants_stay_within_one_bin() {
        // Monte-Carlo: 100 seeds at 10 dB SNR.
        let range = FrequencyRange::new(1000.0, 5000.0).unwrap();
        let bin = 25641.03 / 2048.0;
        for seed in 0..100 {
            let records = generate_squeal_records(&[2385.0], 25641.03, 10240, 10.0, seed).unwrap();
            let reference =
                fiv::identify_reference_frequency(&records, &range, &PsdConfig::default())
                    .unwrap();
            assert!(
                (reference.mean_hz - 2385.0).abs() <= bin,
                "seed {seed}: {}",
                reference.mean_hz
            );
        }
    }

    #[test]
    fn squeal_rejects_nyquist_violation_and_empty() {
        assert!(generate_squeal_records(&[13000.0], 25641.03, 1024, 30.0, 0).is_err());
        assert!(matches!(
            generate_squeal_records(&[], 25641.03, 1024, 30.0, 0),
            Err(Error::NoRecords)
        ));
    }

    #[test]
    fn noiseless_friction_trace_equals_model() {
        let params = MuTrendParams {
            mu0: 0.129,
            mu_inf: 0.103,
            tau_minutes: 12.0,
        };
        let trace = generate_friction_trace(&params, 60.0, 0.5, 0.0, 0).unwrap();
        assert_eq!(trace.mu_values()[0], 0.129);
        for (&t, &mu) in trace.times_min().iter().zip(trace.mu_values()) {
            assert_eq!(mu, params.mu_at(t));
        }
    }

    #[test]
    fn friction_trace_round_trips_through_fit() {
        let params = MuTrendParams {
            mu0: 0.129,
            mu_inf: 0.103,
            tau_minutes: 12.0,
        };
        let trace = generate_friction_trace(&params, 60.0, 0.5, 0.0, 0).unwrap();
        let fit = wear::fit_friction_trend(&trace).unwrap();
        assert!(((fit.mu0 - params.mu0) / params.mu0).abs() < 0.01);
        assert!(((fit.mu_inf - params.mu_inf) / params.mu_inf).abs() < 0.01);
    }

    #[test]
    fn noisy_fit_recovers_mu_inf_within_tolerance() {
        // Monte-Carlo oracle: 100 seeds with 2% multiplicative noise
        // (approximated as additive with sd = 0.02 * mu_inf).
        let params = MuTrendParams {
            mu0: 0.129,
            mu_inf: 0.103,
            tau_minutes: 12.0,
        };
        for seed in 0..100 {
            let trace =
                generate_friction_trace(&params, 60.0, 0.5, 0.02 * params.mu_inf, seed).unwrap();
            let fit = wear::fit_friction_trend(&trace).unwrap();
            assert!(
                (fit.mu_inf - params.mu_inf).abs() <= 0.002,
                "seed {seed}: mu_inf {}",
                fit.mu_inf
            );
        }
    }
}
