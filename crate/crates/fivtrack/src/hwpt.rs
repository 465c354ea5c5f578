//! Harmonic wavelet packet transform.
//!
//! The transform partitions the positive-frequency half of a signal's DFT
//! into `2^L` contiguous bands of equal width `fs / 2^(L+1)`. Each band can
//! be reconstructed exactly by zeroing every other bin (together with its
//! conjugate mirror) and inverting the full-length DFT, so the band
//! reconstructions sum back to the input sample-for-sample and the band
//! energies partition the signal mean square.
//!
//! Signals whose length is not divisible by `2^(L+1)` are zero-padded up to
//! the next multiple; the padding is stripped again on reconstruction.
//!
//! Bin bookkeeping: the DC bin belongs to band 0 and the Nyquist bin of the
//! padded length belongs to the last band, giving a total tiling of the
//! spectrum.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::record::{FrequencyRange, TimeSeriesRecord};

/// Geometry of a harmonic wavelet packet decomposition.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct HwptPlan {
    level: u32,
    n_samples: usize,
    n_padded: usize,
    sample_rate: f64,
}

impl HwptPlan {
    /// Plans an `level`-level decomposition of `n_samples` samples at
    /// `sample_rate` Hz.
    ///
    /// Requires `level >= 1` and `2^(level+1) <= n_samples`; beyond that the
    /// bands would be narrower than one DFT bin.
    pub fn new(level: u32, n_samples: usize, sample_rate: f64) -> Result<Self> {
        if level < 1 {
            return Err(Error::invalid("level", "must be at least 1"));
        }
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::InvalidSampleRate(sample_rate));
        }
        let group = 1usize
            .checked_shl(level + 1)
            .filter(|&g| g <= n_samples)
            .ok_or(Error::BandNarrowerThanBin { level, n_samples })?;
        let n_padded = n_samples.div_ceil(group) * group;
        Ok(Self {
            level,
            n_samples,
            n_padded,
            sample_rate,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Length of the analysed record, before padding.
    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    /// Length after zero-padding to a multiple of `2^(level+1)`.
    pub fn n_padded(&self) -> usize {
        self.n_padded
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    /// Number of bands, `2^level`.
    pub fn n_bands(&self) -> usize {
        1 << self.level
    }

    /// Width of each band in Hz, `sample_rate / 2^(level+1)`.
    pub fn band_width_hz(&self) -> f64 {
        self.sample_rate / (1u64 << (self.level + 1)) as f64
    }

    /// DFT bins per band, `n_padded / 2^(level+1)`.
    pub fn bins_per_band(&self) -> usize {
        self.n_padded >> (self.level + 1)
    }

    /// Half-open frequency interval covered by `band_index`.
    pub fn band_frequency_range(&self, band_index: usize) -> Result<FrequencyRange> {
        if band_index >= self.n_bands() {
            return Err(Error::BandIndexOutOfRange {
                index: band_index,
                bands: self.n_bands(),
            });
        }
        let width = self.band_width_hz();
        FrequencyRange::new(band_index as f64 * width, (band_index + 1) as f64 * width)
    }

    /// The unique band whose frequency range contains `target_hz`.
    ///
    /// `target_hz` must lie in `[0, sample_rate / 2)`.
    pub fn band_for_frequency(&self, target_hz: f64) -> Result<usize> {
        let nyquist = self.sample_rate / 2.0;
        if !target_hz.is_finite() || target_hz < 0.0 || target_hz >= nyquist {
            return Err(Error::FrequencyAboveNyquist {
                target_hz,
                nyquist_hz: nyquist,
            });
        }
        let band = (target_hz / self.band_width_hz()).floor() as usize;
        // Guard the top edge against floating-point round-up.
        Ok(band.min(self.n_bands() - 1))
    }

    /// First (inclusive) and last (exclusive) positive-frequency DFT bin of
    /// a band in the padded spectrum.
    fn band_bins(&self, band_index: usize) -> (usize, usize) {
        let m = self.bins_per_band();
        (band_index * m, (band_index + 1) * m)
    }
}

/// HWPT output: per-band complex coefficients plus everything needed to
/// reconstruct any band in the time domain.
#[derive(Debug, Clone)]
pub struct BandDecomposition {
    plan: HwptPlan,
    /// Per-band coefficients, `bins_per_band` complex values each. Scaled so
    /// that the squared magnitudes of a band sum to that band's energy (the
    /// Nyquist bin of the padded length is accounted in the last band's
    /// energy but carries no coefficient slot).
    coefficients: Vec<Vec<Complex64>>,
    /// Mean square of the input record.
    source_energy: f64,
    /// Forward DFT of the padded signal, kept for exact reconstruction.
    spectrum: Vec<Complex64>,
    t_capture: Option<f64>,
    channel_label: String,
    unit: crate::record::AccelUnit,
}

/// Decomposes `record` into `2^level` equal-width frequency bands.
pub fn hwpt_decompose(record: &TimeSeriesRecord, level: u32) -> Result<BandDecomposition> {
    let plan = HwptPlan::new(level, record.len(), record.sample_rate())?;

    let n_pad = plan.n_padded();
    let mut spectrum = vec![Complex64::new(0.0, 0.0); n_pad];
    for (slot, &s) in spectrum.iter_mut().zip(record.samples()) {
        *slot = Complex64::new(s, 0.0);
    }
    fft::forward(n_pad).process(&mut spectrum);

    let m = plan.bins_per_band();
    let inverse = fft::inverse(m);
    // Normalisation: sum_m |c_k[m]|^2 equals the band's mean-square share of
    // the record (2/(M*n_pad*n) per squared bin magnitude, the DC bin
    // entering at half weight because it has no conjugate mirror).
    let scale = (2.0 / (m as f64 * n_pad as f64 * plan.n_samples() as f64)).sqrt();

    let mut coefficients = Vec::with_capacity(plan.n_bands());
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for band in 0..plan.n_bands() {
        let (lo, hi) = plan.band_bins(band);
        buf.copy_from_slice(&spectrum[lo..hi]);
        if band == 0 {
            buf[0] /= 2.0_f64.sqrt();
        }
        inverse.process(&mut buf);
        coefficients.push(buf.iter().map(|c| c * scale).collect());
    }

    Ok(BandDecomposition {
        plan,
        coefficients,
        source_energy: crate::record::mean_square(record.samples()),
        spectrum,
        t_capture: record.t_capture(),
        channel_label: record.channel_label().to_string(),
        unit: record.unit(),
    })
}

impl BandDecomposition {
    pub fn plan(&self) -> &HwptPlan {
        &self.plan
    }

    /// Mean square of the input record.
    pub fn source_energy(&self) -> f64 {
        self.source_energy
    }

    /// Complex coefficients of one band.
    pub fn coefficients(&self, band_index: usize) -> Result<&[Complex64]> {
        self.coefficients
            .get(band_index)
            .map(|c| c.as_slice())
            .ok_or(Error::BandIndexOutOfRange {
                index: band_index,
                bands: self.plan.n_bands(),
            })
    }

    /// The band's contribution to the record mean square.
    ///
    /// Summed over all bands this reproduces [`source_energy`], padding or
    /// not, because the padded spectrum holds the same total energy as the
    /// raw samples.
    ///
    /// [`source_energy`]: Self::source_energy
    pub fn band_energy(&self, band_index: usize) -> Result<f64> {
        if band_index >= self.plan.n_bands() {
            return Err(Error::BandIndexOutOfRange {
                index: band_index,
                bands: self.plan.n_bands(),
            });
        }
        let n_pad = self.plan.n_padded();
        let (lo, hi) = self.plan.band_bins(band_index);
        let mut sum = 0.0;
        for b in lo..hi {
            sum += self.spectrum[b].norm_sqr();
            if b > 0 {
                sum += self.spectrum[n_pad - b].norm_sqr();
            }
        }
        if band_index == self.plan.n_bands() - 1 {
            sum += self.spectrum[n_pad / 2].norm_sqr();
        }
        Ok(sum / (n_pad as f64 * self.plan.n_samples() as f64))
    }

    /// Energies of all bands, in band order.
    pub fn band_energies(&self) -> Vec<f64> {
        (0..self.plan.n_bands())
            .map(|k| self.band_energy(k).expect("band index in range"))
            .collect()
    }

    /// Real time-domain signal containing only `band_index`.
    ///
    /// Every DFT bin outside the band (and its conjugate mirror) is zeroed,
    /// the full-length spectrum is inverted, and the padding is stripped, so
    /// the output has the length and sample rate of the input record.
    pub fn reconstruct_band(&self, band_index: usize) -> Result<TimeSeriesRecord> {
        if band_index >= self.plan.n_bands() {
            return Err(Error::BandIndexOutOfRange {
                index: band_index,
                bands: self.plan.n_bands(),
            });
        }
        let n_pad = self.plan.n_padded();
        let (lo, hi) = self.plan.band_bins(band_index);

        let mut masked = vec![Complex64::new(0.0, 0.0); n_pad];
        for b in lo..hi {
            masked[b] = self.spectrum[b];
            if b > 0 {
                masked[n_pad - b] = self.spectrum[n_pad - b];
            }
        }
        if band_index == self.plan.n_bands() - 1 {
            masked[n_pad / 2] = self.spectrum[n_pad / 2];
        }

        fft::inverse(n_pad).process(&mut masked);

        let inv_n = 1.0 / n_pad as f64;
        let samples: Vec<f64> = masked[..self.plan.n_samples()]
            .iter()
            .map(|c| c.re * inv_n)
            .collect();

        let mut rec = TimeSeriesRecord::new(samples, self.plan.sample_rate())?
            .with_channel_label(self.channel_label.clone())
            .with_unit(self.unit);
        if let Some(t) = self.t_capture {
            rec = rec.with_t_capture(t);
        }
        Ok(rec)
    }
}
