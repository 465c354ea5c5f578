//! Friction-coefficient trend fitting, wear-stage segmentation and RMS
//! trend classification.
//!
//! The friction coefficient of a running-in experiment decreases gradually
//! and then levels off. A single-exponential model
//! `mu(t) = mu_inf + (mu0 - mu_inf) * exp(-t / tau)` is fitted by least
//! squares; the running-in/stable boundary is the earliest time at which the
//! magnitude of the fitted slope drops below a threshold. RMS trends per
//! stage are labelled by an ordinary-least-squares slope test.

use crate::error::{Error, Result};
use crate::fiv::RmsSeries;

/// Default z-score for the slope significance test.
pub const DEFAULT_TREND_Z: f64 = 2.0;

/// Default `|d mu / dt|` threshold (per minute) declaring stability.
pub const DEFAULT_SLOPE_THRESHOLD: f64 = 2.5e-4;

/// Measured friction-coefficient history.
#[derive(Debug, Clone, PartialEq)]
pub struct FrictionTrace {
    times_min: Vec<f64>,
    mu_values: Vec<f64>,
}

impl FrictionTrace {
    /// Validates a friction trace: strictly increasing times, equal lengths,
    /// friction coefficients finite and inside `(0, 2)`.
    pub fn new(times_min: Vec<f64>, mu_values: Vec<f64>) -> Result<Self> {
        if times_min.is_empty() {
            return Err(Error::EmptySignal);
        }
        if times_min.len() != mu_values.len() {
            return Err(Error::invalid(
                "mu_values",
                format!(
                    "length {} does not match {} time points",
                    mu_values.len(),
                    times_min.len()
                ),
            ));
        }
        let strictly_increasing = times_min[0].is_finite()
            && times_min
                .windows(2)
                .all(|w| w[1].is_finite() && w[1] > w[0]);
        if !strictly_increasing {
            return Err(Error::invalid(
                "times_min",
                "must be finite and strictly increasing",
            ));
        }
        if let Some(i) = mu_values
            .iter()
            .position(|m| !m.is_finite() || *m <= 0.0 || *m >= 2.0)
        {
            return Err(Error::invalid(
                "mu_values",
                format!("value {} at index {i} outside (0, 2)", mu_values[i]),
            ));
        }
        Ok(Self {
            times_min,
            mu_values,
        })
    }

    pub fn times_min(&self) -> &[f64] {
        &self.times_min
    }

    pub fn mu_values(&self) -> &[f64] {
        &self.mu_values
    }

    pub fn len(&self) -> usize {
        self.times_min.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times_min.is_empty()
    }

    pub fn start_min(&self) -> f64 {
        self.times_min[0]
    }

    pub fn end_min(&self) -> f64 {
        *self.times_min.last().unwrap()
    }

    pub fn span_min(&self) -> f64 {
        self.end_min() - self.start_min()
    }
}

/// Fitted exponential-decay trend of the friction coefficient.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TrendFit {
    /// Model value at t = 0.
    pub mu0: f64,
    /// Asymptote.
    pub mu_inf: f64,
    /// Decay time constant in minutes.
    pub tau_minutes: f64,
    /// Root-mean-square residual of the fit.
    pub rmse: f64,
    /// Set when the trace is constant and no decay could be fitted; the
    /// time constant then reports the trace span.
    pub no_decay: bool,
}

impl TrendFit {
    /// Fitted model evaluated at `t_min`.
    pub fn mu_at(&self, t_min: f64) -> f64 {
        self.mu_inf + (self.mu0 - self.mu_inf) * (-t_min / self.tau_minutes).exp()
    }

    /// Magnitude of the fitted slope at `t_min`, per minute.
    pub fn slope_magnitude_at(&self, t_min: f64) -> f64 {
        ((self.mu0 - self.mu_inf) / self.tau_minutes * (-t_min / self.tau_minutes).exp()).abs()
    }
}

/// Wear-stage identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageLabel {
    RunningIn,
    Stable,
}

impl std::fmt::Display for StageLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StageLabel::RunningIn => write!(f, "running-in"),
            StageLabel::Stable => write!(f, "stable"),
        }
    }
}

/// One labelled, contiguous time interval in minutes.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Stage {
    pub label: StageLabel,
    pub start_min: f64,
    pub end_min: f64,
}

/// Two-stage split of the experiment span.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct StageSegmentation {
    /// Boundary between running-in and stable wear, minutes.
    pub boundary_minutes: f64,
    /// Contiguous stages covering the trace span.
    pub stages: Vec<Stage>,
    pub method_tag: String,
    /// Degenerate-case markers ("no decay", "threshold not reached").
    pub flags: Vec<String>,
}

impl StageSegmentation {
    /// The stage containing `t_min`, if any. The final stage is closed on
    /// the right.
    pub fn stage_at(&self, t_min: f64) -> Option<&Stage> {
        let last = self.stages.len() - 1;
        self.stages.iter().enumerate().find_map(|(i, stage)| {
            let inside = if i == last {
                t_min >= stage.start_min && t_min <= stage.end_min
            } else {
                t_min >= stage.start_min && t_min < stage.end_min
            };
            inside.then_some(stage)
        })
    }
}

/// Least-squares fit of `mu(t) = mu_inf + (mu0 - mu_inf) exp(-t/tau)`.
///
/// Requires at least 8 points. For each candidate `tau` the two linear
/// parameters are solved in closed form; `tau` itself is located by a
/// log-spaced scan refined with golden-section search, which is
/// deterministic and needs no starting guess.
pub fn fit_friction_trend(trace: &FrictionTrace) -> Result<TrendFit> {
    if trace.len() < 8 {
        return Err(Error::InsufficientSamples {
            have: trace.len(),
            need: 8,
        });
    }
    let span = trace.span_min();
    if span <= 0.0 {
        return Err(Error::invalid("trace", "must span more than zero time"));
    }

    let mu = trace.mu_values();
    let mean = mu.iter().sum::<f64>() / mu.len() as f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &m in mu {
        lo = lo.min(m);
        hi = hi.max(m);
    }
    if hi - lo <= 1e-12 * mean.abs() {
        let rmse =
            (mu.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>() / mu.len() as f64).sqrt();
        return Ok(TrendFit {
            mu0: mean,
            mu_inf: mean,
            tau_minutes: span,
            rmse,
            no_decay: true,
        });
    }

    // Coarse log-spaced scan over tau.
    let tau_min = span * 1e-3;
    let tau_max = span * 1e2;
    let steps = 120;
    let ratio = (tau_max / tau_min).powf(1.0 / (steps - 1) as f64);
    let mut best = (tau_min, f64::INFINITY);
    let mut tau = tau_min;
    for _ in 0..steps {
        let sse = sse_for_tau(trace, tau).unwrap_or(f64::INFINITY);
        if sse < best.1 {
            best = (tau, sse);
        }
        tau *= ratio;
    }

    // Golden-section refinement around the best grid point.
    let golden = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut a = best.0 / ratio;
    let mut b = best.0 * ratio;
    let mut c = b - golden * (b - a);
    let mut d = a + golden * (b - a);
    let mut fc = sse_for_tau(trace, c).unwrap_or(f64::INFINITY);
    let mut fd = sse_for_tau(trace, d).unwrap_or(f64::INFINITY);
    for _ in 0..200 {
        if (b - a) / b < 1e-12 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - golden * (b - a);
            fc = sse_for_tau(trace, c).unwrap_or(f64::INFINITY);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + golden * (b - a);
            fd = sse_for_tau(trace, d).unwrap_or(f64::INFINITY);
        }
    }
    let tau = 0.5 * (a + b);
    let (mu_inf, delta, sse) = linear_fit_for_tau(trace, tau)
        .ok_or_else(|| Error::invalid("trace", "exponential fit is degenerate"))?;

    Ok(TrendFit {
        mu0: mu_inf + delta,
        mu_inf,
        tau_minutes: tau,
        rmse: (sse / trace.len() as f64).sqrt(),
        no_decay: false,
    })
}

/// For fixed `tau`, solves `mu ~ a + b * exp(-t/tau)` by linear least
/// squares. Returns `(a, b, sse)`, or `None` when the basis is degenerate.
fn linear_fit_for_tau(trace: &FrictionTrace, tau: f64) -> Option<(f64, f64, f64)> {
    let n = trace.len() as f64;
    let mut s_e = 0.0;
    let mut s_ee = 0.0;
    let mut s_y = 0.0;
    let mut s_ey = 0.0;
    for (&t, &y) in trace.times_min().iter().zip(trace.mu_values()) {
        let e = (-t / tau).exp();
        s_e += e;
        s_ee += e * e;
        s_y += y;
        s_ey += e * y;
    }
    let det = n * s_ee - s_e * s_e;
    let well_conditioned = det.abs() > 1e-12 * n * s_ee.max(1e-300);
    if !well_conditioned {
        return None;
    }
    let a = (s_ee * s_y - s_e * s_ey) / det;
    let b = (n * s_ey - s_e * s_y) / det;
    let mut sse = 0.0;
    for (&t, &y) in trace.times_min().iter().zip(trace.mu_values()) {
        let r = y - a - b * (-t / tau).exp();
        sse += r * r;
    }
    Some((a, b, sse))
}

fn sse_for_tau(trace: &FrictionTrace, tau: f64) -> Option<f64> {
    linear_fit_for_tau(trace, tau).map(|(_, _, sse)| sse)
}

/// Splits the trace span at the earliest time where the fitted slope
/// magnitude drops below `slope_threshold` (per minute).
///
/// The boundary is clamped to the trace span. A constant fit yields a single
/// stable stage; a threshold never reached within the span yields a single
/// running-in stage, flagged.
pub fn segment_stages(
    fit: &TrendFit,
    trace: &FrictionTrace,
    slope_threshold: f64,
) -> Result<StageSegmentation> {
    if !(slope_threshold.is_finite() && slope_threshold > 0.0) {
        return Err(Error::invalid(
            "slope_threshold",
            format!("must be positive, got {slope_threshold}"),
        ));
    }
    let start = trace.start_min();
    let end = trace.end_min();
    let method_tag = format!("exp-fit-slope<{slope_threshold:e}/min");
    let mut flags = Vec::new();

    if fit.no_decay {
        flags.push(String::from("no decay"));
        return Ok(StageSegmentation {
            boundary_minutes: start,
            stages: vec![Stage {
                label: StageLabel::Stable,
                start_min: start,
                end_min: end,
            }],
            method_tag,
            flags,
        });
    }

    // |d mu/dt| = |delta|/tau * exp(-t/tau) < threshold from
    // t* = tau * ln(|delta| / (tau * threshold)) onwards.
    let delta = (fit.mu0 - fit.mu_inf).abs();
    let argument = delta / (fit.tau_minutes * slope_threshold);
    let crossing = if argument <= 1.0 {
        // Slope already below threshold at t = 0.
        f64::NEG_INFINITY
    } else {
        fit.tau_minutes * argument.ln()
    };

    if crossing <= start {
        return Ok(StageSegmentation {
            boundary_minutes: start,
            stages: vec![Stage {
                label: StageLabel::Stable,
                start_min: start,
                end_min: end,
            }],
            method_tag,
            flags,
        });
    }
    if crossing >= end {
        flags.push(String::from("threshold not reached"));
        return Ok(StageSegmentation {
            boundary_minutes: end,
            stages: vec![Stage {
                label: StageLabel::RunningIn,
                start_min: start,
                end_min: end,
            }],
            method_tag,
            flags,
        });
    }

    Ok(StageSegmentation {
        boundary_minutes: crossing,
        stages: vec![
            Stage {
                label: StageLabel::RunningIn,
                start_min: start,
                end_min: crossing,
            },
            Stage {
                label: StageLabel::Stable,
                start_min: crossing,
                end_min: end,
            },
        ],
        method_tag,
        flags,
    })
}

/// Direction of an RMS trend within one stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrendLabel {
    Rising,
    Falling,
    Stable,
    InsufficientData,
}

impl std::fmt::Display for TrendLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TrendLabel::Rising => write!(f, "rising"),
            TrendLabel::Falling => write!(f, "falling"),
            TrendLabel::Stable => write!(f, "stable"),
            TrendLabel::InsufficientData => write!(f, "insufficient data"),
        }
    }
}

/// Slope test outcome for one stage.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct StageTrend {
    pub stage: StageLabel,
    pub start_min: f64,
    pub end_min: f64,
    pub trend: TrendLabel,
    /// OLS slope of RMS against time, per minute.
    pub slope_per_min: Option<f64>,
    /// Standard error of the slope estimate.
    pub slope_stderr: Option<f64>,
    /// Mean RMS over the stage's windows.
    pub mean_rms: Option<f64>,
    pub n_windows: usize,
}

/// Per-stage trend labels plus the stage-mean comparison.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RmsTrendReport {
    pub stages: Vec<StageTrend>,
    /// Last-stage mean divided by first-stage mean, when both exist.
    pub stage_mean_ratio: Option<f64>,
}

/// Labels the RMS trend inside each stage with an OLS slope test: rising if
/// `slope > z * stderr`, falling if `slope < -z * stderr`, stable otherwise
/// (`z` = [`DEFAULT_TREND_Z`]). Stages with fewer than 3 windows are
/// labelled insufficient-data.
pub fn classify_rms_trend(
    series: &RmsSeries,
    segmentation: &StageSegmentation,
) -> Result<RmsTrendReport> {
    if series.is_empty() {
        return Err(Error::NoRecords);
    }
    let z = DEFAULT_TREND_Z;
    let mut stages = Vec::with_capacity(segmentation.stages.len());
    let last = segmentation.stages.len() - 1;
    for (i, stage) in segmentation.stages.iter().enumerate() {
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (&center_s, &rms) in series.window_centers_s.iter().zip(&series.rms_values) {
            let t_min = center_s / 60.0;
            let inside = if i == last {
                t_min >= stage.start_min && t_min <= stage.end_min
            } else {
                t_min >= stage.start_min && t_min < stage.end_min
            };
            if inside {
                times.push(t_min);
                values.push(rms);
            }
        }
        let n = times.len();
        if n < 3 {
            stages.push(StageTrend {
                stage: stage.label,
                start_min: stage.start_min,
                end_min: stage.end_min,
                trend: TrendLabel::InsufficientData,
                slope_per_min: None,
                slope_stderr: None,
                mean_rms: (n > 0)
                    .then(|| values.iter().sum::<f64>() / n as f64),
                n_windows: n,
            });
            continue;
        }
        let (slope, stderr) = ols_slope(&times, &values);
        let trend = if slope > z * stderr {
            TrendLabel::Rising
        } else if slope < -z * stderr {
            TrendLabel::Falling
        } else {
            TrendLabel::Stable
        };
        stages.push(StageTrend {
            stage: stage.label,
            start_min: stage.start_min,
            end_min: stage.end_min,
            trend,
            slope_per_min: Some(slope),
            slope_stderr: Some(stderr),
            mean_rms: Some(values.iter().sum::<f64>() / n as f64),
            n_windows: n,
        });
    }

    let stage_mean_ratio = match (stages.first(), stages.last()) {
        (Some(first), Some(last_stage)) if stages.len() >= 2 => {
            match (first.mean_rms, last_stage.mean_rms) {
                (Some(a), Some(b)) if a > 0.0 => Some(b / a),
                _ => None,
            }
        }
        _ => None,
    };

    Ok(RmsTrendReport {
        stages,
        stage_mean_ratio,
    })
}

/// OLS slope and its standard error for `y` against `x`.
fn ols_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let x_mean = x.iter().sum::<f64>() / n;
    let y_mean = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - x_mean) * (xi - x_mean);
        sxy += (xi - x_mean) * (yi - y_mean);
    }
    let slope = sxy / sxx;
    let mut sse = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let r = yi - y_mean - slope * (xi - x_mean);
        sse += r * r;
    }
    let stderr = (sse / (n - 2.0) / sxx).sqrt();
    (slope, stderr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_trace(mu0: f64, mu_inf: f64, tau: f64, duration: f64, cadence: f64) -> FrictionTrace {
        let n = (duration / cadence) as usize + 1;
        let times: Vec<f64> = (0..n).map(|i| i as f64 * cadence).collect();
        let mu: Vec<f64> = times
            .iter()
            .map(|&t| mu_inf + (mu0 - mu_inf) * (-t / tau).exp())
            .collect();
        FrictionTrace::new(times, mu).unwrap()
    }

    fn series_from(centers_min: &[f64], values: &[f64]) -> RmsSeries {
        RmsSeries {
            window_centers_s: centers_min.iter().map(|m| m * 60.0).collect(),
            rms_values: values.to_vec(),
            window_seconds: 60.0,
            records_per_window: vec![1; values.len()],
        }
    }

    #[test]
    fn trace_validation_rejects_bad_input() {
        assert!(FrictionTrace::new(vec![], vec![]).is_err());
        assert!(FrictionTrace::new(vec![0.0, 1.0], vec![0.1]).is_err());
        assert!(FrictionTrace::new(vec![0.0, 0.0], vec![0.1, 0.1]).is_err());
        assert!(FrictionTrace::new(vec![0.0, 1.0], vec![0.1, 2.5]).is_err());
        assert!(FrictionTrace::new(vec![0.0, 1.0], vec![0.1, -0.1]).is_err());
    }

    #[test]
    fn noiseless_fit_recovers_parameters_within_one_percent() {
        let trace = exp_trace(0.129, 0.103, 12.0, 60.0, 0.5);
        let fit = fit_friction_trend(&trace).unwrap();
        assert!(((fit.mu0 - 0.129) / 0.129).abs() < 0.01, "mu0 {}", fit.mu0);
        assert!(
            ((fit.mu_inf - 0.103) / 0.103).abs() < 0.01,
            "mu_inf {}",
            fit.mu_inf
        );
        assert!(
            ((fit.tau_minutes - 12.0) / 12.0).abs() < 0.01,
            "tau {}",
            fit.tau_minutes
        );
        assert!(fit.rmse < 1e-9);
        assert!(!fit.no_decay);
    }

    #[test]
    fn constant_trace_is_flagged_no_decay() {
        let times: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let trace = FrictionTrace::new(times, vec![0.103; 20]).unwrap();
        let fit = fit_friction_trend(&trace).unwrap();
        assert!(fit.no_decay);
        assert!((fit.mu_inf - 0.103).abs() < 1e-12);
        assert!((fit.mu0 - 0.103).abs() < 1e-12);
        assert_eq!(fit.tau_minutes, 19.0);
    }

    #[test]
    fn fit_requires_eight_points() {
        let times: Vec<f64> = (0..5).map(|i| i as f64).collect();
        let trace = FrictionTrace::new(times, vec![0.11; 5]).unwrap();
        assert!(matches!(
            fit_friction_trend(&trace),
            Err(Error::InsufficientSamples { have: 5, need: 8 })
        ));
    }

    #[test]
    fn paper_parameter_boundary_lands_near_forty_minutes() {
        // tau = 40 min together with the default threshold puts the analytic
        // crossing at 40 * ln(0.026 / 0.01) = 38.22 min.
        let trace = exp_trace(0.129, 0.103, 40.0, 60.0, 0.1);
        let fit = fit_friction_trend(&trace).unwrap();
        let seg = segment_stages(&fit, &trace, DEFAULT_SLOPE_THRESHOLD).unwrap();
        assert!(
            (seg.boundary_minutes - 40.0).abs() <= 2.0,
            "boundary {}",
            seg.boundary_minutes
        );
        assert_eq!(seg.stages.len(), 2);
        assert_eq!(seg.stages[0].label, StageLabel::RunningIn);
        assert_eq!(seg.stages[1].label, StageLabel::Stable);
        // Analytic crossing from the known parameters.
        let expected = 40.0 * (0.026_f64 / (40.0 * DEFAULT_SLOPE_THRESHOLD)).ln();
        assert!((seg.boundary_minutes - expected).abs() < 0.05);
    }

    #[test]
    fn constant_trace_segments_as_single_stable_stage() {
        let times: Vec<f64> = (0..20).map(|i| i as f64 * 3.0).collect();
        let trace = FrictionTrace::new(times, vec![0.103; 20]).unwrap();
        let fit = fit_friction_trend(&trace).unwrap();
        let seg = segment_stages(&fit, &trace, DEFAULT_SLOPE_THRESHOLD).unwrap();
        assert_eq!(seg.boundary_minutes, 0.0);
        assert_eq!(seg.stages.len(), 1);
        assert_eq!(seg.stages[0].label, StageLabel::Stable);
        assert!(seg.flags.iter().any(|f| f == "no decay"));
    }

    #[test]
    fn slow_decay_yields_single_running_in_stage_flagged() {
        // tau far beyond the span: analytically the slope magnitude is about
        // delta/tau = 5.7e-5 throughout, so against a 1e-5 threshold it
        // never drops below and the whole span stays running-in.
        let trace = exp_trace(0.129, 0.095, 600.0, 60.0, 1.0);
        let fit = fit_friction_trend(&trace).unwrap();
        let threshold = 1e-5;
        assert!(fit.slope_magnitude_at(60.0) > threshold);
        let seg = segment_stages(&fit, &trace, threshold).unwrap();
        assert_eq!(seg.stages.len(), 1);
        assert_eq!(seg.stages[0].label, StageLabel::RunningIn);
        assert_eq!(seg.boundary_minutes, 60.0);
        assert!(seg.flags.iter().any(|f| f == "threshold not reached"));
    }

    #[test]
    fn boundary_is_monotone_in_threshold() {
        let trace = exp_trace(0.129, 0.103, 15.0, 60.0, 0.5);
        let fit = fit_friction_trend(&trace).unwrap();
        let mut last = f64::INFINITY;
        for thr in [1e-5, 5e-5, 2.5e-4, 1e-3, 5e-3] {
            let seg = segment_stages(&fit, &trace, thr).unwrap();
            assert!(
                seg.boundary_minutes <= last,
                "boundary increased at thr={thr}"
            );
            last = seg.boundary_minutes;
        }
    }

    #[test]
    fn boundary_invariant_under_joint_scaling() {
        let trace = exp_trace(0.129, 0.103, 15.0, 60.0, 0.5);
        let fit = fit_friction_trend(&trace).unwrap();
        let seg = segment_stages(&fit, &trace, DEFAULT_SLOPE_THRESHOLD).unwrap();

        let scale = 4.0;
        let scaled_mu: Vec<f64> = trace.mu_values().iter().map(|m| m * scale).collect();
        // 4 * 0.129 < 2.0 keeps the trace valid.
        let scaled = FrictionTrace::new(trace.times_min().to_vec(), scaled_mu).unwrap();
        let scaled_fit = fit_friction_trend(&scaled).unwrap();
        let scaled_seg =
            segment_stages(&scaled_fit, &scaled, DEFAULT_SLOPE_THRESHOLD * scale).unwrap();
        assert!(
            (seg.boundary_minutes - scaled_seg.boundary_minutes).abs() < 1e-6,
            "{} vs {}",
            seg.boundary_minutes,
            scaled_seg.boundary_minutes
        );
    }

    fn two_stage_segmentation(boundary: f64, end: f64) -> StageSegmentation {
        StageSegmentation {
            boundary_minutes: boundary,
            stages: vec![
                Stage {
                    label: StageLabel::RunningIn,
                    start_min: 0.0,
                    end_min: boundary,
                },
                Stage {
                    label: StageLabel::Stable,
                    start_min: boundary,
                    end_min: end,
                },
            ],
            method_tag: String::from("test"),
            flags: Vec::new(),
        }
    }

    #[test]
    fn rising_then_plateau_labels_match() {
        let centers: Vec<f64> = (0..60).map(|i| i as f64 + 0.5).collect();
        let values: Vec<f64> = centers
            .iter()
            .map(|&t| {
                // Saturating rise with a touch of deterministic ripple so the
                // plateau is not perfectly linear.
                let a = 1.0 - (-t / 5.0_f64).exp();
                a + 0.002 * ((t * 0.9).sin())
            })
            .collect();
        let seg = two_stage_segmentation(38.2, 60.0);
        let report = classify_rms_trend(&series_from(&centers, &values), &seg).unwrap();
        assert_eq!(report.stages.len(), 2);
        assert_eq!(report.stages[0].trend, TrendLabel::Rising);
        assert_eq!(report.stages[1].trend, TrendLabel::Stable);
        let ratio = report.stage_mean_ratio.unwrap();
        assert!(ratio > 1.0, "ratio {ratio}");
    }

    #[test]
    fn flat_series_is_stable_in_both_stages() {
        let centers: Vec<f64> = (0..60).map(|i| i as f64 + 0.5).collect();
        let values = vec![0.5; 60];
        let seg = two_stage_segmentation(40.0, 60.0);
        let report = classify_rms_trend(&series_from(&centers, &values), &seg).unwrap();
        assert_eq!(report.stages[0].trend, TrendLabel::Stable);
        assert_eq!(report.stages[1].trend, TrendLabel::Stable);
    }

    #[test]
    fn strictly_linear_series_is_rising_in_both_stages() {
        let centers: Vec<f64> = (0..60).map(|i| i as f64 + 0.5).collect();
        let values: Vec<f64> = centers.iter().map(|&t| 0.1 + 0.01 * t).collect();
        let seg = two_stage_segmentation(40.0, 60.0);
        let report = classify_rms_trend(&series_from(&centers, &values), &seg).unwrap();
        assert_eq!(report.stages[0].trend, TrendLabel::Rising);
        assert_eq!(report.stages[1].trend, TrendLabel::Rising);
        // Closed-form OLS slope on an exact line recovers the coefficient.
        let slope = report.stages[0].slope_per_min.unwrap();
        assert!((slope - 0.01).abs() < 1e-12);
    }

    #[test]
    fn short_stage_is_labelled_insufficient_data() {
        let centers = vec![0.5, 1.5, 2.5, 3.5, 4.5, 58.5, 59.5];
        let values = vec![0.1, 0.12, 0.14, 0.16, 0.18, 0.5, 0.5];
        let seg = two_stage_segmentation(50.0, 60.0);
        let report = classify_rms_trend(&series_from(&centers, &values), &seg).unwrap();
        assert_eq!(report.stages[1].trend, TrendLabel::InsufficientData);
        assert_eq!(report.stages[1].n_windows, 2);
    }

    #[test]
    fn trend_labels_invariant_under_scaling() {
        let centers: Vec<f64> = (0..60).map(|i| i as f64 + 0.5).collect();
        let values: Vec<f64> = centers
            .iter()
            .map(|&t| 1.0 - (-t / 5.0_f64).exp() + 0.002 * (t * 1.3).sin())
            .collect();
        let seg = two_stage_segmentation(38.2, 60.0);
        let base = classify_rms_trend(&series_from(&centers, &values), &seg).unwrap();
        let scaled_values: Vec<f64> = values.iter().map(|v| v * 250.0).collect();
        let scaled = classify_rms_trend(&series_from(&centers, &scaled_values), &seg).unwrap();
        for (a, b) in base.stages.iter().zip(&scaled.stages) {
            assert_eq!(a.trend, b.trend);
        }
    }
}
