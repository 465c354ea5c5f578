//! The five subcommands. Each returns `Ok(true)` when the run completed but
//! raised degenerate-analysis flags (mapped to exit code 3).

use std::path::Path;

use anyhow::{bail, Context};
use fivtrack::{
    classify_rms_trend, fit_friction_trend, identify_reference_frequency, lubrication_report,
    rms_series, segment_stages, FrictionTrace, HwptPlan, TrendLabel,
};

use crate::config::PipelineConfig;
use crate::fileio;
use crate::report::{
    self, AnalysisReport, BandInfo, FileFailure, IdentifyReport, Provenance, RecordFrequency,
    ReferenceBlock, ReferenceSource, RmsSeriesBlock, SegmentationBlock,
};

fn band_info(plan: &HwptPlan, index: usize) -> anyhow::Result<BandInfo> {
    let range = plan.band_frequency_range(index)?;
    Ok(BandInfo {
        index,
        low_hz: range.low_hz(),
        high_hz: range.high_hz(),
        width_hz: plan.band_width_hz(),
    })
}

fn failures_to_report(failures: &[(String, String)]) -> Vec<FileFailure> {
    failures
        .iter()
        .map(|(file, error)| FileFailure {
            file: file.clone(),
            error: error.clone(),
        })
        .collect()
}

pub fn cmd_identify(
    squeal_dir: &Path,
    out: &Path,
    config: PipelineConfig,
    timestamp: Option<&str>,
) -> anyhow::Result<bool> {
    let ingest = fileio::read_record_dir(squeal_dir, &config.channel)?;
    for (file, error) in &ingest.failures {
        eprintln!("warning: {file}: {error}");
    }
    if ingest.records.is_empty() {
        bail!("no readable record files in {}", squeal_dir.display());
    }

    let range = config.search_range()?;
    let psd = config.psd();
    let reference = identify_reference_frequency(&ingest.records, &range, &psd)?;

    // Per-record rows for the records that produced a dominant frequency.
    // Skipped records are reported by name: re-run per file to know which.
    let mut per_record = Vec::new();
    let mut skipped_files = Vec::new();
    for (name, record) in ingest.names.iter().zip(&ingest.records) {
        match identify_reference_frequency(std::slice::from_ref(record), &range, &psd) {
            Ok(single) => per_record.push(RecordFrequency {
                file: name.clone(),
                dominant_hz: single.mean_hz,
            }),
            Err(_) => skipped_files.push(name.clone()),
        }
    }

    let first = &ingest.records[0];
    let plan = HwptPlan::new(config.hwpt_level, first.len(), first.sample_rate())?;
    let selected = plan.band_for_frequency(reference.mean_hz)?;
    let band = band_info(&plan, selected)?;

    println!(
        "reference frequency: {:.1} Hz (spread {:.1} Hz over {} records, {} skipped)",
        reference.mean_hz,
        reference.spread_hz,
        reference.per_record_hz.len(),
        reference.skipped_records
    );
    println!(
        "selected band: {} of {} ({:.1}-{:.1} Hz)",
        band.index,
        plan.n_bands(),
        band.low_hz,
        band.high_hz
    );

    let mut provenance = Provenance::new(Some(config.clone()), timestamp);
    provenance.digest_inputs(&fileio::list_record_files(squeal_dir)?)?;
    let report = IdentifyReport {
        per_record,
        mean_hz: reference.mean_hz,
        spread_hz: reference.spread_hz,
        skipped_files,
        failed_files: failures_to_report(&ingest.failures),
        selected_band: band,
        provenance,
    };
    std::fs::write(out, report::to_json(&report)?)
        .with_context(|| format!("writing {}", out.display()))?;
    println!("wrote {}", out.display());
    Ok(!ingest.failures.is_empty())
}

pub struct AnalyzeArgs<'a> {
    pub records_dir: &'a Path,
    pub friction: Option<&'a Path>,
    pub squeal_dir: Option<&'a Path>,
    pub reference_hz: Option<f64>,
    pub lubrication_params: Option<&'a Path>,
    pub h_min_override_m: Option<f64>,
    pub out_dir: &'a Path,
    pub config: PipelineConfig,
    pub timestamp: Option<&'a str>,
}

pub fn cmd_analyze(args: AnalyzeArgs<'_>) -> anyhow::Result<bool> {
    let config = args.config.clone();
    let range = config.search_range()?;
    let psd = config.psd();
    let mut flags: Vec<String> = Vec::new();

    let ingest = fileio::read_record_dir(args.records_dir, &config.channel)?;
    for (file, error) in &ingest.failures {
        eprintln!("warning: {file}: {error}");
    }
    if ingest.records.is_empty() {
        bail!("no readable record files in {}", args.records_dir.display());
    }
    if !ingest.failures.is_empty() {
        flags.push(format!("{} record files failed to parse", ingest.failures.len()));
    }

    // Reference frequency: squeal directory, explicit flag, or (flagged)
    // the running records themselves.
    let reference = if let Some(hz) = args.reference_hz {
        ReferenceBlock {
            source: ReferenceSource::Flag,
            mean_hz: hz,
            spread_hz: 0.0,
            per_record_hz: vec![],
            skipped_records: 0,
        }
    } else if let Some(squeal_dir) = args.squeal_dir {
        let squeal = fileio::read_record_dir(squeal_dir, &config.channel)?;
        for (file, error) in &squeal.failures {
            eprintln!("warning: {file}: {error}");
        }
        if squeal.records.is_empty() {
            bail!("no readable squeal records in {}", squeal_dir.display());
        }
        let identified = identify_reference_frequency(&squeal.records, &range, &psd)?;
        ReferenceBlock {
            source: ReferenceSource::SquealRecords,
            mean_hz: identified.mean_hz,
            spread_hz: identified.spread_hz,
            per_record_hz: identified.per_record_hz,
            skipped_records: identified.skipped_records,
        }
    } else {
        flags.push(String::from(
            "reference frequency derived from the running records (no squeal input)",
        ));
        let identified = identify_reference_frequency(&ingest.records, &range, &psd)?;
        ReferenceBlock {
            source: ReferenceSource::RunningRecords,
            mean_hz: identified.mean_hz,
            spread_hz: identified.spread_hz,
            per_record_hz: identified.per_record_hz,
            skipped_records: identified.skipped_records,
        }
    };

    let first = &ingest.records[0];
    let plan = HwptPlan::new(config.hwpt_level, first.len(), first.sample_rate())?;
    let selected = plan.band_for_frequency(reference.mean_hz)?;
    let band = band_info(&plan, selected)?;

    let series = rms_series(
        &ingest.records,
        config.hwpt_level,
        selected,
        config.rms_window_s,
    )?;

    // Wear stages from the friction trace when available, otherwise from
    // the normalised RMS trend.
    let (friction_fit, segmentation) = match args.friction {
        Some(path) => {
            let trace = fileio::read_friction_csv(path)?;
            let fit = fit_friction_trend(&trace)?;
            let seg = segment_stages(&fit, &trace, config.slope_threshold_per_min)?;
            (Some(fit), seg)
        }
        None => {
            flags.push(String::from(
                "wear stages segmented from the rms trend (no friction trace)",
            ));
            let centers_min: Vec<f64> =
                series.window_centers_s.iter().map(|s| s / 60.0).collect();
            let peak = series
                .rms_values
                .iter()
                .cloned()
                .fold(f64::NEG_INFINITY, f64::max);
            if peak <= 0.0 {
                bail!("rms series is identically zero; nothing to segment");
            }
            let normalised: Vec<f64> = series.rms_values.iter().map(|v| v / peak).collect();
            let pseudo = FrictionTrace::new(centers_min, normalised)
                .context("rms series cannot be segmented")?;
            let fit = fit_friction_trend(&pseudo)?;
            let seg = segment_stages(&fit, &pseudo, config.slope_threshold_per_min)?;
            (None, seg)
        }
    };
    for flag in &segmentation.flags {
        flags.push(format!("segmentation: {flag}"));
    }

    let trends = classify_rms_trend(&series, &segmentation)?;
    for stage in &trends.stages {
        if stage.trend == TrendLabel::InsufficientData {
            flags.push(format!(
                "stage `{}` has too few rms windows for a trend",
                stage.stage
            ));
        }
    }

    let lubrication = match args.lubrication_params {
        Some(path) => {
            let (spec, pair) = fileio::read_lubrication_params(path)?;
            Some(lubrication_report(&spec, &pair, args.h_min_override_m)?)
        }
        None => None,
    };

    let mut provenance = Provenance::new(Some(config.clone()), args.timestamp);
    let mut inputs = fileio::list_record_files(args.records_dir)?;
    if let Some(p) = args.friction {
        inputs.push(p.to_path_buf());
    }
    if let Some(p) = args.lubrication_params {
        inputs.push(p.to_path_buf());
    }
    if let Some(dir) = args.squeal_dir {
        inputs.extend(fileio::list_record_files(dir)?);
    }
    provenance.digest_inputs(&inputs)?;

    let report = AnalysisReport {
        reference,
        selected_band: band,
        rms_series: RmsSeriesBlock::from(&series),
        friction_fit,
        segmentation: SegmentationBlock::from(&segmentation),
        trends,
        lubrication,
        flags: flags.clone(),
        failed_files: failures_to_report(&ingest.failures),
        provenance,
    };

    std::fs::create_dir_all(args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let report_path = args.out_dir.join("report.json");
    std::fs::write(&report_path, report::to_json(&report)?)
        .with_context(|| format!("writing {}", report_path.display()))?;
    let series_path = args.out_dir.join("rms_series.csv");
    std::fs::write(&series_path, report::rms_series_csv(&series))
        .with_context(|| format!("writing {}", series_path.display()))?;

    println!(
        "band {} ({:.1}-{:.1} Hz); boundary {:.1} min; stages: {}",
        report.selected_band.index,
        report.selected_band.low_hz,
        report.selected_band.high_hz,
        report.segmentation.boundary_minutes,
        report
            .trends
            .stages
            .iter()
            .map(|s| format!("{} {}", s.stage, s.trend))
            .collect::<Vec<_>>()
            .join(", ")
    );
    for flag in &flags {
        println!("flag: {flag}");
    }
    println!("wrote {}", report_path.display());
    Ok(!flags.is_empty())
}

pub fn cmd_lubrication(
    params: &Path,
    h_min_override_m: Option<f64>,
    out: Option<&Path>,
    timestamp: Option<&str>,
) -> anyhow::Result<bool> {
    let (spec, pair) = fileio::read_lubrication_params(params)?;
    let report = lubrication_report(&spec, &pair, h_min_override_m)?;

    println!("composite roughness: {:.4} um", report.sigma_c_um);
    println!("composite radius:    {:.4} mm", report.composite_radius_m * 1e3);
    println!(
        "composite modulus:   {:.1} GPa",
        report.composite_modulus_pa / 1e9
    );
    println!("minimum film:        {:.4} nm", report.h_min_m * 1e9);
    println!("lambda ratio:        {:.4}", report.lambda_ratio);
    println!("regime:              {}", report.regime);

    #[derive(serde::Serialize)]
    struct LubricationDocument {
        report: fivtrack::LubricationReport,
        h_min_overridden: bool,
        provenance: Provenance,
    }
    let mut provenance = Provenance::new(None, timestamp);
    provenance.digest_inputs(&[params.to_path_buf()])?;
    let document = LubricationDocument {
        report,
        h_min_overridden: h_min_override_m.is_some(),
        provenance,
    };
    if let Some(path) = out {
        std::fs::write(path, report::to_json(&document)?)
            .with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    } else {
        print!("{}", report::to_json(&document)?);
    }
    Ok(false)
}

pub fn cmd_synth(
    scenario_path: Option<&Path>,
    squeal_freqs: Option<&str>,
    squeal_snr_db: f64,
    out_dir: &Path,
) -> anyhow::Result<bool> {
    let scenario = match scenario_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading scenario {}", path.display()))?;
            toml::from_str::<fivtrack::RuninScenario>(&text)
                .with_context(|| format!("parsing scenario {}", path.display()))?
        }
        None => fivtrack::RuninScenario::default(),
    };

    let generated = fivtrack::generate_runin_records(&scenario)?;
    let records_dir = out_dir.join("records");
    std::fs::create_dir_all(&records_dir)
        .with_context(|| format!("creating {}", records_dir.display()))?;
    let mut record_files = Vec::with_capacity(generated.records.len());
    for (index, record) in generated.records.iter().enumerate() {
        let name = format!("record_{index:04}.csv");
        fileio::write_record(&records_dir.join(&name), record)?;
        record_files.push(name);
    }

    let trace = fivtrack::generate_friction_trace(
        &scenario.mu_trace,
        scenario.duration_minutes,
        scenario.mu_cadence_minutes,
        scenario.mu_noise_sd,
        scenario.rng_seed,
    )?;
    std::fs::write(out_dir.join("friction.csv"), fileio::friction_to_csv(&trace))
        .context("writing friction.csv")?;

    #[derive(serde::Serialize)]
    struct SquealBlock {
        freqs_hz: Vec<f64>,
        snr_db: f64,
        files: Vec<String>,
    }
    let squeal = match squeal_freqs {
        Some(list) => {
            let freqs: Vec<f64> = list
                .split(',')
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .with_context(|| format!("bad squeal frequency `{f}`"))
                })
                .collect::<anyhow::Result<_>>()?;
            let records = fivtrack::generate_squeal_records(
                &freqs,
                scenario.sample_rate,
                scenario.record_samples,
                squeal_snr_db,
                scenario.rng_seed,
            )?;
            let squeal_dir = out_dir.join("squeal");
            std::fs::create_dir_all(&squeal_dir)
                .with_context(|| format!("creating {}", squeal_dir.display()))?;
            let mut files = Vec::with_capacity(records.len());
            for (index, record) in records.iter().enumerate() {
                let name = format!("squeal_{index:02}.csv");
                fileio::write_record(&squeal_dir.join(&name), record)?;
                files.push(name);
            }
            Some(SquealBlock {
                freqs_hz: freqs,
                snr_db: squeal_snr_db,
                files,
            })
        }
        None => None,
    };

    #[derive(serde::Serialize)]
    struct Manifest {
        scenario: fivtrack::RuninScenario,
        record_files: Vec<String>,
        friction_file: &'static str,
        envelope: Vec<fivtrack::EnvelopePoint>,
        squeal: Option<SquealBlock>,
    }
    let manifest = Manifest {
        scenario,
        record_files,
        friction_file: "friction.csv",
        envelope: generated.envelope,
        squeal,
    };
    std::fs::write(out_dir.join("manifest.json"), report::to_json(&manifest)?)
        .context("writing manifest.json")?;

    println!(
        "wrote {} records + friction.csv + manifest.json under {}",
        manifest.record_files.len(),
        out_dir.display()
    );
    Ok(false)
}

pub fn cmd_spectrum(record_path: &Path, out: &Path, config: PipelineConfig) -> anyhow::Result<bool> {
    let record = fileio::read_record(record_path, &config.channel)?;
    let spectrum = fivtrack::compute_power_spectrum(&record, &config.psd())?;
    std::fs::write(out, report::spectrum_csv(&spectrum))
        .with_context(|| format!("writing {}", out.display()))?;
    println!(
        "wrote {} ({} bins, {:.4} Hz resolution)",
        out.display(),
        spectrum.len(),
        spectrum.resolution_hz()
    );
    Ok(false)
}
