//! End-to-end tests of the `fivtrack` binary: file formats, exit codes and
//! degenerate-case flags.

use std::path::Path;
use std::process::{Command, Output};

fn fivtrack() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fivtrack"))
}

fn run(command: &mut Command) -> Output {
    command.output().expect("spawn fivtrack")
}

fn assert_success(output: &Output) {
    assert!(
        output.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

fn json_file(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Small-but-complete scenario: 10 minutes, shorter records, stages split
/// near 6.4 minutes.
const SMALL_SCENARIO: &str = r#"
duration_minutes = 10.0
record_samples = 2560
fiv_envelope = { a_inf = 1.0, tau_minutes = 0.7 }
mu_trace = { mu0 = 0.129, mu_inf = 0.103, tau_minutes = 1.5 }
rng_seed = 11
"#;

fn synth_small(dir: &Path) -> std::path::PathBuf {
    let scenario = dir.join("scenario.toml");
    std::fs::write(&scenario, SMALL_SCENARIO).unwrap();
    let data = dir.join("data");
    let output = run(fivtrack()
        .arg("synth")
        .arg(&data)
        .arg("--scenario")
        .arg(&scenario)
        .args(["--squeal-freqs", "2325,2412,2381,2384,2425"]));
    assert_success(&output);
    data
}

#[test]
fn identify_reports_band_23_for_the_squeal_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_small(dir.path());
    let out = dir.path().join("identify.json");
    let output = run(fivtrack()
        .arg("identify")
        .arg(data.join("squeal"))
        .arg("--out")
        .arg(&out)
        .args(["--timestamp", "t0"]));
    assert_success(&output);

    let report = json_file(&out);
    assert_eq!(report["selected_band"]["index"], 23);
    let mean = report["mean_hz"].as_f64().unwrap();
    assert!((mean - 2385.4).abs() < 13.0, "mean {mean}");
    assert_eq!(report["per_record"].as_array().unwrap().len(), 5);
    assert_eq!(report["provenance"]["generated_at"], "t0");
}

#[test]
fn identify_single_file_returns_that_frequency() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let output = run(fivtrack()
        .arg("synth")
        .arg(&data)
        .args(["--squeal-freqs", "2385"]));
    assert_success(&output);
    // Trim the dataset down to the single squeal record.
    let out = dir.path().join("single.json");
    let output = run(fivtrack()
        .arg("identify")
        .arg(data.join("squeal"))
        .arg("--out")
        .arg(&out));
    assert_success(&output);
    let report = json_file(&out);
    let mean = report["mean_hz"].as_f64().unwrap();
    assert!((mean - 2385.0).abs() < 13.0, "mean {mean}");
    assert_eq!(report["spread_hz"], 0.0);
}

#[test]
fn identify_lists_bad_files_and_fails_when_all_are_bad() {
    let dir = tempfile::tempdir().unwrap();
    let squeal = dir.path().join("squeal");
    std::fs::create_dir_all(&squeal).unwrap();
    std::fs::write(squeal.join("broken.csv"), "# fs_hz=oops\n1\n").unwrap();
    let out = dir.path().join("identify.json");
    let output = run(fivtrack().arg("identify").arg(&squeal).arg("--out").arg(&out));
    assert_eq!(exit_code(&output), 2);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("broken.csv"), "stderr: {stderr}");
}

#[test]
fn analyze_full_pipeline_on_small_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_small(dir.path());
    let out = dir.path().join("analysis");
    let output = run(fivtrack()
        .arg("analyze")
        .arg(data.join("records"))
        .arg("--friction")
        .arg(data.join("friction.csv"))
        .arg("--squeal-dir")
        .arg(data.join("squeal"))
        .arg("--out")
        .arg(&out)
        .args(["--timestamp", "t0"]));
    assert_success(&output);

    let report = json_file(&out.join("report.json"));
    assert_eq!(report["selected_band"]["index"], 23);
    assert_eq!(report["flags"].as_array().unwrap().len(), 0);
    let boundary = report["segmentation"]["boundary_minutes"].as_f64().unwrap();
    // tau = 1.5 min with the default threshold crosses at 1.5*ln(0.026/0.000375).
    let expected = 1.5 * (0.026_f64 / (1.5 * 2.5e-4)).ln();
    assert!((boundary - expected).abs() < 0.5, "boundary {boundary}");
    let stages = report["trends"]["stages"].as_array().unwrap();
    assert_eq!(stages[0]["trend"], "rising");
    assert_eq!(stages[1]["trend"], "stable");

    // The band range always contains the reference frequency.
    let mean = report["reference"]["mean_hz"].as_f64().unwrap();
    assert!(report["selected_band"]["low_hz"].as_f64().unwrap() <= mean);
    assert!(mean < report["selected_band"]["high_hz"].as_f64().unwrap());

    // Plot-ready export exists and has one row per window plus header.
    let series = std::fs::read_to_string(out.join("rms_series.csv")).unwrap();
    let rows = series.lines().count();
    let windows = report["rms_series"]["rms_values"].as_array().unwrap().len();
    assert_eq!(rows, windows + 1);
}

#[test]
fn analyze_empty_directory_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("records");
    std::fs::create_dir_all(&records).unwrap();
    let output = run(fivtrack().arg("analyze").arg(&records));
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn analyze_without_friction_flags_and_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_small(dir.path());
    let out = dir.path().join("analysis");
    let output = run(fivtrack()
        .arg("analyze")
        .arg(data.join("records"))
        .arg("--squeal-dir")
        .arg(data.join("squeal"))
        .arg("--out")
        .arg(&out)
        .args(["--timestamp", "t0"]));
    assert_eq!(exit_code(&output), 3);
    let report = json_file(&out.join("report.json"));
    let flags = report["flags"].as_array().unwrap();
    assert!(
        flags.iter().any(|f| f.as_str().unwrap().contains("rms trend")),
        "flags: {flags:?}"
    );
    assert!(report["friction_fit"].is_null());
}

#[test]
fn analyze_reference_flag_replaces_squeal_records() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_small(dir.path());
    let out = dir.path().join("analysis");
    let output = run(fivtrack()
        .arg("analyze")
        .arg(data.join("records"))
        .arg("--friction")
        .arg(data.join("friction.csv"))
        .args(["--reference-hz", "2385"])
        .arg("--out")
        .arg(&out)
        .args(["--timestamp", "t0"]));
    assert_success(&output);
    let report = json_file(&out.join("report.json"));
    assert_eq!(report["reference"]["source"], "flag");
    assert_eq!(report["selected_band"]["index"], 23);
}

#[test]
fn analyze_rejects_mixed_sample_rates() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_small(dir.path());
    // Forge one record at a different rate.
    std::fs::write(
        data.join("records").join("record_9999.csv"),
        "# fs_hz=48000\n# t_capture_s=601\n0.5\n-0.5\n0.25\n-0.25\n",
    )
    .unwrap();
    let output = run(fivtrack()
        .arg("analyze")
        .arg(data.join("records"))
        .arg("--friction")
        .arg(data.join("friction.csv"))
        .args(["--reference-hz", "2385"]));
    assert_eq!(exit_code(&output), 2);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("mixed sample rates"), "stderr: {stderr}");
}

#[test]
fn analyze_is_invariant_under_input_scaling() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_small(dir.path());

    // Copy the dataset with every sample multiplied by 10.
    let scaled = dir.path().join("scaled-records");
    std::fs::create_dir_all(&scaled).unwrap();
    for entry in std::fs::read_dir(data.join("records")).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let rewritten: String = text
            .lines()
            .map(|line| {
                if line.starts_with('#') {
                    line.to_string()
                } else {
                    let value: f64 = line.trim().parse().unwrap();
                    format!("{}", value * 10.0)
                }
            })
            .collect::<Vec<_>>()
            .join("\n");
        std::fs::write(scaled.join(path.file_name().unwrap()), rewritten + "\n").unwrap();
    }

    let mut reports = Vec::new();
    for records in [data.join("records"), scaled] {
        let out = dir.path().join(format!(
            "analysis-{}",
            records.file_name().unwrap().to_string_lossy()
        ));
        let output = run(fivtrack()
            .arg("analyze")
            .arg(&records)
            .arg("--friction")
            .arg(data.join("friction.csv"))
            .args(["--reference-hz", "2385"])
            .arg("--out")
            .arg(&out)
            .args(["--timestamp", "t0"]));
        assert_success(&output);
        reports.push(json_file(&out.join("report.json")));
    }

    let stages_of = |report: &serde_json::Value| -> Vec<(String, String)> {
        report["trends"]["stages"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| {
                (
                    s["stage"].as_str().unwrap().to_string(),
                    s["trend"].as_str().unwrap().to_string(),
                )
            })
            .collect()
    };
    assert_eq!(stages_of(&reports[0]), stages_of(&reports[1]));
    assert_eq!(
        reports[0]["segmentation"]["boundary_minutes"],
        reports[1]["segmentation"]["boundary_minutes"]
    );
}

const TABLE_PARAMS: &str = "\
k = 1\n\
eta_pa_s = 0.139\n\
mu_m_s = 0.0333\n\
p_n = 100\n\
ra_m = 0.003\n\
rb_m = inf\n\
nu_a = 0.3\n\
nu_b = 0.269\n\
ea_pa = 208e9\n\
eb_pa = 209e9\n\
sigma1_um = 0.124\n\
sigma2_um = 0.547\n";

#[test]
fn lubrication_reports_boundary_regime() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("contact.params");
    std::fs::write(&params, TABLE_PARAMS).unwrap();
    let out = dir.path().join("lubrication.json");
    let output = run(fivtrack()
        .arg("lubrication")
        .arg(&params)
        .arg("--out")
        .arg(&out)
        .args(["--timestamp", "t0"]));
    assert_success(&output);
    let report = json_file(&out);
    assert_eq!(report["report"]["regime"], "boundary");
    let sigma = report["report"]["sigma_c_um"].as_f64().unwrap();
    assert!((sigma - 0.561).abs() < 0.001);
    assert_eq!(report["h_min_overridden"], false);
}

#[test]
fn lubrication_override_reproduces_reported_lambda() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("contact.params");
    // After-experiment roughness pair.
    let text = TABLE_PARAMS
        .replace("sigma1_um = 0.124", "sigma1_um = 0.554")
        .replace("sigma2_um = 0.547", "sigma2_um = 0.279");
    std::fs::write(&params, text).unwrap();
    let out = dir.path().join("lubrication.json");
    let output = run(fivtrack()
        .arg("lubrication")
        .arg(&params)
        .args(["--h-min-nm", "5.51"])
        .arg("--out")
        .arg(&out)
        .args(["--timestamp", "t0"]));
    assert_success(&output);
    let report = json_file(&out);
    let lambda = report["report"]["lambda_ratio"].as_f64().unwrap();
    assert!((lambda - 0.0089).abs() < 0.0002, "lambda {lambda}");
    assert_eq!(report["report"]["regime"], "boundary");
    assert_eq!(report["h_min_overridden"], true);
}

#[test]
fn lubrication_lambda_exactly_one_is_mixed() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("contact.params");
    // sigma_c = sqrt(0.3^2 + 0.4^2) = 0.5 um; h = 0.5 um forces lambda = 1.
    let text = TABLE_PARAMS
        .replace("sigma1_um = 0.124", "sigma1_um = 0.3")
        .replace("sigma2_um = 0.547", "sigma2_um = 0.4");
    std::fs::write(&params, text).unwrap();
    let output = run(fivtrack()
        .arg("lubrication")
        .arg(&params)
        .args(["--h-min-nm", "500"])
        .args(["--timestamp", "t0"]));
    assert_success(&output);
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("mixed"), "stdout: {stdout}");
}

#[test]
fn lubrication_enumerates_missing_keys() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("partial.params");
    std::fs::write(&params, "k = 1\nra_m = 0.003\n").unwrap();
    let output = run(fivtrack().arg("lubrication").arg(&params));
    assert_eq!(exit_code(&output), 2);
    let stderr = String::from_utf8_lossy(&output.stderr);
    for key in ["eta_pa_s", "mu_m_s", "p_n", "sigma1_um"] {
        assert!(stderr.contains(key), "missing `{key}` in: {stderr}");
    }
}

#[test]
fn synth_rejects_zero_duration() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("scenario.toml");
    std::fs::write(&scenario, "duration_minutes = 0.0\n").unwrap();
    let output = run(fivtrack()
        .arg("synth")
        .arg(dir.path().join("out"))
        .arg("--scenario")
        .arg(&scenario));
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn spectrum_export_peaks_at_the_tone() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_small(dir.path());
    let out = dir.path().join("spectrum.csv");
    let output = run(fivtrack()
        .arg("spectrum")
        .arg(data.join("squeal").join("squeal_00.csv"))
        .arg("--out")
        .arg(&out));
    assert_success(&output);

    let text = std::fs::read_to_string(&out).unwrap();
    let mut best = (0.0_f64, 0.0_f64);
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with("frequency") {
            continue;
        }
        let (f, p) = line.split_once(',').unwrap();
        let (f, p): (f64, f64) = (f.parse().unwrap(), p.parse().unwrap());
        if p > best.1 {
            best = (f, p);
        }
    }
    // squeal_00 carries the 2325 Hz tone.
    assert!((best.0 - 2325.0).abs() < 13.0, "peak at {} Hz", best.0);
}

#[test]
fn config_emission_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(fivtrack().arg("config").args(["--hwpt-level", "6"]));
    assert_success(&output);
    let emitted = String::from_utf8(output.stdout).unwrap();
    assert!(emitted.contains("hwpt_level = 6"));

    let config_path = dir.path().join("pipeline.toml");
    std::fs::write(&config_path, &emitted).unwrap();
    let output = run(fivtrack().arg("config").arg("--config").arg(&config_path));
    assert_success(&output);
    let re_emitted = String::from_utf8(output.stdout).unwrap();
    assert_eq!(emitted, re_emitted);
}
