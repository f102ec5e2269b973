use std::collections::BTreeMap;
use std::path::Path;

use rainbow_ttd::experiments::{run_experiment, Experiment};
use rainbow_ttd::impairments::{ImpairmentSpec, SweepAxis};
use rainbow_ttd::scenario::{rmse_of, Scenario, ScenarioConfig};
use rainbow_ttd::DelayModel;

fn read_csv(path: &Path) -> Vec<BTreeMap<String, String>> {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let headers = reader.headers().unwrap().clone();
    reader
        .records()
        .map(|r| headers.iter().map(String::from).zip(r.unwrap().iter().map(String::from)).collect())
        .collect()
}

fn headers(path: &Path) -> Vec<String> {
    csv::Reader::from_path(path).unwrap().headers().unwrap().iter().map(String::from).collect()
}

fn num(row: &BTreeMap<String, String>, key: &str) -> f64 {
    row[key].parse().unwrap()
}

fn configured(experiment: Experiment, dir: &Path, sets: &[&str]) -> ScenarioConfig {
    let mut cfg = experiment.default_config().unwrap();
    for s in sets {
        cfg.apply_override(s).unwrap();
    }
    cfg.output_dir = dir.to_path_buf();
    cfg
}

#[test]
fn shipped_configs_round_trip() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for entry in std::fs::read_dir(dir).unwrap() {
        let cfg = ScenarioConfig::load(&entry.unwrap().path()).unwrap();
        let again = ScenarioConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(again, cfg);
    }
}

#[test]
fn monte_carlo_configs_carry_the_reference_table() {
    for name in ["compare-sweeping.toml", "impairment-gain.toml", "distance-rmse.toml"] {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name);
        let cfg = ScenarioConfig::load(&path).unwrap();
        let s = Scenario::new(cfg.clone()).unwrap();
        assert_eq!((cfg.carrier_hz, cfg.bandwidth_hz), (60e9, 2e9));
        assert_eq!((s.ofdm.m_total, s.ofdm.loaded_count(), s.ofdm.cp_len), (4096, 128, 128));
        assert_eq!((s.tx.element_count(), s.rx.element_count()), (128, 16));
        assert_eq!((s.book.direction_count(), s.book.diversity), (32, 4));
        assert_eq!(s.dictionary.candidate_angles.len(), 1024);
        assert_eq!(cfg.trials, 500);
    }
}

#[test]
fn squint_summary_matches_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_experiment(Experiment::SquintError, &configured(Experiment::SquintError, dir.path(), &[])).unwrap();
    let rows = read_csv(&dir.path().join("squint_error.csv"));
    assert_eq!(headers(&dir.path().join("squint_error.csv")), ["fractional_bandwidth", "angle_deg", "max_error_deg"]);
    let peak = rows.iter().map(|r| num(r, "max_error_deg")).fold(0.0, f64::max);
    assert!(out.summary.contains(&format!("{peak:.3} deg")), "{}", out.summary);
}

#[test]
fn codebook_map_schema_and_structure() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(Experiment::CodebookMap, &configured(Experiment::CodebookMap, dir.path(), &[])).unwrap();
    let path = dir.path().join("codebook.csv");
    assert_eq!(headers(&path), ["subcarrier_index", "baseband_freq_hz", "angle_deg", "direction_group"]);
    let rows = read_csv(&path);
    assert_eq!(rows.len(), 16);
    let mut groups: Vec<u64> = rows.iter().map(|r| r["direction_group"].parse().unwrap()).collect();
    groups.sort();
    groups.dedup();
    assert_eq!(groups.len(), 16);
    let map = read_csv(&dir.path().join("gain_map.csv"));
    assert_eq!(map.len(), 16 * 721);
}

#[test]
fn papr_summary_matches_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configured(Experiment::PaprCcdf, dir.path(), &["experiment.papr_trials=500"]);
    let out = run_experiment(Experiment::PaprCcdf, &cfg).unwrap();
    let path = dir.path().join("papr_ccdf.csv");
    assert_eq!(headers(&path), ["papr_db", "ccdf", "constellation", "loaded_count"]);
    let rows = read_csv(&path);
    assert_eq!(rows.len(), 4 * 500);
    for (c, m) in [("qpsk", "128"), ("qpsk", "4096"), ("bpsk", "128")] {
        let at = rows
            .iter()
            .filter(|r| r["constellation"] == c && r["loaded_count"] == m)
            .find(|r| num(r, "ccdf") <= 1e-2)
            .map(|r| num(r, "papr_db"))
            .unwrap();
        assert!(out.summary.contains(&format!("M={m} {at:.3} dB")), "{}", out.summary);
    }
}

#[test]
fn sweep_csv_matches_library_and_zero_point_is_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configured(
        Experiment::ImpairmentSweep,
        dir.path(),
        &["trials=40", "experiment.sweep_grid=[0.0, 3.0]", "estimator.dictionary_size=256"],
    );
    let out = run_experiment(Experiment::ImpairmentSweep, &cfg).unwrap();
    let sweep = dir.path().join("sweep.csv");
    assert_eq!(headers(&sweep), ["sigma_value", "unit", "algorithm", "rmse_deg"]);
    let trials = dir.path().join("trials.csv");
    assert_eq!(
        headers(&trials),
        ["trial", "truth_deg", "coarse_deg", "refined_deg", "snr_db", "sigma_a", "sigma_p", "sigma_t"]
    );
    assert_eq!(read_csv(&trials).len(), 80);

    let scenario = Scenario::new(cfg.clone()).unwrap();
    let baseline = rmse_of(&scenario.run_trials(&ImpairmentSpec::default(), cfg.base_seed, 40).unwrap()).unwrap();
    let rows = read_csv(&sweep);
    assert_eq!(rows[0]["algorithm"], "coarse");
    assert_eq!(rows[0]["unit"], "dB");
    // bit-exact: the zero point reuses the unimpaired seeds
    assert_eq!(num(&rows[0], "rmse_deg"), baseline.0);
    assert_eq!(num(&rows[1], "rmse_deg"), baseline.1);
    assert!(out.summary.contains(&format!("coarse RMSE {:.4}", baseline.0)), "{}", out.summary);
}

#[test]
fn distance_and_comparison_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configured(
        Experiment::DistanceRmse,
        dir.path(),
        &["trials=20", "experiment.distances_m=[20.0, 300.0]", "estimator.dictionary_size=256"],
    );
    let out = run_experiment(Experiment::DistanceRmse, &cfg).unwrap();
    let rows = read_csv(&dir.path().join("distance_rmse.csv"));
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0]["detected_fraction"], "1");
    assert_eq!(rows[3]["detected_fraction"], "0");
    assert!(out.summary.contains("detection lost at 300 m"), "{}", out.summary);
    assert!(out.summary.contains("0 dB element SNR at 170.00 m"), "{}", out.summary);

    let dir = tempfile::tempdir().unwrap();
    let cfg = configured(Experiment::CompareSweeping, dir.path(), &["trials=20", "estimator.dictionary_size=256"]);
    run_experiment(Experiment::CompareSweeping, &cfg).unwrap();
    let rows = read_csv(&dir.path().join("compare_sweeping.csv"));
    let overhead: Vec<(&str, &str)> = rows.iter().map(|r| (r["method"].as_str(), r["overhead_symbols"].as_str())).collect();
    assert_eq!(overhead, [("paa_sweep", "32"), ("ttd_coarse", "1"), ("ttd_refined", "1")]);
}

#[test]
fn planar_contour_reports_insufficient_delay_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_experiment(Experiment::PlanarContour, &configured(Experiment::PlanarContour, dir.path(), &[])).unwrap();
    assert!(out.summary.contains("5.0000 ns vs 7.0000 ns"), "{}", out.summary);
    assert!(out.summary.contains("insufficient"));
    assert_eq!(read_csv(&dir.path().join("planar_peaks.csv")).len(), 10);
}

#[test]
fn seeds_change_monte_carlo_output() {
    let sets = ["trials=10", "experiment.sweep_grid=[1.0]", "estimator.dictionary_size=256"];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut cfg = configured(Experiment::ImpairmentSweep, a.path(), &sets);
    run_experiment(Experiment::ImpairmentSweep, &cfg).unwrap();
    cfg.output_dir = b.path().to_path_buf();
    cfg.base_seed += 1;
    run_experiment(Experiment::ImpairmentSweep, &cfg).unwrap();
    let read = |d: &Path| std::fs::read(d.join("trials.csv")).unwrap();
    assert_ne!(read(a.path()), read(b.path()));
}

#[test]
fn rf_and_baseband_delay_models_agree_at_the_carrier() {
    let mut cfg = ScenarioConfig::default();
    cfg.estimator.dictionary_size = 256;
    let scenario = Scenario::new(cfg).unwrap();
    let spec = SweepAxis::Delay.spec(5.0, DelayModel::Baseband);
    let bb = scenario.impaired_taps(&spec, 3).unwrap();
    let rf = scenario.impaired_taps(&SweepAxis::Delay.spec(5.0, DelayModel::Rf), 3).unwrap();
    assert_eq!(bb.delays_s, rf.delays_s);
    let fc = scenario.config.carrier_hz;
    let w_bb = rainbow_ttd::array::combiner_weights(&bb, fc, fc);
    let w_rf = rainbow_ttd::array::combiner_weights(&rf.clone().with_delay_model(DelayModel::Baseband), fc, fc);
    assert_eq!(w_bb, w_rf);
}
