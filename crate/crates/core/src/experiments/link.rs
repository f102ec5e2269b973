//! RMSE against distance and the paired comparison with exhaustive PAA
//! beam sweeping.

use super::output::{check, write_plot_script, CsvTable, Field};
use super::{Experiment, ExperimentOutput};
use crate::channel::PathLossModel;
use crate::error::{Error, Result};
use crate::scenario::{paa_rmse, rmse_of, Scenario, ScenarioConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub method: &'static str,
    /// OFDM symbols spent on training.
    pub overhead_symbols: usize,
    pub rmse_deg: f64,
}

/// TTD single-symbol training and exhaustive PAA sweeping over the same
/// angle and channel draws.
pub fn compare_sweeping(scenario: &Scenario, trials: usize, seed: u64) -> Result<Vec<ComparisonRow>> {
    let spec = scenario.config.impairments.spec();
    let ttd = scenario.run_trials(&spec, seed, trials)?;
    let paa = scenario.run_paa_trials(seed, trials)?;
    check(ttd.iter().zip(&paa).all(|(t, p)| t.truth_rad == p.truth_rad), || {
        "TTD and PAA runs did not share their draws".into()
    })?;
    let (coarse, refined) = rmse_of(&ttd)?;
    Ok(vec![
        ComparisonRow { method: "paa_sweep", overhead_symbols: scenario.book.direction_count(), rmse_deg: paa_rmse(&paa)? },
        ComparisonRow { method: "ttd_coarse", overhead_symbols: 1, rmse_deg: coarse },
        ComparisonRow { method: "ttd_refined", overhead_symbols: 1, rmse_deg: refined },
    ])
}

pub(super) fn compare_experiment(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    let scenario = Scenario::new(cfg.clone())?;
    let rows = compare_sweeping(&scenario, cfg.trials, cfg.base_seed)?;
    let dir = &cfg.output_dir;
    let mut table = CsvTable::create(dir, "compare_sweeping.csv", &["method", "overhead_symbols", "rmse_deg"])?;
    for r in &rows {
        table.row(&[Field::S(r.method), Field::U(r.overhead_symbols as u64), Field::F(r.rmse_deg)])?;
    }
    let csv = table.finish()?;
    let plot = write_plot_script(
        dir,
        "plot_compare_sweeping.py",
        r#"rows = read("compare_sweeping.csv")
labels = [f'{r["method"]}\n({r["overhead_symbols"]} symbols)' for r in rows]
plt.bar(labels, [float(r["rmse_deg"]) for r in rows])
plt.ylabel("RMSE of AoA estimation [deg]")
plt.savefig(os.path.join(HERE, "compare_sweeping.png"), dpi=150)
"#,
    )?;
    let parts: Vec<String> = rows
        .iter()
        .map(|r| format!("{} {} symbol(s) RMSE {:.4} deg", r.method, r.overhead_symbols, r.rmse_deg))
        .collect();
    Ok(ExperimentOutput {
        experiment: Experiment::CompareSweeping,
        files: vec![csv, plot],
        summary: format!("compare-sweeping: {}", parts.join("; ")),
    })
}

/// Distance at which the per-element SNR of `scenario` crosses 0 dB, i.e.
/// where total post-combining signal and noise power are equal on average.
pub fn analytic_cutoff_m(scenario: &Scenario) -> Result<f64> {
    let exponent = match scenario.config.link.path_loss {
        PathLossModel::FreeSpace => 2.0,
        PathLossModel::LogDistance { exponent, .. } => exponent,
    };
    let snr_at_1m = 10.0 * scenario.at_distance(1.0)?.element_snr()?.log10();
    Ok(10f64.powf(snr_at_1m / (10.0 * exponent)))
}

pub(super) fn distance_experiment(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    let distances = &cfg.experiment.distances_m;
    if distances.is_empty() || distances.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::config("experiment.distances_m must be non-empty and positive"));
    }
    let base = Scenario::new(cfg.clone())?;
    let spec = cfg.impairments.spec();
    let dir = &cfg.output_dir;
    let mut table = CsvTable::create(
        dir,
        "distance_rmse.csv",
        &["distance_m", "element_snr_db", "algorithm", "rmse_deg", "detected_fraction"],
    )?;
    let mut cutoff = None;
    let mut first_rmse = None;
    for &d in distances {
        let scenario = base.at_distance(d)?;
        let snr_db = 10.0 * scenario.element_snr()?.log10();
        let ttd = scenario.run_trials(&spec, cfg.base_seed, cfg.trials)?;
        let paa = scenario.run_paa_trials(cfg.base_seed, cfg.trials)?;
        let (coarse, refined) = rmse_of(&ttd)?;
        let paa = paa_rmse(&paa)?;
        let detected = ttd.iter().filter(|r| r.detectable()).count() as f64 / ttd.len() as f64;
        table.row(&[Field::F(d), Field::F(snr_db), Field::S("ttd_coarse"), Field::F(coarse), Field::F(detected)])?;
        table.row(&[Field::F(d), Field::F(snr_db), Field::S("ttd_refined"), Field::F(refined), Field::F(detected)])?;
        table.row(&[Field::F(d), Field::F(snr_db), Field::S("paa_sweep"), Field::F(paa), Field::S("")])?;
        if cutoff.is_none() && detected < 0.5 {
            cutoff = Some(d);
        }
        first_rmse.get_or_insert((d, coarse, refined, paa));
    }
    let csv = table.finish()?;
    let plot = write_plot_script(
        dir,
        "plot_distance_rmse.py",
        r#"rows = read("distance_rmse.csv")
curves = defaultdict(list)
for r in rows:
    curves[r["algorithm"]].append((float(r["distance_m"]), float(r["rmse_deg"])))
for name, pts in sorted(curves.items()):
    plt.semilogy(*zip(*pts), marker="o", label=name)
lost = [float(r["distance_m"]) for r in rows
        if r["algorithm"] == "ttd_coarse" and float(r["detected_fraction"]) < 0.5]
if lost:
    plt.axvline(min(lost), color="k", linestyle=":", label="TTD detection lost")
plt.xlabel("distance [m]")
plt.ylabel("RMSE of AoA estimation [deg]")
plt.grid(True, which="both")
plt.legend()
plt.savefig(os.path.join(HERE, "distance_rmse.png"), dpi=150)
"#,
    )?;
    let (d0, c0, r0, p0) = first_rmse.expect("distances are non-empty");
    let cutoff_text = match cutoff {
        Some(d) => format!("{d} m"),
        None => "beyond the grid".into(),
    };
    Ok(ExperimentOutput {
        experiment: Experiment::DistanceRmse,
        files: vec![csv, plot],
        summary: format!(
            "distance-rmse: TTD detection lost at {cutoff_text} (0 dB element SNR at {:.2} m); at {d0} m RMSE coarse {c0:.4}, refined {r0:.4}, PAA {p0:.4} deg",
            analytic_cutoff_m(&base)?
        ),
    })
}
