//! Hardware impairment sensitivity sweeps.

use super::output::{check, write_plot_script, CsvTable, Field};
use super::{Experiment, ExperimentOutput};
use crate::error::{Error, Result};
use crate::impairments::{sensitivity_sweep, SweepAxis};
use crate::scenario::{Scenario, ScenarioConfig};

pub(super) fn impairment_sweep(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    let axis: SweepAxis = cfg.experiment.sweep_axis.parse()?;
    let grid = &cfg.experiment.sweep_grid;
    if grid.is_empty() {
        return Err(Error::config("experiment.sweep_grid is empty"));
    }
    if grid.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
        return Err(Error::config("sweep grid values must be finite and >= 0"));
    }
    let scenario = Scenario::new(cfg.clone())?;
    let snr_db = 10.0 * scenario.element_snr()?.log10();
    let rows = sensitivity_sweep(&scenario, axis, grid, cfg.trials, cfg.base_seed)?;
    let dir = &cfg.output_dir;

    let mut sweep = CsvTable::create(dir, "sweep.csv", &["sigma_value", "unit", "algorithm", "rmse_deg"])?;
    let mut trials = CsvTable::create(
        dir,
        "trials.csv",
        &["trial", "truth_deg", "coarse_deg", "refined_deg", "snr_db", "sigma_a", "sigma_p", "sigma_t"],
    )?;
    for row in &rows {
        check(row.coarse_rmse_deg.is_finite() && row.refined_rmse_deg.is_finite(), || {
            format!("non-finite RMSE at {} {}", row.grid_value, axis.unit())
        })?;
        sweep.row(&[Field::F(row.grid_value), Field::S(axis.unit()), Field::S("coarse"), Field::F(row.coarse_rmse_deg)])?;
        sweep.row(&[Field::F(row.grid_value), Field::S(axis.unit()), Field::S("refined"), Field::F(row.refined_rmse_deg)])?;
        let spec = axis.spec(row.grid_value, cfg.impairments.delay_model);
        for r in &row.records {
            trials.row(&[
                Field::U(r.trial as u64),
                Field::F(r.truth_rad.to_degrees()),
                Field::F(r.coarse_rad.to_degrees()),
                Field::F(r.refined_rad.to_degrees()),
                Field::F(snr_db),
                Field::F(spec.sigma_gain_db),
                Field::F(spec.sigma_phase_rad.to_degrees()),
                Field::F(spec.sigma_delay_s * 1e12),
            ])?;
        }
    }
    let sweep = sweep.finish()?;
    let trials = trials.finish()?;
    let plot = write_plot_script(
        dir,
        "plot_impairment_sweep.py",
        r#"rows = read("sweep.csv")
curves = defaultdict(list)
unit = rows[0]["unit"]
for r in rows:
    curves[r["algorithm"]].append((float(r["sigma_value"]), float(r["rmse_deg"])))
for name, pts in sorted(curves.items()):
    plt.semilogy(*zip(*pts), marker="o", label=name)
plt.xlabel(f"error standard deviation [{unit}]")
plt.ylabel("RMSE of AoA estimation [deg]")
plt.grid(True, which="both")
plt.legend()
plt.savefig(os.path.join(HERE, "impairment_sweep.png"), dpi=150)
"#,
    )?;
    let first = &rows[0];
    let last = &rows[rows.len() - 1];
    Ok(ExperimentOutput {
        experiment: Experiment::ImpairmentSweep,
        files: vec![sweep, trials, plot],
        summary: format!(
            "impairment-sweep ({axis}, {:?} delays): coarse RMSE {:.4} -> {:.4} deg, refined RMSE {:.4} -> {:.4} deg for sigma {} -> {} {}",
            cfg.impairments.delay_model,
            first.coarse_rmse_deg,
            last.coarse_rmse_deg,
            first.refined_rmse_deg,
            last.refined_rmse_deg,
            first.grid_value,
            last.grid_value,
            axis.unit()
        ),
    })
}
