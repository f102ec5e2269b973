//! Closed-form squint error and PS gain-versus-frequency curves.

use super::output::{check, write_plot_script, CsvTable, Field};
use super::{Experiment, ExperimentOutput};
use crate::error::{Error, Result};
use crate::scenario::ScenarioConfig;
use crate::squint::{fractional_bandwidth_3db, gain_vs_frequency_curve, max_angular_error, measure_3db_width};

/// Points of the adaptive grid used to locate the −3 dB crossings.
const WIDTH_GRID_POINTS: usize = 8001;

pub(super) fn squint_error(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    let ex = &cfg.experiment;
    if ex.squint_fbws.is_empty() {
        return Err(Error::config("experiment.squint_fbws is empty"));
    }
    if !(ex.squint_angle_step_deg > 0.0) {
        return Err(Error::config("experiment.squint_angle_step_deg must be positive"));
    }
    let steps = (60.0 / ex.squint_angle_step_deg).round() as usize;
    let dir = &cfg.output_dir;
    let mut table = CsvTable::create(dir, "squint_error.csv", &["fractional_bandwidth", "angle_deg", "max_error_deg"])?;
    let mut peak = (0.0, 0.0, 0.0);
    for &fbw in &ex.squint_fbws {
        for k in 0..=steps {
            let angle_deg = (k as f64 * ex.squint_angle_step_deg).min(60.0);
            let err = max_angular_error(angle_deg.to_radians(), fbw)?.to_degrees();
            check(err.is_finite() && err >= 0.0, || format!("squint error {err} at {angle_deg} deg"))?;
            table.row(&[Field::F(fbw), Field::F(angle_deg), Field::F(err)])?;
            if err > peak.2 {
                peak = (fbw, angle_deg, err);
            }
        }
    }
    let csv = table.finish()?;
    let plot = write_plot_script(
        dir,
        "plot_squint_error.py",
        r#"rows = read("squint_error.csv")
curves = defaultdict(list)
for r in rows:
    curves[float(r["fractional_bandwidth"])].append((float(r["angle_deg"]), float(r["max_error_deg"])))
for fbw, pts in sorted(curves.items()):
    plt.plot(*zip(*pts), label=f"FBW = {fbw:g}")
plt.xlabel("actual AoA [deg]")
plt.ylabel("maximum angular error [deg]")
plt.grid(True)
plt.legend()
plt.savefig(os.path.join(HERE, "squint_error.png"), dpi=150)
"#,
    )?;
    Ok(ExperimentOutput {
        experiment: Experiment::SquintError,
        files: vec![csv, plot],
        summary: format!(
            "squint-error: peak max error {:.3} deg at AoA {} deg for fractional bandwidth {}",
            peak.2, peak.1, peak.0
        ),
    })
}

/// Numerically measured 3-dB fractional width of `G(f)/N` against the
/// large-N closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthCheck {
    pub elements: usize,
    pub angle_deg: f64,
    pub measured: f64,
    pub formula: f64,
}

impl WidthCheck {
    pub fn relative_error(&self) -> f64 {
        (self.measured - self.formula).abs() / self.formula
    }
}

/// Measure on a grid spanning three closed-form widths around the carrier.
pub fn measure_fbw(elements: usize, angle_deg: f64) -> Result<WidthCheck> {
    let angle = angle_deg.to_radians();
    let formula = fractional_bandwidth_3db(elements, angle)?;
    let half = (1.5 * formula).min(0.95);
    let freqs: Vec<f64> = (0..WIDTH_GRID_POINTS)
        .map(|k| 1.0 - half + 2.0 * half * k as f64 / (WIDTH_GRID_POINTS - 1) as f64)
        .collect();
    let gains = gain_vs_frequency_curve(elements, angle, &freqs)?;
    let measured = measure_3db_width(&freqs, &gains).ok_or_else(|| {
        Error::domain(format!("no 3-dB crossing for N = {elements} at {angle_deg} deg"))
    })?;
    Ok(WidthCheck { elements, angle_deg, measured, formula })
}

pub(super) fn gain_vs_freq(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    let ex = &cfg.experiment;
    if ex.gain_curve_elements.is_empty() || ex.gain_curve_points < 2 {
        return Err(Error::config("gain curve needs elements and at least two points"));
    }
    if !(ex.gain_curve_span > 0.0 && ex.gain_curve_span < 2.0) {
        return Err(Error::config("experiment.gain_curve_span must lie in (0, 2)"));
    }
    let dir = &cfg.output_dir;
    let n_points = ex.gain_curve_points;
    let freqs: Vec<f64> = (0..n_points)
        .map(|k| 1.0 - ex.gain_curve_span / 2.0 + ex.gain_curve_span * k as f64 / (n_points - 1) as f64)
        .collect();
    let mut curves = CsvTable::create(dir, "gain_vs_freq.csv", &["elements", "normalized_freq", "gain_db"])?;
    for &n in &ex.gain_curve_elements {
        let gains = gain_vs_frequency_curve(n, ex.gain_curve_angle_deg.to_radians(), &freqs)?;
        for (f, g) in freqs.iter().zip(&gains) {
            check(*g <= 1.0 + 1e-9, || format!("normalized gain {g} above 1"))?;
            curves.row(&[Field::U(n as u64), Field::F(*f), Field::F(20.0 * g.log10())])?;
        }
    }
    let curves = curves.finish()?;

    let mut widths = CsvTable::create(
        dir,
        "fbw_3db.csv",
        &["elements", "angle_deg", "measured_fbw", "formula_fbw", "relative_error"],
    )?;
    let mut worst: Option<WidthCheck> = None;
    for &n in &ex.gain_curve_elements {
        for &angle in &ex.fbw_angles_deg {
            let w = measure_fbw(n, angle)?;
            widths.row(&[
                Field::U(n as u64),
                Field::F(angle),
                Field::F(w.measured),
                Field::F(w.formula),
                Field::F(w.relative_error()),
            ])?;
            if worst.is_none_or(|b| w.relative_error() > b.relative_error()) {
                worst = Some(w);
            }
        }
    }
    let widths = widths.finish()?;
    let plot = write_plot_script(
        dir,
        "plot_gain_vs_freq.py",
        r#"rows = read("gain_vs_freq.csv")
curves = defaultdict(list)
for r in rows:
    curves[int(r["elements"])].append((float(r["normalized_freq"]), float(r["gain_db"])))
for n, pts in sorted(curves.items()):
    plt.plot(*zip(*pts), label=f"N = {n}")
plt.axhline(-3.0, color="k", linestyle=":")
plt.ylim(-30, 1)
plt.xlabel("f / fc")
plt.ylabel("normalized gain [dB]")
plt.grid(True)
plt.legend()
plt.savefig(os.path.join(HERE, "gain_vs_freq.png"), dpi=150)
"#,
    )?;
    let summary = match worst {
        Some(w) => format!(
            "gain-vs-freq: worst 3-dB width deviation from 1.772/(N|sin|) is {:.3}% (N = {}, {} deg)",
            100.0 * w.relative_error(),
            w.elements,
            w.angle_deg
        ),
        None => "gain-vs-freq: no width checks configured".to_string(),
    };
    Ok(ExperimentOutput {
        experiment: Experiment::GainVsFreq,
        files: vec![curves, widths, plot],
        summary,
    })
}
