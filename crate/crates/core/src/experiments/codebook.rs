//! Rainbow codebook frequency-angle maps and planar rainbow contours.

use super::output::{check, write_plot_script, CsvTable, Field};
use super::{Experiment, ExperimentOutput};
use crate::array::ArrayGeometry;
use crate::codebook::{
    build_planar_taps, build_rainbow_taps, gain_map, planar_beam_contour, HemisphereGrid, PlanarRainbowConfig,
    RainbowCodebook,
};
use crate::error::{Error, Result};
use crate::scenario::ScenarioConfig;

pub fn codebook_from_config(cfg: &ScenarioConfig) -> Result<(ArrayGeometry, RainbowCodebook)> {
    let geometry = cfg.rx_geometry()?;
    let book = build_rainbow_taps(
        geometry.element_count(),
        cfg.carrier_hz,
        cfg.codebook.diversity,
        cfg.codebook.rotation_deg.to_radians(),
        &cfg.ofdm_spec()?,
    )?;
    Ok((geometry, book))
}

pub(super) fn codebook_map(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    let (geometry, book) = codebook_from_config(cfg)?;
    let dir = &cfg.output_dir;
    let points = cfg.experiment.map_angle_points;
    if points < 2 {
        return Err(Error::config("experiment.map_angle_points must be at least 2"));
    }

    let mut table = CsvTable::create(
        dir,
        "codebook.csv",
        &["subcarrier_index", "baseband_freq_hz", "angle_deg", "direction_group"],
    )?;
    for (m, sc) in book.subcarriers.iter().enumerate() {
        table.row(&[
            Field::U(m as u64),
            Field::F(sc.baseband_freq_hz),
            Field::F(book.subcarrier_angle(m).to_degrees()),
            Field::U(sc.direction as u64),
        ])?;
    }
    let codebook_csv = table.finish()?;
    for g in &book.directions {
        check(g.subcarriers.len() == book.diversity, || {
            format!("direction group with {} subcarriers, expected {}", g.subcarriers.len(), book.diversity)
        })?;
    }

    let angles: Vec<f64> = (0..points)
        .map(|k| (-90.0 + 180.0 * k as f64 / (points - 1) as f64).to_radians())
        .collect();
    let map = gain_map(&book, &geometry, &angles, cfg.channel.response)?;
    let n = geometry.element_count() as f64;
    let mut table = CsvTable::create(
        dir,
        "gain_map.csv",
        &["subcarrier_index", "baseband_freq_hz", "angle_deg", "gain_db"],
    )?;
    for (m, row) in map.iter().enumerate() {
        for (theta, g) in angles.iter().zip(row) {
            check(*g <= n * (1.0 + 1e-9), || format!("gain {g} above array size {n}"))?;
            table.row(&[
                Field::U(m as u64),
                Field::F(book.subcarriers[m].baseband_freq_hz),
                Field::F(theta.to_degrees()),
                Field::F(20.0 * (g / n).max(1e-12).log10()),
            ])?;
        }
    }
    let map_csv = table.finish()?;
    let plot = write_plot_script(
        dir,
        "plot_codebook_map.py",
        r#"rows = read("gain_map.csv")
freqs = sorted({float(r["baseband_freq_hz"]) for r in rows})
angles = sorted({float(r["angle_deg"]) for r in rows})
fi = {f: i for i, f in enumerate(freqs)}
ai = {a: i for i, a in enumerate(angles)}
grid = [[0.0] * len(angles) for _ in freqs]
for r in rows:
    grid[fi[float(r["baseband_freq_hz"])]][ai[float(r["angle_deg"])]] = max(float(r["gain_db"]), -30.0)
plt.imshow(grid, aspect="auto", origin="lower",
           extent=[angles[0], angles[-1], freqs[0] / 1e9, freqs[-1] / 1e9])
plt.colorbar(label="normalized gain [dB]")
beams = read("codebook.csv")
plt.scatter([float(b["angle_deg"]) for b in beams],
            [float(b["baseband_freq_hz"]) / 1e9 for b in beams], s=6, c="w")
plt.xlabel("angle [deg]")
plt.ylabel("baseband frequency [GHz]")
plt.savefig(os.path.join(HERE, "codebook_map.png"), dpi=150)
"#,
    )?;
    Ok(ExperimentOutput {
        experiment: Experiment::CodebookMap,
        files: vec![codebook_csv, map_csv, plot],
        summary: format!(
            "codebook-map: N_R = {}, R = {}, D = {} directions over M = {} subcarriers, delay step {:.4} ns, max delay {:.4} ns",
            book.element_count(),
            book.diversity,
            book.direction_count(),
            book.subcarrier_count(),
            book.delta_tau_s * 1e9,
            book.max_delay_s() * 1e9
        ),
    })
}

pub(super) fn planar_contour(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    let ex = &cfg.experiment;
    let planar = PlanarRainbowConfig::from_bandwidth_multiples(
        ex.planar_nx,
        ex.planar_ny,
        ex.planar_steps_x,
        ex.planar_steps_y,
        ex.planar_subcarriers,
        cfg.bandwidth_hz,
    );
    if planar.subcarrier_count == 0 {
        return Err(Error::config("experiment.planar_subcarriers must be positive"));
    }
    let geometry = ArrayGeometry::planar(ex.planar_nx, ex.planar_ny, cfg.carrier_hz)?;
    let taps = build_planar_taps(&planar)?;
    let report = planar.delay_range_report(cfg.bandwidth_hz);
    let dir = &cfg.output_dir;

    let mut cells = CsvTable::create(
        dir,
        "planar_contour.csv",
        &["subcarrier_index", "baseband_freq_hz", "theta_deg", "phi_deg"],
    )?;
    let mut peaks = CsvTable::create(
        dir,
        "planar_peaks.csv",
        &["subcarrier_index", "baseband_freq_hz", "peak_theta_deg", "peak_phi_deg", "peak_gain"],
    )?;
    for (k, fb) in planar.subcarrier_freqs(cfg.bandwidth_hz).into_iter().enumerate() {
        let contour = planar_beam_contour(
            &taps,
            &geometry,
            cfg.carrier_hz + fb,
            ex.planar_level_db,
            HemisphereGrid::default(),
            cfg.channel.response,
        )?;
        for (theta, phi) in &contour.cells {
            cells.row(&[Field::U(k as u64), Field::F(fb), Field::F(theta.to_degrees()), Field::F(phi.to_degrees())])?;
        }
        peaks.row(&[
            Field::U(k as u64),
            Field::F(fb),
            Field::F(contour.peak_direction.0.to_degrees()),
            Field::F(contour.peak_direction.1.to_degrees()),
            Field::F(contour.peak_gain),
        ])?;
    }
    let cells = cells.finish()?;
    let peaks = peaks.finish()?;
    let plot = write_plot_script(
        dir,
        "plot_planar_contour.py",
        r#"import math

rows = read("planar_contour.csv")
beams = defaultdict(list)
for r in rows:
    t, p = math.radians(float(r["theta_deg"])), math.radians(float(r["phi_deg"]))
    beams[int(r["subcarrier_index"])].append((math.sin(t) * math.cos(p), math.sin(t) * math.sin(p)))
for k, pts in sorted(beams.items()):
    plt.scatter(*zip(*pts), s=2, label=f"subcarrier {k}")
plt.gca().add_patch(plt.Circle((0, 0), 1, fill=False))
plt.gca().set_aspect("equal")
plt.xlabel("u = sin(theta) cos(phi)")
plt.ylabel("v = sin(theta) sin(phi)")
plt.legend(markerscale=4, fontsize="small")
plt.savefig(os.path.join(HERE, "planar_contour.png"), dpi=150)
"#,
    )?;
    Ok(ExperimentOutput {
        experiment: Experiment::PlanarContour,
        files: vec![cells, peaks, plot],
        summary: format!(
            "planar-contour: {}x{} array, {} beams, max delay {:.4} ns vs {:.4} ns needed for full coverage ({})",
            ex.planar_nx,
            ex.planar_ny,
            planar.subcarrier_count,
            report.max_delay_s * 1e9,
            report.required_s * 1e9,
            if report.sufficient { "sufficient" } else { "insufficient" }
        ),
    })
}
