//! Rainbow beams of a 4 x 2 planar TTD array and whether its delay range
//! can cover the hemisphere.
//!
//! `cargo run --release --example planar_contour`

use rainbow_ttd::array::ResponseModel;
use rainbow_ttd::codebook::{build_planar_taps, planar_beam_contour, HemisphereGrid, PlanarRainbowConfig};
use rainbow_ttd::ArrayGeometry;

fn main() -> rainbow_ttd::Result<()> {
    let (fc, bw) = (60e9, 2e9);
    let cfg = PlanarRainbowConfig::from_bandwidth_multiples(4, 2, 1.0, 7.0, 10, bw);
    let report = cfg.delay_range_report(bw);
    println!(
        "max delay {:.2} ns, full coverage needs {:.2} ns -> {}",
        report.max_delay_s * 1e9,
        report.required_s * 1e9,
        if report.sufficient { "sufficient" } else { "insufficient" }
    );

    let geometry = ArrayGeometry::planar(4, 2, fc)?;
    let taps = build_planar_taps(&cfg)?;
    for (k, fb) in cfg.subcarrier_freqs(bw).into_iter().enumerate() {
        let c = planar_beam_contour(&taps, &geometry, fc + fb, 3.0, HemisphereGrid::default(), ResponseModel::FrequencyFlat)?;
        println!(
            "beam {k}: {:>7.1} MHz peak at theta {:>5.1} phi {:>6.1} deg, {} cells within 3 dB",
            fb / 1e6,
            c.peak_direction.0.to_degrees(),
            c.peak_direction.1.to_degrees(),
            c.cells.len()
        );
    }
    Ok(())
}
