//! Worst-case pointing error of a phased array across a wide band.
//!
//! `cargo run --example squint_error`

use rainbow_ttd::squint::{band_edge_report, max_angular_error, squint_report};

fn main() -> rainbow_ttd::Result<()> {
    let fbws = [0.05, 0.1, 0.25];
    println!("{:>9} {}", "AoA [deg]", fbws.map(|f| format!("{:>10}", format!("fbw {f}"))).join(""));
    for deg in (0..=60).step_by(10) {
        let theta = (deg as f64).to_radians();
        let errs: Vec<String> = fbws
            .iter()
            .map(|&f| max_angular_error(theta, f).map(|e| format!("{:>10.3}", e.to_degrees())))
            .collect::<Result<_, _>>()?;
        println!("{deg:>9} {}", errs.join(""));
    }

    // a 60 GHz array steered to 45 deg, seen at 59 GHz
    let r = squint_report(45f64.to_radians(), 59e9, 60e9)?;
    println!(
        "\n45 deg at 59 GHz actually points to {:.3} deg (error {:.3} deg)",
        r.actual_angle_rad.to_degrees(),
        r.error_rad.to_degrees()
    );
    let edge = band_edge_report(70f64.to_radians(), 0.25)?;
    println!(
        "70 deg at the lower edge of a 25% band: clipped = {}, beyond plotted range = {}",
        edge.clipped, edge.beyond_plotted_range
    );
    Ok(())
}
